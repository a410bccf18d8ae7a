#include "iflab/config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace iflab {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known,
                    const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw std::invalid_argument("parse_config: unknown key '" + where +
                                        it.key() + "'");
}

double num(const json& j, const std::string& key) {
    if (!j.at(key).is_number())
        throw std::invalid_argument("parse_config: key '" + key + "' must be a number");
    return j.at(key).get<double>();
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("parse_config: ") + e.what());
    }
    reject_unknown(j, {"gamma", "epsilon", "eps_sequence", "delta", "ramp", "dim",
                       "geometry", "R", "h", "wide_stencil", "boundary", "solver",
                       "analysis", "out", "threads", "sweep_gammas"},
                   "");

    RunConfig c;
    c.gamma = num(j, "gamma");
    if (j.contains("epsilon") && j.contains("eps_sequence"))
        throw std::invalid_argument("parse_config: give either 'epsilon' or "
                                    "'eps_sequence', not both");
    if (j.contains("eps_sequence")) {
        for (const auto& e : j.at("eps_sequence")) c.eps_sequence.push_back(e.get<double>());
        if (c.eps_sequence.empty())
            throw std::invalid_argument("parse_config: 'eps_sequence' is empty");
    } else if (j.contains("epsilon")) {
        c.eps_sequence = {num(j, "epsilon")};
    } else {
        throw std::invalid_argument("parse_config: missing 'epsilon' or 'eps_sequence'");
    }
    if (j.contains("delta")) c.delta = num(j, "delta");
    if (j.contains("ramp")) {
        const std::string r = j.at("ramp").get<std::string>();
        if (r == "linear") c.ramp = RampKind::Linear;
        else if (r == "smoothstep") c.ramp = RampKind::Smoothstep;
        else throw std::invalid_argument("parse_config: ramp must be 'linear' or "
                                         "'smoothstep', got '" + r + "'");
    }
    if (j.contains("dim")) c.dim = j.at("dim").get<int>();
    if (c.dim != 1 && c.dim != 2)
        throw std::invalid_argument("parse_config: dim must be 1 or 2");
    if (j.contains("geometry")) {
        const std::string ge = j.at("geometry").get<std::string>();
        if (ge == "box") c.geometry = Geometry::Box;
        else if (ge == "disk") c.geometry = Geometry::Disk;
        else throw std::invalid_argument("parse_config: geometry must be 'box' or "
                                         "'disk', got '" + ge + "'");
    }
    c.R = j.contains("R") ? num(j, "R") : 1.0;
    c.h = num(j, "h");
    if (j.contains("wide_stencil")) c.wide_stencil = j.at("wide_stencil").get<bool>();

    if (j.contains("boundary")) {
        const json& b = j.at("boundary");
        reject_unknown(b, {"kind", "value", "x0", "values"}, "boundary.");
        const std::string kind = b.at("kind").get<std::string>();
        if (kind == "radial_compat") {
            c.boundary.kind = BoundarySpec::Kind::RadialCompat;
        } else if (kind == "constant") {
            c.boundary.kind = BoundarySpec::Kind::Constant;
            c.boundary.value = num(b, "value");
            if (c.boundary.value < 0.0)
                throw std::invalid_argument("parse_config: boundary.value must be >= 0");
        } else if (kind == "profile_x") {
            c.boundary.kind = BoundarySpec::Kind::ProfileX;
            c.boundary.x0 = b.contains("x0") ? num(b, "x0") : 0.0;
        } else if (kind == "tabulated") {
            c.boundary.kind = BoundarySpec::Kind::Tabulated;
            for (const auto& v : b.at("values"))
                c.boundary.table.push_back(v.get<double>());
        } else {
            throw std::invalid_argument("parse_config: boundary.kind '" + kind +
                                        "' is not one of radial_compat|constant|"
                                        "profile_x|tabulated");
        }
    }

    if (j.contains("solver")) {
        const json& s = j.at("solver");
        reject_unknown(s, {"tol", "max_iters", "damping_safety", "log_every", "band_tol"},
                       "solver.");
        if (s.contains("tol")) c.solver.tol = num(s, "tol");
        if (s.contains("max_iters")) c.solver.max_iters = s.at("max_iters").get<long>();
        if (s.contains("damping_safety"))
            c.solver.damping_safety = num(s, "damping_safety");
        if (s.contains("log_every")) c.solver.log_every = s.at("log_every").get<long>();
        if (s.contains("band_tol")) c.solver.band_tol = num(s, "band_tol");
        if (!(c.solver.tol > 0.0))
            throw std::invalid_argument("parse_config: solver.tol must be > 0");
        if (!(c.solver.damping_safety > 0.0 && c.solver.damping_safety <= 1.0))
            throw std::invalid_argument("parse_config: solver.damping_safety must be "
                                        "in (0,1]");
    }

    if (j.contains("analysis")) {
        const json& a = j.at("analysis");
        reject_unknown(a, {"kappa0", "rho_max", "fit_rmax", "scaling_iotas",
                           "barrier_etas"},
                       "analysis.");
        if (a.contains("kappa0")) c.kappa0 = num(a, "kappa0");
        if (a.contains("rho_max")) c.rho_max = num(a, "rho_max");
        if (a.contains("fit_rmax")) c.fit_rmax = num(a, "fit_rmax");
        if (a.contains("scaling_iotas")) {
            c.scaling_iotas.clear();
            for (const auto& v : a.at("scaling_iotas"))
                c.scaling_iotas.push_back(v.get<int>());
        }
        if (a.contains("barrier_etas")) {
            c.barrier_etas.clear();
            for (const auto& v : a.at("barrier_etas"))
                c.barrier_etas.push_back(v.get<double>());
        }
    }
    if (j.contains("sweep_gammas"))
        for (const auto& v : j.at("sweep_gammas"))
            c.sweep_gammas.push_back(v.get<double>());
    if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();

    // constraint checks with the computed bound in the message
    for (double e : c.eps_sequence) derive_params(c.gamma, e, c.delta, c.ramp);
    for (std::size_t k = 1; k < c.eps_sequence.size(); ++k)
        if (!(c.eps_sequence[k] < c.eps_sequence[k - 1]))
            throw std::invalid_argument("parse_config: eps_sequence must decrease");
    // grid construction validates R/h commensurability
    c.make_run_grid();
    return c;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

ProblemParams RunConfig::params(double eps) const {
    return derive_params(gamma, eps, delta, ramp);
}

GridPtr RunConfig::make_run_grid() const {
    return make_grid(dim, h, R, geometry, wide_stencil ? 2 : 1);
}

DirectionSet RunConfig::directions() const {
    return make_directions(dim, wide_stencil);
}

std::string RunConfig::echo() const {
    json j;
    j["gamma"] = gamma;
    if (eps_sequence.size() == 1) j["epsilon"] = eps_sequence[0];
    else j["eps_sequence"] = eps_sequence;
    const ProblemParams p0 = params(eps_sequence[0]);
    j["delta"] = p0.delta;
    j["ramp"] = to_string(ramp);
    j["dim"] = dim;
    j["geometry"] = geometry == Geometry::Box ? "box" : "disk";
    j["R"] = R;
    j["h"] = h;
    j["wide_stencil"] = wide_stencil;
    json b;
    switch (boundary.kind) {
        case BoundarySpec::Kind::RadialCompat: b["kind"] = "radial_compat"; break;
        case BoundarySpec::Kind::Constant:
            b["kind"] = "constant";
            b["value"] = boundary.value;
            break;
        case BoundarySpec::Kind::ProfileX:
            b["kind"] = "profile_x";
            b["x0"] = boundary.x0;
            break;
        case BoundarySpec::Kind::Tabulated:
            b["kind"] = "tabulated";
            b["values"] = boundary.table;
            break;
    }
    j["boundary"] = b;
    j["solver"] = {{"tol", solver.tol},
                   {"max_iters", solver.max_iters},
                   {"damping_safety", solver.damping_safety},
                   {"log_every", solver.log_every},
                   {"band_tol", solver.band_tol}};
    j["analysis"] = {{"kappa0", kappa0},
                     {"rho_max", rho_max},
                     {"fit_rmax", fit_rmax},
                     {"scaling_iotas", scaling_iotas},
                     {"barrier_etas", barrier_etas}};
    if (!sweep_gammas.empty()) j["sweep_gammas"] = sweep_gammas;
    j["threads"] = threads;
    return j.dump(2);
}

std::string RunConfig::content_hash() const {
    const std::string s = echo();
    std::uint64_t h64 = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h64 ^= ch;
        h64 *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h64));
    return std::string(buf);
}

}  // namespace iflab
