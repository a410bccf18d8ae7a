#include "iflab/analysis.hpp"
#include "iflab/closed_forms.hpp"
#include "iflab/config.hpp"
#include "iflab/fd_operator.hpp"
#include "iflab/run.hpp"
#include "iflab/solver.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace iflab;

namespace {

py::array_t<double> field_array(const Field& f) {
    const Grid& g = *f.grid;
    if (g.dim == 1) {
        py::array_t<double> a(g.size());
        std::copy(f.values.begin(), f.values.end(), a.mutable_data());
        return a;
    }
    py::array_t<double> a({g.axis_nodes, g.axis_nodes});
    std::copy(f.values.begin(), f.values.end(), a.mutable_data());
    return a;
}

py::dict summary_dict(const RunOutput& out) {
    py::dict d;
    d["alpha"] = out.alpha;
    d["alpha_est"] = out.alpha_est;
    d["fit_r2"] = out.fit_r2;
    d["iterations"] = out.solve.iterations;
    d["residual_sup"] = out.solve.residual_sup;
    d["converged"] = out.solve.converged;
    d["all_passed"] = out.all_passed;
    py::list reps;
    for (const auto& r : out.reports) {
        py::dict rd;
        rd["check"] = r.check;
        rd["passed"] = r.passed;
        for (const auto& [k, v] : r.metrics) rd[k.c_str()] = v;
        reps.append(rd);
    }
    d["reports"] = reps;
    if (out.field.grid) {
        d["field"] = field_array(out.field);
        d["h"] = out.field.grid->h;
        d["half_span"] = out.field.grid->half_span;
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "penalized singular infinity-Laplacian laboratory (C++ core)";

    py::class_<ProblemParams>(m, "ProblemParams")
        .def_readonly("gamma", &ProblemParams::gamma)
        .def_readonly("epsilon", &ProblemParams::epsilon)
        .def_readonly("delta", &ProblemParams::delta)
        .def_readonly("alpha", &ProblemParams::alpha)
        .def_readonly("sigma", &ProblemParams::sigma)
        .def_readonly("c_alpha", &ProblemParams::c_alpha)
        .def("__repr__", [](const ProblemParams& p) {
            return "ProblemParams(gamma=" + std::to_string(p.gamma) +
                   ", epsilon=" + std::to_string(p.epsilon) +
                   ", delta=" + std::to_string(p.delta) +
                   ", alpha=" + std::to_string(p.alpha) + ")";
        });

    m.def("derive_params",
          [](double gamma, double epsilon, py::object delta) {
              std::optional<double> d;
              if (!delta.is_none()) d = delta.cast<double>();
              return derive_params(gamma, epsilon, d);
          },
          py::arg("gamma"), py::arg("epsilon"), py::arg("delta") = py::none());
    m.def("max_admissible_delta", &max_admissible_delta, py::arg("gamma"));
    m.def("penalty_base", &penalty_base, py::arg("s"), py::arg("delta"),
          py::arg("ramp") = RampKind::Linear);
    m.def("penalty_eps", &penalty_eps, py::arg("s"), py::arg("params"));
    m.def("rhs", &rhs, py::arg("s"), py::arg("params"));
    m.def("rhs_sup", &rhs_sup, py::arg("params"));
    m.def("rhs_lipschitz", &rhs_lipschitz, py::arg("params"));

    py::enum_<RampKind>(m, "RampKind")
        .value("linear", RampKind::Linear)
        .value("smoothstep", RampKind::Smoothstep);

    m.def("radial_exact", &radial_exact, py::arg("s"), py::arg("params"));
    m.def("radial_ode_residual", &radial_ode_residual, py::arg("s"), py::arg("params"));
    m.def("boundary_for_radius", &boundary_for_radius, py::arg("R"), py::arg("params"));
    m.def("radius_for_boundary", &radius_for_boundary, py::arg("C"), py::arg("params"));
    m.def("aronson", &aronson, py::arg("x"), py::arg("y"));

    m.def("barrier_value",
          [](double r, double eta, const ProblemParams& p) {
              return barrier_value(r, make_barrier(eta, p));
          },
          py::arg("r"), py::arg("eta"), py::arg("params"));
    m.def("barrier_inf_laplacian",
          [](double r, double eta, const ProblemParams& p) {
              return barrier_inf_laplacian(r, make_barrier(eta, p));
          },
          py::arg("r"), py::arg("eta"), py::arg("params"));
    m.def("barrier_scaled", &barrier_scaled, py::arg("x_norm"), py::arg("r"),
          py::arg("params"));
    m.def("verify_supersolution",
          [](double eta, const ProblemParams& p, std::size_t n_samples) {
              const VerificationReport v =
                  verify_supersolution(make_barrier(eta, p), n_samples);
              py::dict d;
              d["passed"] = v.passed;
              d["max_violation"] = v.max_violation;
              d["worst_r"] = v.worst_r;
              d["samples"] = v.samples;
              return d;
          },
          py::arg("eta"), py::arg("params"), py::arg("n_samples") = 2000);

    m.def("parse_config", [](const std::string& text) {
        RunConfig c = parse_config(text);
        return c.echo();
    });
    m.def("run_solve", [](const std::string& cfg) {
        return summary_dict(run_solve(parse_config(cfg)));
    });
    m.def("run_analyze", [](const std::string& cfg) {
        return summary_dict(run_analyze(parse_config(cfg)));
    });
    m.def("run_verify_barrier", [](const std::string& cfg) {
        return summary_dict(run_verify_barrier(parse_config(cfg)));
    });
    m.def("run_verify_radial", [](const std::string& cfg) {
        return summary_dict(run_verify_radial(parse_config(cfg)));
    });
    m.def("run_sweep", [](const std::string& cfg) {
        return summary_dict(run_sweep(parse_config(cfg)));
    });
}
