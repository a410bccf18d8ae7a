#include "iflab/analysis.hpp"

#include "iflab/fd_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace iflab {

namespace {

struct LogFit {
    double slope = 0.0, intercept = 0.0, r2 = 1.0;
    std::size_t n = 0;
};

LogFit loglog_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    LogFit out;
    out.n = xs.size();
    if (xs.size() < 2) return out;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i]; sy += ys[i]; sxx += xs[i] * xs[i]; sxy += xs[i] * ys[i];
    }
    const double n = static_cast<double>(xs.size());
    const double den = n * sxx - sx * sx;
    out.slope = (n * sxy - sx * sy) / den;
    out.intercept = (sy - out.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double ym = sy / n;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double yh = out.slope * xs[i] + out.intercept;
        ss_res += (ys[i] - yh) * (ys[i] - yh);
        ss_tot += (ys[i] - ym) * (ys[i] - ym);
    }
    out.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return out;
}

template <typename Fn>
void for_ball(const Grid& g, std::size_t center, double r, Fn&& fn) {
    const int span = static_cast<int>(std::floor(r / g.h + 1e-12));
    const int cx = g.ix_of(center), cy = g.iy_of(center);
    const double r2 = r * r * (1.0 + 1e-14) + 1e-300;
    if (g.dim == 1) {
        for (int dx = -span; dx <= span; ++dx) {
            const int ix = cx + dx;
            if (!g.in_lattice(ix)) continue;
            fn(g.index(ix));
        }
        return;
    }
    for (int dy = -span; dy <= span; ++dy) {
        const int iy = cy + dy;
        if (iy < -g.half_span || iy > g.half_span) continue;
        for (int dx = -span; dx <= span; ++dx) {
            const int ix = cx + dx;
            if (ix < -g.half_span || ix > g.half_span) continue;
            const double d2 = (double(dx) * dx + double(dy) * dy) * g.h * g.h;
            if (d2 <= r2) fn(g.index(ix, iy));
        }
    }
}

}  // namespace

std::size_t NodeSet::count() const {
    std::size_t c = 0;
    for (auto m : member) c += m;
    return c;
}

std::vector<std::size_t> NodeSet::nodes() const {
    std::vector<std::size_t> out;
    for (std::size_t n = 0; n < member.size(); ++n)
        if (member[n]) out.push_back(n);
    return out;
}

double ball_sup(const Field& f, std::size_t center, double r) {
    double s = f.values[center];
    for_ball(*f.grid, center, r, [&](std::size_t n) { s = std::max(s, f.values[n]); });
    return s;
}

NodeSet positivity_set(const Field& f, double threshold) {
    NodeSet s{f.grid, std::vector<std::uint8_t>(f.grid->size(), 0)};
    for (std::size_t n = 0; n < f.grid->size(); ++n)
        if (f.values[n] > threshold) s.member[n] = 1;
    return s;
}

NodeSet free_boundary(const Field& f, double threshold, const DirectionSet& dirs) {
    NodeSet in = positivity_set(f, threshold);
    NodeSet fb{f.grid, std::vector<std::uint8_t>(f.grid->size(), 0)};
    const Grid& g = *f.grid;
    for (std::size_t n = 0; n < g.size(); ++n) {
        if (!in.member[n]) continue;
        const int ix = g.ix_of(n), iy = g.iy_of(n);
        for (const Direction& d : dirs.dirs) {
            const int jx = ix + d.dx, jy = iy + d.dy;
            if (!g.in_lattice(jx, jy)) continue;
            if (!in.member[g.index(jx, jy)]) { fb.member[n] = 1; break; }
        }
    }
    return fb;
}

NodeSet free_boundary_outer(const Field& f, double threshold, const DirectionSet& dirs) {
    NodeSet in = positivity_set(f, threshold);
    NodeSet fb{f.grid, std::vector<std::uint8_t>(f.grid->size(), 0)};
    const Grid& g = *f.grid;
    for (std::size_t n = 0; n < g.size(); ++n) {
        if (in.member[n]) continue;
        const int ix = g.ix_of(n), iy = g.iy_of(n);
        for (const Direction& d : dirs.dirs) {
            const int jx = ix + d.dx, jy = iy + d.dy;
            if (!g.in_lattice(jx, jy)) continue;
            if (in.member[g.index(jx, jy)]) { fb.member[n] = 1; break; }
        }
    }
    return fb;
}

double fb_threshold_limit(const Field& f, const ProblemParams& p) {
    double fmin = std::numeric_limits<double>::infinity();
    for (std::size_t n : f.grid->interior_nodes)
        fmin = std::min(fmin, f.values[n]);
    return fmin + 0.5 * p.c_alpha * std::pow(f.grid->h, p.alpha);
}

std::vector<double> dyadic_radii(double lo, double hi) {
    std::vector<double> out;
    for (double r = hi; r >= lo * (1.0 - 1e-12); r *= 0.5) out.push_back(r);
    std::reverse(out.begin(), out.end());
    return out;
}

FitResult growth_exponent_fit(const Field& f, std::size_t center,
                              const std::vector<double>& radii) {
    std::vector<double> xs, ys, used;
    for (double r : radii) {
        const double s = ball_sup(f, center, r);
        if (s > 0.0) {
            xs.push_back(std::log(r));
            ys.push_back(std::log(s));
            used.push_back(r);
        }
    }
    if (xs.size() < 3)
        throw std::runtime_error("growth_exponent_fit: fewer than 3 usable radii");
    const LogFit lf = loglog_fit(xs, ys);
    FitResult out;
    out.alpha_est = lf.slope;
    out.c_est = std::exp(lf.intercept);
    out.r_squared = lf.r2;
    out.radii_used = std::move(used);
    return out;
}

AnalysisReport oscillation_check(const Field& f, const ProblemParams& p,
                                 double kappa0) {
    const Grid& g = *f.grid;
    AnalysisReport rep;
    rep.check = "oscillation";
    double fmax = 0.0;
    for (std::size_t n : g.interior_nodes) fmax = std::max(fmax, f.values[n]);
    const double tau = std::max(1.0, std::pow(fmax, 1.0 / p.alpha));
    const auto radii = dyadic_radii(4.0 * g.h, kappa0);
    double c_emp = 0.0;
    std::size_t pairs = 0, excluded = 0;
    double wx = 0, wy = 0;
    for (std::size_t n : g.interior_nodes) {
        const double dist = g.dist_to_boundary(n);
        const double level = std::pow(f.values[n], 1.0 / p.alpha);
        for (double k : radii) {
            if (k > dist) continue;
            if (k < level) { ++excluded; continue; }  // floating level-set gate
            const double ratio = ball_sup(f, n, k) / std::pow(k, p.alpha);
            ++pairs;
            if (ratio > c_emp) {
                c_emp = ratio;
                wx = g.x_of(n);
                wy = g.y_of(n);
            }
        }
    }
    rep.passed = pairs > 0 && std::isfinite(c_emp);
    rep.worst_x = wx;
    rep.worst_y = wy;
    rep.metrics["C_emp"] = c_emp;
    rep.metrics["tau"] = tau;
    rep.metrics["pairs"] = static_cast<double>(pairs);
    rep.metrics["excluded_pairs"] = static_cast<double>(excluded);
    rep.metrics["kappa0"] = kappa0;
    return rep;
}

AnalysisReport nondegeneracy_check(const Field& f, const ProblemParams& p) {
    const Grid& g = *f.grid;
    AnalysisReport rep;
    rep.check = "nondegeneracy";
    const double level = p.delta * p.eps_alpha;
    double min_ratio = std::numeric_limits<double>::infinity();
    double min_margin = std::numeric_limits<double>::infinity();
    std::size_t pairs = 0;
    double wx = 0, wy = 0;
    for (std::size_t n : g.interior_nodes) {
        if (f.values[n] < level) continue;
        const double dist = g.dist_to_boundary(n);
        const double rlo = std::max(p.epsilon, 4.0 * g.h);
        if (0.5 * dist < rlo) continue;
        for (double r : dyadic_radii(rlo, 0.5 * dist)) {
            const double ratio =
                ball_sup(f, n, r) / (p.delta * std::pow(r, p.alpha));
            const double slack = 5.0 * g.h / r;
            ++pairs;
            min_ratio = std::min(min_ratio, ratio);
            const double margin = ratio - (1.0 - slack);
            if (margin < min_margin) {
                min_margin = margin;
                wx = g.x_of(n);
                wy = g.y_of(n);
            }
        }
    }
    rep.passed = pairs > 0 && min_margin >= 0.0;
    rep.worst_x = wx;
    rep.worst_y = wy;
    rep.metrics["min_ratio"] = pairs ? min_ratio : 0.0;
    rep.metrics["min_margin"] = pairs ? min_margin : 0.0;
    rep.metrics["pairs"] = static_cast<double>(pairs);
    return rep;
}

AnalysisReport flatness_growth_check(const Field& f, const ProblemParams& p,
                                     double rho_max) {
    const Grid& g = *f.grid;
    AnalysisReport rep;
    rep.check = "flatness_growth";
    // delta0 calibration: the value below which 10% of interior nodes sit.
    std::vector<double> vals;
    vals.reserve(g.interior_nodes.size());
    for (std::size_t n : g.interior_nodes) vals.push_back(f.values[n]);
    std::sort(vals.begin(), vals.end());
    const double delta0 = vals[vals.size() / 10];
    double c_emp = 0.0;
    std::size_t pairs = 0;
    double wx = 0, wy = 0;
    for (std::size_t n : g.interior_nodes) {
        if (!(f.values[n] < delta0)) continue;
        const double dist = g.dist_to_boundary(n);
        const double fl = std::pow(f.values[n], 1.0 / p.alpha);
        for (double rho : dyadic_radii(4.0 * g.h, rho_max)) {
            if (rho > dist) continue;
            const double ratio =
                ball_sup(f, n, rho) / std::pow(rho + fl, p.alpha);
            ++pairs;
            if (ratio > c_emp) {
                c_emp = ratio;
                wx = g.x_of(n);
                wy = g.y_of(n);
            }
        }
    }
    rep.passed = pairs > 0 && std::isfinite(c_emp);
    rep.worst_x = wx;
    rep.worst_y = wy;
    rep.metrics["C_emp"] = c_emp;
    rep.metrics["delta0"] = delta0;
    rep.metrics["pairs"] = static_cast<double>(pairs);
    return rep;
}

AnalysisReport gradient_at_fb_check(const Field& f, const ProblemParams& p,
                                    const NodeSet& fb, const DirectionSet& dirs) {
    const Grid& g = *f.grid;
    AnalysisReport rep;
    rep.check = "gradient_at_fb";
    const double target = (p.alpha - 1.0) - 0.15;
    double min_expo = std::numeric_limits<double>::infinity();
    std::size_t tested = 0;
    double wx = 0, wy = 0;
    for (std::size_t n = 0; n < g.size(); ++n) {
        if (!fb.member[n] || !g.is_interior(n)) continue;
        const int ix = g.ix_of(n), iy = g.iy_of(n);
        for (const Direction& d : dirs.dirs) {
            std::vector<double> xs, ys;
            for (int k : {1, 2, 4, 8}) {
                const int jx = ix + k * d.dx, jy = iy + k * d.dy;
                if (!g.in_lattice(jx, jy)) break;
                const double t = k * d.norm * g.h;
                const double q =
                    std::fabs(f.values[g.index(jx, jy)] - f.values[n]) / t;
                if (q > 0.0) {
                    xs.push_back(std::log(t));
                    ys.push_back(std::log(q));
                }
            }
            if (xs.size() < 3) continue;  // flat directions are consistent
            const double expo = loglog_fit(xs, ys).slope;
            ++tested;
            if (expo < min_expo) {
                min_expo = expo;
                wx = g.x_of(n);
                wy = g.y_of(n);
            }
        }
    }
    if (tested == 0) {
        rep.passed = true;
        rep.note = "empty free-boundary band (vacuous)";
        rep.metrics["min_decay_exponent"] = 0.0;
    } else {
        rep.passed = min_expo >= target;
        rep.metrics["min_decay_exponent"] = min_expo;
    }
    rep.worst_x = wx;
    rep.worst_y = wy;
    rep.metrics["target"] = target;
    rep.metrics["directions_tested"] = static_cast<double>(tested);
    return rep;
}

double density_ratio(const Field& f, std::size_t center, double kappa,
                     double threshold) {
    std::size_t total = 0, pos = 0;
    for_ball(*f.grid, center, kappa, [&](std::size_t n) {
        ++total;
        if (f.values[n] > threshold) ++pos;
    });
    return total ? static_cast<double>(pos) / static_cast<double>(total) : 0.0;
}

AnalysisReport porosity_estimate(const Field& f, const NodeSet& fb,
                                 double rho_max) {
    const Grid& g = *f.grid;
    AnalysisReport rep;
    rep.check = "porosity";
    const auto fbn = fb.nodes();
    if (fbn.empty()) {
        rep.passed = true;
        rep.note = "empty free-boundary band (vacuous)";
        rep.metrics["tau_emp"] = 0.0;
        rep.metrics["fb_nodes"] = 0.0;
        return rep;
    }
    double tau_emp = std::numeric_limits<double>::infinity();
    double wx = 0, wy = 0;
    for (std::size_t x : fbn) {
        for (double rho : dyadic_radii(4.0 * g.h, rho_max)) {
            if (rho > g.dist_to_boundary(x)) continue;
            double best = 0.0;
            for_ball(g, x, rho, [&](std::size_t y) {
                const double dxy = std::hypot(g.x_of(y) - g.x_of(x),
                                              g.y_of(y) - g.y_of(x));
                double dfb = std::numeric_limits<double>::infinity();
                for (std::size_t b : fbn)
                    dfb = std::min(dfb, std::hypot(g.x_of(y) - g.x_of(b),
                                                   g.y_of(y) - g.y_of(b)));
                best = std::max(best, std::min(rho - dxy, dfb) / rho);
            });
            if (best < tau_emp) {
                tau_emp = best;
                wx = g.x_of(x);
                wy = g.y_of(x);
            }
        }
    }
    rep.passed = std::isfinite(tau_emp) && tau_emp > 0.0;
    rep.worst_x = wx;
    rep.worst_y = wy;
    rep.metrics["tau_emp"] = tau_emp;
    rep.metrics["fb_nodes"] = static_cast<double>(fbn.size());
    return rep;
}

AnalysisReport scaling_residual_check(const Field& f, const ProblemParams& p,
                                      const DirectionSet& dirs, int iota) {
    AnalysisReport rep;
    rep.check = "scaling_residual";
    if (iota < 1 || (iota & (iota - 1)) != 0)
        throw std::invalid_argument("scaling_residual_check: iota must be a power of 2");
    const Grid& g = *f.grid;
    const int N = static_cast<int>(std::lround(g.radius / g.h));
    if (N % iota != 0)
        throw std::invalid_argument("scaling_residual_check: R/h not divisible by iota");

    // rescaled field on the stride-iota sublattice, same spacing h
    GridPtr gs = make_grid(g.dim, g.h, g.radius / iota, g.geometry, g.margin);
    Field fs(gs, 0.0);
    std::vector<std::uint8_t> filled(gs->size(), 0);
    const double scale = std::pow(static_cast<double>(iota), p.alpha);
    for (std::size_t n = 0; n < gs->size(); ++n) {
        const int ix = gs->ix_of(n) * iota, iy = gs->iy_of(n) * iota;
        if (!g.in_lattice(ix, iy)) continue;
        fs.values[n] = f.values[g.index(ix, iy)] / scale;
        filled[n] = 1;
    }
    ProblemParams ps = derive_params(p.gamma, p.epsilon / iota, p.delta, p.ramp);
    Field rs = residual_field(fs, ps, dirs);
    const double factor = std::pow(static_cast<double>(iota), p.alpha * p.gamma);

    // base-side counterpart: the stride-iota (coarse) stencil on f, which
    // is what the sublattice stencil maps onto under x -> iota x
    auto coarse_residual = [&](int bx, int by) {
        LocalExtrema e;
        bool first = true;
        for (const Direction& d : dirs.dirs) {
            const int jx = bx + iota * d.dx, jy = by + iota * d.dy;
            const double v = f.values[g.index(jx, jy)];
            const double len = d.norm * g.h * iota;
            if (first) {
                e.max_value = e.min_value = v;
                e.len_max = e.len_min = len;
                first = false;
            } else {
                if (v > e.max_value) { e.max_value = v; e.len_max = len; }
                if (v < e.min_value) { e.min_value = v; e.len_min = len; }
            }
        }
        const double u = f.values[g.index(bx, by)];
        return stencil_value(u, e) - rhs_unchecked(u, p);
    };

    double max_err = 0.0, sup_s = 0.0, sup_b = 0.0, scale_ref = 0.0;
    double wx = 0, wy = 0;
    for (std::size_t n : gs->interior_nodes) {
        // compare only where the whole mapped stencil carries base data
        bool ok = filled[n] != 0;
        const int nx = gs->ix_of(n), ny = gs->iy_of(n);
        for (const Direction& d : dirs.dirs) {
            if (!ok) break;
            const int jx = nx + d.dx, jy = ny + d.dy;
            if (!gs->in_lattice(jx, jy) || !filled[gs->index(jx, jy)]) ok = false;
        }
        if (!ok) continue;
        const int ix = nx * iota, iy = ny * iota;
        const double rb = coarse_residual(ix, iy);
        const double expected = factor * rb;
        const double err = std::fabs(rs.values[n] - expected);
        sup_s = std::max(sup_s, std::fabs(rs.values[n]));
        sup_b = std::max(sup_b, std::fabs(rb));
        scale_ref = std::max(scale_ref, std::fabs(expected));
        if (err > max_err) {
            max_err = err;
            wx = gs->x_of(n);
            wy = gs->y_of(n);
        }
    }
    const double tol = 1e-10 * std::max(1.0, scale_ref);
    rep.passed = max_err <= tol;
    rep.worst_x = wx;
    rep.worst_y = wy;
    rep.metrics["max_identity_error"] = max_err;
    rep.metrics["residual_sup_scaled"] = sup_s;
    rep.metrics["residual_sup_base"] = sup_b;
    rep.metrics["iota"] = iota;
    rep.metrics["covariance_factor"] = factor;
    return rep;
}

AnalysisReport lipschitz_bound_check(const Field& f, const DirectionSet& dirs) {
    const Grid& g = *f.grid;
    AnalysisReport rep;
    rep.check = "lipschitz_bound";
    double fmax = 0.0;
    for (double v : f.values) fmax = std::max(fmax, std::fabs(v));
    double worst = -std::numeric_limits<double>::infinity();
    double wx = 0, wy = 0;
    for (std::size_t n : g.interior_nodes) {
        const double dist = g.dist_to_boundary(n);
        if (dist <= 0.0) continue;
        const double bound = 2.0 * fmax / dist + 10.0 * g.h * fmax;
        const int ix = g.ix_of(n), iy = g.iy_of(n);
        for (const Direction& d : dirs.dirs) {
            const int jx = ix + d.dx, jy = iy + d.dy;
            if (!g.in_lattice(jx, jy)) continue;
            const double q = std::fabs(f.values[g.index(jx, jy)] - f.values[n]) /
                             (d.norm * g.h);
            const double excess = q - bound;
            if (excess > worst) {
                worst = excess;
                wx = g.x_of(n);
                wy = g.y_of(n);
            }
        }
    }
    rep.passed = worst <= 0.0;
    rep.worst_x = wx;
    rep.worst_y = wy;
    rep.metrics["max_excess"] = worst;
    return rep;
}

}  // namespace iflab
