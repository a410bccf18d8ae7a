#include "iflab/solver.hpp"

#include "iflab/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace iflab {

namespace {

double datum_at(const Grid& g, std::size_t n, const BoundarySpec& bc,
                const ProblemParams& p) {
    switch (bc.kind) {
        case BoundarySpec::Kind::RadialCompat:
            // the closed-form family extended through the carrier rings
            return radial_exact(std::min(g.node_radius(n), g.radius + g.margin * g.h * 2.0), p);
        case BoundarySpec::Kind::Constant:
            return bc.value;
        case BoundarySpec::Kind::ProfileX: {
            const double s = std::max(0.0, g.x_of(n) - bc.x0);
            return p.c_alpha * std::pow(s + p.epsilon, p.alpha);
        }
        case BoundarySpec::Kind::Tabulated:
            return 0.0;  // handled by caller
    }
    return 0.0;
}

struct NeighborTable {
    // per direction: flat-index offset, physical length
    std::vector<std::ptrdiff_t> offs;
    std::vector<double> lens;
    int count = 0;
};

NeighborTable build_table(const Grid& g, const DirectionSet& dirs) {
    NeighborTable t;
    t.count = static_cast<int>(dirs.dirs.size());
    for (const Direction& d : dirs.dirs) {
        std::ptrdiff_t off = d.dx;
        if (g.dim == 2) off += static_cast<std::ptrdiff_t>(d.dy) * g.axis_nodes;
        t.offs.push_back(off);
        t.lens.push_back(d.norm * g.h);
    }
    return t;
}

struct SweepGuts {
    const Grid* g;
    const DirectionSet* dirs;
    NeighborTable tab;
    std::vector<std::size_t> nodes;
    double kappa_floor;
};

inline void extrema_at(const SweepGuts& sg, const std::vector<double>& u,
                       std::size_t n, LocalExtrema& e) {
    bool first = true;
    for (int k = 0; k < sg.tab.count; ++k) {
        const double v = u[n + sg.tab.offs[k]];
        const double len = sg.tab.lens[k];
        if (first) {
            e.max_value = e.min_value = v;
            e.len_max = e.len_min = len;
            first = false;
        } else {
            if (v > e.max_value) { e.max_value = v; e.len_max = len; }
            if (v < e.min_value) { e.min_value = v; e.len_min = len; }
        }
    }
}

/// One-sided inward ODE march for a strict-local-minimum node: along
/// each stencil direction integrate (u'^3)' = 3 f over one cell,
/// u0 := u1 - len * cbrt(s2^3 - 3 len f(u1)), and take the lowest
/// candidate. Only directions whose march keeps a genuine (positive)
/// kink slope carry information; if every direction flattens inside the
/// cell the bottom is C1-type and the node's own equation governs
/// (returns +inf, caller falls back to the damped update). Used only
/// where the center is strictly below every neighbor; at a kink minimum
/// the discrete pointwise equation has no viscosity content and the
/// value is the continuous wing extension.
template <typename Rhs>
double closure_value(const SweepGuts& sg, const std::vector<double>& u,
                     std::size_t n, double min_neighbor, Rhs&& f) {
    const Grid& g = *sg.g;
    const int ix = g.ix_of(n), iy = g.iy_of(n);
    double best = std::numeric_limits<double>::infinity();
    for (const Direction& d : sg.dirs->dirs) {
        const int jx = ix + d.dx, jy = iy + d.dy;
        const int kx = ix + 2 * d.dx, ky = iy + 2 * d.dy;
        if (!g.in_lattice(kx, ky)) continue;
        const double len = d.norm * g.h;
        const double u1 = u[g.index(jx, jy)];
        const double u2 = u[g.index(kx, ky)];
        const double s2 = (u2 - u1) / len;
        const double s1c = s2 * s2 * s2 - 3.0 * len * f(u1);
        if (s1c <= 0.0) continue;  // slope dies inside the cell: no kink
        const double cand = u1 - len * std::cbrt(s1c);
        best = std::min(best, cand);
    }
    return std::min(best, min_neighbor);
}

struct SweepStats {
    double update_sup = 0.0;
    double min_update = 0.0;
    double residual_sup = 0.0;  // raw |L - f| over non-closure nodes
};

/// One Jacobi sweep of the damped update. Returns sup/min statistics.
/// rhs_fn(u) -> f; lip is the rhs Lipschitz constant entering tau.
/// descent_only caps every candidate at the current value, which makes
/// the iteration monotone (no limit cycles) at the cost of only moving
/// down; used to finish subsolutions.
template <typename Rhs>
SweepStats sweep(const SweepGuts& sg, const std::vector<double>& u,
                 std::vector<double>& unext, Rhs&& rhs_fn, double lip,
                 double safety, double u_hi, const std::vector<double>* floor,
                 bool closure, bool descent_only = false) {
    const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(sg.nodes.size());
    double upd_sup = 0.0, res_sup = 0.0, min_upd = 0.0;
#pragma omp parallel if (m > 4000)
    {
        double t_upd = 0.0, t_res = 0.0, t_min = 0.0;
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t i = 0; i < m; ++i) {
            const std::size_t n = sg.nodes[i];
            const double uc = u[n];
            LocalExtrema e;
            extrema_at(sg, u, n, e);
            double cand;
            double cv = std::numeric_limits<double>::infinity();
            if (closure && uc < e.min_value)
                cv = closure_value(sg, u, n, e.min_value, rhs_fn);
            if (std::isfinite(cv)) {
                // damped toward the closure value; full assignment
                // overshoots while the wings are still in transit
                cand = uc + 0.5 * (cv - uc);
            } else {
                const double L = stencil_value(uc, e);
                const double f = rhs_fn(uc);
                const double res = L - f;
                const double dp = (e.max_value - uc) / e.len_max;
                const double dm = (uc - e.min_value) / e.len_min;
                const double dom =
                    std::max({std::fabs(dp), std::fabs(dm), sg.kappa_floor});
                const double ell = 0.5 * (e.len_max + e.len_min);
                // ell * len_min rather than ell^2: on mixed-length 2D
                // stencils the latter sits past the overshoot boundary at
                // the default safety (flip-flop cycles); in 1D they agree
                const double lsq = ell * std::min(e.len_max, e.len_min);
                const double tau = safety * lsq / (3.0 * dom * dom + lip * lsq);
                cand = uc + tau * res;
                t_res = std::max(t_res, std::fabs(res));
            }
            double lo = 0.0;
            if (floor) lo = std::max(lo, (*floor)[n]);
            cand = std::min(std::max(cand, lo), u_hi);
            if (descent_only) cand = std::min(cand, uc);
            unext[n] = cand;
            const double du = cand - uc;
            t_upd = std::max(t_upd, std::fabs(du));
            t_min = std::min(t_min, du);
        }
#pragma omp critical
        {
            upd_sup = std::max(upd_sup, t_upd);
            res_sup = std::max(res_sup, t_res);
            min_upd = std::min(min_upd, t_min);
        }
    }
    return {upd_sup, min_upd, res_sup};
}

/// Complementarity residual on the converged field: one-sided where a
/// clamp binds, zero at strict-minimum (closure) nodes.
template <typename Rhs>
double comp_residual(const SweepGuts& sg, const std::vector<double>& u,
                     Rhs&& rhs_fn, double u_hi, const std::vector<double>* floor,
                     bool closure) {
    double sup = 0.0;
    const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(sg.nodes.size());
#pragma omp parallel if (m > 4000)
    {
        double t = 0.0;
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t i = 0; i < m; ++i) {
            const std::size_t n = sg.nodes[i];
            const double uc = u[n];
            LocalExtrema e;
            extrema_at(sg, u, n, e);
            if (closure && uc < e.min_value &&
                std::isfinite(closure_value(sg, u, n, e.min_value, rhs_fn)))
                continue;  // kink vertex: equation vacuous there
            double res = stencil_value(uc, e) - rhs_fn(uc);
            double lo = 0.0;
            if (floor) lo = std::max(lo, (*floor)[n]);
            if (uc <= lo) res = std::max(res, 0.0);       // cannot sink
            else if (uc >= u_hi) res = std::min(res, 0.0); // cannot rise
            t = std::max(t, std::fabs(res));
        }
#pragma omp critical
        sup = std::max(sup, t);
    }
    return sup;
}

template <typename Rhs>
SolveResult run_iteration(const PenalizedProblem& prob, const SolveOptions& opts,
                          std::vector<double> u, Rhs&& rhs_fn, double lip,
                          bool closure, const std::vector<double>* floor) {
    const Grid& g = *prob.grid;
    SweepGuts sg{&g, &prob.dirs, build_table(g, prob.dirs), g.interior_nodes, g.h};

    double u_hi = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n)
        if (!g.is_interior(n)) u_hi = std::max(u_hi, u[n]);

    std::vector<double> unext = u;
    SolveResult out;
    long it = 0;
    SweepStats st{};
    double best_upd = std::numeric_limits<double>::infinity();
    long best_at = 0;
    const long stall_window = 20000;
    bool band_accepted = false;
    while (it < opts.max_iters) {
        st = sweep(sg, u, unext, rhs_fn, lip, opts.damping_safety, u_hi, floor,
                   closure);
        u.swap(unext);
        ++it;
        if (!std::isfinite(st.update_sup))
            throw SolverError("solver produced non-finite update", it,
                              st.update_sup, st.residual_sup);
        if (opts.progress && opts.log_every > 0 && it % opts.log_every == 0)
            opts.progress({it, st.update_sup, st.residual_sup, st.min_update});
        if (st.update_sup <= opts.tol) break;
        if (st.update_sup < 0.5 * best_upd) {
            best_upd = st.update_sup;
            best_at = it;
        }
        if (opts.band_tol > 0.0 && it - best_at > stall_window) {
            // Update stopped shrinking: either an orbit around an
            // invariant set (no stable fixed point at frustrated contact
            // nodes) or a long transient. Record the per-node extent over
            // a window; accept its midpoint when the set is tight, else
            // keep iterating and re-test later.
            std::vector<double> lo = u, hi = u;
            const long band_window = 4000;
            for (long w = 0; w < band_window && it < opts.max_iters; ++w, ++it) {
                st = sweep(sg, u, unext, rhs_fn, lip, opts.damping_safety, u_hi,
                           floor, closure);
                u.swap(unext);
                for (std::size_t n : sg.nodes) {
                    lo[n] = std::min(lo[n], u[n]);
                    hi[n] = std::max(hi[n], u[n]);
                }
            }
            double band = 0.0;
            for (std::size_t n : sg.nodes) band = std::max(band, hi[n] - lo[n]);
            if (band <= opts.band_tol) {
                for (std::size_t n : sg.nodes) u[n] = 0.5 * (lo[n] + hi[n]);
                out.cycle_band = band;
                band_accepted = true;
                break;
            }
            best_upd = std::numeric_limits<double>::infinity();  // transient
            best_at = it;
        }
    }

    out.iterations = it;
    out.final_update_sup = st.update_sup;
    out.converged = band_accepted || st.update_sup <= opts.tol;
    out.field = Field{prob.grid};
    out.field.values = std::move(u);
    out.residual_sup =
        comp_residual(sg, out.field.values, rhs_fn, u_hi, floor, closure);
    if (!out.converged) {
        std::ostringstream os;
        os << "solver did not converge in " << it
           << " iterations (update_sup=" << st.update_sup
           << ", residual_sup=" << out.residual_sup << ")";
        throw SolverError(os.str(), it, st.update_sup, out.residual_sup);
    }
    return out;
}

/// Lower cone (Lipschitz) extension of the carrier data, clamped at 0.
std::vector<double> cone_init(const Grid& g, const std::vector<double>& bv) {
    std::vector<std::size_t> carriers;
    double phimax = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n)
        if (!g.is_interior(n)) {
            carriers.push_back(n);
            phimax = std::max(phimax, bv[n]);
        }
    const double K = 4.0 * phimax / g.radius + 1.0;
    std::vector<double> u(g.size(), 0.0);
    const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(g.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t n = 0; n < m; ++n) {
        if (!g.is_interior(n)) {
            u[n] = bv[n];
            continue;
        }
        const double x = g.x_of(n), y = g.y_of(n);
        double best = 0.0;
        for (std::size_t c : carriers) {
            const double d = std::hypot(g.x_of(c) - x, g.y_of(c) - y);
            best = std::max(best, bv[c] - K * d);
        }
        u[n] = std::max(best, 0.0);
    }
    return u;
}

}  // namespace

std::vector<double> boundary_values(const Grid& g, const BoundarySpec& bc,
                                    const ProblemParams& p) {
    std::vector<double> bv(g.size(), 0.0);
    if (bc.kind == BoundarySpec::Kind::Tabulated) {
        std::size_t k = 0;
        for (std::size_t n = 0; n < g.size(); ++n) {
            if (g.is_interior(n)) continue;
            if (k >= bc.table.size())
                throw std::invalid_argument("boundary_values: tabulated data shorter "
                                            "than carrier count");
            bv[n] = bc.table[k++];
        }
        if (k != bc.table.size())
            throw std::invalid_argument("boundary_values: tabulated data has " +
                                        std::to_string(bc.table.size()) +
                                        " entries, expected " + std::to_string(k));
        return bv;
    }
    for (std::size_t n = 0; n < g.size(); ++n) bv[n] = datum_at(g, n, bc, p);
    for (std::size_t n = 0; n < g.size(); ++n)
        if (!g.is_interior(n) && bv[n] < 0.0)
            throw std::invalid_argument("boundary_values: negative Dirichlet datum");
    return bv;
}

PenalizedProblem make_problem(const ProblemParams& p, GridPtr grid,
                              const DirectionSet& dirs, const BoundarySpec& bc) {
    if (!(p.epsilon > 0.0))
        throw std::invalid_argument("make_problem: penalized solves need epsilon > 0");
    PenalizedProblem prob;
    prob.params = p;
    prob.grid = std::move(grid);
    prob.dirs = dirs;
    prob.boundary_values = boundary_values(*prob.grid, bc, p);
    if (bc.kind == BoundarySpec::Kind::RadialCompat) {
        // Pin the Perron branch with the closed-form radial family; the
        // penalized Dirichlet problem admits a one-parameter family of
        // viscosity solutions and the paper's section-6 member is the
        // one all quantitative statements are about.
        std::vector<double> w(prob.grid->size());
        for (std::size_t n = 0; n < prob.grid->size(); ++n)
            w[n] = radial_exact(prob.grid->node_radius(n), p);
        prob.floor = w;
        prob.initial = std::move(w);
    }
    return prob;
}

Field make_subsolution(const PenalizedProblem& prob, const SolveOptions& opts) {
    const ProblemParams& p = prob.params;
    const Grid& g = *prob.grid;
    // Constant source: sup of the penalized rhs, with a hair of headroom
    // so the discrete subsolution margin is strictly positive.
    const double S = rhs_sup(p) * (1.0 + 1e-3);
    auto src = [S](double) { return S; };
    SweepGuts sg{&g, &prob.dirs, build_table(g, prob.dirs), g.interior_nodes, g.h};
    double u_hi = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n)
        if (!g.is_interior(n)) u_hi = std::max(u_hi, prob.boundary_values[n]);

    std::vector<double> u = cone_init(g, prob.boundary_values);
    std::vector<double> unext = u;

    // Phase 1: plain damped relaxation. The obstacle configuration can
    // orbit (frustrated nodes along the contact curve flip branches with
    // neighbor lag), so stop on stall rather than insisting on tol.
    long it = 0;
    double best_upd = std::numeric_limits<double>::infinity();
    long best_at = 0;
    const long stall_window = 20000;
    while (it < opts.max_iters) {
        SweepStats st = sweep(sg, u, unext, src, 0.0, opts.damping_safety, u_hi,
                              nullptr, /*closure=*/false);
        u.swap(unext);
        ++it;
        if (!std::isfinite(st.update_sup))
            throw SolverError("make_subsolution: non-finite update", it,
                              st.update_sup, st.residual_sup);
        if (st.update_sup <= opts.tol) break;
        if (st.update_sup < 0.5 * best_upd) {
            best_upd = st.update_sup;
            best_at = it;
        }
        if (it - best_at > stall_window) break;  // limit cycle: finish monotonically
    }

    // Phase 2: downward-only sweeps are monotone, hence cycle-free, and
    // keep the output a subsolution of the constant-source problem.
    while (it < 2 * opts.max_iters) {
        SweepStats st = sweep(sg, u, unext, src, 0.0, opts.damping_safety, u_hi,
                              nullptr, /*closure=*/false, /*descent_only=*/true);
        u.swap(unext);
        ++it;
        if (st.update_sup <= opts.tol) break;
    }

    Field out{prob.grid};
    out.values = std::move(u);
    // Discrete subsolution check against the penalized rhs.
    double margin = 0.0;
    for (std::size_t n : g.interior_nodes) {
        const double L = discrete_inf_laplacian(out, n, prob.dirs);
        margin = std::min(margin, L - rhs_unchecked(out.values[n], p));
    }
    if (margin < -1e-3 * S) {
        std::ostringstream os;
        os << "make_subsolution: output violates the subsolution margin ("
           << margin << " vs source " << S << ")";
        throw SolverError(os.str(), it, 0.0, margin);
    }
    return out;
}

Field make_supersolution(const PenalizedProblem& prob, const SolveOptions& opts) {
    const Grid& g = *prob.grid;
    SweepGuts sg{&g, &prob.dirs, build_table(g, prob.dirs), g.interior_nodes, g.h};
    std::vector<double> u = prob.boundary_values;  // carriers hold data
    double phimax = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n)
        if (!g.is_interior(n)) phimax = std::max(phimax, u[n]);
    for (std::size_t n : g.interior_nodes) u[n] = phimax;

    std::vector<double> unext = u;
    const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(g.interior_nodes.size());
    long it = 0;
    double upd = 0.0;
    while (it < opts.max_iters) {
        upd = 0.0;
#pragma omp parallel if (m > 4000)
        {
            double t = 0.0;
#pragma omp for schedule(static) nowait
            for (std::ptrdiff_t i = 0; i < m; ++i) {
                const std::size_t n = g.interior_nodes[i];
                LocalExtrema e;
                extrema_at(sg, u, n, e);
                // D+ = D-  <=>  u = (lm M + lM m) / (lM + lm)
                const double cand = (e.len_min * e.max_value + e.len_max * e.min_value) /
                                    (e.len_max + e.len_min);
                unext[n] = cand;
                t = std::max(t, std::fabs(cand - u[n]));
            }
#pragma omp critical
            upd = std::max(upd, t);
        }
        u.swap(unext);
        ++it;
        if (upd <= opts.tol) break;
    }
    if (upd > opts.tol)
        throw SolverError("make_supersolution: midpoint iteration did not converge",
                          it, upd, 0.0);
    Field f{prob.grid};
    f.values = std::move(u);
    return f;
}

SolveResult solve_penalized(const PenalizedProblem& prob, const SolveOptions& opts) {
    const ProblemParams p = prob.params;
    std::vector<double> u0;
    if (prob.initial) {
        u0 = *prob.initial;
        for (std::size_t n = 0; n < prob.grid->size(); ++n)
            if (!prob.grid->is_interior(n)) u0[n] = prob.boundary_values[n];
    } else {
        u0 = make_subsolution(prob, opts).values;
    }
    const double lip = rhs_lipschitz(p);
    const std::vector<double>* floor = prob.floor ? &*prob.floor : nullptr;
    return run_iteration(prob, opts, std::move(u0),
                         [&p](double s) { return rhs_unchecked(s, p); }, lip,
                         /*closure=*/true, floor);
}

std::pair<SolveResult, ContinuationTrace>
solve_limit(const ContinuationTemplate& tmpl, const std::vector<double>& eps_sequence,
            const SolveOptions& opts) {
    if (eps_sequence.empty())
        throw std::invalid_argument("solve_limit: empty eps sequence");
    for (std::size_t k = 1; k < eps_sequence.size(); ++k)
        if (!(eps_sequence[k] < eps_sequence[k - 1]))
            throw std::invalid_argument("solve_limit: eps sequence must decrease");

    ContinuationTrace trace;
    SolveResult last;
    std::vector<double> prev;
    for (double eps : eps_sequence) {
        ProblemParams p = derive_params(tmpl.gamma, eps, tmpl.delta, tmpl.ramp);
        PenalizedProblem prob = make_problem(p, tmpl.grid, tmpl.dirs, tmpl.bc);
        if (!prob.initial && !prev.empty()) prob.initial = prev;  // warm start
        SolveResult r = solve_penalized(prob, opts);
        if (!prev.empty()) {
            double d = 0.0;
            for (std::size_t n : tmpl.grid->interior_nodes)
                d = std::max(d, std::fabs(r.field.values[n] - prev[n]));
            if (!trace.diff_sup.empty() && d >= trace.diff_sup.back())
                trace.decreasing = false;
            trace.diff_sup.push_back(d);
        }
        trace.eps.push_back(eps);
        prev = r.field.values;
        last = std::move(r);
    }
    return {std::move(last), std::move(trace)};
}

}  // namespace iflab
