#include "iflab/closed_forms.hpp"
#include "iflab/solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace iflab;

namespace {

PenalizedProblem radial_problem(double gamma, double eps, double h) {
    const ProblemParams p = derive_params(gamma, eps);
    GridPtr g = make_grid(1, h, 1.0, Geometry::Box);
    return make_problem(p, g, make_directions(1), BoundarySpec{});
}

SolveOptions quick_opts() {
    SolveOptions o;
    o.tol = 1e-9;
    o.max_iters = 400000;
    return o;
}

}  // namespace

TEST_CASE("supersolution: constants are infinity harmonic") {
    const ProblemParams p = derive_params(0.5, 0.1);
    GridPtr g = make_grid(1, 1.0 / 16, 1.0, Geometry::Box);
    BoundarySpec bc;
    bc.kind = BoundarySpec::Kind::Constant;
    bc.value = 2.25;
    PenalizedProblem prob = make_problem(p, g, make_directions(1), bc);
    Field u = make_supersolution(prob, quick_opts());
    for (std::size_t n : g->interior_nodes)
        CHECK(u.values[n] == doctest::Approx(2.25).epsilon(1e-12));
}

TEST_CASE("supersolution: two-point data gives the linear interpolant") {
    const ProblemParams p = derive_params(0.0, 0.1);
    GridPtr g = make_grid(1, 1.0 / 16, 1.0, Geometry::Box);
    BoundarySpec bc;
    bc.kind = BoundarySpec::Kind::Tabulated;
    bc.table = {0.0, 1.0};  // carriers in ascending node order: -R then +R
    PenalizedProblem prob = make_problem(p, g, make_directions(1), bc);
    Field u = make_supersolution(prob, quick_opts());
    for (std::size_t n : g->interior_nodes) {
        const double expect = 0.5 * (g->x_of(n) + 1.0);
        CHECK(u.values[n] == doctest::Approx(expect).epsilon(1e-7));
    }
}

TEST_CASE("supersolution: 2D output respects the data range") {
    const ProblemParams p = derive_params(0.5, 0.1);
    GridPtr g = make_grid(2, 1.0 / 8, 1.0, Geometry::Box);
    BoundarySpec bc;
    bc.kind = BoundarySpec::Kind::ProfileX;
    bc.x0 = 0.0;
    PenalizedProblem prob = make_problem(p, g, make_directions(2), bc);
    Field u = make_supersolution(prob, quick_opts());
    double lo = 1e300, hi = -1e300;
    for (std::size_t n = 0; n < g->size(); ++n)
        if (!g->is_interior(n)) {
            lo = std::min(lo, prob.boundary_values[n]);
            hi = std::max(hi, prob.boundary_values[n]);
        }
    for (std::size_t n : g->interior_nodes) {
        CHECK(u.values[n] >= lo - 1e-9);
        CHECK(u.values[n] <= hi + 1e-9);
    }
}

TEST_CASE("subsolution: zero data stays zero and satisfies the margin") {
    const ProblemParams p = derive_params(0.5, 0.1);
    GridPtr g = make_grid(1, 1.0 / 16, 1.0, Geometry::Box);
    BoundarySpec bc;
    bc.kind = BoundarySpec::Kind::Constant;
    bc.value = 0.0;
    PenalizedProblem prob = make_problem(p, g, make_directions(1), bc);
    Field u = make_subsolution(prob, quick_opts());
    for (std::size_t n : g->interior_nodes) CHECK(u.values[n] == 0.0);
}

TEST_CASE("perron sandwich at gamma = 0.5 radial data") {
    // At gamma = 0 the constant-source floor exceeds the radial family
    // near the center (its C1-bottomed profile is the higher branch), so
    // the ordering is checked where the construction is consistent.
    PenalizedProblem prob = radial_problem(0.5, 0.1, 1.0 / 32);
    const SolveOptions o = quick_opts();
    Field sub = make_subsolution(prob, o);
    Field sup = make_supersolution(prob, o);
    SolveResult r = solve_penalized(prob, o);
    for (std::size_t n : prob.grid->interior_nodes) {
        CHECK(sub.values[n] <= r.field.values[n] + 1e-6);
        CHECK(r.field.values[n] <= sup.values[n] + 1e-6);
        CHECK(r.field.values[n] >= 0.0);
    }
}

TEST_CASE("penalized radial solve matches the closed form") {
    for (double gamma : {0.0, 0.5}) {
        PenalizedProblem prob = radial_problem(gamma, 0.1, 1.0 / 64);
        SolveResult r = solve_penalized(prob, quick_opts());
        CHECK(r.converged);
        const ProblemParams& p = prob.params;
        double err = 0.0, inf = 1e300;
        for (std::size_t n : prob.grid->interior_nodes) {
            err = std::max(err, std::fabs(r.field.values[n] -
                                          radial_exact(prob.grid->node_radius(n), p)));
            inf = std::min(inf, r.field.values[n]);
        }
        CHECK(err <= 1e-3);
        CHECK(inf == doctest::Approx(p.c_alpha * p.eps_alpha).epsilon(0.05));
    }
}

TEST_CASE("zero boundary data yields the zero solution") {
    const ProblemParams p = derive_params(0.3, 0.1);
    GridPtr g = make_grid(1, 1.0 / 16, 1.0, Geometry::Box);
    BoundarySpec bc;
    bc.kind = BoundarySpec::Kind::Constant;
    bc.value = 0.0;
    PenalizedProblem prob = make_problem(p, g, make_directions(1), bc);
    SolveResult r = solve_penalized(prob, quick_opts());
    for (std::size_t n : g->interior_nodes) CHECK(r.field.values[n] == 0.0);
}

TEST_CASE("2D disk radial solve is mirror symmetric") {
    const ProblemParams p = derive_params(0.5, 0.1);
    GridPtr g = make_grid(2, 1.0 / 16, 1.0, Geometry::Disk);
    PenalizedProblem prob = make_problem(p, g, make_directions(2), BoundarySpec{});
    SolveResult r = solve_penalized(prob, quick_opts());
    CHECK(r.converged);
    double asym = 0.0;
    for (std::size_t n : g->interior_nodes) {
        const int ix = g->ix_of(n), iy = g->iy_of(n);
        for (auto [mx, my] : {std::pair{-ix, iy}, {ix, -iy}, {iy, ix}}) {
            asym = std::max(asym, std::fabs(r.field.values[n] -
                                            r.field.values[g->index(mx, my)]));
        }
    }
    CHECK(asym <= 1e-8);
}

TEST_CASE("minimality probe: supersolution start stays above") {
    PenalizedProblem prob = radial_problem(0.5, 0.1, 1.0 / 32);
    const SolveOptions o = quick_opts();
    SolveResult from_floor = solve_penalized(prob, o);

    PenalizedProblem probe = prob;
    probe.floor.reset();
    probe.initial = make_supersolution(prob, o).values;
    SolveResult from_above = solve_penalized(probe, o);
    double gap = 0.0;
    for (std::size_t n : prob.grid->interior_nodes) {
        CHECK(from_above.field.values[n] >= from_floor.field.values[n] - 1e-6);
        gap = std::max(gap, from_above.field.values[n] - from_floor.field.values[n]);
    }
    // a positive gap here is the nonuniqueness the minimality discussion
    // anticipates; it only has to be one-sided
    CHECK(gap >= 0.0);
}

TEST_CASE("iterates never sink below the radial floor") {
    PenalizedProblem prob = radial_problem(0.9, 0.1, 1.0 / 32);
    SolveResult r = solve_penalized(prob, quick_opts());
    REQUIRE(prob.floor.has_value());
    for (std::size_t n : prob.grid->interior_nodes)
        CHECK(r.field.values[n] >= (*prob.floor)[n] - 1e-15);
}

TEST_CASE("non-convergence raises with diagnostics") {
    PenalizedProblem prob = radial_problem(0.5, 0.1, 1.0 / 32);
    prob.initial.reset();
    prob.floor.reset();
    SolveOptions o;
    o.tol = 1e-14;
    o.max_iters = 3;
    try {
        solve_penalized(prob, o);
        FAIL("expected SolverError");
    } catch (const SolverError& e) {
        CHECK(e.iterations == 3);
        CHECK(e.update_sup > 1e-14);
    }
}

TEST_CASE("progress records stream when log_every is set") {
    PenalizedProblem prob = radial_problem(0.5, 0.1, 1.0 / 16);
    prob.initial.reset();  // force a genuine run from the subsolution
    prob.floor.reset();
    SolveOptions o = quick_opts();
    o.log_every = 50;
    long records = 0;
    double worst_min_update = 0.0;
    o.progress = [&](const IterationRecord& rec) {
        ++records;
        worst_min_update = std::min(worst_min_update, rec.min_update);
        CHECK(rec.update_sup >= 0.0);
    };
    SolveResult r = solve_penalized(prob, o);
    CHECK(r.converged);
    CHECK(records > 0);
}

TEST_CASE("tabulated boundary size mismatch is rejected") {
    const ProblemParams p = derive_params(0.5, 0.1);
    GridPtr g = make_grid(1, 1.0 / 16, 1.0, Geometry::Box);
    BoundarySpec bc;
    bc.kind = BoundarySpec::Kind::Tabulated;
    bc.table = {1.0};  // two carriers in 1D
    CHECK_THROWS_AS(make_problem(p, g, make_directions(1), bc),
                    std::invalid_argument);
}

TEST_CASE("continuation: trace decreases geometrically on radial data") {
    ContinuationTemplate tmpl;
    tmpl.gamma = 0.0;
    tmpl.grid = make_grid(1, 1.0 / 32, 1.0, Geometry::Box);
    tmpl.dirs = make_directions(1);
    tmpl.bc = BoundarySpec{};
    std::vector<double> eps;
    for (int k = 0; k <= 5; ++k) eps.push_back(0.1 * std::pow(2.0, -k));
    auto [res, trace] = solve_limit(tmpl, eps, quick_opts());
    CHECK(res.converged);
    CHECK(trace.decreasing);
    REQUIRE(trace.diff_sup.size() == eps.size() - 1);
    const double target = std::pow(2.0, -4.0 / 3.0);
    for (std::size_t k = 1; k < trace.diff_sup.size(); ++k) {
        const double ratio = trace.diff_sup[k] / trace.diff_sup[k - 1];
        CHECK(std::fabs(ratio - target) <= 0.15);
    }
    // the final field approaches the homogeneous limit profile
    const ProblemParams plim = derive_params(0.0, 0.0);
    double err = 0.0;
    for (std::size_t n : tmpl.grid->interior_nodes)
        err = std::max(err, std::fabs(res.field.values[n] -
                                      radial_exact(tmpl.grid->node_radius(n), plim)));
    CHECK(err <= 0.05);

    CHECK_THROWS_AS(solve_limit(tmpl, {0.1, 0.2}, quick_opts()),
                    std::invalid_argument);
}

TEST_CASE("continuation: zero data stays identically zero") {
    ContinuationTemplate tmpl;
    tmpl.gamma = 0.5;
    tmpl.grid = make_grid(1, 1.0 / 16, 1.0, Geometry::Box);
    tmpl.dirs = make_directions(1);
    tmpl.bc.kind = BoundarySpec::Kind::Constant;
    tmpl.bc.value = 0.0;
    auto [res, trace] = solve_limit(tmpl, {0.1, 0.05, 0.025}, quick_opts());
    for (std::size_t n : tmpl.grid->interior_nodes)
        CHECK(res.field.values[n] == 0.0);
    for (double d : trace.diff_sup) CHECK(d == 0.0);
}

TEST_CASE("subsolution tends to the harmonic extension for large eps") {
    // gamma > 0: the constant source sup-rhs shrinks as eps grows, so the
    // constant-source solve approaches the infinity-harmonic extension.
    const double gamma = 0.5;
    const ProblemParams p = derive_params(gamma, 40.0);
    GridPtr g = make_grid(1, 1.0 / 16, 1.0, Geometry::Box);
    BoundarySpec bc;
    bc.kind = BoundarySpec::Kind::Constant;
    bc.value = 1.0;
    PenalizedProblem prob = make_problem(p, g, make_directions(1), bc);
    const SolveOptions o = quick_opts();
    Field sub = make_subsolution(prob, o);
    Field sup = make_supersolution(prob, o);
    const double source = rhs_sup(p);
    for (std::size_t n : g->interior_nodes)
        CHECK(std::fabs(sub.values[n] - sup.values[n]) <= 5.0 * source + 1e-6);
}
