#include "iflab/closed_forms.hpp"
#include "iflab/fd_operator.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace iflab;

namespace {

Field sample_1d(GridPtr g, double (*fn)(double)) {
    Field f(g);
    for (std::size_t n = 0; n < g->size(); ++n) f.values[n] = fn(g->x_of(n));
    return f;
}

}  // namespace

TEST_CASE("local extrema basics") {
    GridPtr g = make_grid(1, 0.1, 1.0, Geometry::Box);
    const DirectionSet ds = make_directions(1);

    Field c(g, 3.5);
    const LocalExtrema ec = local_extrema(c, g->index(0), ds);
    CHECK(ec.max_value == 3.5);
    CHECK(ec.min_value == 3.5);

    Field lin = sample_1d(g, [](double x) { return x; });
    const LocalExtrema el = local_extrema(lin, g->index(0), ds);
    CHECK(el.max_value == doctest::Approx(0.1));
    CHECK(el.min_value == doctest::Approx(-0.1));
    CHECK(el.len_max == doctest::Approx(0.1));
}

TEST_CASE("2D extrema on x+y with the 8-stencil") {
    GridPtr g = make_grid(2, 1.0, 4.0, Geometry::Box);
    const DirectionSet ds = make_directions(2);
    Field f(g);
    for (std::size_t n = 0; n < g->size(); ++n)
        f.values[n] = g->x_of(n) + g->y_of(n);
    const LocalExtrema e = local_extrema(f, g->index(0, 0), ds);
    CHECK(e.max_value == doctest::Approx(2.0));
    CHECK(e.min_value == doctest::Approx(-2.0));
    CHECK(e.len_max == doctest::Approx(std::sqrt(2.0)));
    CHECK(e.len_min == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("value ties prefer the shortest offset") {
    // y-constant field rising in x: the max value is attained by three
    // offsets; the axis one must win or 1D profiles extended to 2D lose
    // their slope scale.
    GridPtr g = make_grid(2, 0.5, 2.0, Geometry::Box);
    const DirectionSet ds = make_directions(2);
    Field f(g);
    for (std::size_t n = 0; n < g->size(); ++n) f.values[n] = 2.0 * g->x_of(n);
    const LocalExtrema e = local_extrema(f, g->index(0, 0), ds);
    CHECK(e.len_max == doctest::Approx(0.5));
    CHECK(e.len_min == doctest::Approx(0.5));
    CHECK(discrete_inf_laplacian(f, g->index(0, 0), ds) == 0.0);
}

TEST_CASE("affine fields are killed exactly (dyadic data)") {
    GridPtr g1 = make_grid(1, 0.015625, 1.0, Geometry::Box);
    const DirectionSet d1 = make_directions(1);
    Field f1 = sample_1d(g1, [](double x) { return 3.0 * x + 0.75; });
    for (std::size_t n : g1->interior_nodes)
        CHECK(discrete_inf_laplacian(f1, n, d1) == 0.0);

    GridPtr g2 = make_grid(2, 0.25, 1.0, Geometry::Box);
    const DirectionSet d2 = make_directions(2);
    Field f2(g2);
    for (std::size_t n = 0; n < g2->size(); ++n)
        f2.values[n] = 1.5 * g2->x_of(n) - 0.25 * g2->y_of(n) + 2.0;
    for (std::size_t n : g2->interior_nodes)
        CHECK(discrete_inf_laplacian(f2, n, d2) == 0.0);
}

TEST_CASE("affine fields with generic slopes cancel to rounding") {
    // non-dyadic slopes round the node values; the invariant allows
    // cancellation noise up to ~1e-14 of the operator scale |Du|^3/h
    GridPtr g = make_grid(1, 0.01, 1.0, Geometry::Box);
    const DirectionSet ds = make_directions(1);
    Field f = sample_1d(g, [](double x) { return 3.0 * x + 0.7; });
    const double scale = 27.0 / 0.01;
    for (std::size_t n : g->interior_nodes)
        CHECK(std::fabs(discrete_inf_laplacian(f, n, ds)) <= 1e-13 * scale);
}

TEST_CASE("hand value: u = x^2 at x = 1, h = 0.1") {
    GridPtr g = make_grid(1, 0.1, 2.0, Geometry::Box);
    const DirectionSet ds = make_directions(1);
    Field f = sample_1d(g, [](double x) { return x * x; });
    const std::size_t n = g->index(10);
    const LocalExtrema e = local_extrema(f, n, ds);
    CHECK(e.max_value == doctest::Approx(1.21).epsilon(1e-14));
    CHECK(e.min_value == doctest::Approx(0.81).epsilon(1e-14));
    CHECK(discrete_inf_laplacian(f, n, ds) == doctest::Approx(7.98).epsilon(1e-12));
}

TEST_CASE("consistency on smooth data improves with h") {
    // u = x^2: exact operator is 8 x^2
    double errs[2];
    int k = 0;
    for (double h : {0.1, 0.05}) {
        GridPtr g = make_grid(1, h, 2.0, Geometry::Box);
        Field f = sample_1d(g, [](double x) { return x * x; });
        const DirectionSet ds = make_directions(1);
        const std::size_t n = g->index(static_cast<int>(std::lround(1.0 / h)));
        errs[k++] = std::fabs(discrete_inf_laplacian(f, n, ds) - 8.0);
    }
    CHECK(errs[1] < errs[0]);
}

TEST_CASE("residual on the exact radial family vanishes away from the vertex") {
    const ProblemParams p = derive_params(0.0, 0.1);
    double sup[2];
    int k = 0;
    for (double h : {1.0 / 64, 1.0 / 128}) {
        GridPtr g = make_grid(1, h, 1.0, Geometry::Box);
        const DirectionSet ds = make_directions(1);
        Field f(g);
        for (std::size_t n = 0; n < g->size(); ++n)
            f.values[n] = radial_exact(g->node_radius(n), p);
        Field r = residual_field(f, p, ds);
        double s = 0.0;
        for (std::size_t n : g->interior_nodes)
            if (g->node_radius(n) >= 4.0 * h) s = std::max(s, std::fabs(r.values[n]));
        sup[k++] = s;
    }
    CHECK(sup[0] < 2e-3);
    CHECK(sup[1] < sup[0] / 2.5);  // second-order away from the kink
}

TEST_CASE("operator is monotone in the neighbor extremes") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    LocalExtrema e;
    e.len_max = 0.1;
    e.len_min = 0.1 * std::sqrt(2.0);
    for (int trial = 0; trial < 2000; ++trial) {
        double u = U(rng);
        double M = u + std::fabs(U(rng));
        double m = u - std::fabs(U(rng));
        e.max_value = M;
        e.min_value = m;
        const double base = stencil_value(u, e);
        e.max_value = M + 0.05;
        CHECK(stencil_value(u, e) >= base - 1e-14);
        e.max_value = M;
        e.min_value = m + 0.05 > u ? m : m + 0.05;  // keep m <= u
        CHECK(stencil_value(u, e) >= base - 1e-14);
        e.min_value = m;
    }
}

TEST_CASE("operator is nonincreasing in u on the interior slope band") {
    // On slope ratios in [2-sqrt(3), 2+sqrt(3)] the product branch has
    // d/du <= 0; the middle band of [m, M] stays inside that regime.
    LocalExtrema e;
    e.len_max = e.len_min = 0.05;
    e.max_value = 1.0;
    e.min_value = -1.0;
    double prev = stencil_value(-0.4, e);
    for (int i = 1; i <= 100; ++i) {
        const double u = -0.4 + 0.8 * i / 100.0;
        const double v = stencil_value(u, e);
        CHECK(v <= prev + 1e-12);
        prev = v;
    }
}

TEST_CASE("mirror symmetry of operator values") {
    GridPtr g = make_grid(2, 0.25, 1.0, Geometry::Box);
    const DirectionSet ds = make_directions(2);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    Field f(g);
    for (std::size_t n = 0; n < g->size(); ++n) f.values[n] = U(rng);
    Field fm(g);
    for (std::size_t n = 0; n < g->size(); ++n)
        fm.values[n] = f.values[g->index(-g->ix_of(n), -g->iy_of(n))];
    for (std::size_t n : g->interior_nodes) {
        const std::size_t nm = g->index(-g->ix_of(n), -g->iy_of(n));
        CHECK(discrete_inf_laplacian(f, n, ds) ==
              doctest::Approx(discrete_inf_laplacian(fm, nm, ds)).epsilon(1e-15));
    }
}

TEST_CASE("scaling covariance: iota^(4-3alpha) = iota^(alpha gamma)") {
    const double gamma = 0.5;
    const ProblemParams p = derive_params(gamma, 0.1);
    const double iota = 2.0;
    const double h = 1.0 / 32;
    GridPtr g = make_grid(1, h, 1.0, Geometry::Box);
    GridPtr gi = make_grid(1, h / iota, 1.0 / iota, Geometry::Box);
    const DirectionSet ds = make_directions(1);
    Field f(g);
    for (std::size_t n = 0; n < g->size(); ++n) {
        const double x = g->x_of(n);
        f.values[n] = 0.3 + std::cos(2.0 * x) + 0.2 * x * x * x;  // generic smooth
    }
    Field fi(gi);
    for (std::size_t n = 0; n < gi->size(); ++n)
        fi.values[n] =
            f.values[g->index(gi->ix_of(n))] / std::pow(iota, p.alpha);
    const double fac = std::pow(iota, 4.0 - 3.0 * p.alpha);
    CHECK(fac == doctest::Approx(std::pow(iota, p.alpha * gamma)).epsilon(1e-14));
    for (std::size_t n : gi->interior_nodes) {
        const double lhs = discrete_inf_laplacian(fi, n, ds);
        const double rhs_v =
            fac * discrete_inf_laplacian(f, g->index(gi->ix_of(n)), ds);
        CHECK(lhs == doctest::Approx(rhs_v).epsilon(1e-10));
    }
}

TEST_CASE("aronson probe: direction resolution dominates the residual") {
    // The stencil quantizes the gradient direction, so the probe residual
    // saturates at an h-independent floor; the 16-ring lowers that floor
    // well below the 8-stencil's, and on the diagonal (gradient aligned
    // with a lattice direction) the operator vanishes to rounding.
    auto probe = [](double h, bool ring16) {
        GridPtr g = make_grid(2, h, 2.0, Geometry::Box, ring16 ? 2 : 1);
        const DirectionSet ds = make_directions(2, ring16);
        Field f(g);
        for (std::size_t n = 0; n < g->size(); ++n)
            f.values[n] = aronson(g->x_of(n), g->y_of(n));
        Field r = operator_field(f, ds);
        double s = 0.0, diag = 0.0;
        for (std::size_t n : g->interior_nodes) {
            const double ax = std::fabs(g->x_of(n)), ay = std::fabs(g->y_of(n));
            if (std::min(ax, ay) < 0.1 - 1e-12) continue;
            s = std::max(s, std::fabs(r.values[n]));
            if (ax == ay) diag = std::max(diag, std::fabs(r.values[n]));
        }
        return std::pair{s, diag};
    };
    const auto [s16a, d16a] = probe(0.1, true);
    const auto [s16b, d16b] = probe(0.05, true);
    const auto [s8a, d8a] = probe(0.1, false);
    CHECK(s16a < 0.5 * s8a);              // wider ring resolves directions better
    CHECK(std::fabs(s16b - s16a) < 0.3 * s16a);  // floor, not divergence
    CHECK(d16a <= 1e-10);                 // aligned direction: consistent
    CHECK(d16b <= 1e-10);
}
