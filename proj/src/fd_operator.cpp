#include "iflab/fd_operator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace iflab {

LocalExtrema local_extrema(const Field& f, std::size_t node, const DirectionSet& dirs) {
    const Grid& g = *f.grid;
    if (!g.is_interior(node))
        throw std::invalid_argument("local_extrema: node is not interior");
    const int ix = g.ix_of(node), iy = g.iy_of(node);
    LocalExtrema e;
    bool first = true;
    for (const Direction& d : dirs.dirs) {
        const int jx = ix + d.dx, jy = iy + d.dy;
        if (!g.in_lattice(jx, jy))
            throw std::logic_error("local_extrema: stencil neighbor missing (grid bug)");
        const double v = f.values[g.index(jx, jy)];
        const double len = d.norm * g.h;
        if (first) {
            e.max_value = e.min_value = v;
            e.len_max = e.len_min = len;
            first = false;
            continue;
        }
        if (v > e.max_value) { e.max_value = v; e.len_max = len; }
        if (v < e.min_value) { e.min_value = v; e.len_min = len; }
    }
    return e;
}

double stencil_value(double u, const LocalExtrema& e) {
    const double dp = (e.max_value - u) / e.len_max;
    const double dm = (u - e.min_value) / e.len_min;
    const double ell = 0.5 * (e.len_max + e.len_min);
    const double dom = std::max(std::fabs(dp), std::fabs(dm));
    const double grad2 = std::max(dp * dm, kGradRatioFloor * dom * dom);
    return ((dp - dm) / ell) * grad2;
}

double discrete_inf_laplacian(const Field& f, std::size_t node, const DirectionSet& dirs) {
    return stencil_value(f.values[node], local_extrema(f, node, dirs));
}

Field residual_field(const Field& f, const ProblemParams& p, const DirectionSet& dirs) {
    Field r(f.grid, 0.0);
    const auto& nodes = f.grid->interior_nodes;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(nodes.size()); ++k) {
        const std::size_t n = nodes[k];
        r.values[n] = discrete_inf_laplacian(f, n, dirs) - rhs_unchecked(f.values[n], p);
    }
    return r;
}

Field operator_field(const Field& f, const DirectionSet& dirs) {
    Field r(f.grid, 0.0);
    const auto& nodes = f.grid->interior_nodes;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(nodes.size()); ++k) {
        const std::size_t n = nodes[k];
        r.values[n] = discrete_inf_laplacian(f, n, dirs);
    }
    return r;
}

}  // namespace iflab
