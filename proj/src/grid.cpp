#include "iflab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace iflab {

double Grid::node_radius(std::size_t n) const {
    const double x = x_of(n);
    if (dim == 1) return std::fabs(x);
    const double y = y_of(n);
    return std::hypot(x, y);
}

double Grid::dist_to_boundary(std::size_t n) const {
    if (geometry == Geometry::Disk) return radius - node_radius(n);
    double d = radius - std::fabs(x_of(n));
    if (dim == 2) d = std::min(d, radius - std::fabs(y_of(n)));
    return d;
}

GridPtr make_grid(int dim, double h, double R, Geometry geometry, int margin) {
    if (dim != 1 && dim != 2)
        throw std::invalid_argument("make_grid: dim must be 1 or 2");
    if (!(h > 0.0) || !(R > 0.0))
        throw std::invalid_argument("make_grid: h and R must be positive");
    if (margin < 1) throw std::invalid_argument("make_grid: margin must be >= 1");
    const double n_real = R / h;
    const int N = static_cast<int>(std::lround(n_real));
    if (N < 2 * margin + 2)
        throw std::invalid_argument("make_grid: grid too coarse for margin");
    if (std::fabs(N * h - R) > 1e-9 * std::max(1.0, R))
        throw std::invalid_argument("make_grid: R must be an integer multiple of h (R=" +
                                    std::to_string(R) + ", h=" + std::to_string(h) + ")");

    auto g = std::make_shared<Grid>();
    g->dim = dim;
    g->h = h;
    g->radius = R;
    g->geometry = geometry;
    g->margin = margin;
    g->half_span = (geometry == Geometry::Box) ? N : N + 2 * margin + 1;
    g->axis_nodes = 2 * g->half_span + 1;

    const std::size_t total = (dim == 1)
        ? static_cast<std::size_t>(g->axis_nodes)
        : static_cast<std::size_t>(g->axis_nodes) * g->axis_nodes;
    g->interior_mask.assign(total, 0);

    const int M = g->half_span;
    auto mark = [&](int ix, int iy) {
        bool in;
        if (geometry == Geometry::Box) {
            in = std::max(std::abs(ix), std::abs(iy)) <= N - margin;
        } else {
            const double r = std::hypot(ix * h, iy * h);
            in = r < R - 1e-12 * R;
        }
        if (in) {
            const std::size_t n = g->index(ix, iy);
            g->interior_mask[n] = 1;
        }
    };
    if (dim == 1) {
        for (int ix = -M; ix <= M; ++ix) mark(ix, 0);
    } else {
        for (int iy = -M; iy <= M; ++iy)
            for (int ix = -M; ix <= M; ++ix) mark(ix, iy);
    }
    g->interior_nodes.clear();
    for (std::size_t n = 0; n < total; ++n)
        if (g->interior_mask[n]) g->interior_nodes.push_back(n);
    return g;
}

DirectionSet make_directions(int dim, bool ring16) {
    DirectionSet ds;
    ds.dim = dim;
    ds.ring16 = ring16 && dim == 2;
    if (dim == 1) {
        ds.dirs = {{-1, 0, 1.0}, {1, 0, 1.0}};
        return ds;
    }
    std::vector<Direction> dirs;
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
            if (dx != 0 || dy != 0)
                dirs.push_back({dx, dy, std::hypot(double(dx), double(dy))});
    if (ds.ring16) {
        for (int dy = -2; dy <= 2; ++dy)
            for (int dx = -2; dx <= 2; ++dx)
                if (std::abs(dx) + std::abs(dy) == 3)
                    dirs.push_back({dx, dy, std::hypot(double(dx), double(dy))});
    }
    std::sort(dirs.begin(), dirs.end(), [](const Direction& a, const Direction& b) {
        if (a.norm != b.norm) return a.norm < b.norm;
        if (a.dx != b.dx) return a.dx < b.dx;
        return a.dy < b.dy;
    });
    ds.dirs = std::move(dirs);
    return ds;
}

}  // namespace iflab
