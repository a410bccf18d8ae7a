#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace iflab {

enum class Geometry { Box, Disk };

/// Uniform node lattice over [-R,R] (1D) or [-R,R]^2 (2D). Node
/// coordinates are exact integer multiples of h. The outer `margin`
/// rings (box) resp. all nodes with |x| >= R (disk) are boundary
/// carriers; every interior node has its full stencil inside the
/// lattice.
class Grid {
public:
    int dim = 1;
    double h = 0.0;
    double radius = 0.0;  // extent R
    Geometry geometry = Geometry::Box;
    int margin = 1;       // stencil reach in lattice units

    int half_span = 0;    // lattice index range per axis: [-half_span, half_span]
    int axis_nodes = 0;   // 2*half_span + 1

    std::vector<std::uint8_t> interior_mask;
    std::vector<std::size_t> interior_nodes;  // flat indices, ascending

    std::size_t size() const { return interior_mask.size(); }
    bool is_interior(std::size_t n) const { return interior_mask[n] != 0; }

    std::size_t index(int ix, int iy = 0) const {
        const std::size_t col = static_cast<std::size_t>(ix + half_span);
        if (dim == 1) return col;
        return static_cast<std::size_t>(iy + half_span) * axis_nodes + col;
    }
    int ix_of(std::size_t n) const {
        return static_cast<int>(n % axis_nodes) - half_span;
    }
    int iy_of(std::size_t n) const {
        return dim == 1 ? 0 : static_cast<int>(n / axis_nodes) - half_span;
    }
    bool in_lattice(int ix, int iy = 0) const {
        return ix >= -half_span && ix <= half_span &&
               (dim == 1 || (iy >= -half_span && iy <= half_span));
    }

    double x_of(std::size_t n) const { return ix_of(n) * h; }
    double y_of(std::size_t n) const { return iy_of(n) * h; }
    double node_radius(std::size_t n) const;

    /// Distance from a node to the boundary of the domain.
    double dist_to_boundary(std::size_t n) const;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Builds a grid; R must be an integer multiple of h (to 1e-9 R).
/// margin >= 1; use margin 2 with the 16-direction stencil.
GridPtr make_grid(int dim, double h, double R, Geometry geometry, int margin = 1);

/// Real value per node, tied to its grid.
struct Field {
    GridPtr grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(GridPtr g, double fill = 0.0)
        : grid(std::move(g)), values(grid->size(), fill) {}

    double& operator[](std::size_t n) { return values[n]; }
    double operator[](std::size_t n) const { return values[n]; }
};

/// Lattice offset with its Euclidean length in units of h.
struct Direction {
    int dx = 0;
    int dy = 0;
    double norm = 0.0;
};

/// Symmetric direction set, sorted by (length, lexicographic offset) so
/// value ties resolve to the shortest, then lexicographically smallest
/// offset. 1D: {-1,+1}. 2D: the 8 neighbors; ring16 adds the 8
/// knight-type offsets of length sqrt(5).
struct DirectionSet {
    int dim = 1;
    bool ring16 = false;
    std::vector<Direction> dirs;

    int reach() const { return ring16 ? 2 : 1; }
};

DirectionSet make_directions(int dim, bool ring16 = false);

}  // namespace iflab
