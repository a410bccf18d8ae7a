#pragma once

#include "iflab/grid.hpp"
#include "iflab/model.hpp"

namespace iflab {

/// Neighbor extrema at a node: values and the Euclidean step lengths of
/// the realizing offsets. Ties resolve to the first offset in the
/// direction set's (length, lexicographic) order.
struct LocalExtrema {
    double max_value = 0.0;
    double min_value = 0.0;
    double len_max = 0.0;
    double len_min = 0.0;
};

LocalExtrema local_extrema(const Field& f, std::size_t node, const DirectionSet& dirs);

/// Slope-ratio floor of the gradient-magnitude factor: below it the
/// scheme switches from the product D+ D- to the dominant slope squared,
/// which keeps the operator responsive at fronts and extrema.
inline constexpr double kGradRatioFloor = 0.5;

/// Stencil core: D+ = (M-u)/lM, D- = (u-m)/lm, ell = (lM+lm)/2,
/// L = ((D+ - D-)/ell) * max(D+ D-, 0.5 max(|D+|,|D-|)^2).
/// Exactly zero on affine data; 2nd order on smooth data away from
/// critical points; scales as iota^(4-3alpha) under u -> u(iota x)/iota^alpha.
double stencil_value(double u, const LocalExtrema& e);

double discrete_inf_laplacian(const Field& f, std::size_t node, const DirectionSet& dirs);

/// L_h f - rhs(f) at interior nodes, 0 at boundary carriers.
Field residual_field(const Field& f, const ProblemParams& p, const DirectionSet& dirs);

/// Same with rhs identically 0 (consistency probes on harmonic data).
Field operator_field(const Field& f, const DirectionSet& dirs);

}  // namespace iflab
