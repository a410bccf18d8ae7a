#pragma once

#include "iflab/grid.hpp"
#include "iflab/model.hpp"

#include <map>
#include <string>
#include <vector>

namespace iflab {

/// Node subset of a grid.
struct NodeSet {
    GridPtr grid;
    std::vector<std::uint8_t> member;

    std::size_t count() const;
    std::vector<std::size_t> nodes() const;
};

struct FitResult {
    double alpha_est = 0.0;
    double c_est = 0.0;
    double r_squared = 0.0;
    std::vector<double> radii_used;
};

/// Pass/fail plus the empirical constants of one theorem-check.
struct AnalysisReport {
    std::string check;
    bool passed = false;
    double worst_x = 0.0;
    double worst_y = 0.0;
    std::map<std::string, double> metrics;
    std::string note;
};

/// Max of f over grid nodes within Euclidean distance r of the center
/// node (the center always counts).
double ball_sup(const Field& f, std::size_t center, double r);

/// {f > threshold}.
NodeSet positivity_set(const Field& f, double threshold);

/// Members of {f > threshold} with a stencil neighbor outside it.
NodeSet free_boundary(const Field& f, double threshold, const DirectionSet& dirs);

/// Zero-side band: nodes outside {f > threshold} adjacent to it. The
/// gradient-vanishing check anchors here (where f sits at the dead level),
/// mirroring the radial example's origin.
NodeSet free_boundary_outer(const Field& f, double threshold, const DirectionSet& dirs);

/// Structural threshold for extracting the free-boundary band of a
/// continuation/limit field: min(f) + half a grid cell of the limit
/// profile's growth. (The machine-epsilon default never triggers on a
/// positive penalized minimum.)
double fb_threshold_limit(const Field& f, const ProblemParams& p);

/// Least-squares slope of log ball_sup vs log r over the given radii.
/// Throws std::runtime_error with fewer than 3 usable radii.
FitResult growth_exponent_fit(const Field& f, std::size_t center,
                              const std::vector<double>& radii);

/// Dyadic radii r0/2^k in [lo, hi], descending from hi.
std::vector<double> dyadic_radii(double lo, double hi);

/// sup_{B_kappa(x)} f <= C kappa^alpha over all interior x and dyadic
/// kappa in [max(4h, f(x)^{1/alpha}), kappa0]; reports C_emp.
AnalysisReport oscillation_check(const Field& f, const ProblemParams& p,
                                 double kappa0);

/// sup_{B_r(x)} f >= delta r^alpha (1 - 5h/r) over x in {f >= delta eps^alpha},
/// dyadic r in [max(eps, 4h), dist(x)/2].
AnalysisReport nondegeneracy_check(const Field& f, const ProblemParams& p);

/// sup_{B_rho(x)} f <= C (rho + f(x)^{1/alpha})^alpha over the flat set
/// {f < delta0}, delta0 calibrated as the 10% value quantile.
AnalysisReport flatness_growth_check(const Field& f, const ProblemParams& p,
                                     double rho_max);

/// One-sided difference quotients at free-boundary nodes decay like
/// t^(alpha-1): fitted exponent >= (alpha-1) - 0.15 at every band node.
AnalysisReport gradient_at_fb_check(const Field& f, const ProblemParams& p,
                                    const NodeSet& fb, const DirectionSet& dirs);

/// Fraction of positivity nodes among grid nodes in B_kappa(center).
double density_ratio(const Field& f, std::size_t center, double kappa,
                     double threshold);

/// For each FB node x and dyadic rho, the largest tau' such that some
/// ball B_{tau' rho}(y) in B_rho(x) avoids the free boundary; reports
/// tau_emp = min over x of the max over y.
AnalysisReport porosity_estimate(const Field& f, const NodeSet& fb,
                                 double rho_max);

/// Scaling covariance: u_iota(x) = f(iota x)/iota^alpha on the stride
/// sublattice satisfies the (eps/iota)-residual = iota^(alpha gamma) x
/// base residual, node by node. iota must be a power of 2.
AnalysisReport scaling_residual_check(const Field& f, const ProblemParams& p,
                                      const DirectionSet& dirs, int iota);

/// Sampled discrete Lipschitz bound: every stencil quotient of f at x is
/// <= 2|f|_inf / dist(x, boundary) + 10 h |f|_inf.
AnalysisReport lipschitz_bound_check(const Field& f, const DirectionSet& dirs);

}  // namespace iflab
