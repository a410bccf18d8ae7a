#pragma once

#include "iflab/model.hpp"

#include <cstddef>

namespace iflab {

/// Radial supersolution spec: core radius sigma*eta, annulus up to eta,
/// power tail beyond. Requires eta >= 1.
struct BarrierSpec {
    double eta = 1.0;
    ProblemParams params;

    /// Annulus quadratic coefficient A = delta alpha^2 eta^(alpha-2).
    double coeff_a() const;
    /// Tail offset D = delta (1 - eta^alpha).
    double coeff_d() const;
};

BarrierSpec make_barrier(double eta, const ProblemParams& p);

/// Exact radial family value C_alpha (s + eps)^alpha; with eps = 0 the
/// limiting profile C_alpha s^alpha.
double radial_exact(double s, const ProblemParams& p);

/// First derivative of the radial family in s.
double radial_exact_derivative(double s, const ProblemParams& p);

/// w''(w')^2 - w^-gamma for the exact family; identically 0 up to
/// rounding. Throws std::domain_error at s = 0 with eps = 0.
double radial_ode_residual(double s, const ProblemParams& p);

/// Same residual for a family with a perturbed leading coefficient
/// c (instead of c_alpha); used to probe oracle sensitivity.
double radial_ode_residual_coeff(double s, double c, const ProblemParams& p);

/// Compatible boundary value C_eps = c_alpha (R + eps)^alpha.
double boundary_for_radius(double R, const ProblemParams& p);

/// Inverse at eps = 0: R = (C / c_alpha)^(1/alpha).
double radius_for_boundary(double C, const ProblemParams& p);

/// Barrier value; piecewise radial:
///   delta                                      on [0, sigma eta]
///   delta [alpha^2 eta^(alpha-2)(r - sigma eta)^2 + 1] on [sigma eta, eta]
///   delta [2 r^alpha - eta^alpha + 1]          on [eta, inf)
double barrier_value(double r, const BarrierSpec& b);

/// One-sided derivative (branch of r; closed on the outer side at
/// breakpoints).
double barrier_derivative(double r, const BarrierSpec& b);

/// Infinity Laplacian of the barrier, Phi'' (Phi')^2, per branch.
/// Breakpoints evaluate on the outer (closed) side.
double barrier_inf_laplacian(double r, const BarrierSpec& b);

/// Scaled barrier of Prop-4.3 type: eps^alpha Phi_{r/eps}(x/eps).
/// Requires r >= eps. Constant delta eps^alpha inside sigma r and
/// >= delta r^alpha outside r.
double barrier_scaled(double x_norm, double r, const ProblemParams& p);

/// Classical planar infinity-harmonic probe |x|^(4/3) - |y|^(4/3).
double aronson(double x, double y);

struct VerificationReport {
    bool passed = false;
    double max_violation = 0.0;   ///< max over samples of (LHS - RHS)+
    double worst_r = 0.0;
    std::size_t samples = 0;
};

/// Samples the supersolution inequality Phi''(Phi')^2 <= B(Phi) Phi^-gamma
/// on a log-uniform mesh over (0, 10 eta] plus r = 0 and both sides of
/// each breakpoint. Passes iff the violation is <= 1e-12.
VerificationReport verify_supersolution(const BarrierSpec& b, std::size_t n_samples);

}  // namespace iflab
