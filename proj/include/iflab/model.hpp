#pragma once

#include <optional>
#include <string>

namespace iflab {

/// Shape of the penalty cutoff on its ramp interval [delta/2, delta].
enum class RampKind { Linear, Smoothstep };

/// Problem parameters and every derived constant, computed once at
/// construction. gamma is the singularity exponent, epsilon the
/// penalization scale, delta the cutoff threshold.
///
/// Derived:
///   alpha   = 4/(3+gamma)            growth exponent, in (1, 4/3]
///   sigma   = 1 - 1/alpha            = (1-gamma)/4, in (0, 1/4]
///   c_alpha = (1/(alpha^3(alpha-1)))^(1/(3+gamma))
struct ProblemParams {
    double gamma = 0.0;
    double epsilon = 0.1;
    double delta = 0.0;
    double alpha = 0.0;
    double sigma = 0.0;
    double c_alpha = 0.0;
    RampKind ramp = RampKind::Linear;

    /// epsilon^alpha, cached; the penalty rescale unit.
    double eps_alpha = 0.0;
};

/// Largest delta for which the barrier inequalities hold:
/// 8 d^3 a^4 <= (2d)^-gamma binds (the annulus bound), giving
/// delta_max = alpha^-alpha / 2.
double max_admissible_delta(double gamma);

/// Build fully derived parameters. delta defaults to
/// max_admissible_delta(gamma)/2. Throws std::invalid_argument naming
/// the offending field when out of range.
ProblemParams derive_params(double gamma, double epsilon,
                            std::optional<double> delta = std::nullopt,
                            RampKind ramp = RampKind::Linear);

/// Cutoff B(s): 0 for s <= delta/2, 1 for s >= delta, ramp in between.
double penalty_base(double s, double delta, RampKind ramp = RampKind::Linear);

/// B_eps(s) = B(s / eps^alpha).
double penalty_eps(double s, const ProblemParams& p);

/// Right-hand side B_eps(s) s^-gamma, hard-zeroed for
/// s <= delta eps^alpha / 2 where B_eps vanishes. Finite and Lipschitz
/// on [0, inf). Throws std::domain_error for s < 0.
double rhs(double s, const ProblemParams& p);

/// Same, but clamps negative arguments to the dead zone instead of
/// throwing; used inside solver sweeps where transients may undershoot.
double rhs_unchecked(double s, const ProblemParams& p);

/// sup over s >= 0 of rhs = (delta eps^alpha)^-gamma, attained at the
/// upper ramp end.
double rhs_sup(const ProblemParams& p);

/// Global Lipschitz constant of rhs on [0, inf).
double rhs_lipschitz(const ProblemParams& p);

std::string to_string(RampKind k);

}  // namespace iflab
