#include "iflab/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace iflab {

double max_admissible_delta(double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("max_admissible_delta: gamma must be in [0,1), got " +
                                    std::to_string(gamma));
    const double alpha = 4.0 / (3.0 + gamma);
    return 0.5 * std::pow(alpha, -alpha);
}

ProblemParams derive_params(double gamma, double epsilon,
                            std::optional<double> delta, RampKind ramp) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("derive_params: gamma must be in [0,1), got " +
                                    std::to_string(gamma));
    // epsilon = 0 parameterizes the limit objects (closed forms only);
    // penalized solves require epsilon > 0 and check it on problem setup.
    if (!(epsilon >= 0.0))
        throw std::invalid_argument("derive_params: epsilon must be >= 0, got " +
                                    std::to_string(epsilon));
    const double dmax = max_admissible_delta(gamma);
    double d = delta.value_or(0.5 * dmax);
    if (!(d > 0.0 && d <= dmax)) {
        std::ostringstream os;
        os << "derive_params: delta must be in (0, " << dmax << "], got " << d;
        throw std::invalid_argument(os.str());
    }
    ProblemParams p;
    p.gamma = gamma;
    p.epsilon = epsilon;
    p.delta = d;
    p.ramp = ramp;
    p.alpha = 4.0 / (3.0 + gamma);
    if (!(p.alpha > 1.0))
        throw std::invalid_argument(
            "derive_params: gamma so close to 1 that alpha rounds to 1");
    p.sigma = 1.0 - 1.0 / p.alpha;
    p.c_alpha = std::pow(1.0 / (p.alpha * p.alpha * p.alpha * (p.alpha - 1.0)),
                         1.0 / (3.0 + gamma));
    p.eps_alpha = std::pow(epsilon, p.alpha);
    return p;
}

double penalty_base(double s, double delta, RampKind ramp) {
    if (s <= 0.5 * delta) return 0.0;
    if (s >= delta) return 1.0;
    const double t = 2.0 * s / delta - 1.0;  // in (0,1) on the ramp
    if (ramp == RampKind::Linear) return t;
    return t * t * (3.0 - 2.0 * t);
}

double penalty_eps(double s, const ProblemParams& p) {
    // eps = 0: the limit cutoff, the indicator of {s > 0}
    if (s <= 0.5 * p.delta * p.eps_alpha) return s > 0.0 && p.eps_alpha == 0.0 ? 1.0 : 0.0;
    return penalty_base(s / p.eps_alpha, p.delta, p.ramp);
}

double rhs_unchecked(double s, const ProblemParams& p) {
    const double lo = 0.5 * p.delta * p.eps_alpha;
    if (s <= lo) return 0.0;  // covers s <= 0 for the eps = 0 limit too
    const double b = penalty_eps(s, p);
    if (p.gamma == 0.0) return b;
    return b * std::pow(s, -p.gamma);
}

double rhs(double s, const ProblemParams& p) {
    if (s < 0.0)
        throw std::domain_error("rhs: negative argument " + std::to_string(s));
    return rhs_unchecked(s, p);
}

double rhs_sup(const ProblemParams& p) {
    return std::pow(p.delta * p.eps_alpha, -p.gamma);
}

double rhs_lipschitz(const ProblemParams& p) {
    // On the ramp |d/ds| <= B'*s^-g + g*B*s^-(g+1) with s >= delta*eps^a/2;
    // beyond it |d/ds| = g*s^-(g+1). Ramp slope: 2/(delta eps^a) linear,
    // 3/(delta eps^a) smoothstep peak.
    const double c = p.delta * p.eps_alpha;
    const double ramp_slope = (p.ramp == RampKind::Linear ? 2.0 : 3.0) / c;
    const double smin = 0.5 * c;
    const double pow_part = std::pow(smin, -p.gamma);
    return ramp_slope * pow_part + p.gamma * pow_part / smin;
}

std::string to_string(RampKind k) {
    return k == RampKind::Linear ? "linear" : "smoothstep";
}

}  // namespace iflab
