#include "iflab/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace iflab {

double BarrierSpec::coeff_a() const {
    return params.delta * params.alpha * params.alpha *
           std::pow(eta, params.alpha - 2.0);
}

double BarrierSpec::coeff_d() const {
    return params.delta * (1.0 - std::pow(eta, params.alpha));
}

BarrierSpec make_barrier(double eta, const ProblemParams& p) {
    if (!(eta >= 1.0))
        throw std::invalid_argument("make_barrier: eta must be >= 1, got " +
                                    std::to_string(eta));
    return BarrierSpec{eta, p};
}

double radial_exact(double s, const ProblemParams& p) {
    return p.c_alpha * std::pow(s + p.epsilon, p.alpha);
}

double radial_exact_derivative(double s, const ProblemParams& p) {
    return p.c_alpha * p.alpha * std::pow(s + p.epsilon, p.alpha - 1.0);
}

double radial_ode_residual_coeff(double s, double c, const ProblemParams& p) {
    const double t = s + p.epsilon;
    if (t <= 0.0)
        throw std::domain_error("radial_ode_residual: singular point s+eps = 0");
    const double a = p.alpha;
    const double w = c * std::pow(t, a);
    const double w1 = c * a * std::pow(t, a - 1.0);
    const double w2 = c * a * (a - 1.0) * std::pow(t, a - 2.0);
    return w2 * w1 * w1 - std::pow(w, -p.gamma);
}

double radial_ode_residual(double s, const ProblemParams& p) {
    return radial_ode_residual_coeff(s, p.c_alpha, p);
}

double boundary_for_radius(double R, const ProblemParams& p) {
    return p.c_alpha * std::pow(R + p.epsilon, p.alpha);
}

double radius_for_boundary(double C, const ProblemParams& p) {
    if (!(C > 0.0))
        throw std::invalid_argument("radius_for_boundary: C must be > 0");
    return std::pow(C / p.c_alpha, 1.0 / p.alpha);
}

double barrier_value(double r, const BarrierSpec& b) {
    const double d = b.params.delta, a = b.params.alpha, s = b.params.sigma;
    const double se = s * b.eta;
    if (r < se) return d;
    if (r < b.eta) {
        const double q = r - se;
        return d * (a * a * std::pow(b.eta, a - 2.0) * q * q + 1.0);
    }
    return d * (2.0 * std::pow(r, a) - std::pow(b.eta, a) + 1.0);
}

double barrier_derivative(double r, const BarrierSpec& b) {
    const double d = b.params.delta, a = b.params.alpha, s = b.params.sigma;
    const double se = s * b.eta;
    if (r < se) return 0.0;
    if (r < b.eta) return 2.0 * d * a * a * std::pow(b.eta, a - 2.0) * (r - se);
    return 2.0 * d * a * std::pow(r, a - 1.0);
}

double barrier_inf_laplacian(double r, const BarrierSpec& b) {
    const double d = b.params.delta, a = b.params.alpha, s = b.params.sigma;
    const double se = s * b.eta;
    if (r < se) return 0.0;
    const double d3 = d * d * d;
    if (r < b.eta) {
        const double q = r - se;
        return 8.0 * d3 * std::pow(a, 6.0) * std::pow(b.eta, 3.0 * (a - 2.0)) * q * q;
    }
    return 8.0 * d3 * a * a * a * (a - 1.0) * std::pow(r, 3.0 * a - 4.0);
}

double barrier_scaled(double x_norm, double r, const ProblemParams& p) {
    if (!(p.epsilon > 0.0))
        throw std::domain_error("barrier_scaled: needs epsilon > 0");
    if (!(r >= p.epsilon))
        throw std::domain_error("barrier_scaled: need r >= epsilon so eta >= 1");
    BarrierSpec b = make_barrier(r / p.epsilon, p);
    return p.eps_alpha * barrier_value(x_norm / p.epsilon, b);
}

double aronson(double x, double y) {
    const double e = 4.0 / 3.0;
    return std::pow(std::fabs(x), e) - std::pow(std::fabs(y), e);
}

VerificationReport verify_supersolution(const BarrierSpec& b, std::size_t n_samples) {
    if (n_samples < 100)
        throw std::invalid_argument("verify_supersolution: need n_samples >= 100");

    std::vector<double> rs;
    rs.reserve(n_samples + 8);
    rs.push_back(0.0);
    // log-uniform over (r_min, 10 eta]; the inequality margin and the
    // singular weight both vary over decades.
    const double r_min = 1e-6 * b.eta;
    const double r_max = 10.0 * b.eta;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n_samples - 1);
        rs.push_back(r_min * std::pow(r_max / r_min, t));
    }
    const double se = b.params.sigma * b.eta;
    for (double bp : {se, b.eta}) {
        rs.push_back(bp * (1.0 - 1e-12));
        rs.push_back(bp * (1.0 + 1e-12));
        rs.push_back(bp);
    }

    VerificationReport rep;
    rep.samples = rs.size();
    double worst = -1e300;
    for (double r : rs) {
        const double lhs = barrier_inf_laplacian(r, b);
        const double phi = barrier_value(r, b);
        const double rhs_v = penalty_base(phi, b.params.delta, b.params.ramp) *
                             std::pow(phi, -b.params.gamma);
        const double viol = lhs - rhs_v;
        if (viol > worst) {
            worst = viol;
            rep.worst_r = r;
        }
    }
    rep.max_violation = std::max(0.0, worst);
    rep.passed = worst <= 1e-12;
    return rep;
}

}  // namespace iflab
