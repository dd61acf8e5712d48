#include "largen/classicality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace largen::classicality {

using Complex = std::complex<double>;

double ThermalSpec::coth_factor() const {
    validate();
    return 1.0 / std::tanh(theta0 / 2);
}

void ThermalSpec::validate() const {
    if (!(theta0 > 0))
        throw std::invalid_argument("invalid field: theta0 must be > 0");
}

GaussianCovariance mode_variances(const qvlasov::ModeState& state,
                                   const ThermalSpec& thermal) {
    const double factor = thermal.coth_factor();
    return {std::norm(state.f) * factor, std::norm(state.fdot) * factor,
            (state.f * std::conj(state.fdot)).real() * factor};
}

double uncertainty_function(const GaussianCovariance& cov) {
    return 2 * std::sqrt(cov.var_x * cov.var_p);
}

double correlation_coefficient(const GaussianCovariance& cov) {
    const double denom = std::sqrt(cov.var_x * cov.var_p);
    if (denom == 0) return 0.0;
    return std::clamp(cov.cov_xp / denom, -1.0, 1.0);
}

double symplectic_invariant(const GaussianCovariance& cov) {
    return cov.var_x * cov.var_p - cov.cov_xp * cov.cov_xp;
}

qvlasov::ModeState inverted_mode_state(double kappa, double t) {
    if (!(kappa > 0))
        throw std::invalid_argument("invalid field: kappa must be > 0");
    const double scale = std::sqrt(1.0 / (2 * kappa)) / 2;
    const Complex half(1, -1);  // (1 - i), halved by `scale`
    const double up = std::exp(kappa * t), down = std::exp(-kappa * t);
    const Complex i(0, 1);
    return {scale * half * (up + i * down),
            scale * half * kappa * (up - i * down), 0.0};
}

SqueezeParameters squeeze_parameters(const qvlasov::BogoliubovPair& pair,
                                     double theta) {
    const double unit = std::norm(pair.alpha) - std::norm(pair.beta);
    if (!(std::abs(unit - 1.0) <= 1e-8))
        throw std::runtime_error("not a Bogoliubov pair");
    const double r = std::asinh(std::abs(pair.beta));
    if (r == 0) return {0.0, 0.0};  // phase undefined without squeezing
    const Complex rotated = pair.alpha * std::conj(pair.beta) *
                            std::polar(1.0, -2 * theta);
    double phase = std::arg(rotated) - std::numbers::pi;
    if (phase <= -std::numbers::pi) phase += 2 * std::numbers::pi;
    return {r, phase};
}

}  // namespace largen::classicality
