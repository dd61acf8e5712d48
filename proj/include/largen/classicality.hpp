#pragma once

#include <limits>

#include "largen/qvlasov.hpp"

namespace largen::classicality {

// Occupation of a mode born in thermal equilibrium, encoded as
// theta0 = omega/T at formation. The vacuum is the theta0 -> infinity limit;
// every covariance below just scales by coth(theta0/2) = 1 + 2 n_thermal.
struct ThermalSpec {
    double theta0 = std::numeric_limits<double>::infinity();

    static ThermalSpec vacuum() { return {}; }
    double coth_factor() const;
    void validate() const;
};

// Equal-time second moments of the mode quadratures.
struct GaussianCovariance {
    double var_x = 0;
    double var_p = 0;
    double cov_xp = 0;
};

// var_x = |f|^2, var_p = |fdot|^2, cov = Re(f fdot*), all scaled by the
// thermal factor.
GaussianCovariance mode_variances(const qvlasov::ModeState& state,
                                   const ThermalSpec& thermal = {});

// 2 sqrt(var_x var_p): 1 on the vacuum floor, coth(theta0/2) on a thermal
// one, and growing once the state squeezes and spreads.
double uncertainty_function(const GaussianCovariance& cov);

// cov / sqrt(var_x var_p), clamped to [-1, 1]. Approaching +-1 signals a
// sharp x-p correlation, the Gaussian marker of classical behavior.
double correlation_coefficient(const GaussianCovariance& cov);

// var_x var_p - cov^2. The Wronskian pins this to coth^2(theta0/2)/4 for any
// valid mode state, which is the >= 1/4 uncertainty statement.
double symplectic_invariant(const GaussianCovariance& cov);

// Exact mode function of the inverted oscillator f'' = +kappa^2 f starting
// from the would-be ground state f(0) = 1/sqrt(2 kappa), fdot(0) = -i kappa
// f(0). Its correlation coefficient is tanh(2 kappa t): classicalization at
// the rate set by the Lyapunov exponent. theta is left at zero; there is no
// adiabatic phase on an unstable branch.
qvlasov::ModeState inverted_mode_state(double kappa, double t);

// Polar form of a Bogoliubov pair: squeeze radius r = asinh|beta| and the
// squeeze angle arg(alpha beta* e^{-2 i theta}) - pi mapped to (-pi, pi],
// with phase = 0 by convention when r = 0. A pair that breaks
// |alpha|^2 - |beta|^2 = 1 beyond 1e-8 throws "not a Bogoliubov pair".
struct SqueezeParameters {
    double r = 0;
    double phase = 0;
};

SqueezeParameters squeeze_parameters(const qvlasov::BogoliubovPair& pair,
                                     double theta = 0);

}  // namespace largen::classicality
