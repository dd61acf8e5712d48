#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "largen/numerics.hpp"

namespace largen::qvlasov {

// Time-dependent scalar profile, e.g. omega(t) or its derivative.
using Profile = std::function<double(double)>;

// One complex mode function with its accumulated adiabatic phase
// theta(t) = integral of omega. The pair (f, fdot) obeys f'' = -omega^2 f
// with the Wronskian f fdot* - f* fdot = i held fixed by the dynamics.
struct ModeState {
    std::complex<double> f;
    std::complex<double> fdot;
    double theta = 0;
};

// Lowest-order adiabatic data at frequency omega0: f = 1/sqrt(2 omega0),
// fdot = -i omega0 f, theta = 0. This makes beta vanish identically at the
// start time.
ModeState adiabatic_vacuum_state(double omega0);

// Instantaneous decomposition on the adiabatic basis,
//   alpha = e^{+i theta} (omega f + i fdot) / sqrt(2 omega),
//   beta  = e^{-i theta} (omega f - i fdot) / sqrt(2 omega).
// |alpha|^2 - |beta|^2 = 1 whenever the state is a genuine mode function;
// anything else throws "invalid mode state".
struct BogoliubovPair {
    std::complex<double> alpha;
    std::complex<double> beta;
};

BogoliubovPair project_bogoliubov(const ModeState& state, double omega);

// Adiabatic occupation and pair correlation, with the initial thermal
// occupation folded in:
//   n_tilde = n_init + (1 + 2 n_init) |beta|^2,
//   corr    = (1 + 2 n_init) alpha beta*.
struct KineticRecord {
    double t = 0;
    double n_tilde = 0;
    std::complex<double> corr;
    double n_init = 0;
};

KineticRecord kinetic_record(double t, const ModeState& state, double omega,
                             double n_init);

// Integrates the mode function under the given frequency profile from t0 to
// t1 (adaptive embedded Runge-Kutta on the five real components).
ModeState evolve_mode(const Profile& omega, ModeState start, double t0,
                      double t1, const numerics::ToleranceSpec& tol = {});

// Integrates the local kinetic closure of the same dynamics,
//   dn/dt = (omega_dot/omega) Re{ corr e^{-2 i theta} },
//   dcorr/dt = (omega_dot/2 omega) (1 + 2 n) e^{+2 i theta},
// from the adiabatic start (n = n_init, corr = 0). Exactly equivalent to the
// mode-function path for identical profiles.
KineticRecord evolve_kinetic(const Profile& omega, const Profile& omega_dot,
                             double n_init, double t0, double t1,
                             const numerics::ToleranceSpec& tol = {});

// The memory-integral form of the same occupation history on a uniform time
// grid: the growth rate at each step is the quadrature of the full history
// against cos(2 theta(t) - 2 theta(t')), advanced with an iterated
// trapezoid predictor-corrector. steps >= 1, t1 > t0 ("invalid step").
struct NonlocalHistory {
    std::vector<double> times;
    std::vector<double> n_tilde;
};

NonlocalHistory evolve_nonlocal(const Profile& omega, const Profile& omega_dot,
                                double n_init, double t0, double t1,
                                long steps);

// Bosonic single-mode entropy s(n) = (1+n) ln(1+n) - n ln n, with s(0) = 0
// and tiny negative inputs clamped to the vacuum value.
double occupation_entropy(double n_tilde);

// Even diagonal elements of the squeezed-pair reduced density matrix,
//   rho_{2l} = n^l / (1+n)^{l+1},  l = 0..count-1.
std::vector<double> diagonal_density(double n_tilde, int count);

// Tensor-product momentum grid: uniform kz nodes on [kz_lo, kz_hi], uniform
// kperp nodes on [0, kperp_hi]. The 1d closed-rule weights are symmetric
// under reversal, so kz-odd integrands cancel exactly on symmetric grids.
// The full measure carries the transverse ring factor 2 pi kperp.
struct MomentumGrid {
    std::vector<double> kz;
    std::vector<double> kperp;
    std::vector<double> wz;
    std::vector<double> wp;

    double weight(int i, int j) const;
};

MomentumGrid make_momentum_grid(double kz_lo, double kz_hi, int n_z,
                                double kperp_hi, int n_perp);

struct SchwingerParams {
    double e = 1.0;
    double m = 1.0;
    double E0 = 1.0;
    double n_init = 0.0;
    double cutoff = 20.0;

    void validate() const;
};

// omega(A) = sqrt((kz - e A)^2 + kperp^2 + m^2).
double mode_frequency(double kz, double kperp, double A,
                      const SchwingerParams& params);

// Active (below-cutoff) modes of a grid, flattened, each carrying its
// quadrature weight and an adiabatic vacuum state at A = 0.
struct ModeEnsemble {
    std::vector<double> kz;
    std::vector<double> kperp;
    std::vector<double> weight;
    std::vector<ModeState> states;
    double n_init = 0;
};

// Throws "no modes" when the grid has no nodes at all. A grid whose every
// mode sits above the cutoff yields an empty ensemble: pure field dynamics.
ModeEnsemble make_ensemble(const MomentumGrid& grid,
                           const SchwingerParams& params);

// j = 2 e sum_k w_k (kz - e A) |f_k|^2 (1 + 2 n_init).
double mean_current(const ModeEnsemble& ensemble, double A,
                    const SchwingerParams& params);

// sum_k w_k s(n_tilde_k) at the given gauge potential.
double ensemble_entropy(const ModeEnsemble& ensemble, double A,
                        const SchwingerParams& params);

// E^2/2 + sum_k w_k (1 + 2 n_init) (|fdot|^2 + omega^2 |f|^2). This combines
// with d(Adot)/dt = j into an exact invariant of the coupled flow.
double ensemble_energy(const ModeEnsemble& ensemble, double A, double E,
                       const SchwingerParams& params);

struct FieldSample {
    double t = 0;
    double A = 0;
    double E = 0;
    double j = 0;
    double S_total = 0;
    double energy_total = 0;
};

struct ModeSample {
    double t = 0;
    double kz = 0;
    double kperp = 0;
    double n_tilde = 0;
    double abs_corr = 0;
};

struct BackreactionResult {
    std::vector<FieldSample> series;
    std::vector<ModeSample> modes;
    double particle_yield = 0;
    ModeEnsemble final_ensemble;
    double A_final = 0;
    double E_final = 0;
};

// Co-integrates the gauge potential with every active mode:
//   d2A/dt2 = j,  f_k'' = -omega_k(A)^2 f_k,  theta_k' = omega_k(A),
// from A(0) = 0, E(0) = E0. Samples the field diagnostics and the per-mode
// occupations at `samples` evenly spaced times, endpoints included.
BackreactionResult evolve_schwinger(const MomentumGrid& grid,
                                    const SchwingerParams& params,
                                    double t_end, int samples = 61,
                                    const numerics::ToleranceSpec& tol = {});

}  // namespace largen::qvlasov
