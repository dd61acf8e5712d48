#pragma once

#include <complex>
#include <span>
#include <vector>

#include "largen/params.hpp"

namespace largen::on_model {

// Uniform radial grid on [0, y_max] with hard walls at both ends: any evolved
// state is pinned to zero at node 0 and node points-1.
struct RadialGrid {
    double y_max = 10.0;
    int points = 1024;

    double spacing() const { return y_max / (points - 1); }
    double node(int i) const { return i * spacing(); }
    void validate() const;
};

// Complex amplitudes at every grid node, walls included.
struct RadialWavefunction {
    RadialGrid grid;
    std::vector<std::complex<double>> values;
};

// Scaled single-well profile felt by the rescaled radial coordinate,
//   u(y) = (N-1)(N-3)/(8 N^2 y^2) + (g/8)(y^2 - y0^2)^2.
// The wall node at y=0 gets a 0 entry: its amplitude is pinned anyway and the
// centrifugal term is singular there.
std::vector<double> effective_radial_potential(const RadialGrid& grid,
                                               const LargeNParams& params);

// Same well before the y = r/sqrt(N), t_tilde = N t rescaling:
//   U(r) = (N-1)(N-3)/(8 r^2) + (g/(8N))(r^2 - N y0^2)^2,
// so U(sqrt(N) y) = N u(y).
double radial_potential_unscaled(double r, const LargeNParams& params);

// Ground-state-like packet concentrated near the top of the well,
//   phi(y) ~ y^((N-1)/2) exp(-N y^2 / (4 w^2)),
// normalized to unit trapezoid norm. |phi|^2 integrates the chi distribution,
// so <y^2> = w^2 for every N. Throws "under-resolved initial state" when
// fewer than 8 nodes carry 99% of the norm.
RadialWavefunction quantum_roll_initial_state(const RadialGrid& grid,
                                              const LargeNParams& params,
                                              double width);

// Trapezoid norm integral(|phi|^2 dy). With zero walls this equals the plain
// l2 sum scaled by the spacing, the quantity the Cayley stepper conserves
// exactly.
double norm(const RadialWavefunction& psi);

// Trapezoid <y^2> of the normalized density.
double moment_y2(const RadialWavefunction& psi);

// <phi|H|phi>/<phi|phi> for H = -(kinetic_coeff/2) d2/dy2 + potential on the
// wall-pinned stencil. potential spans every node.
double energy(const RadialWavefunction& psi, std::span<const double> potential,
              double kinetic_coeff);

struct EvolutionSample {
    double t = 0;
    double y2 = 0;
    double norm = 0;
    double energy = 0;
};

struct EvolutionResult {
    std::vector<EvolutionSample> series;
    // Largest |amplitude|^2 seen at the last interior node over the whole run;
    // a contained packet keeps this near zero.
    double wall_contact = 0;
    RadialWavefunction final_state;
};

// Crank-Nicolson evolution of i dphi/dt = [-(kinetic_coeff/2) d2/dy2 + u] phi
// with hard walls. The Cayley update is exactly unitary, so a norm drift
// beyond 1e-6 means the arithmetic broke down ("unitarity lost"). Samples
// (t, <y^2>, norm, energy) every sample_every steps, step 0 included.
// dt <= 0 or steps < 0 throw "invalid step".
EvolutionResult evolve_with_potential(RadialWavefunction psi,
                                      std::span<const double> potential,
                                      double kinetic_coeff, double dt,
                                      long steps, long sample_every = 1);

// The quantum roll in rescaled variables: kinetic coefficient 1/N^2, the
// scaled well above, initial packet of the given width. Time samples are in
// the slow time t_tilde = N t.
EvolutionResult evolve_quantum_roll(const RadialGrid& grid,
                                    const LargeNParams& params, double width,
                                    double dt, long steps,
                                    long sample_every = 1);

}  // namespace largen::on_model
