#include "largen/on_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "largen/numerics.hpp"

namespace largen::on_model {

namespace {

using Complex = std::complex<double>;

double trapezoid(std::span<const double> f, double h) {
    double s = 0;
    for (double v : f) s += v;
    s -= 0.5 * (f.front() + f.back());
    return s * h;
}

std::vector<double> density(const RadialWavefunction& psi) {
    std::vector<double> rho(psi.values.size());
    for (std::size_t j = 0; j < rho.size(); ++j) rho[j] = std::norm(psi.values[j]);
    return rho;
}

// Cayley-form stepper for the wall-pinned tridiagonal Hamiltonian. Both half
// maps share the bands, so one setup serves the whole run.
struct CayleyStepper {
    std::vector<Complex> plus_diag, plus_off;
    std::vector<Complex> minus_diag;
    Complex minus_off;
    std::vector<Complex> rhs;

    CayleyStepper(std::span<const double> potential, double kinetic_coeff,
                  double dt, double h) {
        const std::size_t m = potential.size() - 2;
        const double hoff = -kinetic_coeff / (2 * h * h);
        const Complex itheta(0, dt / 2);
        plus_diag.resize(m);
        minus_diag.resize(m);
        plus_off.assign(m - 1, itheta * hoff);
        minus_off = -itheta * hoff;
        for (std::size_t j = 0; j < m; ++j) {
            const double hdiag = kinetic_coeff / (h * h) + potential[j + 1];
            plus_diag[j] = 1.0 + itheta * hdiag;
            minus_diag[j] = 1.0 - itheta * hdiag;
        }
        rhs.resize(m);
    }

    void step(std::vector<Complex>& values) {
        const std::size_t m = minus_diag.size();
        for (std::size_t j = 0; j < m; ++j) {
            Complex acc = minus_diag[j] * values[j + 1];
            if (j > 0) acc += minus_off * values[j];
            if (j + 1 < m) acc += minus_off * values[j + 2];
            rhs[j] = acc;
        }
        auto next = numerics::solve_tridiagonal(plus_off, plus_diag, plus_off, rhs);
        std::copy(next.begin(), next.end(), values.begin() + 1);
    }
};

}  // namespace

void RadialGrid::validate() const {
    if (!(y_max > 0))
        throw std::invalid_argument("invalid field: y_max must be > 0");
    if (points < 16)
        throw std::invalid_argument("invalid field: points must be >= 16");
}

std::vector<double> effective_radial_potential(const RadialGrid& grid,
                                               const LargeNParams& params) {
    grid.validate();
    const double N = params.N, g = params.g, y0 = params.y0;
    std::vector<double> u(grid.points, 0.0);
    for (int j = 1; j < grid.points; ++j) {
        const double y = grid.node(j);
        const double dy2 = y * y - y0 * y0;
        u[j] = (N - 1) * (N - 3) / (8 * N * N * y * y) + g / 8 * dy2 * dy2;
    }
    return u;
}

double radial_potential_unscaled(double r, const LargeNParams& params) {
    const double N = params.N, g = params.g, y0 = params.y0;
    const double dr2 = r * r - N * y0 * y0;
    return (N - 1) * (N - 3) / (8 * r * r) + g / (8 * N) * dr2 * dr2;
}

RadialWavefunction quantum_roll_initial_state(const RadialGrid& grid,
                                              const LargeNParams& params,
                                              double width) {
    grid.validate();
    params.validate();
    if (!(width > 0))
        throw std::invalid_argument("invalid field: width must be > 0");

    RadialWavefunction psi{grid, std::vector<Complex>(grid.points, 0.0)};
    const double exponent = (params.N - 1) / 2;
    // Work in log amplitude: the y^((N-1)/2) prefactor overflows long before
    // the packet stops being representable.
    std::vector<double> logs(grid.points, -1e300);
    double log_max = -1e300;
    for (int j = 1; j + 1 < grid.points; ++j) {
        const double y = grid.node(j);
        const double lg = (exponent == 0 ? 0.0 : exponent * std::log(y)) -
                          params.N * y * y / (4 * width * width);
        logs[j] = lg;
        log_max = std::max(log_max, lg);
    }
    for (int j = 1; j + 1 < grid.points; ++j)
        psi.values[j] = std::exp(logs[j] - log_max);

    auto rho = density(psi);
    const double total = trapezoid(rho, grid.spacing());

    // Resolution guard: at least 8 nodes must carry 99% of the norm.
    std::sort(rho.begin(), rho.end(), std::greater<>());
    double acc = 0;
    int carriers = 0;
    for (double v : rho) {
        acc += v * grid.spacing();
        ++carriers;
        if (acc >= 0.99 * total) break;
    }
    if (carriers < 8) throw std::runtime_error("under-resolved initial state");

    const double scale = 1.0 / std::sqrt(total);
    for (auto& v : psi.values) v *= scale;
    return psi;
}

double norm(const RadialWavefunction& psi) {
    return trapezoid(density(psi), psi.grid.spacing());
}

double moment_y2(const RadialWavefunction& psi) {
    auto rho = density(psi);
    std::vector<double> weighted(rho.size());
    for (std::size_t j = 0; j < rho.size(); ++j) {
        const double y = psi.grid.node(static_cast<int>(j));
        weighted[j] = y * y * rho[j];
    }
    const double h = psi.grid.spacing();
    return trapezoid(weighted, h) / trapezoid(rho, h);
}

double energy(const RadialWavefunction& psi, std::span<const double> potential,
              double kinetic_coeff) {
    const auto& v = psi.values;
    const std::size_t n = v.size();
    if (potential.size() != n)
        throw std::invalid_argument("state size mismatch");
    const double h = psi.grid.spacing();
    const double koff = kinetic_coeff / (2 * h * h);
    double acc = 0;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const Complex hphi = -koff * (v[j + 1] - 2.0 * v[j] + v[j - 1]) +
                             potential[j] * v[j];
        acc += (std::conj(v[j]) * hphi).real();
    }
    return acc * h / norm(psi);
}

EvolutionResult evolve_with_potential(RadialWavefunction psi,
                                      std::span<const double> potential,
                                      double kinetic_coeff, double dt,
                                      long steps, long sample_every) {
    psi.grid.validate();
    if (psi.values.size() != static_cast<std::size_t>(psi.grid.points) ||
        potential.size() != psi.values.size())
        throw std::invalid_argument("state size mismatch");
    if (!(dt > 0) || steps < 0 || sample_every < 1)
        throw std::invalid_argument("invalid step");

    psi.values.front() = 0.0;
    psi.values.back() = 0.0;

    EvolutionResult out;
    const double norm0 = norm(psi);
    const int last_interior = psi.grid.points - 2;
    auto record = [&](long k) {
        out.series.push_back({k * dt, moment_y2(psi), norm(psi),
                              energy(psi, potential, kinetic_coeff)});
    };
    auto touch_wall = [&] {
        out.wall_contact =
            std::max(out.wall_contact, std::norm(psi.values[last_interior]));
    };

    CayleyStepper stepper(potential, kinetic_coeff, dt, psi.grid.spacing());
    record(0);
    touch_wall();
    for (long k = 1; k <= steps; ++k) {
        stepper.step(psi.values);
        touch_wall();
        const double drift = std::abs(norm(psi) / norm0 - 1.0);
        if (!(drift <= 1e-6)) throw std::runtime_error("unitarity lost");
        if (k % sample_every == 0 || k == steps) record(k);
    }
    out.final_state = std::move(psi);
    return out;
}

EvolutionResult evolve_quantum_roll(const RadialGrid& grid,
                                    const LargeNParams& params, double width,
                                    double dt, long steps, long sample_every) {
    auto psi = quantum_roll_initial_state(grid, params, width);
    const auto u = effective_radial_potential(grid, params);
    const double kinetic_coeff = 1.0 / (params.N * params.N);
    return evolve_with_potential(std::move(psi), u, kinetic_coeff, dt, steps,
                                 sample_every);
}

}  // namespace largen::on_model
