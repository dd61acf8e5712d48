#include "largen/qvlasov.hpp"

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>

namespace largen::qvlasov {

namespace {

using Complex = std::complex<double>;

constexpr double kWronskianSlack = 1e-6;

// Closed quadrature weights on n uniform samples, symmetric under reversal.
// Odd n is plain composite Simpson; even n averages the two ways of closing
// the odd-length rule with one trapezoid panel, which keeps the symmetry
// that makes odd integrands cancel exactly on symmetric grids.
std::vector<double> closed_weights(int n, double h) {
    std::vector<double> w(n, 0.0);
    auto add_simpson = [&](int lo, int hi, double scale) {
        w[lo] += scale * h / 3;
        w[hi] += scale * h / 3;
        for (int i = lo + 1; i < hi; ++i)
            w[i] += scale * h / 3 * ((i - lo) % 2 ? 4 : 2);
    };
    if (n == 2) {
        w[0] = w[1] = h / 2;
    } else if (n % 2 == 1) {
        add_simpson(0, n - 1, 1.0);
    } else {
        add_simpson(0, n - 2, 0.5);
        w[n - 2] += h / 4;
        w[n - 1] += h / 4;
        add_simpson(1, n - 1, 0.5);
        w[0] += h / 4;
        w[1] += h / 4;
    }
    return w;
}

}  // namespace

ModeState adiabatic_vacuum_state(double omega0) {
    if (!(omega0 > 0))
        throw std::invalid_argument("invalid field: omega must be > 0");
    const double f = 1.0 / std::sqrt(2 * omega0);
    return {Complex(f, 0), Complex(0, -omega0 * f), 0.0};
}

BogoliubovPair project_bogoliubov(const ModeState& state, double omega) {
    if (!(omega > 0))
        throw std::invalid_argument("invalid field: omega must be > 0");
    const Complex phase = std::polar(1.0, state.theta);
    const double root = std::sqrt(2 * omega);
    const Complex i(0, 1);
    BogoliubovPair pair{phase * (omega * state.f + i * state.fdot) / root,
                        (omega * state.f - i * state.fdot) / (root * phase)};
    const double unit = std::norm(pair.alpha) - std::norm(pair.beta);
    if (!(std::abs(unit - 1.0) <= kWronskianSlack))
        throw std::runtime_error("invalid mode state");
    return pair;
}

KineticRecord kinetic_record(double t, const ModeState& state, double omega,
                             double n_init) {
    const auto pair = project_bogoliubov(state, omega);
    const double boost = 1 + 2 * n_init;
    return {t, n_init + boost * std::norm(pair.beta),
            boost * pair.alpha * std::conj(pair.beta), n_init};
}

ModeState evolve_mode(const Profile& omega, ModeState start, double t0,
                      double t1, const numerics::ToleranceSpec& tol) {
    numerics::OdeRhs rhs = [&omega](double t, const numerics::State& y,
                                    numerics::State& dy) {
        const double w = omega(t);
        const double w2 = w * w;
        dy[0] = y[2];
        dy[1] = y[3];
        dy[2] = -w2 * y[0];
        dy[3] = -w2 * y[1];
        dy[4] = w;
    };
    auto out = numerics::integrate_to(
        rhs,
        {start.f.real(), start.f.imag(), start.fdot.real(), start.fdot.imag(),
         start.theta},
        t0, t1, tol);
    return {Complex(out[0], out[1]), Complex(out[2], out[3]), out[4]};
}

KineticRecord evolve_kinetic(const Profile& omega, const Profile& omega_dot,
                             double n_init, double t0, double t1,
                             const numerics::ToleranceSpec& tol) {
    numerics::OdeRhs rhs = [&](double t, const numerics::State& y,
                               numerics::State& dy) {
        const double w = omega(t), wd = omega_dot(t);
        const double c2 = std::cos(2 * y[3]), s2 = std::sin(2 * y[3]);
        // Re{corr e^{-2 i theta}} and the rotated source for corr.
        dy[0] = wd / w * (y[1] * c2 + y[2] * s2);
        const double source = wd / (2 * w) * (1 + 2 * y[0]);
        dy[1] = source * c2;
        dy[2] = source * s2;
        dy[3] = w;
    };
    auto out = numerics::integrate_to(rhs, {n_init, 0.0, 0.0, 0.0}, t0, t1,
                                      tol);
    return {t1, out[0], Complex(out[1], out[2]), n_init};
}

NonlocalHistory evolve_nonlocal(const Profile& omega, const Profile& omega_dot,
                                double n_init, double t0, double t1,
                                long steps) {
    if (!(t1 > t0) || steps < 1) throw std::invalid_argument("invalid step");
    const double h = (t1 - t0) / steps;
    const std::size_t n = static_cast<std::size_t>(steps) + 1;

    std::vector<double> t(n), rate_pref(n), c2(n), s2(n);
    // theta accumulated per interval with a midpoint Simpson panel.
    double theta = 0;
    for (std::size_t k = 0; k < n; ++k) {
        t[k] = t0 + h * static_cast<double>(k);
        if (k > 0)
            theta += h / 6 *
                     (omega(t[k - 1]) + 4 * omega(t[k - 1] + h / 2) +
                      omega(t[k]));
        const double w = omega(t[k]);
        rate_pref[k] = omega_dot(t[k]) / w;
        c2[k] = std::cos(2 * theta);
        s2[k] = std::sin(2 * theta);
    }

    NonlocalHistory hist;
    hist.times = t;
    hist.n_tilde.assign(n, n_init);
    std::vector<double> gc(n, 0.0), gs(n, 0.0);
    auto set_source = [&](std::size_t k) {
        const double g = rate_pref[k] * (1 + 2 * hist.n_tilde[k]);
        gc[k] = g * c2[k];
        gs[k] = g * s2[k];
    };
    set_source(0);
    auto rate = [&](std::size_t k) {
        if (k == 0) return 0.0;
        const auto head_c = std::span(gc).first(k + 1);
        const auto head_s = std::span(gs).first(k + 1);
        const double memory = c2[k] * numerics::quadrature(head_c, h) +
                              s2[k] * numerics::quadrature(head_s, h);
        return rate_pref[k] / 2 * memory;
    };

    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double d0 = rate(k);
        hist.n_tilde[k + 1] = hist.n_tilde[k] + h * d0;
        set_source(k + 1);
        for (int pass = 0; pass < 2; ++pass) {
            const double d1 = rate(k + 1);
            hist.n_tilde[k + 1] = hist.n_tilde[k] + h / 2 * (d0 + d1);
            set_source(k + 1);
        }
    }
    return hist;
}

double occupation_entropy(double n_tilde) {
    if (!(n_tilde > 0)) return 0.0;
    return (1 + n_tilde) * std::log1p(n_tilde) - n_tilde * std::log(n_tilde);
}

std::vector<double> diagonal_density(double n_tilde, int count) {
    if (count < 1)
        throw std::invalid_argument("invalid field: count must be >= 1");
    const double n = n_tilde > 0 ? n_tilde : 0.0;
    std::vector<double> rho(count);
    const double ratio = n / (1 + n);
    double value = 1.0 / (1 + n);
    for (int l = 0; l < count; ++l) {
        rho[l] = value;
        value *= ratio;
    }
    return rho;
}

double MomentumGrid::weight(int i, int j) const {
    return wz[i] * wp[j] * 2 * std::numbers::pi * kperp[j];
}

MomentumGrid make_momentum_grid(double kz_lo, double kz_hi, int n_z,
                                double kperp_hi, int n_perp) {
    if (!(kz_lo < kz_hi))
        throw std::invalid_argument("invalid field: kz range must be increasing");
    if (n_z < 2) throw std::invalid_argument("invalid field: n_z must be >= 2");
    if (!(kperp_hi > 0))
        throw std::invalid_argument("invalid field: kperp_hi must be > 0");
    if (n_perp < 2)
        throw std::invalid_argument("invalid field: n_perp must be >= 2");

    MomentumGrid grid;
    const double hz = (kz_hi - kz_lo) / (n_z - 1);
    const double hp = kperp_hi / (n_perp - 1);
    grid.kz.resize(n_z);
    for (int i = 0; i < n_z; ++i) grid.kz[i] = kz_lo + i * hz;
    grid.kperp.resize(n_perp);
    for (int j = 0; j < n_perp; ++j) grid.kperp[j] = j * hp;
    grid.wz = closed_weights(n_z, hz);
    grid.wp = closed_weights(n_perp, hp);
    return grid;
}

void SchwingerParams::validate() const {
    if (!(e > 0)) throw std::invalid_argument("invalid field: e must be > 0");
    if (!(m > 0)) throw std::invalid_argument("invalid field: m must be > 0");
    if (!(cutoff > 0))
        throw std::invalid_argument("invalid field: cutoff must be > 0");
    if (!(n_init >= 0))
        throw std::invalid_argument("invalid field: n_init must be >= 0");
}

double mode_frequency(double kz, double kperp, double A,
                      const SchwingerParams& params) {
    const double kin = kz - params.e * A;
    return std::sqrt(kin * kin + kperp * kperp + params.m * params.m);
}

ModeEnsemble make_ensemble(const MomentumGrid& grid,
                           const SchwingerParams& params) {
    params.validate();
    if (grid.kz.empty() || grid.kperp.empty())
        throw std::runtime_error("no modes");
    ModeEnsemble ens;
    ens.n_init = params.n_init;
    for (std::size_t i = 0; i < grid.kz.size(); ++i) {
        for (std::size_t j = 0; j < grid.kperp.size(); ++j) {
            const double w0 = mode_frequency(grid.kz[i], grid.kperp[j], 0.0,
                                             params);
            if (w0 > params.cutoff) continue;
            ens.kz.push_back(grid.kz[i]);
            ens.kperp.push_back(grid.kperp[j]);
            ens.weight.push_back(
                grid.weight(static_cast<int>(i), static_cast<int>(j)));
            ens.states.push_back(adiabatic_vacuum_state(w0));
        }
    }
    return ens;
}

double mean_current(const ModeEnsemble& ensemble, double A,
                    const SchwingerParams& params) {
    double acc = 0;
    for (std::size_t k = 0; k < ensemble.states.size(); ++k) {
        acc += ensemble.weight[k] * (ensemble.kz[k] - params.e * A) *
               std::norm(ensemble.states[k].f);
    }
    return 2 * params.e * (1 + 2 * ensemble.n_init) * acc;
}

double ensemble_entropy(const ModeEnsemble& ensemble, double A,
                        const SchwingerParams& params) {
    double acc = 0;
    for (std::size_t k = 0; k < ensemble.states.size(); ++k) {
        const double w = mode_frequency(ensemble.kz[k], ensemble.kperp[k], A,
                                        params);
        const auto rec = kinetic_record(0.0, ensemble.states[k], w,
                                        ensemble.n_init);
        acc += ensemble.weight[k] * occupation_entropy(rec.n_tilde);
    }
    return acc;
}

double ensemble_energy(const ModeEnsemble& ensemble, double A, double E,
                       const SchwingerParams& params) {
    double acc = E * E / 2;
    const double boost = 1 + 2 * ensemble.n_init;
    for (std::size_t k = 0; k < ensemble.states.size(); ++k) {
        const double w = mode_frequency(ensemble.kz[k], ensemble.kperp[k], A,
                                        params);
        acc += ensemble.weight[k] * boost *
               (std::norm(ensemble.states[k].fdot) +
                w * w * std::norm(ensemble.states[k].f));
    }
    return acc;
}

BackreactionResult evolve_schwinger(const MomentumGrid& grid,
                                    const SchwingerParams& params,
                                    double t_end, int samples,
                                    const numerics::ToleranceSpec& tol) {
    params.validate();
    if (!(t_end > 0)) throw std::invalid_argument("invalid step");
    if (samples < 2)
        throw std::invalid_argument("invalid field: samples must be >= 2");

    ModeEnsemble ens = make_ensemble(grid, params);
    const std::size_t modes = ens.states.size();

    numerics::State y(2 + 5 * modes, 0.0);
    y[0] = 0.0;
    y[1] = -params.E0;
    for (std::size_t k = 0; k < modes; ++k) {
        const auto& s = ens.states[k];
        y[2 + 5 * k + 0] = s.f.real();
        y[2 + 5 * k + 1] = s.f.imag();
        y[2 + 5 * k + 2] = s.fdot.real();
        y[2 + 5 * k + 3] = s.fdot.imag();
        y[2 + 5 * k + 4] = s.theta;
    }

    numerics::OdeRhs rhs = [&ens, &params, modes](double, const numerics::State& y,
                                                  numerics::State& dy) {
        const double A = y[0];
        double j = 0;
        for (std::size_t k = 0; k < modes; ++k) {
            const double* s = &y[2 + 5 * k];
            const double kin = ens.kz[k] - params.e * A;
            const double w2 = kin * kin + ens.kperp[k] * ens.kperp[k] +
                              params.m * params.m;
            j += ens.weight[k] * kin * (s[0] * s[0] + s[1] * s[1]);
            double* d = &dy[2 + 5 * k];
            d[0] = s[2];
            d[1] = s[3];
            d[2] = -w2 * s[0];
            d[3] = -w2 * s[1];
            d[4] = std::sqrt(w2);
        }
        dy[0] = y[1];
        dy[1] = 2 * params.e * (1 + 2 * ens.n_init) * j;
    };

    BackreactionResult out;
    auto unpack = [&](const numerics::State& y) {
        for (std::size_t k = 0; k < modes; ++k) {
            const double* s = &y[2 + 5 * k];
            ens.states[k] = {Complex(s[0], s[1]), Complex(s[2], s[3]), s[4]};
        }
    };
    auto record = [&](double t, const numerics::State& y) {
        unpack(y);
        const double A = y[0], E = -y[1];
        out.series.push_back({t, A, E, mean_current(ens, A, params),
                              ensemble_entropy(ens, A, params),
                              ensemble_energy(ens, A, E, params)});
        for (std::size_t k = 0; k < modes; ++k) {
            const double w = mode_frequency(ens.kz[k], ens.kperp[k], A, params);
            const auto rec = kinetic_record(t, ens.states[k], w, ens.n_init);
            out.modes.push_back({t, ens.kz[k], ens.kperp[k], rec.n_tilde,
                                 std::abs(rec.corr)});
        }
    };

    record(0.0, y);
    for (int s = 1; s < samples; ++s) {
        const double ta = t_end * (s - 1) / (samples - 1);
        const double tb = t_end * s / (samples - 1);
        y = numerics::integrate_to(rhs, std::move(y), ta, tb, tol);
        record(tb, y);
    }

    unpack(y);
    out.A_final = y[0];
    out.E_final = -y[1];
    for (std::size_t k = 0; k < modes; ++k) {
        const double w = mode_frequency(ens.kz[k], ens.kperp[k], out.A_final,
                                        params);
        const auto rec = kinetic_record(t_end, ens.states[k], w, ens.n_init);
        out.particle_yield += ens.weight[k] * (rec.n_tilde - ens.n_init);
    }
    out.final_ensemble = std::move(ens);
    return out;
}

}  // namespace largen::qvlasov
