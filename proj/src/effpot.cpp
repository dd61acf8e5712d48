#include "largen/effpot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace largen {

void LargeNParams::validate() const {
    if (!(N >= 1)) throw std::invalid_argument("invalid field: N must be >= 1");
    if (!(g > 0)) throw std::invalid_argument("invalid field: g must be > 0");
    if (!(y0 >= 0))
        throw std::invalid_argument("invalid field: y0 must be >= 0");
}

}  // namespace largen

namespace largen::effpot {

namespace {

struct MassPair {
    double m_plus, m_minus, b, c;
};

// Same algebra as auxiliary_masses but reporting failure through the return
// value; the gap-residual scan treats an undefined point as data.
std::optional<MassPair> try_masses(double y, double chi, double g) {
    if (!(chi > 0)) return std::nullopt;
    const double rchi = std::sqrt(chi);
    const double b = 2.5 * chi + 0.5 * g * (y * y + 0.5 / rchi);
    const double c = 4 * chi * chi + g * (4 * y * y * chi + 0.5 * rchi);
    const double disc = b * b - c;
    if (disc < 0) return std::nullopt;
    const double root = std::sqrt(disc);
    const double mp2 = b + root, mm2 = b - root;
    if (mm2 < 0) return std::nullopt;
    return MassPair{std::sqrt(mp2), std::sqrt(mm2), b, c};
}

// d(m+ + m-)/dchi by central difference.
std::optional<double> mass_sum_derivative(double y, double chi, double g) {
    const double h = 1e-6 * std::max(1.0, chi);
    if (chi - h <= 0) return std::nullopt;
    const auto lo = try_masses(y, chi - h, g);
    const auto hi = try_masses(y, chi + h, g);
    if (!lo || !hi) return std::nullopt;
    return ((hi->m_plus + hi->m_minus) - (lo->m_plus + lo->m_minus)) / (2 * h);
}

// chi minus the gap right-hand side; a root is a self-consistent chi.
std::optional<double> gap_residual(double y, double chi,
                                   const LargeNParams& p) {
    if (!try_masses(y, chi, p.g)) return std::nullopt;
    const auto dm = mass_sum_derivative(y, chi, p.g);
    if (!dm) return std::nullopt;
    const double rhs = 0.5 * p.g * (y * y - p.y0 * p.y0) +
                       p.g * (p.N - 3) / (4 * p.N * std::sqrt(chi)) +
                       0.5 * p.g / p.N * (*dm);
    return chi - rhs;
}

constexpr int kScanPoints = 3000;

}  // namespace

LoPoint v_eff_lo(double chi, const LargeNParams& params) {
    if (!(chi > 0)) throw std::invalid_argument("chi out of domain");
    const double rchi = std::sqrt(chi);
    const double v = chi * chi / (2 * params.g) + 0.25 * rchi;
    const double y2 = params.y0 * params.y0 + 2 * chi / params.g - 0.5 / rchi;
    return {v, y2, y2 >= 0};
}

AuxiliaryMasses auxiliary_masses(double y, double chi, double g) {
    if (!(chi > 0)) throw std::invalid_argument("chi out of domain");
    const auto m = try_masses(y, chi, g);
    if (!m) throw std::runtime_error("complex auxiliary masses");
    return {m->m_plus, m->m_minus, m->b, m->c};
}

double chi_lo_at(double y, const LargeNParams& params) {
    const double a = 0.5 * params.g * (y * y - params.y0 * params.y0);
    auto cubic = [&](double s) { return s * s * s - a * s - 0.25 * params.g; };
    double hi = 1.0;
    for (int i = 0; i < 200 && cubic(hi) < 0; ++i) hi *= 2;
    ToleranceSpec tol;
    tol.abs_tol = 1e-14;
    tol.rel_tol = 1e-14;
    const double s = numerics::find_root(cubic, 0.0, hi, tol);
    return s * s;
}

GapSolution solve_gap(double y, const LargeNParams& params,
                      const ToleranceSpec& tol, double chi_max) {
    GapSolution out;
    out.y = y;
    if (!(params.g > 0)) {
        out.branch_info = "chi <= 0";
        return out;
    }

    const double chi_lo_root = chi_lo_at(y, params);
    const double lo = 1e-5 * std::max(1.0, chi_lo_root);
    const double hi = std::max(chi_max, 4 * chi_lo_root);

    // Log-grid residual scan; every sign change between consecutive defined
    // points brackets a candidate root.
    const double lstep = std::log(hi / lo) / (kScanPoints - 1);
    double prev_chi = 0, prev_res = 0;
    bool have_prev = false, any_defined = false;
    std::vector<double> roots;

    auto refine = [&](double a, double fa, double b) {
        // Bisection keeps determinism readable; an undefined midpoint ends
        // the refinement on the best bracket found so far.
        for (int i = 0; i < 200 && (b - a) > 1e-15 * b; ++i) {
            const double mid = 0.5 * (a + b);
            const auto fm = gap_residual(y, mid, params);
            if (!fm) return;
            if (fa * (*fm) <= 0)
                b = mid;
            else {
                a = mid;
                fa = *fm;
            }
        }
        roots.push_back(0.5 * (a + b));
    };

    for (int i = 0; i < kScanPoints; ++i) {
        const double chi = lo * std::exp(lstep * i);
        const auto res = gap_residual(y, chi, params);
        if (!res) {
            have_prev = false;
            continue;
        }
        any_defined = true;
        if (have_prev && prev_res * (*res) <= 0 && *res != prev_res)
            refine(prev_chi, prev_res, chi);
        prev_chi = chi;
        prev_res = *res;
        have_prev = true;
    }

    if (roots.empty()) {
        out.branch_info = any_defined ? "no real chi root" : "b^2 - c < 0";
        return out;
    }

    double best = roots.front();
    for (double r : roots)
        if (std::abs(r - chi_lo_root) < std::abs(best - chi_lo_root)) best = r;

    const auto res = gap_residual(y, best, params);
    if (!res || std::abs(*res) > std::max(1e-9, tol.abs_tol))
        throw std::runtime_error("gap solve failed");

    out.chi = best;
    out.defined = true;
    out.branch_info = "lo-anchored";
    return out;
}

GapSolution v_eff_nlo(double y, const LargeNParams& params,
                      const ToleranceSpec& tol, double chi_max) {
    GapSolution sol = solve_gap(y, params, tol, chi_max);
    if (!sol.defined) {
        sol.v_eff_per_N = std::numeric_limits<double>::quiet_NaN();
        return sol;
    }
    const double chi = sol.chi;
    const double rchi = std::sqrt(chi);
    const auto m = try_masses(y, chi, params.g);
    if (!m) throw std::runtime_error("gap solve failed");
    sol.v_eff_per_N = 0.5 * chi * (y * y - params.y0 * params.y0) -
                      chi * chi / (2 * params.g) + 0.5 * rchi +
                      (m->m_plus + m->m_minus - 3 * rchi) / (2 * params.N);
    return sol;
}

double find_y_min(const LargeNParams& params, const ToleranceSpec& tol,
                  double y_hi) {
    auto defined_at = [&](double y) { return solve_gap(y, params, tol).defined; };
    if (!defined_at(y_hi)) throw std::runtime_error("domain empty up to y_hi");
    if (defined_at(0.0)) return 0.0;

    double lo = 0.0, hi = y_hi;
    const double width = std::max(tol.abs_tol, tol.rel_tol * y_hi);
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        (defined_at(mid) ? hi : lo) = mid;
    }
    return hi;
}

double scan_Nc(const LargeNParams& params_template, double N_lo, double N_hi,
               const ToleranceSpec& tol) {
    if (!(N_lo < N_hi)) throw std::invalid_argument("no threshold in range");
    auto at = [&](double N) {
        LargeNParams p = params_template;
        p.N = N;
        return p;
    };
    // y_min(N) = 0 exactly when the potential exists at y = 0.
    auto defined_at_zero = [&](double N) {
        return solve_gap(0.0, at(N), tol).defined;
    };
    if (find_y_min(at(N_lo), tol) <= 0 || find_y_min(at(N_hi), tol) > 0)
        throw std::invalid_argument("no threshold in range");

    double lo = N_lo, hi = N_hi;
    const double width = std::max(tol.abs_tol, tol.rel_tol * N_hi);
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        (defined_at_zero(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace largen::effpot
