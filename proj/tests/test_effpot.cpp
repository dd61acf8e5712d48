#include <doctest.h>

#include <cmath>
#include <optional>
#include <random>

#include "largen/effpot.hpp"

using namespace largen;
using namespace largen::effpot;

namespace {

// Independent residual assembly used by the oracles below; kept free of the
// production scan/refine machinery on purpose.
std::optional<double> oracle_residual(double y, double chi,
                                      const LargeNParams& p) {
    if (chi <= 0) return std::nullopt;
    auto mass_sum = [&](double c) -> std::optional<double> {
        if (c <= 0) return std::nullopt;
        const double rc = std::sqrt(c);
        const double b = 2.5 * c + 0.5 * p.g * (y * y + 0.5 / rc);
        const double cc = 4 * c * c + p.g * (4 * y * y * c + 0.5 * rc);
        const double disc = b * b - cc;
        if (disc < 0) return std::nullopt;
        const double mm2 = b - std::sqrt(disc);
        if (mm2 < 0) return std::nullopt;
        return std::sqrt(b + std::sqrt(disc)) + std::sqrt(mm2);
    };
    const double h = 1e-6 * std::max(1.0, chi);
    const auto lo = mass_sum(chi - h), hi = mass_sum(chi + h);
    if (!lo || !hi) return std::nullopt;
    const double dm = (*hi - *lo) / (2 * h);
    return chi - (0.5 * p.g * (y * y - p.y0 * p.y0) +
                  p.g * (p.N - 3) / (4 * p.N * std::sqrt(chi)) +
                  0.5 * p.g / p.N * dm);
}

// Brute-force root hunt on a dense linear grid over (0, chi_hi].
std::optional<double> oracle_chi(double y, const LargeNParams& p,
                                 double chi_hi, int npts) {
    const double chi_lo_ref = chi_lo_at(y, p);
    std::optional<double> best;
    double prev_chi = 0, prev_r = 0;
    bool have = false;
    for (int i = 1; i <= npts; ++i) {
        const double chi = chi_hi * i / npts;
        const auto r = oracle_residual(y, chi, p);
        if (!r) {
            have = false;
            continue;
        }
        if (have && prev_r * (*r) <= 0) {
            double a = prev_chi, b = chi, fa = prev_r;
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (a + b);
                const auto fm = oracle_residual(y, mid, p);
                if (!fm) break;
                if (fa * (*fm) <= 0)
                    b = mid;
                else {
                    a = mid;
                    fa = *fm;
                }
            }
            const double root = 0.5 * (a + b);
            if (!best ||
                std::abs(root - chi_lo_ref) < std::abs(*best - chi_lo_ref))
                best = root;
        }
        prev_chi = chi;
        prev_r = *r;
        have = true;
    }
    return best;
}

// Existence oracle: sign of the residual minimum over a dense log grid in
// chi, with parabolic sharpening around the discrete minimum.
double oracle_min_residual(double y, const LargeNParams& p) {
    const int n = 20000;
    auto at = [&](int i) {
        const double chi = 1e-5 * std::pow(1e7, double(i) / n);
        const auto r = oracle_residual(y, chi, p);
        return r ? *r : 1e300;
    };
    double best = 1e300;
    int best_i = -1;
    for (int i = 0; i <= n; ++i) {
        const double r = at(i);
        if (r < best) {
            best = r;
            best_i = i;
        }
    }
    if (best_i <= 0 || best_i >= n) return best;
    const double f0 = at(best_i - 1), f2 = at(best_i + 1);
    const double denom = f0 - 2 * best + f2;
    if (denom > 0) {
        const double delta = 0.5 * (f0 - f2) / denom;
        best -= 0.125 * (f0 - f2) * delta;
    }
    return best;
}

double oracle_y_min(const LargeNParams& p) {
    if (oracle_min_residual(0.0, p) <= 0) return 0.0;
    double lo = 0.0, hi = 5.0;
    for (int it = 0; it < 45; ++it) {
        const double mid = 0.5 * (lo + hi);
        (oracle_min_residual(mid, p) <= 0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("lo potential: hand values and parametric relation") {
    LargeNParams p{10, 4, 0.7};
    auto pt = v_eff_lo(1.0, p);
    CHECK(pt.v_per_N == doctest::Approx(0.375).epsilon(1e-14));
    CHECK(pt.y_squared == doctest::Approx(0.49).epsilon(1e-14));
    CHECK(pt.physical);

    LargeNParams q{10, 2, 1};
    auto pt2 = v_eff_lo(4.0, q);
    CHECK(pt2.v_per_N == doctest::Approx(4.5).epsilon(1e-14));
    CHECK(pt2.y_squared == doctest::Approx(1 + 4 - 0.25).epsilon(1e-14));
}

TEST_CASE("lo potential: chi->0 branch flagged unphysical, chi<=0 rejected") {
    LargeNParams p{10, 1, 0};
    CHECK_FALSE(v_eff_lo(1e-8, p).physical);
    CHECK_THROWS_WITH((void)v_eff_lo(0.0, p), "chi out of domain");
    CHECK_THROWS_WITH((void)v_eff_lo(-1.0, p), "chi out of domain");
}

TEST_CASE("auxiliary masses: free-theory values and vanishing NLO shift") {
    auto m = auxiliary_masses(3.7, 1.0, 0.0);
    CHECK(m.m_plus == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(m.m_minus == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m.b == doctest::Approx(2.5));
    CHECK(m.c == doctest::Approx(4.0));

    // g=0 collapses m+ + m- to 3 sqrt(chi) for every chi: zero correction.
    for (double chi : {0.1, 0.5, 1.0, 2.0, 17.0}) {
        auto mm = auxiliary_masses(1.3, chi, 0.0);
        CHECK(mm.m_plus + mm.m_minus - 3 * std::sqrt(chi) ==
              doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("auxiliary masses: pair algebra on a random sweep") {
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> uy(0.0, 4.0), uc(0.01, 50.0),
        ug(0.01, 20.0);
    for (int i = 0; i < 500; ++i) {
        const double y = uy(gen), chi = uc(gen), g = ug(gen);
        auto m = auxiliary_masses(y, chi, g);
        const double mp2 = m.m_plus * m.m_plus, mm2 = m.m_minus * m.m_minus;
        CHECK(std::abs(mp2 + mm2 - 2 * m.b) <= 1e-10 * std::abs(2 * m.b));
        CHECK(std::abs(mp2 * mm2 - m.c) <= 1e-10 * std::abs(m.c));
        CHECK(m.m_plus >= m.m_minus);
        // The discriminant has the analytic floor (3/2) g sqrt(chi), so the
        // complex-mass branch is unreachable for real y. Asserting the floor
        // documents that in place of an impossible regression fixture.
        const double disc = m.b * m.b - m.c;
        CHECK(disc >= 1.5 * g * std::sqrt(chi) * (1 - 1e-12));
    }
}

TEST_CASE("gap solve: N=1e9 reduces to the lo parametric relation") {
    LargeNParams p{1e9, 1, 1};
    for (double y : {0.5, 1.0, 1.7, 2.5}) {
        auto s = solve_gap(y, p);
        REQUIRE(s.defined);
        // chi must satisfy y²(chi) = y² from the lo parametric set.
        auto lo = v_eff_lo(s.chi, p);
        CHECK(lo.y_squared == doctest::Approx(y * y).epsilon(1e-6));
    }
}

TEST_CASE("gap solve: free theory degenerates to chi <= 0") {
    LargeNParams p{10, 0, 1};
    auto s = solve_gap(1.0, p);
    CHECK_FALSE(s.defined);
    CHECK(s.branch_info == "chi <= 0");
    CHECK_FALSE(v_eff_nlo(1.0, p).defined);
}

TEST_CASE("gap solve: agrees with the dense-scan oracle at N=20") {
    LargeNParams p{20, 1, 1};
    auto s = solve_gap(2.0, p);
    REQUIRE(s.defined);
    auto ref = oracle_chi(2.0, p, 50.0, 20000);
    REQUIRE(ref.has_value());
    CHECK(s.chi == doctest::Approx(*ref).epsilon(1e-9));
}

TEST_CASE("gap solve: defined solutions satisfy the residual bound") {
    LargeNParams p{20, 1, 1};
    for (double y = 0.0; y <= 3.0; y += 0.25) {
        auto s = solve_gap(y, p);
        if (!s.defined) continue;
        auto r = oracle_residual(y, s.chi, p);
        REQUIRE(r.has_value());
        CHECK(std::abs(*r) <= 1e-9);
    }
}

TEST_CASE("nlo potential: lo limit at matched chi and matched y") {
    LargeNParams p{1e9, 1, 1};
    for (double y : {0.6, 1.1, 2.0}) {
        auto s = v_eff_nlo(y, p);
        REQUIRE(s.defined);
        auto lo = v_eff_lo(s.chi, p);
        CHECK(s.v_eff_per_N == doctest::Approx(lo.v_per_N).epsilon(1e-6));
    }

    LargeNParams q{1e6, 1, 1};
    for (double y = 0.5; y <= 3.0; y += 0.1) {
        auto s = v_eff_nlo(y, q);
        REQUIRE(s.defined);
        const double lo_v = v_eff_lo(chi_lo_at(y, q), q).v_per_N;
        CHECK(std::abs(s.v_eff_per_N - lo_v) <=
              10.0 / q.N * std::abs(lo_v));
    }
}

TEST_CASE("nlo potential: continuous and single-valued where defined") {
    LargeNParams p{25, 1, 1};
    double prev_v = 0;
    bool have_prev = false;
    int defined_count = 0;
    for (int i = 0; i <= 300; ++i) {
        const double y = 3.0 * i / 300;
        auto s = v_eff_nlo(y, p);
        if (!s.defined) {
            have_prev = false;
            continue;
        }
        ++defined_count;
        CHECK(std::isfinite(s.v_eff_per_N));
        if (have_prev) {
            // Lipschitz-style continuity bound on the 0.01-spaced grid.
            CHECK(std::abs(s.v_eff_per_N - prev_v) <
                  0.05 * std::max(1.0, std::abs(prev_v)));
        }
        prev_v = s.v_eff_per_N;
        have_prev = true;
    }
    CHECK(defined_count > 250);
}

TEST_CASE("y_min: lo limit is zero, small N is gapped, goldens hold") {
    LargeNParams big{1e9, 1, 1};
    CHECK(find_y_min(big) == 0.0);

    // Golden fixtures for g=1, y0=1 from the min-residual oracle.
    struct Golden {
        double N, y_min;
    };
    const Golden table[] = {
        {2, 1.0485014}, {3, 0.8926582}, {5, 0.6598100}, {8, 0.3101963},
        {12, 0.0},
    };
    double prev = 1e300;
    for (const auto& row : table) {
        LargeNParams p{row.N, 1, 1};
        const double ym = find_y_min(p);
        CHECK(std::abs(ym - row.y_min) <= 2e-5);
        CHECK(ym <= prev + 1e-12);
        prev = ym;
    }
    CHECK(find_y_min(LargeNParams{2, 1, 1}) > 0.0);
}

TEST_CASE("y_min: production boundary matches the min-residual oracle") {
    for (double N : {3.0, 8.0}) {
        LargeNParams p{N, 1, 1};
        CHECK(std::abs(find_y_min(p) - oracle_y_min(p)) <= 1e-4);
    }
}

TEST_CASE("critical N: finite threshold for g=1, y0=1") {
    LargeNParams p{2, 1, 1};
    const double nc = scan_Nc(p, 2.0, 200.0);
    CHECK(std::abs(nc - 9.0790) <= 1e-3);
    // The threshold sits strictly inside the bracket.
    CHECK(nc > 2.0);
    CHECK(nc < 200.0);
}

TEST_CASE("critical N: missing bracket is rejected") {
    LargeNParams p{2, 1, 1};
    // Entire range above threshold: y_min(N_lo) = 0 breaks the precondition.
    CHECK_THROWS_WITH((void)scan_Nc(p, 50.0, 200.0), "no threshold in range");
    CHECK_THROWS_WITH((void)scan_Nc(p, 5.0, 2.0), "no threshold in range");
}
