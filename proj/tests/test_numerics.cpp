#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "largen/numerics.hpp"

using namespace largen::numerics;
using cplx = std::complex<double>;

TEST_CASE("ode: linear decay hits the exact exponential") {
    auto traj = integrate_ode(
        [](double, const State& y, State& dy) { dy[0] = -y[0]; }, {1.0}, 0.0,
        1.0);
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(traj.back()[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-8));
}

TEST_CASE("ode: harmonic motion returns to the start after one period") {
    auto rhs = [](double, const State& y, State& dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    auto y = integrate_to(rhs, {1.0, 0.0}, 0.0, 2 * std::numbers::pi);
    CHECK(std::abs(y[0] - 1.0) < 1e-9);
    CHECK(std::abs(y[1]) < 1e-9);
}

TEST_CASE("ode: quadratic blow-up is reported as divergent") {
    auto rhs = [](double, const State& y, State& dy) { dy[0] = y[0] * y[0]; };
    CHECK_THROWS_WITH(integrate_to(rhs, {1.0}, 0.0, 2.0), "divergent dynamics");
}

TEST_CASE("ode: step budget exhaustion is reported") {
    ToleranceSpec tight;
    tight.max_steps = 10;
    auto rhs = [](double, const State& y, State& dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    CHECK_THROWS_WITH(integrate_to(rhs, {1.0, 0.0}, 0.0, 1000.0, tight),
                      "integration budget exceeded");
}

TEST_CASE("ode: oscillator energy is conserved over ten periods") {
    const double omega = 1.0;
    auto rhs = [=](double, const State& y, State& dy) {
        dy[0] = y[1];
        dy[1] = -omega * omega * y[0];
    };
    ToleranceSpec tol;
    auto energy = [=](const State& y) {
        return 0.5 * (y[1] * y[1] + omega * omega * y[0] * y[0]);
    };
    State y0 = {1.0, 0.0};
    const double e0 = energy(y0);
    auto traj = integrate_ode(rhs, y0, 0.0, 10 * 2 * std::numbers::pi, tol);
    double worst = 0;
    for (const auto& y : traj.states)
        worst = std::max(worst, std::abs(energy(y) - e0));
    CHECK(worst <= 100 * tol.rel_tol * e0);
}

TEST_CASE("root: sqrt(2) from its defining polynomial") {
    double x = find_root([](double t) { return t * t - 2; }, 1.0, 2.0);
    CHECK(std::abs(x * x - 2) <= 1e-10);
    CHECK(x == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

    ToleranceSpec tight;
    tight.abs_tol = 1e-14;
    x = find_root([](double t) { return t * t - 2; }, 1.0, 2.0, tight);
    CHECK(x == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("root: odd function through the origin") {
    double x = find_root([](double t) { return t; }, -1.0, 1.0);
    CHECK(std::abs(x) <= 1e-10);
}

TEST_CASE("root: sign-definite function rejects the bracket") {
    CHECK_THROWS_WITH(find_root([](double t) { return t * t + 1; }, 0.0, 1.0),
                      "bracket invalid");
}

TEST_CASE("root: result stays inside the bracket for awkward shapes") {
    std::mt19937 gen(1234);
    std::uniform_real_distribution<double> shift(-0.9, 0.9);
    for (int trial = 0; trial < 50; ++trial) {
        const double c = shift(gen);
        auto fn = [=](double t) { return std::tanh(8 * (t - c)) + 0.3 * (t - c); };
        const double x = find_root(fn, -1.0, 1.0);
        CHECK(x >= -1.0);
        CHECK(x <= 1.0);
        CHECK(std::abs(x - c) < 1e-6);
    }
}

TEST_CASE("tridiagonal: identity and 2x2 hand solve") {
    std::vector<cplx> none(2, 0.0), diag(3, 1.0), rhs = {1.0, 2.0, 3.0};
    auto x = solve_tridiagonal(none, diag, none, rhs);
    CHECK(x[0].real() == doctest::Approx(1.0));
    CHECK(x[1].real() == doctest::Approx(2.0));
    CHECK(x[2].real() == doctest::Approx(3.0));

    std::vector<cplx> off = {1.0}, d2 = {2.0, 2.0}, r2 = {3.0, 3.0};
    auto y = solve_tridiagonal(off, d2, off, r2);
    CHECK(y[0].real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(y[1].real() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("tridiagonal: zero pivot reported as singular") {
    std::vector<cplx> none(2, 0.0), diag = {1.0, 0.0, 1.0}, rhs(3, 1.0);
    CHECK_THROWS_WITH(solve_tridiagonal(none, diag, none, rhs),
                      "singular tridiagonal system");
}

TEST_CASE("tridiagonal: random well-conditioned systems solve to 1e-12") {
    std::mt19937 gen(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t n : {2ul, 17ul, 128ul, 512ul}) {
        std::vector<cplx> lower(n - 1), upper(n - 1), diag(n), x_true(n);
        for (auto& v : lower) v = cplx(u(gen), u(gen));
        for (auto& v : upper) v = cplx(u(gen), u(gen));
        for (std::size_t i = 0; i < n; ++i) {
            // Strict diagonal dominance keeps the condition number benign.
            diag[i] = cplx(4.0 + u(gen), u(gen));
            x_true[i] = cplx(u(gen), u(gen));
        }
        std::vector<cplx> rhs(n);
        for (std::size_t i = 0; i < n; ++i) {
            rhs[i] = diag[i] * x_true[i];
            if (i > 0) rhs[i] += lower[i - 1] * x_true[i - 1];
            if (i + 1 < n) rhs[i] += upper[i] * x_true[i + 1];
        }
        auto x = solve_tridiagonal(lower, diag, upper, rhs);
        double num = 0, den = 0;
        for (std::size_t i = 0; i < n; ++i) {
            num += std::norm(x[i] - x_true[i]);
            den += std::norm(x_true[i]);
        }
        CHECK(std::sqrt(num / den) < 1e-12);
    }
}

TEST_CASE("quadrature: cubic exactness on five samples") {
    std::vector<double> s(5);
    for (int i = 0; i < 5; ++i) {
        const double x = 0.25 * i;
        s[i] = x * x * x;
    }
    CHECK(quadrature(s, 0.25) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("quadrature: constants integrate to the interval length") {
    for (int n : {2, 3, 4, 7, 10, 101}) {
        std::vector<double> s(n, 1.0);
        const double h = 2.0 / (n - 1);
        CHECK(quadrature(s, h) == doctest::Approx(2.0).epsilon(1e-14));
    }
}

TEST_CASE("quadrature: single sample rejected") {
    std::vector<double> s = {1.0};
    CHECK_THROWS_WITH((void)quadrature(s, 0.1), "insufficient samples");
}

TEST_CASE("quadrature: fourth-order convergence on a smooth integrand") {
    auto integrate = [](int n) {
        std::vector<double> s(n);
        const double h = 1.0 / (n - 1);
        for (int i = 0; i < n; ++i) s[i] = std::exp(std::sin(3 * i * h));
        return quadrature(s, h);
    };
    const double fine = integrate(4097);
    const double e1 = std::abs(integrate(33) - fine);
    const double e2 = std::abs(integrate(65) - fine);
    const double e3 = std::abs(integrate(129) - fine);
    CHECK(e1 / e2 > 12.0);  // >= 4th order would give 16
    CHECK(e2 / e3 > 12.0);
}
