#include "largen/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace largen::numerics {

namespace {

using std::abs;

bool finite(const State& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// Dormand-Prince 5(4) tableau. Row a7 doubles as the 5th-order weights
// (FSAL), err[] = b5 - b4.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Dopri5 {
    const OdeRhs& rhs;
    std::size_t n;
    State k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;

    explicit Dopri5(const OdeRhs& f, std::size_t dim)
        : rhs(f), n(dim), k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim),
          k7(dim), ytmp(dim), ynew(dim) {}

    // One trial step from (t, y) with k1 = rhs(t, y) already filled.
    // Returns the scaled error norm; ynew/k7 hold the candidate state and
    // its slope.
    double attempt(double t, const State& y, double h, const ToleranceSpec& tol) {
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(t + h / 5, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + 3 * h / 10, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + 4 * h / 5, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                                  a54 * k4[i]);
        rhs(t + 8 * h / 9, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                  a64 * k4[i] + a65 * k5[i]);
        rhs(t + h, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] +
                                  a75 * k5[i] + a76 * k6[i]);
        rhs(t + h, ynew, k7);

        double sum = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double err = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                    e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc =
                std::max(tol.abs_tol,
                         tol.rel_tol * std::max(abs(y[i]), abs(ynew[i])));
            sum += (err / sc) * (err / sc);
        }
        return std::sqrt(sum / static_cast<double>(n));
    }
};

double initial_step(double span, double t0, const State& y0, const State& f0,
                    const ToleranceSpec& tol) {
    double ynorm = 0, fnorm = 0;
    for (std::size_t i = 0; i < y0.size(); ++i) {
        const double sc = std::max(tol.abs_tol, tol.rel_tol * abs(y0[i]));
        ynorm = std::max(ynorm, abs(y0[i]) / sc);
        fnorm = std::max(fnorm, abs(f0[i]) / sc);
    }
    double h = (fnorm > 0 && ynorm > 0) ? 0.01 * ynorm / fnorm : span * 1e-6;
    h = std::min(h, span);
    const double floor = 16 * std::numeric_limits<double>::epsilon() *
                         std::max(abs(t0), 1.0);
    return std::max(h, floor);
}

template <typename OnAccept>
void drive(const OdeRhs& rhs, State& y, double t0, double t1,
           const ToleranceSpec& tol, OnAccept&& on_accept) {
    tol.validate();
    if (!(t1 > t0)) throw std::invalid_argument("invalid step");
    if (y.empty()) throw std::invalid_argument("empty state");

    Dopri5 stepper(rhs, y.size());
    rhs(t0, y, stepper.k1);
    if (!finite(stepper.k1) || !finite(y))
        throw std::runtime_error("divergent dynamics");

    double t = t0;
    double h = initial_step(t1 - t0, t0, y, stepper.k1, tol);
    long attempts = 0;

    while (t < t1) {
        h = std::min(h, t1 - t);
        const double floor = 16 * std::numeric_limits<double>::epsilon() *
                             std::max(abs(t), 1.0);
        if (h < floor) throw std::runtime_error("divergent dynamics");
        if (++attempts > tol.max_steps)
            throw std::runtime_error("integration budget exceeded");

        const double err = stepper.attempt(t, y, h, tol);
        if (!std::isfinite(err) || !finite(stepper.ynew)) {
            // Retry smaller before declaring blow-up; persistent non-finite
            // trial states end in the floor test above.
            h *= 0.25;
            continue;
        }
        if (err <= 1.0) {
            t += h;
            y = stepper.ynew;
            stepper.k1 = stepper.k7;  // FSAL
            on_accept(t, y);
            const double grow = (err == 0) ? 5.0
                                           : std::min(5.0, 0.9 * std::pow(err, -0.2));
            h *= std::max(grow, 0.2);
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
    }
}

}  // namespace

void ToleranceSpec::validate() const {
    if (!(abs_tol > 0) || !(rel_tol >= 0) || max_steps <= 0)
        throw std::invalid_argument("invalid tolerance spec");
}

Trajectory integrate_ode(const OdeRhs& rhs, State y0, double t0, double t1,
                         const ToleranceSpec& tol) {
    Trajectory out;
    out.times.push_back(t0);
    out.states.push_back(y0);
    drive(rhs, y0, t0, t1, tol, [&](double t, const State& y) {
        out.times.push_back(t);
        out.states.push_back(y);
    });
    return out;
}

State integrate_to(const OdeRhs& rhs, State y0, double t0, double t1,
                   const ToleranceSpec& tol) {
    drive(rhs, y0, t0, t1, tol, [](double, const State&) {});
    return y0;
}

double find_root(const std::function<double(double)>& fn, double lo, double hi,
                 const ToleranceSpec& tol) {
    tol.validate();
    if (!(lo < hi)) throw std::invalid_argument("bracket invalid");
    double flo = fn(lo), fhi = fn(hi);
    if (!std::isfinite(flo) || !std::isfinite(fhi) || flo * fhi > 0)
        throw std::invalid_argument("bracket invalid");
    if (abs(flo) <= tol.abs_tol) return lo;
    if (abs(fhi) <= tol.abs_tol) return hi;

    double x = lo, fx = flo;
    for (long it = 0; it < tol.max_steps; ++it) {
        // Secant proposal from the bracket ends, bisection fallback.
        double cand = (abs(fhi - flo) > 0)
                          ? hi - fhi * (hi - lo) / (fhi - flo)
                          : 0.5 * (lo + hi);
        const double width = hi - lo;
        if (!(cand > lo + 0.01 * width) || !(cand < hi - 0.01 * width))
            cand = 0.5 * (lo + hi);

        x = cand;
        fx = fn(x);
        if (!std::isfinite(fx)) throw std::runtime_error("root iteration exhausted");
        if (abs(fx) <= tol.abs_tol) return x;

        if (flo * fx <= 0) {
            hi = x;
            fhi = fx;
        } else {
            lo = x;
            flo = fx;
        }
        if (hi - lo <= tol.rel_tol * abs(x)) return 0.5 * (lo + hi);
    }
    throw std::runtime_error("root iteration exhausted");
}

std::vector<std::complex<double>> solve_tridiagonal(
    std::span<const std::complex<double>> lower,
    std::span<const std::complex<double>> diag,
    std::span<const std::complex<double>> upper,
    std::span<const std::complex<double>> rhs) {
    const std::size_t n = diag.size();
    if (n == 0 || rhs.size() != n || lower.size() + 1 != n ||
        upper.size() + 1 != n)
        throw std::invalid_argument("tridiagonal size mismatch");

    std::vector<std::complex<double>> c(n - 1), d(n);
    std::complex<double> pivot = diag[0];
    if (abs(pivot) == 0) throw std::runtime_error("singular tridiagonal system");
    if (n > 1) c[0] = upper[0] / pivot;
    d[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - lower[i - 1] * c[i - 1];
        if (abs(pivot) == 0)
            throw std::runtime_error("singular tridiagonal system");
        if (i < n - 1) c[i] = upper[i] / pivot;
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
    return d;
}

double quadrature(std::span<const double> samples, double spacing) {
    const std::size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("insufficient samples");
    if (!(spacing > 0)) throw std::invalid_argument("invalid step");

    // Simpson needs an even interval count; close a trailing odd interval
    // with the trapezoid rule.
    std::size_t m = (n % 2 == 1) ? n : n - 1;
    double sum = 0;
    if (m >= 3) {
        sum = samples[0] + samples[m - 1];
        for (std::size_t i = 1; i < m - 1; i += 2) sum += 4 * samples[i];
        for (std::size_t i = 2; i < m - 1; i += 2) sum += 2 * samples[i];
        sum *= spacing / 3;
    }
    if (m != n) sum += 0.5 * spacing * (samples[n - 2] + samples[n - 1]);
    return sum;
}

}  // namespace largen::numerics
