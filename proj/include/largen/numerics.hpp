#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace largen::numerics {

// Shared accuracy knobs. abs_tol/rel_tol enter the per-step error test of the
// ODE driver and the stopping rules of the root finder; max_steps bounds the
// total work of either.
struct ToleranceSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    long max_steps = 10'000'000;

    void validate() const;
};

using State = std::vector<double>;
using OdeRhs = std::function<void(double t, const State& y, State& dydt)>;

// Accepted integration points, t0 and t1 included. states[i] belongs to times[i].
struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;

    const State& back() const { return states.back(); }
    std::size_t size() const { return times.size(); }
};

// Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)). The step is accepted
// when the embedded error estimate satisfies |err_i| <= max(abs_tol,
// rel_tol*|y_i|) componentwise in the rms sense. Throws
// "integration budget exceeded" when max_steps step attempts do not reach t1
// and "divergent dynamics" when the state or the step size stops being a
// usable number.
Trajectory integrate_ode(const OdeRhs& rhs, State y0, double t0, double t1,
                         const ToleranceSpec& tol = {});

// Same driver without trajectory storage; returns the state at t1.
State integrate_to(const OdeRhs& rhs, State y0, double t0, double t1,
                   const ToleranceSpec& tol = {});

// Bracketed scalar root: secant proposals clipped to a sign-preserving
// bracket, bisection when the proposal is not acceptable. Requires
// fn(lo)*fn(hi) <= 0 ("bracket invalid" otherwise). Converged when
// |fn(x)| <= abs_tol or the bracket width falls below rel_tol*|x|.
double find_root(const std::function<double(double)>& fn, double lo, double hi,
                 const ToleranceSpec& tol = {});

// Thomas solve of a complex tridiagonal system. lower/upper have size n-1,
// diag and rhs size n. A vanishing pivot throws "singular tridiagonal system".
std::vector<std::complex<double>> solve_tridiagonal(
    std::span<const std::complex<double>> lower,
    std::span<const std::complex<double>> diag,
    std::span<const std::complex<double>> upper,
    std::span<const std::complex<double>> rhs);

// Composite Simpson rule on uniform samples; the trailing interval of an
// even-length sample set is closed with the trapezoid rule. Exact for cubics
// on odd sample counts. Fewer than two samples: "insufficient samples".
double quadrature(std::span<const double> samples, double spacing);

}  // namespace largen::numerics
