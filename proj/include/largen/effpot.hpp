#pragma once

#include <string>

#include "largen/numerics.hpp"
#include "largen/params.hpp"

namespace largen::effpot {

using numerics::ToleranceSpec;

// One point of the leading-order parametric potential: both members are
// functions of the auxiliary field chi. y_squared can come out negative;
// physical flags the y² ≥ 0 branch.
struct LoPoint {
    double v_per_N;
    double y_squared;
    bool physical;
};

// V0/N = chi²/(2g) + sqrt(chi)/4,  y²(chi) = y0² + 2chi/g − 1/(2 sqrt(chi)).
// chi ≤ 0 throws "chi out of domain".
LoPoint v_eff_lo(double chi, const LargeNParams& params);

// Auxiliary mass pair m±² = b ± sqrt(b²−c) entering the next-to-leading
// order correction.
struct AuxiliaryMasses {
    double m_plus;
    double m_minus;
    double b;
    double c;
};

// b = (5/2)chi + (g/2)(y² + 1/(2 sqrt(chi))),
// c = 4chi² + g(4y²chi + sqrt(chi)/2).
// A negative discriminant throws "complex auxiliary masses"; for real y,
// chi > 0, g ≥ 0 the discriminant is provably ≥ (3/2)g·sqrt(chi) + (3chi/2 −
// gy²/2)², so the branch guards against unphysical inputs only.
AuxiliaryMasses auxiliary_masses(double y, double chi, double g);

// Solution of chi = (g/2)(y²−y0²) + g(N−3)/(4N sqrt(chi))
//                 + (g/2N)·d(m₊+m₋)/dchi.
// defined=false is a legitimate outcome (the potential has no value at this
// y); branch_info says which condition failed.
struct GapSolution {
    double y = 0;
    double chi = 0;
    double v_eff_per_N = 0;
    bool defined = false;
    std::string branch_info;
};

// Root of the gap equation nearest to the leading-order chi (branch
// continuity). The mass-derivative term uses a central difference with step
// 1e−6·max(1, chi). The residual is scanned on a log grid over
// (1e−5·max(1,chi_lo), chi_max·] before refinement, chi_max growing with
// chi_lo when needed.
GapSolution solve_gap(double y, const LargeNParams& params,
                      const ToleranceSpec& tol = {}, double chi_max = 100.0);

// Leading-order chi at given y: unique positive root of
// s³ − (g/2)(y²−y0²)·s − g/4 with s = sqrt(chi).
double chi_lo_at(double y, const LargeNParams& params);

// V/N = (chi/2)(y²−y0²) − chi²/(2g) + sqrt(chi)/2 + (m₊+m₋−3 sqrt(chi))/(2N)
// with chi from solve_gap; v_eff_per_N is NaN when undefined.
GapSolution v_eff_nlo(double y, const LargeNParams& params,
                      const ToleranceSpec& tol = {}, double chi_max = 100.0);

// Boundary of the defined region: bisection between undefined and defined y.
// Returns 0 when the potential exists at y = 0; throws
// "domain empty up to y_hi" when even y_hi is undefined.
double find_y_min(const LargeNParams& params, const ToleranceSpec& tol = {},
                  double y_hi = 5.0);

// Smallest N in [N_lo, N_hi] whose potential is defined all the way to y=0,
// located by bisection. Requires y_min(N_lo) > 0 and y_min(N_hi) = 0
// ("no threshold in range" otherwise).
double scan_Nc(const LargeNParams& params_template, double N_lo, double N_hi,
               const ToleranceSpec& tol = {});

}  // namespace largen::effpot
