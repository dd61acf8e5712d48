#pragma once

namespace largen {

// Model parameters after the r² = N·y² rescaling: component count N (kept
// real-valued so threshold scans can move continuously), quartic coupling g,
// and potential-minimum location y0 (r0² = N·y0²).
struct LargeNParams {
    double N = 2.0;
    double g = 1.0;
    double y0 = 1.0;

    void validate() const;
};

}  // namespace largen
