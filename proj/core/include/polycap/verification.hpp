#pragma once

#include "polycap/capacity_engine.hpp"
#include "polycap/problem_space.hpp"
#include "polycap/report.hpp"

namespace polycap {

struct VerifyOptions {
    Discretization disc;
    double scale = 0.125;         ///< scaling factor for the homogeneity checks
    double scaling_tol = 1e-12;
    double solver_tol = 1e-10;    ///< slack for monotonicity and refinement comparisons
};

/// The invariant suite for one (m, n): symbol bounds, fundamental-solution
/// checks, and capacity properties (scaling, monotonicity in K and in the
/// ambient, Kelvin and equivalence ratios, refinement monotonicity, Π-shift
/// invariance of Φ, empty obstacle, and the explicit m = 1 solutions).
Report verify_suite(const Dims& dims, const VerifyOptions& opts = {});

}  // namespace polycap
