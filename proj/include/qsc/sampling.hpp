/// @file sampling.hpp
/// @brief Seeded random spaces, connections and chart points for the
/// regression and verification sweeps. Deterministic given the engine state.

#pragma once

#include "qsc/connection.hpp"

#include <random>

namespace qsc {

enum class TwistMode {
    None,     // warped products only
    Dim1Only, // fiber-dependent warpings restricted to 1-d fibers (catalog-exact)
    Any       // arbitrary twists; same-fiber curvature items carry the documented gap
};

struct SampleOptions {
    int max_base_dim = 2;
    int max_fibers = 2;
    int max_fiber_dim = 2;
    TwistMode twist = TwistMode::None;
    bool allow_conformal = true;  // conformal 2-d base patches
    bool allow_sphere = true;
    double lambda_lo = -3.0, lambda_hi = 3.0, lambda_min_abs = 0.15;
    bool p_on_fiber_allowed = true; // P on a circle fiber when one exists
};

SpaceSpec sample_space(std::mt19937& rng, const SampleOptions& opt = {});

/// Quarter-symmetric parameters with lambdas in [lo,hi] bounded away from 0;
/// P on the base, or on a circle fiber when allowed and present.
QscParams sample_qsc(std::mt19937& rng, const SpaceSpec& spec, const SampleOptions& opt = {});

/// Chart point with t in [-1,1], flat coordinates in [-1,1], sphere angles
/// inside the guarded chart interior.
std::vector<double> sample_point(std::mt19937& rng, const SpaceSpec& spec);

} // namespace qsc
