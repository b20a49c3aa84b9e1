/// @file families.hpp
/// @brief Linear second-order constant-coefficient solution families and
/// grid residual checks shared by the GRW and Kasner solvers.

#pragma once

#include "qsc/expr.hpp"

#include <functional>
#include <map>

namespace qsc {

struct GridSpec {
    double t0 = 0.0, t1 = 1.0;
    int points = 101;
    double t(int k) const { return t0 + (t1 - t0) * k / (points - 1); }
};

/// x'' + a1 x' + a0 x = rhs with constant coefficients.
struct Linear2 {
    double a1 = 0.0, a0 = 0.0, rhs = 0.0;

    enum class Kind { RealDistinct, RealDouble, ComplexPair };

    double discriminant() const { return a1 * a1 - 4.0 * a0; }
    Kind kind(double tol = 1e-9) const {
        double d = discriminant();
        double s = std::max(1.0, a1 * a1 + std::abs(a0));
        if (d > tol * s) return Kind::RealDistinct;
        if (d < -tol * s) return Kind::ComplexPair;
        return Kind::RealDouble;
    }

    /// General solution in t with free constants c1, c2. Inputs within tol of
    /// a case boundary are classified to the boundary case.
    Expr solution(double tol = 1e-9) const;
};

/// Pointwise residual of a second-order functional.
using Residual2 = std::function<double(double t, double f, double df, double ddf)>;

struct GridEval {
    double max_residual = 0.0; // normalized by max(1, max |f|^2) on the grid
    double max_raw = 0.0;
    double min_f = 0.0;
    double max_abs_f = 0.0;
};

/// Evaluates candidate(t; constants) on the grid and reports the normalized
/// residual maximum together with the candidate's range.
GridEval grid_residual(const Expr& candidate, const Residual2& residual, const GridSpec& grid,
                       const std::map<std::string, double>& constants);

} // namespace qsc
