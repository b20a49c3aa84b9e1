/// @file space.hpp
/// @brief Product-space descriptions: base model, fiber models, warpings.
///
/// A SpaceSpec is M = B x_{b1} F1 x ... x_{bm} Fm with metric
/// g = g_B (+) b_i^2 g_{F_i}. Warpings may depend on base coordinates and,
/// when twisted, on the owning fiber's coordinates. All chart metrics built
/// here are diagonal, which the curvature pipeline relies on for frames.
///
/// Chart coordinate names: base Interval uses "t", flat/conformal patches
/// x1..xn; fiber 0 uses u1..ul, fiber 1 v1.., fiber 2 w1.. (sphere fibers
/// use the polar chart in those names, guarded 0.1 rad away from poles).

#pragma once

#include "qsc/expr.hpp"

#include <string>
#include <vector>

namespace qsc {

struct SpecError : std::runtime_error {
    explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};
struct ChartError : std::runtime_error {
    explicit ChartError(const std::string& what) : std::runtime_error(what) {}
};

/// Contiguous index range of a factor inside the product chart.
struct Block {
    int offset = 0;
    int dim = 0;
    bool contains(int i) const { return i >= offset && i < offset + dim; }
};

enum class BaseKind { Interval, FlatPatch, ConformalPatch };

struct BaseModel {
    BaseKind kind = BaseKind::Interval;
    int dim = 1;
    std::vector<int> signature;       // +-1 per coordinate
    std::vector<std::string> coords;  // coordinate names
    Expr conformal_factor;            // ConformalPatch: g = w^2 diag(signature), w > 0

    static BaseModel interval(int sign = -1, const std::string& name = "t");
    static BaseModel flat(std::vector<int> signature);
    static BaseModel conformal(std::vector<int> signature, Expr factor);
};

enum class FiberKind { Circle, FlatTorus, RoundSphere };

struct FiberModel {
    FiberKind kind = FiberKind::Circle;
    int dim = 1;
    double radius = 1.0; // RoundSphere only

    static FiberModel circle();
    static FiberModel torus(int dim);
    static FiberModel sphere(int dim, double radius);

    /// S^F in the paper's sign convention (0 for flat models, -l(l-1)/rho^2
    /// for the round sphere).
    double scalar_paper() const;
    /// Einstein constant of the fiber in paper convention (Ric^F = alpha g_F).
    double einstein_alpha_paper() const;
};

/// Polar-chart guard distance from sphere poles, in radians.
inline constexpr double kSphereChartMargin = 0.1;

struct SpaceSpec {
    BaseModel base;
    std::vector<FiberModel> fibers;
    std::vector<Expr> warpings;
    std::vector<bool> twisted; // derived: warping i references fiber-i coordinates

    static SpaceSpec make(BaseModel base, std::vector<FiberModel> fibers,
                          std::vector<Expr> warpings);

    int base_dim() const { return base.dim; }
    int fiber_count() const { return static_cast<int>(fibers.size()); }
    int total_dim() const;

    Block base_block() const { return Block{0, base.dim}; }
    Block fiber_block(int i) const;
    Block full_block() const { return Block{0, total_dim()}; }
    /// Fiber index owning chart coordinate a, or -1 for base coordinates.
    int owner_fiber(int a) const;

    const std::vector<std::string>& coord_names() const { return names_; }
    int coord_index(const std::string& name) const;

    /// Chart-point environment: every coordinate bound as a jet variable of
    /// the full chart dimension.
    Env chart_env(const std::vector<double>& point) const;

    /// Warping b_i evaluated with jets; throws SpecError if non-positive.
    Jet2 warping_at(int i, const Env& env) const;

    /// Point admissibility (sphere chart guards, warping positivity).
    void check_point(const std::vector<double>& point) const;

    std::vector<std::string> names_; // cached coordinate names
};

/// Default fiber coordinate names: fiber 0 -> u1..ul, 1 -> v1.., 2 -> w1..
std::vector<std::string> fiber_coord_names(int fiber_index, int dim);

/// JSON round-trip per the documented schema.
std::string space_to_json(const SpaceSpec& spec);
SpaceSpec space_from_json(const std::string& json_text);

} // namespace qsc
