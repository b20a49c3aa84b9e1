/// @file connection.hpp
/// @brief The quarter-symmetric connection
///   nabla_X Y = nabla^{LC}_X Y + lambda1 pi(Y) X - lambda2 g(X,Y) P,
/// its coefficients, torsion, non-metricity, and the curvature transform of
/// the Levi-Civita curvature.

#pragma once

#include "qsc/oracle.hpp"

namespace qsc {

struct PField {
    enum class Where { Zero, Base, Fiber };
    Where where = Where::Zero;
    int fiber_index = -1;
    std::vector<Expr> components; // contravariant, one per block coordinate

    static PField zero() { return PField{}; }
    static PField base(std::vector<Expr> comps) {
        PField p;
        p.where = Where::Base;
        p.components = std::move(comps);
        return p;
    }
    static PField fiber(int index, std::vector<Expr> comps) {
        PField p;
        p.where = Where::Fiber;
        p.fiber_index = index;
        p.components = std::move(comps);
        return p;
    }
    /// Canonical g(P,P)=1 instance on a circle fiber with constant warping b_r.
    static PField unit_circle(int index, double br) {
        return fiber(index, {Expr::num(1.0 / br)});
    }
};

struct QscParams {
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    PField p;

    /// Strict constructor: rejects lambda1 = 0 or lambda2 = 0.
    static QscParams make(double l1, double l2, PField p);
    /// Test-only constructor admitting degenerate lambdas and P = 0.
    static QscParams degenerate(double l1, double l2, PField p);

    enum class Kind { SemiSymmetricMetric, QuarterSymmetricMetric, QuarterSymmetricNonMetric };
    Kind classify(double tol = 1e-12) const;
};

/// P as a full-chart contravariant vector with first derivatives. Components
/// may depend only on their own block's coordinates.
std::vector<Jet1> p_field_jets(const SpaceSpec& spec, const QscParams& params,
                               const std::vector<double>& point);

/// Levi-Civita covariant derivative (nabla_i P)^k of the field's components.
Mat nabla_p(const SpaceSpec& spec, const QscParams& params, const std::vector<double>& point,
            const TensorAtPoint& lc);

/// Connection coefficients of the quarter-symmetric connection, with jets.
ConnJets qsc_conn_at(const SpaceSpec& spec, const QscParams& params,
                     const std::vector<double>& point);

/// Torsion T^k_{ij}; must equal lambda1 (pi_j delta^k_i - pi_i delta^k_j).
Rank3 torsion_at(const SpaceSpec& spec, const QscParams& params,
                 const std::vector<double>& point);

/// Non-metricity (nabla_i g)_{jk}; identically 0 iff lambda1 = lambda2 and
/// otherwise (lambda2-lambda1)[g_ij pi_k + g_ik pi_j].
Rank3 non_metricity_at(const SpaceSpec& spec, const QscParams& params,
                       const std::vector<double>& point);

/// Curvature via the algebraic transform of the Levi-Civita curvature
/// (the module's second, derivative-free route).
Rank4 curvature_qsc_direct(const SpaceSpec& spec, const QscParams& params,
                           const std::vector<double>& point);

/// Full quarter-symmetric package at a point: conn/curv from differentiated
/// coefficients, Ricci and scalar in paper convention.
TensorAtPoint qsc_oracle_at(const SpaceSpec& spec, const QscParams& params,
                            const std::vector<double>& point);

/// JSON round-trip per the documented schema.
std::string qsc_to_json(const QscParams& params);
QscParams qsc_from_json(const std::string& text, bool strict = true);

} // namespace qsc
