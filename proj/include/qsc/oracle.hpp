/// @file oracle.hpp
/// @brief First-principles curvature pipeline: assemble the product metric in
/// coordinates, differentiate exactly, and contract.
///
/// Sign conventions follow the source formulas this workbench verifies:
///   R(X,Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y]
///   Ric(X,Y) = sum_k eps_k <R(X,E_k)Y, E_k>     (note: NEGATIVE of the
///   S = sum_k eps_k Ric(E_k,E_k)                 common Ric convention)
/// Laplacian, |grad|^2 and divergence are eps-signed traces throughout, so
/// on (I, -dt^2) one has Delta f = -f'' and |grad f|^2 = -(f')^2.

#pragma once

#include "qsc/space.hpp"
#include "qsc/tensors.hpp"

namespace qsc {

// --- metric assembly -------------------------------------------------------

/// Full product metric g = g_B (+) b_i^2 g_{F_i} with exact jets.
JetMat metric_at(const SpaceSpec& spec, const std::vector<double>& point);

/// Bare base metric (entries in the base block only).
JetMat base_metric_at(const SpaceSpec& spec, const std::vector<double>& point);

/// Unscaled fiber metric g_{F_i} (entries in fiber i's block only).
JetMat fiber_metric_at(const SpaceSpec& spec, int fiber, const std::vector<double>& point);

// --- block-level operations -------------------------------------------------

/// Inverse metric on a block, with first derivatives.
std::vector<Jet1> invert_metric_jets(const JetMat& g, Block blk);

/// Plain value-level inverse on a block.
Mat invert_metric(const Mat& g, Block blk);

/// Levi-Civita Gamma^k_{ij} = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij) on a block.
ConnJets christoffels(const JetMat& g, Block blk);

/// R^l_{ijk} from connection coefficients with first derivatives; valid for
/// any affine connection, not only Levi-Civita.
Rank4 curvature_from_conn(const ConnJets& conn, Block blk);

/// Orthonormal frame from a (diagonal) metric: E_k = d_k / sqrt|g_kk|.
struct Frame {
    int n = 0;
    Block block;
    Mat vectors;             // row k = components of E_k
    std::vector<double> eps; // eps_k = g(E_k, E_k)
};
Frame frame_from_metric(const Mat& g, Block blk);

/// Paper-convention Ricci: Ric_ab = sum_k eps_k <R(d_a, E_k) d_b, E_k>.
Mat ricci_paper(const Rank4& curv, const Frame& frame, const Mat& g);

/// Paper-convention scalar: S = sum_k eps_k Ric(E_k, E_k).
double scalar_paper(const Mat& ricci, const Frame& frame);

// --- assembled oracle -------------------------------------------------------

/// Dense component arrays at a chart point (Levi-Civita data).
struct TensorAtPoint {
    std::vector<double> point;
    Mat metric;
    Mat inverse_metric;
    Rank3 conn;
    Rank4 curv;
    Mat ricci;
    double scalar = 0.0;
    Frame frame;
    JetMat metric_jets;
    ConnJets conn_jets;
};

/// Levi-Civita connection only (metric, inverse, conn filled).
TensorAtPoint levi_civita_at(const SpaceSpec& spec, const std::vector<double>& point);

/// Full Levi-Civita package: connection, curvature, Ricci, scalar, frame.
TensorAtPoint oracle_at(const SpaceSpec& spec, const std::vector<double>& point);

// --- base calculus ----------------------------------------------------------

/// grad_B, |grad_B|^2, Hessian, Laplacian of a base-only scalar. All traces
/// carry the eps_k signature signs.
struct BaseScalarCalculus {
    std::vector<double> grad; // contravariant, full-dim vector (base entries)
    double grad_norm_sq = 0.0;
    Mat hessian;              // H^f_{ab} on the base block
    double laplacian = 0.0;
};
BaseScalarCalculus base_calculus(const SpaceSpec& spec, const std::vector<double>& point,
                                 const Expr& scalar);

/// div_B P = sum_k eps_k <nabla_{E_k} P, E_k> for a base vector field given by
/// contravariant component expressions over base coordinates.
double base_divergence(const SpaceSpec& spec, const std::vector<double>& point,
                       const std::vector<Expr>& components);

} // namespace qsc
