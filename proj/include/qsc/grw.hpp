/// @file grw.hpp
/// @brief Einstein and constant-scalar-curvature analysis for generalized
/// Robertson-Walker products M = I x_{b_i} F_i with metric -dt^2 (+) b_i^2 g_{F_i}:
/// condition residuals, closed-form solution families, classification.
///
/// Fiber constants (alpha_i, S^{F_i}) are stored in the paper's sign
/// convention throughout.

#pragma once

#include "qsc/connection.hpp"
#include "qsc/families.hpp"

#include <optional>

namespace qsc::grw {

struct FiberData {
    int l = 1;
    double alpha = 0.0; // Einstein constant of (F_i, nabla^{F_i}); 0 forced when l = 1
    double SF = 0.0;    // scalar curvature of the fiber
};

enum class PLoc { BaseTime, Fiber };

struct GrwProblem {
    std::vector<FiberData> fibers;
    double lambda1 = 1.0, lambda2 = 1.0;
    PLoc p_location = PLoc::BaseTime;
    int p_fiber = 0;

    static GrwProblem make(std::vector<FiberData> fibers, double l1, double l2,
                           PLoc loc = PLoc::BaseTime, int p_fiber = 0);
    int nbar() const;
};

/// One closed-form family: the solved warping with free constants c0/c1/c2
/// plus the constraint values the case pins down.
struct SolutionFamily {
    std::string case_id;
    Expr f;                    // in t and the free constants
    std::string unknown = "f"; // which function the expression solves: f, v = f^2, or w
    double alpha = 0.0;        // Einstein constant (Einstein families)
    double alphaF_coeff_c2sq = 0.0; // alpha_F = coeff * c2^2 (Thm 3.16 cases 1-2)
    double alphaF = 0.0;            // fixed alpha_F when not c2-dependent
    double Sbar = 0.0;              // constant scalar curvature (scalar families)
    double SF = 0.0;
    std::string validity;
    bool valid = true;
    double residual_max = -1.0;
    std::vector<std::string> flags;
};

// --- Einstein conditions -----------------------------------------------------

/// Residual grids of the Einstein conditions for P = d/dt: the alpha equation
/// (condition 2) and the per-fiber condition (3). m = 1 reduces to the singly
/// warped statement. Condition (3) rows are normalized by max(1, max b_i^2).
struct ConditionResiduals {
    std::vector<double> t;
    std::vector<double> cond2;
    std::vector<std::vector<double>> cond3;
    double max2() const;
    double max3() const;
};
ConditionResiduals einstein_conditions(const GrwProblem& prob, const std::vector<Expr>& b,
                                       double alpha,
                                       const std::map<std::string, double>& constants = {},
                                       const GridSpec& grid = {});

/// dim F = 1 family (single linear ODE, verbatim). The discriminant
/// (2 lambda1 - lambda2)^2 - 4 alpha picks the case; |lambda2 - 2 lambda1|
/// within tolerance additionally tags the specialized corollary family.
SolutionFamily solve_einstein_dimF1(double lambda1, double lambda2, double alpha,
                                    double tol = 1e-9);

/// dim F = l > 1 classification: emits every family whose validity predicate
/// holds, with Einstein-condition residuals attached (5 unit-constant check).
std::vector<SolutionFamily> classify_einstein_dimFl(double lambda1, double lambda2, int l,
                                                    double tol = 1e-9);

/// Residuals of the dim F = l > 1 condition pair for a given family draw.
struct Cor313Residuals {
    double cond2 = 0.0, cond3 = 0.0;
};
Cor313Residuals einstein_dimFl_residuals(double lambda1, double lambda2, int l, double alpha,
                                         double alphaF, const Expr& f,
                                         const std::map<std::string, double>& constants,
                                         const GridSpec& grid = {});

// --- scalar curvature ---------------------------------------------------------

/// S-bar(t) on the grid from the closed scalar expression, with the deviation
/// from its mean. P = d/dt uses the l-fiber expression; P on fiber r takes
/// g_{F_r}(P,P) and div_{F_r}P as constants and reports which variables-
/// separation case applies ("1", "2", "3", or "rejected"/"none").
struct ScalarEval {
    std::vector<double> t, S;
    double mean = 0.0;
    double max_dev = 0.0;
    std::string separation_case; // fiber-P only
};
ScalarEval scalar_grw(const GrwProblem& prob, const std::vector<Expr>& b,
                      const std::map<std::string, double>& constants = {},
                      const GridSpec& grid = {});
ScalarEval scalar_grw_fiberP(const GrwProblem& prob, const std::vector<Expr>& b, double gFPP,
                             double divFP, const std::map<std::string, double>& constants = {},
                             const GridSpec& grid = {});

/// dim F = 3 scalar families in v = f^2 (five cases on the S-bar thresholds).
SolutionFamily solve_scalar_l3(double lambda1, double lambda2, double Sbar, double SF,
                               double tol = 1e-9);

/// dim F = l != 3, S^F = 0 families in w with v = w^{4/(l+1)}; l = 3 redirects.
SolutionFamily solve_scalar_flatfiber(double lambda1, double lambda2, int l, double Sbar,
                                      double tol = 1e-9);

/// Grid residual of the v-equation (universal scalar acceptance check).
double scalar_ode_residual(int l, double lambda1, double lambda2, double Sbar, double SF,
                           const Expr& v, const std::map<std::string, double>& constants,
                           const GridSpec& grid = {});

/// Grid residual of the w-equation for l != 3 (S^F != 0 admitted; no closed
/// form is produced in that regime, this is the residual checker only).
double scalar_ode_residual_w(int l, double lambda1, double lambda2, double Sbar, double SF,
                             const Expr& w, const std::map<std::string, double>& constants,
                             const GridSpec& grid = {});

// --- P on a fiber --------------------------------------------------------------

/// Condition set for the Einstein problem with P on fiber r, g(P,P) evaluated
/// from the realized field. Reports violated conditions instead of raising.
struct FiberPConditions {
    bool br_constant = false;
    double mu0 = 0.0, mu0_dev = 0.0; // sum l_i b_i''/b_i and its grid deviation
    double mu1 = 0.0, mu1_dev = 0.0; // div_{F_r} P over fiber samples
    double piP = 0.0;                // g(P,P)
    double forced_alpha = 0.0;       // from the linkage mu0 - l2 mu1 + alpha = [(n-1)l1l2-l2^2] piP
    double cond3_residual = 0.0;     // fiber-r Ricci condition via the oracle
    std::vector<double> cond4_max;   // per-fiber residuals at the forced alpha
    std::vector<std::string> violated;
};
FiberPConditions einstein_fiberP_conditions(const SpaceSpec& spec, const QscParams& params,
                                            const GridSpec& grid = {});

/// Einstein-constant shift when f is constant, the complement factor is
/// Einstein, and P is tangent to the 1-d fiber: alpha = alpha_B + [(nbar-1)
/// lambda1 lambda2 - lambda2^2] pi(P); equal to alpha_B when lambda2 =
/// (nbar-1) lambda1.
double fiberP_alpha_shift(double alphaB, double lambda1, double lambda2, int nbar, double piP);

} // namespace qsc::grw
