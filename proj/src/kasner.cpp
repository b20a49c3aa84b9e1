#include "qsc/kasner.hpp"

#include <json.hpp>

#include <cmath>
#include <numeric>

namespace qsc::kasner {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

/// Verifies a verdict's phi against its governing conditions and stores the
/// residual maxima; infeasible when they exceed the tolerance.
void attach_einstein_residuals(KasnerVerdict& v, double tol) {
    if (v.phi.empty()) {
        v.feasible = false;
        return;
    }
    KasnerSpec spec = KasnerSpec::make(v.p, v.l, v.phi, v.lambda1, v.lambda2);
    std::map<std::string, double> consts = {{"c", 1.0}, {"c0", 1.0}, {"c1", 1.0}, {"c2", 1.0}};
    auto res = kasner_einstein_residuals(spec, v.alpha, v.alpha_i, consts);
    v.residuals["cond2"] = res.max2();
    v.residuals["cond3"] = res.max3();
    if (res.max_all() > tol * 10.0) v.feasible = false;
}

} // namespace

std::pair<double, double> kasner_params(const std::vector<double>& p, const std::vector<int>& l) {
    if (p.size() != l.size()) throw SpecError("kasner_params: length mismatch");
    double zeta = 0.0, eta = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        zeta += l[i] * p[i];
        eta += l[i] * p[i] * p[i];
    }
    return {zeta, eta};
}

KasnerSpec KasnerSpec::make(std::vector<double> p, std::vector<int> l, Expr phi, double lambda1,
                            double lambda2) {
    if (lambda1 == 0.0 || lambda2 == 0.0) throw SpecError("lambda1, lambda2 must be nonzero");
    KasnerSpec s;
    auto [z, e] = kasner_params(p, l);
    s.p = std::move(p);
    s.l = std::move(l);
    s.phi = std::move(phi);
    s.lambda1 = lambda1;
    s.lambda2 = lambda2;
    s.zeta = z;
    s.eta = e;
    return s;
}

KasnerSpec::Type KasnerSpec::type() const {
    if (l.size() == 1 && l[0] == 3) return Type::I;
    if (l.size() == 2 && l[0] == 1 && l[1] == 2) return Type::II;
    if (l.size() == 3 && l[0] == 1 && l[1] == 1 && l[2] == 1) return Type::III;
    return Type::Other;
}

int KasnerSpec::nbar() const {
    int n = 1;
    for (int li : l) n += li;
    return n;
}

double ConditionResiduals::max2() const {
    double m = 0.0;
    for (double v : cond2) m = std::max(m, std::abs(v));
    return m;
}
double ConditionResiduals::max3() const {
    double m = 0.0;
    for (const auto& row : cond3)
        for (double v : row) m = std::max(m, std::abs(v));
    return m;
}

ConditionResiduals kasner_einstein_residuals(const KasnerSpec& spec, double alpha,
                                             const std::vector<double>& alpha_i,
                                             const std::map<std::string, double>& constants,
                                             const GridSpec& grid) {
    if (alpha_i.size() != spec.l.size())
        throw SpecError("kasner_einstein_residuals: one alpha_i per fiber");
    auto [z, e] = kasner_params(spec.p, spec.l);
    if (z != spec.zeta || e != spec.eta)
        throw SpecError("kasner spec: stored zeta/eta do not match recomputation");
    const double l1 = spec.lambda1, l2 = spec.lambda2;
    const int nbar = spec.nbar();
    const double norm = std::max({1.0, std::abs(alpha), l1 * l1 + l2 * l2});

    ConditionResiduals out;
    out.cond3.resize(spec.l.size());
    for (int k = 0; k < grid.points; ++k) {
        double t = grid.t(k);
        out.t.push_back(t);
        auto d = spec.phi.eval_d2(t, constants);
        if (!(d.f > 0.0)) throw SpecError("phi non-positive on grid");
        double u = d.df / d.f, u2 = d.ddf / d.f;
        double c2 = spec.zeta * (l2 * u - u2) - (spec.eta - spec.zeta) * u * u +
                    (l1 * l1 - l1 * l2) * (nbar - 1) - alpha;
        out.cond2.push_back(c2 / norm);
        for (size_t i = 0; i < spec.l.size(); ++i) {
            double pi = spec.p[i];
            double c3 = alpha_i[i] / std::pow(d.f, 2.0 * pi) - pi * u2 -
                        (spec.zeta - 1.0) * pi * u * u +
                        (l2 * spec.zeta + ((nbar - 1) * l1 - l2) * pi) * u -
                        (alpha - l2 * l2 + (nbar - 1) * l1 * l2);
            out.cond3[i].push_back(c3 / norm);
        }
    }
    return out;
}

ScalarEval kasner_scalar(const KasnerSpec& spec, const std::vector<double>& SFi,
                         const std::map<std::string, double>& constants, const GridSpec& grid) {
    if (SFi.size() != spec.l.size()) throw SpecError("kasner_scalar: one S^{F_i} per fiber");
    const double l1 = spec.lambda1, l2 = spec.lambda2;
    const int nbar = spec.nbar();
    ScalarEval out;
    for (int k = 0; k < grid.points; ++k) {
        double t = grid.t(k);
        out.t.push_back(t);
        auto d = spec.phi.eval_d2(t, constants);
        double u = d.df / d.f, u2 = d.ddf / d.f;
        double S = -2.0 * spec.zeta * u2 -
                   (spec.eta + spec.zeta * spec.zeta - 2.0 * spec.zeta) * u * u +
                   (l1 + l2) * spec.zeta * (nbar - 1) * u +
                   (nbar - 1) * (l1 * l1 + l2 * l2 - nbar * l1 * l2);
        for (size_t i = 0; i < spec.l.size(); ++i) S += SFi[i] / std::pow(d.f, 2.0 * spec.p[i]);
        out.S.push_back(S);
    }
    out.mean = std::accumulate(out.S.begin(), out.S.end(), 0.0) / out.S.size();
    for (double v : out.S) out.max_dev = std::max(out.max_dev, std::abs(v - out.mean));
    return out;
}

// ---------------------------------------------------------------------------
// Type II Einstein classification
// ---------------------------------------------------------------------------

namespace {

/// p2 witness with p1 = 1 for a required zeta^2/eta ratio; type II dims (1,2).
/// Solves (2 - 4K) p2^2 - 4K p2 + (1 - K) = 0 with K = eta/zeta^2 requested.
std::optional<double> typeII_p2_witness(double K, double tol) {
    double A = 2.0 - 4.0 * K, B = -4.0 * K, C = 1.0 - K;
    if (std::abs(A) <= tol) {
        if (std::abs(B) <= tol) return std::nullopt;
        return -C / B;
    }
    double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) return std::nullopt;
    double r1 = (-B + std::sqrt(disc)) / (2.0 * A);
    double r2 = (-B - std::sqrt(disc)) / (2.0 * A);
    // keep zeta = 1 + 2 p2 away from zero
    if (std::abs(1.0 + 2.0 * r1) > 1e-6) return r1;
    if (std::abs(1.0 + 2.0 * r2) > 1e-6) return r2;
    return std::nullopt;
}

KasnerVerdict base_typeII(double l1, double l2, const char* case_id) {
    KasnerVerdict v;
    v.case_id = case_id;
    v.lambda1 = l1;
    v.lambda2 = l2;
    v.l = {1, 2};
    v.alpha_i = {0.0, 0.0};
    return v;
}

} // namespace

std::vector<KasnerVerdict> classify_typeII_einstein(double l1, double l2, double tol) {
    const Expr t = Expr::var("t");
    const double scale = std::max(1.0, l1 * l1 + l2 * l2);
    std::vector<KasnerVerdict> out;

    const bool l2sq_3l1sq = std::abs(l2 * l2 - 3.0 * l1 * l1) <= tol * scale;
    const bool l2_3l1 = std::abs(l2 - 3.0 * l1) <= tol * std::sqrt(scale);
    const double den = 3.0 * l1 - l2;
    const double quot_num = 6.0 * l1 * l1 - 3.0 * l1 * l2 - l2 * l2;

    if (l2sq_3l1sq) {
        {
            KasnerVerdict v = base_typeII(l1, l2, "T4.19(1)");
            v.p = {0.0, 0.0};
            v.alpha = 3.0 * l1 * l1 - 3.0 * l1 * l2;
            v.phi = Expr::var("c");
            attach_einstein_residuals(v, tol);
            out.push_back(std::move(v));
        }
        {
            KasnerVerdict v = base_typeII(l1, l2, "T4.19(2)");
            v.p = {1.0, -1.0};
            v.alpha = 3.0 * l1 * l1 - 3.0 * l1 * l2;
            v.phi = Expr::var("c");
            attach_einstein_residuals(v, tol);
            out.push_back(std::move(v));
        }
    }
    if (!l2sq_3l1sq && !l2_3l1 && std::abs(quot_num) > tol * scale) { // case (3)
        KasnerVerdict v = base_typeII(l1, l2, "T4.19(3)");
        v.p = {1.0, 0.0};
        v.alpha = (18.0 * std::pow(l1, 4) - 36.0 * std::pow(l1, 3) * l2 +
                   24.0 * l1 * l1 * l2 * l2 - 6.0 * l1 * std::pow(l2, 3)) /
                  (den * den);
        v.alpha_i[1] = (18.0 * std::pow(l1, 4) - 2.0 * std::pow(l2, 4) +
                        6.0 * l1 * std::pow(l2, 3) - 18.0 * std::pow(l1, 3) * l2) /
                       (den * den);
        v.phi = Expr::var("c") * exp(((3.0 * l1 * l1 - l2 * l2) / den) * t);
        v.flags.push_back(std::string("proof branch sign (6l1^2-3l1l2-l2^2)/(3l1-l2) ") +
                          (quot_num / den > 0 ? "> 0" : "< 0"));
        attach_einstein_residuals(v, tol);
        out.push_back(std::move(v));
    }
    if (l2 * l2 < 3.0 * l1 * l1 - tol * scale && !l2_3l1 && std::abs(quot_num) > tol * scale) {
        // case (4): eta/zeta^2 pinned by the lambdas
        KasnerVerdict v = base_typeII(l1, l2, "T4.19(4)");
        double K = (3.0 * l1 * l1 - l2 * l2) / (den * den);
        auto p2 = typeII_p2_witness(K, tol);
        if (p2 && std::abs(*p2 + 0.5) > 1e-9) {
            v.p = {1.0, *p2};
            auto [z, e] = kasner_params(v.p, v.l);
            v.alpha = 0.0;
            v.phi = Expr::var("c") * exp(((3.0 * l1 - l2) / z) * t);
            attach_einstein_residuals(v, tol);
        } else {
            v.feasible = false;
            v.flags.push_back("no p-witness for eta/zeta^2 = (3l1^2-l2^2)/(3l1-l2)^2");
        }
        out.push_back(std::move(v));
    }
    if (!l2_3l1 && quot_num / den < -tol * scale &&
        std::abs(18.0 * std::pow(l1, 4) - std::pow(l2, 4) + 6.0 * l1 * std::pow(l2, 3) -
                 15.0 * l1 * l1 * l2 * l2) > tol * scale * scale) {
        // case (5), implemented verbatim from the theorem text
        KasnerVerdict v = base_typeII(l1, l2, "T4.19(5)");
        v.p = {1.0, 0.0};
        v.alpha = (18.0 * std::pow(l1, 4) - 36.0 * std::pow(l1, 3) * l2 +
                   24.0 * l1 * l1 * l2 * l2 - 6.0 * l1 * std::pow(l2, 3)) /
                  (den * den);
        v.alpha_i[1] = (18.0 * std::pow(l1, 4) - std::pow(l2, 4) + 6.0 * l1 * std::pow(l2, 3) -
                        15.0 * l1 * l1 * l2 * l2) /
                       (den * den);
        v.phi = Expr::var("c") * exp(((3.0 * l1 * l2 - 3.0 * l1 * l1) / den) * t);
        attach_einstein_residuals(v, tol);
        if (!v.feasible)
            v.flags.push_back("stated data fails the governing conditions; the proof branch "
                              "substituted the complementary characteristic root (see notes)");
        out.push_back(std::move(v));
    }
    if (std::abs(l1 - l2) <= tol * scale) { // case (6)
        KasnerVerdict v = base_typeII(l1, l2, "T4.19(6)");
        v.p = {0.0, 1.0};
        v.alpha = 0.0;
        v.phi = Expr::var("c0") * exp(l1 * t);
        v.flags.push_back("proof branches carried lambda sign conditions; theorem merges them");
        attach_einstein_residuals(v, tol);
        out.push_back(std::move(v));
    }
    for (int sign : {+1, -1}) { // case (7)
        double target = (5.0 + sign * std::sqrt(3.0)) / 6.0 * l2 * l2;
        if (std::abs(l1 * l1 - target) > tol * scale) continue;
        KasnerVerdict v = base_typeII(l1, l2, sign > 0 ? "T4.19(7+)" : "T4.19(7-)");
        double p2 = 1.0, p1 = (1.0 + sign * std::sqrt(3.0)) * p2;
        v.p = {p1, p2};
        v.alpha = 3.0 * l1 * l1 - 3.0 * l1 * l2;
        v.alpha_i[1] = (p2 - p1) * (l2 * l2 - 3.0 * l1 * l2) / p1;
        v.phi = Expr::var("c") * exp((l2 / (2.0 * p1)) * t);
        attach_einstein_residuals(v, tol);
        out.push_back(std::move(v));
    }
    if (std::abs(quot_num) <= tol * scale) { // cases (8) and (9)
        {
            KasnerVerdict v = base_typeII(l1, l2, "T4.19(8)");
            // proof pins zeta^2/eta = 4(3 l1^2 - l2^2)/l2^2; the theorem drops it
            double Kz = 4.0 * (3.0 * l1 * l1 - l2 * l2) / (l2 * l2); // zeta^2/eta
            if (Kz > tol) {
                auto p2 = typeII_p2_witness(1.0 / Kz, tol);
                if (p2) {
                    v.p = {1.0, *p2};
                    auto [z, e] = kasner_params(v.p, v.l);
                    v.alpha = 0.0;
                    v.phi = Expr::var("c") * exp((l2 / 2.0) * (z / e) * t);
                    v.flags.push_back("zeta^2/eta = 4(3l1^2-l2^2)/l2^2 restored from the proof");
                    attach_einstein_residuals(v, tol);
                } else {
                    v.feasible = false;
                    v.flags.push_back("no p-witness for the proof's zeta^2/eta constraint");
                }
            } else {
                v.feasible = false;
                v.flags.push_back("proof constraint needs 3 l1^2 > l2^2");
            }
            out.push_back(std::move(v));
        }
        {
            KasnerVerdict v = base_typeII(l1, l2, "T4.19(9)");
            v.p = {1.0, 0.0};
            v.alpha = l2 * l2 / 4.0 + 3.0 * l1 * l1 - 3.0 * l1 * l2;
            v.alpha_i[1] = 3.0 * l1 * l1 - 1.25 * l2 * l2;
            v.phi = Expr::var("c") * exp((l2 / 2.0) * t); // zeta/eta = 1 for p = (1,0)
            attach_einstein_residuals(v, tol);
            out.push_back(std::move(v));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Type III Einstein classification
// ---------------------------------------------------------------------------

std::vector<KasnerVerdict> classify_typeIII_einstein(double l1, double l2, double zeta_request,
                                                     double tol) {
    const Expr t = Expr::var("t");
    const double scale = std::max(1.0, l1 * l1 + l2 * l2);
    std::vector<KasnerVerdict> out;

    if (std::abs(l2 * l2 - 3.0 * l1 * l1) <= tol * scale) {
        KasnerVerdict v;
        v.case_id = "T4.20(2)";
        v.lambda1 = l1;
        v.lambda2 = l2;
        v.l = {1, 1, 1};
        v.p = {1.0, 0.0, -1.0}; // zeta = 0, eta != 0, exponents distinct
        v.alpha = 3.0 * l1 * l1 - 3.0 * l1 * l2;
        v.alpha_i = {0.0, 0.0, 0.0};
        v.phi = Expr::var("c");
        v.flags.push_back("case (1) (zeta = eta = 0) has no distinct-exponent witness");
        attach_einstein_residuals(v, tol);
        out.push_back(std::move(v));
    }
    if (std::abs(l2 - 3.0 * l1) > tol * std::sqrt(scale)) {
        double den = 3.0 * l1 - l2;
        double K = (3.0 * l1 * l1 - l2 * l2) / (den * den); // required eta/zeta^2
        KasnerVerdict v;
        v.case_id = "T4.20(3)";
        v.lambda1 = l1;
        v.lambda2 = l2;
        v.l = {1, 1, 1};
        v.alpha = 0.0;
        v.alpha_i = {0.0, 0.0, 0.0};
        double zeta = zeta_request;
        double eta = K * zeta * zeta;
        bool found = false;
        // distinct-exponent witness: fix p1 near zeta/3 and solve for (p2, p3)
        for (double off : {0.0, 0.5, -0.5, 1.0, -1.0, 1.5, -1.5, 2.0, -2.0, 0.25, -0.25}) {
            double p1 = zeta / 3.0 + off;
            double s = zeta - p1;
            double q = (s * s - (eta - p1 * p1)) / 2.0;
            double disc = s * s - 4.0 * q;
            if (disc <= 1e-8) continue;
            double p2 = 0.5 * (s + std::sqrt(disc)), p3 = 0.5 * (s - std::sqrt(disc));
            if (std::abs(p2 - p1) < 1e-6 || std::abs(p3 - p1) < 1e-6) continue;
            v.p = {p1, p2, p3};
            found = true;
            break;
        }
        if (K <= 1.0 / 3.0 + 1e-12 || !found) {
            v.feasible = false;
            v.p = {0.0, 0.0, 0.0};
            v.flags.push_back("no distinct-exponent witness for requested zeta (eta/zeta^2 = " +
                              fmt(K) + " needs > 1/3)");
        } else {
            v.phi = Expr::var("c") * exp(((3.0 * l1 - l2) / zeta) * t);
            attach_einstein_residuals(v, tol);
        }
        out.push_back(std::move(v));
    }
    // drop infeasible placeholders when nothing applies at all
    std::vector<KasnerVerdict> kept;
    for (auto& v : out)
        if (v.feasible || v.case_id == "T4.20(3)") kept.push_back(std::move(v));
    return kept;
}

// ---------------------------------------------------------------------------
// Type I delegation
// ---------------------------------------------------------------------------

std::vector<KasnerVerdict> classify_typeI_einstein(double l1, double l2, double tol) {
    std::vector<KasnerVerdict> out;
    for (const auto& fam : grw::classify_einstein_dimFl(l1, l2, 3, tol)) {
        KasnerVerdict v;
        v.case_id = fam.case_id;
        v.lambda1 = l1;
        v.lambda2 = l2;
        v.l = {3};
        v.p = {1.0};
        v.alpha = fam.alpha;
        v.alpha_i = {fam.alphaF_coeff_c2sq != 0.0 ? fam.alphaF_coeff_c2sq : fam.alphaF};
        v.phi = fam.f;
        v.flags = fam.flags;
        if (fam.alphaF_coeff_c2sq != 0.0)
            v.flags.push_back("alpha_F = coeff * c2^2 evaluated at c2 = 1");
        attach_einstein_residuals(v, tol);
        out.push_back(std::move(v));
    }
    return out;
}

KasnerVerdict solve_typeI_scalar(double l1, double l2, double Sbar, double SF, double tol) {
    grw::SolutionFamily fam = grw::solve_scalar_l3(l1, l2, Sbar, SF, tol);
    KasnerVerdict v;
    v.case_id = fam.case_id;
    v.lambda1 = l1;
    v.lambda2 = l2;
    v.l = {3};
    v.p = {1.0};
    v.Sbar = Sbar;
    v.SF2 = SF;
    v.phi = pow(fam.f, 0.5); // phi = f = sqrt(v)
    v.flags = fam.flags;
    return v;
}

// ---------------------------------------------------------------------------
// Type II scalar curvature
// ---------------------------------------------------------------------------

KasnerVerdict solve_typeII_scalar(double l1, double l2, double Sbar, double SF2, double p1,
                                  double p2, double tol) {
    const Expr t = Expr::var("t");
    auto [zeta, eta] = kasner_params({p1, p2}, {1, 2});
    const double B2 = 3.0 * (l1 * l1 + l2 * l2 - 4.0 * l1 * l2);
    const double scale = std::max(1.0, std::abs(Sbar) + l1 * l1 + l2 * l2);

    KasnerVerdict v;
    v.lambda1 = l1;
    v.lambda2 = l2;
    v.l = {1, 2};
    v.p = {p1, p2};
    v.zeta = zeta;
    v.eta = eta;
    v.Sbar = Sbar;
    v.SF2 = SF2;

    if (std::abs(zeta) <= tol) {
        if (std::abs(eta) <= tol) {
            v.case_id = "eq63-zero";
            v.phi = Expr::var("c");
            v.feasible = std::abs(Sbar - (SF2 + B2)) <= tol * scale;
            if (!v.feasible) v.flags.push_back("p = 0 forces Sbar = S^{F_2} + 3(l1^2+l2^2-4 l1 l2)");
            return v;
        }
        v.case_id = "eq64";
        // eta (phi'/phi)^2 = S^{F_2}/phi^{2 p2} - (Sbar - B2)
        if (std::abs(SF2) <= tol || std::abs(p2) <= tol) {
            double rhs = (SF2 * (std::abs(p2) <= tol ? 1.0 : 0.0)) - (Sbar - B2);
            if (std::abs(SF2) <= tol) rhs = -(Sbar - B2);
            if (rhs < -tol * scale) {
                v.feasible = false;
                v.flags.push_back("eq64 has no real solution (negative squared slope)");
            } else if (rhs <= tol * scale) {
                v.phi = Expr::var("c");
            } else {
                v.phi = Expr::var("c0") * exp(std::sqrt(rhs / eta) * t);
                v.flags.push_back("exponent sign is free (+/-)");
            }
        } else {
            v.flags.push_back("no closed form (nonlinear eq64); residual functional only");
        }
        return v;
    }

    v.case_id = "eq65";
    double w = eta + zeta * zeta;
    bool linear = std::abs(SF2) <= tol || std::abs(p2) <= tol;
    if (!linear) {
        v.flags.push_back("no closed form (nonlinear eq65 power term); residual checker only");
        return v;
    }
    // -4 zeta^2/w psi'' + 6(l1+l2) zeta^2/w psi' + (3l1^2+3l2^2-12l1l2 - Sbar) psi
    //   + S^{F_2} psi^{1 - 4 p2 zeta / w} = 0; with S^{F_2} = 0 or p2 = 0 the
    //   last term is linear in psi.
    double extra = (std::abs(p2) <= tol) ? SF2 : 0.0;
    Linear2 ode{-1.5 * (l1 + l2), (Sbar - B2 - extra) * w / (4.0 * zeta * zeta), 0.0};
    Expr psi = ode.solution(tol);
    v.phi = pow(psi, 2.0 * zeta / w);
    v.residuals["eq65"] =
        typeII_psi_residual(l1, l2, Sbar, SF2, p1, p2, psi,
                            {{"c1", 1.0}, {"c2", (ode.kind(tol) == Linear2::Kind::ComplexPair)
                                                     ? 0.25
                                                     : 1.0}});
    v.feasible = v.residuals["eq65"] < tol * 10.0;
    return v;
}

double typeII_psi_residual(double l1, double l2, double Sbar, double SF2, double p1, double p2,
                           const Expr& psi, const std::map<std::string, double>& constants,
                           const GridSpec& grid) {
    auto [zeta, eta] = kasner_params({p1, p2}, {1, 2});
    if (std::abs(zeta) < 1e-12) throw SpecError("typeII_psi_residual: zeta must be nonzero");
    double w = eta + zeta * zeta;
    double B2 = 3.0 * (l1 * l1 + l2 * l2 - 4.0 * l1 * l2);
    auto res = [&](double, double f, double df, double ddf) {
        if (f <= 1e-12) throw std::domain_error("psi must stay positive");
        return -4.0 * zeta * zeta / w * ddf + 6.0 * (l1 + l2) * zeta * zeta / w * df +
               (B2 - Sbar) * f + SF2 * std::pow(f, 1.0 - 4.0 * p2 * zeta / w);
    };
    return grid_residual(psi, res, grid, constants).max_residual;
}

// ---------------------------------------------------------------------------
// Type III scalar curvature
// ---------------------------------------------------------------------------

std::vector<KasnerVerdict> solve_typeIII_scalar(double l1, double l2, double Sbar,
                                                std::vector<double> p, double tol) {
    const Expr t = Expr::var("t");
    const double B2 = 3.0 * (l1 * l1 + l2 * l2 - 4.0 * l1 * l2);
    const double scale = std::max(1.0, std::abs(Sbar) + l1 * l1 + l2 * l2);
    std::vector<KasnerVerdict> out;

    { // case (1): zeta = eta = 0
        KasnerVerdict v;
        v.case_id = "T4.21(1)";
        v.lambda1 = l1;
        v.lambda2 = l2;
        v.l = {1, 1, 1};
        v.p = {0.0, 0.0, 0.0};
        v.Sbar = Sbar;
        v.phi = Expr::var("c");
        v.feasible = std::abs(Sbar - B2) <= tol * scale;
        if (!v.feasible) v.flags.push_back("zeta = eta = 0 forces Sbar = 3(l1^2+l2^2-4 l1 l2)");
        out.push_back(std::move(v));
    }
    { // case (2): zeta = 0, eta != 0
        KasnerVerdict v;
        v.case_id = "T4.21(2)";
        v.lambda1 = l1;
        v.lambda2 = l2;
        v.l = {1, 1, 1};
        v.p = {1.0, 0.0, -1.0};
        v.eta = 2.0;
        v.Sbar = Sbar;
        if (Sbar > B2 + tol * scale) {
            v.feasible = false;
            v.flags.push_back("no solution for Sbar > 3(l1^2+l2^2-4 l1 l2)");
        } else if (Sbar >= B2 - tol * scale) {
            v.phi = Expr::var("c");
        } else {
            v.phi = Expr::var("c0") * exp(std::sqrt((B2 - Sbar) / 2.0) * t);
            v.flags.push_back("exponent sign is free (+/-)");
        }
        out.push_back(std::move(v));
    }
    { // case (3): zeta != 0
        auto [zeta, eta] = kasner_params(p, {1, 1, 1});
        if (std::abs(zeta) <= tol) throw SpecError("typeIII scalar case (3): requested p has zeta = 0");
        KasnerVerdict v;
        v.lambda1 = l1;
        v.lambda2 = l2;
        v.l = {1, 1, 1};
        v.p = p;
        v.zeta = zeta;
        v.eta = eta;
        v.Sbar = Sbar;
        double w = eta + zeta * zeta;
        Linear2 ode{-1.5 * (l1 + l2), (Sbar - B2) * w / (4.0 * zeta * zeta), 0.0};
        Expr psi = ode.solution(tol);
        v.phi = pow(psi, 2.0 * zeta / w);
        switch (ode.kind(tol)) {
        case Linear2::Kind::RealDistinct: v.case_id = "T4.21(3a)"; break;
        case Linear2::Kind::RealDouble: v.case_id = "T4.21(3b)"; break;
        case Linear2::Kind::ComplexPair: v.case_id = "T4.21(3c)"; break;
        }
        out.push_back(std::move(v));
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

using nlohmann::json;

std::string verdict_to_json(const KasnerVerdict& v) {
    json j;
    switch (KasnerSpec::make(v.p.empty() ? std::vector<double>(v.l.size(), 0.0) : v.p, v.l,
                             Expr::num(1.0), v.lambda1, v.lambda2)
                .type()) {
    case KasnerSpec::Type::I: j["type"] = "I"; break;
    case KasnerSpec::Type::II: j["type"] = "II"; break;
    case KasnerSpec::Type::III: j["type"] = "III"; break;
    default: j["type"] = "other"; break;
    }
    j["case"] = v.case_id;
    j["lambda1"] = v.lambda1;
    j["lambda2"] = v.lambda2;
    j["p"] = v.p;
    auto [z, e] = kasner_params(v.p, v.l);
    j["zeta"] = z;
    j["eta"] = e;
    j["alpha"] = v.alpha;
    j["alpha_i"] = v.alpha_i;
    j["Sbar"] = v.Sbar;
    j["phi"] = v.phi.empty() ? "" : v.phi.str();
    j["residuals"] = v.residuals;
    j["feasible"] = v.feasible;
    j["flags"] = v.flags;
    return j.dump(2);
}

} // namespace qsc::kasner
