#include "qsc/grw.hpp"

#include <cmath>
#include <numeric>

namespace qsc::grw {

namespace {

struct BGrid {
    // b_i, b_i', b_i'' tabulated on the grid
    std::vector<std::vector<Expr::D2>> d; // [fiber][k]
    std::vector<double> maxsq;            // max b_i^2
};

BGrid tabulate(const std::vector<Expr>& b, const std::map<std::string, double>& constants,
               const GridSpec& grid) {
    BGrid out;
    out.d.resize(b.size());
    out.maxsq.assign(b.size(), 1.0);
    for (size_t i = 0; i < b.size(); ++i) {
        out.d[i].resize(static_cast<size_t>(grid.points));
        for (int k = 0; k < grid.points; ++k) {
            auto v = b[i].eval_d2(grid.t(k), constants);
            if (!(v.f > 0.0))
                throw SpecError("warping " + std::to_string(i) + " non-positive on grid");
            out.d[i][static_cast<size_t>(k)] = v;
            out.maxsq[i] = std::max(out.maxsq[i], v.f * v.f);
        }
    }
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

GrwProblem GrwProblem::make(std::vector<FiberData> fibers, double l1, double l2, PLoc loc,
                            int p_fiber) {
    if (l1 == 0.0 || l2 == 0.0) throw SpecError("lambda1, lambda2 must be nonzero");
    for (auto& f : fibers) {
        if (f.l < 1) throw SpecError("fiber dimension must be >= 1");
        if (f.l == 1 && f.alpha != 0.0)
            throw SpecError("alpha_F = 0 is forced when dim F = 1");
    }
    GrwProblem p;
    p.fibers = std::move(fibers);
    p.lambda1 = l1;
    p.lambda2 = l2;
    p.p_location = loc;
    p.p_fiber = p_fiber;
    return p;
}

int GrwProblem::nbar() const {
    int n = 1;
    for (const auto& f : fibers) n += f.l;
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

ConditionResiduals einstein_conditions(const GrwProblem& prob, const std::vector<Expr>& b,
                                       double alpha,
                                       const std::map<std::string, double>& constants,
                                       const GridSpec& grid) {
    if (b.size() != prob.fibers.size())
        throw SpecError("einstein_conditions: one warping per fiber");
    const double l1 = prob.lambda1, l2 = prob.lambda2;
    const int nbar = prob.nbar();
    BGrid B = tabulate(b, constants, grid);

    ConditionResiduals out;
    out.cond3.resize(b.size());
    for (int k = 0; k < grid.points; ++k) {
        out.t.push_back(grid.t(k));
        double c2 = -alpha;
        for (size_t i = 0; i < b.size(); ++i) {
            const auto& d = B.d[i][static_cast<size_t>(k)];
            c2 += prob.fibers[i].l * (l2 * d.df / d.f - d.ddf / d.f + l1 * l1 - l1 * l2);
        }
        out.cond2.push_back(c2);

        for (size_t i = 0; i < b.size(); ++i) {
            const auto& d = B.d[i][static_cast<size_t>(k)];
            double cross = 0.0;
            for (size_t s = 0; s < b.size(); ++s) {
                if (s == i) continue;
                const auto& ds = B.d[s][static_cast<size_t>(k)];
                cross += prob.fibers[s].l * ds.df / ds.f;
            }
            int li = prob.fibers[i].l;
            double c3 = prob.fibers[i].alpha - d.f * d.ddf + (1 - li) * d.df * d.df +
                        (l2 * d.f * d.f - d.f * d.df) * cross +
                        (l2 * l2 + (1 - nbar) * l1 * l2) * d.f * d.f +
                        ((nbar - 1) * l1 + (li - 1) * l2) * d.f * d.df - alpha * d.f * d.f;
            out.cond3[i].push_back(c3 / B.maxsq[i]);
        }
    }
    return out;
}

SolutionFamily solve_einstein_dimF1(double lambda1, double lambda2, double alpha, double tol) {
    SolutionFamily fam;
    fam.unknown = "f";
    fam.alpha = alpha;
    // f'' = lambda2 f' + (lambda1^2 - lambda1 lambda2 - alpha) f
    Linear2 ode{-lambda2, alpha - lambda1 * lambda1 + lambda1 * lambda2, 0.0};
    fam.f = ode.solution(tol);
    double bound = (lambda1 - 0.5 * lambda2) * (lambda1 - 0.5 * lambda2);
    switch (ode.kind(tol)) {
    case Linear2::Kind::RealDistinct:
        fam.case_id = "T3.14(1)";
        fam.validity = "alpha < (lambda1 - lambda2/2)^2 = " + fmt(bound);
        break;
    case Linear2::Kind::RealDouble:
        fam.case_id = "T3.14(2)";
        fam.validity = "alpha = (lambda1 - lambda2/2)^2 = " + fmt(bound);
        break;
    case Linear2::Kind::ComplexPair:
        fam.case_id = "T3.14(3)";
        fam.validity = "alpha > (lambda1 - lambda2/2)^2 = " + fmt(bound);
        break;
    }
    if (std::abs(lambda2 - 2.0 * lambda1) <= tol * std::max(1.0, std::abs(lambda1)))
        fam.flags.push_back("C3.15: lambda2 = 2 lambda1 specialization");
    return fam;
}

std::vector<SolutionFamily> classify_einstein_dimFl(double lambda1, double lambda2, int l,
                                                    double tol) {
    if (l <= 1) throw SpecError("classify_einstein_dimFl needs l > 1");
    const double l1 = lambda1, l2 = lambda2;
    const double scale = std::max(1.0, l1 * l1 + l2 * l2);
    const Expr t = Expr::var("t");
    std::vector<SolutionFamily> out;

    { // case (1): constant warping, any lambdas
        SolutionFamily fam;
        fam.case_id = "T3.16(1)";
        fam.f = Expr::var("c2");
        fam.alpha = (l1 * l1 - l1 * l2) * l;
        fam.alphaF_coeff_c2sq = l * l1 * l1 - l2 * l2;
        fam.validity = "always; alpha_F = (l lambda1^2 - lambda2^2) c2^2";
        out.push_back(fam);
    }
    if (std::abs(l1 - l2) <= tol * scale) { // case (2)
        SolutionFamily fam;
        fam.case_id = "T3.16(2)";
        fam.f = Expr::var("c1") * exp(l1 * t) + Expr::var("c2");
        fam.alpha = 0.0;
        fam.alphaF_coeff_c2sq = (l - 1) * l1 * l1;
        fam.validity = "lambda1 = lambda2";
        out.push_back(fam);
    }
    double caseq = l2 * l2 - 2.0 * l * l1 * l1 + l * l1 * l2;
    bool denom_ok = std::abs(l2 - l * l1) > tol * scale;
    if (std::abs(caseq) > tol * scale && denom_ok) { // case (3)
        SolutionFamily fam;
        fam.case_id = "T3.16(3)";
        double den = l * l1 - l2;
        double kexp = (l * l1 * l1 - l2 * l2) / den;
        fam.f = Expr::var("c0") * exp(kexp * t);
        // proof's d0; the theorem display has a typo (lambda1 lambda1^3)
        fam.alpha = ((3.0 * l * l + l) * l1 * l1 * l2 * l2 - (l * l + l) * l1 * l2 * l2 * l2 -
                     2.0 * l * l * l1 * l1 * l1 * l2) /
                    (den * den);
        fam.alphaF = 0.0;
        fam.validity = "lambda2^2 - 2 l lambda1^2 + l lambda1 lambda2 != 0 and lambda2 != l lambda1";
        fam.flags.push_back("alpha uses the proof's d0 (theorem text misprints lambda1 lambda2^3)");
        double branch = (l2 * l2 + l * l1 * l2 - 2.0 * l * l1 * l1) / den;
        fam.flags.push_back(std::string("proof branch sign (l2^2 + l l1 l2 - 2 l l1^2)/(l l1 - l2) ") +
                            (branch > 0 ? "> 0" : "< 0"));
        out.push_back(fam);
    }
    if (std::abs(caseq) <= tol * scale) { // case (4)
        SolutionFamily fam;
        fam.case_id = "T3.16(4)";
        fam.f = Expr::var("c1") * exp(0.5 * l2 * t);
        double h = l1 - 0.5 * l2;
        fam.alpha = l * h * h;
        fam.alphaF = 0.0;
        fam.validity = "lambda2^2 - 2 l lambda1^2 + l lambda1 lambda2 = 0";
        out.push_back(fam);
    }
    return out;
}

Cor313Residuals einstein_dimFl_residuals(double lambda1, double lambda2, int l, double alpha,
                                         double alphaF, const Expr& f,
                                         const std::map<std::string, double>& constants,
                                         const GridSpec& grid) {
    const double l1 = lambda1, l2 = lambda2;
    Cor313Residuals out;
    double maxsq = 1.0;
    for (int k = 0; k < grid.points; ++k) {
        auto d = f.eval_d2(grid.t(k), constants);
        maxsq = std::max(maxsq, d.f * d.f);
        double c2 = d.ddf - l2 * d.df - (l1 * l1 - l1 * l2 - alpha / l) * d.f;
        double c3 = alphaF / (1.0 - l) + d.df * d.df +
                    (alpha / l + l1 * l2 + (l2 * l2 - l1 * l1) / (1.0 - l)) * d.f * d.f +
                    (l / (1.0 - l) * l1 + (l - 2.0) / (1.0 - l) * l2) * d.f * d.df;
        out.cond2 = std::max(out.cond2, std::abs(c2));
        out.cond3 = std::max(out.cond3, std::abs(c3));
    }
    out.cond2 /= maxsq;
    out.cond3 /= maxsq;
    return out;
}

ScalarEval scalar_grw(const GrwProblem& prob, const std::vector<Expr>& b,
                      const std::map<std::string, double>& constants, const GridSpec& grid) {
    const double l1 = prob.lambda1, l2 = prob.lambda2;
    const int nbar = prob.nbar();
    BGrid B = tabulate(b, constants, grid);
    ScalarEval out;
    for (int k = 0; k < grid.points; ++k) {
        out.t.push_back(grid.t(k));
        double S = 0.0;
        for (size_t i = 0; i < b.size(); ++i) {
            const auto& d = B.d[i][static_cast<size_t>(k)];
            int li = prob.fibers[i].l;
            S += -2.0 * li * d.ddf / d.f + prob.fibers[i].SF / (d.f * d.f) -
                 li * (li - 1) * (d.df / d.f) * (d.df / d.f);
            double cross = 0.0, crossd = 0.0;
            for (size_t s = 0; s < b.size(); ++s) {
                if (s == i) continue;
                const auto& ds = B.d[s][static_cast<size_t>(k)];
                cross += prob.fibers[s].l * (d.df / d.f) * (ds.df / ds.f);
                crossd += prob.fibers[s].l * ds.df / ds.f;
            }
            S += -li * cross;
            S += li * ((nbar - 1) * l1 + li * l2) * d.df / d.f + l2 * li * crossd;
            S += -li * (nbar * l1 * l2 - (l1 * l1 + l2 * l2));
        }
        out.S.push_back(S);
    }
    out.mean = std::accumulate(out.S.begin(), out.S.end(), 0.0) / out.S.size();
    for (double v : out.S) out.max_dev = std::max(out.max_dev, std::abs(v - out.mean));
    return out;
}

ScalarEval scalar_grw_fiberP(const GrwProblem& prob, const std::vector<Expr>& b, double gFPP,
                             double divFP, const std::map<std::string, double>& constants,
                             const GridSpec& grid) {
    const double l1 = prob.lambda1, l2 = prob.lambda2;
    const int nbar = prob.nbar();
    const int r = prob.p_fiber;
    BGrid B = tabulate(b, constants, grid);
    ScalarEval out;
    for (int k = 0; k < grid.points; ++k) {
        out.t.push_back(grid.t(k));
        double S = 0.0;
        for (size_t i = 0; i < b.size(); ++i) {
            const auto& d = B.d[i][static_cast<size_t>(k)];
            int li = prob.fibers[i].l;
            S += -2.0 * li * d.ddf / d.f + prob.fibers[i].SF / (d.f * d.f) -
                 li * (li - 1) * (d.df / d.f) * (d.df / d.f);
            double cross = 0.0;
            for (size_t s = 0; s < b.size(); ++s) {
                if (s == i) continue;
                const auto& ds = B.d[s][static_cast<size_t>(k)];
                cross += prob.fibers[s].l * (d.df / d.f) * (ds.df / ds.f);
            }
            S += -li * cross;
        }
        const auto& dr = B.d[static_cast<size_t>(r)][static_cast<size_t>(k)];
        S += (nbar * (nbar - 1) * l1 * l2 + (1 - nbar) * (l1 * l1 + l2 * l2)) * dr.f * dr.f * gFPP;
        S += (nbar - 1) * (l1 + l2) * divFP;
        out.S.push_back(S);
    }
    out.mean = std::accumulate(out.S.begin(), out.S.end(), 0.0) / out.S.size();
    for (double v : out.S) out.max_dev = std::max(out.max_dev, std::abs(v - out.mean));

    // variables-separation case analysis for S^F constancy
    double sum = l1 + l2, mix = l1 * l1 + l2 * l2 - nbar * l1 * l2;
    double sc = std::max(1.0, l1 * l1 + l2 * l2);
    bool sum0 = std::abs(sum) <= 1e-12 * sc, mix0 = std::abs(mix) <= 1e-12 * sc;
    if (sum0 && mix0) out.separation_case = "rejected";       // forces lambda = 0
    else if (!sum0 && mix0) out.separation_case = "1";        // div const suffices
    else if (sum0) out.separation_case = "2";                 // g_F(P,P) const suffices
    else out.separation_case = "3";                           // both constants needed
    return out;
}

SolutionFamily solve_scalar_l3(double lambda1, double lambda2, double Sbar, double SF,
                               double tol) {
    const double l1 = lambda1, l2 = lambda2;
    SolutionFamily fam;
    fam.unknown = "v";
    fam.Sbar = Sbar;
    fam.SF = SF;
    Linear2 ode{-1.5 * (l1 + l2), 4.0 * l1 * l2 - l1 * l1 - l2 * l2 + Sbar / 3.0, SF / 3.0};
    fam.f = ode.solution(tol);
    const double scale = std::max(1.0, l1 * l1 + l2 * l2 + std::abs(Sbar));
    double B2 = 3.0 * (l1 * l1 + l2 * l2 - 4.0 * l1 * l2);
    double B1 = 27.0 / 16.0 * (l1 + l2) * (l1 + l2) + B2;
    if (std::abs(Sbar - B2) <= tol * scale) {
        bool sum0 = std::abs(l1 + l2) <= tol * scale;
        fam.case_id = sum0 ? "T3.19(5)" : "T3.19(4)";
        fam.validity = std::string("Sbar = 3(l1^2 + l2^2 - 4 l1 l2)") +
                       (sum0 ? ", lambda1 + lambda2 = 0" : ", lambda1 + lambda2 != 0");
        if (!sum0)
            fam.flags.push_back("particular solution is -(2 S^F/(9(l1+l2))) t; "
                                "the theorem text drops the factor t");
    } else if (std::abs(Sbar - B1) <= tol * scale) {
        fam.case_id = "T3.19(2)";
        fam.validity = "Sbar at the double-root boundary " + fmt(B1);
    } else if (Sbar < B1) {
        fam.case_id = "T3.19(1)";
        fam.validity = "Sbar < " + fmt(B1) + " and Sbar != " + fmt(B2);
    } else {
        fam.case_id = "T3.19(3)";
        fam.validity = "Sbar > " + fmt(B1);
    }
    return fam;
}

SolutionFamily solve_scalar_flatfiber(double lambda1, double lambda2, int l, double Sbar,
                                      double tol) {
    if (l == 3) return solve_scalar_l3(lambda1, lambda2, Sbar, 0.0, tol);
    const double l1 = lambda1, l2 = lambda2;
    SolutionFamily fam;
    fam.unknown = "v";
    fam.Sbar = Sbar;
    fam.SF = 0.0;
    Linear2 ode{-(l / 2.0) * (l1 + l2),
                ((l + 1) / 4.0) * ((l + 1) * l1 * l2 - l1 * l1 - l2 * l2 + Sbar / l), 0.0};
    Expr w = ode.solution(tol);
    fam.f = pow(w, 4.0 / (l + 1));
    double Bw = std::pow(static_cast<double>(l), 3) * (l1 + l2) * (l1 + l2) / (4.0 * (l + 1)) -
                l * ((l + 1) * l1 * l2 - l1 * l1 - l2 * l2);
    switch (ode.kind(tol)) {
    case Linear2::Kind::RealDistinct:
        fam.case_id = "T3.20(1)";
        fam.validity = "Sbar < " + fmt(Bw);
        break;
    case Linear2::Kind::RealDouble:
        fam.case_id = "T3.20(2)";
        fam.validity = "Sbar = " + fmt(Bw);
        break;
    case Linear2::Kind::ComplexPair:
        fam.case_id = "T3.20(3)";
        fam.validity = "Sbar > " + fmt(Bw);
        break;
    }
    return fam;
}

double scalar_ode_residual(int l, double lambda1, double lambda2, double Sbar, double SF,
                           const Expr& v, const std::map<std::string, double>& constants,
                           const GridSpec& grid) {
    const double l1 = lambda1, l2 = lambda2;
    auto res = [&](double, double f, double df, double ddf) {
        if (l != 3 && f <= 1e-12)
            throw std::domain_error("scalar_ode_residual: v must stay positive on the grid");
        double nl = (l != 3) ? (l - 3) / 4.0 * df * df / f : 0.0;
        return ddf + nl - (l / 2.0) * (l1 + l2) * df +
               ((l + 1) * l1 * l2 - l1 * l1 - l2 * l2 + Sbar / l) * f - SF / l;
    };
    return grid_residual(v, res, grid, constants).max_residual;
}

double scalar_ode_residual_w(int l, double lambda1, double lambda2, double Sbar, double SF,
                             const Expr& w, const std::map<std::string, double>& constants,
                             const GridSpec& grid) {
    if (l == 3) throw SpecError("w-equation applies to l != 3 (use the v-equation for l = 3)");
    const double l1 = lambda1, l2 = lambda2;
    auto res = [&](double, double f, double df, double ddf) {
        if (f <= 1e-12)
            throw std::domain_error("scalar_ode_residual_w: w must stay positive on the grid");
        return ddf - (l / 2.0) * (l1 + l2) * df +
               ((l + 1) / 4.0) * ((l + 1) * l1 * l2 - l1 * l1 - l2 * l2 + Sbar / l) * f -
               ((l + 1) / (4.0 * l)) * SF * std::pow(f, 1.0 - 4.0 / (l + 1));
    };
    return grid_residual(w, res, grid, constants).max_residual;
}

FiberPConditions einstein_fiberP_conditions(const SpaceSpec& spec, const QscParams& params,
                                            const GridSpec& grid) {
    if (params.p.where != PField::Where::Fiber)
        throw SpecError("einstein_fiberP_conditions: P must live on a fiber");
    const int r = params.p.fiber_index;
    if (spec.fibers[static_cast<size_t>(r)].kind != FiberKind::Circle)
        throw SpecError("einstein_fiberP_conditions: canonical instance needs a circle fiber");
    for (int i = 0; i < spec.fiber_count(); ++i)
        for (const auto& v : spec.warpings[static_cast<size_t>(i)].variables())
            if (v != spec.base.coords[0])
                throw SpecError("einstein_fiberP_conditions: warpings must depend on t only");

    const double l1 = params.lambda1, l2 = params.lambda2;
    const int nbar = spec.total_dim();
    const int m = spec.fiber_count();
    FiberPConditions out;
    out.cond4_max.assign(static_cast<size_t>(m), 0.0);

    // b_r constancy and mu0 over the grid
    std::vector<std::vector<Expr::D2>> bd(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < grid.points; ++k)
            bd[static_cast<size_t>(i)].push_back(
                spec.warpings[static_cast<size_t>(i)].eval_d2(grid.t(k), {},
                                                               spec.base.coords[0]));
    double brdev = 0.0;
    for (int k = 0; k < grid.points; ++k)
        brdev = std::max(brdev, std::abs(bd[static_cast<size_t>(r)][static_cast<size_t>(k)].df));
    out.br_constant = brdev <= 1e-12;
    if (!out.br_constant) out.violated.push_back("(2): b_r is not constant");

    std::vector<double> mu0s;
    for (int k = 0; k < grid.points; ++k) {
        double m0 = 0.0;
        for (int i = 0; i < m; ++i) {
            const auto& d = bd[static_cast<size_t>(i)][static_cast<size_t>(k)];
            m0 += spec.fibers[static_cast<size_t>(i)].dim * d.ddf / d.f;
        }
        mu0s.push_back(m0);
    }
    out.mu0 = std::accumulate(mu0s.begin(), mu0s.end(), 0.0) / mu0s.size();
    for (double v : mu0s) out.mu0_dev = std::max(out.mu0_dev, std::abs(v - out.mu0));
    if (out.mu0_dev > 1e-9) out.violated.push_back("(2): sum l_i b_i''/b_i is not constant");

    // mu1 = div_{F_r} P and pi(P) over fiber sample points
    Block fb = spec.fiber_block(r);
    std::vector<double> pt(static_cast<size_t>(spec.total_dim()), 0.0);
    pt[0] = grid.t(grid.points / 2);
    std::vector<double> mu1s, piPs;
    for (double th : {0.0, 0.9, 2.1, -1.3}) {
        pt[static_cast<size_t>(fb.offset)] = th;
        auto P = p_field_jets(spec, params, pt);
        JetMat gF = fiber_metric_at(spec, r, pt);
        ConnJets cF = christoffels(gF, fb);
        double div = 0.0;
        for (int a = fb.offset; a < fb.offset + fb.dim; ++a) {
            div += P[static_cast<size_t>(a)].d(a);
            for (int c = fb.offset; c < fb.offset + fb.dim; ++c)
                div += cF(a, a, c).value() * P[static_cast<size_t>(c)].value();
        }
        mu1s.push_back(div);
        Mat g = metric_at(spec, pt).values();
        double pp = 0.0;
        for (int a = 0; a < spec.total_dim(); ++a)
            for (int c = 0; c < spec.total_dim(); ++c)
                pp += g(a, c) * P[static_cast<size_t>(a)].value() * P[static_cast<size_t>(c)].value();
        piPs.push_back(pp);
    }
    out.mu1 = std::accumulate(mu1s.begin(), mu1s.end(), 0.0) / mu1s.size();
    for (double v : mu1s) out.mu1_dev = std::max(out.mu1_dev, std::abs(v - out.mu1));
    if (out.mu1_dev > 1e-9) out.violated.push_back("(2): div_{F_r} P is not constant");
    out.piP = piPs[0];
    for (double v : piPs)
        if (std::abs(v - out.piP) > 1e-9) out.violated.push_back("pi(P) is not constant");

    // linkage: mu0 - l2 mu1 + alpha = [(nbar-1) l1 l2 - l2^2] pi(P)
    double coef = (nbar - 1) * l1 * l2 - l2 * l2;
    out.forced_alpha = coef * out.piP - out.mu0 + l2 * out.mu1;

    // condition (3) on the circle fiber, via the oracle
    {
        pt[static_cast<size_t>(fb.offset)] = 0.7;
        TensorAtPoint lc = levi_civita_at(spec, pt);
        Mat np = nabla_p(spec, params, pt, lc);
        auto P = p_field_jets(spec, params, pt);
        Mat g = lc.metric;
        int v = fb.offset;
        double piv = 0.0;
        for (int a = 0; a < spec.total_dim(); ++a)
            piv += g(v, a) * P[static_cast<size_t>(a)].value();
        double gnp = 0.0;
        for (int a = 0; a < spec.total_dim(); ++a) gnp += g(v, a) * np(v, a);
        double br = bd[static_cast<size_t>(r)][0].f;
        double alphabar = br * br * (coef * out.piP + l2 * out.mu1 - out.forced_alpha);
        // Ric^{F_r} = 0 on the circle; g_{F_r}(V,V) = 1
        double res = alphabar - ((nbar - 1) * l1 * l1 - l2 * l2) * piv * piv +
                     ((nbar - 1) * l1 - l2) * gnp;
        out.cond3_residual = std::abs(res);
    }

    // condition (4) for the fibers away from P at the forced alpha
    for (int i = 0; i < m; ++i) {
        if (i == r) continue;
        double alpha_i = spec.fibers[static_cast<size_t>(i)].einstein_alpha_paper();
        double maxsq = 1.0;
        for (int k = 0; k < grid.points; ++k)
            maxsq = std::max(maxsq, bd[static_cast<size_t>(i)][static_cast<size_t>(k)].f *
                                        bd[static_cast<size_t>(i)][static_cast<size_t>(k)].f);
        for (int k = 0; k < grid.points; ++k) {
            const auto& d = bd[static_cast<size_t>(i)][static_cast<size_t>(k)];
            double cross = 0.0;
            for (int s = 0; s < m; ++s) {
                if (s == i) continue;
                const auto& ds = bd[static_cast<size_t>(s)][static_cast<size_t>(k)];
                cross += spec.fibers[static_cast<size_t>(s)].dim * ds.df / ds.f;
            }
            int li = spec.fibers[static_cast<size_t>(i)].dim;
            double c4 = alpha_i - d.f * d.ddf + coef * d.f * d.f * out.piP - d.f * d.df * cross -
                        (li - 1) * d.df * d.df - (out.forced_alpha - l2 * out.mu1) * d.f * d.f;
            out.cond4_max[static_cast<size_t>(i)] =
                std::max(out.cond4_max[static_cast<size_t>(i)], std::abs(c4) / maxsq);
        }
    }
    return out;
}

double fiberP_alpha_shift(double alphaB, double lambda1, double lambda2, int nbar, double piP) {
    return alphaB + ((nbar - 1) * lambda1 * lambda2 - lambda2 * lambda2) * piP;
}

} // namespace qsc::grw
