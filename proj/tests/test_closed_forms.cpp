#include "qsc/closed_forms.hpp"
#include "qsc/sampling.hpp"

#include <doctest.h>
#include <map>
#include <random>

using namespace qsc;
using namespace qsc::cf;

namespace {

SpaceSpec grw(const char* warp, FiberModel fiber, int base_sign = -1) {
    return SpaceSpec::make(BaseModel::interval(base_sign), {fiber}, {parse_expr(warp)});
}

QscParams p_dt(double l1, double l2) {
    return QscParams::make(l1, l2, PField::base({parse_expr("1")}));
}

struct CatalogRun {
    std::map<std::string, double> worst; // formula id -> max rel diff
    void add(const std::string& id, double rel) {
        auto& w = worst[id];
        w = std::max(w, rel);
    }
    double overall(double skip_below = -1.0) const {
        double m = 0.0;
        for (const auto& [id, w] : worst) {
            (void)id;
            if (w > skip_below) m = std::max(m, w);
        }
        return m;
    }
};

/// Sweep every slot signature of the catalog against the first-principles
/// route (differentiated quarter-symmetric coefficients).
void sweep_catalog(const SpaceSpec& s, const QscParams& q, const std::vector<double>& pt,
                   CatalogRun& conn_run, CatalogRun& curv_run, CatalogRun& ric_run,
                   CatalogRun& scal_run) {
    const int n = s.total_dim();
    auto slots = all_slots(s);

    ConnJets oconn = qsc_conn_at(s, q, pt);
    Rank4 ocurv = curvature_from_conn(oconn, s.full_block());
    TensorAtPoint oracle = qsc_oracle_at(s, q, pt);

    for (auto A : slots)
        for (auto B : slots) {
            int a = A.chart_index(s), b = B.chart_index(s);
            CFVector v = cf_connection(s, q, A, B, pt);
            std::vector<double> expect(static_cast<size_t>(n));
            for (int k = 0; k < n; ++k) expect[static_cast<size_t>(k)] = oconn(k, a, b).value();
            conn_run.add(v.formula_id, compare_tensors(v.components, expect).max_rel);

            CFScalar r = cf_ricci(s, q, A, B, pt);
            std::vector<double> rv = {r.value}, re = {oracle.ricci(a, b)};
            ric_run.add(r.formula_id, compare_tensors(rv, re).max_rel);
        }

    for (auto A : slots)
        for (auto B : slots)
            for (auto C : slots) {
                int a = A.chart_index(s), b = B.chart_index(s), c = C.chart_index(s);
                CFVector v = cf_curvature(s, q, A, B, C, pt);
                std::vector<double> expect(static_cast<size_t>(n));
                for (int l = 0; l < n; ++l) expect[static_cast<size_t>(l)] = ocurv(l, a, b, c);
                curv_run.add(v.formula_id, compare_tensors(v.components, expect).max_rel);
            }

    CFScalar sc = cf_scalar(s, q, pt);
    std::vector<double> sv = {sc.value}, se = {oracle.scalar};
    scal_run.add(sc.formula_id, compare_tensors(sv, se).max_rel);
}

} // namespace

TEST_CASE("connection catalog worked examples") {
    SpaceSpec s = grw("exp(t)", FiberModel::circle());

    // nabla_X U = (Xf/f) U = U for f = e^t
    CFVector v = cf_connection(s, p_dt(1.0, 1.0), BasisSlot::base(0), BasisSlot::fiber(0, 0),
                               {0.3, 0.1});
    CHECK(v.components[1] == doctest::Approx(1.0));
    CHECK(v.components[0] == doctest::Approx(0.0));

    // nabla_U U = -f g_F(U,U) grad_B f - g(U,U) P = 0 for f = e^t, lambda2 = 1
    CFVector vu = cf_connection(s, p_dt(1.0, 1.0), BasisSlot::fiber(0, 0), BasisSlot::fiber(0, 0),
                                {0.0, 0.1});
    CHECK(vu.components[0] == doctest::Approx(0.0).scale(1.0));
    CHECK(vu.formula_id == "P3.1(4)");

    // different fibers give zero
    SpaceSpec s2 = SpaceSpec::make(BaseModel::interval(-1),
                                   {FiberModel::circle(), FiberModel::circle()},
                                   {parse_expr("exp(t)"), parse_expr("2 + sin(t)")});
    CFVector vz = cf_connection(s2, p_dt(1.0, 1.0), BasisSlot::fiber(0, 0), BasisSlot::fiber(1, 0),
                                {0.2, 0.1, 0.4});
    for (double x : vz.components) CHECK(x == 0.0);
    CHECK(vz.formula_id == "P4.1(4)");
}

TEST_CASE("curvature catalog worked examples") {
    // Prop 3.3(3): R(X,Y)V = 0 needs a 2-d base for a nontrivial (X,Y)
    SpaceSpec s2 = SpaceSpec::make(BaseModel::flat({-1, 1}), {FiberModel::circle()},
                                   {parse_expr("exp(x1)")});
    QscParams q2 = QscParams::make(1.0, 1.0, PField::base({parse_expr("1"), parse_expr("0")}));
    CFVector rv = cf_curvature(s2, q2, BasisSlot::base(0), BasisSlot::base(1),
                               BasisSlot::fiber(0, 0), {0.2, -0.3, 0.1});
    for (double x : rv.components) CHECK(x == doctest::Approx(0.0));
    CHECK(rv.formula_id == "P3.3(3)");

    // Prop 3.3(6) with flat 2-d fiber, f = e^t, lambda = (1,1), P = dt:
    // bracket = -1 + 2 - 1 = 0 and R^F = 0, so everything vanishes
    SpaceSpec s = grw("exp(t)", FiberModel::torus(2));
    CFVector r6 = cf_curvature(s, p_dt(1.0, 1.0), BasisSlot::fiber(0, 0), BasisSlot::fiber(0, 1),
                               BasisSlot::fiber(0, 1), {0.4, 0.0, 0.0});
    for (double x : r6.components) CHECK(x == doctest::Approx(0.0).scale(1.0));
    CHECK(r6.formula_id == "P3.3(6)");

    // Prop 3.4(4): V = W makes R(V,W)X vanish by antisymmetry
    SpaceSpec sc = grw("exp(t)", FiberModel::circle());
    QscParams qf = QscParams::make(1.0, 1.0, PField::fiber(0, {parse_expr("1")}));
    CFVector r4 = cf_curvature(sc, qf, BasisSlot::fiber(0, 0), BasisSlot::fiber(0, 0),
                               BasisSlot::base(0), {0.2, 0.3});
    for (double x : r4.components) CHECK(x == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("Einstein witness: Ric-bar vanishes identically for the e^t circle GRW") {
    SpaceSpec s = grw("exp(t)", FiberModel::circle());
    QscParams q = p_dt(1.0, 1.0);
    for (double tt : {-0.5, 0.0, 0.7}) {
        std::vector<double> pt = {tt, 0.3};
        CHECK(cf_ricci(s, q, BasisSlot::base(0), BasisSlot::base(0), pt).value ==
              doctest::Approx(0.0).scale(1.0));
        CHECK(cf_ricci(s, q, BasisSlot::fiber(0, 0), BasisSlot::fiber(0, 0), pt).value ==
              doctest::Approx(0.0).scale(1.0));
        CHECK(cf_ricci(s, q, BasisSlot::base(0), BasisSlot::fiber(0, 0), pt).value == 0.0);
        TensorAtPoint t = qsc_oracle_at(s, q, pt);
        for (double v : t.ricci.a) CHECK(v == doctest::Approx(0.0).scale(1.0));
        CHECK(cf_scalar(s, q, pt).value == doctest::Approx(0.0).scale(1.0));
    }
}

TEST_CASE("Prop 3.6(2)/(3): the mixed Ricci pair is antisymmetric in its slots") {
    SpaceSpec s = grw("exp(t)", FiberModel::circle());
    QscParams q = QscParams::make(1.0, 2.0, PField::fiber(0, {parse_expr("1")}));
    std::vector<double> pt = {0.3, 0.5};
    CFScalar xv = cf_ricci(s, q, BasisSlot::base(0), BasisSlot::fiber(0, 0), pt);
    CFScalar vx = cf_ricci(s, q, BasisSlot::fiber(0, 0), BasisSlot::base(0), pt);
    // [(nbar-1) l1 - l2] pi(V) Xf/f with nbar = 2: (1 - 2) * e^{2t} * 1
    double piv = std::exp(2.0 * 0.3);
    CHECK(xv.value == doctest::Approx(-piv));
    CHECK(vx.value == doctest::Approx(+piv));
    CHECK(xv.value == doctest::Approx(-vx.value));

    // lambda2 = (nbar-1) lambda1 kills both
    QscParams q0 = QscParams::make(1.0, 1.0, PField::fiber(0, {parse_expr("1")}));
    CHECK(cf_ricci(s, q0, BasisSlot::base(0), BasisSlot::fiber(0, 0), pt).value ==
          doctest::Approx(0.0));
}

TEST_CASE("scalar catalog worked examples") {
    // f constant, P = Zero, flat fiber: S-bar = S^B + S^F/f^2 = 0
    SpaceSpec s = grw("2", FiberModel::torus(2));
    QscParams q = QscParams::degenerate(1.0, 1.0, PField::zero());
    CHECK(cf_scalar(s, q, {0.1, 0.0, 0.0}).value == doctest::Approx(0.0));

    // sphere fiber: S-bar = S^F / c^2 (paper convention, negative)
    SpaceSpec ss = grw("2", FiberModel::sphere(2, 1.0), +1);
    CHECK(cf_scalar(ss, q, {0.1, 1.0, 0.0}).value == doctest::Approx(-2.0 / 4.0));

    // two-fiber Ricci-flat example: b1 = b2 = e^t, l1 = l2 = 1
    SpaceSpec s2 = SpaceSpec::make(BaseModel::interval(-1),
                                   {FiberModel::circle(), FiberModel::circle()},
                                   {parse_expr("exp(t)"), parse_expr("exp(t)")});
    QscParams q2 = p_dt(1.0, 1.0);
    CHECK(cf_scalar(s2, q2, {0.4, 0.1, 0.2}).value == doctest::Approx(0.0).scale(1.0));
    CHECK(cf_scalar(s2, q2, {0.4, 0.1, 0.2}).formula_id == "P4.9");
}

TEST_CASE("catalog vs oracle: warped configurations, P on base or circle fiber") {
    std::mt19937 rng(20250809);
    SampleOptions opt; // untwisted
    CatalogRun conn_run, curv_run, ric_run, scal_run;
    for (int trial = 0; trial < 20; ++trial) {
        SpaceSpec s = sample_space(rng, opt);
        QscParams q = sample_qsc(rng, s, opt);
        auto pt = sample_point(rng, s);
        sweep_catalog(s, q, pt, conn_run, curv_run, ric_run, scal_run);
    }
    for (const auto& [id, w] : conn_run.worst) {
        INFO("connection item " << id);
        CHECK(w < 1e-9);
    }
    for (const auto& [id, w] : curv_run.worst) {
        INFO("curvature item " << id);
        CHECK(w < 1e-9);
    }
    for (const auto& [id, w] : ric_run.worst) {
        INFO("ricci item " << id);
        CHECK(w < 1e-8);
    }
    for (const auto& [id, w] : scal_run.worst) {
        INFO("scalar item " << id);
        CHECK(w < 1e-8);
    }
}

TEST_CASE("catalog vs oracle: twisted configurations (1-d twisted fibers, exact domain)") {
    std::mt19937 rng(777);
    SampleOptions opt;
    opt.twist = TwistMode::Dim1Only;
    CatalogRun conn_run, curv_run, ric_run, scal_run;
    for (int trial = 0; trial < 20; ++trial) {
        SpaceSpec s = sample_space(rng, opt);
        QscParams q = sample_qsc(rng, s, opt);
        auto pt = sample_point(rng, s);
        sweep_catalog(s, q, pt, conn_run, curv_run, ric_run, scal_run);
    }
    for (const auto& [id, w] : conn_run.worst) {
        INFO("connection item " << id);
        CHECK(w < 1e-9);
    }
    for (const auto& [id, w] : curv_run.worst) {
        INFO("curvature item " << id);
        CHECK(w < 1e-9);
    }
    for (const auto& [id, w] : ric_run.worst) {
        INFO("ricci item " << id);
        CHECK(w < 1e-8);
    }
    for (const auto& [id, w] : scal_run.worst) {
        INFO("scalar item " << id);
        CHECK(w < 1e-8);
    }
}

TEST_CASE("specialization: singly-warped transcriptions match the multiply catalog at m=1") {
    std::mt19937 rng(31337);
    SampleOptions opt;
    opt.max_fibers = 1;
    for (int trial = 0; trial < 15; ++trial) {
        SpaceSpec s = sample_space(rng, opt);
        QscParams q = sample_qsc(rng, s, opt);
        auto pt = sample_point(rng, s);
        auto slots = all_slots(s);
        for (auto A : slots)
            for (auto B : slots) {
                CFScalar m = cf_ricci(s, q, A, B, pt);
                CFScalar s1 = cf_ricci_singly(s, q, A, B, pt);
                CHECK(m.value == doctest::Approx(s1.value).epsilon(1e-12).scale(1.0));
            }
        CHECK(cf_scalar(s, q, pt).value ==
              doctest::Approx(cf_scalar_singly(s, q, pt).value).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("non-symmetry witness: Ric(X,V) + Ric(V,X) = 2(l_i - 1) VX(ln b_i)") {
    // non-separable twisted 2-d fiber keeps VX(ln b) alive; P sits on a circle
    SpaceSpec s = SpaceSpec::make(
        BaseModel::interval(-1), {FiberModel::torus(2), FiberModel::circle()},
        {parse_expr("exp(t)*exp(0.1*t*sin(u1))"), parse_expr("2")});
    QscParams q = QscParams::make(1.3, 0.7, PField::fiber(1, {parse_expr("1")}));
    std::vector<double> pt = {0.2, 0.4, -0.3, 0.1};
    Env env = s.chart_env(pt);
    Jet2 lnb = log(s.warping_at(0, env));
    for (int vi = 0; vi < 2; ++vi) {
        auto A = BasisSlot::base(0);
        auto V = BasisSlot::fiber(0, vi);
        double sum = cf_ricci(s, q, A, V, pt).value + cf_ricci(s, q, V, A, pt).value;
        double expect = 2.0 * (2 - 1) * lnb.dd(V.chart_index(s), 0);
        CHECK(sum == doctest::Approx(expect).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("mixed_ricci_flat_check: warped, twisted, and fiber-P branches") {
    std::mt19937 rng(5);
    // warped + P base: mixed components vanish
    SpaceSpec s = SpaceSpec::make(BaseModel::interval(-1), {FiberModel::torus(2)},
                                  {parse_expr("exp(t)")});
    QscParams q = p_dt(1.0, 2.0);
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 3; ++i) pts.push_back(sample_point(rng, s));
    auto rep = mixed_ricci_flat_check(s, q, pts);
    CHECK(rep.mixed_flat);
    CHECK(rep.branch == "warped");

    // twisted + P base: nonzero mixed Ricci reported. The twist must be
    // non-separable: mixed entries are (l_i-1) VX(ln b_i), and any b = u(t)v(y)
    // has VX(ln b) = 0, so e^t (1 + y^2/10) style factors stay mixed-flat.
    SpaceSpec st = SpaceSpec::make(BaseModel::interval(-1), {FiberModel::torus(2)},
                                   {parse_expr("exp(t*(1 + u1^2/10))")});
    std::vector<std::vector<double>> pts2;
    for (int i = 0; i < 3; ++i) pts2.push_back(sample_point(rng, st));
    auto rep2 = mixed_ricci_flat_check(st, q, pts2);
    CHECK_FALSE(rep2.mixed_flat);
    CHECK(rep2.max_mixed_abs > 1e-3);

    // separable twist: mixed Ricci vanishes even though the product is twisted
    SpaceSpec ssep = SpaceSpec::make(BaseModel::interval(-1), {FiberModel::torus(2)},
                                     {parse_expr("exp(t)*(1 + u1^2/10)")});
    std::vector<std::vector<double>> pts2b;
    for (int i = 0; i < 3; ++i) pts2b.push_back(sample_point(rng, ssep));
    CHECK(mixed_ricci_flat_check(ssep, q, pts2b).mixed_flat);

    // P on circle fiber with lambda2 = (nbar-1) lambda1: branch (1)
    SpaceSpec sf = SpaceSpec::make(BaseModel::interval(-1),
                                   {FiberModel::torus(2), FiberModel::circle()},
                                   {parse_expr("exp(t)"), parse_expr("1")});
    QscParams qf = QscParams::make(0.5, 1.5, PField::fiber(1, {parse_expr("1")})); // nbar = 4
    std::vector<std::vector<double>> pts3;
    for (int i = 0; i < 3; ++i) pts3.push_back(sample_point(rng, sf));
    auto rep3 = mixed_ricci_flat_check(sf, qf, pts3);
    CHECK(rep3.mixed_flat);
    CHECK(rep3.branch == "lambda2=(nbar-1)lambda1");
    CHECK(rep3.dim1_fiber_flagged);
}

TEST_CASE("documented discrepancy: twisted fibers of dim >= 2 miss the fiber-conformal term") {
    // On a twisted fiber with l_i >= 2 the stated same-fiber curvature items
    // omit Delta_F(ln b_i)[g_F(V,U)W - g_F(W,U)V]; the gap evaluators must
    // reproduce the oracle-vs-catalog difference to machine precision, and
    // nothing else may drift.
    std::vector<std::pair<SpaceSpec, QscParams>> configs;
    configs.emplace_back(
        SpaceSpec::make(BaseModel::interval(-1), {FiberModel::torus(2)},
                        {parse_expr("exp(0.3*t)*(1 + 0.2*sin(u1) + 0.1*cos(u2))*exp(0.15*t*sin(u1))")}),
        QscParams::make(1.4, -0.8, PField::base({parse_expr("0.7 + 0.2*sin(t)")})));
    configs.emplace_back(
        SpaceSpec::make(BaseModel::interval(-1), {FiberModel::sphere(2, 1.3)},
                        {parse_expr("exp(0.3*t)*(1.5 + 0.2*sin(u1)*cos(u2))")}),
        QscParams::make(-1.1, 2.0, PField::base({parse_expr("1")})));
    configs.emplace_back(
        SpaceSpec::make(BaseModel::interval(-1), {FiberModel::torus(2), FiberModel::circle()},
                        {parse_expr("exp(0.2*t)*(1.4 + 0.3*cos(u2))"), parse_expr("2 + sin(t)")}),
        QscParams::make(0.9, 1.7, PField::fiber(1, {parse_expr("1 + 0.2*sin(v1)")})));

    std::mt19937 rng(424242);
    for (auto& [s, q] : configs) {
        CHECK(has_twisted_gap(s));
        auto pt = sample_point(rng, s);
        auto slots = all_slots(s);
        const int n = s.total_dim();

        ConnJets oconn = qsc_conn_at(s, q, pt);
        Rank4 ocurv = curvature_from_conn(oconn, s.full_block());
        TensorAtPoint oracle = qsc_oracle_at(s, q, pt);

        for (auto A : slots)
            for (auto B : slots) {
                for (auto C : slots) {
                    CFVector v = cf_curvature(s, q, A, B, C, pt);
                    CFVector gap = twisted_gap_curvature(s, A, B, C, pt);
                    int a = A.chart_index(s), b = B.chart_index(s), c = C.chart_index(s);
                    for (int l = 0; l < n; ++l) {
                        double expect = ocurv(l, a, b, c) - gap.components[static_cast<size_t>(l)];
                        CHECK(v.components[static_cast<size_t>(l)] ==
                              doctest::Approx(expect).epsilon(1e-10).scale(1.0));
                    }
                }
                CFScalar r = cf_ricci(s, q, A, B, pt);
                double gap = twisted_gap_ricci(s, A, B, pt);
                int a = A.chart_index(s), b = B.chart_index(s);
                CHECK(r.value == doctest::Approx(oracle.ricci(a, b) - gap).epsilon(1e-10).scale(1.0));
            }
        CFScalar sc = cf_scalar(s, q, pt);
        CHECK(sc.value == doctest::Approx(oracle.scalar - twisted_gap_scalar(s, pt))
                              .epsilon(1e-10)
                              .scale(1.0));
    }
}

TEST_CASE("Lemma reproduction: zero-P catalog equals the Levi-Civita oracle") {
    std::mt19937 rng(808);
    SampleOptions opt;
    opt.twist = TwistMode::Dim1Only;
    QscParams lc = QscParams::degenerate(0.0, 0.0, PField::zero());
    for (int trial = 0; trial < 10; ++trial) {
        SpaceSpec s = sample_space(rng, opt);
        auto pt = sample_point(rng, s);
        TensorAtPoint oracle = oracle_at(s, pt);
        auto slots = all_slots(s);
        const int n = s.total_dim();
        for (auto A : slots)
            for (auto B : slots) {
                // Lemma 2.1 / 2.3
                CFVector v = cf_connection(s, lc, A, B, pt);
                int a = A.chart_index(s), b = B.chart_index(s);
                for (int k = 0; k < n; ++k)
                    CHECK(v.components[static_cast<size_t>(k)] ==
                          doctest::Approx(oracle.conn(k, a, b)).epsilon(1e-9).scale(1.0));
                // Lemma 2.2 / 2.4
                for (auto C : slots) {
                    CFVector r = cf_curvature(s, lc, A, B, C, pt);
                    int c = C.chart_index(s);
                    for (int l = 0; l < n; ++l)
                        CHECK(r.components[static_cast<size_t>(l)] ==
                              doctest::Approx(oracle.curv(l, a, b, c)).epsilon(1e-9).scale(1.0));
                }
            }
    }
}
