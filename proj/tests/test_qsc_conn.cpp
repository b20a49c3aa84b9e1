#include "qsc/connection.hpp"
#include "qsc/sampling.hpp"

#include <doctest.h>
#include <random>

using namespace qsc;

namespace {

SpaceSpec grw(const char* warp, FiberModel fiber, int base_sign = -1) {
    return SpaceSpec::make(BaseModel::interval(base_sign), {fiber}, {parse_expr(warp)});
}

QscParams p_dt(double l1, double l2) { return QscParams::make(l1, l2, PField::base({parse_expr("1")})); }

} // namespace

TEST_CASE("qsc_conn_at: worked coefficients on -dt^2 + e^{2t} dx^2") {
    SpaceSpec s = grw("exp(t)", FiberModel::circle());
    QscParams q = p_dt(2.0, 3.0);
    ConnJets conn = qsc_conn_at(s, q, {0.0, 0.2});
    // nabla_x dx = -2 dt: LC part +1, correction -3 g_xx P^t
    CHECK(conn(0, 1, 1).value() == doctest::Approx(-2.0));
    // Prop 3.1(3): coefficient of nabla_U X is Xf/f + lambda1 pi(X) = 1 - lambda1
    QscParams q2 = p_dt(1.0, 1.0);
    ConnJets c2 = qsc_conn_at(s, q2, {0.0, 0.2});
    CHECK(c2(1, 1, 0).value() == doctest::Approx(0.0)); // 1 + 1*(-1)
}

TEST_CASE("P = Zero reduces to Levi-Civita exactly") {
    SpaceSpec s = grw("exp(t)", FiberModel::torus(2));
    QscParams q = QscParams::degenerate(2.0, -1.5, PField::zero());
    ConnJets conn = qsc_conn_at(s, q, {0.3, 0.1, -0.2});
    TensorAtPoint lc = levi_civita_at(s, {0.3, 0.1, -0.2});
    auto r = compare_tensors(conn.values().a, lc.conn.a);
    CHECK(r.max_abs == 0.0);

    Rank4 direct = curvature_qsc_direct(s, q, {0.3, 0.1, -0.2});
    Rank4 lc_curv = curvature_from_conn(lc.conn_jets, s.full_block());
    CHECK(compare_tensors(direct.a, lc_curv.a).max_abs == 0.0);
}

TEST_CASE("strict constructor rejects degenerate lambdas") {
    CHECK_THROWS_AS(QscParams::make(0.0, 1.0, PField::zero()), SpecError);
    CHECK_THROWS_AS(QscParams::make(1.0, 0.0, PField::zero()), SpecError);
    CHECK_NOTHROW(QscParams::degenerate(0.0, 0.0, PField::zero()));
}

TEST_CASE("classification tags per the lambda cases") {
    CHECK(p_dt(1.0, 1.0).classify() == QscParams::Kind::SemiSymmetricMetric);
    CHECK(p_dt(2.5, 2.5).classify() == QscParams::Kind::QuarterSymmetricMetric);
    CHECK(p_dt(1.0, 2.0).classify() == QscParams::Kind::QuarterSymmetricNonMetric);
}

TEST_CASE("P on absent fiber index raises") {
    SpaceSpec s = grw("exp(t)", FiberModel::circle());
    QscParams q = QscParams::make(1.0, 1.0, PField::fiber(3, {parse_expr("1")}));
    CHECK_THROWS_AS(qsc_conn_at(s, q, {0.0, 0.1}), SpecError);
}

TEST_CASE("torsion: worked example and lambda2 independence") {
    SpaceSpec s = grw("exp(t)", FiberModel::circle());
    QscParams q = p_dt(2.0, 3.0);
    Rank3 T = torsion_at(s, q, {0.0, 0.5});
    // T(dt, dx) = lambda1[pi(dx) dt - pi(dt) dx] = 2 dx  (pi(dt) = -1)
    CHECK(T(1, 0, 1) == doctest::Approx(2.0));
    CHECK(T(0, 0, 1) == doctest::Approx(0.0));

    Rank3 T2 = torsion_at(s, p_dt(2.0, -7.0), {0.0, 0.5});
    CHECK(compare_tensors(T.a, T2.a).max_abs < 1e-15); // lambda2 drops out

    QscParams lc = QscParams::degenerate(0.0, 0.0, PField::zero());
    Rank3 T0 = torsion_at(s, lc, {0.0, 0.5});
    for (double v : T0.a) CHECK(v == 0.0);
}

TEST_CASE("torsion identity lambda1(pi_j d^k_i - pi_i d^k_j) on random configs") {
    std::mt19937 rng(11);
    SampleOptions opt;
    for (int trial = 0; trial < 20; ++trial) {
        SpaceSpec s = sample_space(rng, opt);
        QscParams q = sample_qsc(rng, s, opt);
        auto pt = sample_point(rng, s);
        const int n = s.total_dim();
        Rank3 T = torsion_at(s, q, pt);
        Mat g = metric_at(s, pt).values();
        std::vector<Jet1> P = p_field_jets(s, q, pt);
        std::vector<double> pi(static_cast<size_t>(n), 0.0);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) pi[static_cast<size_t>(a)] += g(a, b) * P[static_cast<size_t>(b)].value();
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double expect = q.lambda1 * ((k == i ? pi[static_cast<size_t>(j)] : 0.0) -
                                                 (k == j ? pi[static_cast<size_t>(i)] : 0.0));
                    CHECK(T(k, i, j) == doctest::Approx(expect).epsilon(1e-10).scale(1.0));
                }
    }
}

TEST_CASE("non-metricity: identity, worked value, and metricity boundary") {
    SpaceSpec s = grw("exp(t)", FiberModel::circle());

    // lambda1 = lambda2: metric connection, all zero
    Rank3 nm_metric = non_metricity_at(s, p_dt(5.0, 5.0), {0.4, 0.2});
    for (double v : nm_metric.a) CHECK(std::abs(v) < 1e-12);

    // worked value: (nabla_x g)(x, t) = (l2-l1) g_xx pi_t = -1 at t=0
    Rank3 nm = non_metricity_at(s, p_dt(1.0, 2.0), {0.0, 0.2});
    CHECK(nm(1, 1, 0) == doctest::Approx(-1.0));

    // P = Zero: flat in P, so no non-metricity either
    Rank3 nm0 = non_metricity_at(s, QscParams::degenerate(1.0, 2.0, PField::zero()), {0.0, 0.2});
    for (double v : nm0.a) CHECK(v == 0.0);
}

TEST_CASE("non-metricity equals (l2-l1)[g_ij pi_k + g_ik pi_j] on random configs") {
    std::mt19937 rng(31);
    SampleOptions opt;
    for (int trial = 0; trial < 10; ++trial) {
        SpaceSpec s = sample_space(rng, opt);
        QscParams q = sample_qsc(rng, s, opt);
        auto pt = sample_point(rng, s);
        const int n = s.total_dim();
        Rank3 nm = non_metricity_at(s, q, pt);
        Mat g = metric_at(s, pt).values();
        std::vector<Jet1> P = p_field_jets(s, q, pt);
        std::vector<double> pi(static_cast<size_t>(n), 0.0);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) pi[static_cast<size_t>(a)] += g(a, b) * P[static_cast<size_t>(b)].value();
        bool metric_case = std::abs(q.lambda1 - q.lambda2) <= 1e-12;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double expect = metric_case ? 0.0
                                                : (q.lambda2 - q.lambda1) *
                                                      (g(i, j) * pi[static_cast<size_t>(k)] +
                                                       g(i, k) * pi[static_cast<size_t>(j)]);
                    CHECK(nm(i, j, k) == doctest::Approx(expect).epsilon(1e-10).scale(1.0));
                }
    }
}

TEST_CASE("route equivalence: differentiated coefficients vs curvature transform") {
    std::mt19937 rng(4127);
    SampleOptions opt;
    opt.twist = TwistMode::Any;
    for (int trial = 0; trial < 25; ++trial) {
        SpaceSpec s = sample_space(rng, opt);
        QscParams q = sample_qsc(rng, s, opt);
        auto pt = sample_point(rng, s);
        ConnJets conn = qsc_conn_at(s, q, pt);
        Rank4 via_conn = curvature_from_conn(conn, s.full_block());
        Rank4 direct = curvature_qsc_direct(s, q, pt);
        auto r = compare_tensors(via_conn.a, direct.a);
        CHECK(r.max_rel < 1e-9);

        // R-bar antisymmetric in the first two slots
        const int n = s.total_dim();
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k)
                        CHECK(direct(l, i, j, k) ==
                              doctest::Approx(-direct(l, j, i, k)).epsilon(1e-11).scale(1.0));
    }
}

TEST_CASE("semi-symmetric reduction: route equivalence persists at lambda = (1,1)") {
    std::mt19937 rng(555);
    SampleOptions opt;
    for (int trial = 0; trial < 8; ++trial) {
        SpaceSpec s = sample_space(rng, opt);
        QscParams base = sample_qsc(rng, s, opt);
        QscParams q = QscParams::make(1.0, 1.0, base.p);
        auto pt = sample_point(rng, s);
        Rank4 via_conn = curvature_from_conn(qsc_conn_at(s, q, pt), s.full_block());
        Rank4 direct = curvature_qsc_direct(s, q, pt);
        CHECK(compare_tensors(via_conn.a, direct.a).max_rel < 1e-9);
    }
}

TEST_CASE("JSON round-trip for QscParams") {
    QscParams q = QscParams::make(1.5, -2.0, PField::fiber(0, {parse_expr("1 + 0.2*sin(u1)")}));
    QscParams back = qsc_from_json(qsc_to_json(q));
    CHECK(back.lambda1 == q.lambda1);
    CHECK(back.lambda2 == q.lambda2);
    CHECK(back.p.where == PField::Where::Fiber);
    CHECK(back.p.fiber_index == 0);

    CHECK_THROWS_AS(qsc_from_json("{\"lambda1\":0.0}"), SpecError);
    CHECK_NOTHROW(qsc_from_json("{\"lambda1\":0.0}", false)); // degenerate-test mode
}

TEST_CASE("JSON round-trip for SpaceSpec") {
    SpaceSpec s = SpaceSpec::make(BaseModel::interval(-1),
                                  {FiberModel::circle(), FiberModel::sphere(2, 1.3)},
                                  {parse_expr("exp(t)"), parse_expr("2 + sin(t)")});
    SpaceSpec back = space_from_json(space_to_json(s));
    CHECK(back.total_dim() == s.total_dim());
    CHECK(back.fibers[1].radius == doctest::Approx(1.3));
    auto pt = std::vector<double>{0.2, 0.1, 1.0, 0.3};
    auto r = compare_tensors(metric_at(s, pt).values().a, metric_at(back, pt).values().a);
    CHECK(r.max_abs < 1e-15);
}
