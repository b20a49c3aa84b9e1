#include "qsc/oracle.hpp"
#include "qsc/sampling.hpp"

#include <doctest.h>
#include <random>

using namespace qsc;

namespace {

SpaceSpec grw(const char* warp, FiberModel fiber, int base_sign = -1) {
    return SpaceSpec::make(BaseModel::interval(base_sign), {fiber}, {parse_expr(warp)});
}

} // namespace

TEST_CASE("metric_at: interval + circle with f = e^t") {
    SpaceSpec s = grw("exp(t)", FiberModel::circle());
    JetMat g = metric_at(s, {0.0, 0.3});
    CHECK(g(0, 0).value() == doctest::Approx(-1.0));
    CHECK(g(1, 1).value() == doctest::Approx(1.0));
    CHECK(g(0, 1).value() == doctest::Approx(0.0));
    CHECK(g(1, 1).d(0) == doctest::Approx(2.0)); // d/dt e^{2t} at 0
}

TEST_CASE("metric_at: constant warping has zero derivatives") {
    SpaceSpec s = grw("1", FiberModel::torus(2));
    JetMat g = metric_at(s, {0.4, 0.1, -0.2});
    CHECK(g(0, 0).value() == doctest::Approx(-1.0));
    CHECK(g(1, 1).value() == doctest::Approx(1.0));
    CHECK(g(2, 2).value() == doctest::Approx(1.0));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) CHECK(g(i, j).d(k) == doctest::Approx(0.0));
}

TEST_CASE("metric_at: round sphere block at the critical point of sin t") {
    SpaceSpec s = grw("sin(t)", FiberModel::sphere(2, 1.0), +1);
    double th = 1.1;
    JetMat g = metric_at(s, {3.14159265358979323846 / 2.0, th, 0.5});
    CHECK(g(1, 1).value() == doctest::Approx(1.0));
    CHECK(g(2, 2).value() == doctest::Approx(std::sin(th) * std::sin(th)));
    CHECK(g(1, 1).d(0) == doctest::Approx(0.0)); // d/dt sin^2 t = 0 at pi/2
    CHECK(g(2, 2).d(0) == doctest::Approx(0.0));
}

TEST_CASE("metric_at rejects bad domains") {
    SpaceSpec s = grw("t", FiberModel::circle()); // warping not positive at t <= 0
    CHECK_THROWS_AS(metric_at(s, {-0.5, 0.0}), SpecError);
    SpaceSpec sphere = grw("1", FiberModel::sphere(2, 1.0), +1);
    CHECK_THROWS_AS(metric_at(sphere, {0.0, 0.05, 0.0}), ChartError); // pole guard
}

TEST_CASE("levi_civita_at: -dt^2 + e^{2t} dx^2 Christoffels") {
    SpaceSpec s = grw("exp(t)", FiberModel::circle());
    TensorAtPoint t = levi_civita_at(s, {0.0, 0.2});
    CHECK(t.conn(0, 1, 1) == doctest::Approx(1.0));  // Gamma^t_xx
    CHECK(t.conn(1, 0, 1) == doctest::Approx(1.0));  // Gamma^x_tx
    CHECK(t.conn(1, 1, 0) == doctest::Approx(1.0));
    CHECK(t.conn(0, 0, 0) == doctest::Approx(0.0));
    CHECK(t.conn(1, 0, 0) == doctest::Approx(0.0));
    CHECK(t.conn(0, 0, 1) == doctest::Approx(0.0));

    // metric * inverse = identity
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double s2 = 0.0;
            for (int k = 0; k < 2; ++k) s2 += t.metric(i, k) * t.inverse_metric(k, j);
            CHECK(s2 == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
        }
}

TEST_CASE("levi_civita_at: flat metric has vanishing Christoffels") {
    SpaceSpec s = grw("1", FiberModel::torus(2));
    TensorAtPoint t = levi_civita_at(s, {0.7, -0.3, 0.1});
    for (double v : t.conn.a) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("levi_civita_at matches the Xf/f mixed coefficient at any t") {
    SpaceSpec s = grw("exp(2*t)", FiberModel::circle());
    for (double tt : {-0.8, 0.0, 0.6}) {
        TensorAtPoint t = levi_civita_at(s, {tt, 0.1});
        CHECK(t.conn(1, 0, 1) == doctest::Approx(2.0).epsilon(1e-12));
    }
}

TEST_CASE("curvature: de Sitter-like slice and flat torus") {
    SpaceSpec s = grw("exp(t)", FiberModel::circle());
    TensorAtPoint t = oracle_at(s, {0.0, 0.2});
    CHECK(t.curv(0, 0, 1, 1) == doctest::Approx(1.0)); // R(dt,dx)dx = +1 dt
    CHECK(t.curv(1, 0, 1, 1) == doctest::Approx(0.0));

    SpaceSpec flat = grw("1", FiberModel::torus(2));
    TensorAtPoint tf = oracle_at(flat, {0.2, 0.0, 0.4});
    for (double v : tf.curv.a) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("curvature: unit round sphere has sectional curvature 1") {
    SpaceSpec s = grw("1", FiberModel::sphere(2, 1.0), +1);
    std::vector<double> pt = {0.0, 1.0, 0.4};
    TensorAtPoint t = oracle_at(s, pt);
    // K = <R(u1,u2)u2, u1> / (g_11 g_22 - g_12^2) over the sphere block
    double num = 0.0;
    for (int l = 0; l < 3; ++l) num += t.curv(l, 1, 2, 2) * t.metric(l, 1);
    double den = t.metric(1, 1) * t.metric(2, 2) - t.metric(1, 2) * t.metric(1, 2);
    CHECK(num / den == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("ricci/scalar in paper convention") {
    SpaceSpec s = grw("exp(t)", FiberModel::circle());
    TensorAtPoint t = oracle_at(s, {0.0, 0.2});
    CHECK(t.ricci(1, 1) == doctest::Approx(-1.0)); // paper sign
    CHECK(t.scalar == doctest::Approx(-2.0));      // de Sitter_2: standard +2

    SpaceSpec flat = grw("1", FiberModel::torus(2));
    TensorAtPoint tf = oracle_at(flat, {0.2, 0.0, 0.4});
    for (double v : tf.ricci.a) CHECK(std::abs(v) < 1e-14);
    CHECK(tf.scalar == doctest::Approx(0.0));
}

TEST_CASE("sphere sanity: S^F = -l(l-1)/rho^2 in paper convention") {
    for (double rho : {1.0, 1.5}) {
        SpaceSpec s = grw("1", FiberModel::sphere(2, rho), +1);
        std::vector<double> pt = {0.0, 1.2, -0.4};
        JetMat gF = fiber_metric_at(s, 0, pt);
        Block blk = s.fiber_block(0);
        ConnJets conn = christoffels(gF, blk);
        Rank4 R = curvature_from_conn(conn, blk);
        Frame fr = frame_from_metric(gF.values(), blk);
        Mat ric = ricci_paper(R, fr, gF.values());
        double S = scalar_paper(ric, fr);
        CHECK(S == doctest::Approx(-2.0 / (rho * rho)).epsilon(1e-9));
        CHECK(S == doctest::Approx(s.fibers[0].scalar_paper()).epsilon(1e-9));
    }
}

TEST_CASE("frame invariants on random spaces") {
    std::mt19937 rng(2024);
    SampleOptions opt;
    opt.twist = TwistMode::Any;
    for (int trial = 0; trial < 12; ++trial) {
        SpaceSpec s = sample_space(rng, opt);
        auto pt = sample_point(rng, s);
        TensorAtPoint t = oracle_at(s, pt);
        const int n = s.total_dim();
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double dot = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        dot += t.frame.vectors(j, a) * t.frame.vectors(k, b) * t.metric(a, b);
                double expect = (j == k) ? t.frame.eps[static_cast<size_t>(j)] : 0.0;
                CHECK(dot == doctest::Approx(expect).epsilon(1e-12));
            }
    }
}

TEST_CASE("Levi-Civita metricity and first Bianchi at random points") {
    std::mt19937 rng(99);
    SampleOptions opt;
    opt.twist = TwistMode::Any;
    for (int trial = 0; trial < 12; ++trial) {
        SpaceSpec s = sample_space(rng, opt);
        auto pt = sample_point(rng, s);
        TensorAtPoint t = oracle_at(s, pt);
        const int n = s.total_dim();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double m = t.metric_jets(j, k).d(i);
                    for (int l = 0; l < n; ++l)
                        m -= t.conn(l, i, j) * t.metric(l, k) + t.conn(l, i, k) * t.metric(j, l);
                    CHECK(std::abs(m) < 1e-10);

                    for (int l = 0; l < n; ++l) {
                        double b = t.curv(l, i, j, k) + t.curv(l, j, k, i) + t.curv(l, k, i, j);
                        CHECK(std::abs(b) < 1e-10);
                        // antisymmetry in the first two slots
                        CHECK(t.curv(l, i, j, k) == doctest::Approx(-t.curv(l, j, i, k)).epsilon(1e-12));
                    }
                    // connection symmetric in the lower pair
                    CHECK(t.conn(k, i, j) == doctest::Approx(t.conn(k, j, i)));
                }
    }
}

TEST_CASE("base_calculus: Lorentzian interval signs") {
    SpaceSpec s = grw("exp(t)", FiberModel::circle());
    Expr f = parse_expr("exp(t)");
    double tt = 0.4;
    auto bc = base_calculus(s, {tt, 0.1}, f);
    double et = std::exp(tt);
    CHECK(bc.grad[0] == doctest::Approx(-et));          // grad_B f = -f' dt
    CHECK(bc.grad_norm_sq == doctest::Approx(-et * et)); // |grad|^2 = -e^{2t}
    CHECK(bc.laplacian == doctest::Approx(-et));         // Delta_B f = -f''

    SpaceSpec sr = grw("exp(t)", FiberModel::circle(), +1);
    auto bcr = base_calculus(sr, {tt, 0.1}, f);
    CHECK(bcr.laplacian == doctest::Approx(+et)); // Riemannian 1-d

    CHECK(base_divergence(s, {tt, 0.1}, {parse_expr("1")}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(base_calculus(s, {tt, 0.1}, parse_expr("u1")), std::domain_error);
}

TEST_CASE("base_calculus on a 2-d conformal patch is consistent with jets") {
    BaseModel base = BaseModel::conformal({-1, 1}, parse_expr("1 + 0.2*sin(x1)"));
    SpaceSpec s = SpaceSpec::make(base, {FiberModel::circle()}, {parse_expr("exp(x1)")});
    std::vector<double> pt = {0.3, -0.5, 0.2};
    Expr f = parse_expr("x1*x2 + cos(x2)");
    auto bc = base_calculus(s, pt, f);
    // Delta f = g^{ab} f_ab - g^{ab} Gamma^c_ab f_c ; cross-check the trace sign
    // against a hand-computed flat limit: with w -> 1 the metric is diag(-1,1).
    BaseModel flat = BaseModel::flat({-1, 1});
    SpaceSpec sf = SpaceSpec::make(flat, {FiberModel::circle()}, {parse_expr("exp(x1)")});
    auto bcf = base_calculus(sf, pt, f);
    // H_ab = f_ab here; Delta = (-1)*f_11 + (+1)*f_22 = -cos(x2)
    CHECK(bcf.laplacian == doctest::Approx(-std::cos(pt[1])).epsilon(1e-12));
    (void)bc;
}

TEST_CASE("compare_tensors reports, never raises") {
    std::vector<double> a = {1.0, 2.0, 3.0};
    std::vector<double> b = a;
    auto r = compare_tensors(a, b);
    CHECK(r.max_abs == 0.0);
    b[1] += 1e-3;
    r = compare_tensors(a, b);
    CHECK(r.max_abs == doctest::Approx(1e-3));
    CHECK(r.index == 1);
    CHECK_THROWS_AS(compare_tensors(a, std::vector<double>{1.0}), std::invalid_argument);
}
