#include "qsc/oracle.hpp"

#include <cmath>

namespace qsc {

// ---------------------------------------------------------------------------
// Metric assembly
// ---------------------------------------------------------------------------

JetMat base_metric_at(const SpaceSpec& spec, const std::vector<double>& point) {
    const int n = spec.total_dim();
    Env env = spec.chart_env(point);
    JetMat g(n);
    const BaseModel& b = spec.base;
    switch (b.kind) {
    case BaseKind::Interval:
    case BaseKind::FlatPatch:
        for (int i = 0; i < b.dim; ++i)
            g(i, i) = Jet2::constant(n, static_cast<double>(b.signature[static_cast<size_t>(i)]));
        break;
    case BaseKind::ConformalPatch: {
        Jet2 w = b.conformal_factor.eval(env);
        if (!(w.value() > 0.0)) throw SpecError("conformal factor non-positive at point");
        Jet2 w2 = w * w;
        for (int i = 0; i < b.dim; ++i)
            g(i, i) = w2 * static_cast<double>(b.signature[static_cast<size_t>(i)]);
        break;
    }
    }
    return g;
}

JetMat fiber_metric_at(const SpaceSpec& spec, int fiber, const std::vector<double>& point) {
    const int n = spec.total_dim();
    Env env = spec.chart_env(point);
    JetMat g(n);
    const FiberModel& f = spec.fibers[static_cast<size_t>(fiber)];
    Block blk = spec.fiber_block(fiber);
    switch (f.kind) {
    case FiberKind::Circle:
    case FiberKind::FlatTorus:
        for (int i = 0; i < blk.dim; ++i)
            g(blk.offset + i, blk.offset + i) = Jet2::constant(n, 1.0);
        break;
    case FiberKind::RoundSphere: {
        // Polar chart: g_kk = rho^2 prod_{j<k} sin^2(theta_j).
        Jet2 acc = Jet2::constant(n, f.radius * f.radius);
        auto names = fiber_coord_names(fiber, f.dim);
        for (int k = 0; k < blk.dim; ++k) {
            g(blk.offset + k, blk.offset + k) = acc;
            if (k + 1 < blk.dim) {
                Jet2 s = sin(env.at(names[static_cast<size_t>(k)]));
                acc = acc * s * s;
            }
        }
        break;
    }
    }
    return g;
}

JetMat metric_at(const SpaceSpec& spec, const std::vector<double>& point) {
    spec.check_point(point);
    Env env = spec.chart_env(point);
    JetMat g = base_metric_at(spec, point);
    for (int i = 0; i < spec.fiber_count(); ++i) {
        Jet2 b = spec.warping_at(i, env);
        Jet2 b2 = b * b;
        JetMat gf = fiber_metric_at(spec, i, point);
        Block blk = spec.fiber_block(i);
        for (int a = 0; a < blk.dim; ++a)
            for (int c = 0; c < blk.dim; ++c) {
                int ia = blk.offset + a, ic = blk.offset + c;
                g(ia, ic) = b2 * gf(ia, ic);
            }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Block-level linear algebra
// ---------------------------------------------------------------------------

Mat invert_metric(const Mat& g, Block blk) {
    const int m = blk.dim;
    // Gauss-Jordan on the block; dimensions stay tiny (<= 8).
    std::vector<double> a(static_cast<size_t>(m) * m), inv(static_cast<size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) {
        inv[static_cast<size_t>(i) * m + i] = 1.0;
        for (int j = 0; j < m; ++j) a[static_cast<size_t>(i) * m + j] = g(blk.offset + i, blk.offset + j);
    }
    for (int col = 0; col < m; ++col) {
        int piv = col;
        for (int r = col + 1; r < m; ++r)
            if (std::abs(a[static_cast<size_t>(r) * m + col]) >
                std::abs(a[static_cast<size_t>(piv) * m + col]))
                piv = r;
        if (std::abs(a[static_cast<size_t>(piv) * m + col]) < 1e-14)
            throw std::runtime_error("metric singular at point");
        if (piv != col)
            for (int j = 0; j < m; ++j) {
                std::swap(a[static_cast<size_t>(piv) * m + j], a[static_cast<size_t>(col) * m + j]);
                std::swap(inv[static_cast<size_t>(piv) * m + j], inv[static_cast<size_t>(col) * m + j]);
            }
        double d = a[static_cast<size_t>(col) * m + col];
        for (int j = 0; j < m; ++j) {
            a[static_cast<size_t>(col) * m + j] /= d;
            inv[static_cast<size_t>(col) * m + j] /= d;
        }
        for (int r = 0; r < m; ++r) {
            if (r == col) continue;
            double f = a[static_cast<size_t>(r) * m + col];
            if (f == 0.0) continue;
            for (int j = 0; j < m; ++j) {
                a[static_cast<size_t>(r) * m + j] -= f * a[static_cast<size_t>(col) * m + j];
                inv[static_cast<size_t>(r) * m + j] -= f * inv[static_cast<size_t>(col) * m + j];
            }
        }
    }
    Mat out(g.n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            out(blk.offset + i, blk.offset + j) = inv[static_cast<size_t>(i) * m + j];
    return out;
}

std::vector<Jet1> invert_metric_jets(const JetMat& g, Block blk) {
    const int n = g.n;
    Mat gv = g.values();
    Mat gi = invert_metric(gv, blk);
    // d_m ginv^{ab} = -ginv^{ac} (d_m g_{cd}) ginv^{db}
    std::vector<Jet1> out(static_cast<size_t>(n) * n, Jet1(n, 0.0));
    for (int a = 0; a < blk.dim; ++a)
        for (int b = 0; b < blk.dim; ++b) {
            int ia = blk.offset + a, ib = blk.offset + b;
            Jet1 e(n, gi(ia, ib));
            for (int m = 0; m < n; ++m) {
                double s = 0.0;
                for (int c = 0; c < blk.dim; ++c)
                    for (int d = 0; d < blk.dim; ++d) {
                        int ic = blk.offset + c, id = blk.offset + d;
                        s -= gi(ia, ic) * g(ic, id).d(m) * gi(id, ib);
                    }
                e.d(m) = s;
            }
            out[static_cast<size_t>(ia) * n + ib] = e;
        }
    return out;
}

ConnJets christoffels(const JetMat& g, Block blk) {
    const int n = g.n;
    ConnJets conn(n);
    std::vector<Jet1> gi = invert_metric_jets(g, blk);
    for (int k = 0; k < blk.dim; ++k)
        for (int i = 0; i < blk.dim; ++i)
            for (int j = i; j < blk.dim; ++j) {
                int ik = blk.offset + k, ii = blk.offset + i, ij = blk.offset + j;
                Jet1 sum(n, 0.0);
                for (int l = 0; l < blk.dim; ++l) {
                    int il = blk.offset + l;
                    Jet1 term = Jet1::partial(g(ij, il), ii) + Jet1::partial(g(ii, il), ij) -
                                Jet1::partial(g(ii, ij), il);
                    sum += gi[static_cast<size_t>(ik) * n + il] * term;
                }
                sum = sum * 0.5;
                conn(ik, ii, ij) = sum;
                conn(ik, ij, ii) = sum;
            }
    return conn;
}

Rank4 curvature_from_conn(const ConnJets& conn, Block blk) {
    const int n = conn.n;
    Rank4 R(n);
    for (int l = 0; l < blk.dim; ++l)
        for (int i = 0; i < blk.dim; ++i)
            for (int j = 0; j < blk.dim; ++j)
                for (int k = 0; k < blk.dim; ++k) {
                    int il = blk.offset + l, ii = blk.offset + i, ij = blk.offset + j,
                        ik = blk.offset + k;
                    double v = conn(il, ij, ik).d(ii) - conn(il, ii, ik).d(ij);
                    for (int m = 0; m < blk.dim; ++m) {
                        int im = blk.offset + m;
                        v += conn(il, ii, im).value() * conn(im, ij, ik).value() -
                             conn(il, ij, im).value() * conn(im, ii, ik).value();
                    }
                    R(il, ii, ij, ik) = v;
                }
    return R;
}

Frame frame_from_metric(const Mat& g, Block blk) {
    Frame fr;
    fr.n = g.n;
    fr.block = blk;
    fr.vectors = Mat(g.n);
    fr.eps.assign(static_cast<size_t>(blk.dim), 1.0);
    double scale = 1.0;
    for (int i = 0; i < blk.dim; ++i)
        scale = std::max(scale, std::abs(g(blk.offset + i, blk.offset + i)));
    for (int i = 0; i < blk.dim; ++i)
        for (int j = 0; j < blk.dim; ++j)
            if (i != j && std::abs(g(blk.offset + i, blk.offset + j)) > 1e-12 * scale)
                throw std::runtime_error("frame: metric not diagonal on block");
    for (int k = 0; k < blk.dim; ++k) {
        double gkk = g(blk.offset + k, blk.offset + k);
        if (gkk == 0.0) throw std::runtime_error("frame: degenerate metric entry");
        fr.eps[static_cast<size_t>(k)] = gkk > 0.0 ? 1.0 : -1.0;
        fr.vectors(k, blk.offset + k) = 1.0 / std::sqrt(std::abs(gkk));
    }
    return fr;
}

Mat ricci_paper(const Rank4& curv, const Frame& frame, const Mat& g) {
    const int n = g.n;
    const Block blk = frame.block;
    Mat ric(n);
    for (int a = 0; a < blk.dim; ++a)
        for (int b = 0; b < blk.dim; ++b) {
            int ia = blk.offset + a, ib = blk.offset + b;
            double sum = 0.0;
            for (int k = 0; k < blk.dim; ++k) {
                // <R(d_a, E_k) d_b, E_k> with E_k = frame row k
                for (int m = 0; m < blk.dim; ++m) {
                    int im = blk.offset + m;
                    double ekm = frame.vectors(k, im);
                    if (ekm == 0.0) continue;
                    for (int p = 0; p < blk.dim; ++p) {
                        int ip = blk.offset + p;
                        double ekp = frame.vectors(k, ip);
                        if (ekp == 0.0) continue;
                        for (int l = 0; l < blk.dim; ++l) {
                            int il = blk.offset + l;
                            double glp = g(il, ip);
                            if (glp == 0.0) continue;
                            sum += frame.eps[static_cast<size_t>(k)] * ekm * ekp * glp *
                                   curv(il, ia, im, ib);
                        }
                    }
                }
            }
            ric(ia, ib) = sum;
        }
    return ric;
}

double scalar_paper(const Mat& ricci, const Frame& frame) {
    const Block blk = frame.block;
    double s = 0.0;
    for (int k = 0; k < blk.dim; ++k)
        for (int a = 0; a < blk.dim; ++a)
            for (int b = 0; b < blk.dim; ++b) {
                int ia = blk.offset + a, ib = blk.offset + b;
                double ea = frame.vectors(k, ia), eb = frame.vectors(k, ib);
                if (ea == 0.0 || eb == 0.0) continue;
                s += frame.eps[static_cast<size_t>(k)] * ea * eb * ricci(ia, ib);
            }
    return s;
}

// ---------------------------------------------------------------------------
// Assembled oracle
// ---------------------------------------------------------------------------

TensorAtPoint levi_civita_at(const SpaceSpec& spec, const std::vector<double>& point) {
    TensorAtPoint t;
    t.point = point;
    t.metric_jets = metric_at(spec, point);
    t.metric = t.metric_jets.values();
    t.inverse_metric = invert_metric(t.metric, spec.full_block());
    t.conn_jets = christoffels(t.metric_jets, spec.full_block());
    t.conn = t.conn_jets.values();
    return t;
}

TensorAtPoint oracle_at(const SpaceSpec& spec, const std::vector<double>& point) {
    TensorAtPoint t = levi_civita_at(spec, point);
    Block blk = spec.full_block();
    t.curv = curvature_from_conn(t.conn_jets, blk);
    t.frame = frame_from_metric(t.metric, blk);
    t.ricci = ricci_paper(t.curv, t.frame, t.metric);
    t.scalar = scalar_paper(t.ricci, t.frame);
    return t;
}

// ---------------------------------------------------------------------------
// Base calculus
// ---------------------------------------------------------------------------

namespace {

void require_base_only(const SpaceSpec& spec, const Expr& f) {
    for (const auto& v : f.variables()) {
        bool base = false;
        for (const auto& c : spec.base.coords) base |= (v == c);
        if (!base) throw std::domain_error("base_calculus: scalar depends on '" + v + "'");
    }
}

} // namespace

BaseScalarCalculus base_calculus(const SpaceSpec& spec, const std::vector<double>& point,
                                 const Expr& scalar) {
    require_base_only(spec, scalar);
    const int n = spec.total_dim();
    Block blk = spec.base_block();
    Env env = spec.chart_env(point);
    Jet2 f = scalar.eval(env);

    JetMat gB = base_metric_at(spec, point);
    Mat gBv = gB.values();
    Mat gBi = invert_metric(gBv, blk);
    ConnJets connB = christoffels(gB, blk);

    BaseScalarCalculus out;
    out.grad.assign(static_cast<size_t>(n), 0.0);
    out.hessian = Mat(n);
    for (int a = 0; a < blk.dim; ++a) {
        double v = 0.0;
        for (int b = 0; b < blk.dim; ++b) v += gBi(a, b) * f.d(b);
        out.grad[static_cast<size_t>(a)] = v;
    }
    for (int a = 0; a < blk.dim; ++a)
        for (int b = 0; b < blk.dim; ++b) {
            double h = f.dd(a, b);
            for (int c = 0; c < blk.dim; ++c) h -= connB(c, a, b).value() * f.d(c);
            out.hessian(a, b) = h;
        }
    for (int a = 0; a < blk.dim; ++a)
        for (int b = 0; b < blk.dim; ++b) {
            out.grad_norm_sq += gBi(a, b) * f.d(a) * f.d(b);
            out.laplacian += gBi(a, b) * out.hessian(a, b);
        }
    return out;
}

double base_divergence(const SpaceSpec& spec, const std::vector<double>& point,
                       const std::vector<Expr>& components) {
    Block blk = spec.base_block();
    if (static_cast<int>(components.size()) != blk.dim)
        throw std::domain_error("base_divergence: one component per base coordinate");
    for (const auto& c : components) require_base_only(spec, c);
    Env env = spec.chart_env(point);
    JetMat gB = base_metric_at(spec, point);
    ConnJets connB = christoffels(gB, blk);
    // div P = d_a P^a + Gamma^a_{ab} P^b (eps signs arrive via the inverse metric
    // inside Gamma).
    double div = 0.0;
    for (int a = 0; a < blk.dim; ++a) {
        Jet2 Pa = components[static_cast<size_t>(a)].eval(env);
        div += Pa.d(a);
        for (int b = 0; b < blk.dim; ++b) {
            Jet2 Pb = components[static_cast<size_t>(b)].eval(env);
            div += connB(a, a, b).value() * Pb.value();
        }
    }
    return div;
}

} // namespace qsc
