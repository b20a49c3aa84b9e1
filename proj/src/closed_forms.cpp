#include "qsc/closed_forms.hpp"

#include <cmath>

namespace qsc::cf {

namespace {

/// Ingredient bundle at a point. Everything here comes from block-level
/// oracle calls (bare base, bare fibers) and warping jets; the full product
/// curvature tensor is never consulted.
struct Geom {
    const SpaceSpec& spec;
    const QscParams& params;
    std::vector<double> point;
    TraceReading reading = TraceReading::Signed;

    int n = 0;   // total dim
    int nB = 0;  // base dim
    int m = 0;   // fiber count

    JetMat g; // full scaled metric
    Mat gval;

    JetMat gB;
    Mat gBval, gBinv;
    ConnJets connB;
    Rank4 curvB;
    Mat ricB;
    double SB = 0.0;

    bool has_base_qsc = false; // P in TB: base restriction is again quarter-symmetric
    Rank4 curvBbar;
    Mat ricBbar;
    double SBbar = 0.0;

    struct FiberGeom {
        JetMat gF; // unscaled
        Mat gFval, gFinv;
        ConnJets connF;
        Rank4 curvF;
        Mat ricF;
        double SF = 0.0;
    };
    std::vector<FiberGeom> fib;

    std::vector<Jet2> b;   // warpings
    std::vector<Jet2> lnb;

    std::vector<Jet1> Pj;
    std::vector<double> Pval, piv;
    double piP = 0.0;
    Mat np; // ambient (nabla_i P)^k
    double divBP = 0.0;
    double divFrP = 0.0;

    Geom(const SpaceSpec& s, const QscParams& q, const std::vector<double>& pt,
         TraceReading rd)
        : spec(s), params(q), point(pt), reading(rd) {
        n = spec.total_dim();
        nB = spec.base_dim();
        m = spec.fiber_count();

        g = metric_at(spec, point);
        gval = g.values();

        Block bb = spec.base_block();
        gB = base_metric_at(spec, point);
        gBval = gB.values();
        gBinv = invert_metric(gBval, bb);
        connB = christoffels(gB, bb);
        curvB = curvature_from_conn(connB, bb);
        Frame frB = frame_from_metric(gBval, bb);
        ricB = ricci_paper(curvB, frB, gBval);
        SB = scalar_paper(ricB, frB);

        fib.resize(static_cast<size_t>(m));
        Env env = spec.chart_env(point);
        for (int i = 0; i < m; ++i) {
            Block fb = spec.fiber_block(i);
            FiberGeom& f = fib[static_cast<size_t>(i)];
            f.gF = fiber_metric_at(spec, i, point);
            f.gFval = f.gF.values();
            f.gFinv = invert_metric(f.gFval, fb);
            f.connF = christoffels(f.gF, fb);
            f.curvF = curvature_from_conn(f.connF, fb);
            Frame frF = frame_from_metric(f.gFval, fb);
            f.ricF = ricci_paper(f.curvF, frF, f.gFval);
            f.SF = scalar_paper(f.ricF, frF);

            b.push_back(spec.warping_at(i, env));
            lnb.push_back(log(b.back()));
        }

        Pj = p_field_jets(spec, params, point);
        Pval.assign(static_cast<size_t>(n), 0.0);
        piv.assign(static_cast<size_t>(n), 0.0);
        for (int a = 0; a < n; ++a) Pval[static_cast<size_t>(a)] = Pj[static_cast<size_t>(a)].value();
        for (int a = 0; a < n; ++a) {
            double s2 = 0.0;
            for (int c = 0; c < n; ++c) s2 += gval(a, c) * Pval[static_cast<size_t>(c)];
            piv[static_cast<size_t>(a)] = s2;
        }
        for (int a = 0; a < n; ++a) piP += piv[static_cast<size_t>(a)] * Pval[static_cast<size_t>(a)];

        TensorAtPoint lc = levi_civita_at(spec, point);
        np = nabla_p(spec, params, point, lc);

        if (params.p.where == PField::Where::Base) {
            divBP = 0.0;
            for (int a = 0; a < nB; ++a) {
                divBP += Pj[static_cast<size_t>(a)].d(a);
                for (int c = 0; c < nB; ++c)
                    divBP += connB(a, a, c).value() * Pval[static_cast<size_t>(c)];
            }
            // Base restriction of the connection: quarter-symmetric on (B, g_B).
            has_base_qsc = true;
            ConnJets cb = connB;
            for (int k = 0; k < nB; ++k)
                for (int i = 0; i < nB; ++i)
                    for (int j = 0; j < nB; ++j) {
                        Jet1 v = cb(k, i, j);
                        if (k == i) {
                            Jet1 pij(n, 0.0);
                            for (int l = 0; l < nB; ++l)
                                pij += Jet1::from(gB(j, l)) * Pj[static_cast<size_t>(l)];
                            v += params.lambda1 * pij;
                        }
                        v -= params.lambda2 * (Jet1::from(gB(i, j)) * Pj[static_cast<size_t>(k)]);
                        cb(k, i, j) = v;
                    }
            curvBbar = curvature_from_conn(cb, bb);
            ricBbar = ricci_paper(curvBbar, frame_from_metric(gBval, bb), gBval);
            SBbar = scalar_paper(ricBbar, frame_from_metric(gBval, bb));
        } else if (params.p.where == PField::Where::Fiber) {
            int r = params.p.fiber_index;
            Block fb = spec.fiber_block(r);
            const FiberGeom& f = fib[static_cast<size_t>(r)];
            divFrP = 0.0;
            for (int a = fb.offset; a < fb.offset + fb.dim; ++a) {
                divFrP += Pj[static_cast<size_t>(a)].d(a);
                for (int c = fb.offset; c < fb.offset + fb.dim; ++c)
                    divFrP += f.connF(a, a, c).value() * Pval[static_cast<size_t>(c)];
            }
        }
        if (!has_base_qsc) {
            // With P off the base the tangential restriction is Levi-Civita.
            curvBbar = curvB;
            ricBbar = ricB;
            SBbar = SB;
        }
    }

    int li(int i) const { return spec.fibers[static_cast<size_t>(i)].dim; }
    double bv(int i) const { return b[static_cast<size_t>(i)].value(); }
    double db(int i, int a) const { return b[static_cast<size_t>(i)].d(a); }
    double Xlnb(int i, int a) const { return lnb[static_cast<size_t>(i)].d(a); }
    double ddlnb(int i, int x, int y) const { return lnb[static_cast<size_t>(i)].dd(x, y); }

    double H_B(int i, int a, int c) const {
        double h = b[static_cast<size_t>(i)].dd(a, c);
        for (int e = 0; e < nB; ++e) h -= connB(e, a, c).value() * db(i, e);
        return h;
    }
    double wB(int a, int c) const {
        double v = gBinv(a, c);
        return reading == TraceReading::Unsigned ? std::abs(v) : v;
    }
    double lapB(int i) const {
        double s = 0.0;
        for (int a = 0; a < nB; ++a)
            for (int c = 0; c < nB; ++c) s += wB(a, c) * H_B(i, a, c);
        return s;
    }
    double gradBsq(int i) const {
        double s = 0.0;
        for (int a = 0; a < nB; ++a)
            for (int c = 0; c < nB; ++c) s += wB(a, c) * db(i, a) * db(i, c);
        return s;
    }
    double gradB_dot(int i, int s2) const {
        double s = 0.0;
        for (int a = 0; a < nB; ++a)
            for (int c = 0; c < nB; ++c) s += wB(a, c) * db(i, a) * db(s2, c);
        return s;
    }
    /// Contravariant base gradient of scalar h given its jet.
    double gradB_comp(const Jet2& h, int a) const {
        double s = 0.0;
        for (int c = 0; c < nB; ++c) s += gBinv(a, c) * h.d(c);
        return s;
    }
    /// (nabla^B_a grad_B b_i)^c = g_B^{cm} H_B(i, a, m).
    double nablaB_grad(int i, int a, int c) const {
        double s = 0.0;
        for (int mm = 0; mm < nB; ++mm) s += gBinv(c, mm) * H_B(i, a, mm);
        return s;
    }
    double Pb(int i) const {
        double s = 0.0;
        for (int a = 0; a < n; ++a) s += Pval[static_cast<size_t>(a)] * db(i, a);
        return s;
    }
    /// g(d_y, nabla_x P)
    double gnp(int x, int y) const {
        double s = 0.0;
        for (int mm = 0; mm < n; ++mm) s += gval(y, mm) * np(x, mm);
        return s;
    }
};

std::string pid(const Geom& G, const char* singly, const char* multiply) {
    bool any_twisted = false;
    for (bool t : G.spec.twisted) any_twisted |= t;
    bool is_singly = (G.m == 1) && !any_twisted;
    return std::string("P") + (is_singly ? singly : multiply);
}

int nbar_of(const Geom& G) {
    int s = G.nB;
    for (int i = 0; i < G.m; ++i) s += G.li(i);
    return s;
}

// ---------------------------------------------------------------------------
// Connection catalog
// ---------------------------------------------------------------------------

CFVector conn_p_base(const Geom& G, BasisSlot A, BasisSlot B) {
    const SpaceSpec& spec = G.spec;
    const double l1 = G.params.lambda1, l2 = G.params.lambda2;
    const int n = G.n;
    CFVector out;
    out.components.assign(static_cast<size_t>(n), 0.0);
    auto& c = out.components;

    if (A.is_base() && B.is_base()) {
        int a = A.chart_index(spec), bb = B.chart_index(spec);
        for (int k = 0; k < G.nB; ++k) {
            c[static_cast<size_t>(k)] = G.connB(k, a, bb).value();
            if (k == a) c[static_cast<size_t>(k)] += l1 * G.piv[static_cast<size_t>(bb)];
            c[static_cast<size_t>(k)] -= l2 * G.gBval(a, bb) * G.Pval[static_cast<size_t>(k)];
        }
        out.formula_id = pid(G, "3.1(1)", "4.1(1)");
        return out;
    }
    if (A.is_base() && !B.is_base()) {
        int a = A.chart_index(spec), u = B.chart_index(spec);
        c[static_cast<size_t>(u)] = G.Xlnb(B.fib, a);
        out.formula_id = pid(G, "3.1(2)", "4.1(2)");
        return out;
    }
    if (!A.is_base() && B.is_base()) {
        int u = A.chart_index(spec), a = B.chart_index(spec);
        c[static_cast<size_t>(u)] = G.Xlnb(A.fib, a) + l1 * G.piv[static_cast<size_t>(a)];
        out.formula_id = pid(G, "3.1(3)", "4.1(3)");
        return out;
    }
    // both fiber
    if (A.fib != B.fib) {
        out.formula_id = pid(G, "4.1(4)", "4.1(4)");
        return out; // zero
    }
    const int i = A.fib;
    int u = A.chart_index(spec), w = B.chart_index(spec);
    Block fb = spec.fiber_block(i);
    const auto& f = G.fib[static_cast<size_t>(i)];
    double gFuw = f.gFval(u, w);
    c[static_cast<size_t>(w)] += G.lnb[static_cast<size_t>(i)].d(u);
    c[static_cast<size_t>(u)] += G.lnb[static_cast<size_t>(i)].d(w);
    for (int x = fb.offset; x < fb.offset + fb.dim; ++x) {
        double gradF = 0.0;
        for (int y = fb.offset; y < fb.offset + fb.dim; ++y)
            gradF += f.gFinv(x, y) * G.b[static_cast<size_t>(i)].d(y);
        c[static_cast<size_t>(x)] -= gFuw / G.bv(i) * gradF;
        c[static_cast<size_t>(x)] += f.connF(x, u, w).value();
    }
    for (int a = 0; a < G.nB; ++a)
        c[static_cast<size_t>(a)] -= G.bv(i) * gFuw * G.gradB_comp(G.b[static_cast<size_t>(i)], a);
    for (int k = 0; k < n; ++k)
        c[static_cast<size_t>(k)] -= l2 * G.gval(u, w) * G.Pval[static_cast<size_t>(k)];
    out.formula_id = pid(G, "3.1(4)", "4.1(5)");
    return out;
}

CFVector conn_p_fiber(const Geom& G, BasisSlot A, BasisSlot B) {
    const SpaceSpec& spec = G.spec;
    const double l1 = G.params.lambda1, l2 = G.params.lambda2;
    const int n = G.n;
    CFVector out;
    out.components.assign(static_cast<size_t>(n), 0.0);
    auto& c = out.components;

    if (A.is_base() && B.is_base()) {
        int a = A.chart_index(spec), bb = B.chart_index(spec);
        for (int k = 0; k < G.nB; ++k) c[static_cast<size_t>(k)] = G.connB(k, a, bb).value();
        for (int k = 0; k < n; ++k)
            c[static_cast<size_t>(k)] -= l2 * G.gBval(a, bb) * G.Pval[static_cast<size_t>(k)];
        out.formula_id = pid(G, "3.2(1)", "4.2(1)");
        return out;
    }
    if (A.is_base() && !B.is_base()) {
        int a = A.chart_index(spec), u = B.chart_index(spec);
        c[static_cast<size_t>(u)] += G.Xlnb(B.fib, a);
        c[static_cast<size_t>(a)] += l1 * G.piv[static_cast<size_t>(u)];
        out.formula_id = pid(G, "3.2(2)", "4.2(2)");
        return out;
    }
    if (!A.is_base() && B.is_base()) {
        int u = A.chart_index(spec), a = B.chart_index(spec);
        c[static_cast<size_t>(u)] = G.Xlnb(A.fib, a);
        out.formula_id = pid(G, "3.2(3)", "4.2(3)");
        return out;
    }
    if (A.fib != B.fib) {
        int u = A.chart_index(spec), w = B.chart_index(spec);
        c[static_cast<size_t>(u)] = l1 * G.piv[static_cast<size_t>(w)];
        out.formula_id = pid(G, "4.2(4)", "4.2(4)");
        return out;
    }
    const int i = A.fib;
    int u = A.chart_index(spec), w = B.chart_index(spec);
    Block fb = spec.fiber_block(i);
    const auto& f = G.fib[static_cast<size_t>(i)];
    double gFuw = f.gFval(u, w);
    c[static_cast<size_t>(w)] += G.lnb[static_cast<size_t>(i)].d(u);
    c[static_cast<size_t>(u)] += G.lnb[static_cast<size_t>(i)].d(w);
    for (int x = fb.offset; x < fb.offset + fb.dim; ++x) {
        double gradF = 0.0;
        for (int y = fb.offset; y < fb.offset + fb.dim; ++y)
            gradF += f.gFinv(x, y) * G.b[static_cast<size_t>(i)].d(y);
        c[static_cast<size_t>(x)] -= gFuw / G.bv(i) * gradF;
        c[static_cast<size_t>(x)] += f.connF(x, u, w).value();
    }
    for (int a = 0; a < G.nB; ++a)
        c[static_cast<size_t>(a)] -= G.bv(i) * gFuw * G.gradB_comp(G.b[static_cast<size_t>(i)], a);
    // The fiber's own quarter-symmetric part, written with the induced metric:
    // lambda1 pi(W) U - lambda2 g(U,W) P  (pi vanishes off fiber r).
    c[static_cast<size_t>(u)] += l1 * G.piv[static_cast<size_t>(w)];
    for (int k = 0; k < n; ++k)
        c[static_cast<size_t>(k)] -= l2 * G.gval(u, w) * G.Pval[static_cast<size_t>(k)];
    out.formula_id = pid(G, "3.2(4)", "4.2(5)");
    return out;
}

// ---------------------------------------------------------------------------
// Curvature catalog
// ---------------------------------------------------------------------------

struct CurvKey {
    // slot classification relative to (base / fiber index)
    BasisSlot A, B, C;
};

CFVector curv_p_base(const Geom& G, BasisSlot A, BasisSlot B, BasisSlot C);

CFVector curv_swap(const Geom& G, BasisSlot A, BasisSlot B, BasisSlot C,
                   CFVector (*eval)(const Geom&, BasisSlot, BasisSlot, BasisSlot)) {
    CFVector r = eval(G, B, A, C);
    for (auto& x : r.components) x = -x;
    r.note = "via antisymmetry of the first two slots";
    return r;
}

CFVector curv_p_base(const Geom& G, BasisSlot A, BasisSlot B, BasisSlot C) {
    const SpaceSpec& spec = G.spec;
    const double l1 = G.params.lambda1, l2 = G.params.lambda2;
    const int n = G.n;
    CFVector out;
    out.components.assign(static_cast<size_t>(n), 0.0);
    auto& c = out.components;

    const bool aB = A.is_base(), bB = B.is_base(), cB = C.is_base();

    if (aB && bB && cB) {
        int a = A.chart_index(spec), bb = B.chart_index(spec), cc = C.chart_index(spec);
        for (int k = 0; k < G.nB; ++k) c[static_cast<size_t>(k)] = G.curvBbar(k, a, bb, cc);
        out.formula_id = pid(G, "3.3(1)", "4.3(1)");
        return out;
    }
    if (!aB && bB && cB) { // R(V, X) Y
        int v = A.chart_index(spec), a = B.chart_index(spec), bb = C.chart_index(spec);
        int i = A.fib;
        double s = G.H_B(i, a, bb) / G.bv(i) + l2 * (G.Pb(i) / G.bv(i)) * G.gval(a, bb) +
                   l1 * l2 * G.piP * G.gval(a, bb) + l1 * G.gnp(a, bb) -
                   l1 * l1 * G.piv[static_cast<size_t>(a)] * G.piv[static_cast<size_t>(bb)];
        c[static_cast<size_t>(v)] = -s;
        out.formula_id = pid(G, "3.3(2)", "4.3(2)");
        return out;
    }
    if (aB && !bB && cB) return curv_swap(G, A, B, C, &curv_p_base);
    if (aB && bB && !cB) {
        out.formula_id = pid(G, "3.3(3)", "4.3(3)");
        return out; // zero
    }
    if (!aB && !bB && cB) { // R(V, W) X
        if (A.fib == B.fib) {
            int v = A.chart_index(spec), w = B.chart_index(spec), a = C.chart_index(spec);
            c[static_cast<size_t>(w)] += G.ddlnb(A.fib, v, a);
            c[static_cast<size_t>(v)] -= G.ddlnb(A.fib, w, a);
            out.formula_id = pid(G, "3.3(4)", "4.3(4)");
            return out;
        }
        out.formula_id = pid(G, "4.3(6)", "4.3(6)");
        return out; // zero
    }
    if (aB && !bB && !cB) { // R(X, V) W
        int a = A.chart_index(spec), v = B.chart_index(spec), w = C.chart_index(spec);
        if (B.fib != C.fib) {
            out.formula_id = pid(G, "4.3(6)", "4.3(6)");
            return out; // zero
        }
        const int i = B.fib;
        Block fb = spec.fiber_block(i);
        const auto& f = G.fib[static_cast<size_t>(i)];
        c[static_cast<size_t>(v)] += G.ddlnb(i, w, a);
        std::vector<double> brack(static_cast<size_t>(n), 0.0);
        for (int cc = 0; cc < G.nB; ++cc)
            brack[static_cast<size_t>(cc)] += G.nablaB_grad(i, a, cc) / G.bv(i);
        for (int x = fb.offset; x < fb.offset + fb.dim; ++x) {
            double gradF = 0.0;
            for (int y = fb.offset; y < fb.offset + fb.dim; ++y)
                gradF += f.gFinv(x, y) * G.lnb[static_cast<size_t>(i)].dd(a, y);
            brack[static_cast<size_t>(x)] += gradF / (G.bv(i) * G.bv(i));
        }
        brack[static_cast<size_t>(a)] += l1 * G.Pb(i) / G.bv(i) + l1 * l2 * G.piP;
        for (int k = 0; k < n; ++k) {
            brack[static_cast<size_t>(k)] += l2 * G.np(a, k);
            brack[static_cast<size_t>(k)] -= l2 * l2 * G.piv[static_cast<size_t>(a)] *
                                             G.Pval[static_cast<size_t>(k)];
        }
        for (int k = 0; k < n; ++k)
            c[static_cast<size_t>(k)] -= G.gval(v, w) * brack[static_cast<size_t>(k)];
        out.formula_id = pid(G, "3.3(5)", "4.3(7)");
        return out;
    }
    if (!aB && bB && !cB) return curv_swap(G, A, B, C, &curv_p_base);

    // all fiber slots
    const int i = A.fib, j = B.fib, k3 = C.fib;
    if (i == j && j == k3) {
        int u = A.chart_index(spec), v = B.chart_index(spec), w = C.chart_index(spec);
        const auto& f = G.fib[static_cast<size_t>(i)];
        for (int a = 0; a < G.nB; ++a) {
            double gv = 0.0, gu = 0.0;
            for (int cc = 0; cc < G.nB; ++cc) {
                gv += G.gBinv(a, cc) * G.lnb[static_cast<size_t>(i)].dd(v, cc);
                gu += G.gBinv(a, cc) * G.lnb[static_cast<size_t>(i)].dd(u, cc);
            }
            c[static_cast<size_t>(a)] += G.gval(u, w) * gv - G.gval(v, w) * gu;
        }
        Block fb = spec.fiber_block(i);
        for (int x = fb.offset; x < fb.offset + fb.dim; ++x)
            c[static_cast<size_t>(x)] += f.curvF(x, u, v, w);
        double s = G.gradBsq(i) / (G.bv(i) * G.bv(i)) + (l1 + l2) * G.Pb(i) / G.bv(i) +
                   l1 * l2 * G.piP;
        c[static_cast<size_t>(u)] -= s * G.gval(v, w);
        c[static_cast<size_t>(v)] += s * G.gval(u, w);
        out.formula_id = pid(G, "3.3(6)", "4.3(9)");
        return out;
    }
    if (i != j && j == k3) { // R(U, V) W with U on another fiber
        int u = A.chart_index(spec), v = B.chart_index(spec), w = C.chart_index(spec);
        double s = G.gradB_dot(j, i) / (G.bv(j) * G.bv(i)) + l1 * G.Pb(j) / G.bv(j) +
                   l2 * G.Pb(i) / G.bv(i) + l1 * l2 * G.piP;
        c[static_cast<size_t>(u)] = -G.gval(v, w) * s;
        out.formula_id = pid(G, "4.3(8)", "4.3(8)");
        return out;
    }
    if (i == k3 && i != j) return curv_swap(G, A, B, C, &curv_p_base);
    out.formula_id = pid(G, "4.3(5)", "4.3(5)");
    return out; // zero: i = j != k or all distinct
}

CFVector curv_p_fiber(const Geom& G, BasisSlot A, BasisSlot B, BasisSlot C);

CFVector curv_p_fiber(const Geom& G, BasisSlot A, BasisSlot B, BasisSlot C) {
    const SpaceSpec& spec = G.spec;
    const double l1 = G.params.lambda1, l2 = G.params.lambda2;
    const int n = G.n;
    const int r = G.params.p.fiber_index;
    CFVector out;
    out.components.assign(static_cast<size_t>(n), 0.0);
    auto& c = out.components;

    const bool aB = A.is_base(), bB = B.is_base(), cB = C.is_base();

    if (aB && bB && cB) {
        int a = A.chart_index(spec), bb = B.chart_index(spec), cc = C.chart_index(spec);
        for (int k = 0; k < G.nB; ++k) c[static_cast<size_t>(k)] = G.curvB(k, a, bb, cc);
        double coef = l2 * (G.gval(a, cc) * G.Xlnb(r, bb) - G.gval(bb, cc) * G.Xlnb(r, a));
        for (int k = 0; k < n; ++k) c[static_cast<size_t>(k)] += coef * G.Pval[static_cast<size_t>(k)];
        c[static_cast<size_t>(bb)] += l1 * l2 * G.piP * G.gval(a, cc);
        c[static_cast<size_t>(a)] -= l1 * l2 * G.piP * G.gval(bb, cc);
        out.formula_id = pid(G, "3.4(1)", "4.4(1)");
        return out;
    }
    if (!aB && bB && cB) { // R(V, X) Y
        int v = A.chart_index(spec), a = B.chart_index(spec), bb = C.chart_index(spec);
        int i = A.fib;
        if (i != r) {
            c[static_cast<size_t>(v)] =
                -(G.H_B(i, a, bb) / G.bv(i) + l1 * l2 * G.piP * G.gval(a, bb));
            out.formula_id = pid(G, "4.4(2)", "4.4(2)");
            return out;
        }
        c[static_cast<size_t>(v)] -= G.H_B(i, a, bb) / G.bv(i);
        c[static_cast<size_t>(a)] -= l1 * G.piv[static_cast<size_t>(v)] * G.Xlnb(i, bb);
        for (int k = 0; k < n; ++k)
            c[static_cast<size_t>(k)] -= l2 * G.gval(a, bb) * G.np(v, k);
        c[static_cast<size_t>(v)] -= l1 * l2 * G.piP * G.gval(a, bb);
        for (int k = 0; k < n; ++k)
            c[static_cast<size_t>(k)] += l2 * l2 * G.piv[static_cast<size_t>(v)] * G.gval(a, bb) *
                                         G.Pval[static_cast<size_t>(k)];
        out.formula_id = pid(G, "3.4(2)", "4.4(3)");
        return out;
    }
    if (aB && !bB && cB) return curv_swap(G, A, B, C, &curv_p_fiber);
    if (aB && bB && !cB) { // R(X, Y) V
        int a = A.chart_index(spec), bb = B.chart_index(spec), v = C.chart_index(spec);
        double pv = G.piv[static_cast<size_t>(v)];
        c[static_cast<size_t>(bb)] += l1 * pv * G.Xlnb(r, a);
        c[static_cast<size_t>(a)] -= l1 * pv * G.Xlnb(r, bb);
        out.formula_id = pid(G, "3.4(3)", "4.4(4)");
        return out;
    }
    if (!aB && !bB && cB) { // R(V, W) X
        int v = A.chart_index(spec), w = B.chart_index(spec), a = C.chart_index(spec);
        int i = A.fib, j = B.fib;
        if (i != j) {
            if (i == r)
                c[static_cast<size_t>(w)] -= l1 * G.Xlnb(i, a) * G.piv[static_cast<size_t>(v)];
            if (j == r)
                c[static_cast<size_t>(v)] += l1 * G.Xlnb(j, a) * G.piv[static_cast<size_t>(w)];
            out.formula_id = pid(G, "4.4(5)", "4.4(5)");
            return out;
        }
        c[static_cast<size_t>(w)] += G.ddlnb(i, v, a);
        c[static_cast<size_t>(v)] -= G.ddlnb(i, w, a);
        if (i == r) {
            c[static_cast<size_t>(w)] -= l1 * G.Xlnb(i, a) * G.piv[static_cast<size_t>(v)];
            c[static_cast<size_t>(v)] += l1 * G.Xlnb(i, a) * G.piv[static_cast<size_t>(w)];
        }
        out.formula_id = pid(G, "3.4(4)", "4.4(6)");
        return out;
    }
    if (aB && !bB && !cB) { // R(X, V) W
        int a = A.chart_index(spec), v = B.chart_index(spec), w = C.chart_index(spec);
        int i = B.fib, j = C.fib;
        if (i != j) {
            c[static_cast<size_t>(v)] = l1 * G.Xlnb(r, a) * G.piv[static_cast<size_t>(w)];
            out.formula_id = pid(G, "4.4(8)", "4.4(8)");
            return out;
        }
        Block fb = spec.fiber_block(i);
        const auto& f = G.fib[static_cast<size_t>(i)];
        c[static_cast<size_t>(v)] += G.ddlnb(i, w, a);
        for (int cc = 0; cc < G.nB; ++cc)
            c[static_cast<size_t>(cc)] -= G.gval(v, w) * G.nablaB_grad(i, a, cc) / G.bv(i);
        for (int x = fb.offset; x < fb.offset + fb.dim; ++x) {
            double gradF = 0.0;
            for (int y = fb.offset; y < fb.offset + fb.dim; ++y)
                gradF += f.gFinv(x, y) * G.lnb[static_cast<size_t>(i)].dd(a, y);
            c[static_cast<size_t>(x)] -= f.gFval(v, w) * gradF;
        }
        c[static_cast<size_t>(v)] += l1 * G.Xlnb(r, a) * G.piv[static_cast<size_t>(w)];
        c[static_cast<size_t>(a)] -= l1 * G.gnp(v, w);
        for (int k = 0; k < n; ++k)
            c[static_cast<size_t>(k)] -= l2 * G.gval(v, w) * G.Xlnb(r, a) * G.Pval[static_cast<size_t>(k)];
        c[static_cast<size_t>(a)] -= l1 * l2 * G.gval(v, w) * G.piP;
        c[static_cast<size_t>(a)] +=
            l1 * l1 * G.piv[static_cast<size_t>(w)] * G.piv[static_cast<size_t>(v)];
        out.formula_id = pid(G, "3.4(5)", "4.4(9)");
        return out;
    }
    if (!aB && bB && !cB) return curv_swap(G, A, B, C, &curv_p_fiber);

    const int i = A.fib, j = B.fib, k3 = C.fib;
    if (i == j && j == k3) {
        int u = A.chart_index(spec), v = B.chart_index(spec), w = C.chart_index(spec);
        const auto& f = G.fib[static_cast<size_t>(i)];
        for (int a = 0; a < G.nB; ++a) {
            double gv = 0.0, gu = 0.0;
            for (int cc = 0; cc < G.nB; ++cc) {
                gv += G.gBinv(a, cc) * G.lnb[static_cast<size_t>(i)].dd(v, cc);
                gu += G.gBinv(a, cc) * G.lnb[static_cast<size_t>(i)].dd(u, cc);
            }
            c[static_cast<size_t>(a)] += G.gval(u, w) * gv - G.gval(v, w) * gu;
        }
        Block fb = spec.fiber_block(i);
        for (int x = fb.offset; x < fb.offset + fb.dim; ++x)
            c[static_cast<size_t>(x)] += f.curvF(x, u, v, w);
        double s0 = G.gradBsq(i) / (G.bv(i) * G.bv(i));
        c[static_cast<size_t>(u)] -= s0 * G.gval(v, w);
        c[static_cast<size_t>(v)] += s0 * G.gval(u, w);
        c[static_cast<size_t>(v)] += l1 * l2 * G.piP * G.gval(u, w);
        c[static_cast<size_t>(u)] -= l1 * l2 * G.piP * G.gval(v, w);
        if (i == r) {
            c[static_cast<size_t>(v)] += l1 * G.gnp(u, w);
            c[static_cast<size_t>(u)] -= l1 * G.gnp(v, w);
            for (int k = 0; k < n; ++k) {
                c[static_cast<size_t>(k)] += l2 * (G.gval(u, w) * G.np(v, k) - G.gval(v, w) * G.np(u, k));
                c[static_cast<size_t>(k)] += l2 * l2 *
                                             (G.gval(v, w) * G.piv[static_cast<size_t>(u)] -
                                              G.gval(u, w) * G.piv[static_cast<size_t>(v)]) *
                                             G.Pval[static_cast<size_t>(k)];
            }
            c[static_cast<size_t>(u)] +=
                l1 * l1 * G.piv[static_cast<size_t>(w)] * G.piv[static_cast<size_t>(v)];
            c[static_cast<size_t>(v)] -=
                l1 * l1 * G.piv[static_cast<size_t>(w)] * G.piv[static_cast<size_t>(u)];
            out.formula_id = pid(G, "3.4(6)", "4.4(12)");
        } else {
            out.formula_id = pid(G, "4.4(11)", "4.4(11)");
        }
        return out;
    }
    if (i != j && j == k3) { // R(U, V) W, U on another fiber
        int u = A.chart_index(spec), v = B.chart_index(spec), w = C.chart_index(spec);
        c[static_cast<size_t>(u)] -= G.gval(v, w) * G.gradB_dot(j, i) / (G.bv(j) * G.bv(i));
        c[static_cast<size_t>(u)] -= l1 * G.gnp(v, w);
        for (int k = 0; k < n; ++k) c[static_cast<size_t>(k)] -= l2 * G.gval(v, w) * G.np(u, k);
        c[static_cast<size_t>(u)] -= l1 * l2 * G.piP * G.gval(v, w);
        for (int k = 0; k < n; ++k)
            c[static_cast<size_t>(k)] += l2 * l2 * G.gval(v, w) * G.piv[static_cast<size_t>(u)] *
                                         G.Pval[static_cast<size_t>(k)];
        c[static_cast<size_t>(u)] += l1 * l1 * G.piv[static_cast<size_t>(w)] * G.piv[static_cast<size_t>(v)];
        c[static_cast<size_t>(v)] -= l1 * l1 * G.piv[static_cast<size_t>(w)] * G.piv[static_cast<size_t>(u)];
        out.formula_id = pid(G, "4.4(10)", "4.4(10)");
        return out;
    }
    if (i == k3 && i != j) return curv_swap(G, A, B, C, &curv_p_fiber);
    out.formula_id = pid(G, "4.4(7)", "4.4(7)");
    return out; // zero
}

// ---------------------------------------------------------------------------
// Ricci catalog
// ---------------------------------------------------------------------------

CFScalar ricci_p_base(const Geom& G, BasisSlot A, BasisSlot B) {
    const SpaceSpec& spec = G.spec;
    const double l1 = G.params.lambda1, l2 = G.params.lambda2;
    const int nbar = nbar_of(G);
    CFScalar out;

    if (A.is_base() && B.is_base()) {
        int a = A.chart_index(spec), bb = B.chart_index(spec);
        double v = G.ricBbar(a, bb);
        for (int i = 0; i < G.m; ++i)
            v += G.li(i) * (G.H_B(i, a, bb) / G.bv(i) + l2 * (G.Pb(i) / G.bv(i)) * G.gval(a, bb) +
                            l1 * l2 * G.piP * G.gval(a, bb) + l1 * G.gnp(a, bb) -
                            l1 * l1 * G.piv[static_cast<size_t>(a)] * G.piv[static_cast<size_t>(bb)]);
        out.value = v;
        out.formula_id = pid(G, "3.5(1)", "4.5(1)");
        return out;
    }
    if (A.is_base() != B.is_base()) {
        BasisSlot bs = A.is_base() ? A : B;
        BasisSlot fs = A.is_base() ? B : A;
        int a = bs.chart_index(spec), v = fs.chart_index(spec);
        out.value = (G.li(fs.fib) - 1) * G.ddlnb(fs.fib, v, a);
        out.formula_id = pid(G, "3.5(2)", "4.5(2)");
        return out;
    }
    if (A.fib != B.fib) {
        out.value = 0.0;
        out.formula_id = pid(G, "4.5(3a)", "4.5(3a)");
        return out;
    }
    const int i = A.fib;
    int v = A.chart_index(spec), w = B.chart_index(spec);
    double brace = G.lapB(i) / G.bv(i) + (G.li(i) - 1) * G.gradBsq(i) / (G.bv(i) * G.bv(i));
    for (int s = 0; s < G.m; ++s)
        if (s != i) brace += G.li(s) * G.gradB_dot(i, s) / (G.bv(i) * G.bv(s));
    brace += ((nbar - 1) * l1 * l2 - l2 * l2) * G.piP + l2 * G.divBP;
    for (int s = 0; s < G.m; ++s)
        if (s != i) brace += l2 * G.li(s) * G.Pb(s) / G.bv(s);
    brace += ((nbar - 1) * l1 + (G.li(i) - 1) * l2) * G.Pb(i) / G.bv(i);
    out.value = G.fib[static_cast<size_t>(i)].ricF(v, w) + brace * G.gval(v, w);
    out.formula_id = pid(G, "3.5(3)", "4.5(3b)");
    return out;
}

CFScalar ricci_p_fiber(const Geom& G, BasisSlot A, BasisSlot B) {
    const SpaceSpec& spec = G.spec;
    const double l1 = G.params.lambda1, l2 = G.params.lambda2;
    const int nbar = nbar_of(G);
    const int r = G.params.p.fiber_index;
    CFScalar out;

    if (A.is_base() && B.is_base()) {
        int a = A.chart_index(spec), bb = B.chart_index(spec);
        double v = G.ricB(a, bb);
        for (int i = 0; i < G.m; ++i) v += G.li(i) * G.H_B(i, a, bb) / G.bv(i);
        v += ((nbar - 1) * l1 * l2 - l2 * l2) * G.piP * G.gval(a, bb);
        v += l2 * G.gval(a, bb) * G.divFrP;
        out.value = v;
        out.formula_id = pid(G, "3.6(1)", "4.7(1)");
        return out;
    }
    if (A.is_base() && !B.is_base()) {
        int a = A.chart_index(spec), v = B.chart_index(spec);
        out.value = (G.li(B.fib) - 1) * G.ddlnb(B.fib, v, a) +
                    ((nbar - 1) * l1 - l2) * G.piv[static_cast<size_t>(v)] * G.Xlnb(r, a);
        out.formula_id = pid(G, "3.6(2)", "4.7(2)");
        return out;
    }
    if (!A.is_base() && B.is_base()) {
        int v = A.chart_index(spec), a = B.chart_index(spec);
        out.value = (G.li(A.fib) - 1) * G.ddlnb(A.fib, v, a) +
                    (l2 - (nbar - 1) * l1) * G.piv[static_cast<size_t>(v)] * G.Xlnb(r, a);
        out.formula_id = pid(G, "3.6(3)", "4.7(3)");
        return out;
    }
    if (A.fib != B.fib) {
        out.value = 0.0;
        out.formula_id = pid(G, "4.7(4a)", "4.7(4a)");
        return out;
    }
    const int i = A.fib;
    int v = A.chart_index(spec), w = B.chart_index(spec);
    double brace = G.lapB(i) / G.bv(i) + (G.li(i) - 1) * G.gradBsq(i) / (G.bv(i) * G.bv(i));
    for (int s = 0; s < G.m; ++s)
        if (s != i) brace += G.li(s) * G.gradB_dot(i, s) / (G.bv(i) * G.bv(s));
    brace += ((nbar - 1) * l1 * l2 - l2 * l2) * G.piP;
    double val = G.fib[static_cast<size_t>(i)].ricF(v, w) + brace * G.gval(v, w);
    val += ((nbar - 1) * l1 - l2) * G.gnp(v, w);
    val += (l2 * l2 + (1 - nbar) * l1 * l1) * G.piv[static_cast<size_t>(v)] * G.piv[static_cast<size_t>(w)];
    val += l2 * G.gval(v, w) * G.divFrP;
    out.value = val;
    out.formula_id = pid(G, "3.6(4)", "4.7(4b)");
    return out;
}

// ---------------------------------------------------------------------------
// Scalar catalog
// ---------------------------------------------------------------------------

CFScalar scalar_p_base(const Geom& G) {
    const double l1 = G.params.lambda1, l2 = G.params.lambda2;
    const int nbar = nbar_of(G), nb = G.nB;
    double S = G.SBbar;
    double lsum = 0.0;
    for (int i = 0; i < G.m; ++i) lsum += G.li(i);
    for (int i = 0; i < G.m; ++i) {
        S += 2.0 * G.li(i) * G.lapB(i) / G.bv(i);
        S += G.fib[static_cast<size_t>(i)].SF / (G.bv(i) * G.bv(i));
        S += G.li(i) * (G.li(i) - 1) * G.gradBsq(i) / (G.bv(i) * G.bv(i));
        for (int s = 0; s < G.m; ++s)
            if (s != i) S += G.li(i) * G.li(s) * G.gradB_dot(i, s) / (G.bv(i) * G.bv(s));
        S += G.li(i) * ((nbar - 1) * l1 + (nb + G.li(i) - 1) * l2) * G.Pb(i) / G.bv(i);
        for (int s = 0; s < G.m; ++s)
            if (s != i) S += l2 * G.li(i) * G.li(s) * G.Pb(s) / G.bv(s);
        S += G.li(i) * ((nbar + nb - 1) * l1 * l2 - (l1 * l1 + l2 * l2)) * G.piP;
    }
    S += (l1 + l2) * lsum * G.divBP;
    CFScalar out;
    out.value = S;
    out.formula_id = pid(G, "3.7", "4.9");
    return out;
}

CFScalar scalar_p_fiber(const Geom& G) {
    const double l1 = G.params.lambda1, l2 = G.params.lambda2;
    const int nbar = nbar_of(G);
    double S = G.SB;
    for (int i = 0; i < G.m; ++i) {
        S += 2.0 * G.li(i) * G.lapB(i) / G.bv(i);
        S += G.fib[static_cast<size_t>(i)].SF / (G.bv(i) * G.bv(i));
        S += G.li(i) * (G.li(i) - 1) * G.gradBsq(i) / (G.bv(i) * G.bv(i));
        for (int s = 0; s < G.m; ++s)
            if (s != i) S += G.li(i) * G.li(s) * G.gradB_dot(i, s) / (G.bv(i) * G.bv(s));
    }
    S += (nbar * (nbar - 1) * l1 * l2 + (1 - nbar) * (l1 * l1 + l2 * l2)) * G.piP;
    S += (nbar - 1) * (l1 + l2) * G.divFrP;
    CFScalar out;
    out.value = S;
    out.formula_id = pid(G, "3.8", "4.10");
    return out;
}

// ---------------------------------------------------------------------------
// Singly-warped transcriptions (m = 1, untwisted)
// ---------------------------------------------------------------------------

void require_singly(const Geom& G, const char* who) {
    if (G.m != 1 || G.spec.twisted[0])
        throw SpecError(std::string(who) + ": spec must be singly warped (one fiber, untwisted)");
}

} // namespace

CFVector cf_connection(const SpaceSpec& spec, const QscParams& params, BasisSlot A, BasisSlot B,
                       const std::vector<double>& point) {
    Geom G(spec, params, point, TraceReading::Signed);
    if (params.p.where == PField::Where::Fiber) return conn_p_fiber(G, A, B);
    return conn_p_base(G, A, B); // Zero-P reduces every correction to nothing
}

CFVector cf_curvature(const SpaceSpec& spec, const QscParams& params, BasisSlot A, BasisSlot B,
                      BasisSlot C, const std::vector<double>& point) {
    Geom G(spec, params, point, TraceReading::Signed);
    if (params.p.where == PField::Where::Fiber) return curv_p_fiber(G, A, B, C);
    return curv_p_base(G, A, B, C);
}

CFScalar cf_ricci(const SpaceSpec& spec, const QscParams& params, BasisSlot A, BasisSlot B,
                  const std::vector<double>& point, TraceReading reading) {
    Geom G(spec, params, point, reading);
    if (params.p.where == PField::Where::Fiber) return ricci_p_fiber(G, A, B);
    return ricci_p_base(G, A, B);
}

CFScalar cf_scalar(const SpaceSpec& spec, const QscParams& params,
                   const std::vector<double>& point, TraceReading reading) {
    Geom G(spec, params, point, reading);
    if (params.p.where == PField::Where::Fiber) return scalar_p_fiber(G);
    return scalar_p_base(G);
}

CFScalar cf_ricci_singly(const SpaceSpec& spec, const QscParams& params, BasisSlot A, BasisSlot B,
                         const std::vector<double>& point, TraceReading reading) {
    Geom G(spec, params, point, reading);
    require_singly(G, "cf_ricci_singly");
    const double l1 = params.lambda1, l2 = params.lambda2;
    const int n2 = G.li(0);
    const int nbar = G.nB + n2;
    const double f = G.bv(0);
    CFScalar out;

    if (params.p.where != PField::Where::Fiber) {
        if (A.is_base() && B.is_base()) {
            int a = A.chart_index(spec), bb = B.chart_index(spec);
            out.value = G.ricBbar(a, bb) +
                        n2 * (G.H_B(0, a, bb) / f + l2 * (G.Pb(0) / f) * G.gval(a, bb) +
                              l1 * l2 * G.piP * G.gval(a, bb) + l1 * G.gnp(a, bb) -
                              l1 * l1 * G.piv[static_cast<size_t>(a)] * G.piv[static_cast<size_t>(bb)]);
            out.formula_id = "P3.5(1)";
            return out;
        }
        if (A.is_base() != B.is_base()) {
            out.value = 0.0;
            out.formula_id = "P3.5(2)";
            return out;
        }
        int v = A.chart_index(spec), w = B.chart_index(spec);
        double brace = G.lapB(0) / f + (n2 - 1) * G.gradBsq(0) / (f * f) +
                       ((nbar - 1) * l1 * l2 - l2 * l2) * G.piP + l2 * G.divBP +
                       ((nbar - 1) * l1 + (n2 - 1) * l2) * G.Pb(0) / f;
        out.value = G.fib[0].ricF(v, w) + brace * G.gval(v, w);
        out.formula_id = "P3.5(3)";
        return out;
    }

    if (A.is_base() && B.is_base()) {
        int a = A.chart_index(spec), bb = B.chart_index(spec);
        out.value = G.ricB(a, bb) + n2 * G.H_B(0, a, bb) / f +
                    ((nbar - 1) * l1 * l2 - l2 * l2) * G.piP * G.gval(a, bb) +
                    l2 * G.gval(a, bb) * G.divFrP;
        out.formula_id = "P3.6(1)";
        return out;
    }
    if (A.is_base() && !B.is_base()) {
        int a = A.chart_index(spec), v = B.chart_index(spec);
        out.value = ((nbar - 1) * l1 - l2) * G.piv[static_cast<size_t>(v)] * G.Xlnb(0, a);
        out.formula_id = "P3.6(2)";
        return out;
    }
    if (!A.is_base() && B.is_base()) {
        int v = A.chart_index(spec), a = B.chart_index(spec);
        out.value = (l2 - (nbar - 1) * l1) * G.piv[static_cast<size_t>(v)] * G.Xlnb(0, a);
        out.formula_id = "P3.6(3)";
        return out;
    }
    int v = A.chart_index(spec), w = B.chart_index(spec);
    double brace = G.lapB(0) / f + (n2 - 1) * G.gradBsq(0) / (f * f) +
                   ((nbar - 1) * l1 * l2 - l2 * l2) * G.piP;
    out.value = G.fib[0].ricF(v, w) + brace * G.gval(v, w) + ((nbar - 1) * l1 - l2) * G.gnp(v, w) +
                (l2 * l2 + (1 - nbar) * l1 * l1) * G.piv[static_cast<size_t>(v)] *
                    G.piv[static_cast<size_t>(w)] +
                l2 * G.gval(v, w) * G.divFrP;
    out.formula_id = "P3.6(4)";
    return out;
}

CFScalar cf_scalar_singly(const SpaceSpec& spec, const QscParams& params,
                          const std::vector<double>& point, TraceReading reading) {
    Geom G(spec, params, point, reading);
    require_singly(G, "cf_scalar_singly");
    const double l1 = params.lambda1, l2 = params.lambda2;
    const int n1 = G.nB, n2 = G.li(0);
    const int nbar = n1 + n2;
    const double f = G.bv(0);
    CFScalar out;
    if (params.p.where != PField::Where::Fiber) {
        out.value = G.SBbar + 2.0 * n2 * G.lapB(0) / f + G.fib[0].SF / (f * f) +
                    n2 * (n2 - 1) * G.gradBsq(0) / (f * f) +
                    n2 * (nbar - 1) * (l1 + l2) * G.Pb(0) / f +
                    (n2 * (nbar + n1 - 1) * l1 * l2 - n2 * (l1 * l1 + l2 * l2)) * G.piP +
                    n2 * (l1 + l2) * G.divBP;
        out.formula_id = "P3.7";
        return out;
    }
    out.value = G.SB + 2.0 * n2 * G.lapB(0) / f + G.fib[0].SF / (f * f) +
                n2 * (n2 - 1) * G.gradBsq(0) / (f * f) +
                (nbar * (nbar - 1) * l1 * l2 + (1 - nbar) * (l1 * l1 + l2 * l2)) * G.piP +
                (nbar - 1) * (l1 + l2) * G.divFrP;
    out.formula_id = "P3.8";
    return out;
}

MixedRicciReport mixed_ricci_flat_check(const SpaceSpec& spec, const QscParams& params,
                                        const std::vector<std::vector<double>>& points,
                                        double tol) {
    MixedRicciReport rep;
    for (const auto& f : spec.fibers) rep.dim1_fiber_flagged |= (f.dim == 1);
    for (const auto& pt : points) {
        TensorAtPoint t = qsc_oracle_at(spec, params, pt);
        Block bb = spec.base_block();
        for (int a = bb.offset; a < bb.offset + bb.dim; ++a)
            for (int v = bb.dim; v < spec.total_dim(); ++v) {
                rep.max_mixed_abs = std::max(rep.max_mixed_abs, std::abs(t.ricci(a, v)));
                rep.max_mixed_abs = std::max(rep.max_mixed_abs, std::abs(t.ricci(v, a)));
            }
    }
    rep.mixed_flat = rep.max_mixed_abs <= tol;

    if (params.p.where == PField::Where::Fiber) {
        int nbar = spec.total_dim();
        if (std::abs(params.lambda2 - (nbar - 1) * params.lambda1) <=
            tol * std::max(1.0, std::abs(params.lambda1)))
            rep.branch = "lambda2=(nbar-1)lambda1";
        else {
            // b_r only dependent on F_r: no base coordinate appears in it.
            bool base_free = true;
            auto vars = spec.warpings[static_cast<size_t>(params.p.fiber_index)].variables();
            for (const auto& v : vars)
                for (const auto& c : spec.base.coords) base_free &= (v != c);
            rep.branch = base_free ? "b_r fiber-only" : "none";
        }
    } else {
        bool any_twisted = false;
        for (bool t : spec.twisted) any_twisted |= t;
        rep.branch = any_twisted ? "none" : "warped";
    }
    return rep;
}

std::vector<BasisSlot> all_slots(const SpaceSpec& spec) {
    std::vector<BasisSlot> out;
    for (int a = 0; a < spec.base_dim(); ++a) out.push_back(BasisSlot::base(a));
    for (int i = 0; i < spec.fiber_count(); ++i)
        for (int k = 0; k < spec.fibers[static_cast<size_t>(i)].dim; ++k)
            out.push_back(BasisSlot::fiber(i, k));
    return out;
}

double fiber_log_laplacian(const SpaceSpec& spec, int fiber, const std::vector<double>& point) {
    Block fb = spec.fiber_block(fiber);
    Env env = spec.chart_env(point);
    Jet2 phi = log(spec.warping_at(fiber, env));
    JetMat gF = fiber_metric_at(spec, fiber, point);
    Mat gFi = invert_metric(gF.values(), fb);
    ConnJets cF = christoffels(gF, fb);
    double lap = 0.0;
    for (int x = fb.offset; x < fb.offset + fb.dim; ++x)
        for (int y = fb.offset; y < fb.offset + fb.dim; ++y) {
            double h = phi.dd(x, y);
            for (int e = fb.offset; e < fb.offset + fb.dim; ++e)
                h -= cF(e, x, y).value() * phi.d(e);
            lap += gFi(x, y) * h;
        }
    return lap;
}

bool has_twisted_gap(const SpaceSpec& spec) {
    for (int i = 0; i < spec.fiber_count(); ++i)
        if (spec.twisted[static_cast<size_t>(i)] && spec.fibers[static_cast<size_t>(i)].dim >= 2)
            return true;
    return false;
}

CFVector twisted_gap_curvature(const SpaceSpec& spec, BasisSlot A, BasisSlot B, BasisSlot C,
                               const std::vector<double>& point) {
    CFVector out;
    out.components.assign(static_cast<size_t>(spec.total_dim()), 0.0);
    out.formula_id = "twisted-gap";
    if (A.is_base() || B.is_base() || C.is_base()) return out;
    if (A.fib != B.fib || B.fib != C.fib) return out;
    int i = A.fib;
    if (!spec.twisted[static_cast<size_t>(i)] || spec.fibers[static_cast<size_t>(i)].dim < 2)
        return out;
    double lap = fiber_log_laplacian(spec, i, point);
    Mat gF = fiber_metric_at(spec, i, point).values();
    int u = A.chart_index(spec), v = B.chart_index(spec), w = C.chart_index(spec);
    out.components[static_cast<size_t>(v)] += lap * gF(u, w);
    out.components[static_cast<size_t>(u)] -= lap * gF(v, w);
    return out;
}

double twisted_gap_ricci(const SpaceSpec& spec, BasisSlot A, BasisSlot B,
                         const std::vector<double>& point) {
    if (A.is_base() || B.is_base() || A.fib != B.fib) return 0.0;
    int i = A.fib;
    int li = spec.fibers[static_cast<size_t>(i)].dim;
    if (!spec.twisted[static_cast<size_t>(i)] || li < 2) return 0.0;
    Mat gF = fiber_metric_at(spec, i, point).values();
    return (li - 1) * fiber_log_laplacian(spec, i, point) *
           gF(A.chart_index(spec), B.chart_index(spec));
}

double twisted_gap_scalar(const SpaceSpec& spec, const std::vector<double>& point) {
    double gap = 0.0;
    Env env = spec.chart_env(point);
    for (int i = 0; i < spec.fiber_count(); ++i) {
        int li = spec.fibers[static_cast<size_t>(i)].dim;
        if (!spec.twisted[static_cast<size_t>(i)] || li < 2) continue;
        double b = spec.warping_at(i, env).value();
        gap += li * (li - 1) * fiber_log_laplacian(spec, i, point) / (b * b);
    }
    return gap;
}

} // namespace qsc::cf
