#include "qsc/connection.hpp"

#include <json.hpp>

namespace qsc {

QscParams QscParams::make(double l1, double l2, PField p) {
    if (l1 == 0.0) throw SpecError("lambda1 must be nonzero");
    if (l2 == 0.0) throw SpecError("lambda2 must be nonzero");
    QscParams q;
    q.lambda1 = l1;
    q.lambda2 = l2;
    q.p = std::move(p);
    return q;
}

QscParams QscParams::degenerate(double l1, double l2, PField p) {
    QscParams q;
    q.lambda1 = l1;
    q.lambda2 = l2;
    q.p = std::move(p);
    return q;
}

QscParams::Kind QscParams::classify(double tol) const {
    if (std::abs(lambda1 - lambda2) <= tol)
        return std::abs(lambda1 - 1.0) <= tol ? Kind::SemiSymmetricMetric
                                              : Kind::QuarterSymmetricMetric;
    return Kind::QuarterSymmetricNonMetric;
}

std::vector<Jet1> p_field_jets(const SpaceSpec& spec, const QscParams& params,
                               const std::vector<double>& point) {
    const int n = spec.total_dim();
    std::vector<Jet1> P(static_cast<size_t>(n), Jet1(n, 0.0));
    if (params.p.where == PField::Where::Zero) return P;

    Block blk;
    std::vector<std::string> own;
    if (params.p.where == PField::Where::Base) {
        blk = spec.base_block();
        own = spec.base.coords;
    } else {
        int r = params.p.fiber_index;
        if (r < 0 || r >= spec.fiber_count())
            throw SpecError("P field placed on absent fiber index " + std::to_string(r));
        blk = spec.fiber_block(r);
        own = fiber_coord_names(r, blk.dim);
    }
    if (static_cast<int>(params.p.components.size()) != blk.dim)
        throw SpecError("P field needs one component per block coordinate");
    for (const auto& c : params.p.components)
        for (const auto& v : c.variables()) {
            bool ok = false;
            for (const auto& o : own) ok |= (v == o);
            if (!ok) throw SpecError("P component references foreign coordinate '" + v + "'");
        }
    Env env = spec.chart_env(point);
    for (int a = 0; a < blk.dim; ++a)
        P[static_cast<size_t>(blk.offset + a)] =
            Jet1::from(params.p.components[static_cast<size_t>(a)].eval(env));
    return P;
}

Mat nabla_p(const SpaceSpec& spec, const QscParams& params, const std::vector<double>& point,
            const TensorAtPoint& lc) {
    const int n = spec.total_dim();
    std::vector<Jet1> P = p_field_jets(spec, params, point);
    Mat np(n); // np(i,k) = (nabla_i P)^k
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            double v = P[static_cast<size_t>(k)].d(i);
            for (int l = 0; l < n; ++l) v += lc.conn(k, i, l) * P[static_cast<size_t>(l)].value();
            np(i, k) = v;
        }
    return np;
}

namespace {

/// pi_j = g_{jl} P^l as jets.
std::vector<Jet1> pi_jets(const JetMat& g, const std::vector<Jet1>& P) {
    const int n = g.n;
    std::vector<Jet1> pi(static_cast<size_t>(n), Jet1(n, 0.0));
    for (int j = 0; j < n; ++j) {
        Jet1 s(n, 0.0);
        for (int l = 0; l < n; ++l) s += Jet1::from(g(j, l)) * P[static_cast<size_t>(l)];
        pi[static_cast<size_t>(j)] = s;
    }
    return pi;
}

} // namespace

ConnJets qsc_conn_at(const SpaceSpec& spec, const QscParams& params,
                     const std::vector<double>& point) {
    const int n = spec.total_dim();
    JetMat g = metric_at(spec, point);
    ConnJets conn = christoffels(g, spec.full_block());
    std::vector<Jet1> P = p_field_jets(spec, params, point);
    std::vector<Jet1> pi = pi_jets(g, P);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Jet1 v = conn(k, i, j);
                if (k == i) v += params.lambda1 * pi[static_cast<size_t>(j)];
                v -= params.lambda2 * (Jet1::from(g(i, j)) * P[static_cast<size_t>(k)]);
                conn(k, i, j) = v;
            }
    return conn;
}

Rank3 torsion_at(const SpaceSpec& spec, const QscParams& params,
                 const std::vector<double>& point) {
    ConnJets conn = qsc_conn_at(spec, params, point);
    const int n = conn.n;
    Rank3 T(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                T(k, i, j) = conn(k, i, j).value() - conn(k, j, i).value();
    return T;
}

Rank3 non_metricity_at(const SpaceSpec& spec, const QscParams& params,
                       const std::vector<double>& point) {
    const int n = spec.total_dim();
    JetMat g = metric_at(spec, point);
    ConnJets conn = qsc_conn_at(spec, params, point);
    Rank3 nm(n); // (i, j, k) = (nabla_i g)(d_j, d_k)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double v = g(j, k).d(i);
                for (int l = 0; l < n; ++l)
                    v -= conn(l, i, j).value() * g(l, k).value() +
                         conn(l, i, k).value() * g(j, l).value();
                nm(i, j, k) = v;
            }
    return nm;
}

Rank4 curvature_qsc_direct(const SpaceSpec& spec, const QscParams& params,
                           const std::vector<double>& point) {
    const int n = spec.total_dim();
    TensorAtPoint lc = levi_civita_at(spec, point);
    Rank4 R = curvature_from_conn(lc.conn_jets, spec.full_block());
    const Mat& g = lc.metric;
    Mat np = nabla_p(spec, params, point, lc);
    std::vector<Jet1> Pj = p_field_jets(spec, params, point);
    std::vector<double> P(static_cast<size_t>(n)), pi(static_cast<size_t>(n));
    for (int a = 0; a < n; ++a) P[static_cast<size_t>(a)] = Pj[static_cast<size_t>(a)].value();
    for (int a = 0; a < n; ++a) {
        double s = 0.0;
        for (int b = 0; b < n; ++b) s += g(a, b) * P[static_cast<size_t>(b)];
        pi[static_cast<size_t>(a)] = s;
    }
    double piP = 0.0;
    for (int a = 0; a < n; ++a) piP += pi[static_cast<size_t>(a)] * P[static_cast<size_t>(a)];

    const double l1 = params.lambda1, l2 = params.lambda2;
    Rank4 Rb(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                // g(Z, nabla_X P) and g(Z, nabla_Y P)
                double gZnXP = 0.0, gZnYP = 0.0;
                for (int m = 0; m < n; ++m) {
                    gZnXP += g(k, m) * np(i, m);
                    gZnYP += g(k, m) * np(j, m);
                }
                for (int l = 0; l < n; ++l) {
                    double v = R(l, i, j, k);
                    if (l == j) v += l1 * gZnXP;
                    if (l == i) v -= l1 * gZnYP;
                    v += l2 * g(i, k) * np(j, l) - l2 * g(j, k) * np(i, l);
                    if (l == j) v += l1 * l2 * piP * g(i, k);
                    if (l == i) v -= l1 * l2 * piP * g(j, k);
                    v += l2 * l2 * (g(j, k) * pi[static_cast<size_t>(i)] -
                                    g(i, k) * pi[static_cast<size_t>(j)]) *
                         P[static_cast<size_t>(l)];
                    if (l == i) v += l1 * l1 * pi[static_cast<size_t>(k)] * pi[static_cast<size_t>(j)];
                    if (l == j) v -= l1 * l1 * pi[static_cast<size_t>(k)] * pi[static_cast<size_t>(i)];
                    Rb(l, i, j, k) = v;
                }
            }
    return Rb;
}

TensorAtPoint qsc_oracle_at(const SpaceSpec& spec, const QscParams& params,
                            const std::vector<double>& point) {
    TensorAtPoint t;
    t.point = point;
    t.metric_jets = metric_at(spec, point);
    t.metric = t.metric_jets.values();
    t.inverse_metric = invert_metric(t.metric, spec.full_block());
    t.conn_jets = qsc_conn_at(spec, params, point);
    t.conn = t.conn_jets.values();
    Block blk = spec.full_block();
    t.curv = curvature_from_conn(t.conn_jets, blk);
    t.frame = frame_from_metric(t.metric, blk);
    t.ricci = ricci_paper(t.curv, t.frame, t.metric);
    t.scalar = scalar_paper(t.ricci, t.frame);
    return t;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

using nlohmann::json;

std::string qsc_to_json(const QscParams& params) {
    json j;
    j["lambda1"] = params.lambda1;
    j["lambda2"] = params.lambda2;
    json jp;
    switch (params.p.where) {
    case PField::Where::Zero: jp["where"] = "zero"; break;
    case PField::Where::Base: jp["where"] = "base"; break;
    case PField::Where::Fiber:
        jp["where"] = "fiber";
        jp["index"] = params.p.fiber_index;
        break;
    }
    if (params.p.where != PField::Where::Zero) {
        jp["components"] = json::array();
        for (const auto& c : params.p.components) jp["components"].push_back(c.str());
    }
    j["P"] = jp;
    return j.dump(2);
}

QscParams qsc_from_json(const std::string& text, bool strict) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw SpecError(std::string("qsc json: ") + e.what());
    }
    double l1 = j.value("lambda1", 1.0);
    double l2 = j.value("lambda2", 1.0);
    PField p;
    if (j.contains("P")) {
        const json& jp = j["P"];
        std::string where = jp.value("where", "zero");
        std::vector<Expr> comps;
        if (jp.contains("components"))
            for (const auto& c : jp["components"]) comps.push_back(parse_expr(c.get<std::string>()));
        if (where == "zero") p = PField::zero();
        else if (where == "base") p = PField::base(std::move(comps));
        else if (where == "fiber") p = PField::fiber(jp.value("index", 0), std::move(comps));
        else throw SpecError("qsc json: unknown P location '" + where + "'");
    }
    return strict ? QscParams::make(l1, l2, std::move(p))
                  : QscParams::degenerate(l1, l2, std::move(p));
}

} // namespace qsc
