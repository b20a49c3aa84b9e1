#include "qsc/space.hpp"

#include <json.hpp>

namespace qsc {

BaseModel BaseModel::interval(int sign, const std::string& name) {
    if (sign != 1 && sign != -1) throw SpecError("interval signature must be +-1");
    BaseModel b;
    b.kind = BaseKind::Interval;
    b.dim = 1;
    b.signature = {sign};
    b.coords = {name};
    return b;
}

BaseModel BaseModel::flat(std::vector<int> signature) {
    if (signature.empty()) throw SpecError("flat base needs dim >= 1");
    BaseModel b;
    b.kind = BaseKind::FlatPatch;
    b.dim = static_cast<int>(signature.size());
    for (int s : signature)
        if (s != 1 && s != -1) throw SpecError("base signature entries must be +-1");
    b.signature = std::move(signature);
    for (int i = 0; i < b.dim; ++i) b.coords.push_back("x" + std::to_string(i + 1));
    return b;
}

BaseModel BaseModel::conformal(std::vector<int> signature, Expr factor) {
    BaseModel b = flat(std::move(signature));
    b.kind = BaseKind::ConformalPatch;
    b.conformal_factor = std::move(factor);
    return b;
}

FiberModel FiberModel::circle() {
    FiberModel f;
    f.kind = FiberKind::Circle;
    f.dim = 1;
    return f;
}

FiberModel FiberModel::torus(int dim) {
    if (dim < 1) throw SpecError("torus dim must be >= 1");
    FiberModel f;
    f.kind = FiberKind::FlatTorus;
    f.dim = dim;
    return f;
}

FiberModel FiberModel::sphere(int dim, double radius) {
    if (dim < 2) throw SpecError("round sphere needs dim >= 2");
    if (radius <= 0.0) throw SpecError("round sphere needs radius > 0");
    FiberModel f;
    f.kind = FiberKind::RoundSphere;
    f.dim = dim;
    f.radius = radius;
    return f;
}

double FiberModel::scalar_paper() const {
    if (kind == FiberKind::RoundSphere)
        return -static_cast<double>(dim) * (dim - 1) / (radius * radius);
    return 0.0;
}

double FiberModel::einstein_alpha_paper() const {
    if (kind == FiberKind::RoundSphere) return -static_cast<double>(dim - 1) / (radius * radius);
    return 0.0;
}

std::vector<std::string> fiber_coord_names(int fiber_index, int dim) {
    static const char* stems[] = {"u", "v", "w"};
    std::string stem = fiber_index < 3 ? stems[fiber_index] : ("f" + std::to_string(fiber_index) + "c");
    std::vector<std::string> out;
    for (int i = 0; i < dim; ++i) out.push_back(stem + std::to_string(i + 1));
    return out;
}

SpaceSpec SpaceSpec::make(BaseModel base, std::vector<FiberModel> fibers,
                          std::vector<Expr> warpings) {
    if (fibers.empty()) throw SpecError("space needs at least one fiber");
    if (fibers.size() != warpings.size())
        throw SpecError("one warping expression per fiber required");
    SpaceSpec s;
    s.base = std::move(base);
    s.fibers = std::move(fibers);
    s.warpings = std::move(warpings);

    s.names_ = s.base.coords;
    for (int i = 0; i < s.fiber_count(); ++i)
        for (const auto& n : fiber_coord_names(i, s.fibers[static_cast<size_t>(i)].dim))
            s.names_.push_back(n);

    // Twisted flags: b_i may reference base coordinates plus its own fiber's.
    s.twisted.assign(s.fibers.size(), false);
    for (int i = 0; i < s.fiber_count(); ++i) {
        auto vars = s.warpings[static_cast<size_t>(i)].variables();
        auto own = fiber_coord_names(i, s.fibers[static_cast<size_t>(i)].dim);
        for (const auto& v : vars) {
            bool is_base = false, is_own = false;
            for (const auto& c : s.base.coords) is_base |= (v == c);
            for (const auto& c : own) is_own |= (v == c);
            if (is_own) s.twisted[static_cast<size_t>(i)] = true;
            else if (!is_base)
                throw SpecError("warping " + std::to_string(i) + " references foreign coordinate '" + v + "'");
        }
    }
    return s;
}

int SpaceSpec::total_dim() const {
    int n = base.dim;
    for (const auto& f : fibers) n += f.dim;
    return n;
}

Block SpaceSpec::fiber_block(int i) const {
    int off = base.dim;
    for (int k = 0; k < i; ++k) off += fibers[static_cast<size_t>(k)].dim;
    return Block{off, fibers[static_cast<size_t>(i)].dim};
}

int SpaceSpec::owner_fiber(int a) const {
    if (a < base.dim) return -1;
    for (int i = 0; i < fiber_count(); ++i)
        if (fiber_block(i).contains(a)) return i;
    throw SpecError("coordinate index out of range");
}

int SpaceSpec::coord_index(const std::string& name) const {
    for (size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    throw SpecError("unknown coordinate '" + name + "'");
}

Env SpaceSpec::chart_env(const std::vector<double>& point) const {
    const int n = total_dim();
    if (static_cast<int>(point.size()) != n) throw ChartError("point dimension mismatch");
    Env env;
    for (int i = 0; i < n; ++i)
        env[names_[static_cast<size_t>(i)]] = Jet2::variable(n, i, point[static_cast<size_t>(i)]);
    return env;
}

Jet2 SpaceSpec::warping_at(int i, const Env& env) const {
    Jet2 b = warpings[static_cast<size_t>(i)].eval(env);
    if (!(b.value() > 0.0))
        throw SpecError("warping " + std::to_string(i) + " non-positive at point");
    return b;
}

void SpaceSpec::check_point(const std::vector<double>& point) const {
    if (static_cast<int>(point.size()) != total_dim()) throw ChartError("point dimension mismatch");
    for (int i = 0; i < fiber_count(); ++i) {
        const auto& f = fibers[static_cast<size_t>(i)];
        if (f.kind != FiberKind::RoundSphere) continue;
        Block blk = fiber_block(i);
        // All polar angles except the final azimuth must stay off the poles.
        for (int k = 0; k < f.dim - 1; ++k) {
            double th = point[static_cast<size_t>(blk.offset + k)];
            if (th < kSphereChartMargin || th > 3.14159265358979323846 - kSphereChartMargin)
                throw ChartError("sphere chart: polar angle within guard margin of pole");
        }
    }
    Env env = chart_env(point);
    for (int i = 0; i < fiber_count(); ++i) (void)warping_at(i, env);
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

using nlohmann::json;

std::string space_to_json(const SpaceSpec& spec) {
    json j;
    json b;
    switch (spec.base.kind) {
    case BaseKind::Interval:
        b["kind"] = "interval";
        b["signature"] = spec.base.signature[0];
        break;
    case BaseKind::FlatPatch:
        b["kind"] = "flat";
        b["signature"] = spec.base.signature;
        break;
    case BaseKind::ConformalPatch:
        b["kind"] = "conformal";
        b["signature"] = spec.base.signature;
        b["factor"] = spec.base.conformal_factor.str();
        break;
    }
    j["base"] = b;
    j["fibers"] = json::array();
    for (const auto& f : spec.fibers) {
        json jf;
        switch (f.kind) {
        case FiberKind::Circle: jf["kind"] = "circle"; break;
        case FiberKind::FlatTorus:
            jf["kind"] = "torus";
            jf["dim"] = f.dim;
            break;
        case FiberKind::RoundSphere:
            jf["kind"] = "sphere";
            jf["dim"] = f.dim;
            jf["radius"] = f.radius;
            break;
        }
        j["fibers"].push_back(jf);
    }
    j["warpings"] = json::array();
    for (const auto& w : spec.warpings) j["warpings"].push_back(w.str());
    return j.dump(2);
}

SpaceSpec space_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw SpecError(std::string("space json: ") + e.what());
    }
    if (!j.contains("base") || !j.contains("fibers") || !j.contains("warpings"))
        throw SpecError("space json: need base, fibers, warpings");

    BaseModel base;
    const json& jb = j["base"];
    std::string kind = jb.value("kind", "interval");
    if (kind == "interval") {
        base = BaseModel::interval(jb.value("signature", -1));
    } else if (kind == "flat" || kind == "conformal") {
        std::vector<int> sig = jb.at("signature").get<std::vector<int>>();
        if (kind == "flat") base = BaseModel::flat(sig);
        else base = BaseModel::conformal(sig, parse_expr(jb.at("factor").get<std::string>()));
    } else {
        throw SpecError("space json: unknown base kind '" + kind + "'");
    }

    std::vector<FiberModel> fibers;
    for (const auto& jf : j["fibers"]) {
        std::string fk = jf.value("kind", "circle");
        if (fk == "circle") fibers.push_back(FiberModel::circle());
        else if (fk == "torus") fibers.push_back(FiberModel::torus(jf.value("dim", 1)));
        else if (fk == "sphere")
            fibers.push_back(FiberModel::sphere(jf.value("dim", 2), jf.value("radius", 1.0)));
        else throw SpecError("space json: unknown fiber kind '" + fk + "'");
    }

    std::vector<Expr> warpings;
    for (const auto& jw : j["warpings"]) warpings.push_back(parse_expr(jw.get<std::string>()));

    return SpaceSpec::make(std::move(base), std::move(fibers), std::move(warpings));
}

} // namespace qsc
