#include "qsc/sampling.hpp"

namespace qsc {

namespace {

double uni(std::mt19937& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}
int pick(std::mt19937& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Smooth positive warping in the given coordinates: products of exponentials
/// and bounded trig offsets keep everything positive on [-1,1]^n.
Expr sample_warping(std::mt19937& rng, const std::vector<std::string>& coords) {
    const Expr x = Expr::var(coords[static_cast<size_t>(
        pick(rng, 0, static_cast<int>(coords.size()) - 1))]);
    switch (pick(rng, 0, 3)) {
    case 0: return exp(uni(rng, -0.8, 0.8) * x);
    case 1: return uni(rng, 1.2, 2.2) + uni(rng, 0.2, 0.6) * sin(x);
    case 2: return uni(rng, 0.8, 1.5) + uni(rng, 0.2, 0.5) * exp(uni(rng, -0.7, 0.7) * x);
    default: {
        if (coords.size() > 1) {
            const Expr y = Expr::var(coords[static_cast<size_t>(
                pick(rng, 0, static_cast<int>(coords.size()) - 1))]);
            return exp(uni(rng, -0.5, 0.5) * x + uni(rng, -0.5, 0.5) * y);
        }
        return exp(uni(rng, -0.6, 0.6) * x * x);
    }
    }
}

} // namespace

SpaceSpec sample_space(std::mt19937& rng, const SampleOptions& opt) {
    BaseModel base;
    int bdim = pick(rng, 1, opt.max_base_dim);
    if (bdim == 1) {
        base = BaseModel::interval(pick(rng, 0, 3) == 0 ? 1 : -1);
    } else {
        std::vector<int> sig(static_cast<size_t>(bdim), 1);
        if (pick(rng, 0, 1) == 0) sig[0] = -1;
        if (opt.allow_conformal && pick(rng, 0, 2) == 0)
            base = BaseModel::conformal(sig, 1.0 + 0.2 * sin(Expr::var("x1")));
        else
            base = BaseModel::flat(sig);
    }

    int m = pick(rng, 1, opt.max_fibers);
    std::vector<FiberModel> fibers;
    for (int i = 0; i < m; ++i) {
        int roll = pick(rng, 0, 2);
        if (roll == 0) fibers.push_back(FiberModel::circle());
        else if (roll == 1 || !opt.allow_sphere || opt.max_fiber_dim < 2)
            fibers.push_back(FiberModel::torus(pick(rng, 1, opt.max_fiber_dim)));
        else fibers.push_back(FiberModel::sphere(2, uni(rng, 0.7, 1.6)));
    }

    std::vector<Expr> warpings;
    for (int i = 0; i < m; ++i) {
        Expr w = sample_warping(rng, base.coords);
        bool may_twist = opt.twist == TwistMode::Any ||
                         (opt.twist == TwistMode::Dim1Only &&
                          fibers[static_cast<size_t>(i)].dim == 1);
        if (may_twist && pick(rng, 0, 2) == 0) {
            auto own = fiber_coord_names(i, fibers[static_cast<size_t>(i)].dim);
            if (pick(rng, 0, 1) == 0) {
                // separable u(t) v(y) instance
                w = w * (1.0 + uni(rng, 0.05, 0.2) * sin(Expr::var(own[0])));
            } else {
                // non-separable twist; keeps VX(ln b) terms alive
                w = w * exp(uni(rng, 0.05, 0.15) * Expr::var(base.coords[0]) *
                            sin(Expr::var(own[0])));
            }
        }
        warpings.push_back(w);
    }
    return SpaceSpec::make(std::move(base), std::move(fibers), std::move(warpings));
}

QscParams sample_qsc(std::mt19937& rng, const SpaceSpec& spec, const SampleOptions& opt) {
    auto lam = [&] {
        for (;;) {
            double v = uni(rng, opt.lambda_lo, opt.lambda_hi);
            if (std::abs(v) >= opt.lambda_min_abs) return v;
        }
    };
    double l1 = lam(), l2 = lam();

    std::vector<int> circles;
    for (int i = 0; i < spec.fiber_count(); ++i)
        if (spec.fibers[static_cast<size_t>(i)].kind == FiberKind::Circle &&
            !spec.twisted[static_cast<size_t>(i)])
            circles.push_back(i);

    bool on_fiber = opt.p_on_fiber_allowed && !circles.empty() && pick(rng, 0, 1) == 1;
    if (on_fiber) {
        int r = circles[static_cast<size_t>(pick(rng, 0, static_cast<int>(circles.size()) - 1))];
        auto names = fiber_coord_names(r, 1);
        Expr comp;
        if (pick(rng, 0, 1) == 0) comp = Expr::num(uni(rng, 0.4, 1.4));
        else comp = uni(rng, 0.6, 1.2) + uni(rng, 0.1, 0.4) * sin(Expr::var(names[0]));
        return QscParams::make(l1, l2, PField::fiber(r, {comp}));
    }

    std::vector<Expr> comps;
    for (const auto& c : spec.base.coords) {
        if (pick(rng, 0, 1) == 0) comps.push_back(Expr::num(uni(rng, -1.0, 1.0)));
        else comps.push_back(uni(rng, -0.8, 0.8) + uni(rng, 0.1, 0.4) * sin(Expr::var(c)));
    }
    return QscParams::make(l1, l2, PField::base(std::move(comps)));
}

std::vector<double> sample_point(std::mt19937& rng, const SpaceSpec& spec) {
    std::vector<double> pt(static_cast<size_t>(spec.total_dim()), 0.0);
    for (int a = 0; a < spec.base_dim(); ++a) pt[static_cast<size_t>(a)] = uni(rng, -1.0, 1.0);
    for (int i = 0; i < spec.fiber_count(); ++i) {
        Block blk = spec.fiber_block(i);
        const FiberModel& f = spec.fibers[static_cast<size_t>(i)];
        for (int k = 0; k < blk.dim; ++k) {
            double lo = -1.0, hi = 1.0;
            if (f.kind == FiberKind::RoundSphere && k < f.dim - 1) {
                lo = kSphereChartMargin + 0.15;
                hi = 3.14159265358979323846 - kSphereChartMargin - 0.15;
            }
            pt[static_cast<size_t>(blk.offset + k)] = uni(rng, lo, hi);
        }
    }
    return pt;
}

} // namespace qsc
