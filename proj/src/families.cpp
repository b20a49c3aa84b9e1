#include "qsc/families.hpp"

#include <cmath>

namespace qsc {

Expr Linear2::solution(double tol) const {
    const Expr t = Expr::var("t");
    const Expr c1 = Expr::var("c1");
    const Expr c2 = Expr::var("c2");
    const double scale = std::max(1.0, a1 * a1 + std::abs(a0));
    auto ct = [&t](double c) { // c*t with the unit coefficients folded away
        if (c == 1.0) return t;
        if (c == -1.0) return -t;
        return Expr::num(c) * t;
    };

    Expr hom;
    switch (kind(tol)) {
    case Kind::RealDistinct: {
        double sq = std::sqrt(std::max(0.0, discriminant()));
        double rp = 0.5 * (-a1 + sq), rm = 0.5 * (-a1 - sq);
        Expr ep = (rp == 0.0) ? Expr::num(1.0) : exp(ct(rp));
        Expr em = (rm == 0.0) ? Expr::num(1.0) : exp(ct(rm));
        hom = c1 * ep + c2 * em;
        break;
    }
    case Kind::RealDouble: {
        hom = (a1 == 0.0) ? (c1 + c2 * t) : (c1 + c2 * t) * exp(ct(-0.5 * a1));
        break;
    }
    case Kind::ComplexPair: {
        double w = 0.5 * std::sqrt(-discriminant());
        Expr osc = c1 * cos(ct(w)) + c2 * sin(ct(w));
        hom = (a1 == 0.0) ? osc : exp(ct(-0.5 * a1)) * osc;
        break;
    }
    }
    if (rhs == 0.0) return hom;
    if (std::abs(a0) > tol * scale) return hom + Expr::num(rhs / a0);
    if (std::abs(a1) > tol * scale) return hom + Expr::num(rhs / a1) * t;
    return hom + Expr::num(0.5 * rhs) * t * t;
}

GridEval grid_residual(const Expr& candidate, const Residual2& residual, const GridSpec& grid,
                       const std::map<std::string, double>& constants) {
    GridEval out;
    out.min_f = std::numeric_limits<double>::infinity();
    for (int k = 0; k < grid.points; ++k) {
        double t = grid.t(k);
        auto d = candidate.eval_d2(t, constants);
        out.min_f = std::min(out.min_f, d.f);
        out.max_abs_f = std::max(out.max_abs_f, std::abs(d.f));
        out.max_raw = std::max(out.max_raw, std::abs(residual(t, d.f, d.df, d.ddf)));
    }
    out.max_residual = out.max_raw / std::max(1.0, out.max_abs_f * out.max_abs_f);
    return out;
}

} // namespace qsc
