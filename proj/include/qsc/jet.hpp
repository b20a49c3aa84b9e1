/// @file jet.hpp
/// @brief Order-2 truncated Taylor (jet) arithmetic over chart coordinates.
///
/// A Jet2 carries a value, its gradient and its (symmetric) Hessian with
/// respect to a fixed set of chart coordinates. All arithmetic propagates
/// first and second derivatives exactly via the chain rule, so metric
/// components evaluated as jets hand the curvature pipeline exact partials
/// of g and, through Jet1, exact partials of the Christoffel symbols.

#pragma once

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qsc {

class Jet2 {
  public:
    Jet2() : n_(0), v_(0.0) {}

    static Jet2 constant(int n, double v) { return Jet2(n, v); }

    static Jet2 variable(int n, int index, double v) {
        Jet2 j(n, v);
        j.g_[static_cast<size_t>(index)] = 1.0;
        return j;
    }

    int dim() const { return n_; }
    double value() const { return v_; }
    double d(int i) const { return g_[static_cast<size_t>(i)]; }
    double dd(int i, int j) const { return h_[static_cast<size_t>(i * n_ + j)]; }

    double& value() { return v_; }
    double& d(int i) { return g_[static_cast<size_t>(i)]; }

    void set_dd(int i, int j, double v) {
        h_[static_cast<size_t>(i * n_ + j)] = v;
        h_[static_cast<size_t>(j * n_ + i)] = v;
    }

    Jet2 operator-() const {
        Jet2 r(n_, -v_);
        for (size_t k = 0; k < g_.size(); ++k) r.g_[k] = -g_[k];
        for (size_t k = 0; k < h_.size(); ++k) r.h_[k] = -h_[k];
        return r;
    }

    Jet2& operator+=(const Jet2& o) {
        check(o);
        v_ += o.v_;
        for (size_t k = 0; k < g_.size(); ++k) g_[k] += o.g_[k];
        for (size_t k = 0; k < h_.size(); ++k) h_[k] += o.h_[k];
        return *this;
    }
    Jet2& operator-=(const Jet2& o) {
        check(o);
        v_ -= o.v_;
        for (size_t k = 0; k < g_.size(); ++k) g_[k] -= o.g_[k];
        for (size_t k = 0; k < h_.size(); ++k) h_[k] -= o.h_[k];
        return *this;
    }
    Jet2& operator*=(double s) {
        v_ *= s;
        for (auto& x : g_) x *= s;
        for (auto& x : h_) x *= s;
        return *this;
    }

    friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
    friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
    friend Jet2 operator+(Jet2 a, double s) { a.v_ += s; return a; }
    friend Jet2 operator+(double s, Jet2 a) { a.v_ += s; return a; }
    friend Jet2 operator-(Jet2 a, double s) { a.v_ -= s; return a; }
    friend Jet2 operator-(double s, const Jet2& a) { return (-a) + s; }
    friend Jet2 operator*(Jet2 a, double s) { return a *= s; }
    friend Jet2 operator*(double s, Jet2 a) { return a *= s; }
    friend Jet2 operator/(Jet2 a, double s) { return a *= (1.0 / s); }

    friend Jet2 operator*(const Jet2& a, const Jet2& b) {
        a.check(b);
        const int n = a.n_;
        Jet2 r(n, a.v_ * b.v_);
        for (int i = 0; i < n; ++i)
            r.g_[static_cast<size_t>(i)] = a.d(i) * b.v_ + a.v_ * b.d(i);
        // mirror-filled so the Hessian stays symmetric to exact equality
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double v = a.dd(i, j) * b.v_ + (a.d(i) * b.d(j) + a.d(j) * b.d(i)) +
                           a.v_ * b.dd(i, j);
                r.h_[static_cast<size_t>(i * n + j)] = v;
                r.h_[static_cast<size_t>(j * n + i)] = v;
            }
        return r;
    }

    friend Jet2 operator/(const Jet2& a, const Jet2& b) { return a * b.reciprocal(); }
    friend Jet2 operator/(double s, const Jet2& b) { return b.reciprocal() * s; }

    Jet2 reciprocal() const {
        if (v_ == 0.0) throw std::domain_error("jet: division by zero value");
        const double iv = 1.0 / v_;
        return chain(iv, -iv * iv, 2.0 * iv * iv * iv);
    }

    /// Composes a scalar function u with this jet given u(v), u'(v), u''(v).
    Jet2 chain(double u, double du, double ddu) const {
        const int n = n_;
        Jet2 r(n, u);
        for (int i = 0; i < n; ++i) r.g_[static_cast<size_t>(i)] = du * d(i);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double v = ddu * d(i) * d(j) + du * dd(i, j);
                r.h_[static_cast<size_t>(i * n + j)] = v;
                r.h_[static_cast<size_t>(j * n + i)] = v;
            }
        return r;
    }

  private:
    Jet2(int n, double v)
        : n_(n), v_(v), g_(static_cast<size_t>(n), 0.0),
          h_(static_cast<size_t>(n) * static_cast<size_t>(n), 0.0) {}

    void check(const Jet2& o) const {
        if (n_ != o.n_) throw std::invalid_argument("jet: dimension mismatch");
    }

    int n_;
    double v_;
    std::vector<double> g_;
    std::vector<double> h_;
};

inline Jet2 exp(const Jet2& a) {
    const double e = std::exp(a.value());
    return a.chain(e, e, e);
}
inline Jet2 log(const Jet2& a) {
    if (a.value() <= 0.0) throw std::domain_error("jet: log of non-positive value");
    const double iv = 1.0 / a.value();
    return a.chain(std::log(a.value()), iv, -iv * iv);
}
inline Jet2 sin(const Jet2& a) {
    return a.chain(std::sin(a.value()), std::cos(a.value()), -std::sin(a.value()));
}
inline Jet2 cos(const Jet2& a) {
    return a.chain(std::cos(a.value()), -std::sin(a.value()), -std::cos(a.value()));
}
inline Jet2 sqrt(const Jet2& a) {
    if (a.value() <= 0.0) throw std::domain_error("jet: sqrt of non-positive value");
    const double s = std::sqrt(a.value());
    return a.chain(s, 0.5 / s, -0.25 / (s * a.value()));
}

/// f^c for real exponent c; requires f > 0 unless c is a small non-negative integer.
inline Jet2 pow(const Jet2& a, double c) {
    const double v = a.value();
    const bool integral = (c == std::floor(c)) && std::abs(c) < 64.0;
    if (v <= 0.0 && !integral) throw std::domain_error("jet: pow of non-positive base");
    if (v == 0.0 && c < 2.0 && c != 0.0 && c != 1.0)
        throw std::domain_error("jet: pow at zero with non-smooth exponent");
    const double u = std::pow(v, c);
    const double du = (c == 0.0) ? 0.0 : c * std::pow(v, c - 1.0);
    const double ddu = (c == 0.0 || c == 1.0) ? 0.0 : c * (c - 1.0) * std::pow(v, c - 2.0);
    return a.chain(u, du, ddu);
}

inline Jet2 pow(const Jet2& a, const Jet2& b) {
    return exp(b * log(a));
}

/// First-order jet: value plus gradient. Christoffel symbols live here --
/// they need one derivative for the curvature, not two.
class Jet1 {
  public:
    Jet1() : n_(0), v_(0.0) {}
    Jet1(int n, double v) : n_(n), v_(v), d_(static_cast<size_t>(n), 0.0) {}

    static Jet1 from(const Jet2& j) {
        Jet1 r(j.dim(), j.value());
        for (int i = 0; i < j.dim(); ++i) r.d_[static_cast<size_t>(i)] = j.d(i);
        return r;
    }
    /// Gradient slot k of a Jet2, itself carried with one derivative (from the Hessian).
    static Jet1 partial(const Jet2& j, int k) {
        Jet1 r(j.dim(), j.d(k));
        for (int i = 0; i < j.dim(); ++i) r.d_[static_cast<size_t>(i)] = j.dd(k, i);
        return r;
    }

    int dim() const { return n_; }
    double value() const { return v_; }
    double d(int i) const { return d_[static_cast<size_t>(i)]; }
    double& d(int i) { return d_[static_cast<size_t>(i)]; }
    double& value() { return v_; }

    Jet1 operator-() const {
        Jet1 r(n_, -v_);
        for (int i = 0; i < n_; ++i) r.d_[static_cast<size_t>(i)] = -d_[static_cast<size_t>(i)];
        return r;
    }
    Jet1& operator+=(const Jet1& o) {
        v_ += o.v_;
        for (size_t k = 0; k < d_.size(); ++k) d_[k] += o.d_[k];
        return *this;
    }
    Jet1& operator-=(const Jet1& o) {
        v_ -= o.v_;
        for (size_t k = 0; k < d_.size(); ++k) d_[k] -= o.d_[k];
        return *this;
    }
    friend Jet1 operator+(Jet1 a, const Jet1& b) { return a += b; }
    friend Jet1 operator-(Jet1 a, const Jet1& b) { return a -= b; }
    friend Jet1 operator*(const Jet1& a, const Jet1& b) {
        Jet1 r(a.n_, a.v_ * b.v_);
        for (int i = 0; i < a.n_; ++i) r.d(i) = a.d(i) * b.v_ + a.v_ * b.d(i);
        return r;
    }
    friend Jet1 operator*(Jet1 a, double s) {
        a.v_ *= s;
        for (auto& x : a.d_) x *= s;
        return a;
    }
    friend Jet1 operator*(double s, Jet1 a) { return a * s; }

  private:
    int n_;
    double v_;
    std::vector<double> d_;
};

} // namespace qsc
