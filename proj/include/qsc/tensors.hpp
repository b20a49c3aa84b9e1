/// @file tensors.hpp
/// @brief Dense component arrays at a chart point, and elementwise comparison.

#pragma once

#include "qsc/jet.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace qsc {

struct Mat {
    int n = 0;
    std::vector<double> a;

    Mat() = default;
    explicit Mat(int dim) : n(dim), a(static_cast<size_t>(dim) * dim, 0.0) {}
    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

/// T^k_{ij} (or T_{ijk} for covariant rank-3 data), indexed (k,i,j).
struct Rank3 {
    int n = 0;
    std::vector<double> a;

    Rank3() = default;
    explicit Rank3(int dim) : n(dim), a(static_cast<size_t>(dim) * dim * dim, 0.0) {}
    double& operator()(int k, int i, int j) {
        return a[(static_cast<size_t>(k) * n + i) * n + j];
    }
    double operator()(int k, int i, int j) const {
        return a[(static_cast<size_t>(k) * n + i) * n + j];
    }
};

/// R^l_{ijk} with R(d_i, d_j) d_k = R^l_{ijk} d_l.
struct Rank4 {
    int n = 0;
    std::vector<double> a;

    Rank4() = default;
    explicit Rank4(int dim) : n(dim), a(static_cast<size_t>(dim) * dim * dim * dim, 0.0) {}
    double& operator()(int l, int i, int j, int k) {
        return a[((static_cast<size_t>(l) * n + i) * n + j) * n + k];
    }
    double operator()(int l, int i, int j, int k) const {
        return a[((static_cast<size_t>(l) * n + i) * n + j) * n + k];
    }
};

/// Metric components as order-2 jets, (i,j) symmetric.
struct JetMat {
    int n = 0;
    std::vector<Jet2> a;

    JetMat() = default;
    explicit JetMat(int dim) : n(dim), a(static_cast<size_t>(dim) * dim) {
        for (auto& j : a) j = Jet2::constant(dim, 0.0);
    }
    Jet2& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    const Jet2& operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

    Mat values() const {
        Mat m(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = (*this)(i, j).value();
        return m;
    }
};

/// Connection coefficients Gamma^k_{ij} carried with one derivative.
struct ConnJets {
    int n = 0;
    std::vector<Jet1> a;

    ConnJets() = default;
    explicit ConnJets(int dim) : n(dim), a(static_cast<size_t>(dim) * dim * dim) {
        for (auto& j : a) j = Jet1(dim, 0.0);
    }
    Jet1& operator()(int k, int i, int j) { return a[(static_cast<size_t>(k) * n + i) * n + j]; }
    const Jet1& operator()(int k, int i, int j) const {
        return a[(static_cast<size_t>(k) * n + i) * n + j];
    }

    Rank3 values() const {
        Rank3 r(n);
        for (size_t idx = 0; idx < a.size(); ++idx) r.a[idx] = a[idx].value();
        return r;
    }
};

/// Elementwise comparison summary; reports, never raises on mismatch.
struct CompareResult {
    double max_abs = 0.0;
    double max_rel = 0.0;
    size_t index = 0; // flat index of the worst entry
    size_t count = 0;

    bool within_abs(double tol) const { return max_abs <= tol; }
    bool within_rel(double tol) const { return max_rel <= tol; }
};

inline CompareResult compare_tensors(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("compare_tensors: shape mismatch");
    CompareResult r;
    r.count = a.size();
    double scale = 1.0;
    for (size_t i = 0; i < a.size(); ++i)
        scale = std::max({scale, std::abs(a[i]), std::abs(b[i])});
    for (size_t i = 0; i < a.size(); ++i) {
        double d = std::abs(a[i] - b[i]);
        if (d > r.max_abs) {
            r.max_abs = d;
            r.index = i;
        }
    }
    r.max_rel = r.max_abs / scale;
    return r;
}

} // namespace qsc
