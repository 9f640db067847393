#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "halc/common.hpp"
#include "halc/rng.hpp"

namespace halc {

// Dense row-major tensor of doubles. Rank 1 or 2 is all the toy models need.
struct Tensor {
    std::vector<int64_t> shape;
    std::vector<double> v;

    Tensor() = default;
    Tensor(std::vector<int64_t> s, std::vector<double> data) : shape(std::move(s)), v(std::move(data)) {}

    static Tensor zeros(std::vector<int64_t> s) {
        int64_t n = 1;
        for (int64_t d : s) n *= d;
        return Tensor{std::move(s), std::vector<double>(static_cast<size_t>(n), 0.0)};
    }

    static Tensor full(std::vector<int64_t> s, double value) {
        Tensor t = zeros(std::move(s));
        for (double& x : t.v) x = value;
        return t;
    }

    static Tensor scalar(double value) { return Tensor{{1}, {value}}; }

    static Tensor randn(std::vector<int64_t> s, Rng& rng, double stddev) {
        Tensor t = zeros(std::move(s));
        for (double& x : t.v) x = rng.normal(0.0, stddev);
        return t;
    }

    int64_t numel() const { return static_cast<int64_t>(v.size()); }
    int64_t rows() const { return shape.empty() ? 0 : shape[0]; }
    int64_t cols() const { return shape.size() < 2 ? 1 : shape[1]; }

    double& at(int64_t i, int64_t j) { return v[static_cast<size_t>(i * cols() + j)]; }
    double at(int64_t i, int64_t j) const { return v[static_cast<size_t>(i * cols() + j)]; }

    bool same_shape(const Tensor& o) const { return shape == o.shape; }
};

inline bool all_finite(std::span<const double> x) {
    for (double a : x) {
        if (!std::isfinite(a)) return false;
    }
    return true;
}

inline bool all_finite(const Tensor& t) { return all_finite(std::span<const double>(t.v)); }

inline double l2_norm(std::span<const double> x) {
    double s = 0.0;
    for (double a : x) s += a * a;
    return std::sqrt(s);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// C[m,n] += A[m,k] * B[k,n]
inline void matmul_acc(const double* a, const double* b, double* c, int64_t m, int64_t k, int64_t n) {
    for (int64_t i = 0; i < m; ++i) {
        const double* arow = a + i * k;
        double* crow = c + i * n;
        for (int64_t p = 0; p < k; ++p) {
            const double aip = arow[p];
            const double* brow = b + p * n;
            for (int64_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
        }
    }
}

// dA[m,k] += dC[m,n] * B^T  (B is [k,n])
inline void matmul_acc_nt(const double* dc, const double* b, double* da, int64_t m, int64_t k, int64_t n) {
    for (int64_t i = 0; i < m; ++i) {
        const double* dcrow = dc + i * n;
        double* darow = da + i * k;
        for (int64_t p = 0; p < k; ++p) {
            const double* brow = b + p * n;
            double s = 0.0;
            for (int64_t j = 0; j < n; ++j) s += dcrow[j] * brow[j];
            darow[p] += s;
        }
    }
}

// dB[k,n] += A^T * dC  (A is [m,k])
inline void matmul_acc_tn(const double* a, const double* dc, double* db, int64_t m, int64_t k, int64_t n) {
    for (int64_t i = 0; i < m; ++i) {
        const double* arow = a + i * k;
        const double* dcrow = dc + i * n;
        for (int64_t p = 0; p < k; ++p) {
            const double aip = arow[p];
            double* dbrow = db + p * n;
            for (int64_t j = 0; j < n; ++j) dbrow[j] += aip * dcrow[j];
        }
    }
}

}  // namespace halc
