#ifndef QONN_LINALG_HPP
#define QONN_LINALG_HPP

#include <vector>

#include "qonn/complex.hpp"
#include "qonn/errors.hpp"

namespace qonn {

template <class R>
using CVec = std::vector<Cx<R>>;

// Dense row-major complex matrix over a generic real scalar. Systems here are
// tiny (2N x 2N with N <= ~8), so naive kernels are the right tool.
template <class R>
struct CMat {
    int rows = 0;
    int cols = 0;
    std::vector<Cx<R>> a;

    CMat() = default;
    CMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    Cx<R>& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Cx<R>& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static CMat identity(int n) {
        CMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = Cx<R>(R(1.0));
        return m;
    }
};

template <class R>
CMat<R> mul(const CMat<R>& x, const CMat<R>& y) {
    if (x.cols != y.rows) throw InvalidArgument("matrix product: inner dimensions differ");
    CMat<R> z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i) {
        for (int k = 0; k < x.cols; ++k) {
            Cx<R> xv = x(i, k);
            for (int j = 0; j < y.cols; ++j) z(i, j) += xv * y(k, j);
        }
    }
    return z;
}

template <class R>
CVec<R> mul(const CMat<R>& x, const CVec<R>& v) {
    if (x.cols != static_cast<int>(v.size()))
        throw InvalidArgument("matrix-vector product: dimensions differ");
    CVec<R> out(x.rows);
    for (int i = 0; i < x.rows; ++i) {
        Cx<R> s{};
        for (int j = 0; j < x.cols; ++j) s += x(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

template <class R>
CMat<R> adjoint(const CMat<R>& x) {
    CMat<R> z(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) z(j, i) = conj(x(i, j));
    return z;
}

template <class R>
CMat<R> transpose(const CMat<R>& x) {
    CMat<R> z(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) z(j, i) = x(i, j);
    return z;
}

template <class R>
CMat<R> conjugate(const CMat<R>& x) {
    CMat<R> z(x.rows, x.cols);
    for (size_t i = 0; i < x.a.size(); ++i) z.a[i] = conj(x.a[i]);
    return z;
}

template <class R>
double max_abs_diff(const CMat<R>& x, const CMat<R>& y) {
    double m = 0.0;
    for (size_t i = 0; i < x.a.size(); ++i) {
        double dr = value_of(x.a[i].re - y.a[i].re);
        double di = value_of(x.a[i].im - y.a[i].im);
        double d = std::sqrt(dr * dr + di * di);
        if (d > m) m = d;
    }
    return m;
}

// Unitarity residual max_ij |(U U^dag - I)_ij|, on value parts.
template <class R>
double unitarity_residual(const CMat<R>& u) {
    CMat<R> p = mul(u, adjoint(u));
    return max_abs_diff(p, CMat<R>::identity(u.rows));
}

// Numerical rank by Gaussian elimination with partial pivoting (double only;
// used by tests and diagnostics).
int matrix_rank(CMat<double> m, double tol = 1e-9);

}  // namespace qonn

#endif
