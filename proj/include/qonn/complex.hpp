#ifndef QONN_COMPLEX_HPP
#define QONN_COMPLEX_HPP

#include <cmath>
#include <complex>

#include "qonn/dual.hpp"

namespace qonn {

// Minimal complex-over-generic-real-scalar type. std::complex only guarantees
// behaviour for float/double/long double, so the dual-number path needs its
// own complex; double instantiations compile to the same arithmetic.
template <class R>
struct Cx {
    R re{};
    R im{};

    Cx() = default;
    Cx(R r) : re(r), im(R(0.0)) {}  // NOLINT: implicit by design
    Cx(R r, R i) : re(r), im(i) {}

    Cx& operator+=(const Cx& o) { re += o.re; im += o.im; return *this; }
    Cx& operator-=(const Cx& o) { re -= o.re; im -= o.im; return *this; }
    Cx& operator*=(const Cx& o) {
        R r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = r;
        return *this;
    }
    Cx& operator/=(const Cx& o) {
        R n = o.re * o.re + o.im * o.im;
        R r = (re * o.re + im * o.im) / n;
        im = (im * o.re - re * o.im) / n;
        re = r;
        return *this;
    }
    Cx operator-() const { return {-re, -im}; }
};

template <class R> Cx<R> operator+(Cx<R> a, const Cx<R>& b) { return a += b; }
template <class R> Cx<R> operator-(Cx<R> a, const Cx<R>& b) { return a -= b; }
template <class R> Cx<R> operator*(Cx<R> a, const Cx<R>& b) { return a *= b; }
template <class R> Cx<R> operator/(Cx<R> a, const Cx<R>& b) { return a /= b; }

template <class R> Cx<R> operator+(Cx<R> a, const R& s) { a.re += s; return a; }
template <class R> Cx<R> operator+(const R& s, Cx<R> a) { a.re += s; return a; }
template <class R> Cx<R> operator-(Cx<R> a, const R& s) { a.re -= s; return a; }
template <class R> Cx<R> operator*(Cx<R> a, const R& s) { a.re *= s; a.im *= s; return a; }
template <class R> Cx<R> operator*(const R& s, Cx<R> a) { a.re *= s; a.im *= s; return a; }
template <class R> Cx<R> operator/(Cx<R> a, const R& s) { a.re /= s; a.im /= s; return a; }

// Mixed double convenience for the Dual instantiation.
inline Cx<Dual> operator*(double s, Cx<Dual> a) { return Cx<Dual>(Dual(s)) * a; }
inline Cx<Dual> operator*(Cx<Dual> a, double s) { return a * Cx<Dual>(Dual(s)); }

template <class R> bool operator==(const Cx<R>& a, const Cx<R>& b) {
    return a.re == b.re && a.im == b.im;
}

template <class R> Cx<R> conj(const Cx<R>& a) { return {a.re, -a.im}; }
template <class R> R real(const Cx<R>& a) { return a.re; }
template <class R> R imag(const Cx<R>& a) { return a.im; }
template <class R> R norm_sq(const Cx<R>& a) { return a.re * a.re + a.im * a.im; }
template <class R> R abs(const Cx<R>& a) {
    using std::sqrt;
    return sqrt(norm_sq(a));
}

// e^{i theta}
template <class R> Cx<R> polar_unit(const R& theta) {
    using std::cos;
    using std::sin;
    return {cos(theta), sin(theta)};
}

template <class R> std::complex<double> value_of(const Cx<R>& a) {
    return {value_of(a.re), value_of(a.im)};
}

using cxd = Cx<double>;

inline cxd from_std(const std::complex<double>& z) { return {z.real(), z.imag()}; }
inline std::complex<double> to_std(const cxd& z) { return {z.re, z.im}; }

}  // namespace qonn

#endif
