#ifndef QONN_DUAL_HPP
#define QONN_DUAL_HPP

#include <cmath>

namespace qonn {

// First-order forward-mode scalar: value plus one directional derivative.
// The whole expectation engine is templated over the real scalar type, so
// instantiating it with Dual yields machine-precision directional gradients
// of any output with respect to one network parameter per pass.
struct Dual {
    double v = 0.0;  // value
    double d = 0.0;  // derivative along the seeded direction

    Dual() = default;
    Dual(double value) : v(value), d(0.0) {}  // NOLINT: implicit by design
    Dual(double value, double deriv) : v(value), d(deriv) {}

    Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
    Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
    Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
    Dual& operator/=(const Dual& o) {
        d = (d * o.v - v * o.d) / (o.v * o.v);
        v /= o.v;
        return *this;
    }
    Dual operator-() const { return {-v, -d}; }
};

inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator*(Dual a, const Dual& b) { return a *= b; }
inline Dual operator/(Dual a, const Dual& b) { return a /= b; }

inline bool operator<(const Dual& a, const Dual& b) { return a.v < b.v; }
inline bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }
inline bool operator<=(const Dual& a, const Dual& b) { return a.v <= b.v; }
inline bool operator>=(const Dual& a, const Dual& b) { return a.v >= b.v; }
inline bool operator==(const Dual& a, const Dual& b) { return a.v == b.v; }
inline bool operator!=(const Dual& a, const Dual& b) { return a.v != b.v; }

inline Dual sqrt(const Dual& x) {
    double s = std::sqrt(x.v);
    return {s, s > 0.0 ? x.d / (2.0 * s) : 0.0};
}
inline Dual exp(const Dual& x) {
    double e = std::exp(x.v);
    return {e, e * x.d};
}
inline Dual log(const Dual& x) { return {std::log(x.v), x.d / x.v}; }
inline Dual sin(const Dual& x) { return {std::sin(x.v), std::cos(x.v) * x.d}; }
inline Dual cos(const Dual& x) { return {std::cos(x.v), -std::sin(x.v) * x.d}; }
inline Dual sinh(const Dual& x) { return {std::sinh(x.v), std::cosh(x.v) * x.d}; }
inline Dual cosh(const Dual& x) { return {std::cosh(x.v), std::sinh(x.v) * x.d}; }
inline Dual tanh(const Dual& x) {
    double t = std::tanh(x.v);
    return {t, (1.0 - t * t) * x.d};
}
inline Dual abs(const Dual& x) { return x.v < 0.0 ? -x : x; }
inline Dual fabs(const Dual& x) { return abs(x); }

// Strip the derivative part; `value_of` is the uniform hook generic code uses
// when it needs a plain double (thresholds, convergence checks, reporting).
inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.v; }

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(const Dual& x) { return std::isfinite(x.v) && std::isfinite(x.d); }

}  // namespace qonn

#endif
