#ifndef QONN_GAUSSIAN_HPP
#define QONN_GAUSSIAN_HPP

#include <string>
#include <vector>

#include "qonn/linalg.hpp"

namespace qonn {

// Hardware ceiling on single-mode squeezing strength (15 dB).
inline constexpr double kSqueezeBound = 1.7;

// N-mode pure Gaussian state in the ladder basis b = (a_1..a_N, a_1^dag..a_N^dag).
//
// means[i]  = <b_i>, with means[N+k] = conj(means[k]).
// cov(i,j)  = <db_i db_j^dag> where db = b - <b> and b_j^dag is the entrywise
//             adjoint of the ladder vector. Spelled out per block (0-based
//             modes r, s):
//               cov(r,     s)     = <da_r      da_s^dag>
//               cov(r,     N+s)   = <da_r      da_s>
//               cov(N+r,   s)     = <da_r^dag  da_s^dag>
//               cov(N+r,   N+s)   = <da_r^dag  da_s>
// This storage transforms as cov -> B cov B^dag under a Bogoliubov map, and
// the vacuum is [[I, 0], [0, 0]].
template <class R>
struct GaussianStateT {
    int n_modes = 0;
    CVec<R> means;  // length 2N
    CMat<R> cov;    // 2N x 2N

    // <db_u db_w> for raw ladder indices u, w in [0, 2N), operators taken in
    // the given order. Derived from storage: db_w = (db_{w xor N})^dag.
    Cx<R> contraction(int u, int w) const {
        int wf = w < n_modes ? w + n_modes : w - n_modes;
        return cov(u, wf);
    }
};

using GaussianState = GaussianStateT<double>;

// Bogoliubov matrix [[U, V], [V*, U*]] of a quadratic Gaussian unitary acting
// on first moments as b -> B b. Stored assembled; u/v entries are views.
template <class R>
struct BogoliubovT {
    int n_modes = 0;
    CMat<R> b;  // 2N x 2N

    static BogoliubovT identity(int n) { return {n, CMat<R>::identity(2 * n)}; }

    static BogoliubovT from_blocks(const CMat<R>& u, const CMat<R>& v) {
        int n = u.rows;
        if (u.cols != n || v.rows != n || v.cols != n)
            throw InvalidArgument("Bogoliubov blocks must be square and equal-sized");
        BogoliubovT out{n, CMat<R>(2 * n, 2 * n)};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                out.b(i, j) = u(i, j);
                out.b(i, n + j) = v(i, j);
                out.b(n + i, j) = conj(v(i, j));
                out.b(n + i, n + j) = conj(u(i, j));
            }
        return out;
    }

    Cx<R> u(int k, int j) const { return b(k, j); }
    Cx<R> v(int k, int j) const { return b(k, n_modes + j); }

    // Symplectic inverse: B^-1 = Omega B^dag Omega with Omega = diag(I, -I).
    BogoliubovT inverse() const {
        int n2 = 2 * n_modes;
        BogoliubovT out{n_modes, CMat<R>(n2, n2)};
        for (int i = 0; i < n2; ++i)
            for (int j = 0; j < n2; ++j) {
                double sign = ((i < n_modes) == (j < n_modes)) ? 1.0 : -1.0;
                out.b(i, j) = sign * conj(b(j, i));
            }
        return out;
    }
};

using BogoliubovMatrix = BogoliubovT<double>;

template <class R>
BogoliubovT<R> compose(const BogoliubovT<R>& later, const BogoliubovT<R>& earlier) {
    if (later.n_modes != earlier.n_modes)
        throw InvalidArgument("Bogoliubov composition: mode counts differ");
    return {later.n_modes, mul(later.b, earlier.b)};
}

// max |(B Omega B^dag - Omega)_ij|; zero iff the CCR are preserved.
template <class R>
double symplectic_residual(const BogoliubovT<R>& bm) {
    int n = bm.n_modes, n2 = 2 * n;
    CMat<R> om(n2, n2);
    for (int i = 0; i < n2; ++i) om(i, i) = Cx<R>(R(i < n ? 1.0 : -1.0));
    CMat<R> lhs = mul(mul(bm.b, om), adjoint(bm.b));
    return max_abs_diff(lhs, om);
}

// One layer's Gaussian block: first interferometer, squeezers (phase fixed to
// zero, signed strength), second interferometer, displacements.
template <class R>
struct GaussianLayerParamsT {
    std::vector<R> u1;  // N^2 reals
    std::vector<R> r;   // N reals, |r_k| <= kSqueezeBound
    std::vector<R> u2;  // N^2 reals
    CVec<R> delta;      // N complex displacements
};

using GaussianLayerParams = GaussianLayerParamsT<double>;

inline long param_count_per_layer(int n_modes) {
    return 2L * n_modes * n_modes + 3L * n_modes;
}

template <class R>
GaussianStateT<R> vacuum_t(int n_modes) {
    if (n_modes < 1) throw InvalidArgument("vacuum: need at least one mode");
    GaussianStateT<R> s;
    s.n_modes = n_modes;
    s.means.assign(2 * n_modes, Cx<R>{});
    s.cov = CMat<R>(2 * n_modes, 2 * n_modes);
    for (int k = 0; k < n_modes; ++k) s.cov(k, k) = Cx<R>(R(1.0));
    return s;
}

inline GaussianState vacuum(int n_modes) { return vacuum_t<double>(n_modes); }

// Load real inputs as coherent amplitudes of the first M modes.
template <class R>
GaussianStateT<R> load_inputs(const GaussianStateT<R>& state, const std::vector<R>& alpha) {
    int n = state.n_modes;
    if (static_cast<int>(alpha.size()) > n)
        throw InvalidArgument("load_inputs: more inputs than modes");
    for (const auto& m : state.means)
        if (value_of(m.re) != 0.0 || value_of(m.im) != 0.0)
            throw InvalidArgument("load_inputs: state must be the vacuum");
    GaussianStateT<R> out = state;
    for (size_t k = 0; k < alpha.size(); ++k) {
        out.means[k] = Cx<R>(alpha[k]);
        out.means[n + k] = Cx<R>(alpha[k]);
    }
    return out;
}

// N^2-parameter smooth chart of U(N): a rectangular mesh of N(N-1)/2 two-mode
// rotations (angle + phase each) followed by N output phases. Identity at the
// origin.
template <class R>
CMat<R> unitary_from_params(const std::vector<R>& params, int n_modes) {
    if (static_cast<long>(params.size()) != static_cast<long>(n_modes) * n_modes)
        throw InvalidArgument("unitary_from_params: expected N^2 parameters, got " +
                              std::to_string(params.size()));
    using std::cos;
    using std::sin;
    CMat<R> u = CMat<R>::identity(n_modes);
    size_t p = 0;
    for (int layer = 0; layer < n_modes; ++layer) {
        for (int i = layer % 2; i + 1 < n_modes; i += 2) {
            R theta = params[p++];
            R phi = params[p++];
            Cx<R> c{cos(theta)};
            Cx<R> s{sin(theta)};
            Cx<R> em = polar_unit(-phi);
            Cx<R> ep = polar_unit(phi);
            // rows i, i+1 of u <- T(theta, phi) * u
            for (int j = 0; j < n_modes; ++j) {
                Cx<R> a = u(i, j), b = u(i + 1, j);
                u(i, j) = c * a - s * em * b;
                u(i + 1, j) = s * ep * a + c * b;
            }
        }
    }
    for (int k = 0; k < n_modes; ++k) {
        Cx<R> ph = polar_unit(params[p++]);
        for (int j = 0; j < n_modes; ++j) u(k, j) = ph * u(k, j);
    }
    if (p != params.size())
        throw InternalError("unitary_from_params: parameter layout mismatch");
    return u;
}

// Build the layer's Bogoliubov matrix U = U2 cosh(R) U1^dag,
// V = U2 sinh(R) U1^T and displacement d = (delta, delta*). The V sign is
// fixed so a positive r anti-squeezes position: means scale by e^r.
template <class R>
std::pair<BogoliubovT<R>, CVec<R>> bogoliubov_from_layer(const GaussianLayerParamsT<R>& lp,
                                                         int n_modes) {
    using std::cosh;
    using std::sinh;
    if (static_cast<int>(lp.r.size()) != n_modes ||
        static_cast<int>(lp.delta.size()) != n_modes)
        throw InvalidArgument("bogoliubov_from_layer: r/delta size must equal mode count");
    for (const R& rk : lp.r)
        if (value_of(rk) > kSqueezeBound + 1e-12 || value_of(rk) < -kSqueezeBound - 1e-12)
            throw BoundViolation("squeezing strength exceeds |r| <= 1.7");

    CMat<R> u1 = unitary_from_params(lp.u1, n_modes);
    CMat<R> u2 = unitary_from_params(lp.u2, n_modes);
    if (unitarity_residual(u1) > 1e-10 || unitarity_residual(u2) > 1e-10)
        throw InternalError("interferometer mesh produced a non-unitary matrix");

    CMat<R> ch(n_modes, n_modes), sh(n_modes, n_modes);
    for (int k = 0; k < n_modes; ++k) {
        ch(k, k) = Cx<R>(cosh(lp.r[k]));
        sh(k, k) = Cx<R>(sinh(lp.r[k]));
    }
    CMat<R> u = mul(mul(u2, ch), adjoint(u1));
    CMat<R> v = mul(mul(u2, sh), transpose(u1));
    auto bm = BogoliubovT<R>::from_blocks(u, v);
    if (symplectic_residual(bm) > 1e-10)
        throw InternalError("layer Bogoliubov matrix violates the CCR invariant");

    CVec<R> d(2 * n_modes);
    for (int k = 0; k < n_modes; ++k) {
        d[k] = lp.delta[k];
        d[n_modes + k] = conj(lp.delta[k]);
    }
    return {bm, d};
}

// means -> B means + d, cov -> B cov B^dag.
template <class R>
GaussianStateT<R> apply_gaussian(const GaussianStateT<R>& state, const BogoliubovT<R>& bm,
                                 const CVec<R>& d) {
    if (bm.n_modes != state.n_modes || d.size() != state.means.size())
        throw InvalidArgument("apply_gaussian: dimension mismatch");
    GaussianStateT<R> out;
    out.n_modes = state.n_modes;
    out.means = mul(bm.b, state.means);
    for (size_t i = 0; i < d.size(); ++i) out.means[i] += d[i];
    out.cov = mul(mul(bm.b, state.cov), adjoint(bm.b));
    return out;
}

// Mean photon number of one mode: <n_k> = cov(N+k, N+k) + |means_k|^2.
template <class R>
R mean_photons(const GaussianStateT<R>& state, int k) {
    return real(state.cov(state.n_modes + k, state.n_modes + k)) + norm_sq(state.means[k]);
}

}  // namespace qonn

#endif
