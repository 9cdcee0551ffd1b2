#include "qonn/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qonn::fock {

namespace {

using Mat = std::vector<std::vector<zd>>;

Mat zeros(int n) { return Mat(n, std::vector<zd>(n)); }

Mat matmul(const Mat& a, const Mat& b) {
    int n = static_cast<int>(a.size());
    Mat c = zeros(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            zd v = a[i][k];
            if (v == zd{}) continue;
            for (int j = 0; j < n; ++j) c[i][j] += v * b[k][j];
        }
    return c;
}

double one_norm(const Mat& a) {
    double best = 0.0;
    for (size_t j = 0; j < a.size(); ++j) {
        double s = 0.0;
        for (size_t i = 0; i < a.size(); ++i) s += std::abs(a[i][j]);
        best = std::max(best, s);
    }
    return best;
}

// Scaling-and-squaring Taylor exponential; generator sizes stay <= cutoff.
Mat expm(Mat a) {
    int n = static_cast<int>(a.size());
    int squarings = 0;
    double nrm = one_norm(a);
    while (nrm > 0.5) {
        nrm /= 2.0;
        ++squarings;
    }
    double scale = std::ldexp(1.0, -squarings);
    for (auto& row : a)
        for (auto& v : row) v *= scale;
    Mat result = zeros(n), term = zeros(n);
    for (int i = 0; i < n; ++i) result[i][i] = term[i][i] = 1.0;
    for (int k = 1; k <= 24; ++k) {
        term = matmul(term, a);
        double inv = 1.0 / k;
        bool tiny = true;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                term[i][j] *= inv;
                result[i][j] += term[i][j];
                if (std::abs(term[i][j]) > 1e-18) tiny = false;
            }
        if (tiny) break;
    }
    for (int s = 0; s < squarings; ++s) result = matmul(result, result);
    return result;
}

// Single-mode generators on the truncated ladder.
Mat ladder_down(int d) {
    Mat a = zeros(d);
    for (int n = 1; n < d; ++n) a[n - 1][n] = std::sqrt(static_cast<double>(n));
    return a;
}

Mat displacement_generator(int d, zd alpha) {
    Mat g = zeros(d);
    for (int n = 1; n < d; ++n) {
        double s = std::sqrt(static_cast<double>(n));
        g[n][n - 1] += alpha * s;              // alpha a^dag
        g[n - 1][n] -= std::conj(alpha) * s;   // -alpha* a
    }
    return g;
}

Mat squeeze_generator(int d, double r) {
    // r/2 (a^dag^2 - a^2): positive r anti-squeezes position.
    Mat g = zeros(d);
    for (int n = 2; n < d; ++n) {
        double s = 0.5 * r * std::sqrt(static_cast<double>(n) * (n - 1));
        g[n][n - 2] += s;
        g[n - 2][n] -= s;
    }
    return g;
}

Mat cubic_generator(int d, double gamma) {
    // i gamma x^3 / 3 with x = (a + a^dag)/sqrt(2)
    Mat x = zeros(d);
    for (int n = 1; n < d; ++n) {
        double s = std::sqrt(static_cast<double>(n) / 2.0);
        x[n - 1][n] = s;
        x[n][n - 1] = s;
    }
    Mat x3 = matmul(matmul(x, x), x);
    zd f = zd(0.0, gamma / 3.0);
    for (auto& row : x3)
        for (auto& v : row) v *= f;
    return x3;
}

// Apply a dense single-mode matrix along one tensor axis.
void apply_single_mode(FockState& st, int mode, const Mat& m) {
    const int d = st.cutoff;
    if (st.n_modes == 1) {
        std::vector<zd> out(d);
        for (int i = 0; i < d; ++i) {
            zd s{};
            for (int k = 0; k < d; ++k) s += m[i][k] * st.amp[k];
            out[i] = s;
        }
        st.amp = std::move(out);
        return;
    }
    std::vector<zd> out(st.amp.size());
    if (mode == 0) {
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i) {
                zd s{};
                for (int k = 0; k < d; ++k) s += m[i][k] * st.amp[static_cast<size_t>(k) * d + j];
                out[static_cast<size_t>(i) * d + j] = s;
            }
    } else {
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                zd s{};
                for (int k = 0; k < d; ++k) s += m[j][k] * st.amp[static_cast<size_t>(i) * d + k];
                out[static_cast<size_t>(i) * d + j] = s;
            }
    }
    st.amp = std::move(out);
}

void check_mode(const FockState& st, int mode) {
    if (mode < 0 || mode >= st.n_modes)
        throw InvalidArgument("fock: mode index outside system");
}

// Principal log of a 2x2 unitary via its SU(2) + global phase split.
void unitary_log_2x2(const zd u[2][2], zd out[2][2]) {
    zd det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    double psi = std::arg(det);
    zd root = std::exp(zd(0.0, -psi / 2.0));
    zd s[2][2] = {{root * u[0][0], root * u[0][1]}, {root * u[1][0], root * u[1][1]}};
    double ct = std::clamp(0.5 * (s[0][0] + s[1][1]).real(), -1.0, 1.0);
    double t = std::acos(ct);
    double st_ = std::sin(t);
    zd h[2][2] = {{0, 0}, {0, 0}};  // Hermitian axis matrix n.sigma
    if (st_ > 1e-12) {
        zd inv = zd(0.0, -1.0) / st_;
        h[0][0] = inv * (s[0][0] - ct);
        h[0][1] = inv * s[0][1];
        h[1][0] = inv * s[1][0];
        h[1][1] = inv * (s[1][1] - ct);
    } else if (ct < 0.0) {
        h[0][0] = 1.0;  // S = -I: pick the sigma_z branch
        h[1][1] = -1.0;
    }
    zd it = zd(0.0, t);
    zd ip = zd(0.0, psi / 2.0);
    out[0][0] = ip + it * h[0][0];
    out[0][1] = it * h[0][1];
    out[1][0] = it * h[1][0];
    out[1][1] = ip + it * h[1][1];
}

}  // namespace

FockState FockState::make_vacuum(int n_modes, int cutoff) {
    if (n_modes < 1 || n_modes > 2)
        throw InvalidArgument("fock oracle supports 1 or 2 modes");
    if (cutoff < 2) throw InvalidArgument("fock oracle needs cutoff >= 2");
    FockState st;
    st.n_modes = n_modes;
    st.cutoff = cutoff;
    st.amp.assign(n_modes == 1 ? cutoff : static_cast<size_t>(cutoff) * cutoff, zd{});
    st.amp[0] = 1.0;
    return st;
}

double FockState::norm_sq() const {
    double s = 0.0;
    for (const zd& a : amp) s += std::norm(a);
    return s;
}

void FockState::normalize() {
    double n = std::sqrt(norm_sq());
    if (n == 0.0) throw DegenerateState("fock state collapsed to zero norm");
    for (zd& a : amp) a /= n;
}

double FockState::leakage() const {
    const int top = static_cast<int>(std::floor(0.9 * cutoff));
    double mass = 0.0;
    if (n_modes == 1) {
        for (int n = top; n < cutoff; ++n) mass += std::norm(amp[n]);
    } else {
        for (int i = 0; i < cutoff; ++i)
            for (int j = 0; j < cutoff; ++j)
                if (i >= top || j >= top) mass += std::norm(amp[static_cast<size_t>(i) * cutoff + j]);
    }
    double total = norm_sq();
    return total > 0.0 ? mass / total : 0.0;
}

void FockState::check_leakage(const char* gate) const {
    double l = leakage();
    if (l > leakage_threshold)
        throw CutoffTooSmall(std::string("fock cutoff ") + std::to_string(cutoff) +
                             " too small after " + gate + " (leakage " + std::to_string(l) +
                             "); retry with cutoff >= " + std::to_string(2 * cutoff));
}

void displace(FockState& st, int mode, zd alpha) {
    check_mode(st, mode);
    apply_single_mode(st, mode, expm(displacement_generator(st.cutoff, alpha)));
    st.check_leakage("displace");
}

void squeeze(FockState& st, int mode, double r) {
    check_mode(st, mode);
    apply_single_mode(st, mode, expm(squeeze_generator(st.cutoff, r)));
    st.check_leakage("squeeze");
}

void phase_shift(FockState& st, int mode, double phi) {
    check_mode(st, mode);
    Mat m = zeros(st.cutoff);
    for (int n = 0; n < st.cutoff; ++n) m[n][n] = std::exp(zd(0.0, phi * n));
    apply_single_mode(st, mode, m);
}

void cubic_phase(FockState& st, int mode, double gamma) {
    check_mode(st, mode);
    apply_single_mode(st, mode, expm(cubic_generator(st.cutoff, gamma)));
    st.check_leakage("cubic_phase");
}

void two_mode_mixer(FockState& st, const zd u[2][2]) {
    if (st.n_modes != 2) throw InvalidArgument("two_mode_mixer needs a 2-mode state");
    zd a[2][2];
    unitary_log_2x2(u, a);
    const int d = st.cutoff;
    std::vector<zd> out(st.amp.size());
    // Photon number is conserved: exponentiate the tridiagonal generator
    // block for each total occupation n and rotate the diagonal slice.
    for (int n = 0; n <= 2 * (d - 1); ++n) {
        int lo = std::max(0, n - (d - 1));
        int hi = std::min(n, d - 1);
        int len = hi - lo + 1;
        Mat block = zeros(len);
        for (int t = 0; t < len; ++t) {
            int k = lo + t;  // occupation of mode 0
            block[t][t] = a[0][0] * static_cast<double>(k) + a[1][1] * static_cast<double>(n - k);
            if (t + 1 < len)  // a_0^dag a_1 : (k, n-k) -> (k+1, n-k-1)
                block[t + 1][t] = a[0][1] * std::sqrt(static_cast<double>(k + 1) * (n - k));
            if (t > 0)  // a_1^dag a_0
                block[t - 1][t] = a[1][0] * std::sqrt(static_cast<double>(k) * (n - k + 1));
        }
        Mat ub = expm(block);
        for (int t = 0; t < len; ++t) {
            zd s{};
            for (int w = 0; w < len; ++w) {
                int k = lo + w;
                s += ub[t][w] * st.amp[static_cast<size_t>(k) * d + (n - k)];
            }
            int kt = lo + t;
            out[static_cast<size_t>(kt) * d + (n - kt)] = s;
        }
    }
    st.amp = std::move(out);
}

namespace {

// In-place ladder application without renormalization.
void raw_ladder(FockState& st, int mode, bool dagger) {
    const int d = st.cutoff;
    auto stride = [&](int idx, int n_level) {
        return st.n_modes == 1 ? n_level
                               : (mode == 0 ? n_level * d + idx : idx * d + n_level);
    };
    const int other = st.n_modes == 1 ? 1 : d;
    std::vector<zd> out(st.amp.size());
    for (int o = 0; o < other; ++o) {
        if (!dagger) {
            for (int n = 1; n < d; ++n)
                out[stride(o, n - 1)] += std::sqrt(static_cast<double>(n)) * st.amp[stride(o, n)];
        } else {
            for (int n = 0; n + 1 < d; ++n)
                out[stride(o, n + 1)] += std::sqrt(static_cast<double>(n + 1)) * st.amp[stride(o, n)];
        }
    }
    st.amp = std::move(out);
}

}  // namespace

double annihilate(FockState& st, int mode) {
    check_mode(st, mode);
    raw_ladder(st, mode, false);
    double w = st.norm_sq();
    st.normalize();
    return w;
}

double create(FockState& st, int mode) {
    check_mode(st, mode);
    raw_ladder(st, mode, true);
    double w = st.norm_sq();
    st.normalize();
    st.check_leakage("create");
    return w;
}

zd expect_monomial(const FockState& st, const std::vector<LadderOp>& ops) {
    FockState work = st;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        check_mode(st, it->mode);
        raw_ladder(work, it->mode, it->dagger);
    }
    zd s{};
    for (size_t i = 0; i < st.amp.size(); ++i) s += std::conj(st.amp[i]) * work.amp[i];
    return s;
}

void apply_gaussian_layer(FockState& st, const GaussianLayerParams& lp) {
    const int n = st.n_modes;
    CMat<double> u1 = unitary_from_params(lp.u1, n);
    CMat<double> u2 = unitary_from_params(lp.u2, n);
    auto apply_unitary = [&](const CMat<double>& u, bool adjoint_of) {
        if (n == 1) {
            cxd e = adjoint_of ? conj(u(0, 0)) : u(0, 0);
            phase_shift(st, 0, std::atan2(e.im, e.re));
            return;
        }
        zd m[2][2];
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                cxd e = adjoint_of ? conj(u(j, i)) : u(i, j);
                m[i][j] = to_std(e);
            }
        two_mode_mixer(st, m);
    };
    apply_unitary(u1, /*adjoint_of=*/true);
    for (int k = 0; k < n; ++k)
        if (lp.r[k] != 0.0) squeeze(st, k, lp.r[k]);
    apply_unitary(u2, /*adjoint_of=*/false);
    for (int k = 0; k < n; ++k)
        if (!(lp.delta[k] == cxd{})) displace(st, k, to_std(lp.delta[k]));
}

std::vector<std::vector<LadderOp>> moment_set_ops(int mode) {
    const LadderOp a = annihilate_op(mode), ad = create_op(mode);
    return {{a}, {a, a}, {ad, a}, {a, a, a}, {a, a, ad}, {ad, a, ad, a}};
}

std::vector<zd> moments_order4(const FockState& st, int mode) {
    std::vector<zd> out;
    for (const auto& ops : moment_set_ops(mode)) out.push_back(expect_monomial(st, ops));
    return out;
}

}  // namespace qonn::fock
