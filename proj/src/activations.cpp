#include "qonn/activations.hpp"

#include <cmath>
#include <string>

#include "qonn/wick.hpp"

namespace qonn {

namespace {
const double kRoot2 = std::sqrt(2.0);
}

double phi_subtraction(double alpha, double r) {
    if (r == 0.0) return kRoot2 * alpha;
    double s = std::sinh(r);
    double e2r = std::exp(2.0 * r);
    return kRoot2 * (std::exp(r) * alpha + alpha * e2r * s / (alpha * alpha * e2r + s * s));
}

double subtraction_herald_weight(double alpha, double r) {
    double s = std::sinh(r);
    return s * s + std::exp(2.0 * r) * alpha * alpha;
}

double subtraction_tau(double alpha, double r) {
    double s = std::sinh(r);
    return std::exp(r) * std::abs(s) / (alpha * alpha * std::exp(2.0 * r) + s * s);
}

NonlinearityReport nonlinearity_report(double alpha, double r, double eps) {
    if (r == 0.0)
        throw InvalidArgument("nonlinearity_report: r = 0 gives a purely linear map");
    double tau0 = subtraction_tau(0.0, r);  // e^r / |sinh r|
    if (eps <= 0.0 || eps >= tau0)
        throw InvalidArgument("nonlinearity_report: need 0 < eps < tau_r(0) = " +
                              std::to_string(tau0));
    NonlinearityReport rep;
    rep.alpha = alpha;
    rep.r = r;
    double s = std::sinh(r);
    double e2r = std::exp(2.0 * r);
    rep.linear_part = kRoot2 * std::exp(r) * alpha;
    rep.bump = kRoot2 * alpha * e2r * s / (alpha * alpha * e2r + s * s);
    rep.tau = subtraction_tau(alpha, r);
    rep.alpha_max = std::exp(-r) * std::sqrt(std::exp(r) * std::abs(s) / eps - s * s);
    return rep;
}

double x_readout_two_subtractions(const GaussianState& state, int p, int q, int j) {
    const int n = state.n_modes;
    if (p < 0 || p >= n || q < 0 || q >= n || j < 0 || j >= n)
        throw InvalidArgument("x_readout_two_subtractions: mode index outside system");

    // Contraction of two ladder operators in trace order.
    auto c = [&](LadderOp a, LadderOp b) {
        return state.contraction(a.bindex(n), b.bindex(n));
    };
    const LadderOp Qd = create_op(q), Pd = create_op(p), J = annihilate_op(j),
                   P = annihilate_op(p), Q = annihilate_op(q);
    const cxd mp = state.means[p], mq = state.means[q], mj = state.means[j];
    const cxd mpc = conj(mp), mqc = conj(mq);

    // Heralding denominator: all 10 loop matchings of (q^dag, p^dag, p, q).
    cxd den = mqc * mpc * mp * mq                  // four singles
              + c(Qd, Pd) * mp * mq                // one pair + two singles
              + c(Qd, P) * mpc * mq
              + c(Qd, Q) * mpc * mp
              + c(Pd, P) * mqc * mq
              + c(Pd, Q) * mqc * mp
              + c(P, Q) * mqc * mpc
              + c(Qd, Pd) * c(P, Q)                // two pairs
              + c(Qd, P) * c(Pd, Q)
              + c(Qd, Q) * c(Pd, P);
    double d_val = real(den);
    if (d_val <= 1e-12)
        throw DegenerateState("two-mode subtraction herald probability vanished");

    // Numerator over (q^dag, p^dag, j, p, q): j as a mean couples to every
    // denominator matching, then the 4 two-fluctuation and 12
    // four-fluctuation groups.
    cxd s2 = c(Qd, J) * mpc * mp * mq
             + c(Pd, J) * mqc * mp * mq
             + c(J, P) * mqc * mpc * mq
             + c(J, Q) * mqc * mpc * mp;
    cxd s4 = mqc * (c(Pd, J) * c(P, Q) + c(J, P) * c(Pd, Q) + c(J, Q) * c(Pd, P))
             + mpc * (c(Qd, J) * c(P, Q) + c(J, P) * c(Qd, Q) + c(J, Q) * c(Qd, P))
             + mp * (c(Qd, J) * c(Pd, Q) + c(Pd, J) * c(Qd, Q) + c(J, Q) * c(Qd, Pd))
             + mq * (c(Qd, J) * c(Pd, P) + c(Pd, J) * c(Qd, P) + c(J, P) * c(Qd, Pd));
    cxd num = mj * den + s2 + s4;
    return std::sqrt(2.0) * real(num) / d_val;
}

double phi_addition_n(double alpha, int n) {
    if (n < 1) throw InvalidArgument("phi_addition_n: need n >= 1");
    if (n > 20) throw InvalidArgument("phi_addition_n: n too large for stable factorials");
    double a2 = alpha * alpha;
    double num = 0.0, den = 0.0;
    double a2k = 1.0;
    for (int k = 0; k <= n; ++k) {
        double kfact = 1.0, nkfact = 1.0;
        for (int i = 2; i <= k; ++i) kfact *= i;
        for (int i = 2; i <= n - k; ++i) nkfact *= i;
        double common = a2k / (nkfact * kfact * kfact);
        num += common / (k + 1);
        den += common;
        a2k *= a2;
    }
    return kRoot2 * alpha * (n + 1) * num / den;
}

double phi_addition_squeezed(double alpha, double r) {
    double er = std::exp(r);
    double ch = std::cosh(r), sh = std::sinh(r);
    return kRoot2 * (er * alpha + er * alpha * (1.0 + er * sh) /
                                      (alpha * alpha * er * er + ch * ch));
}

HeraldingProbability heralding_probability(const GaussianState& state,
                                           const std::vector<int>& subtract_modes,
                                           const std::vector<double>& eta) {
    if (subtract_modes.empty())
        throw InvalidArgument("heralding_probability: empty subtraction set");
    if (eta.size() != subtract_modes.size())
        throw InvalidArgument("heralding_probability: one reflectivity per subtracted mode");
    const int n = state.n_modes;
    double eta_prod = 1.0;
    for (size_t i = 0; i < eta.size(); ++i) {
        if (eta[i] <= 0.0 || eta[i] > 1.0)
            throw InvalidArgument("heralding_probability: reflectivities must be in (0, 1]");
        if (subtract_modes[i] < 0 || subtract_modes[i] >= n)
            throw InvalidArgument("heralding_probability: mode index outside system");
        eta_prod *= eta[i];
    }

    // <A^dag A> over the Gaussian state, exact by Wick.
    LadderMonomial mono;
    mono.coeff = cxd{1.0};
    for (auto it = subtract_modes.rbegin(); it != subtract_modes.rend(); ++it)
        mono.ops.push_back(create_op(*it));
    for (int k : subtract_modes) mono.ops.push_back(annihilate_op(k));
    double expect = real(evaluate_monomial(mono, state));
    if (expect < -1e-12)
        throw InternalError("heralding_probability: <A^dag A> evaluated negative (" +
                            std::to_string(expect) + ")");
    if (expect < 0.0) expect = 0.0;

    HeraldingProbability out;
    out.exact = eta_prod * expect;
    out.weak_tap = 1.0;
    for (size_t i = 0; i < eta.size(); ++i) {
        int k = subtract_modes[i];
        out.weak_tap *= eta[i] * (real(state.cov(n + k, n + k)) + norm_sq(state.means[k]));
    }
    return out;
}

}  // namespace qonn
