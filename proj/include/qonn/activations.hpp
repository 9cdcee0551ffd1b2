#ifndef QONN_ACTIVATIONS_HPP
#define QONN_ACTIVATIONS_HPP

#include <vector>

#include "qonn/gaussian.hpp"

namespace qonn {

// Homodyne readout of a photon-subtracted squeezed coherent state
// a S(r) D(alpha)|0>:
//   Phi_r(alpha) = sqrt(2) (e^r alpha + alpha e^{2r} sinh r /
//                           (alpha^2 e^{2r} + sinh^2 r)),
// continued by its limit sqrt(2) alpha at r = 0. At alpha = r = 0 the value
// is the removable limit 0; the physical herald never fires there (see
// subtraction_herald_weight).
double phi_subtraction(double alpha, double r);

// <a^dag a> of S(r)D(alpha)|0>; the subtraction click probability is this
// times the tap reflectivity. Zero exactly at alpha = r = 0.
double subtraction_herald_weight(double alpha, double r);

// Relative nonlinear contribution tau_r(alpha) = |R_r(alpha) / L_r(alpha)|.
double subtraction_tau(double alpha, double r);

struct NonlinearityReport {
    double alpha = 0.0;
    double r = 0.0;
    double linear_part = 0.0;  // sqrt(2) e^r alpha
    double bump = 0.0;         // sqrt(2) R_r(alpha)
    double tau = 0.0;          // |bump / linear_part|
    double alpha_max = 0.0;    // positive root of tau_r(alpha) = eps
};

inline constexpr double kDefaultNonlinearityEps = 0.1;

// Decompose Phi_r at one point and report the input range |alpha| <=
// alpha_max(r, eps) where the nonlinear share stays above eps. Requires
// r != 0 and 0 < eps < tau_r(0).
NonlinearityReport nonlinearity_report(double alpha, double r,
                                       double eps = kDefaultNonlinearityEps);

// Homodyne readout after two photon subtractions on modes p and q of an
// arbitrary Gaussian state (26-term closed form; fifth-order moment over
// fourth-order heralding denominator). Valid unchanged for j in {p, q} and
// for p = q.
double x_readout_two_subtractions(const GaussianState& state, int p, int q, int j);

// n-fold photon addition on a real coherent state: Laguerre-ratio form.
double phi_addition_n(double alpha, int n);

// Single photon addition on a squeezed real coherent state a^dag S(r)D(alpha)|0>.
double phi_addition_squeezed(double alpha, double r);

struct HeraldingProbability {
    double exact = 0.0;     // (prod eta_k) <A_K^dag A_K>
    double weak_tap = 0.0;  // prod eta_k (Sigma_{N+k,N+k} + |mean_k|^2)
};

// Success probability of simultaneous subtractions on the mode set K with
// per-mode tap reflectivities eta.
HeraldingProbability heralding_probability(const GaussianState& state,
                                           const std::vector<int>& subtract_modes,
                                           const std::vector<double>& eta);

}  // namespace qonn

#endif
