#ifndef QONN_FOCK_HPP
#define QONN_FOCK_HPP

#include <complex>
#include <vector>

#include "qonn/gaussian.hpp"
#include "qonn/ladder.hpp"

namespace qonn::fock {

using zd = std::complex<double>;

// Truncated Fock-space state vector for small systems (1 or 2 modes). This
// is the brute-force validation oracle; the expectation engine itself never
// truncates.
struct FockState {
    int n_modes = 1;
    int cutoff = 0;                 // levels 0..cutoff-1 per mode
    std::vector<zd> amp;            // mode-0 major: idx = n0 * cutoff + n1
    double leakage_threshold = 1e-8;

    static FockState make_vacuum(int n_modes, int cutoff);

    size_t dim() const { return amp.size(); }
    double norm_sq() const;
    void normalize();
    // Probability mass in the top 10% of levels of any mode.
    double leakage() const;
    void check_leakage(const char* gate) const;
};

// Unitary gates (truncated-generator exponentials, scaling and squaring).
void displace(FockState& st, int mode, zd alpha);
void squeeze(FockState& st, int mode, double r);     // means scale e^r for r > 0
void phase_shift(FockState& st, int mode, double phi);
void cubic_phase(FockState& st, int mode, double gamma);  // exp(i gamma x^3 / 3)
// Passive 2x2 unitary acting on the two modes, statistics <a> -> U <a>.
void two_mode_mixer(FockState& st, const zd u[2][2]);

// Non-unitary ladder applications; both renormalize and return the
// pre-normalization norm^2 (herald weight).
double annihilate(FockState& st, int mode);
double create(FockState& st, int mode);

// <psi| op_1 ... op_M |psi> with operators applied right to left.
zd expect_monomial(const FockState& st, const std::vector<LadderOp>& ops);

// Apply one full Gaussian layer in the engine's convention:
// U1^dag mesh, squeezers, U2 mesh, displacements.
void apply_gaussian_layer(FockState& st, const GaussianLayerParams& lp);

// The benchmark moment set {<a>, <a^2>, <N>, <a^3>, <a^2 a^dag>, <N^2>} of
// one mode, N = a^dag a.
std::vector<zd> moments_order4(const FockState& st, int mode = 0);

// Operator sequences matching moments_order4, reusable by the engine side.
std::vector<std::vector<LadderOp>> moment_set_ops(int mode = 0);

}  // namespace qonn::fock

#endif
