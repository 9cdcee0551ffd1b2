#ifndef QONN_VALIDATE_HPP
#define QONN_VALIDATE_HPP

#include <json.hpp>

#include "qonn/fock.hpp"
#include "qonn/rng.hpp"
#include "qonn/training.hpp"

namespace qonn {

// Random layer parameters within the validation regime.
GaussianLayerParams random_layer(Rng& rng, int n_modes, double r_max = 1.0,
                                 double delta_max = 0.3);

// Random pure Gaussian state: random real coherent inputs pushed through a
// random layer. max_mean_photons rejects draws whose per-mode occupation
// would overwhelm a truncated-oracle comparison (leakage guard); pass a
// non-positive value to disable the guard.
GaussianState random_gaussian_state(Rng& rng, int n_modes, double alpha_max = 2.0,
                                    double r_max = 1.0, double delta_max = 0.3,
                                    double max_mean_photons = 9.0);

// Largest per-mode mean occupation reached at any stage of loading the
// inputs and applying the layer (the truncated oracle must hold every
// intermediate state, not just the final one).
double stagewise_max_occupation(const std::vector<double>& alpha,
                                const GaussianLayerParams& lp, int n_modes);

// One random circuit inside the oracle's validity regime: random inputs and
// layer, rejected until every stage keeps per-mode occupation under
// max_mean_photons. Returns the engine state and the layer; the caller
// replays the same circuit on a FockState.
struct OracleRegimeCircuit {
    std::vector<double> alpha;
    GaussianLayerParams layer;
    GaussianState state;
};
OracleRegimeCircuit random_oracle_circuit(Rng& rng, int n_modes, double alpha_max = 2.0,
                                          double r_max = 1.0, double delta_max = 0.3,
                                          double max_mean_photons = 6.0);

// Random circuit together with its truncated-oracle state, redrawn until the
// oracle's post-layer leakage stays within leak_budget (the oracle's cutoff
// precondition; hot squeezed tails at the cutoff would otherwise swamp the
// comparison).
std::pair<OracleRegimeCircuit, fock::FockState> random_oracle_pair(
    Rng& rng, int n_modes, int cutoff, double leak_budget = 1e-12, double alpha_max = 2.0,
    double r_max = 1.0, double delta_max = 0.3);

struct ValidationCheck {
    std::string name;
    bool passed = false;
    double worst = 0.0;   // worst observed deviation
    double limit = 0.0;   // tolerance it was held against
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
    nlohmann::json to_json() const;
};

// Fast engine-vs-oracle equivalence suite backing the `validate` CLI verb:
// closed forms against the generic Wick evaluation, counting laws, the
// truncated Fock oracle, and the symplectic invariant.
ValidationReport run_validation_suite(uint64_t seed, int trials, int cutoff);

}  // namespace qonn

#endif
