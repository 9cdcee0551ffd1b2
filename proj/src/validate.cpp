#include "qonn/validate.hpp"

#include <cmath>

#include "qonn/activations.hpp"
#include "qonn/fock.hpp"
#include "qonn/wick.hpp"

namespace qonn {

GaussianLayerParams random_layer(Rng& rng, int n_modes, double r_max, double delta_max) {
    GaussianLayerParams lp;
    for (int i = 0; i < n_modes * n_modes; ++i) {
        lp.u1.push_back(rng.uniform(-M_PI, M_PI));
        lp.u2.push_back(rng.uniform(-M_PI, M_PI));
    }
    for (int k = 0; k < n_modes; ++k) lp.r.push_back(rng.uniform(-r_max, r_max));
    for (int k = 0; k < n_modes; ++k)
        lp.delta.push_back({rng.uniform(-delta_max, delta_max), rng.uniform(-delta_max, delta_max)});
    return lp;
}

GaussianState random_gaussian_state(Rng& rng, int n_modes, double alpha_max, double r_max,
                                    double delta_max, double max_mean_photons) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<double> alpha(n_modes);
        for (double& a : alpha) a = rng.uniform(-alpha_max, alpha_max);
        GaussianLayerParams lp = random_layer(rng, n_modes, r_max, delta_max);
        auto [bm, d] = bogoliubov_from_layer(lp, n_modes);
        GaussianState st = apply_gaussian(load_inputs(vacuum(n_modes), alpha), bm, d);
        if (max_mean_photons <= 0.0) return st;
        double worst = 0.0;
        for (int k = 0; k < n_modes; ++k) worst = std::max(worst, mean_photons(st, k));
        if (worst <= max_mean_photons) return st;
    }
    throw InternalError("random_gaussian_state: rejection sampling failed to converge");
}

double stagewise_max_occupation(const std::vector<double>& alpha, const GaussianLayerParams& lp,
                                int n_modes) {
    GaussianState st = load_inputs(vacuum(n_modes), alpha);
    CVec<double> no_shift(2 * n_modes);
    auto track = [&](const GaussianState& s) {
        double worst = 0.0;
        for (int k = 0; k < n_modes; ++k) worst = std::max(worst, mean_photons(s, k));
        return worst;
    };
    double worst = track(st);

    CMat<double> zero(n_modes, n_modes);
    CMat<double> u1 = unitary_from_params(lp.u1, n_modes);
    st = apply_gaussian(st, BogoliubovMatrix::from_blocks(adjoint(u1), zero), no_shift);
    worst = std::max(worst, track(st));

    CMat<double> ch(n_modes, n_modes), sh(n_modes, n_modes);
    for (int k = 0; k < n_modes; ++k) {
        ch(k, k) = cxd{std::cosh(lp.r[k])};
        sh(k, k) = cxd{std::sinh(lp.r[k])};
    }
    st = apply_gaussian(st, BogoliubovMatrix::from_blocks(ch, sh), no_shift);
    worst = std::max(worst, track(st));

    CMat<double> u2 = unitary_from_params(lp.u2, n_modes);
    st = apply_gaussian(st, BogoliubovMatrix::from_blocks(u2, zero), no_shift);
    worst = std::max(worst, track(st));

    CVec<double> d(2 * n_modes);
    for (int k = 0; k < n_modes; ++k) {
        d[k] = lp.delta[k];
        d[n_modes + k] = conj(lp.delta[k]);
    }
    st = apply_gaussian(st, BogoliubovMatrix::identity(n_modes), d);
    return std::max(worst, track(st));
}

OracleRegimeCircuit random_oracle_circuit(Rng& rng, int n_modes, double alpha_max, double r_max,
                                          double delta_max, double max_mean_photons) {
    for (int attempt = 0; attempt < 500; ++attempt) {
        OracleRegimeCircuit c;
        c.alpha.resize(n_modes);
        for (double& a : c.alpha) a = rng.uniform(-alpha_max, alpha_max);
        c.layer = random_layer(rng, n_modes, r_max, delta_max);
        if (stagewise_max_occupation(c.alpha, c.layer, n_modes) > max_mean_photons) continue;
        auto [bm, d] = bogoliubov_from_layer(c.layer, n_modes);
        c.state = apply_gaussian(load_inputs(vacuum(n_modes), c.alpha), bm, d);
        return c;
    }
    throw InternalError("random_oracle_circuit: rejection sampling failed to converge");
}

std::pair<OracleRegimeCircuit, fock::FockState> random_oracle_pair(Rng& rng, int n_modes,
                                                                   int cutoff,
                                                                   double leak_budget,
                                                                   double alpha_max,
                                                                   double r_max,
                                                                   double delta_max) {
    for (int attempt = 0; attempt < 500; ++attempt) {
        OracleRegimeCircuit c =
            random_oracle_circuit(rng, n_modes, alpha_max, r_max, delta_max, 6.0);
        fock::FockState fs = fock::FockState::make_vacuum(n_modes, cutoff);
        fs.leakage_threshold = 1.0;  // gauge leakage manually, redraw instead of throwing
        for (int k = 0; k < n_modes; ++k)
            if (c.alpha[k] != 0.0) fock::displace(fs, k, c.alpha[k]);
        fock::apply_gaussian_layer(fs, c.layer);
        if (fs.leakage() > leak_budget) continue;
        fs.leakage_threshold = 1e-8;
        return {std::move(c), std::move(fs)};
    }
    throw InternalError("random_oracle_pair: no circuit satisfied the leakage budget");
}

namespace {

// Tr[A^dag obs A rho] / Tr[A^dag A rho] by direct Wick evaluation.
cxd conditional_moment(const GaussianState& st, const std::vector<LadderOp>& cond,
                       const std::vector<LadderOp>& obs) {
    LadderMonomial num, den;
    num.coeff = den.coeff = cxd{1.0};
    for (auto it = cond.rbegin(); it != cond.rend(); ++it) {
        LadderOp flipped{it->mode, !it->dagger};
        num.ops.push_back(flipped);
        den.ops.push_back(flipped);
    }
    num.ops.insert(num.ops.end(), obs.begin(), obs.end());
    for (const auto& op : cond) {
        num.ops.push_back(op);
        den.ops.push_back(op);
    }
    return evaluate_monomial(num, st) / evaluate_monomial(den, st);
}

ValidationCheck check_phi_vs_engine(Rng& rng, int trials) {
    ValidationCheck c{"phi_subtraction_vs_wick", false, 0.0, 1e-10, ""};
    for (int t = 0; t < trials; ++t) {
        double alpha = rng.uniform(-3.0, 3.0);
        double r = rng.uniform(-kSqueezeBound, kSqueezeBound);
        GaussianLayerParams lp;
        lp.u1 = {0.0};
        lp.u2 = {0.0};
        lp.r = {r};
        lp.delta = {cxd{}};
        auto [bm, d] = bogoliubov_from_layer(lp, 1);
        GaussianState st = apply_gaussian(load_inputs(vacuum(1), {alpha}), bm, d);
        cxd m = conditional_moment(st, {annihilate_op(0)}, {annihilate_op(0)});
        double engine = std::sqrt(2.0) * m.re;
        double closed = phi_subtraction(alpha, r);
        c.worst = std::max(c.worst, std::abs(engine - closed));
    }
    c.passed = c.worst < c.limit;
    return c;
}

ValidationCheck check_two_mode_closed_form(Rng& rng, int trials) {
    ValidationCheck c{"two_mode_subtraction_closed_form", false, 0.0, 1e-10, ""};
    for (int t = 0; t < trials; ++t) {
        GaussianState st = random_gaussian_state(rng, 3, 1.5, 1.0, 0.5, -1.0);
        int p = rng.uniform_int(0, 2);
        int q = rng.uniform_int(0, 2);
        for (int j = 0; j < 3; ++j) {
            double closed = x_readout_two_subtractions(st, p, q, j);
            cxd m = conditional_moment(st, {annihilate_op(p), annihilate_op(q)},
                                       {annihilate_op(j)});
            double generic = std::sqrt(2.0) * m.re;
            c.worst = std::max(c.worst, std::abs(closed - generic));
        }
    }
    c.passed = c.worst < c.limit;
    return c;
}

ValidationCheck check_counting_laws() {
    ValidationCheck c{"counting_laws", true, 0.0, 0.0, ""};
    for (int m = 0; m <= 12; ++m) {
        auto set = enumerate_matchings(m);
        if (set.matchings.size() != count_loop_matchings(m)) {
            c.passed = false;
            c.detail = "matching count mismatch at M=" + std::to_string(m);
            return c;
        }
    }
    struct Case {
        int outputs, n_modes, subs, layers;
    };
    for (const Case& cs : {Case{1, 1, 1, 1}, Case{1, 1, 1, 2}, Case{1, 2, 1, 2},
                           Case{3, 1, 2, 2}, Case{2, 2, 1, 2}}) {
        QonnArchitecture arch;
        arch.n_modes = cs.n_modes;
        arch.n_layers = cs.layers;
        for (int l = 0; l < cs.layers; ++l) {
            std::vector<int> k;
            for (int s = 0; s < cs.subs; ++s) k.push_back(s % cs.n_modes);
            arch.subtractions.push_back(k);
        }
        for (int o = 0; o < cs.outputs; ++o) arch.outputs.push_back(o % cs.n_modes);
        ExpectationPlan plan = compile_plan(arch);
        uint64_t expected = count_trace_expressions(cs.outputs, cs.n_modes, cs.subs, cs.layers);
        uint64_t actual = 0;
        for (const auto& num : plan.numerators) actual += num.pre_prune_terms;
        if (actual != expected) {
            c.passed = false;
            c.detail = "trace-expression count mismatch: got " + std::to_string(actual) +
                       ", formula " + std::to_string(expected);
            return c;
        }
    }
    return c;
}

ValidationCheck check_fock_oracle(Rng& rng, int trials, int cutoff) {
    ValidationCheck c{"fock_oracle_equivalence", false, 0.0, 1e-8, ""};
    auto compare = [&](const GaussianState& st, const fock::FockState& fs,
                       const std::vector<LadderOp>& cond) {
        fock::FockState conditioned = fs;
        for (auto it = cond.rbegin(); it != cond.rend(); ++it) {
            if (it->dagger)
                fock::create(conditioned, it->mode);
            else
                fock::annihilate(conditioned, it->mode);
        }
        std::vector<std::vector<LadderOp>> obs_list;
        for (int mode = 0; mode < st.n_modes; ++mode)
            for (const auto& ops : fock::moment_set_ops(mode)) obs_list.push_back(ops);
        if (st.n_modes == 2)
            obs_list.insert(obs_list.end(),
                            {{annihilate_op(0), annihilate_op(1)},
                             {create_op(0), annihilate_op(1)},
                             {annihilate_op(0), annihilate_op(0), create_op(1)},
                             {create_op(0), annihilate_op(0), create_op(1), annihilate_op(1)},
                             {annihilate_op(0), annihilate_op(0), annihilate_op(1),
                              create_op(1), create_op(1)}});
        for (const auto& obs : obs_list) {
            cxd engine = cond.empty()
                             ? evaluate_monomial(LadderMonomial{cxd{1.0}, obs}, st)
                             : conditional_moment(st, cond, obs);
            fock::zd oracle = fock::expect_monomial(conditioned, obs);
            double err = std::abs(to_std(engine) - oracle) /
                         std::max(1.0, std::abs(oracle));
            c.worst = std::max(c.worst, err);
        }
    };
    for (int t = 0; t < trials; ++t) {
        int n = 1 + t % 2;
        auto [circuit, fs] = random_oracle_pair(rng, n, cutoff);
        const GaussianState& st = circuit.state;
        compare(st, fs, {});
        compare(st, fs, {annihilate_op(0)});
        compare(st, fs, {create_op(0)});
        if (n == 2) compare(st, fs, {annihilate_op(0), annihilate_op(1)});
    }
    c.passed = c.worst < c.limit;
    return c;
}

ValidationCheck check_symplectic(Rng& rng, int trials) {
    ValidationCheck c{"symplectic_invariant", false, 0.0, 1e-10, ""};
    for (int t = 0; t < trials; ++t) {
        int n = 1 + t % 4;
        GaussianLayerParams lp = random_layer(rng, n, kSqueezeBound, 1.0);
        auto [bm, d] = bogoliubov_from_layer(lp, n);
        (void)d;
        c.worst = std::max(c.worst, symplectic_residual(bm));
    }
    c.passed = c.worst < c.limit;
    return c;
}

}  // namespace

nlohmann::json ValidationReport::to_json() const {
    nlohmann::json j;
    j["passed"] = all_passed();
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) {
        arr.push_back({{"name", c.name},
                       {"passed", c.passed},
                       {"worst_deviation", c.worst},
                       {"tolerance", c.limit},
                       {"detail", c.detail}});
    }
    j["checks"] = arr;
    return j;
}

ValidationReport run_validation_suite(uint64_t seed, int trials, int cutoff) {
    Rng rng(seed);
    ValidationReport rep;
    rep.checks.push_back(check_phi_vs_engine(rng, std::max(20, trials * 4)));
    rep.checks.push_back(check_two_mode_closed_form(rng, std::max(10, trials)));
    rep.checks.push_back(check_counting_laws());
    rep.checks.push_back(check_fock_oracle(rng, std::max(4, trials / 3), cutoff));
    rep.checks.push_back(check_symplectic(rng, std::max(50, trials * 10)));
    return rep;
}

}  // namespace qonn
