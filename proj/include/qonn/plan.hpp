#ifndef QONN_PLAN_HPP
#define QONN_PLAN_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qonn/threading.hpp"
#include "qonn/wick.hpp"

namespace qonn {

// Network shape: mode count, layer count, photon subtractions per layer
// (0-based mode indices, repeats allowed), and the modes read out by
// homodyne detection.
struct QonnArchitecture {
    int n_modes = 0;
    int n_layers = 0;
    std::vector<std::vector<int>> subtractions;  // one set per layer
    std::vector<int> outputs;

    void validate() const {
        if (n_modes < 1) throw InvalidArgument("architecture: need at least one mode");
        if (n_layers < 1) throw InvalidArgument("architecture: need at least one layer");
        if (static_cast<int>(subtractions.size()) != n_layers)
            throw InvalidArgument("architecture: one subtraction set per layer required");
        for (const auto& layer : subtractions)
            for (int k : layer)
                if (k < 0 || k >= n_modes)
                    throw InvalidArgument("architecture: subtraction mode outside system");
        if (outputs.empty()) throw InvalidArgument("architecture: at least one output required");
        for (int j : outputs)
            if (j < 0 || j >= n_modes)
                throw InvalidArgument("architecture: output mode outside system");
    }
};

// Reference to one multiplicative coefficient: entry of a conjugated-operator
// slot (optionally conjugated), or the constant 1 for fixed operators.
struct CoefRef {
    int16_t slot = -1;  // -1: constant 1
    uint16_t entry = 0;
    uint8_t conj = 0;
};

// One trace term: a fixed operator sequence whose coefficient is a sum of
// products of slot entries (products merge here when different slot choices
// produce the same sequence).
struct PlanMonomial {
    std::vector<uint8_t> op_b;  // ladder-vector indices, operator order
    std::vector<std::vector<CoefRef>> products;
};

struct CompiledExpectation {
    std::vector<PlanMonomial> monomials;
    uint64_t pre_prune_terms = 0;  // raw product-expansion count
};

// Compiled, reusable expectation plan. The structure (monomials, matchings)
// is fixed per architecture; slot coefficients are recomputed per parameter
// set via bind_parameters (model.hpp).
struct ExpectationPlan {
    QonnArchitecture arch;
    std::vector<std::vector<LadderOp>> observables;  // numerator inserts
    bool x_readout = true;  // sqrt(2) Re(num)/norm outputs vs raw complex moments
    std::vector<CompiledExpectation> numerators;     // one per observable
    CompiledExpectation denominator;
    int n_slots = 0;
    std::vector<std::pair<int, int>> slot_origin;  // slot -> (layer, position in K)
    MatchingTable matchings;
};

// O x (2N+1)^(2K(L-1)): trace-expression count of the fully conjugated
// multi-layer expectation, before zero-coefficient pruning.
inline uint64_t count_trace_expressions(int outputs, int n_modes, int subtractions_per_layer,
                                        int n_layers) {
    if (outputs < 1 || n_modes < 1 || n_layers < 1 || subtractions_per_layer < 0)
        throw InvalidArgument("count_trace_expressions: invalid sizes");
    uint64_t base = 2ULL * n_modes + 1ULL;
    uint64_t result = static_cast<uint64_t>(outputs);
    long expo = 2L * subtractions_per_layer * (n_layers - 1);
    for (long e = 0; e < expo; ++e) {
        if (result > UINT64_MAX / base)
            throw ResourceLimit("count_trace_expressions: count exceeds 64 bits");
        result *= base;
    }
    return result;
}

namespace detail {

// One multiplicative factor of the operator product, pre-expanded over its
// terms. op_b < 0 marks a scalar term.
struct PlanFactor {
    struct Term {
        int op_b = -1;
        CoefRef ref;
    };
    std::vector<Term> terms;
};

inline PlanFactor fixed_op_factor(LadderOp op, int n_modes) {
    PlanFactor f;
    f.terms.push_back({op.bindex(n_modes), CoefRef{}});
    return f;
}

// Conjugated subtraction slot: entry 0 is the scalar shift, entries 1..N are
// annihilation coefficients, N+1..2N creation coefficients. adjoint = true
// yields the factor for the daggered polynomial (conjugated entries, flipped
// operators).
inline PlanFactor slot_factor(int slot, int n_modes, bool adj) {
    PlanFactor f;
    f.terms.reserve(2 * n_modes + 1);
    auto ref = [&](int entry) {
        CoefRef r;
        r.slot = static_cast<int16_t>(slot);
        r.entry = static_cast<uint16_t>(entry);
        r.conj = adj ? 1 : 0;
        return r;
    };
    f.terms.push_back({-1, ref(0)});
    for (int j = 0; j < n_modes; ++j) {
        LadderOp op = adj ? create_op(j) : annihilate_op(j);
        f.terms.push_back({op.bindex(n_modes), ref(1 + j)});
    }
    for (int j = 0; j < n_modes; ++j) {
        LadderOp op = adj ? annihilate_op(j) : create_op(j);
        f.terms.push_back({op.bindex(n_modes), ref(1 + n_modes + j)});
    }
    return f;
}

// Expand a product of factors into merged monomials; counts the raw
// (pre-merge, pre-prune) term total.
inline CompiledExpectation expand_factors(const std::vector<PlanFactor>& factors,
                                          MatchingTable& table, int matching_cap) {
    CompiledExpectation ce;
    ce.pre_prune_terms = 1;
    for (const auto& f : factors) {
        if (ce.pre_prune_terms > UINT64_MAX / f.terms.size())
            throw ResourceLimit("plan expansion exceeds 64-bit term count");
        ce.pre_prune_terms *= f.terms.size();
    }
    std::map<std::vector<uint8_t>, size_t> index_of;
    std::vector<size_t> choice(factors.size(), 0);
    std::vector<uint8_t> seq;
    std::vector<CoefRef> refs;
    bool done = factors.empty();
    while (!done) {
        seq.clear();
        refs.clear();
        for (size_t i = 0; i < factors.size(); ++i) {
            const auto& t = factors[i].terms[choice[i]];
            if (t.op_b >= 0) seq.push_back(static_cast<uint8_t>(t.op_b));
            if (t.ref.slot >= 0) refs.push_back(t.ref);
        }
        auto it = index_of.find(seq);
        if (it == index_of.end()) {
            index_of.emplace(seq, ce.monomials.size());
            ce.monomials.push_back({seq, {refs}});
        } else {
            ce.monomials[it->second].products.push_back(refs);
        }
        // odometer increment
        size_t i = 0;
        for (; i < factors.size(); ++i) {
            if (++choice[i] < factors[i].terms.size()) break;
            choice[i] = 0;
        }
        done = (i == factors.size());
    }
    if (factors.empty()) ce.monomials.push_back({{}, {{}}});
    int max_len = 0;
    for (const auto& m : ce.monomials) max_len = std::max(max_len, static_cast<int>(m.op_b.size()));
    for (int len = 0; len <= max_len; ++len) table.ensure(len);
    return ce;
}

// Factor list for Tr[A^dag (obs) A rho]: adjoint side (layers first to last,
// each layer's subtractions reversed), the observable insert, then the
// forward side (layers last to first). Subtractions in the final layer stay
// plain operators; earlier ones are conjugated slots.
inline std::vector<PlanFactor> trace_factors(const QonnArchitecture& arch,
                                             const std::vector<LadderOp>* obs,
                                             const std::map<std::pair<int, int>, int>& slot_of) {
    const int n = arch.n_modes;
    const int last = arch.n_layers - 1;
    std::vector<PlanFactor> factors;
    for (int layer = 0; layer <= last; ++layer) {
        const auto& sub = arch.subtractions[layer];
        for (int pos = static_cast<int>(sub.size()) - 1; pos >= 0; --pos) {
            if (layer == last)
                factors.push_back(fixed_op_factor(create_op(sub[pos]), n));
            else
                factors.push_back(slot_factor(slot_of.at({layer, pos}), n, true));
        }
    }
    if (obs)
        for (const auto& op : *obs) factors.push_back(fixed_op_factor(op, n));
    for (int layer = last; layer >= 0; --layer) {
        const auto& sub = arch.subtractions[layer];
        for (int pos = 0; pos < static_cast<int>(sub.size()); ++pos) {
            if (layer == last)
                factors.push_back(fixed_op_factor(annihilate_op(sub[pos]), n));
            else
                factors.push_back(slot_factor(slot_of.at({layer, pos}), n, false));
        }
    }
    return factors;
}

}  // namespace detail

// Compile the expectation plan for arbitrary observable inserts.
inline ExpectationPlan compile_observable_plan(const QonnArchitecture& arch,
                                               std::vector<std::vector<LadderOp>> observables,
                                               bool x_readout,
                                               int matching_cap = kDefaultMatchingCap) {
    arch.validate();
    for (const auto& obs : observables)
        for (const auto& op : obs)
            if (op.mode < 0 || op.mode >= arch.n_modes)
                throw InvalidArgument("observable mode outside system");
    ExpectationPlan plan;
    plan.arch = arch;
    plan.observables = std::move(observables);
    plan.x_readout = x_readout;
    plan.matchings = MatchingTable(matching_cap);

    std::map<std::pair<int, int>, int> slot_of;
    for (int layer = 0; layer + 1 < arch.n_layers; ++layer)
        for (int pos = 0; pos < static_cast<int>(arch.subtractions[layer].size()); ++pos) {
            slot_of[{layer, pos}] = plan.n_slots++;
            plan.slot_origin.emplace_back(layer, pos);
        }

    for (const auto& obs : plan.observables) {
        auto factors = detail::trace_factors(arch, &obs, slot_of);
        plan.numerators.push_back(detail::expand_factors(factors, plan.matchings, matching_cap));
    }
    auto den_factors = detail::trace_factors(arch, nullptr, slot_of);
    plan.denominator = detail::expand_factors(den_factors, plan.matchings, matching_cap);
    return plan;
}

// Standard homodyne plan: one numerator Tr[A^dag a_j A rho] per output mode.
inline ExpectationPlan compile_plan(const QonnArchitecture& arch,
                                    int matching_cap = kDefaultMatchingCap) {
    std::vector<std::vector<LadderOp>> obs;
    obs.reserve(arch.outputs.size());
    for (int j : arch.outputs) obs.push_back({annihilate_op(j)});
    return compile_observable_plan(arch, std::move(obs), /*x_readout=*/true, matching_cap);
}

struct EvalOptions {
    // Deterministic: per-term values summed in index order, bit-identical
    // independent of the worker count. Performance: chunked partial sums,
    // reproducible only for a fixed worker count.
    bool deterministic = true;
    // Minimum term count before plan-internal parallelism kicks in.
    size_t parallel_threshold = 4096;
};

namespace detail {

template <class R>
Cx<R> monomial_value(const ExpectationPlan& plan, const PlanMonomial& mono,
                     const std::vector<CVec<R>>& slot_vals, const GaussianStateT<R>& state) {
    Cx<R> coeff{};
    for (const auto& prod : mono.products) {
        Cx<R> c{R(1.0)};
        for (const auto& ref : prod) {
            if (ref.slot < 0) continue;
            const Cx<R>& v = slot_vals[ref.slot][ref.entry];
            c *= ref.conj ? conj(v) : v;
        }
        coeff += c;
    }
    if (std::sqrt(value_of(norm_sq(coeff))) < kCoeffPruneEps) return Cx<R>{};
    const MatchingSet& set = plan.matchings.get(static_cast<int>(mono.op_b.size()));
    const int n = state.n_modes;
    Cx<R> total{};
    for (const auto& m : set.matchings) {
        Cx<R> prod{R(1.0)};
        bool zero = false;
        for (uint8_t s : m.singles) {
            const Cx<R>& mean = state.means[mono.op_b[s]];
            if (value_of(mean.re) == 0.0 && value_of(mean.im) == 0.0) {
                zero = true;
                break;
            }
            prod *= mean;
        }
        if (zero) continue;
        for (const auto& [i, j] : m.pairs) {
            int w = mono.op_b[j];
            prod *= state.cov(mono.op_b[i], w < n ? w + n : w - n);
        }
        total += prod;
    }
    return coeff * total;
}

template <class R>
Cx<R> eval_expectation(const ExpectationPlan& plan, const CompiledExpectation& ce,
                       const std::vector<CVec<R>>& slot_vals, const GaussianStateT<R>& state,
                       const EvalOptions& opts) {
    const size_t count = ce.monomials.size();
    if (count >= opts.parallel_threshold && thread_count() > 1) {
        std::vector<Cx<R>> buf(count);
        parallel_for(count, [&](size_t i) {
            buf[i] = monomial_value(plan, ce.monomials[i], slot_vals, state);
        });
        if (opts.deterministic) {
            Cx<R> acc{};
            for (const auto& v : buf) acc += v;
            return acc;
        }
        // chunked combine: order depends on the worker count only
        const size_t chunk = (count + thread_count() - 1) / thread_count();
        Cx<R> acc{};
        for (size_t start = 0; start < count; start += chunk) {
            Cx<R> part{};
            for (size_t i = start; i < std::min(count, start + chunk); ++i) part += buf[i];
            acc += part;
        }
        return acc;
    }
    Cx<R> acc{};
    for (const auto& mono : ce.monomials)
        acc += monomial_value(plan, mono, slot_vals, state);
    return acc;
}

}  // namespace detail

template <class R>
struct PlanEvalResult {
    std::vector<R> outputs;       // homodyne readouts (x_readout plans)
    std::vector<Cx<R>> moments;   // raw normalized moments (moment plans)
    R norm{};                     // heralding denominator <A^dag A>
};

// Evaluate a bound plan on the front Gaussian state. slot_vals carries the
// per-parameter-set conjugation coefficients (empty for single-layer plans).
template <class R>
PlanEvalResult<R> evaluate_plan(const ExpectationPlan& plan,
                                const std::vector<CVec<R>>& slot_vals,
                                const GaussianStateT<R>& state,
                                const EvalOptions& opts = {}) {
    if (state.n_modes != plan.arch.n_modes)
        throw InvalidArgument("evaluate_plan: state size differs from plan");
    if (static_cast<int>(slot_vals.size()) != plan.n_slots)
        throw InvalidArgument("evaluate_plan: slot coefficients not bound");
    PlanEvalResult<R> res;
    Cx<R> den = detail::eval_expectation(plan, plan.denominator, slot_vals, state, opts);
    res.norm = real(den);
    if (value_of(res.norm) < 1e-12)
        throw DegenerateState("heralding denominator vanished (norm " +
                              std::to_string(value_of(res.norm)) + ")");
    using std::sqrt;
    const R root2 = sqrt(R(2.0));
    for (const auto& num_ce : plan.numerators) {
        Cx<R> num = detail::eval_expectation(plan, num_ce, slot_vals, state, opts);
        if (plan.x_readout)
            res.outputs.push_back(root2 * real(num) / res.norm);
        else
            res.moments.push_back(num / res.norm);
    }
    return res;
}

}  // namespace qonn

#endif
