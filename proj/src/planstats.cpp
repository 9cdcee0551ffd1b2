#include "qonn/planstats.hpp"

namespace qonn {

namespace {

nlohmann::json expectation_stats(const ExpectationPlan& plan, const CompiledExpectation& ce) {
    uint64_t matchings_total = 0;
    uint64_t flops = 0;
    int max_len = 0;
    for (const auto& m : ce.monomials) {
        int len = static_cast<int>(m.op_b.size());
        max_len = std::max(max_len, len);
        uint64_t mc = count_loop_matchings(len);
        matchings_total += mc;
        // ~one complex multiply per matched element plus the coefficient
        // products; 6 real flops per complex multiply.
        flops += mc * static_cast<uint64_t>(6 * (len + 1));
        flops += static_cast<uint64_t>(m.products.size()) * 6ULL *
                 static_cast<uint64_t>(plan.n_slots > 0 ? 2 : 1);
    }
    return {{"pre_prune_terms", ce.pre_prune_terms},
            {"merged_monomials", ce.monomials.size()},
            {"max_monomial_length", max_len},
            {"matchings_total", matchings_total},
            {"estimated_flops", flops}};
}

}  // namespace

nlohmann::json plan_stats_json(const ExpectationPlan& plan) {
    nlohmann::json j;
    j["n_modes"] = plan.arch.n_modes;
    j["n_layers"] = plan.arch.n_layers;
    j["subtractions"] = plan.arch.subtractions;
    j["outputs"] = plan.arch.outputs;
    j["conjugated_slots"] = plan.n_slots;
    nlohmann::json nums = nlohmann::json::array();
    uint64_t total_terms = 0;
    for (const auto& ce : plan.numerators) {
        nums.push_back(expectation_stats(plan, ce));
        total_terms += ce.pre_prune_terms;
    }
    j["numerators"] = nums;
    j["denominator"] = expectation_stats(plan, plan.denominator);
    j["trace_expressions_total"] = total_terms;
    if (!plan.arch.subtractions.empty()) {
        // Uniform-K reference count when every layer subtracts equally often.
        size_t k0 = plan.arch.subtractions[0].size();
        bool uniform = true;
        for (const auto& s : plan.arch.subtractions) uniform &= s.size() == k0;
        if (uniform)
            j["trace_expressions_formula"] =
                count_trace_expressions(static_cast<int>(plan.numerators.size()),
                                        plan.arch.n_modes, static_cast<int>(k0),
                                        plan.arch.n_layers);
    }
    return j;
}

}  // namespace qonn
