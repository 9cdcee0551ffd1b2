#ifndef QONN_WICK_HPP
#define QONN_WICK_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qonn/ladder.hpp"

namespace qonn {

// Partition of operator positions {0..M-1} into self-loops (means) and
// ordered pairs (centered covariances).
struct LoopPerfectMatching {
    std::vector<uint8_t> singles;
    std::vector<std::pair<uint8_t, uint8_t>> pairs;  // stored with i < j
};

struct MatchingSet {
    int length = 0;
    std::vector<LoopPerfectMatching> matchings;
};

// Closed-form matching count: sum_k M! / (2^k k! (M-2k)!).
inline uint64_t count_loop_matchings(int m) {
    if (m < 0) throw InvalidArgument("count_loop_matchings: negative length");
    auto binom = [](int n, int k) {
        uint64_t r = 1;
        for (int i = 1; i <= k; ++i) r = r * static_cast<uint64_t>(n - k + i) / i;
        return r;
    };
    uint64_t total = 0;
    for (int k = 0; 2 * k <= m; ++k) {
        uint64_t dfact = 1;  // (2k-1)!!
        for (int j = 3; j <= 2 * k - 1; j += 2) dfact *= static_cast<uint64_t>(j);
        total += binom(m, 2 * k) * dfact;
    }
    return total;
}

inline constexpr int kDefaultMatchingCap = 16;

// Complete duplicate-free enumeration of all loop perfect matchings of a
// sequence of the given length.
inline MatchingSet enumerate_matchings(int length, int cap = kDefaultMatchingCap) {
    if (length < 0) throw InvalidArgument("enumerate_matchings: negative length");
    if (length > cap)
        throw ResourceLimit("enumerate_matchings: length " + std::to_string(length) +
                            " exceeds cap " + std::to_string(cap) + " (would enumerate " +
                            std::to_string(count_loop_matchings(length)) + " matchings)");
    MatchingSet set;
    set.length = length;
    std::vector<uint8_t> unassigned(length);
    for (int i = 0; i < length; ++i) unassigned[i] = static_cast<uint8_t>(i);
    LoopPerfectMatching current;
    // Recurse on the smallest unassigned position: it is a single, or pairs
    // with any later unassigned position.
    auto rec = [&](auto&& self, std::vector<uint8_t>& rest) -> void {
        if (rest.empty()) {
            set.matchings.push_back(current);
            return;
        }
        uint8_t first = rest.front();
        std::vector<uint8_t> next(rest.begin() + 1, rest.end());
        current.singles.push_back(first);
        self(self, next);
        current.singles.pop_back();
        for (size_t t = 0; t < next.size(); ++t) {
            std::vector<uint8_t> rem;
            rem.reserve(next.size() - 1);
            for (size_t q = 0; q < next.size(); ++q)
                if (q != t) rem.push_back(next[q]);
            current.pairs.emplace_back(first, next[t]);
            self(self, rem);
            current.pairs.pop_back();
        }
    };
    rec(rec, unassigned);
    return set;
}

// Per-length matching cache. Fill during plan compilation via ensure(); reads
// afterwards are lock-free and safe to share across threads.
class MatchingTable {
  public:
    explicit MatchingTable(int cap = kDefaultMatchingCap) : cap_(cap) {}

    void ensure(int length) {
        if (length >= static_cast<int>(sets_.size())) sets_.resize(length + 1);
        if (!sets_[length])
            sets_[length] = std::make_shared<const MatchingSet>(enumerate_matchings(length, cap_));
    }

    const MatchingSet& get(int length) const {
        if (length >= static_cast<int>(sets_.size()) || !sets_[length])
            throw InternalError("MatchingTable: length " + std::to_string(length) +
                                " was not prepared at compile time");
        return *sets_[length];
    }

  private:
    int cap_;
    std::vector<std::shared_ptr<const MatchingSet>> sets_;
};

// Centered two-point contraction <dp1 dp2>, operators in the given order.
template <class R>
Cx<R> pair_value(LadderOp p1, LadderOp p2, const GaussianStateT<R>& state) {
    return state.contraction(p1.bindex(state.n_modes), p2.bindex(state.n_modes));
}

// Wick-Isserlis sum over all loop perfect matchings of the op sequence:
// singles contribute means, pairs contribute centered covariances.
template <class R>
Cx<R> wick_value(const std::vector<LadderOp>& ops, const GaussianStateT<R>& state,
                 const MatchingSet& set) {
    const int n = state.n_modes;
    Cx<R> total{};
    for (const auto& m : set.matchings) {
        Cx<R> prod{R(1.0)};
        bool zero = false;
        for (uint8_t s : m.singles) {
            const Cx<R>& mean = state.means[ops[s].bindex(n)];
            if (value_of(mean.re) == 0.0 && value_of(mean.im) == 0.0) {
                zero = true;
                break;
            }
            prod *= mean;
        }
        if (zero) continue;
        for (const auto& [i, j] : m.pairs)
            prod *= state.contraction(ops[i].bindex(n), ops[j].bindex(n));
        total += prod;
    }
    return total;
}

// coeff x Wick sum; exact for any Gaussian state. Standalone entry point used
// by tests and by closed-form cross-checks; plan evaluation uses the cached
// variant.
template <class R>
Cx<R> evaluate_monomial(const LadderMonomialT<R>& mono, const GaussianStateT<R>& state,
                        int cap = kDefaultMatchingCap) {
    for (const auto& op : mono.ops)
        if (op.mode < 0 || op.mode >= state.n_modes)
            throw InvalidArgument("evaluate_monomial: mode index outside system");
    MatchingSet set = enumerate_matchings(static_cast<int>(mono.ops.size()), cap);
    return mono.coeff * wick_value(mono.ops, state, set);
}

template <class R>
Cx<R> evaluate_polynomial(const LadderPolynomialT<R>& poly, const GaussianStateT<R>& state,
                          int cap = kDefaultMatchingCap) {
    Cx<R> acc{};
    for (const auto& t : poly.terms) acc += evaluate_monomial(t, state, cap);
    return acc;
}

}  // namespace qonn

#endif
