#ifndef QONN_LADDER_HPP
#define QONN_LADDER_HPP

#include <algorithm>
#include <map>
#include <vector>

#include "qonn/gaussian.hpp"

namespace qonn {

// Single creation/annihilation operator on a 0-based mode.
struct LadderOp {
    int mode = 0;
    bool dagger = false;

    // Index into the ladder vector b = (a_0..a_{N-1}, a_0^dag..a_{N-1}^dag).
    int bindex(int n_modes) const { return dagger ? mode + n_modes : mode; }

    friend bool operator==(const LadderOp&, const LadderOp&) = default;
};

inline LadderOp annihilate_op(int mode) { return {mode, false}; }
inline LadderOp create_op(int mode) { return {mode, true}; }

// coeff * op_1 op_2 ... op_M, order is semantically significant.
template <class R>
struct LadderMonomialT {
    Cx<R> coeff{};
    std::vector<LadderOp> ops;
};

using LadderMonomial = LadderMonomialT<double>;

inline constexpr double kCoeffPruneEps = 1e-15;

// Finite sum of ordered ladder monomials. Terms merge only when their op
// sequences are identical; no normal-ordering rewrites happen anywhere.
template <class R>
struct LadderPolynomialT {
    std::vector<LadderMonomialT<R>> terms;

    static LadderPolynomialT constant(Cx<R> c) { return {{{c, {}}}}; }
    static LadderPolynomialT single(LadderOp op, Cx<R> c = Cx<R>(R(1.0))) {
        return {{{c, {op}}}};
    }

    // Merge identical sequences, drop near-zero coefficients.
    void simplify(double eps = kCoeffPruneEps) {
        std::map<std::vector<std::pair<int, int>>, size_t> seen;
        std::vector<LadderMonomialT<R>> merged;
        for (auto& t : terms) {
            std::vector<std::pair<int, int>> key;
            key.reserve(t.ops.size());
            for (const auto& op : t.ops) key.emplace_back(op.mode, op.dagger ? 1 : 0);
            auto it = seen.find(key);
            if (it == seen.end()) {
                seen.emplace(std::move(key), merged.size());
                merged.push_back(std::move(t));
            } else {
                merged[it->second].coeff += t.coeff;
            }
        }
        terms.clear();
        for (auto& t : merged) {
            double mag = std::sqrt(value_of(norm_sq(t.coeff)));
            if (mag >= eps) terms.push_back(std::move(t));
        }
    }
};

using LadderPolynomial = LadderPolynomialT<double>;

// Formal adjoint: reverse each sequence, toggle daggers, conjugate coefficients.
template <class R>
LadderPolynomialT<R> adjoint(const LadderPolynomialT<R>& p) {
    LadderPolynomialT<R> out;
    out.terms.reserve(p.terms.size());
    for (const auto& t : p.terms) {
        LadderMonomialT<R> m;
        m.coeff = conj(t.coeff);
        m.ops.reserve(t.ops.size());
        for (auto it = t.ops.rbegin(); it != t.ops.rend(); ++it)
            m.ops.push_back({it->mode, !it->dagger});
        out.terms.push_back(std::move(m));
    }
    return out;
}

template <class R>
LadderPolynomialT<R> multiply(const LadderPolynomialT<R>& x, const LadderPolynomialT<R>& y,
                              bool do_simplify = true) {
    LadderPolynomialT<R> out;
    out.terms.reserve(x.terms.size() * y.terms.size());
    for (const auto& tx : x.terms)
        for (const auto& ty : y.terms) {
            LadderMonomialT<R> m;
            m.coeff = tx.coeff * ty.coeff;
            m.ops = tx.ops;
            m.ops.insert(m.ops.end(), ty.ops.begin(), ty.ops.end());
            out.terms.push_back(std::move(m));
        }
    if (do_simplify) out.simplify();
    return out;
}

// Heisenberg image of one ladder operator under a Gaussian with Bogoliubov
// data (B, d): an annihilation operator on mode k maps to
//   d_k + sum_j U_{k,j} a_j + V_{k,j} a_j^dag
// and a creation operator to the entrywise adjoint of that polynomial.
// Exact zeros are pruned, so the identity map returns the operator itself.
template <class R>
LadderPolynomialT<R> conjugate_op(LadderOp op, const BogoliubovT<R>& bm, const CVec<R>& d) {
    int n = bm.n_modes;
    if (op.mode < 0 || op.mode >= n)
        throw InvalidArgument("conjugate_op: mode index outside system");
    if (static_cast<int>(d.size()) != 2 * n)
        throw InvalidArgument("conjugate_op: displacement length must be 2N");
    LadderPolynomialT<R> out;
    int k = op.mode;
    if (!op.dagger) {
        out.terms.push_back({d[k], {}});
        for (int j = 0; j < n; ++j) out.terms.push_back({bm.u(k, j), {annihilate_op(j)}});
        for (int j = 0; j < n; ++j) out.terms.push_back({bm.v(k, j), {create_op(j)}});
    } else {
        out.terms.push_back({conj(d[k]), {}});
        for (int j = 0; j < n; ++j) out.terms.push_back({conj(bm.u(k, j)), {create_op(j)}});
        for (int j = 0; j < n; ++j) out.terms.push_back({conj(bm.v(k, j)), {annihilate_op(j)}});
    }
    out.simplify();
    return out;
}

// Map every operator of a polynomial through (B, d), keeping term order.
template <class R>
LadderPolynomialT<R> conjugate_poly(const LadderPolynomialT<R>& p, const BogoliubovT<R>& bm,
                                    const CVec<R>& d) {
    LadderPolynomialT<R> out;
    for (const auto& t : p.terms) {
        LadderPolynomialT<R> acc = LadderPolynomialT<R>::constant(t.coeff);
        for (const auto& op : t.ops) acc = multiply(acc, conjugate_op(op, bm, d));
        out.terms.insert(out.terms.end(), acc.terms.begin(), acc.terms.end());
    }
    out.simplify();
    return out;
}

}  // namespace qonn

#endif
