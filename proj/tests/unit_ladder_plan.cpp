#include <doctest.h>

#include <cmath>

#include "qonn/model.hpp"
#include "qonn/planstats.hpp"
#include "qonn/rng.hpp"
#include "qonn/validate.hpp"
#include "qonn/wick.hpp"

using namespace qonn;

namespace {

bool same_poly(const LadderPolynomial& a, const LadderPolynomial& b, double tol) {
    LadderPolynomial diff = a;
    for (auto t : b.terms) {
        t.coeff = -t.coeff;
        diff.terms.push_back(t);
    }
    diff.simplify(tol);
    return diff.terms.empty();
}

}  // namespace

TEST_CASE("conjugate_op through identity and displacement") {
    BogoliubovMatrix id = BogoliubovMatrix::identity(1);
    CVec<double> zero(2);
    LadderPolynomial p = conjugate_op(annihilate_op(0), id, zero);
    REQUIRE(p.terms.size() == 1);
    CHECK(p.terms[0].ops.size() == 1);
    CHECK(p.terms[0].ops[0] == annihilate_op(0));

    CVec<double> d = {cxd{0.3, -0.1}, cxd{0.3, 0.1}};
    LadderPolynomial q = conjugate_op(annihilate_op(0), id, d);
    REQUIRE(q.terms.size() == 2);
    // scalar shift plus the untouched operator
    bool found_scalar = false, found_op = false;
    for (const auto& t : q.terms) {
        if (t.ops.empty()) {
            found_scalar = true;
            CHECK(t.coeff.re == doctest::Approx(0.3));
            CHECK(t.coeff.im == doctest::Approx(-0.1));
        } else {
            found_op = true;
            CHECK(t.coeff.re == doctest::Approx(1.0));
        }
    }
    CHECK(found_scalar);
    CHECK(found_op);
}

TEST_CASE("conjugate_op on a generic two-mode Gaussian has 2N+1 terms") {
    Rng rng(61);
    auto [bm, d] = bogoliubov_from_layer(random_layer(rng, 2, 1.0, 0.7), 2);
    LadderPolynomial p = conjugate_op(annihilate_op(0), bm, d);
    CHECK(p.terms.size() == 5);
    // coefficients come straight from the Bogoliubov rows
    for (const auto& t : p.terms) {
        if (t.ops.empty()) {
            CHECK(std::sqrt(norm_sq(t.coeff - d[0])) < 1e-15);
        } else if (!t.ops[0].dagger) {
            CHECK(std::sqrt(norm_sq(t.coeff - bm.u(0, t.ops[0].mode))) < 1e-15);
        } else {
            CHECK(std::sqrt(norm_sq(t.coeff - bm.v(0, t.ops[0].mode))) < 1e-15);
        }
    }
    // creation operator conjugates to the adjoint polynomial
    LadderPolynomial pc = conjugate_op(create_op(0), bm, d);
    CHECK(same_poly(pc, adjoint(p), 1e-14));
    CHECK_THROWS_AS(conjugate_op(annihilate_op(5), bm, d), InvalidArgument);
}

TEST_CASE("two-step conjugation composes to the product map") {
    Rng rng(67);
    auto [b1, d1] = bogoliubov_from_layer(random_layer(rng, 2, 0.9, 0.6), 2);
    auto [b2, d2] = bogoliubov_from_layer(random_layer(rng, 2, 0.9, 0.6), 2);
    // conjugate through (B2, d2) first, then map every operator through (B1, d1)
    for (auto op : {annihilate_op(0), annihilate_op(1), create_op(0)}) {
        LadderPolynomial two_step =
            conjugate_poly(conjugate_op(op, b2, d2), b1, d1);
        BogoliubovMatrix prod = compose(b2, b1);
        CVec<double> dtot = mul(b2.b, d1);
        for (size_t i = 0; i < dtot.size(); ++i) dtot[i] += d2[i];
        LadderPolynomial one_step = conjugate_op(op, prod, dtot);
        CHECK(same_poly(two_step, one_step, 1e-12));
    }
}

TEST_CASE("denominator polynomial is self-adjoint") {
    Rng rng(71);
    auto [bm, d] = bogoliubov_from_layer(random_layer(rng, 2, 1.0, 0.5), 2);
    // A = conj(a_0) conj(a_1); den = A^dag A must be invariant under the
    // formal adjoint.
    LadderPolynomial a = multiply(conjugate_op(annihilate_op(0), bm, d),
                                  conjugate_op(annihilate_op(1), bm, d));
    LadderPolynomial den = multiply(adjoint(a), a);
    CHECK(same_poly(den, adjoint(den), 1e-12));
}

TEST_CASE("trace-expression counting law") {
    CHECK(count_trace_expressions(1, 2, 1, 2) == 25);
    CHECK(count_trace_expressions(1, 3, 2, 1) == 1);
    CHECK(count_trace_expressions(5, 4, 3, 1) == 5);
    CHECK(count_trace_expressions(3, 1, 2, 2) == 243);
    CHECK_THROWS_AS(count_trace_expressions(0, 1, 1, 1), InvalidArgument);
}

TEST_CASE("compiled plans match the counting law before pruning") {
    struct Case {
        int outputs, n_modes, subs, layers;
    };
    for (const Case& cs : {Case{1, 1, 1, 1}, Case{1, 2, 1, 2}, Case{2, 2, 1, 2},
                           Case{3, 1, 2, 2}, Case{1, 2, 2, 2}, Case{2, 3, 1, 1}}) {
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
        uint64_t per_output = count_trace_expressions(1, cs.n_modes, cs.subs, cs.layers);
        for (const auto& num : plan.numerators) CHECK(num.pre_prune_terms == per_output);
        CHECK(plan.denominator.pre_prune_terms == per_output);
    }
}

TEST_CASE("single-layer plans have one trace term per expectation") {
    QonnArchitecture arch{3, 1, {{0, 2}}, {1}};
    ExpectationPlan plan = compile_plan(arch);
    CHECK(plan.numerators[0].pre_prune_terms == 1);
    CHECK(plan.numerators[0].monomials.size() == 1);
    CHECK(plan.numerators[0].monomials[0].op_b.size() == 5);
    CHECK(plan.denominator.monomials[0].op_b.size() == 4);
    CHECK(plan.n_slots == 0);
}

TEST_CASE("architecture validation") {
    QonnArchitecture bad{0, 1, {{}}, {0}};
    CHECK_THROWS_AS(compile_plan(bad), InvalidArgument);
    QonnArchitecture bad2{2, 1, {{2}}, {0}};
    CHECK_THROWS_AS(compile_plan(bad2), InvalidArgument);
    QonnArchitecture bad3{2, 2, {{0}}, {0}};  // one set per layer required
    CHECK_THROWS_AS(compile_plan(bad3), InvalidArgument);
    QonnArchitecture bad4{2, 1, {{0}}, {}};
    CHECK_THROWS_AS(compile_plan(bad4), InvalidArgument);
}

TEST_CASE("plan statistics report") {
    QonnArchitecture arch{2, 2, {{0}, {0}}, {0}};
    ExpectationPlan plan = compile_plan(arch);
    nlohmann::json j = plan_stats_json(plan);
    CHECK(j["n_modes"] == 2);
    CHECK(j["conjugated_slots"] == 1);
    CHECK(j["numerators"][0]["pre_prune_terms"] == 25);
    CHECK(j["trace_expressions_formula"] == 25);
    CHECK(j["numerators"][0]["matchings_total"].get<uint64_t>() > 0);
    CHECK(j["denominator"]["estimated_flops"].get<uint64_t>() > 0);
}

TEST_CASE("polynomial multiply merges identical sequences and prunes zeros") {
    LadderPolynomial x{{{cxd{1.0}, {annihilate_op(0)}}, {cxd{0.5}, {}}}};
    LadderPolynomial y{{{cxd{2.0}, {}}, {cxd{-1.0}, {annihilate_op(0)}}}};
    // (a + 0.5)(2 - a) = 2a - a a + 1 - 0.5 a = 1.5 a - aa + 1
    LadderPolynomial p = multiply(x, y);
    CHECK(p.terms.size() == 3);
    for (const auto& t : p.terms) {
        if (t.ops.empty()) CHECK(t.coeff.re == doctest::Approx(1.0));
        if (t.ops.size() == 1) CHECK(t.coeff.re == doctest::Approx(1.5));
        if (t.ops.size() == 2) CHECK(t.coeff.re == doctest::Approx(-1.0));
    }
    // exact cancellation drops the term
    LadderPolynomial z{{{cxd{1.0}, {annihilate_op(0)}}, {cxd{-1.0}, {annihilate_op(0)}}}};
    z.simplify();
    CHECK(z.terms.empty());
}
