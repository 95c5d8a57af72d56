#include "wbench/hardness.hpp"

#include <doctest.h>

#include <cmath>

using namespace wbench;

TEST_CASE("boundary energy by hand") {
    const ToyInstance t = toy_instance(4, true, 0.01);
    const Alphabet& a = t.qts.alphabet();
    // | > _ _ |: two boundaries (-2), two boundary/non-boundary adjacencies (+1)
    CHECK(bracket_boundary_energy(t.model, a.parse("| > _ _ |")) == doctest::Approx(-1.0));
    // all brackets: -4, no mixed adjacencies
    CHECK(bracket_boundary_energy(t.model, a.parse("| | | |")) == doctest::Approx(-4.0));
    CHECK(head_count(t.model, a.parse("| > _ > |")) == 2);
    CHECK(illegal_pair_count(t.model, a.parse("| > > _ |")) == 1);
    CHECK(bracketed(t.model, a.parse("| > _ _ |")));
    CHECK_FALSE(bracketed(t.model, a.parse("| > _ _ _")));
}

TEST_CASE("assembled terms sum to the total") {
    for (bool accepting : {true, false}) {
        const ToyInstance t = toy_instance(6, accepting, 0.05);
        const EvolutionGraph ev = explore_evolution(t.qts.ts, t.seed);
        const AssembledHamiltonian h = assemble(t.qts, ev, t.model, 100.0);
        CHECK(h.term_residual() < 1e-9);
        CHECK(h.dim() == ev.vertices.size() * 2);
        const AssembledHamiltonian r = rescaled(h, 100.0);
        CHECK(lambda_min(r) * 100.0 == doctest::Approx(lambda_min(h)).epsilon(1e-9));
    }
}

TEST_CASE("the marker-free history block sits at -2") {
    const ToyInstance t = toy_instance(8, true, 0.01, false);
    const EvolutionGraph ev = explore_evolution(t.qts.ts, t.seed);
    CHECK(lambda_min(assemble(t.qts, ev, t.model, 1000.0)) == doctest::Approx(-2.0).epsilon(1e-9));
}

TEST_CASE("completeness energy is -2 plus the marker weight") {
    const ToyInstance t = toy_instance(8, true, 0.01);
    const EvolutionGraph ev = explore_evolution(t.qts.ts, t.seed);
    const AssembledHamiltonian h = assemble(t.qts, ev, t.model, 1000.0);
    // oracle: the uniform history state built from the rule unitaries
    const Ulg u = qts_to_ulg(t.qts, ev);
    CVector psi = ground_space_history_states(u).front();
    psi /= psi.norm();
    CHECK(completeness_energy(h, psi) == doctest::Approx(-2.0 + marker_expectation(h, psi)).epsilon(1e-9));
    CHECK(marker_expectation(h, psi) >= 0.0);
}

TEST_CASE("accepting instances sit below rejecting ones") {
    const PromiseGapReport r = promise_gap_report(10, {1e5, std::nullopt});
    double acc = 0, rej = 0;
    for (const auto& b : r.blocks) {
        if (b.kind == "history-accepting") acc = b.lambda_min;
        if (b.kind == "history-rejecting") rej = b.lambda_min;
    }
    CHECK(acc < rej);
    CHECK(r.beta > r.alpha);
}

TEST_CASE("non-bracketed blocks are pushed up by the penalty") {
    const PromiseGapReport r = promise_gap_report(8, {1e4, 1e-3});
    for (const auto& b : r.blocks)
        if (b.kind == "non-bracketed") {
            CHECK(b.ok);
            CHECK(b.lambda_min > 1e3);
        }
}
