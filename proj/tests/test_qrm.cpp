#include "wbench/qrm.hpp"

#include <doctest.h>

#include <set>

using namespace wbench;

namespace {

const std::string kData = WBENCH_DATA_DIR;

Tm flipper() { return load_tm(kData + "/tm/flipper.tm"); }

}  // namespace

TEST_CASE("T_delta is a permutation extending delta") {
    for (const char* f : {"flipper", "parity", "marker", "loop", "gated"}) {
        const Tm tm = load_tm(kData + "/tm/" + f + ".tm");
        CHECK(validate(tm).empty());
        const PermutationForm p = to_permutation(tm);
        CHECK(std::set<std::size_t>(p.t.begin(), p.t.end()).size() == p.t.size());
        const auto inv = p.inverse();
        for (std::size_t x = 0; x < p.t.size(); ++x) CHECK(inv[p.apply(x)] == x);
    }
}

TEST_CASE("validation flags irreversible machines") {
    // two transitions entering q0 while reading different symbols and writing the same one
    const Tm tm = parse_tm("states: a q0 qf\nalphabet: _ 1\ninitial: a\nhalting: qf\n"
                           "delta: a,_ -> 1,R,q0\ndelta: a,1 -> 1,R,q0\ndelta: q0,_ -> _,R,qf\n");
    bool reversibility = false;
    for (const auto& v : validate(tm)) reversibility |= v.kind == "reversibility";
    CHECK(reversibility);
}

TEST_CASE("the head operator is unitary") {
    for (const char* f : {"flipper", "gated"}) {
        const HeadUnitary head = build_head(load_tm(kData + "/tm/" + f + ".tm"));
        const SparseC u = head.matrix();
        SparseC id(u.rows(), u.cols());
        id.setIdentity();
        const SparseC g = SparseC(u.adjoint()) * u - id;
        double worst = 0.0;
        for (int k = 0; k < g.outerSize(); ++k)
            for (SparseC::InnerIterator it(g, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
        CHECK(worst < 1e-12);
        CHECK(std::size_t(u.rows()) == head.cell_dim() * head.cell_dim());
    }
}

TEST_CASE("ring steps invert exactly") {
    const HeadUnitary head = build_head(load_tm(kData + "/tm/gated.tm"));
    RingState st = initial_ring(head, 6, {1, 0, 1});
    const RingState start = st;
    for (int i = 0; i < 17; ++i) ring_step(head, st);
    for (int i = 0; i < 17; ++i) ring_step_back(head, st);
    CHECK(st.cells == start.cells);
    CHECK((st.qubits - start.qubits).norm() < 1e-12);
}

TEST_CASE("ring pair schedule") {
    CHECK(ring_pair(5, 1) == std::make_pair<std::size_t, std::size_t>(4, 0));
    CHECK(ring_pair(5, 2) == std::make_pair<std::size_t, std::size_t>(0, 1));
    CHECK(ring_pair(5, 5) == std::make_pair<std::size_t, std::size_t>(3, 4));
    CHECK(ring_pair(5, 6) == std::make_pair<std::size_t, std::size_t>(4, 0));
}

TEST_CASE("flipper complements its tape on the ring") {
    const Tm tm = flipper();
    const std::vector<std::size_t> tape = {tm.symbol_index("0"), tm.symbol_index("1"), tm.symbol_index("1")};
    const HeadUnitary head = build_head(tm);
    const RingRun run = run_ring(head, 6, {}, 200, tape);
    REQUIRE(run.halted_at);
    // oracle: bitwise complement, blanks untouched
    CHECK(run.final_state.cells[0].s == tm.symbol_index("1"));
    CHECK(run.final_state.cells[1].s == tm.symbol_index("0"));
    CHECK(run.final_state.cells[2].s == tm.symbol_index("0"));
    CHECK(run.final_state.cells[3].s == tm.symbol_index("_"));
    CHECK(run.final_state.active_count() == 1);
}

TEST_CASE("ring execution agrees with direct simulation") {
    for (const char* f : {"flipper", "marker", "loop", "gated"}) {
        const Tm tm = load_tm(kData + "/tm/" + f + ".tm");
        for (std::size_t n = 4; n <= 7; ++n)
            for (std::size_t s = 1; s < tm.alphabet.size(); ++s) {
                const DiffReport r = differential_test(tm, n, {s, s}, 30);
                CHECK_MESSAGE(r.equal, f, " n=", n, ": ", r.detail);
                CHECK(r.ring_applications <= std::max<std::size_t>(r.tm_steps, 1) * n);
            }
    }
}

TEST_CASE("a quantum state applies its gate to the visited qubit") {
    // gated: entering o (after reading a 1) flips the qubit on that cell pair
    const HeadUnitary head = build_head(load_tm(kData + "/tm/gated.tm"));
    const RingRun plain = run_ring(head, 5, {0, 0}, 100);
    CHECK(plain.final_state.qubits.norm() == doctest::Approx(1.0));
    CHECK(plain.halted_at);
}
