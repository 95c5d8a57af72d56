#include "wbench/wheelbarrow.hpp"

#include <doctest.h>

#include <cmath>

using namespace wbench;

namespace {

// independent oracle for the chain length of m increments: m plus its base-6
// digit count plus four fixed cells
std::size_t chain_length(std::size_t m) {
    std::size_t digits = 0;
    for (std::size_t x = m; x > 0; x /= 6) ++digits;
    return m + digits + 4;
}

// valid when the last base-6 digit is 4 and no other digit is
bool valid_count(std::size_t m) {
    if (m % 6 != 4) return false;
    for (std::size_t x = m / 6; x > 0; x /= 6)
        if (x % 6 == 4) return false;
    return true;
}

}  // namespace

TEST_CASE("symbol and rule counts") {
    const WheelbarrowSystem& w = wheelbarrow(false);
    CHECK(w.alphabet().size() == 48);
    CHECK(w.qts.ts.rules.size() == 151);
    w.qts.validate();
    const WheelbarrowSystem& r = wheelbarrow(true);
    CHECK(r.alphabet().size() == 39);
    CHECK(r.alphabet().quantum_size() == 3);
    CHECK(r.qts.ts.rules.size() == 107);
    CHECK(r.dropped.size() == 9);
    CHECK(site_dimension(r.qts, true) == 42);
    r.qts.validate();
}

TEST_CASE("every rule is 2-local") {
    for (bool reduced : {false, true}) {
        const auto& ts = wheelbarrow(reduced).qts.ts;
        CHECK(locality(ts) == 2);
        CHECK(min_rule_length(ts) == 2);
    }
}

TEST_CASE("length plans") {
    for (std::size_t m = 1; m < 60; ++m) {
        const LengthPlan p = length_plan(chain_length(m));
        CHECK(p.increments == m);
        CHECK(p.valid == valid_count(m));
        CHECK(p.program.size() == p.digits);
    }
    const auto lengths = valid_lengths(4);
    CHECK(lengths == std::vector<std::size_t>{9, 16, 22, 28});
}

TEST_CASE("encodings are bracketed and hold the chosen ring") {
    const WheelbarrowSystem& w = wheelbarrow();
    const Word e = encode_instance(w, 9, default_ring(9));
    CHECK(e.size() == 9);
    CHECK(w.alphabet().render(e).front() == '|');
    CHECK(w.alphabet().render(e).back() == '|');
    CHECK(w.head_count(e) == 1);
}

TEST_CASE("the n = 9 history") {
    const History h = explore_history(9);
    const HistoryReport& r = h.report;
    CHECK_FALSE(r.capped);
    CHECK(r.size == 1227);
    CHECK(r.halted);
    CHECK(r.simple);
    CHECK(r.init_trace_ok);
    CHECK(r.bracket_violations == 0);
    // every string is reachable, so the graph is connected
    CHECK(is_connected(h.graph.graph(wheelbarrow().alphabet())));
    // the table's omissions show up as literal violations; the amendment
    // removes the four pairs it lists
    for (const auto& [a, b] : amendment_pairs()) CHECK(r.amended_pair_violations.count(a + " " + b) == 0);
}

TEST_CASE("history exploration respects its cap") {
    const History h = explore_history(16, 500, false);
    CHECK(h.report.capped);
    CHECK(h.report.size <= 500);
}

TEST_CASE("W2 holds") { CHECK(check_w2(wheelbarrow()).ok); }

TEST_CASE("pair checks report positions") {
    const WheelbarrowSystem& w = wheelbarrow();
    const AllowedPairs a = allowed_pairs(w);
    const Word s = w.alphabet().parse("| :0 :1 |");
    for (const auto& v : allowed_pairs_check(w, a, s)) {
        CHECK(v.position >= 1);
        CHECK(v.position < s.size());
    }
    const AllowedPairs amended = allowed_pairs(w, true);
    for (const auto& [x, y] : amendment_pairs()) CHECK(amended.allowed(w.sym(x), w.sym(y)));
}

TEST_CASE("fitted exponent recovers a power law") {
    std::vector<std::size_t> ns = {10, 20, 40}, sizes;
    for (auto n : ns) sizes.push_back(std::size_t(std::llround(5.0 * std::pow(double(n), 3.0))));
    CHECK(fitted_exponent(ns, sizes) == doctest::Approx(3.0).epsilon(1e-6));
}
