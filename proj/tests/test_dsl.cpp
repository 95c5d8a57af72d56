#include "wbench/gates.hpp"
#include "wbench/rules_dsl.hpp"

#include <doctest.h>

#include <cmath>

using namespace wbench;

namespace {

template <typename F>
ParseError capture(F&& f) {
    try {
        f();
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("no parse error");
    return ParseError("", 0, 0);
}

}  // namespace

TEST_CASE("parse errors carry line and column") {
    const ParseError e = capture([] { parse_rules("# alphabet: a b\na <-> bq\n"); });
    CHECK(e.line == 2);
    CHECK(e.column >= 1);
    const ParseError g = capture([] { parse_rules("# alphabet: a\n# quantum: a\naa <-> aa @ nogate\n"); });
    CHECK(g.line == 3);
    CHECK_THROWS_AS(parse_rules("a b\n"), ParseError);
}

TEST_CASE("export and reparse is a fixed point") {
    const std::string text =
        "# alphabet: | > _\n# quantum: >\n> _ <-> _ > @ rot(0.25)\n| > <-> > | @ x\n";
    const Qts q = parse_rules(text);
    const std::string once = export_rules(q);
    const Qts r = parse_rules(once);
    CHECK(export_rules(r) == once);
    REQUIRE(r.unitaries.size() == q.unitaries.size());
    for (std::size_t i = 0; i < q.unitaries.size(); ++i) CHECK(max_abs(CMatrix(r.unitaries[i] - q.unitaries[i])) < 1e-12);
}

TEST_CASE("gate registry") {
    CHECK(is_unitary(gate_toffoli()));
    CHECK(is_unitary(gate_crot(0.3)));
    CHECK(max_abs(CMatrix(gate_swap() * gate_swap() - identity(4))) < 1e-15);
    const CMatrix r = gate_from_spec("rot(0.5)", 2, 1);
    CHECK(r(0, 0).real() == doctest::Approx(std::cos(0.5)));
    CHECK(r(1, 0).real() == doctest::Approx(std::sin(0.5)));
    CHECK(gate_name(gate_x()) == "X");
    CHECK(gate_name(gate_swap()) == "swap");
    const CMatrix m = gate_from_spec("mat[[0,0],[1,0],[1,0],[0,0]]", 2, 1);
    CHECK(max_abs(CMatrix(m - gate_x())) < 1e-15);
    CHECK_THROWS(gate_from_spec("mat[[2,0],[0,0],[0,0],[1,0]]", 2, 1));
    CHECK_THROWS(gate_from_spec("toffoli", 2, 2));
}

TEST_CASE("crot acts as rot on the |1> control block") {
    const CMatrix c = gate_crot(0.7);
    CHECK(max_abs(CMatrix(c.block(0, 0, 2, 2) - identity(2))) < 1e-15);
    CHECK(max_abs(CMatrix(c.block(2, 2, 2, 2) - gate_rot(0.7))) < 1e-15);
}
