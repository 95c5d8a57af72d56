#include "wbench/qts.hpp"
#include "wbench/rules_dsl.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace wbench;

namespace {

Qts thue_example() { return parse_rules("# alphabet: a b c\nc <-> b\nab <-> cc\n"); }

// brute force: all words of length 3 over {a, b, c}, edges from single rule
// applications found by direct substring comparison
std::vector<std::size_t> brute_component_sizes() {
    const std::string letters = "abc";
    std::vector<std::string> words;
    for (char x : letters)
        for (char y : letters)
            for (char z : letters) words.push_back({x, y, z});
    auto adjacent = [](const std::string& s, const std::string& t) {
        const std::vector<std::pair<std::string, std::string>> rules = {{"c", "b"}, {"ab", "cc"}};
        for (const auto& [l, r] : rules)
            for (int dir = 0; dir < 2; ++dir) {
                const std::string& from = dir ? r : l;
                const std::string& to = dir ? l : r;
                for (std::size_t i = 0; i + from.size() <= s.size(); ++i)
                    if (s.compare(i, from.size(), from) == 0 &&
                        s.substr(0, i) + to + s.substr(i + from.size()) == t)
                        return true;
            }
        return false;
    };
    std::vector<int> comp(words.size(), -1);
    std::vector<std::size_t> sizes;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (comp[i] >= 0) continue;
        std::vector<std::size_t> stack{i};
        comp[i] = int(sizes.size());
        std::size_t count = 0;
        while (!stack.empty()) {
            const std::size_t v = stack.back();
            stack.pop_back();
            ++count;
            for (std::size_t j = 0; j < words.size(); ++j)
                if (comp[j] < 0 && adjacent(words[v], words[j])) {
                    comp[j] = comp[i];
                    stack.push_back(j);
                }
        }
        sizes.push_back(count);
    }
    std::sort(sizes.rbegin(), sizes.rend());
    return sizes;
}

}  // namespace

TEST_CASE("Thue example components match brute force") {
    const Qts q = thue_example();
    std::set<Word> seen;
    std::vector<std::size_t> sizes;
    const std::string letters = "abc";
    for (char x : letters)
        for (char y : letters)
            for (char z : letters) {
                const Word w = q.alphabet().parse(std::string{x, y, z});
                if (seen.count(w)) continue;
                const EvolutionGraph ev = explore_evolution(q.ts, w);
                for (const Word& v : ev.vertices) seen.insert(v);
                sizes.push_back(ev.vertices.size());
            }
    std::sort(sizes.rbegin(), sizes.rend());
    CHECK(sizes == brute_component_sizes());
    CHECK(sizes == std::vector<std::size_t>{18, 6, 2, 1});
    CHECK(explore_evolution(q.ts, q.alphabet().parse("aaa")).vertices.size() == 1);
}

TEST_CASE("neighbour positions and directions") {
    const Qts q = thue_example();
    const auto nb = neighbors(q.ts, q.alphabet().parse("abc"));
    std::set<std::string> got;
    for (const auto& n : nb) got.insert(q.alphabet().render(n.word));
    CHECK(got == std::set<std::string>{"abb", "acc", "ccc"});
    for (const auto& n : nb)
        if (q.alphabet().render(n.word) == "ccc") {
            CHECK(n.position == 1);
            CHECK(n.forward);
        }
}

TEST_CASE("evolution graphs are connected and closed under neighbours") {
    const Qts q = thue_example();
    const EvolutionGraph ev = explore_evolution(q.ts, q.alphabet().parse("abb"));
    CHECK(is_connected(ev.graph(q.alphabet())));
    for (const Word& w : ev.vertices)
        for (const auto& n : neighbors(q.ts, w)) CHECK(ev.index.count(n.word) == 1);
}

TEST_CASE("the exploration cap is reported") {
    const Qts q = thue_example();
    const EvolutionGraph ev = explore_evolution(q.ts, q.alphabet().parse("abb"), 5);
    CHECK(ev.capped);
    CHECK(ev.vertices.size() <= 5);
}

TEST_CASE("block and ULG spectra coincide for the even-number instances") {
    for (std::size_t n = 1; n <= 6; ++n) {
        const EvenNumberInstance e = even_number_example(n);
        const EvolutionGraph ev = explore_evolution(e.qts.ts, e.enc);
        const RVector a = hermitian_eigs(chain_block_hamiltonian(e.qts, ev), -1.0, false).eigenvalues;
        const RVector b = hermitian_eigs(associated_hamiltonian(qts_to_ulg(e.qts, ev)), -1.0, false).eigenvalues;
        REQUIRE(a.size() == b.size());
        CHECK(max_abs(a - b) < 1e-9);
    }
}

TEST_CASE("even-number decisions follow the parity") {
    // rotating by -pi/2 n times maps |1> to +-|1> exactly when n is even
    for (std::size_t n = 1; n <= 8; ++n) {
        const EvenNumberInstance e = even_number_example(n);
        const Decision d = decide(e.qts, e.enc, e.inp, e.out, 1.0 / 3.0);
        CHECK(d.verdict == (n % 2 == 0 ? Verdict::accepts : Verdict::rejects));
    }
}

TEST_CASE("the block Hamiltonian equals the full chain Hamiltonian on the block") {
    const Qts q = thue_example();
    const SparseHermitian full = chain_hamiltonian(q, 3, true);
    const EvolutionGraph ev = explore_evolution(q.ts, q.alphabet().parse("abb"));
    const CMatrix block = chain_block_hamiltonian(q, ev).dense();
    const CMatrix f = full.dense();
    auto index = [&](const Word& w) {
        std::size_t i = 0;
        for (Symbol s : w) i = i * q.alphabet().size() + s;
        return Eigen::Index(i);
    };
    for (std::size_t i = 0; i < ev.vertices.size(); ++i)
        for (std::size_t j = 0; j < ev.vertices.size(); ++j)
            CHECK(std::abs(block(i, j) - f(index(ev.vertices[i]), index(ev.vertices[j]))) < 1e-12);
}

TEST_CASE("site dimensions") {
    const Qts q = parse_rules("# alphabet: a b\n# quantum: b\nab <-> ba\n");
    CHECK(site_dimension(q, false) == 4);
    CHECK(site_dimension(q, true) == 3);
}

TEST_CASE("rules must preserve length and quantum count") {
    Qts q;
    Alphabet& a = q.ts.alphabet;
    const Symbol x = a.add("x"), y = a.add("y", true);
    q.add_rule(Word{x, y}, Word{x, x}, identity(2));
    CHECK_THROWS(q.validate());
}
