#pragma once

#include "wbench/qts.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wbench {

// The 48-symbol rule system (or its 39-symbol reduced variant). Symbol names
// are ASCII: program digits :U :T :A :S :H r, carriers @U.. @r, boxes o OU OT
// OA OS OH, tape bits :0 :1, qubits -:a and their carrier forms -@a -;a -"a -*a.
struct WheelbarrowSystem {
    Qts qts;
    bool reduced = false;
    std::vector<std::string> group;        // per rule: init, ghost, counter, unary, program, toffoli, ...
    std::vector<std::string> dropped;      // reduced variant: rules that could not be merged
    std::vector<char> head;                // per symbol, as classified by the allowed-pair table
    std::vector<char> def_head;            // per symbol, as listed with the alphabet
    std::vector<char> boundary;            // | ! ?
    std::string text;                      // rule DSL

    const Alphabet& alphabet() const { return qts.alphabet(); }
    Symbol sym(const std::string& name) const { return qts.alphabet().at(name); }
    std::size_t head_count(const Word& w) const;
};

const WheelbarrowSystem& wheelbarrow(bool reduced = false);

// Ordered pairs that may occur in a history string. The amended table adds
// the pairs the listed rules necessarily produce but the table omits.
struct AllowedPairs {
    std::size_t n = 0;
    std::vector<char> ok;  // n * n
    bool amended = false;
    bool allowed(Symbol a, Symbol b) const { return ok[std::size_t(a) * n + b] != 0; }
};

AllowedPairs allowed_pairs(const WheelbarrowSystem& w, bool amended = false);
std::vector<std::pair<std::string, std::string>> amendment_pairs();

struct PairViolation {
    std::size_t position;  // 1-based index of the first symbol
    std::string first, second;
};
std::vector<PairViolation> allowed_pairs_check(const WheelbarrowSystem& w, const AllowedPairs& a, const Word& s);

// Chain length n = m + D(m) + 4 where m is the number of counter increments
// and D(m) the number of base-6 digits of m.
struct LengthPlan {
    std::size_t n = 0, increments = 0, digits = 0;
    std::vector<std::string> program;  // digit symbols, leftmost first
    bool valid = false;                // m = 4 (mod 6) and no other :H digit
    std::string reason;
};
LengthPlan length_plan(std::size_t n);
std::vector<std::size_t> valid_lengths(std::size_t count, std::size_t start = 5);

// enc = | I t_1 .. t_N b |. `ring` lists the tape symbols in the order the
// counter moves them behind the box (m entries); digit slots get :0.
Word encode_instance(const WheelbarrowSystem& w, std::size_t n, const std::vector<std::string>& ring);
std::vector<std::string> default_ring(std::size_t n);

struct HistoryReport {
    std::size_t n = 0, size = 0, edges = 0, qubits = 0;
    bool capped = false;
    std::string encoding;
    std::size_t head_violations = 0, bracket_violations = 0;
    std::string head_witness, bracket_witness;
    std::map<std::string, std::string> literal_pair_violations;  // "a b" -> witness string
    std::map<std::string, std::string> amended_pair_violations;
    bool simple = false;
    std::string simple_detail;
    std::map<std::string, std::size_t> leaves;  // branch class -> count
    std::size_t ghost_interleavings = 0;
    bool reached_computation = false, halted = false;
    std::optional<std::size_t> kernel_dimension;
    bool init_trace_ok = false;
};

struct History {
    EvolutionGraph graph;
    HistoryReport report;
};

History explore_history(std::size_t n, const std::vector<std::string>& ring, std::size_t cap = 10000000,
                        bool check_simplicity = true);
History explore_history(std::size_t n, std::size_t cap = 10000000, bool check_simplicity = true);

std::string history_report_json(const HistoryReport& r);

struct PropertyCheck {
    bool ok = false;
    std::string detail;
    std::vector<std::string> witnesses;
};

struct WProperties {
    PropertyCheck w1, w1_def_heads, w2, w3, w4, two_heads;
};

PropertyCheck check_w1(const WheelbarrowSystem& w, bool def_heads = false);
PropertyCheck check_w2(const WheelbarrowSystem& w);
PropertyCheck check_w3(const HistoryReport& r);
PropertyCheck check_w4(const WheelbarrowSystem& w, std::size_t n, const EvolutionGraph& history,
                       std::size_t samples, unsigned seed);
PropertyCheck check_two_heads(const WheelbarrowSystem& w, std::size_t n, std::size_t samples, unsigned seed);
WProperties verify_w_properties(std::size_t n, std::size_t samples = 20, unsigned seed = 7);

// Least-squares slope of log(size) against log(n).
double fitted_exponent(const std::vector<std::size_t>& ns, const std::vector<std::size_t>& sizes);

}  // namespace wbench
