#pragma once

#include "wbench/linalg.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wbench {

enum class Move { left, right };

// Flag register of a ring cell. The numeric codes form the group Z2 x Z2 so
// that flag updates are XOR operations, as in the reversible circuit.
enum class Flag : std::uint8_t { none = 0, right = 1, left = 2, halt = 3 };

char flag_char(Flag f);  // '-', '>', '<', 'h'
inline Flag operator^(Flag a, Flag b) { return Flag(std::uint8_t(a) ^ std::uint8_t(b)); }

struct Quintuple {
    std::string q, s, s_new;
    Move dir = Move::right;
    std::string q_new;
};

// Deterministic (and ideally reversible) Turing machine. alphabet[0] is the
// blank symbol. quantum_states maps designated states to gate specifications.
struct Tm {
    std::vector<std::string> states;
    std::vector<std::string> alphabet;
    std::string initial, halting;
    std::vector<Quintuple> delta;
    std::map<std::string, std::string> quantum_states;

    std::size_t state_index(const std::string& q) const;  // 1-based; 0 is the dummy state
    std::size_t symbol_index(const std::string& s) const;
    std::size_t state_count() const { return states.size() + 1; }
    std::string state_name(std::size_t i) const { return i == 0 ? "_|_" : states.at(i - 1); }
};

struct Violation {
    std::string kind;  // structure | determinism | reversibility
    std::string detail;
};

std::vector<Violation> validate(const Tm& tm);

// T_delta as a permutation of Q x Sigma (index q * |Sigma| + s, with q = 0 the
// dummy state) plus the arrival direction of each state.
struct PermutationForm {
    std::size_t n_states = 0, n_symbols = 0;
    std::vector<std::size_t> t;
    std::vector<bool> matched;           // true where t comes from delta (or the dummy)
    std::vector<std::optional<Move>> d;  // empty for the dummy and never-entered states

    std::size_t apply(std::size_t x) const { return t[x]; }
    std::vector<std::size_t> inverse() const;
};

PermutationForm to_permutation(const Tm& tm);

// One ring cell in the classical sector: TM state index, tape symbol, flag.
struct CellClassical {
    std::size_t q = 0, s = 0;
    Flag f = Flag::none;
    bool operator==(const CellClassical&) const = default;
};

struct HeadUnitary {
    Tm tm;
    PermutationForm perm;
    std::vector<std::size_t> t_inverse;
    std::vector<Flag> flag_of_state;            // flag written after entering a state
    std::vector<std::optional<CMatrix>> gates;  // two-qubit gate per state index

    std::size_t gamma_size() const { return perm.n_states * perm.n_symbols; }
    std::size_t cell_dim() const { return 2 * gamma_size() * 4; }
    std::size_t cell_index(int psi, const CellClassical& c) const;

    // Classical permutation C on a cell pair; `completion` is set when T_delta
    // is used outside the domain of delta.
    std::pair<CellClassical, CellClassical> classical(CellClassical a, CellClassical b,
                                                      bool* completion = nullptr) const;
    std::pair<CellClassical, CellClassical> classical_inverse(CellClassical a, CellClassical b) const;
    // Gate applied to the two qubits after C, keyed by the post-C registers.
    std::optional<CMatrix> quantum(const CellClassical& a, const CellClassical& b) const;

    SparseC matrix() const;  // the full head unitary on C^S (x) C^S
};

HeadUnitary build_head(const Tm& tm, const std::map<std::string, CMatrix>& gate_map = {});

struct RingState {
    std::size_t n = 0;
    std::vector<CellClassical> cells;
    CVector qubits;  // cell 0 is the most significant qubit
    std::size_t step_count = 0;

    std::size_t active_count() const;
    std::optional<std::size_t> active_cell() const;
};

struct TraceRecord {
    std::size_t step, cell_a, cell_b;
    CellClassical a, b;  // registers after the application
    std::string flags;
};

struct RingRun {
    std::vector<TraceRecord> trace;
    std::optional<std::size_t> halted_at;
    std::optional<std::size_t> halted_cell;
    double accept_overlap = 0.0;  // weight of qubit |1> on the halting cell
    bool used_completion = false;
    RingState final_state;
};

// Pair touched by the t-th application (1-based): (n-1, 0), (0, 1), (1, 2), ...
std::pair<std::size_t, std::size_t> ring_pair(std::size_t n, std::size_t t);

// psi_in: input qubits on cells n-l-1 .. n-2, classical tape symbols (an
// optional extension used by the differential test) on cells 0 .. k-1,
// q0 with flag -> on the last cell.
RingState initial_ring(const HeadUnitary& head, std::size_t n, const std::vector<int>& input_bits,
                       const std::vector<std::size_t>& tape = {});
void ring_step(const HeadUnitary& head, RingState& st, bool* completion = nullptr);
void ring_step_back(const HeadUnitary& head, RingState& st);

RingRun run_ring(const HeadUnitary& head, std::size_t n, const std::vector<int>& input_bits,
                 std::size_t max_steps, const std::vector<std::size_t>& tape = {}, bool keep_trace = true);

std::string trace_json_lines(const HeadUnitary& head, const RingRun& run);

// Direct simulation on a circular tape; the head starts on cell 0.
struct TmRun {
    std::vector<std::size_t> tape;
    std::size_t state = 0, head = 0, steps = 0;
    bool halted = false, stuck = false;
};
TmRun run_tm(const Tm& tm, std::size_t n, const std::vector<std::size_t>& tape, std::size_t max_steps);

struct DiffReport {
    bool equal = false;
    bool tm_halted = false, ring_halted = false;
    std::size_t tm_steps = 0, ring_applications = 0;
    std::string detail;
};

DiffReport differential_test(const Tm& tm, std::size_t n, const std::vector<std::size_t>& tape,
                             std::size_t max_steps);

// Text format: "states:", "alphabet:", "initial:", "halting:",
// "quantum-states: q -> gate", "delta: q,s -> s',dir,q'".
Tm parse_tm(const std::string& text);
Tm load_tm(const std::string& path);

}  // namespace wbench
