#pragma once

#include "wbench/qts.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace wbench {

// Symbol classes and local terms the hardness Hamiltonian is assembled from.
struct HardnessModel {
    std::vector<char> head;      // per symbol
    std::vector<char> boundary;  // per symbol
    std::function<bool(Symbol, Symbol)> allowed;  // empty: every pair allowed
    std::vector<Marker> markers;                  // P_in/out patterns
};

// 1-local bonus -1 per boundary symbol plus +1/2 per adjacent
// (boundary, non-boundary) pair.
double bracket_boundary_energy(const HardnessModel& m, const Word& s);
double head_bonus(const HardnessModel& m, const Word& s);
std::size_t head_count(const HardnessModel& m, const Word& s);
std::size_t illegal_pair_count(const HardnessModel& m, const Word& s);
bool bracketed(const HardnessModel& m, const Word& s);

// H = H_l + B_heads - 1 + 2 (p+1) (P_boundaries + 1) + p P + P_in/out,
// restricted to one explored evolution tensored with its qubit registers
// (index v * 2^q + r). `shift` holds the constant 2 (p+1) - 1.
struct AssembledHamiltonian {
    std::vector<Word> strings;
    std::size_t register_dim = 1;
    double p = 0.0;
    SparseHermitian h_l, heads, boundaries, shift, illegal, in_out, total;

    std::size_t dim() const { return total.dim(); }
    double term_residual() const;  // max |total - sum of terms|
};

AssembledHamiltonian assemble(const Qts& q, const EvolutionGraph& ev, const HardnessModel& m, double p);
AssembledHamiltonian rescaled(const AssembledHamiltonian& h, double factor);  // every term divided by factor

double lambda_min(const AssembledHamiltonian& h);
double completeness_energy(const AssembledHamiltonian& h, const CVector& psi);
double marker_expectation(const AssembledHamiltonian& h, const CVector& psi);

// Toy system: | > _^(m-1) |, the head carries one qubit and rotates it on each
// step. Input marker "| >" with |1><1|, output marker "> |" with |0><0|.
// The accepting instance leaves weight eps on |0> at the end, the rejecting
// one weight 1 - eps.
struct ToyInstance {
    Qts qts;
    HardnessModel model;
    Word seed;
    std::size_t m = 0;
};
ToyInstance toy_instance(std::size_t m, bool accepting, double eps, bool with_markers = true);

struct BlockResult {
    std::string kind;  // history | zero-head | zero-head-bracketed | non-bracketed | illegal-pair
    std::string seed;
    std::size_t size = 0, heads = 0;
    double lambda_min = 0.0, bound = 0.0;
    bool lower = true;  // bound is a lower bound (else an upper bound)
    bool ok = false;
};

struct HardnessConfig {
    std::optional<double> p;    // default n^5
    std::optional<double> eps;  // default |M|^-4
};

struct PromiseGapReport {
    std::size_t m = 0, n = 0;
    double p = 0, eps = 0, alpha = 0, beta = 0, gap = 0;
    double completeness_accepting = 0;  // <Psi|H|Psi> on the accepting history state
    std::vector<BlockResult> blocks;
    bool ok = false;
};

PromiseGapReport promise_gap_report(std::size_t m = 20, const HardnessConfig& cfg = {});

// Smallest Wheelbarrow history block with markers OA -:a / |1><1|, literal
// pair table; empty when the block exceeds `dim_cap`.
std::optional<BlockResult> wheelbarrow_history_block(std::size_t n, std::size_t dim_cap = 4096);

std::string promise_gap_json(const PromiseGapReport& r);

}  // namespace wbench
