#pragma once

#include "wbench/ulg.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace wbench {

using Symbol = char16_t;
using Word = std::u16string;

class Alphabet {
public:
    Symbol add(const std::string& name, bool quantum = false);
    std::optional<Symbol> find(const std::string& name) const;
    Symbol at(const std::string& name) const;  // throws on foreign symbol
    const std::string& name(Symbol s) const { return names_[s]; }
    bool quantum(Symbol s) const { return quantum_[s] != 0; }
    void set_quantum(Symbol s, bool q) { quantum_[s] = q; }
    std::size_t size() const { return names_.size(); }
    std::size_t quantum_size() const;
    std::size_t classical_size() const { return size() - quantum_size(); }
    const std::vector<std::string>& names() const { return names_; }

    // words: whitespace-separated names, or greedy longest match when the
    // text has no whitespace
    Word parse(const std::string& text) const;
    std::string render(const Word& w) const;
    std::size_t quantum_count(const Word& w) const;

private:
    std::vector<std::string> names_;
    std::vector<char> quantum_;
    std::unordered_map<std::string, Symbol> index_;
};

struct Rule {
    Word lhs, rhs;
    std::string gate = "id";  // registry spelling, for export
    int line = 0;             // source line when parsed
};

struct ThueSystem {
    Alphabet alphabet;
    std::vector<Rule> rules;
};

struct Qts {
    ThueSystem ts;
    std::vector<CMatrix> unitaries;  // per rule, on H^{(x) q_r}
    std::size_t qudit_dim = 2;

    const Alphabet& alphabet() const { return ts.alphabet; }
    std::size_t rule_quantum_count(std::size_t r) const { return ts.alphabet.quantum_count(ts.rules[r].lhs); }
    void add_rule(const Word& lhs, const Word& rhs, const CMatrix& u, const std::string& gate = "U", int line = 0);
    void validate() const;  // equal lengths, |.|_q preserved, unitaries sized and unitary
};

struct Neighbor {
    Word word;
    std::size_t rule;
    std::size_t position;  // 1-based start of the rewritten window
    bool forward;          // lhs -> rhs
};

std::vector<Neighbor> neighbors(const ThueSystem& ts, const Word& s);

std::size_t locality(const ThueSystem& ts);      // max rule length
std::size_t min_rule_length(const ThueSystem& ts);

struct EvolutionEdge {
    std::size_t from, to;  // from < to (BFS order)
    std::size_t rule, position;
    bool forward;          // rule applied lhs -> rhs when going from -> to
};

struct EvolutionGraph {
    std::vector<Word> vertices;  // BFS order, seed first
    std::vector<EvolutionEdge> edges;
    bool capped = false;
    std::unordered_map<Word, std::size_t> index;

    Graph graph(const Alphabet& a) const;
};

// Neighbour index over first symbols, built once per system; exploration of
// large evolutions reuses it.
class RuleIndex {
public:
    explicit RuleIndex(const ThueSystem& ts);
    template <typename F>
    void for_each(const Word& s, F&& f) const;
    std::vector<Neighbor> neighbors(const Word& s) const;

private:
    struct Pattern {
        std::size_t rule;
        bool forward;
    };
    const ThueSystem* ts_;
    std::vector<std::vector<Pattern>> by_first_;
};

EvolutionGraph explore_evolution(const ThueSystem& ts, const Word& seed, std::size_t cap = 1000000);

// ULG of an explored evolution: registers ordered by left-to-right position of
// quantum symbols; a rule acts on its matched registers, identity elsewhere.
Ulg qts_to_ulg(const Qts& q, const EvolutionGraph& ev);

// Chain Hamiltonian on the full space of N sites. compressed: site space
// C^{S_cl} (+) C^{S_q} (x) H; otherwise C^S (x) H with idle registers on
// classical sites.
SparseHermitian chain_hamiltonian(const Qts& q, std::size_t n_sites, bool compressed);
std::size_t site_dimension(const Qts& q, bool compressed);

// Chain Hamiltonian restricted to span{|s> (x) H^{(x) q} : s in evolution},
// assembled from local window terms.
SparseHermitian chain_block_hamiltonian(const Qts& q, const EvolutionGraph& ev);

struct Marker {
    Word pattern;
    CMatrix projector;  // on H^{(x) |pattern|_q}
};

enum class Verdict { accepts, rejects, undetermined };
std::string to_string(Verdict v);

struct Decision {
    Verdict verdict = Verdict::undetermined;
    double min_eigenvalue = 0.0;
    std::string reason;
};

Decision decide(const Qts& q, const Word& enc, const Marker& inp, const Marker& out, double eps,
                std::size_t cap = 1000000);

struct EvenNumberInstance {
    Qts qts;
    Word enc;
    Marker inp, out;
};

EvenNumberInstance even_number_example(std::size_t n);

std::string evolution_to_json(const Qts& q, const EvolutionGraph& ev);
std::string evolution_to_dot(const Alphabet& a, const EvolutionGraph& ev);

template <typename F>
void RuleIndex::for_each(const Word& s, F&& f) const {
    const auto& rules = ts_->rules;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Symbol c = s[i];
        if (c >= by_first_.size()) continue;
        for (const Pattern& p : by_first_[c]) {
            const Rule& r = rules[p.rule];
            const Word& from = p.forward ? r.lhs : r.rhs;
            if (i + from.size() > s.size() || s.compare(i, from.size(), from) != 0) continue;
            const Word& to = p.forward ? r.rhs : r.lhs;
            f(p.rule, i, p.forward, to);
        }
    }
}

}  // namespace wbench
