#include "wbench/qts.hpp"

#include "wbench/gates.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>
#include <sstream>
#include <tuple>

namespace wbench {

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
    std::size_t r = 1;
    while (e--) r *= b;
    return r;
}

std::size_t code_points(const std::string& s) {
    std::size_t n = 0;
    for (unsigned char c : s)
        if ((c & 0xC0) != 0x80) ++n;
    return n;
}

}  // namespace

Symbol Alphabet::add(const std::string& name, bool quantum) {
    if (name.empty()) throw Error("alphabet: empty symbol name");
    auto it = index_.find(name);
    if (it != index_.end()) {
        if (quantum) quantum_[it->second] = 1;
        return it->second;
    }
    if (names_.size() >= 0xFFFF) throw Error("alphabet: too many symbols");
    const Symbol s = Symbol(names_.size());
    names_.push_back(name);
    quantum_.push_back(quantum ? 1 : 0);
    index_.emplace(name, s);
    return s;
}

std::optional<Symbol> Alphabet::find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Symbol Alphabet::at(const std::string& name) const {
    auto s = find(name);
    if (!s) throw Error("foreign symbol '" + name + "'");
    return *s;
}

std::size_t Alphabet::quantum_size() const { return std::size_t(std::count(quantum_.begin(), quantum_.end(), 1)); }

Word Alphabet::parse(const std::string& text) const {
    Word w;
    const bool spaced = std::any_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); });
    if (spaced) {
        std::istringstream is(text);
        std::string tok;
        while (is >> tok) w.push_back(at(tok));
        return w;
    }
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t best = 0;
        Symbol sym = 0;
        for (std::size_t s = 0; s < names_.size(); ++s) {
            const std::string& n = names_[s];
            if (n.size() > best && text.compare(i, n.size(), n) == 0) {
                best = n.size();
                sym = Symbol(s);
            }
        }
        if (best == 0) throw Error("foreign symbol at offset " + std::to_string(i) + " of '" + text + "'");
        w.push_back(sym);
        i += best;
    }
    return w;
}

std::string Alphabet::render(const Word& w) const {
    const bool glyphs = std::all_of(names_.begin(), names_.end(), [](const std::string& n) { return code_points(n) == 1; });
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] >= names_.size()) throw Error("render: foreign symbol");
        if (!glyphs && i) out += ' ';
        out += names_[w[i]];
    }
    return out;
}

std::size_t Alphabet::quantum_count(const Word& w) const {
    std::size_t n = 0;
    for (Symbol s : w) n += quantum(s) ? 1 : 0;
    return n;
}

void Qts::add_rule(const Word& lhs, const Word& rhs, const CMatrix& u, const std::string& gate, int line) {
    ts.rules.push_back({lhs, rhs, gate, line});
    unitaries.push_back(u);
}

void Qts::validate() const {
    if (unitaries.size() != ts.rules.size()) throw Error("qts: one unitary per rule required");
    for (std::size_t r = 0; r < ts.rules.size(); ++r) {
        const Rule& rule = ts.rules[r];
        const std::string where = " (rule " + std::to_string(r) + ": " + ts.alphabet.render(rule.lhs) + " <-> " +
                                  ts.alphabet.render(rule.rhs) + ")";
        if (rule.lhs.empty() || rule.lhs.size() != rule.rhs.size()) throw Error("qts: rule sides differ in length" + where);
        if (rule.lhs == rule.rhs) throw Error("qts: trivial rule" + where);
        const std::size_t ql = ts.alphabet.quantum_count(rule.lhs), qr = ts.alphabet.quantum_count(rule.rhs);
        if (ql != qr) throw Error("qts: rule changes the quantum symbol count" + where);
        const CMatrix& u = unitaries[r];
        if (std::size_t(u.rows()) != ipow(qudit_dim, ql)) throw Error("qts: unitary has wrong dimension" + where);
        if (!is_unitary(u)) throw Error("qts: rule unitary is not unitary" + where);
    }
}

RuleIndex::RuleIndex(const ThueSystem& ts) : ts_(&ts) {
    by_first_.resize(ts.alphabet.size());
    for (std::size_t r = 0; r < ts.rules.size(); ++r) {
        const Rule& rule = ts.rules[r];
        if (rule.lhs.empty() || rule.lhs.size() != rule.rhs.size()) throw Error("thue system: rule sides differ in length");
        by_first_[rule.lhs[0]].push_back({r, true});
        by_first_[rule.rhs[0]].push_back({r, false});
    }
}

std::vector<Neighbor> RuleIndex::neighbors(const Word& s) const {
    for (Symbol c : s)
        if (c >= ts_->alphabet.size()) throw Error("neighbors: foreign symbol in word");
    std::vector<Neighbor> out;
    for_each(s, [&](std::size_t rule, std::size_t i, bool fwd, const Word& to) {
        Word t = s;
        t.replace(i, to.size(), to);
        out.push_back({std::move(t), rule, i + 1, fwd});
    });
    std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
        return std::tie(a.word, a.rule, a.position) < std::tie(b.word, b.rule, b.position);
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const Neighbor& a, const Neighbor& b) {
                              return a.word == b.word && a.rule == b.rule && a.position == b.position;
                          }),
              out.end());
    return out;
}

std::vector<Neighbor> neighbors(const ThueSystem& ts, const Word& s) { return RuleIndex(ts).neighbors(s); }

std::size_t locality(const ThueSystem& ts) {
    if (ts.rules.empty()) throw Error("locality: empty rule set");
    std::size_t k = 0;
    for (const Rule& r : ts.rules) k = std::max(k, r.lhs.size());
    return k;
}

std::size_t min_rule_length(const ThueSystem& ts) {
    if (ts.rules.empty()) throw Error("locality: empty rule set");
    std::size_t k = ts.rules.front().lhs.size();
    for (const Rule& r : ts.rules) k = std::min(k, r.lhs.size());
    return k;
}

Graph EvolutionGraph::graph(const Alphabet& a) const {
    Graph g;
    for (const Word& w : vertices) g.add_vertex(a.render(w));
    for (const EvolutionEdge& e : edges) g.add_edge(e.from, e.to);
    return g;
}

EvolutionGraph explore_evolution(const ThueSystem& ts, const Word& seed, std::size_t cap) {
    if (cap == 0) throw Error("explore_evolution: cap must be positive");
    for (Symbol c : seed)
        if (c >= ts.alphabet.size()) throw Error("explore_evolution: foreign symbol in seed");
    const RuleIndex idx(ts);
    EvolutionGraph ev;
    ev.vertices.push_back(seed);
    ev.index.emplace(seed, 0);
    for (std::size_t head = 0; head < ev.vertices.size(); ++head) {
        const Word cur = ev.vertices[head];
        std::vector<Neighbor> found = idx.neighbors(cur);
        for (Neighbor& nb : found) {
            auto it = ev.index.find(nb.word);
            std::size_t j;
            if (it == ev.index.end()) {
                if (ev.vertices.size() >= cap) {
                    ev.capped = true;
                    return ev;
                }
                j = ev.vertices.size();
                ev.index.emplace(nb.word, j);
                ev.vertices.push_back(std::move(nb.word));
            } else {
                j = it->second;
            }
            if (j > head) ev.edges.push_back({head, j, nb.rule, nb.position, nb.forward});
        }
    }
    return ev;
}

Ulg qts_to_ulg(const Qts& q, const EvolutionGraph& ev) {
    const Alphabet& a = q.alphabet();
    if (ev.vertices.empty()) throw Error("qts_to_ulg: empty evolution");
    const std::size_t nq = a.quantum_count(ev.vertices.front());
    const std::size_t d = q.qudit_dim;
    Ulg u(ipow(d, nq));
    for (const Word& w : ev.vertices) {
        if (a.quantum_count(w) != nq) throw Error("qts_to_ulg: rule application changed the quantum symbol count");
        u.add_vertex(a.render(w));
    }
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const EvolutionEdge& e : ev.edges) {
        if (!seen.insert({e.from, e.to}).second)
            throw Error("qts_to_ulg: parallel rule applications between '" + a.render(ev.vertices[e.from]) + "' and '" +
                        a.render(ev.vertices[e.to]) + "'");
        const Word& w = ev.vertices[e.from];
        const std::size_t k = a.quantum_count(w.substr(0, e.position - 1));
        const std::size_t qr = q.rule_quantum_count(e.rule);
        const CMatrix& ur = q.unitaries[e.rule];
        EdgeLabel l{e.forward ? ur : CMatrix(ur.adjoint()), ipow(d, k), ipow(d, nq - k - qr)};
        u.add_edge(e.from, e.to, std::move(l));
    }
    return u;
}

std::size_t site_dimension(const Qts& q, bool compressed) {
    const Alphabet& a = q.alphabet();
    return compressed ? a.classical_size() + a.quantum_size() * q.qudit_dim : a.size() * q.qudit_dim;
}

SparseHermitian chain_hamiltonian(const Qts& q, std::size_t n_sites, bool compressed) {
    const Alphabet& a = q.alphabet();
    const std::size_t d = q.qudit_dim;
    const std::size_t site = site_dimension(q, compressed);
    double total = 1;
    for (std::size_t i = 0; i < n_sites; ++i) total *= double(site);
    if (total > double(1 << 16)) throw Error("chain_hamiltonian: dimension cap exceeded; restrict to an evolution block");
    const std::size_t dim = std::size_t(total);

    // site state <-> (symbol, register value)
    std::vector<std::size_t> cl_rank(a.size()), q_rank(a.size());
    std::vector<Symbol> cl_of, q_of;
    for (std::size_t s = 0; s < a.size(); ++s) {
        if (a.quantum(Symbol(s))) {
            q_rank[s] = q_of.size();
            q_of.push_back(Symbol(s));
        } else {
            cl_rank[s] = cl_of.size();
            cl_of.push_back(Symbol(s));
        }
    }
    auto decode = [&](std::size_t idx, Symbol& sym, std::size_t& val) {
        if (compressed) {
            if (idx < cl_of.size()) {
                sym = cl_of[idx];
                val = 0;
            } else {
                sym = q_of[(idx - cl_of.size()) / d];
                val = (idx - cl_of.size()) % d;
            }
        } else {
            sym = Symbol(idx / d);
            val = idx % d;
        }
    };
    auto encode = [&](Symbol sym, std::size_t val) -> std::size_t {
        if (compressed) return a.quantum(sym) ? cl_of.size() + q_rank[sym] * d + val : cl_rank[sym];
        return std::size_t(sym) * d + val;
    };

    SparseHermitian h(dim);
    Word w(n_sites, 0);
    std::vector<std::size_t> vals(n_sites);
    for (std::size_t x = 0; x < dim; ++x) {
        std::size_t rest = x;
        for (std::size_t i = n_sites; i-- > 0;) {
            decode(rest % site, w[i], vals[i]);
            rest /= site;
        }
        for (std::size_t r = 0; r < q.ts.rules.size(); ++r) {
            const Rule& rule = q.ts.rules[r];
            const std::size_t len = rule.lhs.size();
            for (std::size_t i = 0; i + len <= n_sites; ++i) {
                if (w.compare(i, len, rule.rhs) == 0) h.add_diagonal(x, 1.0);
                if (w.compare(i, len, rule.lhs) != 0) continue;
                h.add_diagonal(x, 1.0);
                std::vector<std::size_t> src_q, dst_q, src_c, dst_c;
                for (std::size_t j = 0; j < len; ++j) {
                    (a.quantum(rule.lhs[j]) ? src_q : src_c).push_back(i + j);
                    (a.quantum(rule.rhs[j]) ? dst_q : dst_c).push_back(i + j);
                }
                std::size_t in = 0;
                for (std::size_t p : src_q) in = in * d + vals[p];
                const CMatrix& u = q.unitaries[r];
                for (Eigen::Index o = 0; o < u.rows(); ++o) {
                    const cd amp = u(o, Eigen::Index(in));
                    if (amp == cd(0.0, 0.0)) continue;
                    std::vector<std::size_t> nv = vals;
                    std::size_t oo = std::size_t(o);
                    for (std::size_t j = dst_q.size(); j-- > 0;) {
                        nv[dst_q[j]] = oo % d;
                        oo /= d;
                    }
                    for (std::size_t j = 0; j < dst_c.size(); ++j) nv[dst_c[j]] = compressed ? 0 : vals[src_c[j]];
                    Word t = w;
                    t.replace(i, len, rule.rhs);
                    std::size_t y = 0;
                    for (std::size_t s = 0; s < n_sites; ++s) y = y * site + encode(t[s], nv[s]);
                    h.add(y, x, -amp);
                }
            }
        }
    }
    return h;
}

SparseHermitian chain_block_hamiltonian(const Qts& q, const EvolutionGraph& ev) {
    if (ev.capped) throw Error("chain_block_hamiltonian: capped evolution");
    const Alphabet& a = q.alphabet();
    const std::size_t d = q.qudit_dim;
    const std::size_t nq = a.quantum_count(ev.vertices.front());
    const std::size_t regs = ipow(d, nq);
    SparseHermitian h(ev.vertices.size() * regs);
    for (std::size_t si = 0; si < ev.vertices.size(); ++si) {
        const Word& s = ev.vertices[si];
        for (std::size_t r = 0; r < q.ts.rules.size(); ++r) {
            const Rule& rule = q.ts.rules[r];
            const std::size_t len = rule.lhs.size();
            for (std::size_t i = 0; i + len <= s.size(); ++i) {
                if (s.compare(i, len, rule.rhs) == 0)
                    for (std::size_t x = 0; x < regs; ++x) h.add_diagonal(si * regs + x, 1.0);
                if (s.compare(i, len, rule.lhs) != 0) continue;
                for (std::size_t x = 0; x < regs; ++x) h.add_diagonal(si * regs + x, 1.0);
                Word t = s;
                t.replace(i, len, rule.rhs);
                auto it = ev.index.find(t);
                if (it == ev.index.end()) throw Error("chain_block_hamiltonian: evolution not closed under rules");
                const std::size_t ti = it->second;
                const std::size_t k = a.quantum_count(s.substr(0, i));
                const std::size_t qr = a.quantum_count(rule.lhs);
                const std::size_t right = ipow(d, nq - k - qr), width = ipow(d, qr);
                const CMatrix& u = q.unitaries[r];
                for (std::size_t x = 0; x < regs; ++x) {
                    const std::size_t hi = x / (right * width), in = (x / right) % width, lo = x % right;
                    for (std::size_t o = 0; o < width; ++o) {
                        const cd amp = u(Eigen::Index(o), Eigen::Index(in));
                        if (amp == cd(0.0, 0.0)) continue;
                        const std::size_t y = (hi * width + o) * right + lo;
                        h.add(ti * regs + y, si * regs + x, -amp);
                    }
                }
            }
        }
    }
    return h;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::accepts: return "accepts";
        case Verdict::rejects: return "rejects";
        default: return "undetermined";
    }
}

namespace {

std::optional<std::pair<std::size_t, std::size_t>> find_marker(const EvolutionGraph& ev, const Word& pattern) {
    for (std::size_t v = 0; v < ev.vertices.size(); ++v) {
        const auto pos = ev.vertices[v].find(pattern);
        if (pos != Word::npos) return std::make_pair(v, std::size_t(pos));
    }
    return std::nullopt;
}

}  // namespace

Decision decide(const Qts& q, const Word& enc, const Marker& inp, const Marker& out, double eps, std::size_t cap) {
    const Alphabet& a = q.alphabet();
    const std::size_t d = q.qudit_dim;
    Decision dec;
    const EvolutionGraph ev = explore_evolution(q.ts, enc, cap);
    if (ev.capped) {
        dec.reason = "evolution capped";
        return dec;
    }
    const auto mi = find_marker(ev, inp.pattern), mo = find_marker(ev, out.pattern);
    if (!mi || !mo) throw Error("decide: marker not reachable from the encoded instance");
    const Ulg u = qts_to_ulg(q, ev);
    if (!check_simple(u).simple) {
        dec.reason = "evolution is not simple; chain unitary is path dependent";
        return dec;
    }
    const std::size_t nq = a.quantum_count(enc);
    const std::vector<CMatrix> tr = tree_transports(u);
    const CMatrix chain = tr[mo->first] * tr[mi->first].adjoint();
    auto lift = [&](const Marker& m, std::size_t v, std::size_t pos) {
        const std::size_t k = a.quantum_count(ev.vertices[v].substr(0, pos));
        const std::size_t qm = a.quantum_count(m.pattern);
        if (std::size_t(m.projector.rows()) != ipow(d, qm)) throw Error("decide: marker projector has wrong dimension");
        if (!is_projector(m.projector)) throw Error("decide: marker matrix is not a projector");
        return embed(m.projector, ipow(d, k), ipow(d, nq - k - qm));
    };
    const CMatrix pin = lift(inp, mi->first, mi->second);
    const CMatrix pout = lift(out, mo->first, mo->second);
    const CMatrix m = pin + chain.adjoint() * pout * chain;
    dec.min_eigenvalue = hermitian_eigs(CMatrix(0.5 * (m + m.adjoint())), -1, false).eigenvalues(0);
    if (dec.min_eigenvalue <= eps / 2)
        dec.verdict = Verdict::accepts;
    else if (dec.min_eigenvalue >= eps)
        dec.verdict = Verdict::rejects;
    else
        dec.reason = "value between eps/2 and eps";
    return dec;
}

EvenNumberInstance even_number_example(std::size_t n) {
    EvenNumberInstance e;
    Alphabet& a = e.qts.ts.alphabet;
    const Symbol dash = a.add("−"), star = a.add("★", true), bar = a.add("‖");
    e.qts.qudit_dim = 2;
    CMatrix r(2, 2);
    r << 0, 1, -1, 0;  // -|1><0| + |0><1|
    e.qts.add_rule(Word{star, dash}, Word{dash, star}, r, "rot(-1.5707963267948966)");
    e.enc = Word(1, star) + Word(n, dash) + Word(1, bar);
    CMatrix p1 = CMatrix::Zero(2, 2);
    p1(1, 1) = 1.0;
    e.inp = {e.enc, p1};
    e.out = {Word{star, bar}, p1};
    return e;
}

std::string evolution_to_json(const Qts& q, const EvolutionGraph& ev) {
    const Alphabet& a = q.alphabet();
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (const Word& w : ev.vertices) j["vertices"].push_back(a.render(w));
    j["edges"] = nlohmann::json::array();
    for (const EvolutionEdge& e : ev.edges) {
        const Rule& r = q.ts.rules[e.rule];
        j["edges"].push_back({{"from", a.render(ev.vertices[e.from])},
                              {"to", a.render(ev.vertices[e.to])},
                              {"rule", e.rule},
                              {"position", e.position},
                              {"direction", e.forward ? "forward" : "backward"},
                              {"gate", e.rule < q.unitaries.size() ? gate_name(q.unitaries[e.rule], q.qudit_dim) : r.gate}});
    }
    j["capped"] = ev.capped;
    return j.dump();
}

std::string evolution_to_dot(const Alphabet& a, const EvolutionGraph& ev) { return to_dot(ev.graph(a)); }

}  // namespace wbench
