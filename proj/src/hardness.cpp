#include "wbench/hardness.hpp"

#include "wbench/gates.hpp"
#include "wbench/rules_dsl.hpp"
#include "wbench/wheelbarrow.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

namespace wbench {

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
    std::size_t r = 1;
    while (e--) r *= b;
    return r;
}

}  // namespace

double bracket_boundary_energy(const HardnessModel& m, const Word& s) {
    double e = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (m.boundary[s[i]]) e -= 1.0;
        if (i + 1 < s.size() && bool(m.boundary[s[i]]) != bool(m.boundary[s[i + 1]])) e += 0.5;
    }
    return e;
}

std::size_t head_count(const HardnessModel& m, const Word& s) {
    std::size_t h = 0;
    for (Symbol c : s) h += m.head[c] ? 1 : 0;
    return h;
}

double head_bonus(const HardnessModel& m, const Word& s) { return -double(head_count(m, s)); }

std::size_t illegal_pair_count(const HardnessModel& m, const Word& s) {
    if (!m.allowed) return 0;
    std::size_t k = 0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) k += m.allowed(s[i], s[i + 1]) ? 0 : 1;
    return k;
}

bool bracketed(const HardnessModel& m, const Word& s) {
    return s.size() >= 2 && m.boundary[s.front()] && m.boundary[s.back()];
}

double AssembledHamiltonian::term_residual() const {
    SparseC sum = h_l.matrix() + heads.matrix() + boundaries.matrix() + shift.matrix() + illegal.matrix() +
                  in_out.matrix();
    SparseC diff = total.matrix() - sum;
    double r = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (SparseC::InnerIterator it(diff, k); it; ++it) r = std::max(r, std::abs(it.value()));
    return r;
}

AssembledHamiltonian assemble(const Qts& q, const EvolutionGraph& ev, const HardnessModel& m, double p) {
    if (ev.capped) throw Error("assemble: evolution block was capped");
    if (ev.vertices.empty()) throw Error("assemble: empty block");
    const Alphabet& a = q.alphabet();
    AssembledHamiltonian h;
    h.strings = ev.vertices;
    h.p = p;
    const std::size_t nq = a.quantum_count(ev.vertices.front());
    const std::size_t d = q.qudit_dim;
    const std::size_t reg = ipow(d, nq);
    h.register_dim = reg;
    const std::size_t dim = ev.vertices.size() * reg;

    h.h_l = associated_hamiltonian(qts_to_ulg(q, ev));
    h.heads = h.boundaries = h.shift = h.illegal = h.in_out = SparseHermitian(dim);
    for (std::size_t v = 0; v < ev.vertices.size(); ++v) {
        const Word& s = ev.vertices[v];
        const double hb = head_bonus(m, s), bb = 2.0 * (p + 1.0) * bracket_boundary_energy(m, s);
        const double ip = p * double(illegal_pair_count(m, s));
        for (std::size_t r = 0; r < reg; ++r) {
            const std::size_t i = v * reg + r;
            if (hb != 0.0) h.heads.add_diagonal(i, hb);
            if (bb != 0.0) h.boundaries.add_diagonal(i, bb);
            h.shift.add_diagonal(i, 2.0 * (p + 1.0) - 1.0);
            if (ip != 0.0) h.illegal.add_diagonal(i, ip);
        }
        for (const Marker& mk : m.markers) {
            const std::size_t qm = a.quantum_count(mk.pattern);
            if (std::size_t(mk.projector.rows()) != ipow(d, qm)) throw Error("assemble: marker projector has wrong size");
            for (std::size_t pos = s.find(mk.pattern); pos != Word::npos; pos = s.find(mk.pattern, pos + 1)) {
                const std::size_t k = a.quantum_count(s.substr(0, pos));
                h.in_out.add_block(v * reg, v * reg, embed(mk.projector, ipow(d, k), ipow(d, nq - k - qm)), 1e-15);
            }
        }
    }
    h.total = SparseHermitian(dim);
    for (const SparseHermitian* t : {&h.h_l, &h.heads, &h.boundaries, &h.shift, &h.illegal, &h.in_out}) h.total += *t;
    return h;
}

AssembledHamiltonian rescaled(const AssembledHamiltonian& h, double factor) {
    if (!(factor > 0.0)) throw Error("rescaled: factor must be positive");
    AssembledHamiltonian r = h;
    for (SparseHermitian* t : {&r.h_l, &r.heads, &r.boundaries, &r.shift, &r.illegal, &r.in_out, &r.total}) {
        SparseHermitian s(t->dim());
        for (const auto& e : t->entries()) s.add(e.row, e.col, e.value / factor);
        *t = s;
    }
    r.p = h.p / factor;
    return r;
}

double lambda_min(const AssembledHamiltonian& h) {
    if (h.dim() <= tolerances().dense_limit) return hermitian_eigs(h.total.dense(), -1.0, false).eigenvalues(0);
    return smallest_eigs(h.total, 1).eigenvalues(0);
}

namespace {

double expectation(const SparseHermitian& op, const CVector& psi) {
    if (std::size_t(psi.size()) != op.dim()) throw Error("expectation: vector is not in the block");
    const double norm = psi.squaredNorm();
    if (norm <= 0.0) throw Error("expectation: zero vector");
    return (psi.adjoint() * (op.matrix() * psi))(0).real() / norm;
}

}  // namespace

double completeness_energy(const AssembledHamiltonian& h, const CVector& psi) { return expectation(h.total, psi); }

double marker_expectation(const AssembledHamiltonian& h, const CVector& psi) { return expectation(h.in_out, psi); }

ToyInstance toy_instance(std::size_t m, bool accepting, double eps, bool with_markers) {
    if (m < 2) throw Error("toy instance needs at least two history strings");
    if (!(eps > 0.0 && eps < 1.0)) throw Error("toy instance needs 0 < eps < 1");
    const double final_angle = accepting ? std::acos(std::sqrt(eps)) : std::asin(std::sqrt(eps));
    std::ostringstream os;
    os.precision(17);
    os << "# alphabet: | _\n# quantum: >\n> _ <-> _ > @ rot(" << final_angle / double(m - 1) << ")\n";
    ToyInstance t;
    t.qts = parse_rules(os.str());
    t.m = m;
    const Alphabet& a = t.qts.alphabet();
    const Symbol bar = a.at("|"), blank = a.at("_"), head = a.at(">");
    t.model.head.assign(a.size(), 0);
    t.model.boundary.assign(a.size(), 0);
    t.model.head[head] = 1;
    t.model.boundary[bar] = 1;
    t.model.allowed = [head](Symbol x, Symbol y) { return !(x == head && y == head); };
    if (with_markers) {
        CMatrix one = CMatrix::Zero(2, 2), zero = CMatrix::Zero(2, 2);
        one(1, 1) = 1.0;
        zero(0, 0) = 1.0;
        t.model.markers = {{a.parse("| >"), one}, {a.parse("> |"), zero}};
    }
    t.seed = Word(1, bar) + Word(1, head) + Word(m - 1, blank) + Word(1, bar);
    return t;
}

namespace {

struct ToyBlock {
    EvolutionGraph ev;
    AssembledHamiltonian h;
};

ToyBlock toy_block(const ToyInstance& t, const Word& seed, double p) {
    ToyBlock b;
    b.ev = explore_evolution(t.qts.ts, seed, 1000000);
    b.h = assemble(t.qts, b.ev, t.model, p);
    return b;
}

BlockResult block_result(const ToyInstance& t, const std::string& kind, const Word& seed, const ToyBlock& b,
                         double bound, bool lower, double tol = 1e-9) {
    BlockResult r;
    r.kind = kind;
    r.seed = t.qts.alphabet().render(seed);
    r.size = b.ev.vertices.size();
    r.heads = head_count(t.model, seed);
    r.lambda_min = lambda_min(b.h);
    r.bound = bound;
    r.lower = lower;
    r.ok = lower ? r.lambda_min >= bound - tol : r.lambda_min <= bound + tol;
    return r;
}

}  // namespace

PromiseGapReport promise_gap_report(std::size_t m, const HardnessConfig& cfg) {
    PromiseGapReport rep;
    rep.m = m;
    rep.n = m + 2;
    rep.p = cfg.p.value_or(std::pow(double(rep.n), 5));
    rep.eps = cfg.eps.value_or(1.0 / std::pow(double(m), 4));
    if (rep.p < double(rep.n)) throw Error("hardness: scale p must be at least the chain length");
    rep.alpha = -2.0 + rep.eps;
    rep.beta = -2.0 + (1.0 - rep.eps) / std::pow(double(m), 3);
    rep.gap = rep.beta - rep.alpha;

    const ToyInstance acc = toy_instance(m, true, rep.eps), rej = toy_instance(m, false, rep.eps);
    const ToyInstance plain = toy_instance(m, true, rep.eps, false);
    const Alphabet& a = acc.qts.alphabet();
    const Symbol bar = a.at("|"), blank = a.at("_"), head = a.at(">");
    const std::size_t n = rep.n;

    // history block without markers: exactly -2
    ToyBlock hp = toy_block(plain, plain.seed, rep.p);
    BlockResult plain_r = block_result(plain, "history-no-markers", plain.seed, hp, -2.0, true);
    plain_r.ok = std::abs(plain_r.lambda_min + 2.0) <= 1e-9;
    rep.blocks.push_back(plain_r);

    // accepting: lambda_min <= alpha, and the history state energy is -2 + <P_in/out>
    ToyBlock ha = toy_block(acc, acc.seed, rep.p);
    BlockResult acc_r = block_result(acc, "history-accepting", acc.seed, ha, rep.alpha, false);
    {
        const Ulg u = qts_to_ulg(acc.qts, ha.ev);
        const std::vector<CMatrix> tr = tree_transports(u);
        CVector e0 = CVector::Zero(2);
        e0(0) = 1.0;
        const CVector root = tr[0].adjoint() * e0;
        CVector psi(Eigen::Index(ha.h.dim()));
        for (std::size_t v = 0; v < tr.size(); ++v) psi.segment(Eigen::Index(2 * v), 2) = tr[v] * root;
        psi /= psi.norm();
        rep.completeness_accepting = completeness_energy(ha.h, psi);
        const double marker = marker_expectation(ha.h, psi);
        acc_r.ok = acc_r.ok && std::abs(rep.completeness_accepting - (-2.0 + marker)) <= 1e-9 &&
                   rep.completeness_accepting <= rep.alpha + 1e-12;
    }
    rep.blocks.push_back(acc_r);

    ToyBlock hr = toy_block(rej, rej.seed, rep.p);
    rep.blocks.push_back(block_result(rej, "history-rejecting", rej.seed, hr, rep.beta, true, 0.0));

    // zero heads, no brackets
    const Word free_zero(n, blank);
    rep.blocks.push_back(block_result(rej, "zero-head", free_zero, toy_block(rej, free_zero, rep.p), 0.0, true));
    // zero heads between brackets: the bracket bonus is not compensated
    const Word bracket_zero = Word(1, bar) + Word(n - 2, blank) + Word(1, bar);
    rep.blocks.push_back(
        block_result(rej, "zero-head-bracketed", bracket_zero, toy_block(rej, bracket_zero, rep.p), 0.0, true));
    // non-bracketed blocks with h heads: >= -h + p
    for (std::size_t h = 1; h <= 2; ++h) {
        Word s(n, blank);
        s.front() = bar;
        for (std::size_t k = 0; k < h; ++k) s[1 + 2 * k] = head;
        rep.blocks.push_back(
            block_result(rej, "non-bracketed", s, toy_block(rej, s, rep.p), -double(h) + rep.p, true, 1e-6));
    }
    // illegal-pair block: diagonal part is -h - 1 plus p times the penalized
    // vertices; the graph bound covers the Laplacian with unit penalties
    {
        Word s = Word(1, bar) + Word(2, head) + Word(n - 4, blank) + Word(1, bar);
        ToyBlock b = toy_block(rej, s, rep.p);
        std::vector<std::string> penalized;
        for (const auto& v : b.ev.vertices)
            if (illegal_pair_count(rej.model, v)) penalized.push_back(a.render(v));
        const PenalizedBound pb = penalized_bound(b.ev.graph(a), penalized);
        rep.blocks.push_back(block_result(rej, "illegal-pair", s, b, -3.0 + pb.kitaev_lower_bound, true));
    }

    rep.ok = rep.gap > 0.0;
    for (const auto& b : rep.blocks) rep.ok = rep.ok && b.ok;
    return rep;
}

std::optional<BlockResult> wheelbarrow_history_block(std::size_t n, std::size_t dim_cap) {
    const WheelbarrowSystem& w = wheelbarrow(false);
    History h = explore_history(n, 10000000, false);
    const std::size_t dim = h.graph.vertices.size() * (std::size_t(1) << h.report.qubits);
    if (h.graph.capped || dim > dim_cap) return std::nullopt;
    HardnessModel m;
    m.head = w.head;
    m.boundary = w.boundary;
    const AllowedPairs literal = allowed_pairs(w, false);
    m.allowed = [literal](Symbol x, Symbol y) { return literal.allowed(x, y); };
    CMatrix one = CMatrix::Zero(2, 2);
    one(1, 1) = 1.0;
    const Marker marker{w.alphabet().parse("OA -:a"), one};
    m.markers = {marker, marker};
    bool matched = false;
    for (const auto& s : h.graph.vertices) matched = matched || s.find(marker.pattern) != Word::npos;
    const double p = std::pow(double(n), 5);
    AssembledHamiltonian ham = assemble(w.qts, h.graph, m, p);
    BlockResult r;
    r.kind = matched ? "wheelbarrow-history" : "wheelbarrow-history-no-markers";
    r.seed = h.report.encoding;
    r.size = h.graph.vertices.size();
    r.heads = 1;
    r.lambda_min = lambda_min(ham);
    r.bound = -2.0;
    r.lower = true;
    r.ok = matched ? r.lambda_min >= -2.0 - 1e-9 : std::abs(r.lambda_min + 2.0) <= 1e-9;
    return r;
}

std::string promise_gap_json(const PromiseGapReport& r) {
    nlohmann::json blocks = nlohmann::json::array();
    for (const auto& b : r.blocks)
        blocks.push_back({{"class", b.kind},
                          {"seed", b.seed},
                          {"size", b.size},
                          {"heads", b.heads},
                          {"lambda_min", b.lambda_min},
                          {"bound", b.bound},
                          {"bound_type", b.lower ? "lower" : "upper"},
                          {"margin", b.lower ? b.lambda_min - b.bound : b.bound - b.lambda_min},
                          {"ok", b.ok}});
    nlohmann::json j{{"M", r.m},
                     {"n", r.n},
                     {"p", r.p},
                     {"eps", r.eps},
                     {"alpha", r.alpha},
                     {"beta", r.beta},
                     {"gap", r.gap},
                     {"completeness_accepting", r.completeness_accepting},
                     {"blocks", blocks},
                     {"ok", r.ok}};
    return j.dump(2);
}

}  // namespace wbench
