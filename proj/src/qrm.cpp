#include "wbench/qrm.hpp"

#include "wbench/gates.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <sstream>

namespace wbench {

char flag_char(Flag f) {
    switch (f) {
        case Flag::none: return '-';
        case Flag::right: return '>';
        case Flag::left: return '<';
        case Flag::halt: return 'h';
    }
    return '?';
}

std::size_t Tm::state_index(const std::string& q) const {
    auto it = std::find(states.begin(), states.end(), q);
    if (it == states.end()) throw Error("unknown state '" + q + "'");
    return std::size_t(it - states.begin()) + 1;
}

std::size_t Tm::symbol_index(const std::string& s) const {
    auto it = std::find(alphabet.begin(), alphabet.end(), s);
    if (it == alphabet.end()) throw Error("unknown tape symbol '" + s + "'");
    return std::size_t(it - alphabet.begin());
}

namespace {

const char* move_name(Move m) { return m == Move::left ? "left" : "right"; }

std::string quint_str(const Quintuple& t) {
    return "(" + t.q + "," + t.s + ")->(" + t.s_new + "," + move_name(t.dir) + "," + t.q_new + ")";
}

bool known(const std::vector<std::string>& v, const std::string& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

std::vector<Violation> validate(const Tm& tm) {
    std::vector<Violation> out;
    auto structure = [&](const std::string& msg) { out.push_back({"structure", msg}); };
    if (tm.alphabet.empty()) structure("empty tape alphabet");
    if (!known(tm.states, tm.initial)) structure("initial state '" + tm.initial + "' not declared");
    if (!known(tm.states, tm.halting)) structure("halting state '" + tm.halting + "' not declared");
    if (tm.initial == tm.halting) structure("initial and halting state coincide");
    if (std::set<std::string>(tm.states.begin(), tm.states.end()).size() != tm.states.size())
        structure("duplicate state names");
    if (std::set<std::string>(tm.alphabet.begin(), tm.alphabet.end()).size() != tm.alphabet.size())
        structure("duplicate tape symbols");
    for (const auto& [q, g] : tm.quantum_states)
        if (!known(tm.states, q)) structure("quantum state '" + q + "' not declared");
    for (const auto& t : tm.delta) {
        if (!known(tm.states, t.q) || !known(tm.states, t.q_new))
            structure("unknown state in " + quint_str(t));
        if (!known(tm.alphabet, t.s) || !known(tm.alphabet, t.s_new))
            structure("unknown symbol in " + quint_str(t));
        if (t.q == tm.halting) structure("halting state has a forward transition " + quint_str(t));
    }
    for (std::size_t i = 0; i < tm.delta.size(); ++i)
        for (std::size_t j = i + 1; j < tm.delta.size(); ++j) {
            const auto& a = tm.delta[i];
            const auto& b = tm.delta[j];
            if (a.q == b.q && a.s == b.s)
                out.push_back({"determinism", quint_str(a) + " and " + quint_str(b) + " share (q, s)"});
            if (a.q_new == b.q_new) {
                if (a.s_new == b.s_new)
                    out.push_back({"reversibility",
                                   quint_str(a) + " and " + quint_str(b) + " enter the same state writing the same symbol"});
                if (a.dir != b.dir)
                    out.push_back({"reversibility",
                                   quint_str(a) + " and " + quint_str(b) + " enter the same state from different directions"});
            }
        }
    return out;
}

std::vector<std::size_t> PermutationForm::inverse() const {
    std::vector<std::size_t> inv(t.size());
    for (std::size_t x = 0; x < t.size(); ++x) inv[t[x]] = x;
    return inv;
}

PermutationForm to_permutation(const Tm& tm) {
    auto v = validate(tm);
    if (!v.empty()) throw Error("machine is not a valid reversible TM: " + v.front().detail);
    PermutationForm p;
    p.n_states = tm.state_count();
    p.n_symbols = tm.alphabet.size();
    const std::size_t total = p.n_states * p.n_symbols;
    p.t.assign(total, total);
    p.matched.assign(total, false);
    p.d.assign(p.n_states, std::nullopt);
    std::vector<bool> hit(total, false);
    for (std::size_t s = 0; s < p.n_symbols; ++s) {
        p.t[s] = s;
        p.matched[s] = true;
        hit[s] = true;
    }
    for (const auto& q : tm.delta) {
        std::size_t x = tm.state_index(q.q) * p.n_symbols + tm.symbol_index(q.s);
        std::size_t y = tm.state_index(q.q_new) * p.n_symbols + tm.symbol_index(q.s_new);
        p.t[x] = y;
        p.matched[x] = true;
        hit[y] = true;
        p.d[tm.state_index(q.q_new)] = q.dir;
    }
    std::vector<std::size_t> free_dom, free_img;
    for (std::size_t x = 0; x < total; ++x) {
        if (p.t[x] == total && !hit[x]) {
            p.t[x] = x;  // fixed point first
            hit[x] = true;
        }
    }
    for (std::size_t x = 0; x < total; ++x) {
        if (p.t[x] == total) free_dom.push_back(x);
        if (!hit[x]) free_img.push_back(x);
    }
    if (free_dom.size() != free_img.size()) throw Error("permutation completion failed");
    for (std::size_t i = 0; i < free_dom.size(); ++i) p.t[free_dom[i]] = free_img[i];
    return p;
}

std::size_t HeadUnitary::cell_index(int psi, const CellClassical& c) const {
    return ((std::size_t(psi) * gamma_size() + c.q * perm.n_symbols + c.s) * 4) + std::size_t(c.f);
}

namespace {

void apply_t(const PermutationForm& p, CellClassical& c, const std::vector<std::size_t>& t, bool* completion) {
    std::size_t x = c.q * p.n_symbols + c.s;
    if (completion && !p.matched[x]) *completion = true;
    std::size_t y = t[x];
    c.q = y / p.n_symbols;
    c.s = y % p.n_symbols;
}

bool swap_trigger(Flag fa, Flag fb) {
    return (fa == Flag::right && fb == Flag::none) || (fa == Flag::none && fb == Flag::left);
}

}  // namespace

std::pair<CellClassical, CellClassical> HeadUnitary::classical(CellClassical a, CellClassical b,
                                                               bool* completion) const {
    if (swap_trigger(a.f, b.f)) std::swap(a.q, b.q);
    a.f = a.f ^ flag_of_state[b.q];
    b.f = b.f ^ flag_of_state[a.q];
    apply_t(perm, a, perm.t, completion);
    apply_t(perm, b, perm.t, completion);
    a.f = a.f ^ flag_of_state[a.q];
    b.f = b.f ^ flag_of_state[b.q];
    return {a, b};
}

std::pair<CellClassical, CellClassical> HeadUnitary::classical_inverse(CellClassical a, CellClassical b) const {
    a.f = a.f ^ flag_of_state[a.q];
    b.f = b.f ^ flag_of_state[b.q];
    apply_t(perm, a, t_inverse, nullptr);
    apply_t(perm, b, t_inverse, nullptr);
    a.f = a.f ^ flag_of_state[b.q];
    b.f = b.f ^ flag_of_state[a.q];
    if (swap_trigger(a.f, b.f)) std::swap(a.q, b.q);
    return {a, b};
}

std::optional<CMatrix> HeadUnitary::quantum(const CellClassical& a, const CellClassical& b) const {
    const auto& ga = gates[a.q];
    const auto& gb = gates[b.q];
    if (ga && gb) return CMatrix(*gb * *ga);
    if (ga) return ga;
    return gb;
}

SparseC HeadUnitary::matrix() const {
    const std::size_t S = cell_dim();
    std::vector<CellClassical> cls;
    for (std::size_t q = 0; q < perm.n_states; ++q)
        for (std::size_t s = 0; s < perm.n_symbols; ++s)
            for (int f = 0; f < 4; ++f) cls.push_back({q, s, Flag(f)});
    std::vector<Eigen::Triplet<cd>> trip;
    trip.reserve(cls.size() * cls.size() * 4);
    for (const auto& ca : cls)
        for (const auto& cb : cls) {
            auto [pa, pb] = classical(ca, cb);
            auto u = quantum(pa, pb);
            for (int psa = 0; psa < 2; ++psa)
                for (int psb = 0; psb < 2; ++psb) {
                    std::size_t col = cell_index(psa, ca) * S + cell_index(psb, cb);
                    if (!u) {
                        trip.emplace_back(Eigen::Index(cell_index(psa, pa) * S + cell_index(psb, pb)),
                                          Eigen::Index(col), cd(1.0));
                        continue;
                    }
                    for (int out = 0; out < 4; ++out) {
                        cd v = (*u)(out, psa * 2 + psb);
                        if (v == cd(0.0)) continue;
                        std::size_t row = cell_index(out >> 1, pa) * S + cell_index(out & 1, pb);
                        trip.emplace_back(Eigen::Index(row), Eigen::Index(col), v);
                    }
                }
        }
    SparseC r(Eigen::Index(S * S), Eigen::Index(S * S));
    r.setFromTriplets(trip.begin(), trip.end());
    return r;
}

namespace {

CMatrix two_qubit_gate(const std::string& spec) {
    for (const char* single : {"x", "y", "z"})
        if (spec == single) return tensor(gate_from_spec(spec, 2, 1), identity(2));
    if (spec.rfind("rot(", 0) == 0) return tensor(gate_from_spec(spec, 2, 1), identity(2));
    return gate_from_spec(spec, 2, 2);
}

}  // namespace

HeadUnitary build_head(const Tm& tm, const std::map<std::string, CMatrix>& gate_map) {
    HeadUnitary h;
    h.tm = tm;
    h.perm = to_permutation(tm);
    h.t_inverse = h.perm.inverse();
    h.flag_of_state.assign(h.perm.n_states, Flag::none);
    h.gates.assign(h.perm.n_states, std::nullopt);
    for (std::size_t q = 1; q < h.perm.n_states; ++q) {
        if (tm.state_name(q) == tm.halting)
            h.flag_of_state[q] = Flag::halt;
        else if (h.perm.d[q])
            h.flag_of_state[q] = *h.perm.d[q] == Move::right ? Flag::right : Flag::left;
    }
    const std::size_t q0 = tm.state_index(tm.initial);
    if (h.perm.d[q0] == Move::left)
        throw Error("initial state is entered by a left move; the ring encoding starts with flag ->");
    h.flag_of_state[q0] = Flag::right;
    for (const auto& [q, spec] : tm.quantum_states) {
        auto it = gate_map.find(q);
        CMatrix u;
        if (it != gate_map.end())
            u = it->second;
        else if (!spec.empty())
            u = two_qubit_gate(spec);
        else
            throw Error("no gate given for quantum state '" + q + "'");
        if (u.rows() != 4 || !is_unitary(u)) throw Error("gate for state '" + q + "' is not a two-qubit unitary");
        h.gates[tm.state_index(q)] = u;
    }
    for (const auto& [q, u] : gate_map)
        if (!tm.quantum_states.count(q)) throw Error("gate given for non-quantum state '" + q + "'");
    return h;
}

std::size_t RingState::active_count() const {
    return std::size_t(std::count_if(cells.begin(), cells.end(), [](const auto& c) { return c.f != Flag::none; }));
}

std::optional<std::size_t> RingState::active_cell() const {
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i].f != Flag::none) return i;
    return std::nullopt;
}

std::pair<std::size_t, std::size_t> ring_pair(std::size_t n, std::size_t t) {
    std::size_t i = (n - 1 + (t - 1)) % n;
    return {i, (i + 1) % n};
}

RingState initial_ring(const HeadUnitary& head, std::size_t n, const std::vector<int>& input_bits,
                       const std::vector<std::size_t>& tape) {
    if (n < 2) throw Error("ring needs at least 2 cells");
    if (n > 24) throw Error("ring size " + std::to_string(n) + " exceeds the state-vector limit of 24 qubits");
    if (input_bits.size() > n - 1 || tape.size() > n - 1)
        throw Error("input of length " + std::to_string(std::max(input_bits.size(), tape.size())) +
                    " exceeds the " + std::to_string(n - 1) + " usable cells");
    RingState st;
    st.n = n;
    st.cells.assign(n, CellClassical{});
    for (std::size_t i = 0; i < tape.size(); ++i) {
        if (tape[i] >= head.perm.n_symbols) throw Error("tape symbol index out of range");
        st.cells[i].s = tape[i];
    }
    st.cells[n - 1].q = head.tm.state_index(head.tm.initial);
    st.cells[n - 1].f = Flag::right;
    std::size_t basis = 0;
    const std::size_t l = input_bits.size();
    for (std::size_t i = 0; i < l; ++i) {
        if (input_bits[i] != 0 && input_bits[i] != 1) throw Error("input bits must be 0 or 1");
        if (input_bits[i]) basis |= std::size_t(1) << (n - 1 - (n - l - 1 + i));
    }
    st.qubits = CVector::Zero(Eigen::Index(std::size_t(1) << n));
    st.qubits(Eigen::Index(basis)) = 1.0;
    return st;
}

namespace {

void apply_pair_gate(CVector& v, std::size_t n, std::size_t i, std::size_t j, const CMatrix& u) {
    const std::size_t bi = std::size_t(1) << (n - 1 - i);
    const std::size_t bj = std::size_t(1) << (n - 1 - j);
    for (std::size_t x = 0; x < std::size_t(v.size()); ++x) {
        if (x & (bi | bj)) continue;
        const std::size_t idx[4] = {x, x | bj, x | bi, x | bi | bj};
        cd in[4], out[4];
        for (int k = 0; k < 4; ++k) in[k] = v(Eigen::Index(idx[k]));
        for (int r = 0; r < 4; ++r) {
            out[r] = 0.0;
            for (int c = 0; c < 4; ++c) out[r] += u(r, c) * in[c];
        }
        for (int k = 0; k < 4; ++k) v(Eigen::Index(idx[k])) = out[k];
    }
}

}  // namespace

void ring_step(const HeadUnitary& head, RingState& st, bool* completion) {
    auto [i, j] = ring_pair(st.n, st.step_count + 1);
    auto [a, b] = head.classical(st.cells[i], st.cells[j], completion);
    st.cells[i] = a;
    st.cells[j] = b;
    if (auto u = head.quantum(a, b)) apply_pair_gate(st.qubits, st.n, i, j, *u);
    ++st.step_count;
}

void ring_step_back(const HeadUnitary& head, RingState& st) {
    if (st.step_count == 0) throw Error("ring is already at its initial step");
    auto [i, j] = ring_pair(st.n, st.step_count);
    if (auto u = head.quantum(st.cells[i], st.cells[j])) apply_pair_gate(st.qubits, st.n, i, j, u->adjoint());
    auto [a, b] = head.classical_inverse(st.cells[i], st.cells[j]);
    st.cells[i] = a;
    st.cells[j] = b;
    --st.step_count;
}

namespace {

std::string flag_string(const RingState& st) {
    std::string s;
    for (const auto& c : st.cells) s += flag_char(c.f);
    return s;
}

}  // namespace

RingRun run_ring(const HeadUnitary& head, std::size_t n, const std::vector<int>& input_bits,
                 std::size_t max_steps, const std::vector<std::size_t>& tape, bool keep_trace) {
    if (max_steps < 1) throw Error("max_steps must be at least 1");
    RingRun run;
    RingState st = initial_ring(head, n, input_bits, tape);
    for (std::size_t t = 1; t <= max_steps; ++t) {
        ring_step(head, st, &run.used_completion);
        auto [i, j] = ring_pair(n, t);
        if (st.active_count() != 1)
            throw Error("single active flag invariant violated at step " + std::to_string(t));
        if (keep_trace) run.trace.push_back({t, i, j, st.cells[i], st.cells[j], flag_string(st)});
        for (std::size_t c : {i, j})
            if (st.cells[c].f == Flag::halt) {
                run.halted_at = t;
                run.halted_cell = c;
            }
        if (run.halted_at) break;
    }
    if (run.halted_at) {
        const std::size_t bit = std::size_t(1) << (n - 1 - *run.halted_cell);
        for (std::size_t x = 0; x < std::size_t(st.qubits.size()); ++x)
            if (x & bit) run.accept_overlap += std::norm(st.qubits(Eigen::Index(x)));
    }
    run.final_state = std::move(st);
    return run;
}

std::string trace_json_lines(const HeadUnitary& head, const RingRun& run) {
    std::ostringstream os;
    auto cell = [&](const CellClassical& c) {
        return nlohmann::json{{"q", head.tm.state_name(c.q)},
                              {"s", head.tm.alphabet.at(c.s)},
                              {"flag", std::string(1, flag_char(c.f))}};
    };
    for (const auto& r : run.trace) {
        nlohmann::json j{{"step", r.step},
                         {"cells", {r.cell_a, r.cell_b}},
                         {"a", cell(r.a)},
                         {"b", cell(r.b)},
                         {"flags", r.flags}};
        os << j.dump() << '\n';
    }
    return os.str();
}

TmRun run_tm(const Tm& tm, std::size_t n, const std::vector<std::size_t>& tape, std::size_t max_steps) {
    if (n < 2) throw Error("ring needs at least 2 cells");
    if (tape.size() > n - 1)
        throw Error("input of length " + std::to_string(tape.size()) + " exceeds the " + std::to_string(n - 1) +
                    " usable cells");
    std::map<std::pair<std::size_t, std::size_t>, const Quintuple*> table;
    for (const auto& q : tm.delta) table[{tm.state_index(q.q), tm.symbol_index(q.s)}] = &q;
    TmRun r;
    r.tape.assign(n, 0);
    std::copy(tape.begin(), tape.end(), r.tape.begin());
    r.state = tm.state_index(tm.initial);
    const std::size_t qf = tm.state_index(tm.halting);
    while (r.steps < max_steps && r.state != qf) {
        auto it = table.find({r.state, r.tape[r.head]});
        if (it == table.end()) {
            r.stuck = true;
            break;
        }
        const Quintuple& q = *it->second;
        r.tape[r.head] = tm.symbol_index(q.s_new);
        r.state = tm.state_index(q.q_new);
        r.head = q.dir == Move::right ? (r.head + 1) % n : (r.head + n - 1) % n;
        ++r.steps;
    }
    r.halted = r.state == qf;
    return r;
}

DiffReport differential_test(const Tm& tm, std::size_t n, const std::vector<std::size_t>& tape,
                             std::size_t max_steps) {
    DiffReport rep;
    std::string tm_err, ring_err;
    HeadUnitary head;
    RingState st;
    try {
        run_tm(tm, n, tape, 0);
    } catch (const Error& e) {
        tm_err = e.what();
    }
    try {
        head = build_head(tm);
        st = initial_ring(head, n, {}, tape);
    } catch (const Error& e) {
        ring_err = e.what();
    }
    if (!tm_err.empty() || !ring_err.empty()) {
        rep.equal = !tm_err.empty() && !ring_err.empty();
        rep.detail = "rejected: tm [" + tm_err + "] ring [" + ring_err + "]";
        return rep;
    }
    TmRun ref = run_tm(tm, n, tape, 0);
    const std::size_t budget = max_steps * n + n;
    std::size_t since_trigger = 0;
    while (rep.ring_applications < budget) {
        auto [i, j] = ring_pair(n, st.step_count + 1);
        bool trig = swap_trigger(st.cells[i].f, st.cells[j].f);
        bool completion = false;
        ring_step(head, st, &completion);
        ++rep.ring_applications;
        if (st.active_count() != 1) {
            rep.detail = "single active flag invariant violated at application " + std::to_string(st.step_count);
            return rep;
        }
        if (!trig) {
            if (++since_trigger > n) {
                rep.detail = "ring made no progress for a full sweep";
                return rep;
            }
            continue;
        }
        since_trigger = 0;
        const std::size_t head_before = ref.head;
        ref = run_tm(tm, n, tape, rep.tm_steps + 1);
        ++rep.tm_steps;
        if (ref.stuck) {
            rep.equal = completion;
            rep.detail = completion ? "both stuck (no transition) at TM step " + std::to_string(rep.tm_steps)
                                    : "TM has no transition at step " + std::to_string(rep.tm_steps) +
                                          " but the ring used a defined entry";
            return rep;
        }
        if (completion) {
            rep.detail = "ring used a completed T_delta entry at TM step " + std::to_string(rep.tm_steps);
            return rep;
        }
        auto active = st.active_cell();
        std::ostringstream why;
        if (!active || *active != head_before) why << "active cell differs from TM head; ";
        if (active && st.cells[*active].q != ref.state) why << "state differs; ";
        for (std::size_t c = 0; c < n; ++c)
            if (st.cells[c].s != ref.tape[c]) {
                why << "tape differs at cell " << c << "; ";
                break;
            }
        if (!why.str().empty()) {
            rep.detail = "divergence at TM step " + std::to_string(rep.tm_steps) + ": " + why.str();
            return rep;
        }
        rep.ring_halted = active && st.cells[*active].f == Flag::halt;
        rep.tm_halted = ref.halted;
        if (rep.ring_halted != rep.tm_halted) {
            rep.detail = "halting disagrees at TM step " + std::to_string(rep.tm_steps);
            return rep;
        }
        if (rep.tm_halted || rep.tm_steps >= max_steps) break;
    }
    if (rep.ring_applications > std::max<std::size_t>(rep.tm_steps, 1) * n) {
        rep.detail = "ring overhead exceeds one sweep per TM step";
        return rep;
    }
    rep.equal = true;
    rep.detail = rep.tm_halted ? "both halted after " + std::to_string(rep.tm_steps) + " TM steps"
                               : "both exhausted " + std::to_string(max_steps) + " steps";
    return rep;
}

}  // namespace wbench
