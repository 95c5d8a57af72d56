#include "wbench/wheelbarrow.hpp"

#include "wbench/rules_dsl.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

namespace wbench {

namespace {

const std::vector<std::string> kDigits = {":T", ":U", ":A", ":S", ":H", "r"};  // value order
const std::vector<std::string> kProgram = {":U", ":T", ":A", ":S", ":H", "r"};
const std::vector<std::string> kCarried = {"@U", "@T", "@A", "@S", "@H", "@r"};
const std::vector<std::string> kBoxes = {"OU", "OT", "OA", "OS", "OH"};
const std::vector<std::string> kBits = {"0", "1"};

const std::vector<std::string> kAlphabet = {
    "|",  "?",  "!",  "I",  "g",  "G",  "b",  "B",  "+",  "X",  "Y",  "Z",   "C",   "D",   ":U",  ":T",
    ":A", ":S", ":H", "r",  "@U", "@T", "@A", "@S", "@H", "@r", "o",  "OU",  "OT",  "OA",  "OS",  "OH",
    "R",  "w",  ":!", "*0", "*1", ";1", "\"1", ":0", ":1", "@0", "@1", "-:a", "-@a", "-;a", "-\"a", "-*a"};
const std::vector<std::string> kQuantum = {"-:a", "-@a", "-;a", "-\"a", "-*a"};
const std::vector<std::string> kNonHeadsTable = {"|", "?", ":U", ":T", ":A", ":S", ":H", "r",
                                                 "o", "w", "R", ":0", ":1", "-:a", "g", "b"};
const std::vector<std::string> kNonHeadsDef = {"|", "?", ":0", ":1", ":U", ":T", ":A",
                                               ":S", ":H", "r", "o", "w", "R", "-:a"};
const std::vector<std::string> kBoundary = {"|", "!", "?"};

const double kRotation = std::numbers::pi / 8;

struct RuleSpec {
    std::string lhs, rhs, gate, group;
};

class RuleList {
public:
    void add(const std::string& group, const std::string& lhs, const std::string& rhs,
             const std::string& gate = "") {
        if (seen_.count({lhs, rhs}) || seen_.count({rhs, lhs})) return;
        seen_.insert({lhs, rhs});
        rules_.push_back({lhs, rhs, gate, group});
    }
    const std::vector<RuleSpec>& rules() const { return rules_; }

private:
    std::vector<RuleSpec> rules_;
    std::set<std::pair<std::string, std::string>> seen_;
};

std::vector<std::string> static_symbols() {
    std::vector<std::string> s = kProgram;
    for (const char* x : {"o", ":0", ":1", "-:a"}) s.push_back(x);
    return s;
}

std::string rotation_gate(const char* name) {
    std::ostringstream os;
    os.precision(17);
    os << name << "(" << kRotation << ")";
    return os.str();
}

std::vector<RuleSpec> full_rules() {
    RuleList r;
    // sweeper
    r.add("init", "I -:a", "-:a I");
    for (auto& c : kBits) r.add("init", "I :" + c, ":" + c + " I");
    r.add("init", "I b", "o B");
    // ghost
    r.add("ghost", "B |", "G |");
    r.add("ghost", "g |", "b |");
    for (auto& s : static_symbols()) r.add("ghost", "G " + s, s + " G");
    for (auto& s : static_symbols()) r.add("ghost", "g " + s, s + " g");
    // base-6 counter
    r.add("counter", "| G", "| +");
    r.add("counter", "+ r", ":T +");
    r.add("counter", "+ :T", ":U X");
    for (auto& x : kProgram) r.add("counter", "X " + x, "Z " + x);
    r.add("counter", ":U Z", "C :U");
    r.add("counter", "+ :0", ":U Y");
    r.add("counter", "Y -:a", "Z -:a");
    for (auto& c : kBits) r.add("counter", "Y :" + c, "Z :" + c);
    for (std::size_t v = 1; v + 1 < kDigits.size(); ++v)
        r.add("counter", "+ " + kDigits[v], "C " + kDigits[v + 1]);
    r.add("counter", ":T C", "C :T");
    r.add("counter", "| C", "| D");
    for (auto& x : kProgram) r.add("counter", "D " + x, x + " D");
    r.add("counter", "D -:a", "-@a g");
    for (auto& c : kBits) r.add("counter", "D :" + c, "@" + c + " g");
    // unary counter
    for (auto& c : kBits) r.add("unary", "-@a :" + c, ":" + c + " -@a");
    r.add("unary", "-@a -:a", "-:a -@a", "swap");
    for (auto& c : kBits)
        for (auto& d : kBits) r.add("unary", "@" + c + " :" + d, ":" + d + " @" + c);
    for (auto& c : kBits) r.add("unary", "@" + c + " -:a", "-:a @" + c);
    r.add("unary", "-@a o", "o -@a");
    for (auto& c : kBits) r.add("unary", "@" + c + " o", "o @" + c);
    for (auto& c : kBits) r.add("unary", "@" + c + " b", ":" + c + " B");
    r.add("unary", "-@a b", "-:a B");
    // program fetch
    r.add("program", "| :H", "? :H");
    r.add("program", "? G", "! g");
    for (std::size_t i = 0; i < kProgram.size(); ++i) r.add("program", "! " + kProgram[i], "? " + kCarried[i]);
    for (std::size_t i = 0; i < kProgram.size(); ++i)
        for (auto& y : kProgram) r.add("program", kCarried[i] + " " + y, y + " " + kCarried[i]);
    // toffoli
    r.add("toffoli", "@T o", ":T OT");
    r.add("toffoli", "OT :0", "o @0");
    r.add("toffoli", "OT :1", "o ;1");
    r.add("toffoli", ";1 :0", "@1 :0");
    r.add("toffoli", ";1 :1", ":1 \"1");
    r.add("toffoli", "\"1 :0", "@1 :1");
    r.add("toffoli", "\"1 :1", "@1 :0");
    // classically controlled unitary
    r.add("unitary", "@U o", ":U OU");
    r.add("unitary", "OU :0", "o @0");
    r.add("unitary", "OU :1", "o :!");
    r.add("unitary", ":! -:a", ":1 -;a");
    r.add("unitary", "-;a -:a", "-\"a -:a", rotation_gate("crot"));
    r.add("unitary", ":1 -\"a", "@1 -:a");
    // ancilla
    r.add("ancilla", "@A o", ":A OA");
    r.add("ancilla", "OA -:a", "o -@a");
    r.add("ancilla", "OA :1", "o @1");
    // swap
    r.add("swap", "@S o", ":S OS");
    for (auto& c : kBits) r.add("swap", "OS :" + c, "o *" + c);
    r.add("swap", "OS -:a", "o -*a");
    for (auto& c : kBits)
        for (auto& d : kBits) r.add("swap", "*" + c + " :" + d, "@" + d + " :" + c);
    for (auto& c : kBits) r.add("swap", "*" + c + " -:a", "-@a :" + c);
    for (auto& c : kBits) r.add("swap", "-*a :" + c, "@" + c + " -:a");
    r.add("swap", "-*a -:a", "-@a -:a", "swap");
    // halt
    r.add("halt", "@H o", ":H OH");
    r.add("halt", "OH :0", "o @0");
    // revert
    r.add("revert", "@r o", "r R");
    r.add("revert", "R g", "R G");
    r.add("revert", "-:a B", "-@a b");
    for (auto& c : kBits) r.add("revert", ":" + c + " B", "@" + c + " b");
    r.add("revert", "R -@a", "w -:a");
    for (auto& c : kBits) r.add("revert", "R @" + c, "w :" + c);
    r.add("revert", "w g", "o G");
    return r.rules();
}

std::string merge_name(const std::string& s) {
    if (s == ":0" || s == ":1") return "-:a";
    if (s == "@0" || s == "@1") return "-@a";
    if (s == "*0" || s == "*1") return "-*a";
    return s;
}

bool removed_in_reduction(const std::string& s) { return s == ":!" || s == "-;a" || s == "-\"a"; }

std::vector<std::string> split_words(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

std::string join_words(const std::vector<std::string>& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? " " : "") + w[i];
    return s;
}

bool is_quantum_name(const std::string& s) {
    return std::find(kQuantum.begin(), kQuantum.end(), s) != kQuantum.end();
}

std::size_t quantum_in(const std::vector<std::string>& w) {
    return std::size_t(std::count_if(w.begin(), w.end(), is_quantum_name));
}

std::vector<RuleSpec> reduced_rules(std::vector<std::string>& dropped) {
    RuleList r;
    for (const auto& spec : full_rules()) {
        auto l = split_words(spec.lhs), h = split_words(spec.rhs);
        bool gone = std::any_of(l.begin(), l.end(), removed_in_reduction) ||
                    std::any_of(h.begin(), h.end(), removed_in_reduction);
        if (gone) {
            dropped.push_back(spec.lhs + " <-> " + spec.rhs + "  (uses a removed symbol)");
            continue;
        }
        for (auto& s : l) s = merge_name(s);
        for (auto& s : h) s = merge_name(s);
        if (quantum_in(l) != quantum_in(h)) {
            dropped.push_back(spec.lhs + " <-> " + spec.rhs + "  (merged form " + join_words(l) + " <-> " +
                              join_words(h) + " changes the qubit count)");
            continue;
        }
        if (l == h) {
            dropped.push_back(spec.lhs + " <-> " + spec.rhs + "  (merged form is trivial)");
            continue;
        }
        std::string gate = quantum_in(l) == 2 ? "swap" : "";
        if (join_words(l) == "OU -:a") gate = rotation_gate("rot");
        r.add(spec.group, join_words(l), join_words(h), gate);
    }
    return r.rules();
}

std::string rules_text(const std::vector<RuleSpec>& rules, const std::vector<std::string>& alphabet) {
    std::ostringstream os;
    os << "# alphabet:";
    for (auto& s : alphabet) os << ' ' << s;
    os << "\n# quantum:";
    for (auto& s : alphabet)
        if (is_quantum_name(s)) os << ' ' << s;
    os << '\n';
    std::string group;
    for (const auto& r : rules) {
        if (r.group != group) {
            os << "\n# " << r.group << '\n';
            group = r.group;
        }
        os << r.lhs << " <-> " << r.rhs;
        if (!r.gate.empty()) os << " @ " << r.gate;
        os << '\n';
    }
    return os.str();
}

WheelbarrowSystem build(bool reduced) {
    WheelbarrowSystem w;
    w.reduced = reduced;
    std::vector<RuleSpec> rules = reduced ? reduced_rules(w.dropped) : full_rules();
    std::vector<std::string> alphabet;
    for (const auto& s : kAlphabet) {
        if (reduced && (merge_name(s) != s || removed_in_reduction(s))) continue;
        alphabet.push_back(s);
    }
    w.text = rules_text(rules, alphabet);
    w.qts = parse_rules(w.text);
    for (const auto& r : rules) w.group.push_back(r.group);
    const auto& a = w.qts.alphabet();
    auto mark = [&](const std::vector<std::string>& names, std::vector<char>& out, bool value) {
        out.assign(a.size(), char(!value));
        for (const auto& s : names)
            if (auto sym = a.find(s)) out[*sym] = char(value);
    };
    mark(kNonHeadsTable, w.head, false);
    mark(kNonHeadsDef, w.def_head, false);
    mark(kBoundary, w.boundary, true);
    return w;
}

}  // namespace

std::size_t WheelbarrowSystem::head_count(const Word& s) const {
    std::size_t n = 0;
    for (Symbol c : s) n += head[c] ? 1 : 0;
    return n;
}

const WheelbarrowSystem& wheelbarrow(bool reduced) {
    static std::once_flag once[2];
    static WheelbarrowSystem systems[2];
    std::call_once(once[reduced], [&] { systems[reduced] = build(reduced); });
    return systems[reduced];
}

// ---------------------------------------------------------------- allowed pairs

namespace {

// Row symbol -> allowed right neighbours. Placeholders: :x program digit,
// :c tape bit, @x carried digit, Ox box, *c swap carrier, @c bit carrier,
// *a qubit swap carrier. A trailing '+' marks the restricted digit entries,
// a trailing '*' the restricted box entries.
const std::vector<std::pair<std::string, std::string>> kTable = {
    {"|", ":x :c -:a G I + C D"},
    {"?", ":x G + C @x"},
    {":x", ":x o w R :c -:a g G ++ X+ Y+ Z+ C+ D @x Ox :! *c ;1 \"1 @c -;a -\"a *a -@a"},
    {"o", "| :c -:a g b G B :! *c ;1 \"1 @c -;a -\"a *a -@a"},
    {"w", ":c -:a g"},
    {"R", ":c -:a g G :! *c ;1 \"1 @c -;a -\"a *a -@a"},
    {":c", "| o w R :c -:a g b G B I :! *c ;1 \"1 @c -;a -\"a *a -@a"},
    {"-:a", "| o w R :c -:a g b G B I :! *c ;1 \"1 @c -;a -\"a *a -@a"},
    {"g", "| :x o :c -:a"},
    {"b", "|"},
    {"G", "| :x o :c -:a"},
    {"B", "|"},
    {"!", ":x g"},
    {"I", ":c -:a g b"},
    {"+", ":x :c"},
    {"X", ":x"},
    {"Y", "-:a"},
    {"Z", ":x :c -:a"},
    {"C", ":x"},
    {"D", ":x o :c -:a"},
    {"@x", ":x o :c -:a g"},
    {"Ox", ":c* -:a g"},
    {":!", "-:a g"},
    {"*c", ":c -:a g"},
    {";1", ":c g"},
    {"\"1", ":c g"},
    {"@c", "o :c -:a g b"},
    {"-;a", "-:a g"},
    {"-\"a", "-:a g b"},
    {"*a", ":c -:a g"},
    {"-@a", "o :c -:a g b"},
};

const std::set<std::pair<std::string, std::string>> kDigitEntries = {
    {":T", "+"}, {":U", "X"}, {":U", "Y"}, {":U", "Z"}, {":U", "C"}};
const std::set<std::pair<std::string, std::string>> kBoxEntries = {
    {"OT", ":0"}, {"OT", ":1"}, {"OU", ":0"}, {"OU", ":1"}, {"OA", ":1"}, {"OS", ":0"}, {"OS", ":1"}, {"OH", ":0"}};

std::vector<std::string> expand(const std::string& p) {
    if (p == ":x") return kProgram;
    if (p == ":c") return {":0", ":1"};
    if (p == "@x") return kCarried;
    if (p == "Ox") return kBoxes;
    if (p == "*c") return {"*0", "*1"};
    if (p == "@c") return {"@0", "@1"};
    if (p == "*a") return {"-*a"};
    return {p};
}

}  // namespace

std::vector<std::pair<std::string, std::string>> amendment_pairs() {
    return {{"Y", ":0"}, {"Y", ":1"}, {":T", "C"}, {"OH", ":1"}};
}

AllowedPairs allowed_pairs(const WheelbarrowSystem& w, bool amended) {
    const Alphabet& a = w.alphabet();
    AllowedPairs p;
    p.n = a.size();
    p.ok.assign(p.n * p.n, 0);
    p.amended = amended;
    auto set = [&](const std::string& x, const std::string& y) {
        auto sx = a.find(w.reduced ? merge_name(x) : x);
        auto sy = a.find(w.reduced ? merge_name(y) : y);
        if (sx && sy) p.ok[std::size_t(*sx) * p.n + *sy] = 1;
    };
    for (const auto& [row, cols] : kTable)
        for (const auto& x : expand(row))
            for (auto col : split_words(cols)) {
                char mark = col.back();
                if (col.size() > 1 && (mark == '+' || mark == '*'))
                    col.pop_back();
                else
                    mark = 0;
                for (const auto& y : expand(col)) {
                    if (mark == '+' && !kDigitEntries.count({x, y})) continue;
                    if (mark == '*' && !kBoxEntries.count({x, y})) continue;
                    set(x, y);
                }
            }
    if (amended)
        for (const auto& [x, y] : amendment_pairs()) set(x, y);
    return p;
}

std::vector<PairViolation> allowed_pairs_check(const WheelbarrowSystem& w, const AllowedPairs& a, const Word& s) {
    std::vector<PairViolation> out;
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
        if (!a.allowed(s[i], s[i + 1]))
            out.push_back({i + 1, w.alphabet().name(s[i]), w.alphabet().name(s[i + 1])});
    return out;
}

// ---------------------------------------------------------------- encoding

namespace {

std::size_t digit_count(std::size_t m) {
    std::size_t d = 0;
    for (; m > 0; m /= 6) ++d;
    return d;
}

bool power_of_six(std::size_t k) {
    while (k > 1 && k % 6 == 0) k /= 6;
    return k == 1;
}

}  // namespace

LengthPlan length_plan(std::size_t n) {
    LengthPlan p;
    p.n = n;
    for (std::size_t m = 1; m + digit_count(m) + 4 <= n; ++m)
        if (m + digit_count(m) + 4 == n) {
            p.increments = m;
            p.digits = digit_count(m);
        }
    if (p.increments == 0) {
        p.reason = "no increment count m with m + digits(m) + 4 = n";
        return p;
    }
    for (std::size_t m = p.increments; m > 0; m /= 6) p.program.push_back(kDigits[m % 6]);
    if (p.increments % 6 != 4) {
        p.reason = "program does not start with :H (m mod 6 != 4)";
        return p;
    }
    if (std::count(p.program.begin(), p.program.end(), ":H") != 1) {
        p.reason = "program contains a second :H";
        return p;
    }
    p.valid = true;
    return p;
}

std::vector<std::size_t> valid_lengths(std::size_t count, std::size_t start) {
    std::vector<std::size_t> out;
    for (std::size_t n = start; out.size() < count && n < 100000; ++n)
        if (length_plan(n).valid) out.push_back(n);
    return out;
}

Word encode_instance(const WheelbarrowSystem& w, std::size_t n, const std::vector<std::string>& ring) {
    LengthPlan plan = length_plan(n);
    if (!plan.increments) throw Error("length " + std::to_string(n) + ": " + plan.reason);
    if (ring.size() != plan.increments)
        throw Error("ring pattern has " + std::to_string(ring.size()) + " symbols, length " + std::to_string(n) +
                    " needs " + std::to_string(plan.increments));
    std::vector<std::string> tape;
    for (std::size_t k = 1; k <= plan.increments; ++k) {
        if (power_of_six(k)) tape.push_back(":0");
        const std::string& t = ring[k - 1];
        if (t != "-:a" && t != ":0" && t != ":1") throw Error("ring symbols must be -:a, :0 or :1, got '" + t + "'");
        tape.push_back(t);
    }
    Word s;
    s += w.sym("|");
    s += w.sym("I");
    for (const auto& t : tape) s += w.sym(w.reduced ? merge_name(t) : t);
    s += w.sym("b");
    s += w.sym("|");
    if (s.size() != n) throw Error("encoding length mismatch");
    return s;
}

// ---------------------------------------------------------------- history

namespace {

bool is_tape(const std::string& s) { return s == ":0" || s == ":1" || s == "-:a"; }
bool is_box(const std::string& s) { return std::find(kBoxes.begin(), kBoxes.end(), s) != kBoxes.end(); }

std::string classify_leaf(const WheelbarrowSystem& w, const Word& s) {
    const Alphabet& a = w.alphabet();
    std::vector<std::string> n;
    for (Symbol c : s) n.push_back(a.name(c));
    auto any_pair = [&](auto&& pred) {
        for (std::size_t i = 0; i + 1 < n.size(); ++i)
            if (pred(n[i], n[i + 1])) return true;
        return false;
    };
    if (any_pair([](auto& x, auto& y) { return x == "OH" && y == ":1"; })) return "halt";
    if (any_pair([](auto& x, auto& y) { return x == "@H" && is_tape(y); })) return "premature-halt-leg";
    if (any_pair([](auto& x, auto& y) { return is_tape(x) && is_box(y); })) return "backward-carrier-leg";
    if (any_pair([](auto& x, auto& y) { return is_tape(x) && y == "R"; })) return "revert-leg";
    if (any_pair([](auto& x, auto& y) { return x == "D" && y == "o"; })) return "late-counting-leg";
    if (any_pair([](auto& x, auto& y) { return (is_tape(x) || x == "o" || x == "R" || x == "?") && y == "D"; }))
        return "recombined-counter-leg";
    if (any_pair([](auto& x, auto& y) { return is_box(x) && (is_tape(y) || y == "o"); })) return "gate-mismatch";
    if (any_pair([](auto& x, auto& y) { return (x[0] == '@' && x.size() == 2 && x[1] != '0' && x[1] != '1') && is_tape(y); }))
        return "carried-digit-on-tape";
    for (std::size_t i = 0; i < n.size(); ++i)
        if (w.head[s[i]]) return "other(" + (i ? n[i - 1] + " " : "") + n[i] + (i + 1 < n.size() ? " " + n[i + 1] : "") + ")";
    return "other(headless)";
}

}  // namespace

History explore_history(std::size_t n, const std::vector<std::string>& ring, std::size_t cap,
                        bool check_simplicity) {
    const WheelbarrowSystem& w = wheelbarrow(false);
    const Alphabet& a = w.alphabet();
    History h;
    HistoryReport& r = h.report;
    r.n = n;
    const Word enc = encode_instance(w, n, ring);
    r.encoding = a.render(enc);
    r.qubits = a.quantum_count(enc);
    h.graph = explore_evolution(w.qts.ts, enc, cap);
    const EvolutionGraph& g = h.graph;
    r.size = g.vertices.size();
    r.edges = g.edges.size();
    r.capped = g.capped;

    const AllowedPairs literal = allowed_pairs(w, false), amended = allowed_pairs(w, true);
    const Symbol bar = w.sym("|"), ghost = w.sym("g");
    const Word halt_pair = a.parse("OH :1");
    std::vector<std::size_t> degree(g.vertices.size(), 0);
    for (const auto& e : g.edges) {
        ++degree[e.from];
        ++degree[e.to];
    }
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        const Word& s = g.vertices[v];
        const std::size_t heads = w.head_count(s);
        if (heads != 1 && r.head_violations++ == 0) r.head_witness = a.render(s);
        if ((!w.boundary[s.front()] || s.back() != bar) && r.bracket_violations++ == 0)
            r.bracket_witness = a.render(s);
        for (auto& pv : allowed_pairs_check(w, literal, s))
            r.literal_pair_violations.emplace(pv.first + " " + pv.second, a.render(s));
        for (auto& pv : allowed_pairs_check(w, amended, s))
            r.amended_pair_violations.emplace(pv.first + " " + pv.second, a.render(s));
        if (s.find(ghost) != Word::npos && heads >= 1) ++r.ghost_interleavings;
        if (s.find(w.sym("!")) != Word::npos) r.reached_computation = true;
        if (s.find(halt_pair) != Word::npos) r.halted = true;
        if (v != 0 && degree[v] == 1) ++r.leaves[classify_leaf(w, s)];
    }
    // initialization: | t_1 .. t_N o B |
    Word init_done = enc;
    init_done.erase(1, 1);
    init_done[init_done.size() - 2] = w.sym("B");
    init_done.insert(init_done.size() - 2, 1, w.sym("o"));
    r.init_trace_ok = g.index.count(init_done) > 0;

    if (check_simplicity && !g.capped) {
        try {
            Ulg u = qts_to_ulg(w.qts, g);
            SimplicityReport sr = check_simple(u);
            r.simple = sr.simple;
            r.simple_detail = sr.simple ? "all cycle products are the identity"
                                        : "non-trivial cycle product (deviation " + std::to_string(sr.max_deviation) + ")";
            const std::size_t dim = std::size_t(1) << r.qubits;
            if (g.vertices.size() * dim <= 2048) {
                Spectrum sp = hermitian_eigs(associated_hamiltonian(u), -1.0, false);
                std::size_t k = 0;
                for (Eigen::Index i = 0; i < sp.eigenvalues.size(); ++i)
                    if (std::abs(sp.eigenvalues(i)) < 1e-8) ++k;
                r.kernel_dimension = k;
            }
        } catch (const Error& e) {
            r.simple = false;
            r.simple_detail = std::string("ULG construction failed: ") + e.what();
        }
    }
    return h;
}

std::vector<std::string> default_ring(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, std::vector<std::string>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = cache.find(n); it != cache.end()) return it->second;
    }
    LengthPlan plan = length_plan(n);
    if (!plan.increments) throw Error("length " + std::to_string(n) + ": " + plan.reason);
    const std::size_t m = plan.increments;
    // free positions: the first three ring entries and every entry the
    // counter inspects right after creating a digit
    std::vector<std::size_t> free;
    for (std::size_t k = 1; k <= m; ++k)
        if (k <= 3 || power_of_six(k)) free.push_back(k - 1);
    const std::vector<std::string> values = {"-:a", ":0", ":1"};
    using Score = std::tuple<int, int, std::size_t, std::size_t, std::size_t, std::vector<std::string>>;
    std::optional<Score> best;
    std::size_t combos = 1;
    for (std::size_t i = 0; i < free.size(); ++i) combos *= values.size();
    for (std::size_t c = 0; c < combos; ++c) {
        std::vector<std::string> ring(m, ":0");
        for (std::size_t i = 0, x = c; i < free.size(); ++i, x /= values.size()) ring[free[i]] = values[x % values.size()];
        History h = explore_history(n, ring, 2000000, false);
        if (h.report.capped) continue;
        const std::size_t q = h.report.qubits;
        Score sc{h.report.halted ? 0 : 1,
                 q == 0 ? 1 : 0,
                 h.report.amended_pair_violations.size(),
                 h.report.literal_pair_violations.size(),
                 q,
                 ring};
        if (!best || sc < *best) best = sc;
    }
    if (!best) throw Error("no ring pattern of length " + std::to_string(n) + " explores within the cap");
    std::lock_guard<std::mutex> lock(mu);
    return cache[n] = std::get<5>(*best);
}

History explore_history(std::size_t n, std::size_t cap, bool check_simplicity) {
    return explore_history(n, default_ring(n), cap, check_simplicity);
}

std::string history_report_json(const HistoryReport& r) {
    nlohmann::json j{{"n", r.n},
                     {"encoding", r.encoding},
                     {"size", r.size},
                     {"edges", r.edges},
                     {"qubits", r.qubits},
                     {"capped", r.capped},
                     {"head_violations", r.head_violations},
                     {"bracket_violations", r.bracket_violations},
                     {"literal_pair_violations", r.literal_pair_violations},
                     {"amended_pair_violations", r.amended_pair_violations},
                     {"simple", r.simple},
                     {"simple_detail", r.simple_detail},
                     {"leaves", r.leaves},
                     {"ghost_interleavings", r.ghost_interleavings},
                     {"reached_computation", r.reached_computation},
                     {"halted", r.halted},
                     {"initialization_reached", r.init_trace_ok}};
    if (!r.head_witness.empty()) j["head_witness"] = r.head_witness;
    if (!r.bracket_witness.empty()) j["bracket_witness"] = r.bracket_witness;
    if (r.kernel_dimension) j["kernel_dimension"] = *r.kernel_dimension;
    return j.dump(2);
}

// ---------------------------------------------------------------- W1 .. W4

PropertyCheck check_w1(const WheelbarrowSystem& w, bool def_heads) {
    PropertyCheck c;
    const auto& heads = def_heads ? w.def_head : w.head;
    const auto& rules = w.qts.ts.rules;
    const Alphabet& a = w.alphabet();
    for (std::size_t i = 0; i < rules.size(); ++i) {
        const Rule& r = rules[i];
        std::size_t hl = 0, hr = 0;
        bool boundary_ok = true;
        for (std::size_t k = 0; k < r.lhs.size(); ++k) {
            hl += heads[r.lhs[k]] ? 1 : 0;
            hr += heads[r.rhs[k]] ? 1 : 0;
            if (bool(w.boundary[r.lhs[k]]) != bool(w.boundary[r.rhs[k]])) boundary_ok = false;
        }
        const std::string text = a.render(r.lhs) + " <-> " + a.render(r.rhs);
        if (!boundary_ok) c.witnesses.push_back(text + ": boundary position rewritten");
        if (hl != hr)
            c.witnesses.push_back(text + ": head count " + std::to_string(hl) + " -> " + std::to_string(hr));
    }
    c.ok = c.witnesses.empty();
    c.detail = c.ok ? "every rule keeps boundary positions and head count"
                    : std::to_string(c.witnesses.size()) + " rule(s) violate W1";
    return c;
}

PropertyCheck check_w2(const WheelbarrowSystem& w) {
    PropertyCheck c;
    const Alphabet& a = w.alphabet();
    const Word marker = a.parse("OA -:a");
    std::ostringstream why;
    if (marker.size() != 2) why << "marker is not 2-local; ";
    if (w.head_count(marker) != 1) why << "marker does not contain exactly one head; ";
    if (a.quantum_count(marker) != 1) why << "marker does not carry exactly one qubit; ";
    if (locality(w.qts.ts) != 2 || min_rule_length(w.qts.ts) != 2) why << "rules are not 2-local; ";
    c.ok = why.str().empty();
    c.detail = c.ok ? "markers OA -:a are 2-local with one head; all rules 2-local" : why.str();
    return c;
}

PropertyCheck check_w3(const HistoryReport& r) {
    PropertyCheck c;
    if (r.capped) c.witnesses.push_back("exploration capped");
    if (r.head_violations) c.witnesses.push_back("head count != 1: " + r.head_witness);
    if (r.bracket_violations) c.witnesses.push_back("not bracketed: " + r.bracket_witness);
    for (const auto& [pair, s] : r.literal_pair_violations) c.witnesses.push_back("pair '" + pair + "' in " + s);
    if (!r.simple) c.witnesses.push_back("not simple: " + r.simple_detail);
    c.ok = c.witnesses.empty();
    c.detail = c.ok ? "history is bracketed, single-head, within the pair table and simple"
                    : std::to_string(c.witnesses.size()) + " issue(s)";
    return c;
}

namespace {

// Uniform sample of bracketed strings | ... | of length n whose adjacent pairs
// are all allowed and which contain exactly `heads` head symbols.
class SeedSampler {
public:
    SeedSampler(const WheelbarrowSystem& w, const AllowedPairs& a, std::size_t n, std::size_t heads)
        : w_(w), a_(a), n_(n), h_(heads), k_(w.alphabet().size()) {
        bar_ = w.sym("|");
        // ways[i][sym][used]: completions from position i holding sym with `used` heads so far
        ways_.assign(n_ * k_ * (h_ + 1), 0.0);
        for (std::size_t used = 0; used <= h_; ++used) at(n_ - 1, bar_, used) = used == h_ ? 1.0 : 0.0;
        for (std::size_t i = n_ - 1; i-- > 0;)
            for (std::size_t s = 0; s < k_; ++s)
                for (std::size_t used = 0; used <= h_; ++used) {
                    double t = 0.0;
                    for (std::size_t nx = 0; nx < k_; ++nx) {
                        if (!a_.allowed(Symbol(s), Symbol(nx))) continue;
                        std::size_t u2 = used + (w_.head[nx] ? 1 : 0);
                        if (u2 > h_) continue;
                        t += at(i + 1, nx, u2);
                    }
                    at(i, s, used) = t;
                }
    }
    bool possible() const { return ways_[index(0, bar_, 0)] > 0.0; }
    Word sample(std::mt19937& rng) const {
        Word s(1, bar_);
        std::size_t used = 0;
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            std::vector<double> weight(k_, 0.0);
            for (std::size_t nx = 0; nx < k_; ++nx) {
                if (!a_.allowed(s.back(), Symbol(nx))) continue;
                std::size_t u2 = used + (w_.head[nx] ? 1 : 0);
                if (u2 <= h_) weight[nx] = ways_[index(i + 1, nx, u2)];
            }
            std::discrete_distribution<std::size_t> pick(weight.begin(), weight.end());
            std::size_t nx = pick(rng);
            used += w_.head[nx] ? 1 : 0;
            s += Symbol(nx);
        }
        return s;
    }

private:
    std::size_t index(std::size_t i, std::size_t s, std::size_t used) const { return (i * k_ + s) * (h_ + 1) + used; }
    double& at(std::size_t i, std::size_t s, std::size_t used) { return ways_[index(i, s, used)]; }
    const WheelbarrowSystem& w_;
    const AllowedPairs& a_;
    std::size_t n_, h_, k_;
    Symbol bar_;
    std::vector<double> ways_;
};

}  // namespace

PropertyCheck check_w4(const WheelbarrowSystem& w, std::size_t n, const EvolutionGraph& history,
                       std::size_t samples, unsigned seed) {
    PropertyCheck c;
    const AllowedPairs literal = allowed_pairs(w, false);
    SeedSampler sampler(w, literal, n, 1);
    if (!sampler.possible()) {
        c.ok = true;
        c.detail = "no bracketed single-head string of this length respects the pair table";
        return c;
    }
    std::mt19937 rng(seed);
    const std::size_t bound = 10 * n * n * n;
    std::size_t checked = 0, died = 0, illegal = 0, in_history = 0;
    for (std::size_t t = 0; t < samples; ++t) {
        Word s = sampler.sample(rng);
        if (history.index.count(s)) {
            ++in_history;
            continue;
        }
        ++checked;
        EvolutionGraph g = explore_evolution(w.qts.ts, s, bound);
        bool bad_pair = false;
        for (const auto& v : g.vertices)
            if (!allowed_pairs_check(w, literal, v).empty()) {
                bad_pair = true;
                break;
            }
        bool merges_history = false;
        for (const auto& v : g.vertices)
            if (history.index.count(v)) {
                merges_history = true;
                break;
            }
        if (bad_pair) ++illegal;
        if (!g.capped) ++died;
        if (merges_history)
            c.witnesses.push_back("seed " + w.alphabet().render(s) + " reaches the history");
        else if (g.capped && !bad_pair)
            c.witnesses.push_back("seed " + w.alphabet().render(s) + " exceeds " + std::to_string(bound) +
                                  " strings without an illegal pair");
    }
    c.ok = c.witnesses.empty();
    c.detail = std::to_string(checked) + " seeds: " + std::to_string(illegal) + " reach an illegal pair, " +
               std::to_string(died) + " have finite components within 10 n^3, " + std::to_string(in_history) +
               " sampled seeds were history strings";
    return c;
}

PropertyCheck check_two_heads(const WheelbarrowSystem& w, std::size_t n, std::size_t samples, unsigned seed) {
    PropertyCheck c;
    const AllowedPairs literal = allowed_pairs(w, false);
    // two heads cannot be adjacent in the table, so sample strings that obey it
    SeedSampler sampler(w, literal, n, 2);
    if (!sampler.possible()) {
        c.ok = true;
        c.detail = "no two-head string of this length respects the pair table";
        return c;
    }
    std::mt19937 rng(seed);
    const std::size_t bound = 10 * n * n * n;
    std::size_t checked = 0;
    for (std::size_t t = 0; t < samples; ++t) {
        Word s = sampler.sample(rng);
        ++checked;
        EvolutionGraph g = explore_evolution(w.qts.ts, s, bound);
        for (const auto& v : g.vertices)
            if (w.head_count(v) != 2) {
                c.witnesses.push_back(w.alphabet().render(s) + " reaches " + w.alphabet().render(v));
                break;
            }
    }
    c.ok = c.witnesses.empty();
    c.detail = std::to_string(checked) + " two-head seeds, " + std::to_string(c.witnesses.size()) +
               " change their head count";
    return c;
}

WProperties verify_w_properties(std::size_t n, std::size_t samples, unsigned seed) {
    const WheelbarrowSystem& w = wheelbarrow(false);
    WProperties p;
    p.w1 = check_w1(w, false);
    p.w1_def_heads = check_w1(w, true);
    p.w2 = check_w2(w);
    History h = explore_history(n);
    p.w3 = check_w3(h.report);
    p.w4 = check_w4(w, n, h.graph, samples, seed);
    p.two_heads = check_two_heads(w, n, samples, seed + 1);
    return p;
}

double fitted_exponent(const std::vector<std::size_t>& ns, const std::vector<std::size_t>& sizes) {
    if (ns.size() != sizes.size() || ns.size() < 2) throw Error("fit needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = double(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        double x = std::log(double(ns[i])), y = std::log(double(sizes[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace wbench
