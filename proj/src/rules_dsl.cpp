#include "wbench/rules_dsl.hpp"

#include "wbench/gates.hpp"

#include <fstream>
#include <sstream>

namespace wbench {

namespace {

struct Token {
    std::string text;
    int column;
};

std::vector<Token> tokenize(const std::string& line, std::size_t from, std::size_t to) {
    std::vector<Token> out;
    std::size_t i = from;
    while (i < to) {
        while (i < to && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= to) break;
        const std::size_t start = i;
        while (i < to && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        out.push_back({line.substr(start, i - start), int(start) + 1});
    }
    return out;
}

std::vector<std::string> split_glyphs(const std::string& s) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < s.size();) {
        std::size_t len = 1;
        const unsigned char c = static_cast<unsigned char>(s[i]);
        if (c >= 0xF0) len = 4;
        else if (c >= 0xE0) len = 3;
        else if (c >= 0xC0) len = 2;
        out.push_back(s.substr(i, len));
        i += len;
    }
    return out;
}

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

}  // namespace

Qts parse_rules(const std::string& text) {
    Qts q;
    Alphabet& a = q.ts.alphabet;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    bool seen_rule = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            std::string body = line.substr(first + 1);
            const std::size_t b0 = body.find_first_not_of(" \t");
            body = b0 == std::string::npos ? "" : body.substr(b0);
            const int col0 = int(line.size() - body.size()) + 1;
            auto header = [&](const std::string& key) { return starts_with(body, key); };
            if (header("quantum:") || header("alphabet:")) {
                const bool quantum = header("quantum:");
                const std::size_t off = line.size() - body.size() + (quantum ? 8 : 9);
                for (const Token& t : tokenize(line, off, line.size())) {
                    auto existing = a.find(t.text);
                    if (quantum && existing && !a.quantum(*existing) && seen_rule)
                        throw ParseError("symbol '" + t.text + "' declared quantum after use", lineno, t.column);
                    a.add(t.text, quantum);
                }
            } else if (header("qudit:")) {
                const std::string v = body.substr(6);
                try {
                    q.qudit_dim = std::stoul(v);
                } catch (const std::exception&) {
                    throw ParseError("bad qudit dimension", lineno, col0 + 6);
                }
                if (q.qudit_dim < 1) throw ParseError("qudit dimension must be positive", lineno, col0 + 6);
            }
            continue;
        }
        const std::size_t arrow = line.find("<->");
        if (arrow == std::string::npos) throw ParseError("expected '<->'", lineno, int(first) + 1);
        std::size_t gate_at = std::string::npos;
        for (std::size_t i = arrow + 3; i < line.size(); ++i)
            if (line[i] == '@' && std::isspace(static_cast<unsigned char>(line[i - 1])) &&
                (i + 1 == line.size() || std::isspace(static_cast<unsigned char>(line[i + 1])))) {
                gate_at = i;
                break;
            }
        const std::size_t rhs_end = gate_at == std::string::npos ? line.size() : gate_at;
        auto side = [&](std::size_t from, std::size_t to, const char* what) {
            std::vector<Token> toks = tokenize(line, from, to);
            if (toks.empty()) throw ParseError(std::string("empty ") + what, lineno, int(from) + 1);
            std::vector<Token> syms;
            if (toks.size() == 1 && !a.find(toks[0].text)) {
                int col = toks[0].column;
                for (const std::string& g : split_glyphs(toks[0].text)) {
                    syms.push_back({g, col});
                    col += int(g.size());
                }
            } else {
                syms = toks;
            }
            Word w;
            for (const Token& t : syms) w.push_back(a.add(t.text));
            return std::make_pair(w, syms);
        };
        auto [lhs, ltoks] = side(0, arrow, "left-hand side");
        auto [rhs, rtoks] = side(arrow + 3, rhs_end, "right-hand side");
        if (lhs.size() != rhs.size())
            throw ParseError("rule sides have different lengths (" + std::to_string(lhs.size()) + " vs " +
                                 std::to_string(rhs.size()) + ")",
                             lineno, rtoks.front().column);
        if (lhs == rhs) throw ParseError("rule rewrites a string to itself", lineno, ltoks.front().column);
        const std::size_t ql = a.quantum_count(lhs), qr = a.quantum_count(rhs);
        if (ql != qr) throw ParseError("rule changes the number of quantum symbols", lineno, rtoks.front().column);
        std::string gate = "id";
        int gate_col = int(rhs_end) + 1;
        if (gate_at != std::string::npos) {
            gate.clear();
            for (std::size_t i = gate_at + 1; i < line.size(); ++i)
                if (!std::isspace(static_cast<unsigned char>(line[i]))) gate += line[i];
            gate_col = int(line.find_first_not_of(" \t", gate_at + 1)) + 1;
            if (gate.empty()) throw ParseError("missing gate after '@'", lineno, int(gate_at) + 1);
        }
        CMatrix u;
        try {
            u = gate_from_spec(gate, q.qudit_dim, ql);
        } catch (const Error& e) {
            throw ParseError(e.what(), lineno, gate_col);
        }
        q.add_rule(lhs, rhs, u, gate, lineno);
        seen_rule = true;
    }
    return q;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Qts load_rules(const std::string& path) { return parse_rules(read_file(path)); }

std::string export_rules(const Qts& q) {
    const Alphabet& a = q.alphabet();
    std::ostringstream os;
    os << "# qudit: " << q.qudit_dim << "\n# alphabet:";
    for (std::size_t s = 0; s < a.size(); ++s)
        if (!a.quantum(Symbol(s))) os << ' ' << a.name(Symbol(s));
    os << "\n# quantum:";
    for (std::size_t s = 0; s < a.size(); ++s)
        if (a.quantum(Symbol(s))) os << ' ' << a.name(Symbol(s));
    os << '\n';
    auto side = [&](const Word& w) {
        std::string out;
        for (std::size_t i = 0; i < w.size(); ++i) out += (i ? " " : "") + a.name(w[i]);
        return out;
    };
    for (const Rule& r : q.ts.rules) {
        os << side(r.lhs) << " <-> " << side(r.rhs);
        if (r.gate != "id") os << " @ " << r.gate;
        os << '\n';
    }
    return os.str();
}

}  // namespace wbench
