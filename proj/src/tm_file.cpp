#include "wbench/qrm.hpp"
#include "wbench/rules_dsl.hpp"

#include <sstream>

namespace wbench {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    return out;
}

std::vector<std::string> words(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

Move parse_move(const std::string& s, int line, int col) {
    if (s == "R" || s == "r" || s == "right" || s == ">") return Move::right;
    if (s == "L" || s == "l" || s == "left" || s == "<") return Move::left;
    throw ParseError("unknown direction '" + s + "'", line, col);
}

}  // namespace

Tm parse_tm(const std::string& text) {
    Tm tm;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        std::string body = raw.substr(0, raw.find('#'));
        if (trim(body).empty()) continue;
        auto colon = body.find(':');
        if (colon == std::string::npos) throw ParseError("expected 'key: value'", line, 1);
        const std::string key = trim(body.substr(0, colon));
        const std::string value = trim(body.substr(colon + 1));
        const int vcol = int(body.find_first_not_of(" \t", colon + 1)) + 1;
        if (key == "states") {
            for (auto& w : words(value)) tm.states.push_back(w);
        } else if (key == "alphabet") {
            for (auto& w : words(value)) tm.alphabet.push_back(w);
        } else if (key == "initial") {
            tm.initial = value;
        } else if (key == "halting") {
            tm.halting = value;
        } else if (key == "quantum-states") {
            auto arrow = value.find("->");
            if (arrow == std::string::npos) throw ParseError("expected 'q -> gate'", line, vcol);
            tm.quantum_states[trim(value.substr(0, arrow))] = trim(value.substr(arrow + 2));
        } else if (key == "delta") {
            auto arrow = value.find("->");
            if (arrow == std::string::npos) throw ParseError("expected 'q,s -> s',dir,q''", line, vcol);
            auto lhs = split(value.substr(0, arrow), ',');
            auto rhs = split(value.substr(arrow + 2), ',');
            if (lhs.size() != 2) throw ParseError("left side needs 'q,s'", line, vcol);
            if (rhs.size() != 3) throw ParseError("right side needs 's',dir,q''", line, vcol + int(arrow) + 2);
            tm.delta.push_back({lhs[0], lhs[1], rhs[0], parse_move(rhs[1], line, vcol + int(arrow) + 2), rhs[2]});
        } else {
            throw ParseError("unknown key '" + key + "'", line, 1);
        }
    }
    if (tm.states.empty()) throw ParseError("missing 'states:' line", line, 1);
    if (tm.alphabet.empty()) throw ParseError("missing 'alphabet:' line", line, 1);
    if (tm.initial.empty()) tm.initial = tm.states.front();
    if (tm.halting.empty()) tm.halting = tm.states.back();
    return tm;
}

Tm load_tm(const std::string& path) { return parse_tm(read_file(path)); }

}  // namespace wbench
