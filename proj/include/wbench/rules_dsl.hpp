#pragma once

#include "wbench/qts.hpp"

#include <string>

namespace wbench {

struct ParseError : Error {
    ParseError(const std::string& msg, int line, int column)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
          line(line),
          column(column) {}
    int line, column;
};

// Rule DSL, one rule per line:
//   lhs <-> rhs [@ gate]
// Headers: "# quantum: a b c", "# alphabet: x y z" (fixes symbol order),
// "# qudit: d". Other '#' lines are comments. A side written as a single
// undeclared token is read as a sequence of single characters.
Qts parse_rules(const std::string& text);
Qts load_rules(const std::string& path);
std::string export_rules(const Qts& q);

std::string read_file(const std::string& path);

}  // namespace wbench
