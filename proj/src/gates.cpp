#include "wbench/gates.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace wbench {

CMatrix gate_x() {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

CMatrix gate_y() {
    CMatrix m(2, 2);
    m << 0, cd(0, -1), cd(0, 1), 0;
    return m;
}

CMatrix gate_z() {
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

CMatrix gate_rot(double t) {
    CMatrix m(2, 2);
    m << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    return m;
}

CMatrix gate_swap(std::size_t d) {
    const Eigen::Index n = Eigen::Index(d * d);
    CMatrix m = CMatrix::Zero(n, n);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) m(Eigen::Index(b * d + a), Eigen::Index(a * d + b)) = 1.0;
    return m;
}

CMatrix gate_toffoli() {
    CMatrix m = identity(8);
    m(6, 6) = m(7, 7) = 0.0;
    m(6, 7) = m(7, 6) = 1.0;
    return m;
}

CMatrix gate_crot(double t) {
    CMatrix m = identity(4);
    m.block(2, 2, 2, 2) = gate_rot(t);
    return m;
}

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
    std::size_t r = 1;
    while (e--) r *= b;
    return r;
}

double parse_angle(const std::string& spec, std::size_t open) {
    const auto close = spec.find(')', open);
    if (close == std::string::npos) throw Error("gate: missing ')' in '" + spec + "'");
    const std::string body = spec.substr(open + 1, close - open - 1);
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(body, &used);
    } catch (const std::exception&) {
        throw Error("gate: bad angle in '" + spec + "'");
    }
    if (used != body.size()) throw Error("gate: bad angle in '" + spec + "'");
    return v;
}

void require_qubits(const std::string& name, std::size_t d, std::size_t arity, std::size_t want) {
    if (d != 2 || arity != want)
        throw Error("gate '" + name + "' needs " + std::to_string(want) + " qubit register(s), rule has " +
                    std::to_string(arity) + " of dimension " + std::to_string(d));
}

}  // namespace

CMatrix gate_from_spec(const std::string& spec, std::size_t d, std::size_t arity) {
    const std::size_t dim = ipow(d, arity);
    if (spec == "id") return identity(dim);
    if (spec == "x" || spec == "y" || spec == "z") {
        require_qubits(spec, d, arity, 1);
        return spec == "x" ? gate_x() : spec == "y" ? gate_y() : gate_z();
    }
    if (spec == "swap") {
        if (arity != 2) throw Error("gate 'swap' needs 2 registers");
        return gate_swap(d);
    }
    if (spec == "toffoli") {
        require_qubits(spec, d, arity, 3);
        return gate_toffoli();
    }
    if (spec.rfind("rot(", 0) == 0) {
        require_qubits("rot", d, arity, 1);
        return gate_rot(parse_angle(spec, 3));
    }
    if (spec.rfind("crot(", 0) == 0) {
        require_qubits("crot", d, arity, 2);
        return gate_crot(parse_angle(spec, 4));
    }
    if (spec.rfind("mat", 0) == 0) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(spec.substr(3));
        } catch (const std::exception& e) {
            throw Error("gate: malformed matrix literal: " + std::string(e.what()));
        }
        if (!j.is_array() || j.size() != dim * dim)
            throw Error("gate: matrix literal needs " + std::to_string(dim * dim) + " entries");
        CMatrix m{Eigen::Index(dim), Eigen::Index(dim)};
        for (std::size_t i = 0; i < j.size(); ++i) {
            const auto& e = j[i];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw Error("gate: matrix entries must be [re,im]");
            m(Eigen::Index(i / dim), Eigen::Index(i % dim)) = cd(e[0].get<double>(), e[1].get<double>());
        }
        if (!is_unitary(m)) throw Error("gate: matrix literal is not unitary");
        return m;
    }
    throw Error("gate: unknown gate '" + spec + "'");
}

std::string gate_name(const CMatrix& u, std::size_t d) {
    const double tol = tolerances().matrix;
    auto same = [&](const CMatrix& g) { return g.rows() == u.rows() && max_abs(g - u) <= tol; };
    if (same(identity(std::size_t(u.rows())))) return "id";
    if (u.rows() == 2) {
        if (same(gate_x())) return "X";
        if (same(gate_y())) return "Y";
        if (same(gate_z())) return "Z";
        const double t = std::atan2(u(1, 0).real(), u(0, 0).real());
        if (same(gate_rot(t))) {
            std::ostringstream os;
            os << "rot(" << t << ")";
            return os.str();
        }
    }
    if (std::size_t(u.rows()) == d * d && same(gate_swap(d))) return "swap";
    if (u.rows() == 8 && same(gate_toffoli())) return "toffoli";
    if (u.rows() == 4 && max_abs(u.block(0, 0, 2, 2) - identity(2)) <= tol) {
        const double t = std::atan2(u(3, 2).real(), u(2, 2).real());
        if (same(gate_crot(t))) {
            std::ostringstream os;
            os << "crot(" << t << ")";
            return os.str();
        }
    }
    return "U";
}

}  // namespace wbench
