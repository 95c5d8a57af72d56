#pragma once

#include "wbench/linalg.hpp"

#include <string>

namespace wbench {

CMatrix gate_x();
CMatrix gate_y();
CMatrix gate_z();
CMatrix gate_rot(double theta);           // [[cos, -sin], [sin, cos]]
CMatrix gate_swap(std::size_t d = 2);     // on C^d (x) C^d
CMatrix gate_toffoli();
CMatrix gate_crot(double theta);          // |0><0| (x) 1 + |1><1| (x) rot(theta)

// Resolves a registry spelling: id, x, y, z, swap, toffoli, rot(<rad>),
// crot(<rad>) or mat[[re,im],...] (row-major, square). `arity` is the number
// of quantum registers the gate must act on, each of dimension d.
CMatrix gate_from_spec(const std::string& spec, std::size_t d, std::size_t arity);

// Registry name for display: id, X, Y, Z, swap, toffoli, rot(t), crot(t), else "U".
std::string gate_name(const CMatrix& u, std::size_t d = 2);

}  // namespace wbench
