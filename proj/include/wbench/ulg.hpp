#pragma once

#include "wbench/graph.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wbench {

// Unitary 1_left (x) u (x) 1_right. Rewriting systems produce labels that act
// on a few registers of a larger product space; keeping them factored makes
// transport and Hamiltonian assembly cheap.
struct EdgeLabel {
    CMatrix u;
    std::size_t left = 1;
    std::size_t right = 1;

    std::size_t dim() const { return left * std::size_t(u.rows()) * right; }
    CMatrix full() const { return embed(u, left, right); }
    EdgeLabel adjoint() const { return {u.adjoint(), left, right}; }
    CMatrix apply(const CMatrix& x) const;  // label * x, x has dim() rows
    bool is_identity(double tol) const;
};

struct UlgEdge {
    std::size_t src, dst;  // canonical: id(src) < id(dst)
    EdgeLabel label;       // maps the state at src to the state at dst
};

class Ulg {
public:
    explicit Ulg(std::size_t vertex_dim = 1) : n_(vertex_dim) {}

    std::size_t add_vertex(const std::string& id) {
        const std::size_t i = g_.add_vertex(id);
        if (incident_.size() < g_.size()) incident_.resize(g_.size());
        return i;
    }
    // label u acts along a -> b; stored in canonical direction
    void add_edge(const std::string& a, const std::string& b, const CMatrix& u);
    void add_edge(std::size_t a, std::size_t b, EdgeLabel label);

    const Graph& graph() const { return g_; }
    std::size_t vertex_dim() const { return n_; }
    const std::vector<UlgEdge>& edges() const { return edges_; }
    // label oriented from -> to (adjoint synthesized for the reverse direction)
    EdgeLabel label(std::size_t from, std::size_t to) const;
    // neighbour list with edge index, parallel to graph().neighbors()
    const std::vector<std::size_t>& incident(std::size_t v) const { return incident_[v]; }

private:
    Graph g_;
    std::size_t n_;
    std::vector<UlgEdge> edges_;
    std::vector<std::vector<std::size_t>> incident_;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> lookup_;
};

struct WitnessCycle {
    std::vector<std::size_t> vertices;  // closed walk, first == last
    CMatrix product;
    double deviation = 0.0;
};

struct SimplicityReport {
    bool simple = true;
    double max_deviation = 0.0;
    std::optional<WitnessCycle> witness;
};

SimplicityReport check_simple(const Ulg& u, double tol = -1.0);

SparseHermitian associated_hamiltonian(const Ulg& u);

struct Diagonalizer {
    CMatrix w;
    std::vector<std::size_t> expansion_order;
    double residual = 0.0;  // max |W^dag H W - Delta (x) 1|
};

Diagonalizer diagonalize(const Ulg& u);

// Tree transports from each component root (least id): state at v equals
// transport[v] times state at the root. Requires simplicity for meaning.
std::vector<CMatrix> tree_transports(const Ulg& u);

std::vector<CVector> ground_space_history_states(const Ulg& u);

struct UlgBound {
    double lambda_min = 0.0;
    double lower_bound = 0.0;   // min(a,1) (1 - cos theta), exact kernel angle
    double cos_theta = 0.0;
    double algebraic_connectivity = 0.0;
    double projected_mu = 0.0;  // 1 - max || Pi_r^c U_rp Pi_p^c ||
};

UlgBound penalized_ulg_bound(const Ulg& u, const std::map<std::string, CMatrix>& penalties);

std::string ulg_to_json(const Ulg& u);
Ulg ulg_from_json(const std::string& text);
std::string ulg_to_dot(const Ulg& u);

}  // namespace wbench
