#pragma once

#include "wbench/linalg.hpp"

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace wbench {

// Undirected simple graph with opaque string ids interned by insertion order.
class Graph {
public:
    std::size_t add_vertex(const std::string& id);
    // returns false for an already-present edge; self-loops and unknown ids throw
    bool add_edge(const std::string& a, const std::string& b);
    bool add_edge(std::size_t a, std::size_t b);

    std::size_t size() const { return ids_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    const std::string& id(std::size_t i) const { return ids_[i]; }
    const std::vector<std::string>& ids() const { return ids_; }
    std::size_t index(const std::string& id) const;
    bool has_vertex(const std::string& id) const { return index_.count(id) != 0; }
    bool has_edge(std::size_t a, std::size_t b) const;
    const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
    const std::vector<std::size_t>& neighbors(std::size_t i) const { return adj_[i]; }

private:
    std::vector<std::string> ids_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::vector<std::size_t>> adj_;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

SparseHermitian laplacian(const Graph& g);

// Components as vertex indices: BFS from the least id; members sorted by id;
// list sorted by least id.
std::vector<std::vector<std::size_t>> component_indices(const Graph& g);
std::vector<std::vector<std::string>> components(const Graph& g);
bool is_connected(const Graph& g);

double algebraic_connectivity(const Graph& g);

// One uniform superposition per component, in component order.
std::vector<CVector> ground_space_basis(const Graph& g);

struct PenalizedBound {
    double lambda_min = 0.0;
    double kitaev_lower_bound = 0.0;
    double mu = 0.0;
    double cos_theta = 0.0;
};

// lambda_min(Delta + sum_{v in P} |v><v|) against mu (1 - sqrt(1 - |P|/|V|)).
PenalizedBound penalized_bound(const Graph& g, const std::vector<std::string>& penalized);

// Geometrical-lemma pieces usable for arbitrary kernel pairs.
double kitaev_bound(double mu, double cos_theta);  // 2 mu sin^2(theta/2)
// cos of the angle between two subspaces given orthonormal column bases
double subspace_cos_angle(const CMatrix& a, const CMatrix& b);

std::string to_dot(const Graph& g);
std::string to_json(const Graph& g);

}  // namespace wbench
