#include "wbench/graph.hpp"

#include <json.hpp>

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace wbench {

std::size_t Graph::add_vertex(const std::string& id) {
    auto it = index_.find(id);
    if (it != index_.end()) return it->second;
    const std::size_t i = ids_.size();
    ids_.push_back(id);
    index_.emplace(id, i);
    adj_.emplace_back();
    return i;
}

std::size_t Graph::index(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error("graph: unknown vertex '" + id + "'");
    return it->second;
}

bool Graph::has_edge(std::size_t a, std::size_t b) const {
    const auto& n = adj_[a];
    return std::find(n.begin(), n.end(), b) != n.end();
}

bool Graph::add_edge(const std::string& a, const std::string& b) { return add_edge(index(a), index(b)); }

bool Graph::add_edge(std::size_t a, std::size_t b) {
    if (a >= size() || b >= size()) throw Error("graph: edge endpoint out of range");
    if (a == b) throw Error("graph: self-loop on '" + ids_[a] + "'");
    if (has_edge(a, b)) return false;
    adj_[a].push_back(b);
    adj_[b].push_back(a);
    edges_.emplace_back(std::min(a, b), std::max(a, b));
    return true;
}

SparseHermitian laplacian(const Graph& g) {
    SparseHermitian l(g.size());
    for (const auto& [a, b] : g.edges()) {
        l.add_diagonal(a, 1.0);
        l.add_diagonal(b, 1.0);
        l.add(a, b, -1.0);
    }
    return l;
}

std::vector<std::vector<std::size_t>> component_indices(const Graph& g) {
    std::vector<std::size_t> order(g.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return g.id(a) < g.id(b); });
    std::vector<char> seen(g.size(), 0);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t start : order) {
        if (seen[start]) continue;
        std::vector<std::size_t> comp;
        std::deque<std::size_t> queue{start};
        seen[start] = 1;
        while (!queue.empty()) {
            const std::size_t v = queue.front();
            queue.pop_front();
            comp.push_back(v);
            for (std::size_t w : g.neighbors(v))
                if (!seen[w]) {
                    seen[w] = 1;
                    queue.push_back(w);
                }
        }
        std::sort(comp.begin(), comp.end(), [&](auto a, auto b) { return g.id(a) < g.id(b); });
        out.push_back(std::move(comp));
    }
    return out;
}

std::vector<std::vector<std::string>> components(const Graph& g) {
    std::vector<std::vector<std::string>> out;
    for (const auto& c : component_indices(g)) {
        std::vector<std::string> names;
        for (std::size_t v : c) names.push_back(g.id(v));
        out.push_back(std::move(names));
    }
    return out;
}

bool is_connected(const Graph& g) { return g.size() > 0 && component_indices(g).size() == 1; }

double algebraic_connectivity(const Graph& g) {
    if (g.size() < 2) throw Error("algebraic_connectivity: need at least two vertices");
    const Spectrum s = hermitian_eigs(laplacian(g), -1.0, false);
    return s.eigenvalues(1);
}

std::vector<CVector> ground_space_basis(const Graph& g) {
    std::vector<CVector> out;
    for (const auto& c : component_indices(g)) {
        CVector v = CVector::Zero(Eigen::Index(g.size()));
        const double amp = 1.0 / std::sqrt(double(c.size()));
        for (std::size_t i : c) v(Eigen::Index(i)) = amp;
        out.push_back(std::move(v));
    }
    return out;
}

double kitaev_bound(double mu, double cos_theta) {
    const double half = std::acos(std::clamp(cos_theta, -1.0, 1.0)) / 2.0;
    return 2.0 * mu * std::sin(half) * std::sin(half);
}

double subspace_cos_angle(const CMatrix& a, const CMatrix& b) {
    if (a.cols() == 0 || b.cols() == 0) return 0.0;
    const CMatrix overlap = a.adjoint() * b;
    Eigen::JacobiSVD<CMatrix> svd(overlap);
    return std::min(1.0, svd.singularValues()(0));
}

PenalizedBound penalized_bound(const Graph& g, const std::vector<std::string>& penalized) {
    if (!is_connected(g)) throw Error("penalized_bound: graph is disconnected");
    std::vector<std::size_t> p;
    for (const auto& id : penalized) p.push_back(g.index(id));
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.empty() || p.size() >= g.size()) throw Error("penalized_bound: need a nonempty proper subset");

    SparseHermitian h = laplacian(g);
    for (std::size_t v : p) h.add_diagonal(v, 1.0);
    PenalizedBound r;
    r.lambda_min = hermitian_eigs(h, -1.0, false).eigenvalues(0);
    r.mu = std::min(algebraic_connectivity(g), 1.0);
    r.cos_theta = std::sqrt(1.0 - double(p.size()) / double(g.size()));
    r.kitaev_lower_bound = r.mu * (1.0 - r.cos_theta);
    return r;
}

namespace {

std::string dot_id(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string to_dot(const Graph& g) {
    std::ostringstream os;
    os << "graph {\n";
    for (const auto& id : g.ids()) os << "  " << dot_id(id) << ";\n";
    for (const auto& [a, b] : g.edges()) os << "  " << dot_id(g.id(a)) << " -- " << dot_id(g.id(b)) << ";\n";
    os << "}\n";
    return os.str();
}

std::string to_json(const Graph& g) {
    nlohmann::json j;
    j["vertices"] = g.ids();
    j["edges"] = nlohmann::json::array();
    for (const auto& [a, b] : g.edges()) j["edges"].push_back({g.id(a), g.id(b)});
    return j.dump();
}

}  // namespace wbench
