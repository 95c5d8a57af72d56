#include "wbench/ulg.hpp"

#include "wbench/gates.hpp"

#include <json.hpp>

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <sstream>

namespace wbench {

CMatrix EdgeLabel::apply(const CMatrix& x) const {
    const std::size_t k = std::size_t(u.rows());
    if (left == 1 && right == 1) return u * x;
    CMatrix out(x.rows(), x.cols());
    CMatrix block(Eigen::Index(k), x.cols());
    for (std::size_t l = 0; l < left; ++l)
        for (std::size_t r = 0; r < right; ++r) {
            for (std::size_t m = 0; m < k; ++m) block.row(Eigen::Index(m)) = x.row(Eigen::Index((l * k + m) * right + r));
            const CMatrix y = u * block;
            for (std::size_t m = 0; m < k; ++m) out.row(Eigen::Index((l * k + m) * right + r)) = y.row(Eigen::Index(m));
        }
    return out;
}

bool EdgeLabel::is_identity(double tol) const { return max_abs(u - identity(std::size_t(u.rows()))) <= tol; }

void Ulg::add_edge(const std::string& a, const std::string& b, const CMatrix& u) {
    add_edge(add_vertex(a), add_vertex(b), EdgeLabel{u, 1, 1});
}

void Ulg::add_edge(std::size_t a, std::size_t b, EdgeLabel label) {
    if (label.dim() != n_ || label.u.rows() != label.u.cols())
        throw Error("ulg: label dimension " + std::to_string(label.dim()) + " does not match vertex dimension " +
                    std::to_string(n_));
    if (!is_unitary(label.u)) throw Error("ulg: edge label is not unitary");
    if (!g_.add_edge(a, b)) throw Error("ulg: duplicate edge " + g_.id(a) + " -- " + g_.id(b));
    if (g_.id(b) < g_.id(a)) {
        std::swap(a, b);
        label = label.adjoint();
    }
    const std::size_t e = edges_.size();
    edges_.push_back({a, b, std::move(label)});
    incident_[a].push_back(e);
    incident_[b].push_back(e);
    lookup_[{std::min(a, b), std::max(a, b)}] = e;
}

EdgeLabel Ulg::label(std::size_t from, std::size_t to) const {
    auto it = lookup_.find({std::min(from, to), std::max(from, to)});
    if (it == lookup_.end()) throw Error("ulg: no edge " + g_.id(from) + " -- " + g_.id(to));
    const UlgEdge& e = edges_[it->second];
    return e.src == from ? e.label : e.label.adjoint();
}

namespace {

struct Tree {
    std::vector<std::size_t> root_of, parent, order;
    std::vector<char> is_tree_edge;
};

Tree bfs_tree(const Ulg& u) {
    const Graph& g = u.graph();
    Tree t;
    const std::size_t none = std::size_t(-1);
    t.root_of.assign(g.size(), none);
    t.parent.assign(g.size(), none);
    t.is_tree_edge.assign(u.edges().size(), 0);
    for (const auto& comp : component_indices(g)) {
        const std::size_t root = comp.front();
        std::deque<std::size_t> q{root};
        t.root_of[root] = root;
        while (!q.empty()) {
            const std::size_t v = q.front();
            q.pop_front();
            t.order.push_back(v);
            for (std::size_t e : u.incident(v)) {
                    const UlgEdge& ed = u.edges()[e];
                    const std::size_t w = ed.src == v ? ed.dst : ed.src;
                    if (t.root_of[w] != none) continue;
                    t.root_of[w] = root;
                    t.parent[w] = v;
                    t.is_tree_edge[e] = 1;
                    q.push_back(w);
                }
        }
    }
    return t;
}

// propagate a block of vectors from each root along the BFS tree
std::vector<CMatrix> propagate(const Ulg& u, const Tree& t, const CMatrix& seed) {
    std::vector<CMatrix> x(u.graph().size());
    for (std::size_t v : t.order) {
        if (t.parent[v] == std::size_t(-1))
            x[v] = seed;
        else
            x[v] = u.label(t.parent[v], v).apply(x[t.parent[v]]);
    }
    return x;
}

CMatrix path_transport(const Ulg& u, const Tree& t, std::size_t v, std::vector<std::size_t>& path) {
    std::vector<std::size_t> chain{v};
    while (t.parent[chain.back()] != std::size_t(-1)) chain.push_back(t.parent[chain.back()]);
    std::reverse(chain.begin(), chain.end());
    path = chain;
    CMatrix m = identity(u.vertex_dim());
    for (std::size_t i = 1; i < chain.size(); ++i) m = u.label(chain[i - 1], chain[i]).apply(m);
    return m;
}

}  // namespace

std::vector<CMatrix> tree_transports(const Ulg& u) {
    const Tree t = bfs_tree(u);
    return propagate(u, t, identity(u.vertex_dim()));
}

SimplicityReport check_simple(const Ulg& u, double tol) {
    if (tol < 0) tol = tolerances().matrix;
    const Tree t = bfs_tree(u);
    const std::size_t n = u.vertex_dim();
    CMatrix seed;
    if (double(u.graph().size()) * double(n) * double(n) <= 2e7) {
        seed = identity(n);
    } else {
        // random probes: equality on generic vectors implies equality of the maps
        std::mt19937_64 rng(12345);
        std::normal_distribution<double> gauss;
        const Eigen::Index p = Eigen::Index(std::min<std::size_t>(n, 4));
        seed.resize(Eigen::Index(n), p);
        for (Eigen::Index i = 0; i < seed.rows(); ++i)
            for (Eigen::Index j = 0; j < p; ++j) seed(i, j) = cd(gauss(rng), gauss(rng));
        for (Eigen::Index j = 0; j < p; ++j) seed.col(j).normalize();
    }
    const std::vector<CMatrix> x = propagate(u, t, seed);

    SimplicityReport rep;
    std::size_t worst_edge = std::size_t(-1);
    for (std::size_t e = 0; e < u.edges().size(); ++e) {
        if (t.is_tree_edge[e]) continue;
        const UlgEdge& ed = u.edges()[e];
        const double dev = max_abs(ed.label.apply(x[ed.src]) - x[ed.dst]);
        if (dev > rep.max_deviation) {
            rep.max_deviation = dev;
            worst_edge = e;
        }
    }
    if (rep.max_deviation > tol) {
        rep.simple = false;
        const UlgEdge& ed = u.edges()[worst_edge];
        std::vector<std::size_t> pa, pb;
        const CMatrix ta = path_transport(u, t, ed.src, pa);
        const CMatrix tb = path_transport(u, t, ed.dst, pb);
        WitnessCycle w;
        w.vertices = pa;
        w.vertices.insert(w.vertices.end(), pb.rbegin(), pb.rend());
        w.product = tb.adjoint() * ed.label.apply(ta);
        w.deviation = max_abs(w.product - identity(n));
        rep.witness = std::move(w);
    }
    return rep;
}

SparseHermitian associated_hamiltonian(const Ulg& u) {
    const std::size_t n = u.vertex_dim();
    SparseHermitian h(u.graph().size() * n);
    for (const UlgEdge& e : u.edges()) {
        for (std::size_t i = 0; i < n; ++i) {
            h.add_diagonal(e.src * n + i, 1.0);
            h.add_diagonal(e.dst * n + i, 1.0);
        }
        // -|dst><src| (x) U
        const EdgeLabel& l = e.label;
        const std::size_t k = std::size_t(l.u.rows());
        for (std::size_t a = 0; a < l.left; ++a)
            for (std::size_t r = 0; r < l.right; ++r)
                for (std::size_t i = 0; i < k; ++i)
                    for (std::size_t j = 0; j < k; ++j) {
                        const cd v = l.u(Eigen::Index(i), Eigen::Index(j));
                        if (v == cd(0.0, 0.0)) continue;
                        const std::size_t row = (a * k + i) * l.right + r, col = (a * k + j) * l.right + r;
                        h.add(e.dst * n + row, e.src * n + col, -v);
                    }
    }
    return h;
}

Diagonalizer diagonalize(const Ulg& u) {
    if (!is_connected(u.graph())) throw Error("diagonalize: ULG is disconnected; apply per component");
    const SimplicityReport rep = check_simple(u);
    if (!rep.simple) throw Error("diagonalize: ULG is not simple (cycle deviation " + std::to_string(rep.max_deviation) + ")");
    const Tree t = bfs_tree(u);
    const std::vector<CMatrix> tr = propagate(u, t, identity(u.vertex_dim()));
    const std::size_t n = u.vertex_dim(), s = u.graph().size();
    Diagonalizer d;
    d.expansion_order = t.order;
    // Composing the per-vertex factors W_a along the expansion leaves a block
    // diagonal unitary whose v-block is the accumulated tree transport.
    d.w = CMatrix::Zero(Eigen::Index(s * n), Eigen::Index(s * n));
    for (std::size_t v = 0; v < s; ++v) d.w.block(Eigen::Index(v * n), Eigen::Index(v * n), Eigen::Index(n), Eigen::Index(n)) = tr[v];
    const CMatrix h = associated_hamiltonian(u).dense();
    const CMatrix target = tensor(laplacian(u.graph()).dense(), identity(n));
    d.residual = max_abs(d.w.adjoint() * h * d.w - target);
    return d;
}

std::vector<CVector> ground_space_history_states(const Ulg& u) {
    const SimplicityReport rep = check_simple(u);
    if (!rep.simple) throw Error("ground_space_history_states: ULG is not simple");
    const Tree t = bfs_tree(u);
    const std::size_t n = u.vertex_dim();
    const std::vector<CMatrix> tr = propagate(u, t, identity(n));
    std::vector<CVector> out;
    for (const auto& comp : component_indices(u.graph())) {
        const double amp = 1.0 / std::sqrt(double(comp.size()));
        for (std::size_t j = 0; j < n; ++j) {
            CVector psi = CVector::Zero(Eigen::Index(u.graph().size() * n));
            for (std::size_t v : comp) psi.segment(Eigen::Index(v * n), Eigen::Index(n)) = amp * tr[v].col(Eigen::Index(j));
            out.push_back(std::move(psi));
        }
    }
    return out;
}

UlgBound penalized_ulg_bound(const Ulg& u, const std::map<std::string, CMatrix>& penalties) {
    if (penalties.empty()) throw Error("penalized_ulg_bound: no penalized vertex");
    if (!is_connected(u.graph())) throw Error("penalized_ulg_bound: ULG is disconnected");
    const SimplicityReport rep = check_simple(u);
    if (!rep.simple) throw Error("penalized_ulg_bound: ULG is not simple");
    const std::size_t n = u.vertex_dim(), s = u.graph().size();

    // transports rooted at the least-id penalized vertex
    std::vector<std::size_t> pen;
    for (const auto& [id, pi] : penalties) {
        if (!is_projector(pi) || std::size_t(pi.rows()) != n) throw Error("penalized_ulg_bound: bad projector at " + id);
        pen.push_back(u.graph().index(id));
    }
    std::vector<CMatrix> tr = tree_transports(u);
    const CMatrix root_inv = tr[pen.front()].adjoint();
    for (auto& m : tr) m = m * root_inv;

    SparseHermitian h = associated_hamiltonian(u);
    CMatrix rotated_sum = CMatrix::Zero(Eigen::Index(n), Eigen::Index(n));
    std::vector<CMatrix> comp;
    for (const auto& [id, pi] : penalties) {
        const std::size_t v = u.graph().index(id);
        h.add_block(v * n, v * n, pi);
        rotated_sum += tr[v].adjoint() * pi * tr[v];
        comp.push_back(identity(n) - pi);
    }
    UlgBound b;
    b.lambda_min = smallest_eigs(h, 1).eigenvalues(0);
    b.algebraic_connectivity = s >= 2 ? algebraic_connectivity(u.graph()) : 0.0;
    const double lam = std::max(0.0, hermitian_eigs(rotated_sum, -1, false).eigenvalues(0));
    b.cos_theta = std::sqrt(std::max(0.0, 1.0 - lam / double(s)));
    b.lower_bound = std::min(b.algebraic_connectivity, 1.0) * (1.0 - b.cos_theta);

    double worst = 0.0;
    std::size_t i = 0;
    for (const auto& [ida, pa] : penalties) {
        std::size_t j = 0;
        for (const auto& [idb, pb] : penalties) {
            if (i != j) {
                const std::size_t va = u.graph().index(ida), vb = u.graph().index(idb);
                const CMatrix path = tr[va] * tr[vb].adjoint();  // from vb to va
                const CMatrix m = comp[i] * path * comp[j];
                Eigen::JacobiSVD<CMatrix> svd(m);
                worst = std::max(worst, svd.singularValues()(0));
            }
            ++j;
        }
        ++i;
    }
    b.projected_mu = 1.0 - worst;
    return b;
}

std::string ulg_to_json(const Ulg& u) {
    nlohmann::json j;
    j["vertices"] = u.graph().ids();
    j["vertex_dim"] = u.vertex_dim();
    j["edges"] = nlohmann::json::array();
    for (const UlgEdge& e : u.edges()) {
        const CMatrix m = e.label.full();
        nlohmann::json mat = nlohmann::json::array();
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c) mat.push_back({m(r, c).real(), m(r, c).imag()});
        j["edges"].push_back({{"from", u.graph().id(e.src)}, {"to", u.graph().id(e.dst)}, {"matrix", mat}});
    }
    return j.dump();
}

Ulg ulg_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw Error(std::string("ulg json: ") + e.what());
    }
    if (!j.contains("vertex_dim") || !j.contains("vertices") || !j.contains("edges"))
        throw Error("ulg json: need vertices, vertex_dim and edges");
    const std::size_t n = j["vertex_dim"].get<std::size_t>();
    Ulg u(n);
    for (const auto& v : j["vertices"]) u.add_vertex(v.get<std::string>());
    for (const auto& e : j["edges"]) {
        const auto& mat = e.at("matrix");
        if (mat.size() != n * n) throw Error("ulg json: edge matrix must have vertex_dim^2 entries");
        CMatrix m{Eigen::Index(n), Eigen::Index(n)};
        for (std::size_t i = 0; i < n * n; ++i)
            m(Eigen::Index(i / n), Eigen::Index(i % n)) = cd(mat[i].at(0).get<double>(), mat[i].at(1).get<double>());
        const std::string a = e.at("from").get<std::string>(), b = e.at("to").get<std::string>();
        if (!u.graph().has_vertex(a) || !u.graph().has_vertex(b)) throw Error("ulg json: edge endpoint not declared");
        u.add_edge(a, b, m);
    }
    return u;
}

std::string ulg_to_dot(const Ulg& u) {
    std::ostringstream os;
    os << "digraph {\n";
    for (const auto& id : u.graph().ids()) os << "  \"" << id << "\";\n";
    for (const UlgEdge& e : u.edges())
        os << "  \"" << u.graph().id(e.src) << "\" -> \"" << u.graph().id(e.dst) << "\" [label=\""
           << gate_name(e.label.full(), 2) << "\"];\n";
    os << "}\n";
    return os.str();
}

}  // namespace wbench
