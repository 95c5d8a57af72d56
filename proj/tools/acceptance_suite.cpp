#include "acceptance_suite.hpp"

#include "wbench/graph.hpp"
#include "wbench/hardness.hpp"
#include "wbench/qrm.hpp"
#include "wbench/qts.hpp"
#include "wbench/rules_dsl.hpp"
#include "wbench/ulg.hpp"
#include "wbench/wheelbarrow.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

namespace wbench {

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x, int precision = 6) {
    std::ostringstream os;
    os.precision(precision);
    os << x;
    return os.str();
}

// union-find connectivity, independent of the spectral code under test
bool connected_by_union_find(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (auto [a, b] : edges) parent[find(a)] = find(b);
    for (std::size_t i = 1; i < n; ++i)
        if (find(i) != find(0)) return false;
    return true;
}

Graph graph_from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    Graph g;
    for (std::size_t i = 0; i < n; ++i) g.add_vertex("v" + std::to_string(100 + i));
    for (auto [a, b] : edges) g.add_edge(a, b);
    return g;
}

std::vector<std::pair<std::size_t, std::size_t>> random_connected_edges(std::size_t n, std::mt19937& rng) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 1; i < n; ++i) edges.push_back({std::uniform_int_distribution<std::size_t>(0, i - 1)(rng), i});
    std::bernoulli_distribution extra(std::uniform_real_distribution<double>(0.0, 0.4)(rng));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (extra(rng) && std::find(edges.begin(), edges.end(), std::make_pair(i, j)) == edges.end())
                edges.push_back({i, j});
    return edges;
}

CMatrix random_unitary(std::size_t n, std::mt19937& rng) {
    std::normal_distribution<double> g;
    CMatrix z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < z.rows(); ++i)
        for (Eigen::Index j = 0; j < z.cols(); ++j) z(i, j) = cd(g(rng), g(rng));
    Eigen::HouseholderQR<CMatrix> qr(z);
    return qr.householderQ() * CMatrix::Identity(z.rows(), z.cols());
}

Outcome criterion_path_gap() {
    double worst = 0.0;
    for (std::size_t l = 2; l <= 50; ++l) {
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (std::size_t i = 0; i + 1 < l; ++i) edges.push_back({i, i + 1});
        const double a = algebraic_connectivity(graph_from_edges(l, edges));
        worst = std::max(worst, std::abs(a - 2.0 * (1.0 - std::cos(std::numbers::pi / double(l)))));
    }
    return {worst <= 1e-9, "L = 2..50, max |a - 2(1 - cos(pi/L))| = " + fmt(worst, 3)};
}

Outcome criterion_fiedler() {
    std::size_t graphs = 0, mismatches = 0;
    for (std::size_t n = 2; n <= 6; ++n) {
        std::vector<std::pair<std::size_t, std::size_t>> all;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) all.push_back({i, j});
        for (std::size_t mask = 0; mask < (std::size_t(1) << all.size()); ++mask) {
            std::vector<std::pair<std::size_t, std::size_t>> edges;
            for (std::size_t k = 0; k < all.size(); ++k)
                if (mask >> k & 1) edges.push_back(all[k]);
            const bool positive = algebraic_connectivity(graph_from_edges(n, edges)) > 1e-9;
            mismatches += positive != connected_by_union_find(n, edges) ? 1 : 0;
            ++graphs;
        }
    }
    return {mismatches == 0, std::to_string(graphs) + " labelled graphs on 2..6 vertices, " + std::to_string(mismatches) +
                                 " disagreements between a(G) > 0 and connectivity"};
}

Outcome criterion_kitaev_graph() {
    std::mt19937 rng(20240601);
    std::size_t failures = 0;
    double worst = 1e300;
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 40)(rng);
        const Graph g = graph_from_edges(n, random_connected_edges(n, rng));
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        const std::size_t k = std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
        std::vector<std::string> penalized;
        for (std::size_t i = 0; i < k; ++i) penalized.push_back(g.id(order[i]));
        const PenalizedBound b = penalized_bound(g, penalized);
        worst = std::min(worst, b.lambda_min - b.kitaev_lower_bound);
        if (b.lambda_min < b.kitaev_lower_bound - 1e-9) ++failures;
    }
    const PenalizedBound p3 = penalized_bound(graph_from_edges(3, {{0, 1}, {1, 2}}), {"v100"});
    const bool worked = std::abs(p3.lambda_min - 0.19806) < 5e-6 && std::abs(p3.kitaev_lower_bound - 0.18350) < 5e-6;
    return {failures == 0 && worked, "500 random graphs, " + std::to_string(failures) + " violations, min margin " +
                                         fmt(worst, 4) + "; P3: " + fmt(p3.lambda_min, 5) + " >= " +
                                         fmt(p3.kitaev_lower_bound, 5)};
}

Outcome criterion_ulg_semiclassical() {
    std::mt19937 rng(77);
    double worst_spec = 0.0, worst_w = 0.0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t s = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
        const auto edges = random_connected_edges(s, rng);
        std::vector<CMatrix> potential;
        for (std::size_t i = 0; i < s; ++i) potential.push_back(random_unitary(n, rng));
        Ulg u(n);
        for (std::size_t i = 0; i < s; ++i) u.add_vertex("v" + std::to_string(100 + i));
        for (auto [a, b] : edges)
            u.add_edge(a, b, EdgeLabel{potential[b] * potential[a].adjoint(), 1, 1});
        const RVector h = hermitian_eigs(associated_hamiltonian(u).dense(), -1.0, false).eigenvalues;
        const RVector lap = hermitian_eigs(laplacian(u.graph()).dense(), -1.0, false).eigenvalues;
        std::vector<double> expect;
        for (Eigen::Index i = 0; i < lap.size(); ++i)
            for (std::size_t k = 0; k < n; ++k) expect.push_back(lap(i));
        std::sort(expect.begin(), expect.end());
        for (Eigen::Index i = 0; i < h.size(); ++i) worst_spec = std::max(worst_spec, std::abs(h(i) - expect[std::size_t(i)]));
        worst_w = std::max(worst_w, diagonalize(u).residual);
    }
    return {worst_spec <= 1e-8 && worst_w <= 1e-8,
            "200 simple ULGs, max spectrum deviation " + fmt(worst_spec, 3) + ", max |W'HW - L(x)1| " + fmt(worst_w, 3)};
}

Outcome criterion_thue_example(const std::string& data_dir) {
    const Qts q = data_dir.empty() ? parse_rules("# alphabet: a b c\nc <-> b\nab <-> cc\n")
                                   : load_rules(data_dir + "/thue_example.qts");
    const Alphabet& a = q.alphabet();
    std::vector<std::size_t> sizes;
    std::unordered_map<Word, std::size_t> seen;
    std::size_t total = 0, aaa_size = 0;
    for (char x : std::string("abc"))
        for (char y : std::string("abc"))
            for (char z : std::string("abc")) {
                const Word w = a.parse(std::string{x, y, z});
                if (seen.count(w)) continue;
                const EvolutionGraph ev = explore_evolution(q.ts, w, 1000);
                for (const auto& v : ev.vertices) seen[v] = sizes.size();
                sizes.push_back(ev.vertices.size());
                total += ev.vertices.size();
                if (a.render(w) == "a a a" || a.render(w) == "aaa") aaa_size = ev.vertices.size();
            }
    std::sort(sizes.rbegin(), sizes.rend());
    const bool ok = total == 27 && sizes == std::vector<std::size_t>{18, 6, 2, 1} && aaa_size == 1;
    std::string s;
    for (auto z : sizes) s += (s.empty() ? "" : ", ") + std::to_string(z);
    return {ok, std::to_string(total) + " strings, components {" + s + "}, aaa component size " +
                    std::to_string(aaa_size)};
}

Outcome criterion_even_number() {
    double worst = 0.0;
    std::size_t verdict_mismatch = 0;
    const double eps = 1.0 / 3.0;
    CMatrix r(2, 2);
    r << 0, 1, -1, 0;
    CMatrix p1 = CMatrix::Zero(2, 2);
    p1(1, 1) = 1.0;
    for (std::size_t n = 1; n <= 8; ++n) {
        const EvenNumberInstance e = even_number_example(n);
        const EvolutionGraph ev = explore_evolution(e.qts.ts, e.enc, 100000);
        const RVector chain = hermitian_eigs(chain_block_hamiltonian(e.qts, ev).dense(), -1.0, false).eigenvalues;
        const RVector ulg = hermitian_eigs(associated_hamiltonian(qts_to_ulg(e.qts, ev)).dense(), -1.0, false).eigenvalues;
        if (chain.size() != ulg.size()) {
            worst = 1e300;
        } else {
            for (Eigen::Index i = 0; i < chain.size(); ++i) worst = std::max(worst, std::abs(chain(i) - ulg(i)));
        }
        CMatrix rn = CMatrix::Identity(2, 2);
        for (std::size_t k = 0; k < n; ++k) rn = r * rn;
        const CMatrix m = p1 + rn.adjoint() * p1 * rn;
        const double lmin = Eigen::SelfAdjointEigenSolver<CMatrix>(m).eigenvalues()(0);
        const Verdict oracle = lmin <= eps / 2 ? Verdict::accepts : lmin >= eps ? Verdict::rejects : Verdict::undetermined;
        if (decide(e.qts, e.enc, e.inp, e.out, eps).verdict != oracle) ++verdict_mismatch;
    }
    return {worst <= 1e-8 && verdict_mismatch == 0, "n = 1..8, max chain/ULG spectrum deviation " + fmt(worst, 3) +
                                                        ", verdict mismatches " + std::to_string(verdict_mismatch)};
}

Outcome criterion_qrm(const std::string& data_dir) {
    std::vector<std::string> files = {"flipper.tm", "parity.tm", "marker.tm", "loop.tm", "gated.tm"};
    std::size_t runs = 0, failures = 0, machines = 0, max_apps = 0, halted = 0, stuck = 0;
    std::string first_failure;
    for (const auto& f : files) {
        const Tm tm = load_tm(data_dir + "/tm/" + f);
        ++machines;
        for (std::size_t n = 4; n <= 8; ++n) {
            const std::size_t max_steps = 200 / n - 1;
            // every tape over the non-blank symbols of length up to n - 2
            const std::size_t k = tm.alphabet.size() - 1;
            for (std::size_t len = 0; len + 2 <= n && len <= 4; ++len) {
                std::size_t count = 1;
                for (std::size_t i = 0; i < len; ++i) count *= k;
                for (std::size_t c = 0; c < count; ++c) {
                    std::vector<std::size_t> tape;
                    for (std::size_t i = 0, x = c; i < len; ++i, x /= k) tape.push_back(1 + x % k);
                    const DiffReport r = differential_test(tm, n, tape, max_steps);
                    ++runs;
                    max_apps = std::max(max_apps, r.ring_applications);
                    halted += r.equal && r.tm_halted;
                    stuck += r.equal && r.detail.rfind("both stuck", 0) == 0;
                    if (!r.equal || r.ring_applications > 200) {
                        ++failures;
                        if (first_failure.empty())
                            first_failure = "; first failure " + f + " n=" + std::to_string(n) + ": " + r.detail;
                    }
                }
            }
        }
    }
    return {failures == 0 && machines >= 3, std::to_string(machines) + " machines, " + std::to_string(runs) +
                                                " runs on rings of 4..8 cells, " + std::to_string(failures) +
                                                " mismatches (" + std::to_string(halted) + " halted, " + std::to_string(stuck) +
                                                " stuck, rest ran to the step cap), max head applications " +
                                                std::to_string(max_apps) +
                                                first_failure};
}

Outcome criterion_wheelbarrow() {
    const WheelbarrowSystem& w = wheelbarrow(false);
    const AllowedPairs literal = allowed_pairs(w, false);
    std::ostringstream d;
    bool ok = true;
    // table caption checks
    const bool bar_g = literal.allowed(w.sym("|"), w.sym("G"));
    bool x_bang = false;
    for (const char* x : {":U", ":T", ":A", ":S", ":H", "r"}) x_bang = x_bang || literal.allowed(w.sym(x), w.sym("!"));
    const bool oh1 = literal.allowed(w.sym("OH"), w.sym(":1"));
    ok = ok && bar_g && !x_bang && !oh1;
    d << "table: |G " << (bar_g ? "allowed" : "FORBIDDEN") << ", :x! " << (x_bang ? "ALLOWED" : "forbidden")
      << ", OH:1 " << (oh1 ? "ALLOWED" : "forbidden");
    const PropertyCheck w1 = check_w1(w, false);
    ok = ok && w1.ok;
    d << "; W1 " << (w1.ok ? "holds" : "fails on " + std::to_string(w1.witnesses.size()) + " rule(s)");
    std::vector<std::size_t> ns, sizes;
    for (std::size_t n : valid_lengths(3)) {
        History h = explore_history(n);
        const HistoryReport& r = h.report;
        ns.push_back(n);
        sizes.push_back(r.size);
        const bool good = !r.capped && r.bracket_violations == 0 && r.head_violations == 0 &&
                          r.literal_pair_violations.empty() && r.simple;
        ok = ok && good;
        d << "; n=" << n << ": " << r.size << " strings, bracket violations " << r.bracket_violations
          << ", head-count violations " << r.head_violations << ", illegal pair kinds "
          << r.literal_pair_violations.size() << ", " << (r.simple ? "simple" : "NOT simple");
    }
    const double slope = fitted_exponent(ns, sizes);
    ok = ok && slope <= 3.3;
    d << "; fitted size exponent " << fmt(slope, 3);
    return {ok, d.str()};
}

Outcome criterion_hardness() {
    const PromiseGapReport r = promise_gap_report(20);
    std::ostringstream d;
    bool ok = r.ok;
    d << "|M|=20, eps=" << fmt(r.eps, 3) << ", alpha=" << fmt(r.alpha, 10) << ", beta=" << fmt(r.beta, 10);
    for (const auto& b : r.blocks)
        d << "; " << b.kind << " " << fmt(b.lambda_min, 10) << (b.lower ? " >= " : " <= ") << fmt(b.bound, 10)
          << (b.ok ? "" : " FAILS");
    if (auto wb = wheelbarrow_history_block(valid_lengths(1).front())) {
        ok = ok && wb->ok;
        d << "; " << wb->kind << " n=" << valid_lengths(1).front() << " " << fmt(wb->lambda_min, 10)
          << (wb->ok ? "" : " FAILS (expected -2)");
    } else {
        d << "; smallest Wheelbarrow block exceeds the eigensolver cap";
    }
    return {ok, d.str()};
}

Outcome criterion_local_dimension() {
    const WheelbarrowSystem& r = wheelbarrow(true);
    const std::size_t q = r.alphabet().quantum_size();
    const std::size_t dim = site_dimension(r.qts, true);
    return {q == 3 && dim == 42, std::to_string(r.alphabet().size()) + " symbols, " + std::to_string(q) +
                                     " quantum, compressed site dimension " + std::to_string(dim) + ", " +
                                     std::to_string(r.dropped.size()) + " rules dropped by the merge"};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::ostream& out, const std::vector<int>& only,
                                            const std::string& data_dir) {
    struct Spec {
        int id;
        const char* name;
        double budget;
        std::function<Outcome()> run;
    };
    const std::vector<Spec> specs = {
        {1, "path-graph gap", 1.0, criterion_path_gap},
        {2, "Fiedler connectivity", 30.0, criterion_fiedler},
        {3, "Kitaev graph bound", 120.0, criterion_kitaev_graph},
        {4, "ULG semi-classicality", 120.0, criterion_ulg_semiclassical},
        {5, "Thue example fidelity", 1.0, [&] { return criterion_thue_example(data_dir); }},
        {6, "QTS/ULG/Hamiltonian equivalence", 10.0, criterion_even_number},
        {7, "QRM differential test", 30.0, [&] { return criterion_qrm(data_dir); }},
        {8, "Wheelbarrow structural suite", 600.0, criterion_wheelbarrow},
        {9, "hardness energy structure", 300.0, criterion_hardness},
        {10, "local-dimension accounting", 1.0, criterion_local_dimension},
    };
    std::vector<CriterionResult> results;
    for (const auto& s : specs) {
        if (!only.empty() && std::find(only.begin(), only.end(), s.id) == only.end()) continue;
        CriterionResult r;
        r.id = s.id;
        r.name = s.name;
        r.budget = s.budget;
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = s.run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        r.pass = o.pass && r.seconds < s.budget;
        r.detail = o.detail;
        if (o.pass && !r.pass) r.detail += "; over the time budget";
        out << "criterion " << r.id << ": " << (r.pass ? "PASS" : "FAIL") << " - " << r.name << " - " << r.detail
            << " (" << fmt(r.seconds, 3) << " s of " << s.budget << " s)" << std::endl;
        results.push_back(r);
    }
    return results;
}

}  // namespace wbench
