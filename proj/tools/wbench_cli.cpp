#include "acceptance_suite.hpp"

#include "wbench/graph.hpp"
#include "wbench/hardness.hpp"
#include "wbench/qrm.hpp"
#include "wbench/qts.hpp"
#include "wbench/rules_dsl.hpp"
#include "wbench/ulg.hpp"
#include "wbench/wheelbarrow.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>

using namespace wbench;

namespace {

constexpr int kOk = 0, kFailed = 1, kUsage = 2;

struct Config {
    std::size_t cap = 1000000;
    std::string format = "text";
};

// JSON config: {"tolerances": {"matrix": .., "residual": ..}, "eig_cap": ..,
// "dense_limit": .., "cap": .., "format": "json" | "dot" | "text"}
Config load_config(const std::string& path) {
    Config c;
    if (path.empty()) return c;
    const nlohmann::json j = nlohmann::json::parse(read_file(path));
    Tolerances& t = tolerances();
    auto tol = [](double v, const char* name) {
        if (!(v > 0.0 && v < 1e-2)) throw Error(std::string("config: tolerance '") + name + "' must lie in (0, 1e-2)");
        return v;
    };
    if (j.contains("tolerances")) {
        const auto& tj = j["tolerances"];
        if (tj.contains("matrix")) t.matrix = tol(tj["matrix"].get<double>(), "matrix");
        if (tj.contains("residual")) t.residual = tol(tj["residual"].get<double>(), "residual");
    }
    auto positive = [](const nlohmann::json& v, const char* name) {
        const auto x = v.get<long long>();
        if (x <= 0) throw Error(std::string("config: '") + name + "' must be positive");
        return std::size_t(x);
    };
    if (j.contains("eig_cap")) t.eig_cap = positive(j["eig_cap"], "eig_cap");
    if (j.contains("dense_limit")) t.dense_limit = positive(j["dense_limit"], "dense_limit");
    if (j.contains("cap")) c.cap = positive(j["cap"], "cap");
    if (j.contains("format")) {
        c.format = j["format"].get<std::string>();
        if (c.format != "json" && c.format != "dot" && c.format != "text") throw Error("config: unknown format");
    }
    return c;
}

std::vector<double> lowest(const SparseHermitian& h, std::size_t k) {
    RVector ev = h.dim() <= tolerances().dense_limit ? hermitian_eigs(h.dense(), -1.0, false).eigenvalues
                                                     : smallest_eigs(h, std::min(k, h.dim())).eigenvalues;
    std::vector<double> out;
    for (Eigen::Index i = 0; i < ev.size() && out.size() < k; ++i) out.push_back(ev(i));
    return out;
}

int cmd_rules_parse(const std::string& file, bool do_export) {
    const Qts q = load_rules(file);
    if (do_export) {
        std::cout << export_rules(q);
        return kOk;
    }
    const Alphabet& a = q.alphabet();
    std::cout << "symbols " << a.size() << " (" << a.quantum_size() << " quantum), rules " << q.ts.rules.size()
              << ", locality " << locality(q.ts) << ", qudit dimension " << q.qudit_dim << "\n";
    return kOk;
}

int cmd_evolve(const std::string& file, const std::string& seed, std::size_t cap, bool dot, bool json) {
    const Qts q = load_rules(file);
    const EvolutionGraph ev = explore_evolution(q.ts, q.alphabet().parse(seed), cap);
    if (dot) {
        std::cout << evolution_to_dot(q.alphabet(), ev);
    } else if (json) {
        std::cout << evolution_to_json(q, ev) << "\n";
    } else {
        std::cout << "vertices " << ev.vertices.size() << ", edges " << ev.edges.size()
                  << (ev.capped ? " (capped)" : "") << "\n";
        for (const auto& v : ev.vertices) std::cout << q.alphabet().render(v) << "\n";
    }
    return ev.capped ? kFailed : kOk;
}

int cmd_spectrum(const std::string& file, const std::string& seed, std::size_t k, std::size_t cap) {
    const Qts q = load_rules(file);
    const EvolutionGraph ev = explore_evolution(q.ts, q.alphabet().parse(seed), cap);
    if (ev.capped) {
        std::cerr << "evolution capped at " << cap << " strings\n";
        return kFailed;
    }
    const auto vals = lowest(chain_block_hamiltonian(q, ev), k);
    nlohmann::json j{{"strings", ev.vertices.size()}, {"eigenvalues", vals}};
    std::cout << j.dump(2) << "\n";
    return kOk;
}

int cmd_ulg_check(const std::string& file) {
    const Ulg u = ulg_from_json(read_file(file));
    const SimplicityReport r = check_simple(u);
    nlohmann::json j{{"simple", r.simple}, {"max_deviation", r.max_deviation}};
    if (r.witness) {
        std::vector<std::string> cycle;
        for (auto v : r.witness->vertices) cycle.push_back(u.graph().id(v));
        j["witness_cycle"] = cycle;
        j["witness_deviation"] = r.witness->deviation;
    }
    std::cout << j.dump(2) << "\n";
    return r.simple ? kOk : kFailed;
}

int cmd_ulg_diagonalize(const std::string& file) {
    const Ulg u = ulg_from_json(read_file(file));
    if (!check_simple(u).simple) {
        std::cerr << "ULG is not simple\n";
        return kFailed;
    }
    const Diagonalizer d = diagonalize(u);
    const RVector lap = hermitian_eigs(laplacian(u.graph()).dense(), -1.0, false).eigenvalues;
    std::vector<double> spec(lap.data(), lap.data() + lap.size());
    std::vector<std::size_t> order = d.expansion_order;
    nlohmann::json j{{"laplacian_spectrum", spec},
                     {"multiplicity", u.vertex_dim()},
                     {"residual", d.residual},
                     {"expansion_order", order}};
    std::cout << j.dump(2) << "\n";
    return d.residual <= tolerances().residual ? kOk : kFailed;
}

std::vector<std::size_t> tape_symbols(const Tm& tm, const std::vector<std::string>& tape) {
    std::vector<std::size_t> out;
    for (const auto& s : tape) out.push_back(tm.symbol_index(s));
    return out;
}

int cmd_qrm_run(const std::string& file, std::size_t n, std::size_t steps, const std::string& bits,
                const std::vector<std::string>& tape) {
    const Tm tm = load_tm(file);
    std::vector<int> input;
    for (char c : bits) {
        if (c != '0' && c != '1') throw CLI::ValidationError("--input", "expects a string of 0 and 1");
        input.push_back(c - '0');
    }
    const HeadUnitary head = build_head(tm);
    const RingRun run = run_ring(head, n, input, steps, tape_symbols(tm, tape));
    std::cout << trace_json_lines(head, run);
    return kOk;
}

int cmd_qrm_difftest(const std::string& file, std::size_t n_min, std::size_t n_max, std::size_t steps) {
    const Tm tm = load_tm(file);
    for (const auto& v : validate(tm)) std::cerr << v.kind << ": " << v.detail << "\n";
    std::size_t runs = 0, failures = 0;
    const std::size_t k = tm.alphabet.size() - 1;
    for (std::size_t n = n_min; n <= n_max; ++n)
        for (std::size_t len = 0; len + 2 <= n && len <= 4; ++len) {
            std::size_t count = 1;
            for (std::size_t i = 0; i < len; ++i) count *= k;
            for (std::size_t c = 0; c < count; ++c) {
                std::vector<std::size_t> tape;
                for (std::size_t i = 0, x = c; i < len; ++i, x /= k) tape.push_back(1 + x % k);
                const DiffReport r = differential_test(tm, n, tape, steps);
                ++runs;
                if (!r.equal) {
                    ++failures;
                    std::cout << "n=" << n << " tape";
                    for (auto s : tape) std::cout << ' ' << tm.alphabet[s];
                    std::cout << ": " << r.detail << "\n";
                }
            }
        }
    std::cout << runs << " runs, " << failures << " mismatches\n";
    return failures ? kFailed : kOk;
}

int cmd_wheelbarrow_explore(std::size_t n, const std::vector<std::string>& ring, bool dot, std::size_t cap) {
    History h = ring.empty() ? explore_history(n, cap) : explore_history(n, ring, cap);
    if (dot)
        std::cout << evolution_to_dot(wheelbarrow().alphabet(), h.graph);
    else
        std::cout << history_report_json(h.report) << "\n";
    return h.report.capped ? kFailed : kOk;
}

nlohmann::json check_json(const PropertyCheck& c) {
    return {{"ok", c.ok}, {"detail", c.detail}, {"witnesses", c.witnesses}};
}

int cmd_wheelbarrow_verify(std::size_t n, std::size_t samples, unsigned seed) {
    const WProperties p = verify_w_properties(n, samples, seed);
    const History h = explore_history(n);
    nlohmann::json j{{"n", n},
                     {"W1", check_json(p.w1)},
                     {"W1_listed_heads", check_json(p.w1_def_heads)},
                     {"W2", check_json(p.w2)},
                     {"W3", check_json(p.w3)},
                     {"W4", check_json(p.w4)},
                     {"two_heads", check_json(p.two_heads)},
                     {"allowed_pairs", {{"literal_violations", h.report.literal_pair_violations},
                                        {"amended_violations", h.report.amended_pair_violations}}}};
    std::cout << j.dump(2) << "\n";
    const bool ok = p.w1.ok && p.w2.ok && p.w3.ok && p.w4.ok && p.two_heads.ok;
    return ok ? kOk : kFailed;
}

int cmd_wheelbarrow_rules(bool reduced) {
    const WheelbarrowSystem& w = wheelbarrow(reduced);
    std::cout << w.text;
    if (reduced) {
        std::cout << "\n# dropped by the merge:\n";
        for (const auto& d : w.dropped) std::cout << "#   " << d << "\n";
    }
    return kOk;
}

int cmd_hardness(std::size_t m, bool accepting, std::optional<double> p, std::optional<double> eps) {
    const PromiseGapReport r = promise_gap_report(m, {p, eps});
    std::cout << promise_gap_json(r) << "\n";
    const std::string kind = accepting ? "history-accepting" : "history-rejecting";
    for (const auto& b : r.blocks)
        if (b.kind == kind) return b.ok ? kOk : kFailed;
    return kFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wbench: workbench for quantum Thue systems, ring machines and Turing's Wheelbarrow"};
    app.require_subcommand(1);
    std::string config_path;
    std::size_t threads = 1;
    if (const char* env = std::getenv("WBENCH_CONFIG")) config_path = env;
    app.add_option("--config", config_path, "JSON config file (default: $WBENCH_CONFIG)");
    app.add_option("--threads", threads, "maximum worker threads")->check(CLI::PositiveNumber);

    auto* rules = app.add_subcommand("rules", "rule files")->require_subcommand(1);
    auto* rules_parse = rules->add_subcommand("parse", "parse and summarize a rule file");
    std::string file;
    bool do_export = false;
    rules_parse->add_option("file", file)->required();
    rules_parse->add_flag("--export", do_export, "print the normalized rule file");

    auto* evolve = app.add_subcommand("evolve", "explore the evolution of a seed string");
    std::string seed;
    std::size_t cap = 0;
    bool dot = false, json = false;
    evolve->add_option("file", file)->required();
    evolve->add_option("--seed", seed)->required();
    evolve->add_option("--cap", cap, "maximum number of strings");
    auto* dot_flag = evolve->add_flag("--dot", dot);
    evolve->add_flag("--json", json)->excludes(dot_flag);

    auto* spectrum = app.add_subcommand("spectrum", "lowest eigenvalues of the block Hamiltonian");
    std::size_t k = 6;
    spectrum->add_option("file", file)->required();
    spectrum->add_option("--seed", seed)->required();
    spectrum->add_option("-k", k)->check(CLI::PositiveNumber);
    spectrum->add_option("--cap", cap);

    auto* ulg = app.add_subcommand("ulg", "unitary labelled graphs (JSON files)")->require_subcommand(1);
    auto* ulg_check = ulg->add_subcommand("check-simple", "check cycle products");
    ulg_check->add_option("file", file)->required();
    auto* ulg_diag = ulg->add_subcommand("diagonalize", "semi-classical diagonalization");
    ulg_diag->add_option("file", file)->required();

    auto* qrm = app.add_subcommand("qrm", "quantum ring machine")->require_subcommand(1);
    auto* qrm_run = qrm->add_subcommand("run", "run the ring and print a JSON-lines trace");
    std::size_t n = 0, steps = 100, n_min = 4, n_max = 8;
    std::string bits;
    std::vector<std::string> tape;
    qrm_run->add_option("file", file)->required();
    qrm_run->add_option("-n", n, "ring size")->required();
    qrm_run->add_option("--steps", steps, "maximum head applications");
    qrm_run->add_option("--input", bits, "input qubits, e.g. 0110");
    qrm_run->add_option("--tape", tape, "classical tape symbols from cell 0");
    auto* qrm_diff = qrm->add_subcommand("difftest", "compare ring execution with direct simulation");
    qrm_diff->add_option("file", file)->required();
    qrm_diff->add_option("--min", n_min);
    qrm_diff->add_option("--max", n_max);
    qrm_diff->add_option("--steps", steps, "TM steps per run");

    auto* wb = app.add_subcommand("wheelbarrow", "the explicit 2-local rule system")->require_subcommand(1);
    auto* wb_explore = wb->add_subcommand("explore", "explore the history of a chain length");
    std::vector<std::string> ring;
    wb_explore->add_option("-n", n)->required();
    wb_explore->add_option("--ring", ring, "tape symbols in pick-up order (-:a, :0, :1)");
    wb_explore->add_flag("--dot", dot);
    wb_explore->add_option("--cap", cap);
    auto* wb_verify = wb->add_subcommand("verify", "check W1-W4 and the pair table");
    std::size_t samples = 20;
    unsigned rng_seed = 7;
    wb_verify->add_option("-n", n)->required();
    wb_verify->add_option("--samples", samples);
    wb_verify->add_option("--rng-seed", rng_seed);
    auto* wb_rules = wb->add_subcommand("rules", "print the rule file");
    bool reduced = false;
    wb_rules->add_flag("--reduced", reduced, "merged 39-symbol variant");
    auto* wb_lengths = wb->add_subcommand("lengths", "list valid chain lengths");
    std::size_t count = 5;
    wb_lengths->add_option("--count", count);

    auto* hardness = app.add_subcommand("hardness", "assembled Hamiltonian")->require_subcommand(1);
    auto* assemble_cmd = hardness->add_subcommand("assemble", "toy promise-gap report");
    bool accepting = false, rejecting = false;
    std::optional<double> p, eps;
    assemble_cmd->add_option("-n", n, "history size |M| of the toy instance")->required();
    auto* acc = assemble_cmd->add_flag("--accepting", accepting);
    auto* rej = assemble_cmd->add_flag("--rejecting", rejecting);
    acc->excludes(rej);
    assemble_cmd->add_option("-p", p, "penalty scale (default n^5)");
    assemble_cmd->add_option("--eps", eps, "error parameter (default |M|^-4)");

    auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
    std::vector<int> only;
    std::string data_dir = WBENCH_DATA_DIR;
    selftest->add_option("--only", only, "criterion numbers");
    selftest->add_option("--data", data_dir, "data directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    Config cfg;
    try {
        cfg = load_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (cap == 0) cap = cfg.cap;
        if (cfg.format == "json" && !dot) json = true;
        if (cfg.format == "dot" && !json) dot = true;
        if (rules_parse->parsed()) return cmd_rules_parse(file, do_export);
        if (evolve->parsed()) return cmd_evolve(file, seed, cap, dot, json);
        if (spectrum->parsed()) return cmd_spectrum(file, seed, k, cap);
        if (ulg_check->parsed()) return cmd_ulg_check(file);
        if (ulg_diag->parsed()) return cmd_ulg_diagonalize(file);
        if (qrm_run->parsed()) return cmd_qrm_run(file, n, steps, bits, tape);
        if (qrm_diff->parsed()) return cmd_qrm_difftest(file, n_min, n_max, steps);
        if (wb_explore->parsed()) return cmd_wheelbarrow_explore(n, ring, dot, cap);
        if (wb_verify->parsed()) return cmd_wheelbarrow_verify(n, samples, rng_seed);
        if (wb_rules->parsed()) return cmd_wheelbarrow_rules(reduced);
        if (wb_lengths->parsed()) {
            for (auto len : valid_lengths(count)) {
                const LengthPlan pl = length_plan(len);
                std::cout << len << "  m=" << pl.increments << "  program";
                for (const auto& d : pl.program) std::cout << ' ' << d;
                std::cout << "\n";
            }
            return kOk;
        }
        if (assemble_cmd->parsed()) {
            if (!accepting && !rejecting) {
                std::cerr << "hardness assemble: choose --accepting or --rejecting\n";
                return kUsage;
            }
            return cmd_hardness(n, accepting, p, eps);
        }
        if (selftest->parsed()) {
            const auto results = run_acceptance(std::cout, only, data_dir);
            for (const auto& r : results)
                if (!r.pass) return kFailed;
            return kOk;
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailed;
    }
    return kUsage;
}
