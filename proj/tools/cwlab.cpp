// cwlab: verify, expand, scale, search, bound and compose weighing
// strategies for the fake+chameleon coin problem.
//
// Exit codes: 0 = success / valid verdict, 1 = invalid / not-found verdict,
// 2 = usage, parse, or I/O error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cwlab/bounds.hpp"
#include "cwlab/codec.hpp"
#include "cwlab/scaling.hpp"
#include "cwlab/search.hpp"
#include "cwlab/verify.hpp"

namespace {

using nlohmann::json;
using namespace cwlab;

constexpr const char* kCliSchema = "cwlab-cli/1";

struct CliError : std::runtime_error {
    int code;
    CliError(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError(2, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError(2, "cannot write " + path);
    out << content;
}

std::string fnv1a64(const std::string& bytes) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct LoadedTree {
    StrategyTree tree;
    std::string digest;
    std::vector<std::string> warnings;
};

// Text fixtures do not carry N; it is required or inferred (with a warning)
// as the largest coin id.  Interchange files (.json) carry it themselves.
LoadedTree load_tree(const std::string& path, std::optional<int> coins) {
    LoadedTree out;
    std::string body = read_file(path);
    out.digest = fnv1a64(body);
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
        out.tree = parse_interchange(json::parse(body));
        return out;
    }
    int n = 0;
    if (coins) {
        n = *coins;
    } else {
        // Infer from the text: widest coin id anywhere.
        std::istringstream ss(body);
        std::string tok;
        // Parse once with a generous bound to find the max coin, then re-parse.
        StrategyTree probe = parse(body, 4096, nullptr);
        std::function<int(const NodePtr&)> max_coin = [&](const NodePtr& node) {
            if (!node->is_decision()) {
                int m = 0;
                for (Coin c : node->leaf->coins) m = std::max(m, c);
                return m;
            }
            int m = node->weighing->max_coin();
            for (const auto& k : node->children) m = std::max(m, max_coin(k));
            return m;
        };
        n = max_coin(probe.root);
        out.warnings.push_back("--coins not given; inferred N=" + std::to_string(n) +
                               " from the largest coin id");
    }
    out.tree = parse(body, n, &out.warnings);
    return out;
}

json verify_report_json(const VerificationReport& r) {
    json j;
    j["valid"] = r.valid;
    j["mode"] = to_string(r.mode);
    j["max_depth"] = r.max_depth;
    auto violation_json = [](const Violation& v) {
        json e;
        e["path"] = path_to_string(v.path);
        e["leaf"] = v.leaf.to_string();
        e["reason"] = v.reason;
        json wit = json::array();
        for (auto [f, c] : v.witness_pairs) wit.push_back({{"fake", f}, {"chameleon", c}});
        e["witnesses"] = std::move(wit);
        return e;
    };
    j["violations"] = json::array();
    for (const auto& v : r.violations) j["violations"].push_back(violation_json(v));
    j["dead_leaves"] = json::array();
    for (const auto& p : r.dead_leaves) j["dead_leaves"].push_back(path_to_string(p));
    j["chameleon_in_set_warnings"] = json::array();
    for (const auto& v : r.cham_in_set_warnings)
        j["chameleon_in_set_warnings"].push_back(violation_json(v));
    return j;
}

void print_report_text(const VerificationReport& r, const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cout << "warning: " << w << "\n";
    std::cout << r.summary() << "\n";
    for (const auto& v : r.violations) {
        std::cout << "  violation at " << path_to_string(v.path) << " leaf " << v.leaf.to_string()
                  << ": " << v.reason;
        if (!v.witness_pairs.empty())
            std::cout << " (fake " << v.witness_pairs[0].first << ", chameleon "
                      << v.witness_pairs[0].second << ")";
        std::cout << "\n";
    }
    for (const auto& v : r.cham_in_set_warnings)
        std::cout << "  note: " << path_to_string(v.path) << " " << v.leaf.to_string()
                  << ": a consistent chameleon sits inside the set\n";
    for (const auto& p : r.dead_leaves)
        std::cout << "  dead leaf at " << path_to_string(p) << "\n";
}

int cmd_verify(const std::string& file, std::optional<int> coins, const std::string& mode,
               bool as_json) {
    LoadedTree in = load_tree(file, coins);
    VerifyMode vm = mode == "ff" ? VerifyMode::FF
                    : mode == "pseudo" ? VerifyMode::Pseudo
                                       : VerifyMode::FC;
    VerificationReport report = verify(in.tree, vm);
    if (as_json) {
        json j;
        j["schema"] = kCliSchema;
        j["command"] = "verify";
        j["input_digest"] = "fnv1a64:" + in.digest;
        j["warnings"] = in.warnings;
        j["report"] = verify_report_json(report);
        std::cout << j.dump(2) << "\n";
    } else {
        print_report_text(report, in.warnings);
    }
    return report.valid ? 0 : 1;
}

int cmd_expand(const std::string& file, std::optional<int> coins, bool as_json,
               const std::string& out_base) {
    LoadedTree in = load_tree(file, coins);
    std::string text = serialize_text(in.tree);
    json doc = serialize_interchange(in.tree);
    if (!out_base.empty()) {
        write_file(out_base + ".txt", text);
        write_file(out_base + ".json", doc.dump(2) + "\n");
    }
    if (as_json) {
        json j;
        j["schema"] = kCliSchema;
        j["command"] = "expand";
        j["input_digest"] = "fnv1a64:" + in.digest;
        j["warnings"] = in.warnings;
        j["tree"] = doc;
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& w : in.warnings) std::cout << "warning: " << w << "\n";
        std::cout << text;
    }
    return 0;
}

int cmd_scale(const std::string& file, std::optional<int> coins, int times, bool allow_depth3,
              bool as_json, const std::string& out_base) {
    LoadedTree in = load_tree(file, coins);
    StrategyTree current = in.tree;
    int last_completion_depth = 0;
    for (int i = 0; i < times; ++i) {
        ScaleResult r = scale_once(current, allow_depth3);
        current = r.tree;
        last_completion_depth = r.completion_depth_used;
    }
    VerificationReport report = verify_fc(current);
    std::string text = serialize_text(current);
    if (!out_base.empty()) {
        write_file(out_base + ".txt", text);
        write_file(out_base + ".json", serialize_interchange(current).dump(2) + "\n");
    }
    if (as_json) {
        json j;
        j["schema"] = kCliSchema;
        j["command"] = "scale";
        j["input_digest"] = "fnv1a64:" + in.digest;
        j["times"] = times;
        j["n_coins"] = current.n_coins;
        j["depth"] = depth(current);
        j["completion_depth_used"] = last_completion_depth;
        j["valid"] = report.valid;
        j["tree"] = serialize_interchange(current);
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& w : in.warnings) std::cout << "warning: " << w << "\n";
        std::cout << "scaled to (" << depth(current) << "," << current.n_coins << "); "
                  << report.summary() << "\n";
        if (out_base.empty()) std::cout << text;
    }
    return report.valid ? 0 : 1;
}

int cmd_is_scalable(const std::string& file, std::optional<int> coins, bool as_json) {
    LoadedTree in = load_tree(file, coins);
    ScalabilityReport rep = is_scalable(in.tree);
    if (as_json) {
        json j;
        j["schema"] = kCliSchema;
        j["command"] = "scalable";
        j["input_digest"] = "fnv1a64:" + in.digest;
        j["scalable"] = rep.scalable;
        auto entry_json = [](const ScalabilityEntry& e) {
            return json{{"line", e.line},
                        {"path", path_to_string(e.path)},
                        {"leaf", e.leaf.to_string()},
                        {"reason", e.reason}};
        };
        j["blocking"] = json::array();
        for (const auto& e : rep.blocking) j["blocking"].push_back(entry_json(e));
        j["always_together"] = json::array();
        for (const auto& e : rep.always_together) j["always_together"].push_back(entry_json(e));
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << (rep.scalable ? "scalable" : "not scalable") << "\n";
        for (const auto& e : rep.blocking)
            std::cout << "  blocking line " << e.line << " " << e.leaf.to_string() << " at "
                      << path_to_string(e.path) << ": " << e.reason << "\n";
        for (const auto& e : rep.always_together)
            std::cout << "  note line " << e.line << " " << e.leaf.to_string() << ": " << e.reason
                      << "\n";
    }
    return rep.scalable ? 0 : 1;
}

int cmd_search(int weighings, int coins, const std::string& mode, const std::string& order,
               uint64_t budget_nodes, double budget_seconds, bool no_prune, bool no_symmetry,
               bool as_json) {
    SearchConfig cfg;
    cfg.weighings = weighings;
    cfg.coins = coins;
    cfg.mode = mode == "scalable" ? SearchMode::ScalableSolution
               : mode == "pseudo" ? SearchMode::PseudoSolution
                                  : SearchMode::Solution;
    cfg.order = order == "guided" ? engine::Order::Guided : engine::Order::Canonical;
    if (no_prune) cfg.prune = {false, false, false};
    cfg.symmetry_reduction = !no_symmetry;
    cfg.node_budget = budget_nodes;
    cfg.time_budget_seconds = budget_seconds;

    SearchOutcome res = search_exists(cfg);
    if (as_json) {
        json j;
        j["schema"] = kCliSchema;
        j["command"] = "search";
        j["weighings"] = weighings;
        j["coins"] = coins;
        j["mode"] = mode;
        j["verdict"] = to_string(res.verdict);
        j["nodes_explored"] = res.nodes_explored;
        j["elapsed_seconds"] = res.elapsed.count();
        if (res.witness) j["witness"] = serialize_interchange(*res.witness);
        if (!res.frontier_summary.empty()) j["frontier"] = res.frontier_summary;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << to_string(res.verdict) << " (nodes " << res.nodes_explored << ", "
                  << res.elapsed.count() << "s)\n";
        if (res.witness) std::cout << serialize_text(*res.witness);
        if (!res.frontier_summary.empty()) std::cout << res.frontier_summary << "\n";
    }
    return res.found() ? 0 : 1;
}

int cmd_bounds(int max_w, int max_n, bool as_csv, bool as_json) {
    BoundsTable t = emit_tables(max_w, max_n);
    if (as_json) {
        json j;
        j["schema"] = kCliSchema;
        j["command"] = "bounds";
        j["by_w"] = json::array();
        for (const auto& r : t.by_w) {
            json e{{"w", r.w},
                   {"itb", r.itb},
                   {"induced_scalable", r.induced_scalable},
                   {"scalable_itb", r.scalable_itb},
                   {"found_via", r.found_via}};
            if (r.found) e["found"] = *r.found;
            j["by_w"].push_back(std::move(e));
        }
        j["by_n"] = json::array();
        for (const auto& r : t.by_n) {
            json e{{"n", r.n}, {"fc_lower", r.fc_lower}, {"fc_upper", r.fc_upper}};
            if (r.fc_exact) e["fc_exact"] = {{"lo", r.fc_exact->lo}, {"hi", r.fc_exact->hi}};
            j["by_n"].push_back(std::move(e));
        }
        std::cout << j.dump(2) << "\n";
    } else if (as_csv) {
        std::cout << render_w_table_csv(t) << "\n" << render_n_table_csv(t);
    } else {
        std::cout << render_w_table_text(t) << "\n" << render_n_table_text(t);
    }
    return 0;
}

// Constructive composition: run a K-group strategy on groups of size a,
// then finish the surviving 2a+r coins with a second strategy.
StrategyTree witness_for(int n) {
    static std::map<int, StrategyTree> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (n > 11)
        throw CliError(1, "compose needs a witness for " + std::to_string(n) +
                              " coins; only sizes up to 11 are searched");
    auto exact = fc_exact(n);
    SearchConfig cfg;
    cfg.coins = n;
    cfg.weighings = exact->hi;
    cfg.order = engine::Order::Guided;
    for (SearchMode mode : {SearchMode::ScalableSolution, SearchMode::Solution}) {
        cfg.mode = mode;
        SearchOutcome res = search_exists(cfg);
        if (res.found()) {
            cache.emplace(n, *res.witness);
            return *res.witness;
        }
    }
    throw CliError(1, "no witness found for " + std::to_string(n) + " coins");
}

int cmd_compose(int n, int a, bool as_json) {
    if (a < 2 || n < 2 * a) throw CliError(2, "need a >= 2 and N >= 2a");
    int k = n / a, r = n % a;
    auto [klo, khi] = fc_bounds(k);
    auto [slo, shi] = fc_bounds(2 * a + r);
    int bound = khi + shi;

    StrategyTree stage1 = witness_for(k);
    StrategyTree stage2 = witness_for(2 * a + r);

    auto group_coins = [&](int g) {  // groups are 1-based
        std::vector<Coin> out;
        for (int i = 0; i < a; ++i) out.push_back((g - 1) * a + i + 1);
        return out;
    };
    std::vector<Coin> leftover;
    for (int i = k * a + 1; i <= n; ++i) leftover.push_back(i);

    std::function<NodePtr(const NodePtr&)> build = [&](const NodePtr& node) -> NodePtr {
        if (node->is_decision()) {
            std::vector<Coin> left, right;
            for (Coin g : node->weighing->left)
                for (Coin c : group_coins(g)) left.push_back(c);
            for (Coin g : node->weighing->right)
                for (Coin c : group_coins(g)) right.push_back(c);
            std::array<NodePtr, 3> kids;
            for (int i = 0; i < 3; ++i) kids[i] = build(node->children[i]);
            return Node::decision(Weighing(std::move(left), std::move(right)), std::move(kids));
        }
        // Pick the 2a+r coins the second stage runs on.
        std::vector<int> groups;
        for (Coin g : node->leaf->coins) groups.push_back(g);
        for (int g = 1; static_cast<int>(groups.size()) < 2 && g <= k; ++g)
            if (std::find(groups.begin(), groups.end(), g) == groups.end()) groups.push_back(g);
        std::vector<Coin> coins;
        for (int g : groups)
            for (Coin c : group_coins(g)) coins.push_back(c);
        coins.insert(coins.end(), leftover.begin(), leftover.end());
        std::sort(coins.begin(), coins.end());
        std::vector<Coin> map(static_cast<size_t>(stage2.n_coins) + 1, 0);
        for (size_t i = 0; i < coins.size(); ++i) map[i + 1] = coins[i];
        return relabel(stage2.root, map);
    };

    StrategyTree composed{n, build(stage1.root)};
    VerificationReport report = verify_fc(composed);
    if (as_json) {
        json j;
        j["schema"] = kCliSchema;
        j["command"] = "compose";
        j["coins"] = n;
        j["group_size"] = a;
        j["groups"] = k;
        j["leftover"] = r;
        j["numeric_bound"] = bound;
        j["valid"] = report.valid;
        j["depth"] = depth(composed);
        j["report"] = verify_report_json(report);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "FC(" << n << ") <= FC(" << k << ") + FC(" << 2 * a + r
                  << ") = " << khi << " + " << shi << " = " << bound << "\n";
        std::cout << "constructive composition depth " << depth(composed) << ": "
                  << report.summary() << "\n";
        if (!report.valid && !report.violations.empty()) {
            const auto& v = report.violations[0];
            std::cout << "  first violation at " << path_to_string(v.path) << " leaf "
                      << v.leaf.to_string() << "\n";
        }
    }
    return report.valid ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coin-weighing lab for the fake+chameleon problem"};
    app.require_subcommand(1);

    std::string file, mode = "fc", order = "canonical", out_base;
    std::optional<int> coins;
    bool as_json = false, as_csv = false, allow_depth3 = false;
    bool no_prune = false, no_symmetry = false;
    int weighings = 0, coins_flag = 0, times = 1, max_w = 10, max_n = 62, group_size = 3;
    uint64_t budget_nodes = 0;
    double budget_seconds = 0;

    auto add_tree_opts = [&](CLI::App* cmd) {
        cmd->add_option("file", file, "strategy file (.txt pseudo-code or .json interchange)")
            ->required();
        cmd->add_option("--coins", coins, "number of coins N (inferred if omitted)");
        cmd->add_flag("--json", as_json, "JSON output");
    };

    auto* verify_cmd = app.add_subcommand("verify", "check a strategy file");
    add_tree_opts(verify_cmd);
    verify_cmd->add_option("--mode", mode, "fc | ff | pseudo")->default_str("fc");

    auto* expand_cmd = app.add_subcommand("expand", "expand sym lines; re-serialize");
    add_tree_opts(expand_cmd);
    expand_cmd->add_option("--out", out_base, "write <out>.txt and <out>.json");

    auto* scalable_cmd = app.add_subcommand("scalable", "report the scalability classification");
    add_tree_opts(scalable_cmd);

    auto* scale_cmd = app.add_subcommand("scale", "triple the coins and complete the leaves");
    add_tree_opts(scale_cmd);
    scale_cmd->add_option("--times", times, "number of scalings")->default_val(1);
    scale_cmd->add_flag("--allow-depth3", allow_depth3, "allow three-weighing completions");
    scale_cmd->add_option("--out", out_base, "write <out>.txt and <out>.json");

    auto* search_cmd = app.add_subcommand("search", "exhaustive (w,N) search");
    search_cmd->add_option("--weighings,-w", weighings, "number of weighings")->required();
    search_cmd->add_option("--coins,-n", coins_flag, "number of coins")->required();
    search_cmd->add_option("--mode", mode, "solution | scalable | pseudo")
        ->default_str("solution");
    search_cmd->add_option("--order", order, "canonical | guided")->default_str("canonical");
    search_cmd->add_option("--budget-nodes", budget_nodes, "node budget (0 = unlimited)");
    search_cmd->add_option("--budget-seconds", budget_seconds, "time budget (0 = unlimited)");
    search_cmd->add_flag("--no-prune", no_prune, "disable all pruning");
    search_cmd->add_flag("--no-symmetry", no_symmetry, "disable symmetry reduction");
    search_cmd->add_flag("--json", as_json, "JSON output");

    auto* bounds_cmd = app.add_subcommand("bounds", "bound tables");
    bounds_cmd->add_option("--max-w", max_w, "rows for w = 1..max_w")->default_val(10);
    bounds_cmd->add_option("--max-n", max_n, "rows for N = 2..max_n")->default_val(62);
    bounds_cmd->add_flag("--csv", as_csv, "CSV output");
    bounds_cmd->add_flag("--json", as_json, "JSON output");

    auto* compose_cmd = app.add_subcommand("compose", "group composition for any N");
    compose_cmd->add_option("--coins,-n", coins_flag, "number of coins")->required();
    compose_cmd->add_option("--group-size,-a", group_size, "coins per group")->default_val(3);
    compose_cmd->add_flag("--json", as_json, "JSON output");

    try {
        app.parse(argc, argv);
        if (*verify_cmd) return cmd_verify(file, coins, mode, as_json);
        if (*expand_cmd) return cmd_expand(file, coins, as_json, out_base);
        if (*scalable_cmd) return cmd_is_scalable(file, coins, as_json);
        if (*scale_cmd) return cmd_scale(file, coins, times, allow_depth3, as_json, out_base);
        if (*search_cmd)
            return cmd_search(weighings, coins_flag, mode, order, budget_nodes, budget_seconds,
                              no_prune, no_symmetry, as_json);
        if (*bounds_cmd) return cmd_bounds(max_w, max_n, as_csv, as_json);
        if (*compose_cmd) return cmd_compose(coins_flag, group_size, as_json);
        return 2;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const CompletionNotFound& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "json error: " << e.what() << "\n";
        return 2;
    } catch (const TreeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
