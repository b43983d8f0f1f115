#pragma once

// Exhaustive search for (w,N)-solutions, scalable solutions and
// pseudo-solutions, plus the explicit constructions: the classic
// light-fake routine and the 3^n-coins-in-2n-weighings family.

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "cwlab/engine.hpp"
#include "cwlab/scaling.hpp"
#include "cwlab/verify.hpp"

namespace cwlab {

struct InfeasibleDepthError : TreeError {
    using TreeError::TreeError;
};

struct TooManyCoinsError : TreeError {
    using TreeError::TreeError;
};

using SearchMode = engine::Mode;

struct SearchConfig {
    int weighings = 0;
    int coins = 0;
    SearchMode mode = SearchMode::Solution;
    engine::PruneFlags prune;
    engine::Order order = engine::Order::Canonical;
    bool symmetry_reduction = true;
    uint64_t node_budget = 0;                  // 0 = unlimited
    double time_budget_seconds = 0.0;          // 0 = unlimited
    engine::ProgressFn progress;               // periodic nodes/depth/prefix reports
};

struct SearchOutcome {
    enum class Verdict { Found, ExhaustedNoSolution, BudgetExceeded };
    Verdict verdict = Verdict::ExhaustedNoSolution;
    std::optional<StrategyTree> witness;
    uint64_t nodes_explored = 0;
    std::chrono::duration<double> elapsed{};
    std::string frontier_summary;

    bool found() const { return verdict == Verdict::Found; }
};

inline const char* to_string(SearchOutcome::Verdict v) {
    switch (v) {
        case SearchOutcome::Verdict::Found: return "found";
        case SearchOutcome::Verdict::ExhaustedNoSolution: return "no solution";
        case SearchOutcome::Verdict::BudgetExceeded: return "budget exceeded";
    }
    return "?";
}

// Depth-first AND/OR search over pair states, one candidate weighing per
// interchangeable-coin class composition.  Found witnesses re-verify under
// the requested mode before being returned.
inline SearchOutcome search_exists(const SearchConfig& config) {
    if (config.coins < 2 || config.coins > engine::kMaxCoins)
        throw TreeError("search supports 2.." + std::to_string(engine::kMaxCoins) + " coins");
    if (config.weighings < 0) throw TreeError("weighings must be >= 0");

    engine::Config cfg;
    cfg.mode = config.mode;
    cfg.prune = config.prune;
    cfg.order = config.order;
    cfg.symmetry_reduction = config.symmetry_reduction;
    cfg.pool = (config.coins == 32) ? ~0u : ((1u << config.coins) - 1);
    cfg.node_budget = config.node_budget;
    cfg.progress = config.progress;
    if (config.time_budget_seconds > 0)
        cfg.time_budget = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
            std::chrono::duration<double>(config.time_budget_seconds));

    auto t0 = std::chrono::steady_clock::now();
    uint32_t all_loops = cfg.pool;
    auto res = engine::solve(engine::SmallState::full(config.coins), all_loops,
                             config.weighings, cfg);
    SearchOutcome out;
    out.nodes_explored = res.stats.nodes;
    out.elapsed = std::chrono::steady_clock::now() - t0;
    switch (res.verdict) {
        case engine::Verdict::Found: {
            out.verdict = SearchOutcome::Verdict::Found;
            out.witness = StrategyTree{config.coins, res.tree};
            VerificationReport check =
                config.mode == SearchMode::PseudoSolution ? verify_pseudo(*out.witness)
                                                          : verify_fc(*out.witness);
            if (!check.valid)
                throw TreeError("internal error: search witness failed verification");
            if (config.mode == SearchMode::ScalableSolution &&
                !is_scalable(*out.witness).scalable)
                throw TreeError("internal error: search witness is not scalable");
            break;
        }
        case engine::Verdict::Exhausted:
            out.verdict = SearchOutcome::Verdict::ExhaustedNoSolution;
            break;
        case engine::Verdict::Budget:
            out.verdict = SearchOutcome::Verdict::BudgetExceeded;
            out.frontier_summary = "explored " + std::to_string(res.stats.nodes) +
                                   " nodes without settling (w=" +
                                   std::to_string(config.weighings) +
                                   ", N=" + std::to_string(config.coins) + ")";
            break;
    }
    return out;
}

// Largest N solvable with w weighings, by ascending N until exhaustion.
// Depths above the feasibility ceiling need an explicit override.
inline std::pair<int, StrategyTree> search_best(int w, SearchConfig config = {},
                                                int feasibility_ceiling = 4) {
    if (w > feasibility_ceiling)
        throw InfeasibleDepthError("depth " + std::to_string(w) +
                                   " exceeds the feasibility ceiling; raise it explicitly");
    std::optional<StrategyTree> best;
    int best_n = 0;
    for (int n = 2; n <= engine::kMaxCoins; ++n) {
        config.weighings = w;
        config.coins = n;
        SearchOutcome res = search_exists(config);
        if (res.verdict == SearchOutcome::Verdict::BudgetExceeded)
            throw TreeError("budget exceeded while settling N(" + std::to_string(w) + ")");
        if (!res.found()) break;
        best = res.witness;
        best_n = n;
    }
    if (!best) throw TreeError("no solution found for any N >= 2");
    return {best_n, *best};
}

// ---------------------------------------------------------------------------
// Classic light-fake routine

namespace detail {

// Ternary split over a candidate set known to hold the one light fake, with
// no chameleon among the candidates.  `emit` builds each leaf from the
// narrowed candidate set (possibly empty on uneven splits).
inline NodePtr classic_split(const std::vector<Coin>& candidates, int w, int output_size,
                             const std::function<NodePtr(const std::vector<Coin>&)>& emit) {
    if (static_cast<int>(candidates.size()) <= output_size) return emit(candidates);
    if (w == 0)
        throw TooManyCoinsError("classic routine out of weighings for " +
                                std::to_string(candidates.size()) + " candidates");
    int64_t cap = output_size * engine::pow3(w - 1);
    int64_t size = static_cast<int>(candidates.size());
    if (size > 3 * cap)
        throw TooManyCoinsError(std::to_string(size) + " candidates exceed " +
                                std::to_string(3 * cap) + " for the remaining weighings");
    int k = static_cast<int>(std::max<int64_t>(1, (size - cap + 1) / 2));
    std::vector<Coin> left(candidates.begin(), candidates.begin() + k);
    std::vector<Coin> right(candidates.begin() + k, candidates.begin() + 2 * k);
    std::vector<Coin> rest(candidates.begin() + 2 * k, candidates.end());
    return Node::decision(Weighing(left, right),
                          {classic_split(rest, w - 1, output_size, emit),
                           classic_split(left, w - 1, output_size, emit),
                           classic_split(right, w - 1, output_size, emit)});
}

inline NodePtr classic_leaf(const std::vector<Coin>& candidates) {
    if (candidates.empty()) return Node::terminal(Leaf::impossible());
    if (candidates.size() == 1) return Node::terminal(Leaf::output1(candidates[0]));
    return Node::terminal(Leaf::output2(candidates[0], candidates[1]));
}

}  // namespace detail

// Standard ternary search for one light fake among `coins` (no chameleon
// there); every leaf narrows to at most `output_size` candidates.
inline NodePtr classic_fake_tree(const std::vector<Coin>& coins, int w, int output_size) {
    if (output_size != 1 && output_size != 2)
        throw TreeError("output_size must be 1 or 2");
    if (coins.empty()) throw TreeError("classic routine needs candidates");
    if (static_cast<int64_t>(coins.size()) > output_size * engine::pow3(w))
        throw TooManyCoinsError(std::to_string(coins.size()) + " candidates exceed " +
                                std::to_string(output_size * engine::pow3(w)) + " at depth " +
                                std::to_string(w));
    return detail::classic_split(coins, w, output_size, detail::classic_leaf);
}

// ---------------------------------------------------------------------------
// The (2n, 3^n) construction

namespace detail {

// Chain: resolve one pile as if it held the fake, then the other; output the
// two candidates.
inline NodePtr two_pile_tree(const std::vector<Coin>& first, const std::vector<Coin>& second,
                             int w_each) {
    return classic_split(first, w_each, 1, [&](const std::vector<Coin>& a) {
        if (a.empty()) return Node::terminal(Leaf::impossible());
        Coin a0 = a[0];
        return classic_split(second, w_each, 1, [&](const std::vector<Coin>& b) {
            if (b.empty()) return Node::terminal(Leaf::impossible());
            return Node::terminal(Leaf::output2(a0, b[0]));
        });
    });
}

inline NodePtr power_node(int n, const std::vector<Coin>& coins) {
    if (n == 1) {
        Coin c1 = coins[0], c2 = coins[1], c3 = coins[2];
        NodePtr balanced = Node::decision(
            Weighing({c1}, {c3}),
            {Node::terminal(Leaf::output2(c2, c3)), Node::terminal(Leaf::output2(c1, c2)),
             Node::terminal(Leaf::output1(c3))});
        NodePtr left = Node::decision(
            Weighing({c1}, {c3}),
            {Node::terminal(Leaf::output2(c1, c3)), Node::terminal(Leaf::output1(c1)),
             Node::terminal(Leaf::output1(c3))});
        NodePtr right = Node::decision(
            Weighing({c2}, {c3}),
            {Node::terminal(Leaf::output2(c2, c3)), Node::terminal(Leaf::output1(c2)),
             Node::terminal(Leaf::output1(c3))});
        return Node::decision(Weighing({c1}, {c2}), {balanced, left, right});
    }
    const size_t m = coins.size() / 3;
    std::vector<Coin> x1(coins.begin(), coins.begin() + m);
    std::vector<Coin> x2(coins.begin() + m, coins.begin() + 2 * m);
    std::vector<Coin> x3(coins.begin() + 2 * m, coins.end());

    // X1 = X2 branch.
    std::vector<Coin> x23 = x2;
    x23.insert(x23.end(), x3.begin(), x3.end());
    NodePtr bal = Node::decision(Weighing(x1, x3),
                                 {classic_split(x23, n - 1, 2, classic_leaf),  // fake in X2+X3
                                  two_pile_tree(x1, x2, n - 1),                // one in each
                                  power_node(n - 1, x3)});                     // fake in X3

    // X1 < X2 branch.
    NodePtr left = Node::decision(Weighing(x1, x3),
                                  {two_pile_tree(x1, x3, n - 1),               // one in X1, X3
                                   power_node(n - 1, x1),                      // fake in X1
                                   classic_split(x3, n - 1, 1, classic_leaf)});  // fake in X3

    // X1 > X2 is the mirror of X1 < X2 under the positional pan swap.
    Coin max_coin = *std::max_element(coins.begin(), coins.end());
    std::vector<Coin> swap(static_cast<size_t>(max_coin) + 1);
    for (Coin c = 0; c <= max_coin; ++c) swap[c] = c;
    for (size_t i = 0; i < m; ++i) {
        swap[x1[i]] = x2[i];
        swap[x2[i]] = x1[i];
    }
    NodePtr right = relabel(left, swap);

    return Node::decision(Weighing(x1, x2), {bal, left, right});
}

}  // namespace detail

// The recursive (2n, 3^n) family; verifies valid and scalable.
inline StrategyTree generate_power_solution(int n) {
    if (n < 1 || n > 5) throw TreeError("power construction supports n in 1..5");
    int coins = static_cast<int>(engine::pow3(n));
    std::vector<Coin> ids(coins);
    for (int i = 0; i < coins; ++i) ids[i] = i + 1;
    return StrategyTree{coins, detail::power_node(n, ids)};
}

}  // namespace cwlab
