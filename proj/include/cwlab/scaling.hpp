#pragma once

// Scaling: replace every coin by a triple, replay the weighings on triples,
// then finish each leaf with at most two (or three) extra weighings found by
// exhaustive search over the coins that still matter there.
//
// A solution is "scalable" when two extra weighings always suffice.  The
// syntactic test below works per reachable two-coin leaf (a,b): scaling is
// blocked exactly when the pair survives in both orders (a double edge) and
// the all-light trace of a or b is still alive (a loop), since the scaled
// leaf then has more than nine distinguishable cases.

#include <atomic>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "cwlab/engine.hpp"
#include "cwlab/verify.hpp"

namespace cwlab {

struct InvalidInputError : TreeError {
    using TreeError::TreeError;
};

struct CompletionNotFound : TreeError {
    Path path;
    explicit CompletionNotFound(Path p, const std::string& what)
        : TreeError("no completion for leaf at path " + path_to_string(p) + ": " + what),
          path(std::move(p)) {}
};

// ---------------------------------------------------------------------------
// Scalability test

struct ScalabilityEntry {
    long long line = 0;  // canonical number of the decision line holding the leaf
    Path path;
    Leaf leaf;
    std::string reason;
};

struct ScalabilityReport {
    bool scalable = false;
    // Leaves that genuinely block a two-weighing completion.
    std::vector<ScalabilityEntry> blocking;
    // Leaves whose output coins never separate on the scale along the path
    // (the looser rule of thumb); reported for diagnosis only.
    std::vector<ScalabilityEntry> always_together;
};

namespace detail {

struct ScalabilityWalker {
    int n = 0;
    ScalabilityReport report;
    std::vector<const Weighing*> weighings;
    Path outcomes;

    void leaf_checks(const PairState& state, const std::vector<uint8_t>& loops, const Leaf& leaf,
                     long long line) {
        if (leaf.kind != LeafKind::Output2 || state.empty()) return;
        Coin a = leaf.coins[0], b = leaf.coins[1];

        bool double_edge = state.contains(a, b) && state.contains(b, a);
        if (double_edge && (loops[a] || loops[b]))
            report.blocking.push_back(
                {line, outcomes, leaf,
                 "pair (" + std::to_string(a) + "," + std::to_string(b) +
                     ") survives in both orders and a same-group trace is alive"});

        bool a_on = false, b_on = false, separated = false;
        for (const Weighing* w : weighings) {
            Zone za = w->zone(a), zb = w->zone(b);
            if (za != Zone::Off) a_on = true;
            if (zb != Zone::Off) b_on = true;
            if (za != zb) separated = true;
        }
        if (!(a_on && b_on && separated))
            report.always_together.push_back(
                {line, outcomes, leaf,
                 "output coins " + std::to_string(a) + "," + std::to_string(b) +
                     " never separate on the scale"});
    }

    // Leaf diagnostics carry the line of the decision node the leaf hangs
    // off, matching how the text format attributes outputs to lines.
    void run(const StrategyTree& t) {
        n = t.n_coins;
        if (!t.root->is_decision()) {
            leaf_checks(PairState::full(n), std::vector<uint8_t>(n + 1, 1), *t.root->leaf, 0);
            return;
        }
        // Children of line L live on lines 3L+1..3L+3; the leaf actions of
        // line L are attributed to L itself.
        std::function<void(const NodePtr&, const PairState&, std::vector<uint8_t>, long long)>
            rec = [&](const NodePtr& node, const PairState& state, std::vector<uint8_t> loops,
                      long long line) {
                const Weighing& w = *node->weighing;
                weighings.push_back(&w);
                for (int i = 0; i < 3; ++i) {
                    Outcome o = kAllOutcomes[i];
                    std::vector<uint8_t> child_loops = filter_group_traces(loops, w, o, n);
                    PairState child = filter_state(state, w, o);
                    outcomes.push_back(o);
                    if (node->children[i]->is_decision())
                        rec(node->children[i], child, std::move(child_loops), 3 * line + 1 + i);
                    else
                        leaf_checks(child, child_loops, *node->children[i]->leaf, line);
                    outcomes.pop_back();
                }
                weighings.pop_back();
            };
        rec(t.root, PairState::full(n), std::vector<uint8_t>(n + 1, 1), 0);
    }
};

}  // namespace detail

// Decide scalability of a verified FC solution.  Throws InvalidInputError
// when the tree does not verify.
inline ScalabilityReport is_scalable(const StrategyTree& t) {
    auto fc = verify_fc(t);
    if (!fc.valid) throw InvalidInputError("is_scalable needs a verified FC solution");
    detail::ScalabilityWalker walker;
    walker.run(t);
    walker.report.scalable = walker.report.blocking.empty();
    return walker.report;
}

// ---------------------------------------------------------------------------
// Scaling proper

struct ScaleResult {
    StrategyTree tree;              // over 3N coins
    int completion_depth_used = 0;  // max completion depth over all leaves
    std::map<Path, NodePtr> per_leaf;
};

namespace detail {

inline int worker_count() {
    if (const char* env = std::getenv("CWLAB_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 1;
}

struct CompletionTask {
    Path path;
    engine::SmallState local;       // local ids 1..m over `pool`, plus OUT column
    uint32_t local_loops = 0;       // surviving same-group traces, local bits
    std::vector<Coin> pool;         // global coins usable on the scale
    bool empty_residual = false;
};

// Project the scaled residual onto the coins that can still be fake plus a
// few known-real makeweights; every off-pool chameleon position collapses
// into one phantom column since it can never reach the scale.
inline CompletionTask project_leaf(const PairState& residual, const std::vector<uint8_t>& loops,
                                   Path path) {
    CompletionTask task;
    task.path = std::move(path);
    if (residual.empty()) {
        task.empty_residual = true;
        return task;
    }
    const int n = residual.n_coins();
    std::vector<Coin> support = residual.fake_support();
    std::vector<uint8_t> occurs(static_cast<size_t>(n) + 1, 0);
    for (Coin f : support) {
        occurs[f] = 1;
        for (Coin c = 1; c <= n; ++c)
            if (c != f && residual.contains(f, c)) occurs[c] = 1;
    }
    task.pool = support;
    int makeweights = 0;
    for (Coin c = 1; c <= n && makeweights < 3; ++c) {
        if (!occurs[c]) {
            task.pool.push_back(c);
            ++makeweights;
        }
    }
    std::sort(task.pool.begin(), task.pool.end());

    const int m = static_cast<int>(task.pool.size());
    const int out_col = m + 1;  // phantom chameleon position
    task.local.n = m + 1;
    std::vector<int> local_of(static_cast<size_t>(n) + 1, 0);
    for (int i = 0; i < m; ++i) {
        local_of[task.pool[i]] = i + 1;
        if (loops[task.pool[i]]) task.local_loops |= 1u << i;
    }
    for (Coin f : support) {
        for (Coin c = 1; c <= n; ++c) {
            if (c == f || !residual.contains(f, c)) continue;
            int lc = local_of[c] ? local_of[c] : out_col;
            task.local.set(local_of[f], lc);
        }
    }
    return task;
}

// Prefer completions whose own leaves stay scalable; fall back to any
// valid completion.
inline NodePtr complete_task(const CompletionTask& task, bool allow_depth3) {
    if (task.empty_residual) return Node::terminal(Leaf::impossible());

    engine::Config cfg;
    cfg.order = engine::Order::Canonical;
    cfg.pool = (1u << (task.local.n - 1)) - 1;  // everything except the phantom column
    for (int attempt_depth : {2, 3}) {
        if (attempt_depth == 3 && !allow_depth3) break;
        for (engine::Mode mode : {engine::Mode::ScalableSolution, engine::Mode::Solution}) {
            cfg.mode = mode;
            auto res = engine::solve(task.local, task.local_loops, attempt_depth, cfg);
            if (res.verdict == engine::Verdict::Found) {
                std::vector<Coin> map(static_cast<size_t>(task.local.n) + 1, 0);
                for (size_t i = 0; i < task.pool.size(); ++i) map[i + 1] = task.pool[i];
                return relabel(res.tree, map);
            }
        }
    }
    return nullptr;
}

}  // namespace detail

// Scale a verified solution (or pseudo-solution) once: 3N coins, the original
// weighings replayed on triples, and a searched completion at every leaf.
// The result is re-verified as a strict FC solution before returning.
inline ScaleResult scale_once(const StrategyTree& t, bool allow_depth3 = false) {
    if (!verify_fc(t).valid && !verify_pseudo(t).valid)
        throw InvalidInputError("scale_once needs a verified solution or pseudo-solution");

    const int n3 = 3 * t.n_coins;
    auto triple = [](Coin c) { return std::array<Coin, 3>{3 * c - 2, 3 * c - 1, 3 * c}; };
    auto scale_weighing = [&](const Weighing& w) {
        std::vector<Coin> left, right;
        for (Coin c : w.left)
            for (Coin x : triple(c)) left.push_back(x);
        for (Coin c : w.right)
            for (Coin x : triple(c)) right.push_back(x);
        return Weighing(std::move(left), std::move(right));
    };

    // Pass 1: collect one completion task per original leaf, tracking which
    // same-group traces are still alive along the scaled prefix.
    std::vector<detail::CompletionTask> tasks;
    {
        Path path;
        std::function<void(const NodePtr&, const PairState&, const std::vector<uint8_t>&)>
            collect = [&](const NodePtr& node, const PairState& state,
                          const std::vector<uint8_t>& loops) {
                if (!node->is_decision()) {
                    tasks.push_back(detail::project_leaf(state, loops, path));
                    return;
                }
                Weighing w3 = scale_weighing(*node->weighing);
                for (int i = 0; i < 3; ++i) {
                    Outcome o = kAllOutcomes[i];
                    path.push_back(o);
                    collect(node->children[i], filter_state(state, w3, o),
                            filter_group_traces(loops, w3, o, n3));
                    path.pop_back();
                }
            };
        collect(t.root, PairState::full(n3), std::vector<uint8_t>(n3 + 1, 1));
    }

    // Pass 2: solve the completions (independently; optionally in parallel).
    std::vector<NodePtr> completions(tasks.size());
    int workers = std::min<int>(detail::worker_count(), static_cast<int>(tasks.size()));
    if (workers <= 1) {
        for (size_t i = 0; i < tasks.size(); ++i)
            completions[i] = detail::complete_task(tasks[i], allow_depth3);
    } else {
        std::vector<std::thread> pool;
        std::atomic<size_t> next{0};
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
                    completions[i] = detail::complete_task(tasks[i], allow_depth3);
            });
        for (auto& th : pool) th.join();
    }
    for (size_t i = 0; i < tasks.size(); ++i)
        if (!completions[i])
            throw CompletionNotFound(tasks[i].path,
                                     allow_depth3 ? "no completion within three weighings"
                                                  : "no completion within two weighings");

    // Pass 3: graft completions onto the scaled prefix.
    ScaleResult result;
    size_t cursor = 0;
    std::function<NodePtr(const NodePtr&)> rebuild = [&](const NodePtr& node) -> NodePtr {
        if (!node->is_decision()) {
            const auto& task = tasks[cursor];
            NodePtr done = completions[cursor];
            ++cursor;
            result.per_leaf.emplace(task.path, done);
            result.completion_depth_used = std::max(result.completion_depth_used, depth(done));
            return done;
        }
        std::array<NodePtr, 3> kids;
        for (int i = 0; i < 3; ++i) kids[i] = rebuild(node->children[i]);
        return Node::decision(scale_weighing(*node->weighing), std::move(kids));
    };
    result.tree = StrategyTree{n3, rebuild(t.root)};

    auto check = verify_fc(result.tree);
    if (!check.valid)
        throw TreeError("internal error: scaled tree failed verification");
    return result;
}

// k-fold scaling; every intermediate product must complete in two weighings.
inline StrategyTree scale_k(const StrategyTree& t, int k) {
    if (k < 1) throw InvalidInputError("scale_k needs k >= 1");
    StrategyTree current = t;
    for (int i = 0; i < k; ++i) current = scale_once(current, false).tree;
    return current;
}

}  // namespace cwlab
