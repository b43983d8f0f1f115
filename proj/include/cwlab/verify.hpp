#pragma once

// Deciding whether a strategy tree solves the fake+chameleon problem (FC),
// the two-fakes problem (FF), or the relaxed pseudo form that may emit
// fake-set leaves.  Residual states are computed with the core semantics
// along every root-to-leaf path; reports are deterministic with paths in
// lexicographic outcome order.

#include <string>
#include <vector>

#include "cwlab/core.hpp"

namespace cwlab {

enum class VerifyMode : uint8_t { FC, FF, Pseudo };

inline const char* to_string(VerifyMode m) {
    switch (m) {
        case VerifyMode::FC: return "fc";
        case VerifyMode::FF: return "ff";
        case VerifyMode::Pseudo: return "pseudo";
    }
    return "?";
}

struct Violation {
    Path path;
    Leaf leaf;
    std::vector<std::pair<Coin, Coin>> witness_pairs;  // first offending pairs
    std::string reason;
};

struct VerificationReport {
    bool valid = false;
    VerifyMode mode = VerifyMode::FC;
    std::vector<Violation> violations;
    std::vector<Path> dead_leaves;  // output leaves never reached
    // Fake-set leaves where some consistent scenario places the chameleon
    // inside the announced set.  The fake is still pinned down, and the
    // scaling step re-checks completability, so these are warnings.
    std::vector<Violation> cham_in_set_warnings;
    int max_depth = 0;

    std::string summary() const {
        std::string s = valid ? "valid" : "invalid";
        s += " (mode ";
        s += to_string(mode);
        s += ", depth " + std::to_string(max_depth);
        if (!violations.empty()) s += ", " + std::to_string(violations.size()) + " violation(s)";
        if (!dead_leaves.empty()) s += ", " + std::to_string(dead_leaves.size()) + " dead leaf/leaves";
        s += ")";
        return s;
    }
};

// ---------------------------------------------------------------------------
// FF residuals: unordered pairs of equally light fakes, deterministic
// outcomes.  Reuses the PairState matrix kept symmetric.

inline PairState filter_two_fake(const PairState& state, const Weighing& w, Outcome outcome) {
    PairState out = state;
    const int n = state.n_coins();
    for (Coin a = 1; a <= n; ++a)
        for (Coin b = 1; b <= n; ++b)
            if (a != b && out.contains(a, b))
                if (!(two_fake_mask(w.zone(a), w.zone(b)) & bit(outcome))) out.clear(a, b);
    return out;
}

namespace detail {

inline void take_witnesses(const PairState& r, std::vector<std::pair<Coin, Coin>>& out,
                           bool (*bad)(const Leaf&, Coin, Coin), const Leaf& leaf,
                           size_t limit = 3) {
    for (auto [f, c] : r.pairs()) {
        if (bad(leaf, f, c)) {
            out.emplace_back(f, c);
            if (out.size() >= limit) return;
        }
    }
}

struct VerifyCtx {
    VerifyMode mode;
    VerificationReport report;
};

inline void verify_fc_walk(const NodePtr& node, const PairState& state, Path& path, VerifyCtx& ctx) {
    if (node->is_decision()) {
        ctx.report.max_depth = std::max(ctx.report.max_depth, static_cast<int>(path.size()) + 1);
        for (Outcome o : kAllOutcomes) {
            path.push_back(o);
            verify_fc_walk(node->child(o), filter_state(state, *node->weighing, o), path, ctx);
            path.pop_back();
        }
        return;
    }
    const Leaf& leaf = *node->leaf;
    if (leaf.kind == LeafKind::Impossible) {
        if (!state.empty()) {
            Violation v{path, leaf, {}, "impossible branch is reachable"};
            auto ps = state.pairs();
            for (size_t i = 0; i < ps.size() && i < 3; ++i) v.witness_pairs.push_back(ps[i]);
            ctx.report.violations.push_back(std::move(v));
        }
        return;
    }
    if (state.empty()) {
        ctx.report.dead_leaves.push_back(path);
        return;
    }
    switch (leaf.kind) {
        case LeafKind::Output1: {
            Violation v{path, leaf, {}, "a pair with a different fake survives"};
            take_witnesses(state, v.witness_pairs,
                           [](const Leaf& l, Coin f, Coin) { return f != l.coins[0]; }, leaf);
            if (!v.witness_pairs.empty()) ctx.report.violations.push_back(std::move(v));
            break;
        }
        case LeafKind::Output2: {
            Violation v{path, leaf, {}, "a surviving fake is outside the output pair"};
            take_witnesses(state, v.witness_pairs,
                           [](const Leaf& l, Coin f, Coin) { return !l.contains(f); }, leaf);
            if (!v.witness_pairs.empty()) ctx.report.violations.push_back(std::move(v));
            break;
        }
        case LeafKind::FakeSet: {
            if (ctx.mode != VerifyMode::Pseudo) {
                ctx.report.violations.push_back(
                    {path, leaf, {}, "fake-set leaf is only allowed in pseudo mode"});
                break;
            }
            Violation v{path, leaf, {}, "a surviving fake is outside the set"};
            take_witnesses(state, v.witness_pairs,
                           [](const Leaf& l, Coin f, Coin) { return !l.contains(f); }, leaf);
            if (!v.witness_pairs.empty()) ctx.report.violations.push_back(std::move(v));
            Violation warn{path, leaf, {}, "a consistent chameleon sits inside the set"};
            take_witnesses(state, warn.witness_pairs,
                           [](const Leaf& l, Coin, Coin c) { return l.contains(c); }, leaf);
            if (!warn.witness_pairs.empty())
                ctx.report.cham_in_set_warnings.push_back(std::move(warn));
            break;
        }
        default: break;
    }
}

inline void verify_ff_walk(const NodePtr& node, const PairState& state, Path& path, VerifyCtx& ctx) {
    if (node->is_decision()) {
        ctx.report.max_depth = std::max(ctx.report.max_depth, static_cast<int>(path.size()) + 1);
        for (Outcome o : kAllOutcomes) {
            path.push_back(o);
            verify_ff_walk(node->child(o), filter_two_fake(state, *node->weighing, o), path, ctx);
            path.pop_back();
        }
        return;
    }
    const Leaf& leaf = *node->leaf;
    if (state.empty()) {
        if (leaf.kind == LeafKind::Output2) ctx.report.dead_leaves.push_back(path);
        return;  // Output1/Impossible are required to be unreachable, and are
    }
    if (leaf.kind != LeafKind::Output2) {
        Violation v{path, leaf, {}, "only a two-coin output can be reachable in FF mode"};
        auto ps = state.pairs();
        for (size_t i = 0; i < ps.size() && i < 3; ++i) v.witness_pairs.push_back(ps[i]);
        ctx.report.violations.push_back(std::move(v));
        return;
    }
    // Residual must be exactly the output pair.
    Violation v{path, leaf, {}, "surviving fake pair differs from the output pair"};
    for (auto [a, b] : state.pairs()) {
        if (!(leaf.contains(a) && leaf.contains(b))) {
            v.witness_pairs.emplace_back(a, b);
            if (v.witness_pairs.size() >= 3) break;
        }
    }
    if (!v.witness_pairs.empty()) ctx.report.violations.push_back(std::move(v));
}

}  // namespace detail

inline VerificationReport verify_fc(const StrategyTree& t) {
    validate_tree(t);
    detail::VerifyCtx ctx{VerifyMode::FC, {}};
    ctx.report.mode = VerifyMode::FC;
    Path path;
    detail::verify_fc_walk(t.root, PairState::full(t.n_coins), path, ctx);
    ctx.report.valid = ctx.report.violations.empty();
    return ctx.report;
}

inline VerificationReport verify_pseudo(const StrategyTree& t) {
    validate_tree(t);
    detail::VerifyCtx ctx{VerifyMode::Pseudo, {}};
    ctx.report.mode = VerifyMode::Pseudo;
    Path path;
    detail::verify_fc_walk(t.root, PairState::full(t.n_coins), path, ctx);
    ctx.report.valid = ctx.report.violations.empty();
    return ctx.report;
}

inline VerificationReport verify_ff(const StrategyTree& t) {
    validate_tree(t);
    detail::VerifyCtx ctx{VerifyMode::FF, {}};
    ctx.report.mode = VerifyMode::FF;
    // Symmetric matrix of unordered fake pairs.
    PairState init = PairState::full(t.n_coins);
    Path path;
    detail::verify_ff_walk(t.root, init, path, ctx);
    ctx.report.valid = ctx.report.violations.empty();
    return ctx.report;
}

inline VerificationReport verify(const StrategyTree& t, VerifyMode mode) {
    switch (mode) {
        case VerifyMode::FC: return verify_fc(t);
        case VerifyMode::FF: return verify_ff(t);
        case VerifyMode::Pseudo: return verify_pseudo(t);
    }
    throw TreeError("unknown verify mode");
}

}  // namespace cwlab
