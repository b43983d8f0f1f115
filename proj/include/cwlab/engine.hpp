#pragma once

// Depth-bounded AND/OR solver over compact pair states (up to 24 coins).
// Serves both the exhaustive (w,N) search and the per-leaf completion
// search used by scaling.
//
// Candidate weighings are enumerated up to coin interchangeability: two
// coins are interchangeable when swapping them is an automorphism of the
// tracked state, so one representative per class composition suffices.
// Enumeration order is canonical (pan size, then sorted pans), which makes
// the first witness found the lexicographically least one.

#include <chrono>
#include <cstring>
#include <functional>
#include <optional>
#include <unordered_set>
#include <vector>

#include "cwlab/core.hpp"

namespace cwlab::engine {

inline constexpr int kMaxCoins = 24;

inline int64_t pow3(int e) {
    int64_t v = 1;
    while (e-- > 0) v *= 3;
    return v;
}

// ---------------------------------------------------------------------------
// Compact state

struct SmallState {
    int n = 0;
    std::array<uint32_t, kMaxCoins> rows{};  // bit (c-1) of rows[f-1]

    static SmallState full(int n) {
        SmallState s;
        s.n = n;
        uint32_t all = (n == 32 ? ~0u : ((1u << n) - 1));
        for (int f = 0; f < n; ++f) s.rows[f] = all & ~(1u << f);
        return s;
    }

    bool contains(Coin f, Coin c) const { return (rows[f - 1] >> (c - 1)) & 1u; }
    void set(Coin f, Coin c) { rows[f - 1] |= 1u << (c - 1); }

    uint32_t support_mask() const {
        uint32_t m = 0;
        for (int f = 0; f < n; ++f)
            if (rows[f]) m |= 1u << f;
        return m;
    }
    int support_count() const { return __builtin_popcount(support_mask()); }

    bool empty() const { return support_mask() == 0; }

    int64_t bidirectional_count() const {
        int64_t d = 0;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (((rows[a] >> b) & 1u) && ((rows[b] >> a) & 1u)) ++d;
        return d;
    }

    bool operator==(const SmallState& o) const {
        return n == o.n && std::memcmp(rows.data(), o.rows.data(), sizeof(uint32_t) * n) == 0;
    }
};

struct MaskWeighing {
    uint32_t left = 0, right = 0;  // coin bitmasks (bit c-1)
};

inline Zone zone_of(const MaskWeighing& w, int coin_idx) {
    if ((w.left >> coin_idx) & 1u) return Zone::OnLeft;
    if ((w.right >> coin_idx) & 1u) return Zone::OnRight;
    return Zone::Off;
}

inline SmallState filter(const SmallState& s, const MaskWeighing& w, Outcome o) {
    uint32_t all = (s.n == 32 ? ~0u : ((1u << s.n) - 1));
    uint32_t zone_mask[3] = {w.left, w.right, all & ~(w.left | w.right)};
    uint32_t allowed[3];
    for (int zf = 0; zf < 3; ++zf) {
        allowed[zf] = 0;
        for (int zc = 0; zc < 3; ++zc)
            if (achievable_mask(static_cast<Zone>(zf), static_cast<Zone>(zc)) & bit(o))
                allowed[zf] |= zone_mask[zc];
    }
    SmallState out = s;
    for (int f = 0; f < s.n; ++f)
        out.rows[f] &= allowed[static_cast<int>(zone_of(w, f))];
    return out;
}

// Loop bits: "both non-real coins could sit here" survival (a loop lives
// through a weighing iff its coin is on the lighter pan, or off the scale
// with a balanced outcome).
inline uint32_t filter_loops(uint32_t loops, const MaskWeighing& w, Outcome o, int n) {
    uint32_t all = (n == 32 ? ~0u : ((1u << n) - 1));
    uint32_t off = all & ~(w.left | w.right);
    switch (o) {
        case Outcome::Balanced: return loops & off;
        case Outcome::LeftLight: return loops & w.left;
        case Outcome::RightLight: return loops & w.right;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Solver configuration

enum class Mode : uint8_t { Solution, ScalableSolution, PseudoSolution };
enum class Order : uint8_t { Canonical, Guided };

struct PruneFlags {
    bool pair_bound = true;        // bidirectional pairs <= 3^r
    bool def_bound = true;         // D + ceil(max(E-F,0)/6) + F <= 3^r (scalable/pseudo)
    bool leaf_feasibility = true;  // ceil(|support|/2) <= 3^r
};

struct Progress {
    uint64_t nodes = 0;
    int depth = 0;                            // weighings placed so far
    const std::vector<MaskWeighing>* prefix;  // current weighing prefix
};

using ProgressFn = std::function<void(const Progress&)>;

struct Config {
    Mode mode = Mode::Solution;
    PruneFlags prune;
    Order order = Order::Canonical;
    bool symmetry_reduction = true;   // one candidate per interchangeable-coin class
    bool def_bound_absolute = false;  // |E-F| reading instead of max(E-F,0)
    uint32_t pool = ~0u;              // coins allowed on the scale (bit c-1)
    uint64_t node_budget = 0;         // 0 = unlimited
    std::chrono::steady_clock::duration time_budget{};  // zero = unlimited
    ProgressFn progress;              // invoked periodically when set
    uint64_t progress_interval = 1u << 16;
};

struct Stats {
    uint64_t nodes = 0;
    bool budget_hit = false;
};

namespace detail {

struct MemoKey {
    std::array<uint32_t, kMaxCoins> rows;
    uint32_t loops;
    int8_t depth;
    bool operator==(const MemoKey& o) const {
        return depth == o.depth && loops == o.loops && rows == o.rows;
    }
};

struct MemoKeyHash {
    size_t operator()(const MemoKey& k) const {
        uint64_t h = 1469598103934665603ull;
        auto mix = [&](uint64_t v) {
            h ^= v;
            h *= 1099511628211ull;
        };
        for (uint32_t r : k.rows) mix(r);
        mix(k.loops);
        mix(static_cast<uint64_t>(k.depth));
        return static_cast<size_t>(h);
    }
};

struct Solver {
    const Config& cfg;
    Stats& stats;
    int n;
    std::chrono::steady_clock::time_point deadline;
    bool has_deadline = false;
    std::unordered_set<MemoKey, MemoKeyHash> failed;
    std::vector<MaskWeighing> prefix;
    bool aborted = false;

    static constexpr size_t kMemoCap = 1u << 22;

    Solver(const Config& c, Stats& s, int n_coins) : cfg(c), stats(s), n(n_coins) {
        if (cfg.time_budget.count() > 0) {
            deadline = std::chrono::steady_clock::now() + cfg.time_budget;
            has_deadline = true;
        }
    }

    bool budget_exceeded() {
        if (cfg.node_budget && stats.nodes > cfg.node_budget) return true;
        if (has_deadline && (stats.nodes & 0x3ff) == 0 &&
            std::chrono::steady_clock::now() > deadline)
            return true;
        return false;
    }

    // Try to finish the state right now with a single output leaf.
    std::optional<Leaf> final_leaf(const SmallState& s, uint32_t loops) const {
        uint32_t sup = s.support_mask();
        int cnt = __builtin_popcount(sup);
        if (cnt == 0) return Leaf::impossible();
        if (cnt == 1) return Leaf::output1(__builtin_ctz(sup) + 1);
        if (cnt == 2) {
            Coin a = __builtin_ctz(sup) + 1;
            Coin b = 32 - __builtin_clz(sup);
            if (cfg.mode == Mode::ScalableSolution || cfg.mode == Mode::PseudoSolution) {
                bool double_edge = s.contains(a, b) && s.contains(b, a);
                bool loop_alive = (loops >> (a - 1)) & 1u || (loops >> (b - 1)) & 1u;
                if (double_edge && loop_alive) return std::nullopt;  // not scalable here
            }
            return Leaf::output2(a, b);
        }
        if (cfg.mode == Mode::PseudoSolution && cnt >= 3 && cnt <= 6) {
            // Fake-set output: all fakes inside, no consistent chameleon inside.
            uint32_t chams = 0;
            for (int f = 0; f < s.n; ++f) chams |= s.rows[f];
            if ((chams & sup) == 0 && (loops & sup) == 0) {
                std::vector<Coin> coins;
                for (int c = 0; c < s.n; ++c)
                    if ((sup >> c) & 1u) coins.push_back(c + 1);
                return Leaf::fake_set(coins);
            }
        }
        return std::nullopt;
    }

    bool pruned(const SmallState& s, uint32_t loops, int depth) const {
        int64_t cap = pow3(depth);
        if (cfg.prune.leaf_feasibility) {
            int sup = s.support_count();
            int per_leaf = (cfg.mode == Mode::PseudoSolution) ? 6 : 2;
            if ((sup + per_leaf - 1) / per_leaf > cap) return true;
        }
        if (cfg.prune.pair_bound && s.bidirectional_count() > cap) return true;
        if (cfg.prune.def_bound &&
            (cfg.mode == Mode::ScalableSolution || cfg.mode == Mode::PseudoSolution)) {
            int64_t D = s.bidirectional_count();
            int64_t F = __builtin_popcount(loops);
            uint32_t sup = s.support_mask();
            uint32_t sinks = ~sup & ~loops & ((n == 32 ? ~0u : (1u << n) - 1));
            int64_t E = 0;
            for (int f = 0; f < n; ++f)
                if (s.rows[f] & sinks) ++E;
            int64_t excess =
                cfg.def_bound_absolute ? (E > F ? E - F : F - E) : std::max<int64_t>(E - F, 0);
            if (D + (excess + 5) / 6 + F > cap) return true;
        }
        return false;
    }

    // Coins interchangeable under the tracked state (and the pool).
    std::vector<std::vector<int>> classes(const SmallState& s, uint32_t loops) const {
        std::vector<int> parent(n);
        for (int i = 0; i < n; ++i) parent[i] = i;
        std::function<int(int)> find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (int i = 0; cfg.symmetry_reduction && i < n; ++i) {
            if (!((cfg.pool >> i) & 1u)) continue;
            for (int j = i + 1; j < n; ++j) {
                if (!((cfg.pool >> j) & 1u)) continue;
                if (find(i) == find(j)) continue;
                if (((loops >> i) & 1u) != ((loops >> j) & 1u)) continue;
                uint32_t ij = (1u << i) | (1u << j);
                if ((s.rows[i] & ~ij) != (s.rows[j] & ~ij)) continue;
                if (((s.rows[i] >> j) & 1u) != ((s.rows[j] >> i) & 1u)) continue;
                bool cols_ok = true;
                for (int f = 0; f < n && cols_ok; ++f) {
                    if (f == i || f == j) continue;
                    if (((s.rows[f] >> i) & 1u) != ((s.rows[f] >> j) & 1u)) cols_ok = false;
                }
                if (cols_ok) parent[find(j)] = find(i);
            }
        }
        std::vector<std::vector<int>> out;
        std::vector<int> slot(n, -1);
        for (int i = 0; i < n; ++i) {
            if (!((cfg.pool >> i) & 1u)) continue;
            int r = find(i);
            if (slot[r] < 0) {
                slot[r] = static_cast<int>(out.size());
                out.emplace_back();
            }
            out[slot[r]].push_back(i);
        }
        return out;
    }

    std::vector<MaskWeighing> candidates(const SmallState& s, uint32_t loops) const {
        auto cls = classes(s, loops);
        int usable = 0;
        for (auto& c : cls) usable += static_cast<int>(c.size());
        std::vector<MaskWeighing> out;
        std::vector<int> take_l(cls.size()), take_r(cls.size());
        int max_k = usable / 2;
        for (int k = 1; k <= max_k; ++k) {
            std::function<void(size_t, int, int)> rec = [&](size_t ci, int need_l, int need_r) {
                if (ci == cls.size()) {
                    if (need_l || need_r) return;
                    MaskWeighing w;
                    for (size_t c = 0; c < cls.size(); ++c) {
                        for (int t = 0; t < take_l[c]; ++t) w.left |= 1u << cls[c][t];
                        for (int t = 0; t < take_r[c]; ++t)
                            w.right |= 1u << cls[c][take_l[c] + t];
                    }
                    if (w.left > w.right) return;  // pan swap is equivalent
                    out.push_back(w);
                    return;
                }
                int avail = static_cast<int>(cls[ci].size());
                for (int l = 0; l <= std::min(avail, need_l); ++l)
                    for (int r = 0; l + r <= avail && r <= need_r; ++r) {
                        take_l[ci] = l;
                        take_r[ci] = r;
                        rec(ci + 1, need_l - l, need_r - r);
                    }
            };
            rec(0, k, k);
        }
        std::sort(out.begin(), out.end(), [](const MaskWeighing& a, const MaskWeighing& b) {
            int ka = __builtin_popcount(a.left), kb = __builtin_popcount(b.left);
            if (ka != kb) return ka < kb;
            if (a.left != b.left) return a.left < b.left;
            return a.right < b.right;
        });
        return out;
    }

    NodePtr make_terminal(const Leaf& l) const { return Node::terminal(l); }

    NodePtr solve(const SmallState& s, uint32_t loops, int depth) {
        ++stats.nodes;
        if (cfg.progress && stats.nodes % cfg.progress_interval == 0)
            cfg.progress(Progress{stats.nodes, static_cast<int>(prefix.size()), &prefix});
        if (budget_exceeded()) {
            aborted = true;
            stats.budget_hit = true;
            return nullptr;
        }
        if (auto leaf = final_leaf(s, loops)) return make_terminal(*leaf);
        if (depth == 0) return nullptr;
        if (pruned(s, loops, depth)) return nullptr;

        MemoKey key{s.rows, loops, static_cast<int8_t>(depth)};
        if (cfg.mode == Mode::Solution) key.loops = 0;
        if (failed.count(key)) return nullptr;

        auto cands = candidates(s, loops);

        struct Entry {
            MaskWeighing w;
            SmallState child[3];
            uint32_t child_loops[3];
            int64_t score = 0;
        };
        std::vector<Entry> entries;
        entries.reserve(cands.size());
        for (const auto& w : cands) {
            Entry e;
            e.w = w;
            int64_t worst = 0, total = 0;
            for (int i = 0; i < 3; ++i) {
                Outcome o = kAllOutcomes[i];
                e.child[i] = filter(s, w, o);
                e.child_loops[i] = filter_loops(loops, w, o, n);
                int64_t need = std::max<int64_t>((e.child[i].support_count() + 1) / 2,
                                                 e.child[i].bidirectional_count());
                worst = std::max(worst, need);
                total += need;
            }
            e.score = worst * 1024 + total;
            entries.push_back(std::move(e));
        }
        if (cfg.order == Order::Guided)
            std::stable_sort(entries.begin(), entries.end(),
                             [](const Entry& a, const Entry& b) { return a.score < b.score; });

        for (const auto& e : entries) {
            std::array<NodePtr, 3> kids{};
            bool ok = true;
            prefix.push_back(e.w);
            for (int i = 0; i < 3 && ok; ++i) {
                kids[i] = solve(e.child[i], e.child_loops[i], depth - 1);
                if (!kids[i]) ok = false;
            }
            prefix.pop_back();
            if (aborted) return nullptr;
            if (!ok) continue;
            std::vector<Coin> left, right;
            for (int c = 0; c < n; ++c) {
                if ((e.w.left >> c) & 1u) left.push_back(c + 1);
                if ((e.w.right >> c) & 1u) right.push_back(c + 1);
            }
            return Node::decision(Weighing(std::move(left), std::move(right)), std::move(kids));
        }
        if (failed.size() < kMemoCap) failed.insert(key);
        return nullptr;
    }
};

}  // namespace detail

enum class Verdict : uint8_t { Found, Exhausted, Budget };

struct Result {
    Verdict verdict = Verdict::Exhausted;
    NodePtr tree;  // set when Found
    Stats stats;
};

// Solve "reduce `state` to valid outputs within `depth` weighings" under
// the given mode.  Coin ids are local 1..n (n <= 24).
inline Result solve(const SmallState& state, uint32_t loops, int depth, const Config& cfg) {
    Result res;
    detail::Solver solver(cfg, res.stats, state.n);
    NodePtr tree = solver.solve(state, loops, depth);
    if (tree) {
        res.verdict = Verdict::Found;
        res.tree = tree;
    } else {
        res.verdict = solver.aborted ? Verdict::Budget : Verdict::Exhausted;
    }
    return res;
}

}  // namespace cwlab::engine
