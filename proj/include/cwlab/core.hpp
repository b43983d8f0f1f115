#pragma once

// Core domain types for the fake+chameleon coin-weighing problems:
// weighings with ternary outcomes, strategy trees, and the set of
// (fake, chameleon) assignments consistent with observed outcomes.
//
// Weight model: the fake coin and a fake-mimicking chameleon are each
// lighter than a real coin by the same unit; only the sign of the pan
// deficit difference is observable, and the pan with the larger deficit
// is the lighter one.

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cwlab {

using Coin = int;  // 1-based coin ids

struct TreeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Outcomes

enum class Outcome : uint8_t { Balanced = 0, LeftLight = 1, RightLight = 2 };

inline constexpr std::array<Outcome, 3> kAllOutcomes = {
    Outcome::Balanced, Outcome::LeftLight, Outcome::RightLight};

inline const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Balanced: return "=";
        case Outcome::LeftLight: return "<";
        case Outcome::RightLight: return ">";
    }
    return "?";
}

// Swap the roles of the two pans.
inline Outcome mirrored(Outcome o) {
    if (o == Outcome::LeftLight) return Outcome::RightLight;
    if (o == Outcome::RightLight) return Outcome::LeftLight;
    return o;
}

using Path = std::vector<Outcome>;

inline std::string path_to_string(const Path& p) {
    std::string s;
    for (Outcome o : p) s += to_string(o);
    return s.empty() ? std::string("(root)") : s;
}

// ---------------------------------------------------------------------------
// Weighing

enum class Zone : uint8_t { OnLeft = 0, OnRight = 1, Off = 2 };

struct Weighing {
    std::vector<Coin> left;   // written pan order is preserved
    std::vector<Coin> right;

    Weighing() = default;
    Weighing(std::vector<Coin> l, std::vector<Coin> r)
        : left(std::move(l)), right(std::move(r)) {
        if (left.empty() || left.size() != right.size())
            throw TreeError("weighing pans must be non-empty and equal-sized");
        for (Coin c : left)
            if (c < 1) throw TreeError("coin ids are 1-based");
        for (Coin c : right)
            if (c < 1) throw TreeError("coin ids are 1-based");
        auto all = left;
        all.insert(all.end(), right.begin(), right.end());
        std::sort(all.begin(), all.end());
        if (std::adjacent_find(all.begin(), all.end()) != all.end())
            throw TreeError("weighing pans must be disjoint");
    }

    Zone zone(Coin c) const {
        if (std::find(left.begin(), left.end(), c) != left.end()) return Zone::OnLeft;
        if (std::find(right.begin(), right.end(), c) != right.end()) return Zone::OnRight;
        return Zone::Off;
    }

    Coin max_coin() const {
        Coin m = 0;
        for (Coin c : left) m = std::max(m, c);
        for (Coin c : right) m = std::max(m, c);
        return m;
    }

    bool same_as(const Weighing& o) const {
        auto key = [](const Weighing& w) {
            auto l = w.left, r = w.right;
            std::sort(l.begin(), l.end());
            std::sort(r.begin(), r.end());
            return std::make_pair(l, r);
        };
        return key(*this) == key(o);
    }
};

// ---------------------------------------------------------------------------
// Achievability tables
//
// For a pair (fake f, chameleon c) and a weighing, the chameleon picks
// x in {0,1} (1 = mimic the fake) independently per weighing.  With
// deficit(pan) = [f in pan] + x*[c in pan], the outcome is the sign of
// deficit(left) - deficit(right).  The achievable set is the union over x.

using OutcomeMask = uint8_t;  // bit (1 << outcome)

inline constexpr OutcomeMask bit(Outcome o) {
    return static_cast<OutcomeMask>(1u << static_cast<unsigned>(o));
}

namespace detail {

constexpr OutcomeMask kBal = bit(Outcome::Balanced);
constexpr OutcomeMask kL = bit(Outcome::LeftLight);
constexpr OutcomeMask kR = bit(Outcome::RightLight);

// pair_table[zone(f)][zone(c)]
inline constexpr OutcomeMask kPairTable[3][3] = {
    // c: OnLeft        OnRight        Off           f:
    {kL, static_cast<OutcomeMask>(kL | kBal), kL},                    // OnLeft
    {static_cast<OutcomeMask>(kR | kBal), kR, kR},                    // OnRight
    {static_cast<OutcomeMask>(kBal | kL), static_cast<OutcomeMask>(kBal | kR), kBal},  // Off
};

// Two equally light coins placed by zones; deterministic outcome.
// Also the survival rule for "both non-real coins in one place": a pan
// holding both has deficit 1 or 2, so the comparison sign equals the
// single-fake case.
inline constexpr OutcomeMask kTwoFakeTable[3][3] = {
    // b: OnLeft  OnRight  Off       a:
    {kL, kBal, kL},    // OnLeft
    {kBal, kR, kR},    // OnRight
    {kL, kR, kBal},    // Off
};

}  // namespace detail

inline OutcomeMask achievable_mask(Zone zf, Zone zc) {
    return detail::kPairTable[static_cast<int>(zf)][static_cast<int>(zc)];
}

inline OutcomeMask achievable_mask(const Weighing& w, Coin fake, Coin cham) {
    return achievable_mask(w.zone(fake), w.zone(cham));
}

// The 1- or 2-element outcome set achievable by pair (fake, cham).
inline std::vector<Outcome> achievable_outcomes(const Weighing& w, Coin fake, Coin cham) {
    OutcomeMask m = achievable_mask(w, fake, cham);
    std::vector<Outcome> out;
    for (Outcome o : kAllOutcomes)
        if (m & bit(o)) out.push_back(o);
    return out;
}

inline OutcomeMask two_fake_mask(Zone za, Zone zb) {
    return detail::kTwoFakeTable[static_cast<int>(za)][static_cast<int>(zb)];
}

// ---------------------------------------------------------------------------
// Leaves and strategy trees

enum class LeafKind : uint8_t { Output1, Output2, FakeSet, Impossible };

struct Leaf {
    LeafKind kind = LeafKind::Impossible;
    std::vector<Coin> coins;  // written order preserved

    static Leaf output1(Coin a) { return {LeafKind::Output1, {a}}; }
    static Leaf output2(Coin a, Coin b) {
        if (a == b) throw TreeError("Output2 coins must differ");
        return {LeafKind::Output2, {a, b}};
    }
    static Leaf fake_set(std::vector<Coin> s) {
        std::vector<Coin> sorted = s;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw TreeError("fake-set coins must be distinct");
        if (s.size() < 3 || s.size() > 6)
            throw TreeError("fake-set outputs hold 3..6 coins");
        return {LeafKind::FakeSet, std::move(s)};
    }
    static Leaf impossible() { return {LeafKind::Impossible, {}}; }

    bool contains(Coin c) const {
        return std::find(coins.begin(), coins.end(), c) != coins.end();
    }

    std::string to_string() const {
        switch (kind) {
            case LeafKind::Impossible: return "()";
            case LeafKind::FakeSet: {
                std::string s = "{";
                for (size_t i = 0; i < coins.size(); ++i) {
                    if (i) s += ",";
                    s += std::to_string(coins[i]);
                }
                return s + "}";
            }
            default: {
                std::string s = "(";
                for (size_t i = 0; i < coins.size(); ++i) {
                    if (i) s += ",";
                    s += std::to_string(coins[i]);
                }
                return s + ")";
            }
        }
    }
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    // Decision node: weighing + 3 children indexed by Outcome.
    // Terminal node: leaf.
    std::optional<Weighing> weighing;
    std::array<NodePtr, 3> children{};
    std::optional<Leaf> leaf;

    bool is_decision() const { return weighing.has_value(); }

    static NodePtr decision(Weighing w, std::array<NodePtr, 3> kids) {
        auto n = std::make_shared<Node>();
        n->weighing = std::move(w);
        n->children = std::move(kids);
        return n;
    }
    static NodePtr terminal(Leaf l) {
        auto n = std::make_shared<Node>();
        n->leaf = std::move(l);
        return n;
    }

    const NodePtr& child(Outcome o) const { return children[static_cast<size_t>(o)]; }
};

struct StrategyTree {
    int n_coins = 0;
    NodePtr root;
};

// Deep copy with every coin id mapped through `map` (index = old id).
inline NodePtr relabel(const NodePtr& node, const std::vector<Coin>& map) {
    if (!node->is_decision()) {
        Leaf l = *node->leaf;
        for (Coin& c : l.coins) c = map[c];
        return Node::terminal(std::move(l));
    }
    std::vector<Coin> left = node->weighing->left, right = node->weighing->right;
    for (Coin& c : left) c = map[c];
    for (Coin& c : right) c = map[c];
    std::array<NodePtr, 3> kids;
    for (int i = 0; i < 3; ++i) kids[i] = relabel(node->children[i], map);
    return Node::decision(Weighing(std::move(left), std::move(right)), std::move(kids));
}

inline int depth(const NodePtr& node) {
    if (!node || !node->is_decision()) return 0;
    int d = 0;
    for (const auto& c : node->children) d = std::max(d, depth(c));
    return 1 + d;
}

inline int depth(const StrategyTree& t) { return depth(t.root); }

inline size_t node_count(const NodePtr& node) {
    if (!node) return 0;
    size_t n = 1;
    if (node->is_decision())
        for (const auto& c : node->children) n += node_count(c);
    return n;
}

namespace detail {
inline void validate_node(const NodePtr& node, int n_coins) {
    if (!node) throw TreeError("tree node is missing");
    if (node->is_decision()) {
        const Weighing& w = *node->weighing;
        if (w.max_coin() > n_coins)
            throw TreeError("weighing references coin beyond n_coins");
        for (const auto& c : node->children) validate_node(c, n_coins);
    } else {
        if (!node->leaf) throw TreeError("terminal node without a leaf");
        for (Coin c : node->leaf->coins)
            if (c < 1 || c > n_coins) throw TreeError("leaf references coin beyond n_coins");
    }
}
}  // namespace detail

// Structural validation; throws TreeError on malformed input.
inline void validate_tree(const StrategyTree& t) {
    if (t.n_coins < 2) throw TreeError("a problem instance needs at least 2 coins");
    detail::validate_node(t.root, t.n_coins);
}

// ---------------------------------------------------------------------------
// PairState: the set of ordered (fake, chameleon) pairs still consistent
// with all observed outcomes.  Stored as an n x n bit matrix, row = fake.

class PairState {
  public:
    PairState() = default;

    static PairState full(int n) {
        PairState s(n);
        for (Coin f = 1; f <= n; ++f)
            for (Coin c = 1; c <= n; ++c)
                if (f != c) s.set(f, c);
        return s;
    }
    static PairState none(int n) { return PairState(n); }

    int n_coins() const { return n_; }
    size_t words_per_row() const { return wpr_; }

    bool contains(Coin f, Coin c) const {
        return (row(f)[(c - 1) >> 6] >> ((c - 1) & 63)) & 1u;
    }
    void set(Coin f, Coin c) { row(f)[(c - 1) >> 6] |= uint64_t{1} << ((c - 1) & 63); }
    void clear(Coin f, Coin c) { row(f)[(c - 1) >> 6] &= ~(uint64_t{1} << ((c - 1) & 63)); }

    const uint64_t* row(Coin f) const { return bits_.data() + (f - 1) * wpr_; }
    uint64_t* row(Coin f) { return bits_.data() + (f - 1) * wpr_; }

    size_t count() const {
        size_t c = 0;
        for (uint64_t w : bits_) c += static_cast<size_t>(__builtin_popcountll(w));
        return c;
    }
    bool empty() const {
        for (uint64_t w : bits_)
            if (w) return false;
        return true;
    }

    bool operator==(const PairState& o) const { return n_ == o.n_ && bits_ == o.bits_; }

    std::vector<std::pair<Coin, Coin>> pairs() const {
        std::vector<std::pair<Coin, Coin>> out;
        for (Coin f = 1; f <= n_; ++f)
            for (Coin c = 1; c <= n_; ++c)
                if (f != c && contains(f, c)) out.emplace_back(f, c);
        return out;
    }

    // Coins that can still be the fake.
    std::vector<Coin> fake_support() const {
        std::vector<Coin> out;
        for (Coin f = 1; f <= n_; ++f) {
            const uint64_t* r = row(f);
            for (size_t w = 0; w < wpr_; ++w)
                if (r[w]) {
                    out.push_back(f);
                    break;
                }
        }
        return out;
    }

    bool fake_possible(Coin f) const {
        const uint64_t* r = row(f);
        for (size_t w = 0; w < wpr_; ++w)
            if (r[w]) return true;
        return false;
    }

    // Coins that can still be the chameleon.
    std::vector<Coin> cham_support() const {
        std::vector<uint64_t> acc(wpr_, 0);
        for (Coin f = 1; f <= n_; ++f) {
            const uint64_t* r = row(f);
            for (size_t w = 0; w < wpr_; ++w) acc[w] |= r[w];
        }
        std::vector<Coin> out;
        for (Coin c = 1; c <= n_; ++c)
            if ((acc[(c - 1) >> 6] >> ((c - 1) & 63)) & 1u) out.push_back(c);
        return out;
    }

    // Unordered {a,b} with both (a,b) and (b,a) present.
    int64_t bidirectional_count() const {
        int64_t d = 0;
        for (Coin a = 1; a <= n_; ++a)
            for (Coin b = a + 1; b <= n_; ++b)
                if (contains(a, b) && contains(b, a)) ++d;
        return d;
    }

  private:
    explicit PairState(int n)
        : n_(n), wpr_((static_cast<size_t>(n) + 63) / 64), bits_(n * wpr_, 0) {}

    int n_ = 0;
    size_t wpr_ = 0;
    std::vector<uint64_t> bits_;
};

struct StateStats {
    std::vector<Coin> fake_support;
    int64_t bidirectional_count = 0;
};

inline StateStats state_statistics(const PairState& s) {
    return {s.fake_support(), s.bidirectional_count()};
}

namespace detail {

// Column bit masks for the three zones of a weighing.
struct ZoneMasks {
    std::vector<uint64_t> zone[3];

    ZoneMasks(const Weighing& w, int n) {
        size_t wpr = (static_cast<size_t>(n) + 63) / 64;
        for (auto& z : zone) z.assign(wpr, 0);
        auto mark = [&](Coin c, Zone z) {
            zone[static_cast<int>(z)][(c - 1) >> 6] |= uint64_t{1} << ((c - 1) & 63);
        };
        for (Coin c : w.left) mark(c, Zone::OnLeft);
        for (Coin c : w.right) mark(c, Zone::OnRight);
        auto& off = zone[static_cast<int>(Zone::Off)];
        for (size_t i = 0; i < wpr; ++i)
            off[i] = ~(zone[0][i] | zone[1][i]);
        int spare = n & 63;
        if (spare) off[wpr - 1] &= (uint64_t{1} << spare) - 1;
    }

    Zone zone_of(Coin c) const {
        size_t word = (c - 1) >> 6, b = (c - 1) & 63;
        if ((zone[0][word] >> b) & 1u) return Zone::OnLeft;
        if ((zone[1][word] >> b) & 1u) return Zone::OnRight;
        return Zone::Off;
    }
};

}  // namespace detail

// Survival of "both non-real coins in one place" traces: a trace lives
// through a weighing iff its coin sits on the lighter pan, or off the scale
// when the outcome is balanced.
inline std::vector<uint8_t> filter_group_traces(const std::vector<uint8_t>& alive,
                                                const Weighing& w, Outcome o, int n) {
    detail::ZoneMasks zm(w, n);
    std::vector<uint8_t> out(static_cast<size_t>(n) + 1, 0);
    Zone keep_zone = o == Outcome::Balanced    ? Zone::Off
                     : o == Outcome::LeftLight ? Zone::OnLeft
                                               : Zone::OnRight;
    for (Coin c = 1; c <= n; ++c)
        if (alive[c] && zm.zone_of(c) == keep_zone) out[c] = 1;
    return out;
}

// Keep exactly the pairs whose achievable set contains `outcome`.
inline PairState filter_state(const PairState& state, const Weighing& w, Outcome outcome) {
    PairState out = state;
    const int n = state.n_coins();
    const size_t wpr = state.words_per_row();
    detail::ZoneMasks zm(w, n);

    // Per fake-zone, the mask of chameleon columns that keep the pair alive.
    uint64_t scratch[3 * 64];  // wpr is small in practice; fall back to heap if not
    std::vector<uint64_t> heap;
    uint64_t* allowed;
    if (wpr * 3 <= sizeof(scratch) / sizeof(scratch[0])) {
        allowed = scratch;
    } else {
        heap.assign(3 * wpr, 0);
        allowed = heap.data();
    }
    for (int zf = 0; zf < 3; ++zf) {
        uint64_t* dst = allowed + zf * wpr;
        for (size_t i = 0; i < wpr; ++i) dst[i] = 0;
        for (int zc = 0; zc < 3; ++zc) {
            if (achievable_mask(static_cast<Zone>(zf), static_cast<Zone>(zc)) & bit(outcome)) {
                const uint64_t* src = zm.zone[zc].data();
                for (size_t i = 0; i < wpr; ++i) dst[i] |= src[i];
            }
        }
    }
    for (Coin f = 1; f <= n; ++f) {
        const uint64_t* mask = allowed + static_cast<int>(zm.zone_of(f)) * wpr;
        uint64_t* r = out.row(f);
        for (size_t i = 0; i < wpr; ++i) r[i] &= mask[i];
    }
    return out;
}

}  // namespace cwlab
