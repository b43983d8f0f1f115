#pragma once

// Group-graph model for scaling-aware pruning.  Vertices stand for future
// coin groups; a directed edge u->v means "u may hold the fake while v holds
// the chameleon", and a loop at u means both non-real coins may sit in u.
//
// Tracked statistics: D (double edges, conserved across the three outcomes
// of a weighing), F (loops, conserved), and E (vertices with an edge into a
// sink, non-decreasing).  A scalable (pseudo-)solution of depth r must
// satisfy D + ceil(max(E-F,0)/6) + F <= 3^r.

#include <string>
#include <vector>

#include "cwlab/core.hpp"

namespace cwlab {

struct GroupGraph {
    int n = 0;
    std::vector<uint64_t> adj;  // adj[u-1] bit (v-1); loops on the diagonal

    static GroupGraph complete(int n) {
        if (n < 1 || n > 64) throw TreeError("group graphs support 1..64 vertices");
        GroupGraph g;
        g.n = n;
        uint64_t all = (n == 64) ? ~uint64_t{0} : ((uint64_t{1} << n) - 1);
        g.adj.assign(n, all);
        return g;
    }

    bool edge(int u, int v) const { return (adj[u - 1] >> (v - 1)) & 1u; }
    void clear_edge(int u, int v) { adj[u - 1] &= ~(uint64_t{1} << (v - 1)); }

    bool operator==(const GroupGraph& o) const { return n == o.n && adj == o.adj; }
};

struct GraphStats {
    int64_t D = 0;  // double edges
    int64_t E = 0;  // vertices with an edge into a sink
    int64_t F = 0;  // loops
};

// One weighing over vertices, one outcome: drop the edges whose scenario is
// no longer consistent.
inline GroupGraph update(const GroupGraph& g, const Weighing& w, Outcome o) {
    if (w.max_coin() > g.n) throw TreeError("weighing references unknown vertex");
    GroupGraph out = g;
    for (int u = 1; u <= g.n; ++u) {
        Zone zu = w.zone(u);
        for (int v = 1; v <= g.n; ++v) {
            if (!out.edge(u, v)) continue;
            OutcomeMask m = (u == v) ? two_fake_mask(zu, zu) : achievable_mask(zu, w.zone(v));
            if (!(m & bit(o))) out.clear_edge(u, v);
        }
    }
    return out;
}

inline GraphStats stats(const GroupGraph& g) {
    GraphStats s;
    uint64_t outgoing = 0;  // vertices with any outgoing edge (loops included)
    for (int u = 1; u <= g.n; ++u)
        if (g.adj[u - 1]) outgoing |= uint64_t{1} << (u - 1);
    uint64_t sinks = ~outgoing & ((g.n == 64) ? ~uint64_t{0} : ((uint64_t{1} << g.n) - 1));
    for (int u = 1; u <= g.n; ++u) {
        if (g.edge(u, u)) ++s.F;
        if (g.adj[u - 1] & sinks) ++s.E;
        for (int v = u + 1; v <= g.n; ++v)
            if (g.edge(u, v) && g.edge(v, u)) ++s.D;
    }
    return s;
}

// The scalable/pseudo leaf-counting bound with r weighings left.  The
// default reads the |E-F| term as its non-negative part, following the
// counting argument; the absolute reading is available for comparison.
inline bool prune_bound_holds(const GraphStats& s, int remaining, bool absolute_reading = false) {
    if (remaining < 0) throw TreeError("remaining weighings must be >= 0");
    int64_t cap = 1;
    for (int i = 0; i < remaining; ++i) cap *= 3;
    int64_t excess = s.E - s.F;
    if (excess < 0) excess = absolute_reading ? -excess : 0;
    return s.D + (excess + 5) / 6 + s.F <= cap;
}

// One edge per line ("u v"; loops as "u u").
inline std::string dump_edges(const GroupGraph& g) {
    std::string out;
    for (int u = 1; u <= g.n; ++u)
        for (int v = 1; v <= g.n; ++v)
            if (g.edge(u, v))
                out += std::to_string(u) + " " + std::to_string(v) + "\n";
    return out;
}

}  // namespace cwlab
