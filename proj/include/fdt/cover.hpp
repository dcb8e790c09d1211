#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <utility>
#include <vector>

#include "fdt/errors.hpp"
#include "fdt/graph.hpp"

namespace fdt {

/// Slots are addressed as vertex * width + index.
using SlotId = int;

/// Cover of a base graph: width slots per vertex, one partial matching of
/// slot pairs per base edge. Slots of a vertex are never matched together.
struct Cover {
    Graph base;
    int width = 0;
    std::vector<std::pair<int, int>> edge_list;                // u < v, lexicographic
    std::vector<std::vector<std::pair<int, int>>> matchings;   // per edge: (slot of u, slot of v)
    std::vector<std::vector<std::pair<SlotId, int>>> slot_adj; // per slot: (matched slot, edge id)

    SlotId slot(int v, int i) const { return v * width + i; }
    int slot_vertex(SlotId s) const { return s / width; }
    int slot_index(SlotId s) const { return s % width; }
    int slot_count() const { return base.n * width; }

    int edge_id(int u, int v) const {
        if (u > v) std::swap(u, v);
        auto it = std::lower_bound(edge_list.begin(), edge_list.end(), std::make_pair(u, v));
        if (it == edge_list.end() || *it != std::make_pair(u, v))
            fail(Err::InvalidInstance,
                 "no edge " + std::to_string(u) + "-" + std::to_string(v));
        return static_cast<int>(it - edge_list.begin());
    }

    static Cover make(Graph base, int width) {
        Cover c;
        c.base = std::move(base);
        c.width = width;
        c.edge_list = c.base.edges();
        std::sort(c.edge_list.begin(), c.edge_list.end());
        c.matchings.resize(c.edge_list.size());
        c.slot_adj.assign(static_cast<std::size_t>(c.base.n) * width, {});
        return c;
    }

    /// Pairs are (slot index at u, slot index at v) for the edge u-v, u < v.
    void set_matching(int u, int v, std::vector<std::pair<int, int>> pairs) {
        bool flip = u > v;
        if (flip) std::swap(u, v);
        int e = edge_id(u, v);
        std::vector<char> used_u(width, 0), used_v(width, 0);
        for (auto& pr : pairs) {
            if (flip) std::swap(pr.first, pr.second);
            if (pr.first < 0 || pr.first >= width || pr.second < 0 || pr.second >= width)
                fail(Err::InvalidInstance, "matching slot out of range");
            if (used_u[pr.first]++ || used_v[pr.second]++)
                fail(Err::InvalidInstance, "matching pairs a slot twice on edge " +
                                               std::to_string(u) + "-" + std::to_string(v));
        }
        matchings[e] = std::move(pairs);
    }

    /// Rebuilds the per-slot adjacency index after matchings change.
    void finalize() {
        for (auto& a : slot_adj) a.clear();
        slot_adj.assign(static_cast<std::size_t>(base.n) * width, {});
        for (int e = 0; e < static_cast<int>(edge_list.size()); ++e) {
            auto [u, v] = edge_list[e];
            for (auto [i, j] : matchings[e]) {
                slot_adj[slot(u, i)].emplace_back(slot(v, j), e);
                slot_adj[slot(v, j)].emplace_back(slot(u, i), e);
            }
        }
        for (auto& a : slot_adj) std::sort(a.begin(), a.end());
    }
};

inline Cover make_empty_cover(Graph base, int width) {
    auto c = Cover::make(std::move(base), width);
    c.finalize();
    return c;
}

/// Identity-matching cover: slot i of u paired with slot i of v on every edge;
/// transversals are then proper colorings of the base graph.
inline Cover make_identity_cover(Graph base, int width) {
    auto c = Cover::make(std::move(base), width);
    std::vector<std::pair<int, int>> id;
    for (int i = 0; i < width; ++i) id.emplace_back(i, i);
    for (auto [u, v] : c.edge_list) c.set_matching(u, v, id);
    c.finalize();
    return c;
}

/// Slot values f; a slot with value 0 can never be chosen.
struct ValueFunction {
    int width = 0;
    std::vector<std::int8_t> value;  // indexed by SlotId

    static ValueFunction uniform(int n, int width, int v) {
        ValueFunction f;
        f.width = width;
        f.value.assign(static_cast<std::size_t>(n) * width, static_cast<std::int8_t>(v));
        return f;
    }

    int at(SlotId s) const { return value[s]; }
    int at(int v, int i) const { return value[static_cast<std::size_t>(v) * width + i]; }
    void set(int v, int i, int x) {
        value[static_cast<std::size_t>(v) * width + i] = static_cast<std::int8_t>(x);
    }

    int vertex_sum(int v) const {
        int s = 0;
        for (int i = 0; i < width; ++i) s += at(v, i);
        return s;
    }

    int max_value() const {
        int m = 0;
        for (auto x : value) m = std::max(m, static_cast<int>(x));
        return m;
    }
};

/// One chosen slot per vertex, optionally with a removing-order certificate.
struct Transversal {
    std::vector<int> choice;   // slot index per vertex
    std::vector<SlotId> order; // removing order over chosen slots

    bool has_order() const { return !order.empty() || choice.empty(); }
};

/// Precolored complete subgraph (K2 or K3) to be extended.
struct SeedColoring {
    std::vector<int> vertices;
    std::vector<int> slots;  // chosen slot index per seed vertex
};

inline std::vector<SlotId> slot_neighbors(const Cover& cover, SlotId s) {
    std::vector<SlotId> out;
    out.reserve(cover.slot_adj[s].size());
    for (auto [t, e] : cover.slot_adj[s]) out.push_back(t);
    return out;
}

namespace detail {

/// Adjacency of H[T]: for each vertex, the chosen neighbors of its chosen slot.
inline std::vector<std::vector<int>> chosen_adjacency(const Cover& cover,
                                                      const std::vector<int>& choice) {
    std::vector<std::vector<int>> adj(choice.size());
    for (int e = 0; e < static_cast<int>(cover.edge_list.size()); ++e) {
        auto [u, v] = cover.edge_list[e];
        for (auto [i, j] : cover.matchings[e]) {
            if (choice[u] == i && choice[v] == j) {
                adj[u].push_back(v);
                adj[v].push_back(u);
            }
        }
    }
    return adj;
}

}  // namespace detail

struct PeelResult {
    bool ok = false;
    std::vector<SlotId> order;
};

/// Greedy peel: repeatedly removes a chosen slot whose remaining degree in
/// H[T] is below its f-value, lowest slot id first. Succeeds exactly when T
/// is strictly f-degenerate, and then the peel sequence is an f-removing
/// order.
inline PeelResult is_strictly_f_degenerate(const Cover& cover, const ValueFunction& f,
                                           const std::vector<int>& choice) {
    int n = cover.base.n;
    auto adj = detail::chosen_adjacency(cover, choice);
    std::vector<int> deg(n);
    std::vector<char> peeled(n, 0);
    std::priority_queue<SlotId, std::vector<SlotId>, std::greater<SlotId>> ready;
    for (int v = 0; v < n; ++v) {
        deg[v] = static_cast<int>(adj[v].size());
        if (deg[v] < f.at(v, choice[v])) ready.push(cover.slot(v, choice[v]));
    }
    PeelResult res;
    res.order.reserve(n);
    while (!ready.empty()) {
        SlotId s = ready.top();
        ready.pop();
        int v = cover.slot_vertex(s);
        if (peeled[v] || deg[v] >= f.at(v, choice[v])) continue;
        peeled[v] = 1;
        res.order.push_back(s);
        for (int w : adj[v]) {
            if (peeled[w]) continue;
            if (--deg[w] == f.at(w, choice[w]) - 1) ready.push(cover.slot(w, choice[w]));
        }
    }
    res.ok = static_cast<int>(res.order.size()) == n;
    if (!res.ok) res.order.clear();
    return res;
}

/// Checks a removing order verbatim: every chosen slot exactly once, and each
/// entry has fewer right-neighbors in H[T] than its f-value.
inline bool verify_removing_order(const Cover& cover, const ValueFunction& f,
                                  const std::vector<int>& choice,
                                  const std::vector<SlotId>& order) {
    int n = cover.base.n;
    if (static_cast<int>(order.size()) != n) return false;
    std::vector<int> pos(n, -1);
    for (int k = 0; k < n; ++k) {
        int v = cover.slot_vertex(order[k]);
        if (v < 0 || v >= n) return false;
        if (cover.slot_index(order[k]) != choice[v]) return false;
        if (pos[v] != -1) return false;
        pos[v] = k;
    }
    auto adj = detail::chosen_adjacency(cover, choice);
    for (int v = 0; v < n; ++v) {
        int rights = 0;
        for (int w : adj[v])
            if (pos[w] > pos[v]) ++rights;
        if (rights >= f.at(v, choice[v])) return false;
    }
    return true;
}

/// DP-coloring check: no two chosen slots are matched.
inline bool is_dp_coloring(const Cover& cover, const std::vector<int>& choice) {
    for (int e = 0; e < static_cast<int>(cover.edge_list.size()); ++e) {
        auto [u, v] = cover.edge_list[e];
        for (auto [i, j] : cover.matchings[e])
            if (choice[u] == i && choice[v] == j) return false;
    }
    return true;
}

/// Cover built from a list-coloring instance: width is the largest list,
/// slots beyond a vertex's list are padding, and slots are matched exactly
/// when they carry the same color on adjacent vertices.
struct ListCover {
    Cover cover;
    std::vector<std::vector<int>> slot_color;  // per vertex, -1 on padding slots

    bool forbidden(int v, int i) const { return slot_color[v][i] < 0; }

    /// f = 1 on real slots, 0 on padding.
    ValueFunction padding_values() const {
        ValueFunction f = ValueFunction::uniform(cover.base.n, cover.width, 1);
        for (int v = 0; v < cover.base.n; ++v)
            for (int i = 0; i < cover.width; ++i)
                if (forbidden(v, i)) f.set(v, i, 0);
        return f;
    }

    std::vector<int> decode(const std::vector<int>& choice) const {
        std::vector<int> colors(choice.size());
        for (std::size_t v = 0; v < choice.size(); ++v)
            colors[v] = slot_color[v][choice[v]];
        return colors;
    }
};

inline ListCover from_list_instance(const Graph& graph,
                                    const std::vector<std::vector<int>>& lists) {
    if (static_cast<int>(lists.size()) != graph.n)
        fail(Err::InvalidInstance, "one list per vertex required");
    int width = 0;
    for (const auto& l : lists) {
        if (l.empty()) fail(Err::InvalidInstance, "empty color list");
        width = std::max(width, static_cast<int>(l.size()));
    }
    ListCover lc;
    lc.cover = Cover::make(graph, width);
    lc.slot_color.assign(graph.n, std::vector<int>(width, -1));
    for (int v = 0; v < graph.n; ++v)
        for (std::size_t i = 0; i < lists[v].size(); ++i)
            lc.slot_color[v][i] = lists[v][i];
    for (auto [u, v] : lc.cover.edge_list) {
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < width; ++i) {
            if (lc.slot_color[u][i] < 0) continue;
            for (int j = 0; j < width; ++j)
                if (lc.slot_color[v][j] == lc.slot_color[u][i]) pairs.emplace_back(i, j);
        }
        lc.cover.set_matching(u, v, std::move(pairs));
    }
    lc.cover.finalize();
    return lc;
}

struct RestrictedCover {
    Cover cover;
    std::vector<int> to_parent;  // local vertex -> parent vertex
};

/// Sub-cover induced on a vertex subset, matchings kept for inside edges.
inline RestrictedCover restrict(const Cover& cover, std::vector<int> verts) {
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    std::vector<int> local(cover.base.n, -1);
    for (std::size_t i = 0; i < verts.size(); ++i) local[verts[i]] = static_cast<int>(i);
    Graph g(static_cast<int>(verts.size()));
    for (auto [u, v] : cover.edge_list)
        if (local[u] != -1 && local[v] != -1) g.add_edge(local[u], local[v]);
    g.sort_adjacency();
    RestrictedCover rc;
    rc.cover = Cover::make(std::move(g), cover.width);
    for (int e = 0; e < static_cast<int>(cover.edge_list.size()); ++e) {
        auto [u, v] = cover.edge_list[e];
        if (local[u] == -1 || local[v] == -1) continue;
        rc.cover.set_matching(local[u], local[v], cover.matchings[e]);
    }
    rc.cover.finalize();
    rc.to_parent = std::move(verts);
    return rc;
}

inline ValueFunction restrict_values(const ValueFunction& f, const std::vector<int>& verts) {
    ValueFunction out;
    out.width = f.width;
    out.value.reserve(verts.size() * f.width);
    for (int v : verts)
        for (int i = 0; i < f.width; ++i)
            out.value.push_back(static_cast<std::int8_t>(f.at(v, i)));
    return out;
}

/// Empties the matchings of every edge with both ends inside W.
inline Cover delete_internal_edges(const Cover& cover, const std::vector<int>& w) {
    Cover out = cover;
    std::vector<char> in_w(cover.base.n, 0);
    for (int v : w) in_w[v] = 1;
    for (int e = 0; e < static_cast<int>(out.edge_list.size()); ++e) {
        auto [u, v] = out.edge_list[e];
        if (in_w[u] && in_w[v]) out.matchings[e].clear();
    }
    out.finalize();
    return out;
}

}  // namespace fdt
