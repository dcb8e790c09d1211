#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <utility>
#include <vector>

#include "fdt/errors.hpp"

namespace fdt {

/// Simple undirected graph with sorted adjacency lists.
struct Graph {
    int n = 0;
    std::vector<std::vector<int>> adj;

    Graph() = default;
    explicit Graph(int vertices) : n(vertices), adj(vertices) {}

    static Graph from_edges(int vertices, const std::vector<std::pair<int, int>>& edges) {
        Graph g(vertices);
        for (auto [u, v] : edges) g.add_edge(u, v);
        g.sort_adjacency();
        return g;
    }

    void add_edge(int u, int v) {
        if (u == v) fail(Err::InvalidInstance, "loop edge " + std::to_string(u));
        if (u < 0 || v < 0 || u >= n || v >= n)
            fail(Err::InvalidInstance, "edge endpoint out of range");
        adj[u].push_back(v);
        adj[v].push_back(u);
    }

    void sort_adjacency() {
        for (auto& nb : adj) std::sort(nb.begin(), nb.end());
    }

    bool has_edge(int u, int v) const {
        return std::binary_search(adj[u].begin(), adj[u].end(), v);
    }

    int degree(int v) const { return static_cast<int>(adj[v].size()); }

    std::size_t edge_count() const {
        std::size_t d = 0;
        for (const auto& nb : adj) d += nb.size();
        return d / 2;
    }

    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        for (int u = 0; u < n; ++u)
            for (int v : adj[u])
                if (u < v) out.emplace_back(u, v);
        return out;
    }

    bool connected() const {
        if (n == 0) return true;
        std::vector<char> seen(n, 0);
        std::queue<int> q;
        q.push(0);
        seen[0] = 1;
        int count = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int w : adj[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    ++count;
                    q.push(w);
                }
        }
        return count == n;
    }

    /// Checks simplicity and symmetry; adjacency must already be sorted.
    void validate() const {
        if (static_cast<int>(adj.size()) != n)
            fail(Err::InvalidInstance, "adjacency size mismatch");
        for (int v = 0; v < n; ++v) {
            const auto& nb = adj[v];
            if (!std::is_sorted(nb.begin(), nb.end()))
                fail(Err::InvalidInstance, "adjacency not sorted at " + std::to_string(v));
            for (std::size_t i = 0; i < nb.size(); ++i) {
                int w = nb[i];
                if (w < 0 || w >= n) fail(Err::InvalidInstance, "neighbor out of range");
                if (w == v) fail(Err::InvalidInstance, "loop at " + std::to_string(v));
                if (i + 1 < nb.size() && nb[i + 1] == w)
                    fail(Err::InvalidInstance, "parallel edge " + std::to_string(v) + "-" +
                                                   std::to_string(w));
                if (!has_edge(w, v))
                    fail(Err::InvalidInstance, "asymmetric edge " + std::to_string(v) + "-" +
                                                   std::to_string(w));
            }
        }
    }

    bool same_edges(const Graph& other) const {
        return n == other.n && adj == other.adj;
    }
};

}  // namespace fdt
