#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <random>
#include <utility>
#include <vector>

#include "fdt/cover.hpp"
#include "fdt/errors.hpp"
#include "fdt/graph.hpp"

namespace fdt {

struct OracleBudget {
    int max_vertices = 8;
    int max_width = 4;
    long long max_nodes = 2'000'000;
    int time_limit_ms = 60'000;
};

namespace detail {

/// Ordering-free strict degeneracy check: a set is strictly f-degenerate iff
/// some vertex has degree below its f-value and the rest still is, trying
/// every removal choice. Independent of the greedy peel in cover.hpp.
class SfdSearch {
public:
    SfdSearch(const std::vector<std::vector<int>>& adj, const std::vector<int>& fvals)
        : adj_(adj), f_(fvals), k_(static_cast<int>(adj.size())) {
        if (k_ > 24) fail(Err::BudgetExceeded, "degeneracy search limited to 24 vertices");
        memo_.assign(std::size_t(1) << k_, -1);
    }

    bool ok(std::uint32_t set) {
        if (set == 0) return true;
        auto& m = memo_[set];
        if (m != -1) return m == 1;
        m = 0;
        for (int x = 0; x < k_; ++x) {
            if (!(set >> x & 1)) continue;
            int deg = 0;
            for (int y : adj_[x]) deg += (set >> y) & 1;
            if (deg < f_[x] && ok(set & ~(std::uint32_t(1) << x))) {
                m = 1;
                break;
            }
        }
        return m == 1;
    }

    /// Removing order of the full set; call only after ok(full) returned true.
    std::vector<int> witness_order() {
        std::uint32_t set = (k_ == 32 ? ~0u : (std::uint32_t(1) << k_) - 1);
        std::vector<int> order;
        while (set) {
            bool found = false;
            for (int x = 0; x < k_ && !found; ++x) {
                if (!(set >> x & 1)) continue;
                int deg = 0;
                for (int y : adj_[x]) deg += (set >> y) & 1;
                if (deg < f_[x] && ok(set & ~(std::uint32_t(1) << x))) {
                    order.push_back(x);
                    set &= ~(std::uint32_t(1) << x);
                    found = true;
                }
            }
            check_internal(found, "witness reconstruction stuck");
        }
        return order;
    }

private:
    const std::vector<std::vector<int>>& adj_;
    const std::vector<int>& f_;
    int k_;
    std::vector<std::int8_t> memo_;
};

}  // namespace detail

/// Backtracking verdict on a full transversal; used for differential checks
/// against the greedy verifier.
inline bool strictly_degenerate_by_search(const Cover& cover, const ValueFunction& f,
                                          const std::vector<int>& choice) {
    int n = cover.base.n;
    auto adj = detail::chosen_adjacency(cover, choice);
    std::vector<int> fv(n);
    for (int v = 0; v < n; ++v) fv[v] = f.at(v, choice[v]);
    detail::SfdSearch search(adj, fv);
    return search.ok(n >= 32 ? ~0u : (std::uint32_t(1) << n) - 1);
}

/// Exhaustive search for a strictly f-degenerate transversal extending the
/// seed. Vertices are tried in BFS order from the seed, slots ascending;
/// every partial assignment is certified by the backtracking checker.
inline std::optional<Transversal> exhaustive_transversal(const Cover& cover,
                                                         const ValueFunction& f,
                                                         const SeedColoring& seed,
                                                         const OracleBudget& budget = {}) {
    int n = cover.base.n;
    if (n > budget.max_vertices)
        fail(Err::BudgetExceeded, "instance has " + std::to_string(n) + " vertices");
    if (cover.width > budget.max_width)
        fail(Err::BudgetExceeded, "cover width " + std::to_string(cover.width));

    // BFS order from the seed
    std::vector<int> order_of_vertex;
    {
        std::vector<char> seen(n, 0);
        std::queue<int> q;
        for (int v : seed.vertices)
            if (!seen[v]) {
                seen[v] = 1;
                q.push(v);
            }
        auto drain = [&]() {
            while (!q.empty()) {
                int v = q.front();
                q.pop();
                order_of_vertex.push_back(v);
                for (int w : cover.base.adj[v])
                    if (!seen[w]) {
                        seen[w] = 1;
                        q.push(w);
                    }
            }
        };
        drain();
        for (int v = 0; v < n; ++v)
            if (!seen[v]) {
                seen[v] = 1;
                q.push(v);
                drain();
            }
    }

    std::vector<int> fixed(n, -1);
    for (std::size_t i = 0; i < seed.vertices.size(); ++i) fixed[seed.vertices[i]] = seed.slots[i];

    std::vector<int> choice(n, -1);
    std::vector<std::vector<int>> partial_adj(n);  // in assignment positions
    std::vector<int> partial_f;
    long long nodes = 0;
    auto t0 = std::chrono::steady_clock::now();

    // maps vertex -> its position in the assignment stack
    std::vector<int> stack_pos(n, -1);

    std::optional<Transversal> found;

    auto partial_ok = [&]() {
        int k = static_cast<int>(partial_f.size());
        // only the first k adjacency rows are live
        std::vector<std::vector<int>> live(partial_adj.begin(), partial_adj.begin() + k);
        detail::SfdSearch search(live, partial_f);
        return search.ok(k >= 32 ? ~0u : (std::uint32_t(1) << k) - 1);
    };

    std::function<bool(int)> rec = [&](int depth) -> bool {
        if (++nodes > budget.max_nodes) fail(Err::BudgetExceeded, "node budget exhausted");
        if ((nodes & 1023) == 0) {
            auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
            if (ms > budget.time_limit_ms) fail(Err::BudgetExceeded, "time budget exhausted");
        }
        if (depth == n) {
            int k = n;
            std::vector<std::vector<int>> live(partial_adj.begin(), partial_adj.begin() + k);
            detail::SfdSearch search(live, partial_f);
            if (!search.ok(k >= 32 ? ~0u : (std::uint32_t(1) << k) - 1)) return false;
            Transversal t;
            t.choice = choice;
            for (int x : search.witness_order())
                t.order.push_back(cover.slot(order_of_vertex[x], choice[order_of_vertex[x]]));
            found = t;
            return true;
        }
        int v = order_of_vertex[depth];
        int lo = 0, hi = cover.width;
        if (fixed[v] != -1) {
            lo = fixed[v];
            hi = fixed[v] + 1;
        }
        for (int i = lo; i < hi; ++i) {
            if (f.at(v, i) <= 0) continue;
            choice[v] = i;
            stack_pos[v] = depth;
            partial_f.push_back(f.at(v, i));
            partial_adj[depth].clear();
            for (auto [t, e] : cover.slot_adj[cover.slot(v, i)]) {
                int w = cover.slot_vertex(t);
                if (stack_pos[w] >= 0 && stack_pos[w] < depth &&
                    choice[w] == cover.slot_index(t)) {
                    partial_adj[depth].push_back(stack_pos[w]);
                    partial_adj[stack_pos[w]].push_back(depth);
                }
            }
            if (partial_ok() && rec(depth + 1)) return true;
            for (int p : partial_adj[depth]) {
                auto& row = partial_adj[p];
                row.erase(std::find(row.begin(), row.end(), depth));
            }
            partial_adj[depth].clear();
            partial_f.pop_back();
            stack_pos[v] = -1;
            choice[v] = -1;
        }
        return false;
    };
    rec(0);
    return found;
}

/// All partial injective pairings between two slot ranges of size k, or only
/// the perfect ones. Partial matchings are dominated for refutation: removing
/// pairs can only make a cover easier to color.
inline std::vector<std::vector<std::pair<int, int>>> enumerate_matchings(int k,
                                                                         bool perfect_only) {
    std::vector<std::vector<std::pair<int, int>>> out;
    if (perfect_only) {
        std::vector<int> perm(k);
        for (int i = 0; i < k; ++i) perm[i] = i;
        do {
            std::vector<std::pair<int, int>> m;
            for (int i = 0; i < k; ++i) m.emplace_back(i, perm[i]);
            out.push_back(std::move(m));
        } while (std::next_permutation(perm.begin(), perm.end()));
        return out;
    }
    std::vector<std::pair<int, int>> cur;
    std::vector<char> used(k, 0);
    std::function<void(int)> rec = [&](int i) {
        if (i == k) {
            out.push_back(cur);
            return;
        }
        rec(i + 1);  // slot i of u unmatched
        for (int j = 0; j < k; ++j) {
            if (used[j]) continue;
            used[j] = 1;
            cur.emplace_back(i, j);
            rec(i + 1);
            cur.pop_back();
            used[j] = 0;
        }
    };
    rec(0);
    return out;
}

struct DpVerdict {
    enum class Status { Refuted, Unrefuted, UnrefutedExhaustive };
    Status status = Status::Unrefuted;
    std::optional<Cover> witness;
    long long covers_checked = 0;

    bool refuted() const { return status == Status::Refuted; }
};

struct DpSearchOptions {
    bool exhaustive = false;  // enumerate the whole adversary space
    long long samples = 1000;
    double density = 1.0;
    std::uint64_t seed = 1;
    OracleBudget budget;
};

/// Searches for a width-k cover of the graph with no independent transversal.
/// Exhaustive mode enumerates all partial matchings for k <= 2 and all
/// perfect matchings for k >= 3; otherwise covers are sampled.
inline DpVerdict dp_colorability(const Graph& graph, int k, const DpSearchOptions& opts = {}) {
    DpVerdict verdict;
    auto edges = graph.edges();
    ValueFunction ones = ValueFunction::uniform(graph.n, k, 1);
    SeedColoring no_seed;
    auto has_coloring = [&](const Cover& c) {
        return exhaustive_transversal(c, ones, no_seed, opts.budget).has_value();
    };

    if (opts.exhaustive) {
        auto per_edge = enumerate_matchings(k, /*perfect_only=*/k >= 3);
        long long total = 1;
        for (std::size_t e = 0; e < edges.size(); ++e) {
            total *= static_cast<long long>(per_edge.size());
            if (total > opts.budget.max_nodes)
                fail(Err::BudgetExceeded, "matching space too large to exhaust");
        }
        std::vector<std::size_t> odo(edges.size(), 0);
        while (true) {
            Cover c = Cover::make(graph, k);
            for (std::size_t e = 0; e < edges.size(); ++e)
                c.set_matching(edges[e].first, edges[e].second, per_edge[odo[e]]);
            c.finalize();
            ++verdict.covers_checked;
            if (!has_coloring(c)) {
                verdict.status = DpVerdict::Status::Refuted;
                verdict.witness = std::move(c);
                return verdict;
            }
            std::size_t e = 0;
            while (e < edges.size() && ++odo[e] == per_edge.size()) odo[e++] = 0;
            if (e == edges.size()) break;
        }
        verdict.status = DpVerdict::Status::UnrefutedExhaustive;
        return verdict;
    }

    std::mt19937_64 rng(opts.seed);
    auto draw = [&](int bound) { return static_cast<int>(rng() % bound); };
    for (long long s = 0; s < opts.samples; ++s) {
        Cover c = Cover::make(graph, k);
        int pairs = static_cast<int>(opts.density * k + 0.5);
        for (auto [u, v] : edges) {
            std::vector<int> a(k), b(k);
            for (int i = 0; i < k; ++i) a[i] = b[i] = i;
            for (int i = k - 1; i > 0; --i) std::swap(a[i], a[draw(i + 1)]);
            for (int i = k - 1; i > 0; --i) std::swap(b[i], b[draw(i + 1)]);
            std::vector<std::pair<int, int>> m;
            for (int i = 0; i < pairs; ++i) m.emplace_back(a[i], b[i]);
            c.set_matching(u, v, std::move(m));
        }
        c.finalize();
        ++verdict.covers_checked;
        if (!has_coloring(c)) {
            verdict.status = DpVerdict::Status::Refuted;
            verdict.witness = std::move(c);
            return verdict;
        }
    }
    verdict.status = DpVerdict::Status::Unrefuted;
    return verdict;
}

}  // namespace fdt
