#pragma once

#include <algorithm>
#include <array>
#include <memory>
#include <numeric>
#include <utility>
#include <variant>
#include <vector>

#include "fdt/cover.hpp"
#include "fdt/embedding.hpp"
#include "fdt/errors.hpp"
#include "fdt/solver.hpp"

namespace fdt {

/// Plane triangulation leaf: every face of the embedding is a triangle.
struct TriLeaf {
    PlaneEmbedding emb;
    FaceSet faces;
    int outer_face = 0;
    std::vector<int> to_global;
};

struct WagnerLeaf {
    std::array<int, 8> to_global;
};

struct K5Leaf {
    std::array<int, 5> to_global;
};

struct TreeNode;

struct SumNode {
    int arity = 2;  // 2-sum or 3-sum
    std::vector<int> seam;
    std::unique_ptr<TreeNode> first, second;  // seed side is listed first
};

struct TreeNode {
    std::variant<TriLeaf, WagnerLeaf, K5Leaf, SumNode> data;
    std::vector<int> vertices;  // sorted global ids of the subtree
};

inline std::vector<std::pair<int, int>> wagner_edges() {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < 8; ++i) e.emplace_back(i, (i + 1) % 8);
    for (int i = 0; i < 4; ++i) e.emplace_back(i, i + 4);
    return e;
}

inline Graph wagner_graph() { return Graph::from_edges(8, wagner_edges()); }

/// Decomposition witness: triangulation/Wagner/K5 leaves joined by 2-sums
/// and 3-sums whose seams are complete in both children.
struct DecompositionTree {
    std::unique_ptr<TreeNode> root;
    int n = 0;

    bool has_wagner() const { return count_kind_(1) > 0; }
    bool has_k5() const { return count_kind_(2) > 0; }
    bool has_sum3() const { return count_kind_(3) > 0; }

    Graph flatten() const {
        std::vector<std::pair<int, int>> edges;
        collect_edges_(root.get(), edges);
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        return Graph::from_edges(n, edges);
    }

    /// Computes subtree vertex sets and checks all structural invariants.
    void finalize() {
        if (!root) fail(Err::InvalidInstance, "empty decomposition tree");
        finalize_(root.get());
        for (int v : root->vertices)
            if (v < 0 || v >= n) fail(Err::InvalidInstance, "leaf vertex id out of range");
        if (static_cast<int>(root->vertices.size()) != n)
            fail(Err::InvalidInstance, "tree does not cover every vertex");
        Graph flat = flatten();
        if (!flat.connected()) fail(Err::InvalidInstance, "flattened graph is disconnected");
        check_structure_(root.get(), flat);
        if (has_k5() && has_wagner())
            fail(Err::InvalidInstance, "K5 and Wagner leaves cannot share a tree");
        if (has_k5() && has_sum3())
            fail(Err::InvalidInstance, "trees with K5 leaves take 2-sums only");
    }

private:
    static void leaf_edges_(const TreeNode* node, std::vector<std::pair<int, int>>& out) {
        if (auto* t = std::get_if<TriLeaf>(&node->data)) {
            for (auto [u, v] : t->emb.graph.edges())
                out.emplace_back(std::min(t->to_global[u], t->to_global[v]),
                                 std::max(t->to_global[u], t->to_global[v]));
        } else if (auto* wl = std::get_if<WagnerLeaf>(&node->data)) {
            for (auto [u, v] : wagner_edges())
                out.emplace_back(std::min(wl->to_global[u], wl->to_global[v]),
                                 std::max(wl->to_global[u], wl->to_global[v]));
        } else if (auto* k = std::get_if<K5Leaf>(&node->data)) {
            for (int i = 0; i < 5; ++i)
                for (int j = i + 1; j < 5; ++j)
                    out.emplace_back(std::min(k->to_global[i], k->to_global[j]),
                                     std::max(k->to_global[i], k->to_global[j]));
        }
    }

    static void collect_edges_(const TreeNode* node, std::vector<std::pair<int, int>>& out) {
        if (!node) return;
        leaf_edges_(node, out);
        if (auto* s = std::get_if<SumNode>(&node->data)) {
            collect_edges_(s->first.get(), out);
            collect_edges_(s->second.get(), out);
        }
    }

    int count_kind_(int kind) const { return count_kind_(root.get(), kind); }
    static int count_kind_(const TreeNode* node, int kind) {
        if (!node) return 0;
        int c = 0;
        if (kind == 1 && std::holds_alternative<WagnerLeaf>(node->data)) c = 1;
        if (kind == 2 && std::holds_alternative<K5Leaf>(node->data)) c = 1;
        if (auto* s = std::get_if<SumNode>(&node->data)) {
            if (kind == 3 && s->arity == 3) c = 1;
            c += count_kind_(s->first.get(), kind) + count_kind_(s->second.get(), kind);
        }
        return c;
    }

    static void finalize_(TreeNode* node) {
        auto& verts = node->vertices;
        verts.clear();
        if (auto* t = std::get_if<TriLeaf>(&node->data)) {
            verts = t->to_global;
        } else if (auto* wl = std::get_if<WagnerLeaf>(&node->data)) {
            verts.assign(wl->to_global.begin(), wl->to_global.end());
        } else if (auto* k = std::get_if<K5Leaf>(&node->data)) {
            verts.assign(k->to_global.begin(), k->to_global.end());
        } else {
            auto* s = std::get_if<SumNode>(&node->data);
            finalize_(s->first.get());
            finalize_(s->second.get());
            verts = s->first->vertices;
            verts.insert(verts.end(), s->second->vertices.begin(), s->second->vertices.end());
            std::sort(verts.begin(), verts.end());
            verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
        }
        std::vector<int> dedup = verts;
        std::sort(dedup.begin(), dedup.end());
        if (std::adjacent_find(dedup.begin(), dedup.end()) != dedup.end())
            fail(Err::InvalidInstance, "leaf repeats a global vertex");
        if (!std::holds_alternative<SumNode>(node->data)) verts = std::move(dedup);
    }

    static void check_structure_(const TreeNode* node, const Graph& flat) {
        if (auto* t = std::get_if<TriLeaf>(&node->data)) {
            for (const auto& w : t->faces.walk)
                if (w.size() != 3)
                    fail(Err::InvalidInstance, "triangulation leaf has a non-triangle face");
            if (t->outer_face < 0 || t->outer_face >= t->faces.count())
                fail(Err::InvalidInstance, "leaf outer face out of range");
            return;
        }
        if (auto* s = std::get_if<SumNode>(&node->data)) {
            if (s->arity != 2 && s->arity != 3)
                fail(Err::InvalidInstance, "sum arity must be 2 or 3");
            if (static_cast<int>(s->seam.size()) != s->arity)
                fail(Err::InvalidInstance, "seam size does not match the sum arity");
            const auto& a = s->first->vertices;
            const auto& b = s->second->vertices;
            std::vector<int> inter;
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(inter));
            std::vector<int> seam = s->seam;
            std::sort(seam.begin(), seam.end());
            if (inter != seam)
                fail(Err::InvalidInstance, "children must intersect exactly in the seam");
            for (std::size_t i = 0; i < seam.size(); ++i)
                for (std::size_t j = i + 1; j < seam.size(); ++j)
                    if (!flat.has_edge(seam[i], seam[j]))
                        fail(Err::InvalidInstance, "seam is not complete");
            check_structure_(s->first.get(), flat);
            check_structure_(s->second.get(), flat);
        }
    }
};

inline TriLeaf make_tri_leaf(PlaneEmbedding emb, int outer_face, std::vector<int> to_global) {
    TriLeaf leaf;
    leaf.faces = trace_faces(emb);
    for (const auto& w : leaf.faces.walk)
        if (w.size() != 3) fail(Err::InvalidInstance, "leaf is not a plane triangulation");
    leaf.outer_face = outer_face;
    leaf.emb = std::move(emb);
    leaf.to_global = std::move(to_global);
    if (static_cast<int>(leaf.to_global.size()) != leaf.emb.graph.n)
        fail(Err::InvalidInstance, "leaf vertex map size mismatch");
    return leaf;
}

namespace detail {

/// Solves one decomposition node given the seed already written to the
/// context; returns the removing order, seed choices rightmost in seed_tail
/// order.
class TreeSolver {
public:
    TreeSolver(SolveContext& ctx) : ctx_(ctx) {}

    static bool node_contains(const TreeNode* node, const std::vector<int>& what) {
        return contains(node->vertices, what);
    }

    std::vector<SlotId> solve(const TreeNode* node, const std::vector<int>& seed_verts,
                              const std::vector<SlotId>& seed_tail) {
        if (auto* s = std::get_if<SumNode>(&node->data)) return solve_sum(*s, seed_verts, seed_tail);
        if (auto* t = std::get_if<TriLeaf>(&node->data)) return solve_tri(*t, seed_verts, seed_tail);
        if (auto* wl = std::get_if<WagnerLeaf>(&node->data)) {
            ++ctx_.stats().wagner_leaves;
            std::vector<int> verts(wl->to_global.begin(), wl->to_global.end());
            return solve_low_degree(verts, seed_tail);
        }
        auto* k = std::get_if<K5Leaf>(&node->data);
        ++ctx_.stats().k5_leaves;
        std::vector<int> verts(k->to_global.begin(), k->to_global.end());
        return solve_low_degree(verts, seed_tail);
    }

private:
    SolveContext& ctx_;

    static bool contains(const std::vector<int>& sorted, const std::vector<int>& what) {
        for (int v : what)
            if (!std::binary_search(sorted.begin(), sorted.end(), v)) return false;
        return true;
    }

    std::vector<SlotId> solve_sum(const SumNode& sum, const std::vector<int>& seed_verts,
                                  const std::vector<SlotId>& seed_tail) {
        ++ctx_.stats().sum_nodes;
        const TreeNode* target = nullptr;
        const TreeNode* other = nullptr;
        if (contains(sum.first->vertices, seed_verts)) {
            target = sum.first.get();
            other = sum.second.get();
        } else if (contains(sum.second->vertices, seed_verts)) {
            target = sum.second.get();
            other = sum.first.get();
        } else {
            fail(Err::SeedNotInTree, "seed does not fit inside one child");
        }
        auto first_order = solve(target, seed_verts, seed_tail);

        std::vector<int> seam = sum.seam;
        std::sort(seam.begin(), seam.end());
        std::vector<SlotId> seam_slots;
        for (int v : seam) seam_slots.push_back(ctx_.chosen_slot(v));
        auto bmark = ctx_.budget_mark();
        auto emark = ctx_.edge_mark();
        for (SlotId s : seam_slots) ctx_.set_budget(s, 1);
        for (std::size_t i = 0; i < seam.size(); ++i)
            for (std::size_t j = i + 1; j < seam.size(); ++j)
                ctx_.disable_edge(ctx_.cover.edge_id(seam[i], seam[j]));
        auto second_order = solve(other, seam, seam_slots);
        // the pinned seam choices must sit rightmost before dropping them
        second_order = pin_rightmost(std::move(second_order), seam_slots);
        ctx_.restore_edges(emark);
        ctx_.restore_budget(bmark);
        second_order.resize(second_order.size() - seam.size());
        second_order.insert(second_order.end(), first_order.begin(), first_order.end());
        return second_order;
    }

    std::vector<SlotId> pin_rightmost(std::vector<SlotId> order,
                                      const std::vector<SlotId>& pinned) {
        bool tail_ok = order.size() >= pinned.size();
        if (tail_ok) {
            std::vector<SlotId> t(order.end() - pinned.size(), order.end());
            std::vector<SlotId> p = pinned;
            std::sort(t.begin(), t.end());
            std::sort(p.begin(), p.end());
            tail_ok = (t == p);
        }
        if (tail_ok) return order;
        std::vector<SlotId> out;
        out.reserve(order.size());
        for (SlotId s : order)
            if (std::find(pinned.begin(), pinned.end(), s) == pinned.end()) out.push_back(s);
        for (SlotId s : order)
            if (std::find(pinned.begin(), pinned.end(), s) != pinned.end()) out.push_back(s);
        return out;
    }

    std::vector<SlotId> solve_low_degree(const std::vector<int>& verts,
                                         const std::vector<SlotId>& seed_tail) {
        std::vector<int> to_color;
        for (int v : verts)
            if (ctx_.choice[v] < 0) to_color.push_back(v);
        std::sort(to_color.begin(), to_color.end());
        return greedy_in_context(ctx_, to_color, seed_tail);
    }

    std::vector<SlotId> solve_tri(const TriLeaf& leaf, const std::vector<int>& seed_verts,
                                  const std::vector<SlotId>& seed_tail) {
        ++ctx_.stats().tri_leaves;
        int ln = leaf.emb.graph.n;
        std::vector<int> to_local(ctx_.cover.base.n, -1);
        for (int i = 0; i < ln; ++i) to_local[leaf.to_global[i]] = i;

        std::vector<int> k_local;
        for (int v : seed_verts) {
            check_internal(to_local[v] >= 0, "seed vertex missing from its leaf");
            k_local.push_back(to_local[v]);
        }
        std::vector<SlotId> tail = seed_tail;

        NtEngine engine(ctx_, leaf.emb, leaf.to_global);

        if (k_local.size() == 2) {
            // promote the edge seed across an incident triangle
            ++ctx_.stats().edge_promotions;
            int a = k_local[0], b = k_local[1];
            int f1 = leaf.faces.face_at(leaf.emb, a, b);
            int f2 = leaf.faces.face_at(leaf.emb, b, a);
            int z1 = third_corner(leaf.faces.walk[f1], a, b);
            int z2 = third_corner(leaf.faces.walk[f2], a, b);
            int z = std::min(leaf.to_global[z1], leaf.to_global[z2]) == leaf.to_global[z1] ? z1
                                                                                           : z2;
            auto zorder = greedy_in_context(ctx_, {leaf.to_global[z]}, {});
            k_local.push_back(z);
            std::vector<SlotId> t3{zorder[0]};
            t3.insert(t3.end(), tail.begin(), tail.end());
            tail = std::move(t3);
        }

        // the facial cases: a triangle face with exactly the seed's corners
        int a = k_local[0], b = k_local[1], c = k_local[2];
        int face = face_with_corners(leaf, a, b, c);
        if (face >= 0) {
            std::vector<int> all(ln);
            std::iota(all.begin(), all.end(), 0);
            return solve_region(engine, leaf, all, k_local, tail);
        }

        // separating triangle: split the sphere's faces at the seed's edges
        ++ctx_.stats().separating_splits;
        auto groups = flood_groups(leaf, a, b, c);
        check_internal(groups.size() == 2, "separating triangle must split faces in two");
        auto verts_of = [&](const std::vector<int>& faces_in) {
            std::vector<char> flag(ln, 0);
            for (int f : faces_in)
                for (int v : leaf.faces.walk[f]) flag[v] = 1;
            flag[a] = flag[b] = flag[c] = 1;
            std::vector<int> out;
            for (int v = 0; v < ln; ++v)
                if (flag[v]) out.push_back(v);
            return out;
        };
        auto va = verts_of(groups[0]);
        auto vb = verts_of(groups[1]);
        auto min_inside = [&](const std::vector<int>& vs) {
            int best = ctx_.cover.base.n;
            for (int v : vs)
                if (v != a && v != b && v != c) best = std::min(best, leaf.to_global[v]);
            return best;
        };
        if (min_inside(vb) < min_inside(va)) std::swap(va, vb);

        auto order_a = solve_region(engine, leaf, va, k_local, tail);
        std::vector<SlotId> k_slots;
        for (int v : k_local) k_slots.push_back(ctx_.chosen_slot(leaf.to_global[v]));
        auto bmark = ctx_.budget_mark();
        auto emark = ctx_.edge_mark();
        for (SlotId s : k_slots) ctx_.set_budget(s, 1);
        for (std::size_t i = 0; i < k_local.size(); ++i)
            for (std::size_t j = i + 1; j < k_local.size(); ++j)
                ctx_.disable_edge(ctx_.cover.edge_id(leaf.to_global[k_local[i]],
                                                     leaf.to_global[k_local[j]]));
        std::vector<SlotId> tail_b = k_slots;  // any order works at value 1
        auto order_b = solve_region(engine, leaf, vb, k_local, tail_b);
        order_b = pin_rightmost(std::move(order_b), k_slots);
        ctx_.restore_edges(emark);
        ctx_.restore_budget(bmark);
        order_b.resize(order_b.size() - k_slots.size());
        order_b.insert(order_b.end(), order_a.begin(), order_a.end());
        return order_b;
    }

    static int third_corner(const std::vector<int>& walk, int a, int b) {
        for (int v : walk)
            if (v != a && v != b) return v;
        fail(Err::InternalFailure, "degenerate triangle face");
    }

    static int face_with_corners(const TriLeaf& leaf, int a, int b, int c) {
        for (int f : {leaf.faces.face_at(leaf.emb, a, b), leaf.faces.face_at(leaf.emb, b, a)}) {
            const auto& w = leaf.faces.walk[f];
            if (std::find(w.begin(), w.end(), c) != w.end()) return f;
        }
        return -1;
    }

    /// Face groups obtained by flooding across all edges except ab, bc, ca.
    static std::vector<std::vector<int>> flood_groups(const TriLeaf& leaf, int a, int b, int c) {
        auto barrier = [&](int u, int v) {
            auto in = [&](int x, int p, int q) { return x == p || x == q; };
            return (in(u, a, b) && in(v, a, b)) || (in(u, b, c) && in(v, b, c)) ||
                   (in(u, a, c) && in(v, a, c));
        };
        int nf = leaf.faces.count();
        std::vector<int> group(nf, -1);
        std::vector<std::vector<int>> groups;
        for (int start = 0; start < nf; ++start) {
            if (group[start] != -1) continue;
            int g = static_cast<int>(groups.size());
            groups.emplace_back();
            std::vector<int> bfs{start};
            group[start] = g;
            while (!bfs.empty()) {
                int f = bfs.back();
                bfs.pop_back();
                groups[g].push_back(f);
                const auto& w = leaf.faces.walk[f];
                for (std::size_t k = 0; k < w.size(); ++k) {
                    int u = w[k], v = w[(k + 1) % w.size()];
                    if (barrier(u, v)) continue;
                    int nb = leaf.faces.face_at(leaf.emb, v, u);
                    if (group[nb] == -1) {
                        group[nb] = g;
                        bfs.push_back(nb);
                    }
                }
            }
        }
        return groups;
    }

    /// Region bounded by the seed triangle: peel the first seed choice and
    /// extend across the rest by the near-triangulation recursion.
    std::vector<SlotId> solve_region(NtEngine& engine, const TriLeaf& leaf,
                                     const std::vector<int>& region, std::vector<int> k_local,
                                     const std::vector<SlotId>& tail) {
        if (region.size() == 3) return tail;  // the region is the seed triangle itself

        int gx3 = ctx_.cover.slot_vertex(tail[0]);
        int x3 = -1, x1 = -1, x2 = -1;
        for (int v : k_local) {
            if (leaf.to_global[v] == gx3)
                x3 = v;
            else if (x1 < 0)
                x1 = v;
            else
                x2 = v;
        }
        check_internal(x3 >= 0 && x1 >= 0 && x2 >= 0, "seed triangle bookkeeping broken");
        // align (x1, x2) with the tail pair (ρ2, ρ3)
        if (leaf.to_global[x1] != ctx_.cover.slot_vertex(tail[1])) std::swap(x1, x2);
        check_internal(leaf.to_global[x1] == ctx_.cover.slot_vertex(tail[1]) &&
                           leaf.to_global[x2] == ctx_.cover.slot_vertex(tail[2]),
                       "seed tail does not name the seed vertices");

        // zero every slot matched to the peeled choice, except on x1, x2
        auto bmark = ctx_.budget_mark();
        int g1 = leaf.to_global[x1], g2 = leaf.to_global[x2];
        for (auto [t, e] : ctx_.cover.slot_adj[tail[0]]) {
            if (ctx_.edge_off[e]) continue;
            int wv = ctx_.cover.slot_vertex(t);
            if (wv == g1 || wv == g2) continue;
            ctx_.set_budget(t, 0);
        }

        std::vector<char> in_region(leaf.emb.graph.n, 0);
        for (int v : region) in_region[v] = 1;
        std::vector<int> ring;
        for (int w : leaf.emb.rotation[x3])
            if (in_region[w]) ring.push_back(w);
        int deg = static_cast<int>(ring.size());
        std::vector<int> outer;
        {
            int i1 = -1, i2 = -1;
            for (int k = 0; k < deg; ++k) {
                if (ring[k] == x1) i1 = k;
                if (ring[k] == x2) i2 = k;
            }
            check_internal(i1 >= 0 && i2 >= 0, "seed pair missing around the peeled vertex");
            std::vector<int> arc;
            bool adjacent_12 = (i2 == (i1 + 1) % deg);
            bool adjacent_21 = (i1 == (i2 + 1) % deg);
            check_internal(adjacent_12 || adjacent_21,
                           "seed pair not rotation-adjacent around the peeled vertex");
            if (adjacent_21) {
                for (int k = (i1 + 1) % deg; k != i2; k = (k + 1) % deg) arc.push_back(ring[k]);
                outer.push_back(x1);
                outer.insert(outer.end(), arc.begin(), arc.end());
                outer.push_back(x2);
            } else {
                for (int k = (i2 + 1) % deg; k != i1; k = (k + 1) % deg) arc.push_back(ring[k]);
                outer.push_back(x2);
                outer.insert(outer.end(), arc.begin(), arc.end());
                outer.push_back(x1);
            }
        }
        root_cycle(outer, x1, x2);

        std::vector<int> verts;
        verts.reserve(region.size() - 1);
        for (int v : region)
            if (v != x3) verts.push_back(v);

        auto order = engine.solve(std::move(verts), std::move(outer),
                                  {x1, x2, tail[1], tail[2]});
        ctx_.restore_budget(bmark);
        check_internal(order.size() >= 2, "region order too short");
        order.insert(order.end() - 2, tail[0]);
        return order;
    }
};

}  // namespace detail

/// Extends a DP cover with empty matchings on the supergraph's extra edges;
/// transversals of the result restrict to valid transversals of the original.
inline Cover augment_to_maximal(const Cover& cover, const Graph& supergraph) {
    if (cover.base.n != supergraph.n)
        fail(Err::NotSpanning, "vertex sets differ");
    for (auto [u, v] : cover.edge_list)
        if (!supergraph.has_edge(u, v))
            fail(Err::NotSpanning, "edge " + std::to_string(u) + "-" + std::to_string(v) +
                                       " missing from the supergraph");
    Cover out = Cover::make(supergraph, cover.width);
    for (int e = 0; e < static_cast<int>(cover.edge_list.size()); ++e) {
        auto [u, v] = cover.edge_list[e];
        out.set_matching(u, v, cover.matchings[e]);
    }
    out.finalize();
    return out;
}

inline void validate_decomposition_instance(const DecompositionTree& tree, const Cover& cover,
                                            const ValueFunction& f, const SeedColoring& seed) {
    Graph flat = tree.flatten();
    if (!cover.base.same_edges(flat))
        fail(Err::InvalidInstance, "cover base differs from the flattened tree graph");
    if (f.width != cover.width || static_cast<int>(f.value.size()) != cover.slot_count())
        fail(Err::InvalidInstance, "value function shape mismatch");
    for (auto x : f.value)
        if (x < 0 || x > 2) fail(Err::InvalidInstance, "values must lie in {0,1,2}");
    for (int v = 0; v < cover.base.n; ++v)
        if (f.vertex_sum(v) < 5)
            fail(Err::InvalidInstance, "vertex " + std::to_string(v) + " has budget sum " +
                                           std::to_string(f.vertex_sum(v)) + " < 5");
    if (seed.vertices.size() < 2 || seed.vertices.size() > 3 ||
        seed.vertices.size() != seed.slots.size())
        fail(Err::InvalidInstance, "seed must color a K2 or K3");
    if (seed.vertices.size() == 3 && tree.has_k5())
        fail(Err::InvalidInstance, "trees with K5 leaves take K2 seeds only");
    for (std::size_t i = 0; i < seed.vertices.size(); ++i) {
        if (seed.vertices[i] < 0 || seed.vertices[i] >= cover.base.n)
            fail(Err::InvalidInstance, "seed vertex out of range");
        if (seed.slots[i] < 0 || seed.slots[i] >= cover.width)
            fail(Err::InvalidInstance, "seed slot out of range");
        for (std::size_t j = i + 1; j < seed.vertices.size(); ++j)
            if (!cover.base.has_edge(seed.vertices[i], seed.vertices[j]))
                fail(Err::InvalidInstance, "seed does not induce a complete subgraph");
    }
}

/// Theorem pipeline over the decomposition witness: routes the seed to its
/// part, splits triangulation leaves at separating triangles, re-roots facial
/// seeds, extends greedily on Wagner/K5 leaves, and glues across seams.
inline Transversal solve_decomposition(const DecompositionTree& tree, const Cover& cover,
                                       const ValueFunction& f, const SeedColoring& seed,
                                       const SolveOptions& opts = {}) {
    validate_decomposition_instance(tree, cover, f, seed);
    SolveContext ctx(cover, f, opts);
    for (std::size_t i = 0; i < seed.vertices.size(); ++i)
        ctx.choice[seed.vertices[i]] = seed.slots[i];

    // removing order of the seed itself
    std::vector<SlotId> tail;
    {
        auto rc = restrict(cover, seed.vertices);
        auto rf = restrict_values(f, rc.to_parent);
        std::vector<int> sub_choice(rc.to_parent.size());
        for (std::size_t i = 0; i < rc.to_parent.size(); ++i)
            sub_choice[i] = ctx.choice[rc.to_parent[i]];
        auto peel = is_strictly_f_degenerate(rc.cover, rf, sub_choice);
        if (!peel.ok) fail(Err::InvalidInstance, "seed is not strictly degenerate");
        for (SlotId s : peel.order)
            tail.push_back(
                cover.slot(rc.to_parent[rc.cover.slot_vertex(s)], rc.cover.slot_index(s)));
    }

    detail::TreeSolver solver(ctx);
    if (!detail::TreeSolver::node_contains(tree.root.get(), seed.vertices))
        fail(Err::SeedNotInTree, "seed vertices missing from the tree");
    Transversal out;
    out.order = solver.solve(tree.root.get(), seed.vertices, tail);
    out.choice = std::move(ctx.choice);
    if (!verify_removing_order(cover, f, out.choice, out.order))
        fail(Err::InternalFailure, "emitted order failed verification");
    return out;
}

}  // namespace fdt
