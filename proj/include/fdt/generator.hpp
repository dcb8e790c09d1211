#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fdt/cover.hpp"
#include "fdt/decomposition.hpp"
#include "fdt/embedding.hpp"
#include "fdt/errors.hpp"
#include "fdt/solver.hpp"

namespace fdt {

/// Deterministic rng wrapper; bounded draws avoid distribution objects so
/// identical seeds give identical instances everywhere.
struct Rng {
    std::mt19937_64 eng;

    explicit Rng(std::uint64_t seed) : eng(seed) {}

    std::uint64_t raw() { return eng(); }
    int below(int n) { return static_cast<int>(eng() % static_cast<std::uint64_t>(n)); }
    bool chance(double p) { return static_cast<double>(eng() >> 11) * 0x1.0p-53 < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i)
            std::swap(v[i], v[below(i + 1)]);
    }
};

struct GenSpec {
    enum class Mode { K5, K33, NT };
    enum class Profile { Ones5, TwoTwoOne, RandomSum };

    Mode mode = Mode::K5;
    int leaves = 3;
    int leaf_size = 12;     // triangulation leaf target size
    int width = 5;
    Profile profile = Profile::Ones5;
    double density = 1.0;
    int nt_size = 16;       // near-triangulation instance size (NT mode)
    double seam_seed_prob = 0.3;
    double wagner_prob = 0.25;
    double k5_prob = 0.3;
    double sum3_prob = 0.5;
    std::uint64_t seed = 1;
};

/// Random stacked triangulation: repeatedly drops a vertex into a random
/// inner face of the growing plane triangulation.
inline NearTriangulation gen_apollonian(int n, Rng& rng) {
    if (n < 3) fail(Err::InvalidInstance, "a triangulation needs at least 3 vertices");
    std::vector<std::vector<int>> rot(n);
    rot[0] = {1, 2};
    rot[1] = {2, 0};
    rot[2] = {0, 1};
    std::vector<std::array<int, 3>> inner{{0, 1, 2}};
    auto insert_after = [&](int at, int after, int v) {
        auto& r = rot[at];
        auto it = std::find(r.begin(), r.end(), after);
        check_internal(it != r.end(), "rotation bookkeeping broken");
        r.insert(it + 1, v);
    };
    for (int v = 3; v < n; ++v) {
        int fi = rng.below(static_cast<int>(inner.size()));
        auto [a, b, c] = inner[fi];
        insert_after(a, c, v);
        insert_after(b, a, v);
        insert_after(c, b, v);
        rot[v] = {a, b, c};
        inner[fi] = {a, b, v};
        inner.push_back({b, c, v});
        inner.push_back({c, a, v});
    }
    auto emb = PlaneEmbedding::make(std::move(rot));
    auto faces = trace_faces(emb);
    int outer = faces.face_at(emb, 0, 2);  // the untouched starting face
    auto nt = validate_near_triangulation(std::move(emb), outer);
    return nt;
}

/// Near-triangulation with a longer outer cycle: a stacked triangulation
/// with one outer corner deleted; the corner's neighbor ring becomes the
/// outer boundary.
inline NearTriangulation gen_near_triangulation(int n, Rng& rng) {
    auto tri = gen_apollonian(n + 1, rng);
    int victim = tri.outer_cycle[rng.below(3)];
    const auto& ring = tri.emb.rotation[victim];
    // outer corner: its two outer-cycle neighbors are rotation-adjacent
    int o1 = -1, o2 = -1;
    for (int v : tri.outer_cycle)
        if (v != victim) (o1 < 0 ? o1 : o2) = v;
    std::vector<int> cyc;
    {
        int d = static_cast<int>(ring.size());
        int i1 = -1;
        for (int k = 0; k < d; ++k)
            if (ring[k] == o1) i1 = k;
        check_internal(i1 >= 0, "outer neighbor missing around the corner");
        cyc.push_back(o1);
        for (int k = (i1 + 1) % d; ring[k] != o2; k = (k + 1) % d) {
            if (ring[k] == o1) fail(Err::InternalFailure, "corner ring does not reach o2");
            cyc.push_back(ring[k]);
        }
        cyc.push_back(o2);
        if (cyc.size() < 3) {  // walked the empty side; use the other arc
            cyc.assign(1, o2);
            int i2 = -1;
            for (int k = 0; k < d; ++k)
                if (ring[k] == o2) i2 = k;
            for (int k = (i2 + 1) % d; ring[k] != o1; k = (k + 1) % d) cyc.push_back(ring[k]);
            cyc.push_back(o1);
        }
    }
    std::vector<int> relabel(n + 1, -1);
    int next = 0;
    for (int v = 0; v <= n; ++v)
        if (v != victim) relabel[v] = next++;
    std::vector<std::vector<int>> rot(n);
    for (int v = 0; v <= n; ++v) {
        if (v == victim) continue;
        for (int w : tri.emb.rotation[v])
            if (w != victim) rot[relabel[v]].push_back(relabel[w]);
    }
    auto emb = PlaneEmbedding::make(std::move(rot));
    auto faces = trace_faces(emb);
    std::vector<int> cyc_local;
    for (int v : cyc) cyc_local.push_back(relabel[v]);
    auto outer = locate_face(faces, cyc_local);
    check_internal(outer.has_value(), "deleted corner did not leave a cycle boundary");
    return validate_near_triangulation(std::move(emb), *outer);
}

namespace detail {

inline std::vector<std::array<int, 3>> all_triangles(const Graph& g) {
    std::vector<std::array<int, 3>> out;
    for (int u = 0; u < g.n; ++u)
        for (int v : g.adj[u]) {
            if (v <= u) continue;
            for (int w : g.adj[v]) {
                if (w <= v) continue;
                if (g.has_edge(u, w)) out.push_back({u, v, w});
            }
        }
    return out;
}

}  // namespace detail

struct GeneratedTree {
    DecompositionTree tree;
    Graph flat;
};

/// Builds a random decomposition tree by repeatedly gluing a fresh leaf onto
/// the flattened graph so far, identifying a complete K2/K3 on both sides.
inline GeneratedTree gen_tree(const GenSpec& spec, Rng& rng) {
    if (spec.mode == GenSpec::Mode::NT)
        fail(Err::InvalidInstance, "tree generation needs a k5 or k33 mode spec");
    if (spec.leaves < 1) fail(Err::InvalidInstance, "need at least one leaf");

    int next_global = 0;
    auto fresh = [&](int count, const std::vector<std::pair<int, int>>& pinned) {
        // pinned: (local, global) identifications; everything else is new
        std::vector<int> map(count, -1);
        for (auto [l, g] : pinned) map[l] = g;
        for (int i = 0; i < count; ++i)
            if (map[i] < 0) map[i] = next_global++;
        return map;
    };

    auto leaf_size_draw = [&]() {
        int lo = std::max(4, spec.leaf_size / 2);
        int hi = std::max(lo + 1, spec.leaf_size * 3 / 2);
        return lo + rng.below(hi - lo);
    };

    enum class LeafKind { Tri, Wagner, K5 };
    auto pick_kind = [&]() {
        if (spec.mode == GenSpec::Mode::K5)
            return rng.chance(spec.wagner_prob) ? LeafKind::Wagner : LeafKind::Tri;
        return rng.chance(spec.k5_prob) ? LeafKind::K5 : LeafKind::Tri;
    };

    auto make_leaf = [&](LeafKind kind, const std::vector<std::pair<int, int>>& pinned)
        -> std::unique_ptr<TreeNode> {
        auto node = std::make_unique<TreeNode>();
        if (kind == LeafKind::Wagner) {
            WagnerLeaf wl;
            auto map = fresh(8, pinned);
            std::copy(map.begin(), map.end(), wl.to_global.begin());
            node->data = wl;
        } else if (kind == LeafKind::K5) {
            K5Leaf k;
            auto map = fresh(5, pinned);
            std::copy(map.begin(), map.end(), k.to_global.begin());
            node->data = k;
        } else {
            auto nt = gen_apollonian(leaf_size_draw(), rng);
            auto map = fresh(nt.size(), pinned);
            node->data = make_tri_leaf(std::move(nt.emb), nt.outer_face, std::move(map));
        }
        return node;
    };

    auto leaf_graph = [&](LeafKind kind, const TreeNode* node) {
        if (kind == LeafKind::Wagner) return wagner_graph();
        if (kind == LeafKind::K5) {
            std::vector<std::pair<int, int>> e;
            for (int i = 0; i < 5; ++i)
                for (int j = i + 1; j < 5; ++j) e.emplace_back(i, j);
            return Graph::from_edges(5, e);
        }
        return std::get<TriLeaf>(node->data).emb.graph;
    };

    LeafKind kind = pick_kind();
    auto root = make_leaf(kind, {});
    Graph flat = leaf_graph(kind, root.get());
    {
        // relabel the first leaf's local graph to globals (map is identity here)
        // nothing to do: fresh() numbered them 0..k-1 in order
    }

    for (int li = 1; li < spec.leaves; ++li) {
        LeafKind k2 = pick_kind();
        int arity = 2;
        std::vector<std::array<int, 3>> flat_tris;
        if (spec.mode == GenSpec::Mode::K5 && k2 == LeafKind::Tri && rng.chance(spec.sum3_prob)) {
            flat_tris = detail::all_triangles(flat);
            if (!flat_tris.empty()) arity = 3;
        }

        std::vector<int> left_seam;
        if (arity == 2) {
            auto edges = flat.edges();
            auto [u, v] = edges[rng.below(static_cast<int>(edges.size()))];
            left_seam = {u, v};
        } else {
            auto t = flat_tris[rng.below(static_cast<int>(flat_tris.size()))];
            left_seam = {t[0], t[1], t[2]};
        }
        rng.shuffle(left_seam);

        // the right leaf's seam: an edge or triangle of the leaf itself
        std::unique_ptr<TreeNode> leaf;
        std::vector<std::pair<int, int>> pinned;
        {
            // build the leaf locally first to pick its seam, then rebuild with
            // the identification pinned
            Rng probe(rng.raw());
            std::unique_ptr<TreeNode> trial = [&] {
                GenSpec tmp = spec;
                Rng r2(probe.eng());
                (void)tmp;
                return std::unique_ptr<TreeNode>();
            }();
        }
        // simpler: create the leaf, then choose its seam and remap globals
        leaf = make_leaf(k2, {});
        Graph lg = leaf_graph(k2, leaf.get());
        std::vector<int> right_seam_local;
        if (arity == 2) {
            auto edges = lg.edges();
            auto [u, v] = edges[rng.below(static_cast<int>(edges.size()))];
            right_seam_local = {u, v};
        } else {
            auto tris = detail::all_triangles(lg);
            check_internal(!tris.empty(), "3-sum against a triangle-free leaf");
            auto t = tris[rng.below(static_cast<int>(tris.size()))];
            right_seam_local = {t[0], t[1], t[2]};
        }
        // identify right_seam_local[i] with left_seam[i]; remap the leaf's
        // fresh globals so seam locals take the left globals
        std::vector<int>* map = nullptr;
        if (auto* t = std::get_if<TriLeaf>(&leaf->data)) map = &t->to_global;
        std::vector<int> tmp_map;
        if (auto* wl = std::get_if<WagnerLeaf>(&leaf->data))
            tmp_map.assign(wl->to_global.begin(), wl->to_global.end());
        if (auto* k5 = std::get_if<K5Leaf>(&leaf->data))
            tmp_map.assign(k5->to_global.begin(), k5->to_global.end());
        std::vector<int>& gmap = map ? *map : tmp_map;
        {
            // roll back the fresh ids handed to seam locals and reuse them
            std::vector<int> freed;
            for (std::size_t i = 0; i < right_seam_local.size(); ++i) {
                freed.push_back(gmap[right_seam_local[i]]);
                gmap[right_seam_local[i]] = left_seam[i];
            }
            // compact: reassign remaining fresh ids downward to keep them dense
            std::sort(freed.begin(), freed.end());
            for (int& g : gmap) {
                if (std::binary_search(left_seam.begin(), left_seam.end(), g) &&
                    false) {
                }
                int shift = 0;
                for (int fgone : freed)
                    if (g > fgone) ++shift;
                if (!std::count(left_seam.begin(), left_seam.end(), g)) g -= shift;
            }
            next_global -= static_cast<int>(freed.size());
        }
        if (!map) {
            if (auto* wl = std::get_if<WagnerLeaf>(&leaf->data))
                std::copy(gmap.begin(), gmap.end(), wl->to_global.begin());
            if (auto* k5 = std::get_if<K5Leaf>(&leaf->data))
                std::copy(gmap.begin(), gmap.end(), k5->to_global.begin());
        }

        // extend the flattened graph
        {
            std::vector<std::pair<int, int>> edges = flat.edges();
            for (auto [u, v] : lg.edges()) edges.emplace_back(std::min(gmap[u], gmap[v]),
                                                              std::max(gmap[u], gmap[v]));
            std::sort(edges.begin(), edges.end());
            edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
            flat = Graph::from_edges(next_global, edges);
        }

        auto sum = std::make_unique<TreeNode>();
        SumNode s;
        s.arity = arity;
        s.seam = left_seam;
        s.first = std::move(root);
        s.second = std::move(leaf);
        sum->data = std::move(s);
        root = std::move(sum);
    }

    GeneratedTree out;
    out.tree.root = std::move(root);
    out.tree.n = next_global;
    out.tree.finalize();
    out.flat = out.tree.flatten();
    return out;
}

/// Slot values for one vertex with the requested sum, values in {0,1,2}.
inline void gen_vertex_values(ValueFunction& f, int v, GenSpec::Profile profile, int target,
                              Rng& rng) {
    for (int i = 0; i < f.width; ++i) f.set(v, i, 0);
    switch (profile) {
        case GenSpec::Profile::Ones5:
            if (f.width < target) fail(Err::ProfileInfeasible, "width too small for unit profile");
            for (int i = 0; i < target; ++i) f.set(v, i, 1);
            break;
        case GenSpec::Profile::TwoTwoOne: {
            int left = target;
            for (int i = 0; i < f.width && left > 0; ++i) {
                int x = std::min(2, left == 3 ? 2 : left);  // 5 -> 2,2,1 ; 3 -> 2,1
                f.set(v, i, x);
                left -= x;
            }
            if (left > 0) fail(Err::ProfileInfeasible, "width too small for the 2,2,1 profile");
            break;
        }
        case GenSpec::Profile::RandomSum: {
            if (2 * f.width < target)
                fail(Err::ProfileInfeasible, "width too small for the requested sum");
            int placed = 0;
            while (placed < target) {
                int i = rng.below(f.width);
                if (f.at(v, i) < 2) {
                    f.set(v, i, f.at(v, i) + 1);
                    ++placed;
                }
            }
            break;
        }
    }
}

inline std::vector<std::pair<int, int>> gen_matching(int width, double density, Rng& rng) {
    int k = static_cast<int>(density * width + 0.5);
    k = std::max(0, std::min(k, width));
    std::vector<int> a(width), b(width);
    for (int i = 0; i < width; ++i) a[i] = b[i] = i;
    rng.shuffle(a);
    rng.shuffle(b);
    std::vector<std::pair<int, int>> m;
    for (int i = 0; i < k; ++i) m.emplace_back(a[i], b[i]);
    std::sort(m.begin(), m.end());
    return m;
}

struct CoverBundle {
    Cover cover;
    ValueFunction f;
    SeedColoring seed;
};

/// Random cover, values, and a strictly degenerate seed over K (drawn with a
/// retry loop; the budget sums make one exist for complete K2/K3 seeds).
inline CoverBundle gen_cover(const Graph& graph, const GenSpec& spec, Rng& rng,
                             std::vector<int> seed_vertices = {},
                             const std::vector<int>& sum_targets = {}) {
    CoverBundle out;
    out.cover = Cover::make(graph, spec.width);
    for (auto [u, v] : out.cover.edge_list)
        out.cover.set_matching(u, v, gen_matching(spec.width, spec.density, rng));
    out.cover.finalize();
    out.f.width = spec.width;
    out.f.value.assign(static_cast<std::size_t>(graph.n) * spec.width, 0);
    for (int v = 0; v < graph.n; ++v) {
        int target = sum_targets.empty() ? 5 : sum_targets[v];
        gen_vertex_values(out.f, v, spec.profile, target, rng);
    }
    if (seed_vertices.empty()) {
        auto edges = graph.edges();
        auto [u, v] = edges[rng.below(static_cast<int>(edges.size()))];
        seed_vertices = {u, v};
    }
    out.seed.vertices = seed_vertices;
    auto rc = restrict(out.cover, seed_vertices);
    auto rf = restrict_values(out.f, rc.to_parent);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<int> slots;
        for (int v : seed_vertices) {
            (void)v;
            slots.push_back(rng.below(spec.width));
        }
        std::vector<int> sub_choice(rc.to_parent.size());
        for (std::size_t i = 0; i < rc.to_parent.size(); ++i) {
            auto it = std::find(seed_vertices.begin(), seed_vertices.end(), rc.to_parent[i]);
            sub_choice[i] = slots[it - seed_vertices.begin()];
        }
        if (is_strictly_f_degenerate(rc.cover, rf, sub_choice).ok) {
            out.seed.slots = slots;
            return out;
        }
    }
    fail(Err::ProfileInfeasible, "no strictly degenerate seed found in 1000 draws");
}

struct Instance {
    DecompositionTree tree;
    Cover cover;
    ValueFunction f;
    SeedColoring seed;
};

namespace detail {

/// Reorders sum children along the seed's path so its side is listed first.
inline void put_seed_side_first(TreeNode* node, const std::vector<int>& seed_verts) {
    auto* s = std::get_if<SumNode>(&node->data);
    if (!s) return;
    auto inside = [&](const TreeNode* child) {
        for (int v : seed_verts)
            if (!std::binary_search(child->vertices.begin(), child->vertices.end(), v))
                return false;
        return true;
    };
    if (!inside(s->first.get()) && inside(s->second.get())) std::swap(s->first, s->second);
    if (inside(s->first.get())) put_seed_side_first(s->first.get(), seed_verts);
}

inline const TriLeaf* some_tri_leaf(const TreeNode* node, Rng& rng) {
    std::vector<const TriLeaf*> leaves;
    std::vector<const TreeNode*> todo{node};
    while (!todo.empty()) {
        const TreeNode* cur = todo.back();
        todo.pop_back();
        if (auto* t = std::get_if<TriLeaf>(&cur->data)) leaves.push_back(t);
        if (auto* s = std::get_if<SumNode>(&cur->data)) {
            todo.push_back(s->first.get());
            todo.push_back(s->second.get());
        }
    }
    if (leaves.empty()) return nullptr;
    return leaves[rng.below(static_cast<int>(leaves.size()))];
}

inline void collect_seams(const TreeNode* node, std::vector<const SumNode*>& out) {
    if (auto* s = std::get_if<SumNode>(&node->data)) {
        out.push_back(s);
        collect_seams(s->first.get(), out);
        collect_seams(s->second.get(), out);
    }
}

inline std::vector<std::pair<int, int>> leaf_global_edges(const TreeNode* node) {
    std::vector<std::pair<int, int>> out;
    if (auto* t = std::get_if<TriLeaf>(&node->data)) {
        for (auto [u, v] : t->emb.graph.edges())
            out.emplace_back(t->to_global[u], t->to_global[v]);
    } else if (auto* wl = std::get_if<WagnerLeaf>(&node->data)) {
        for (auto [u, v] : wagner_edges()) out.emplace_back(wl->to_global[u], wl->to_global[v]);
    } else if (auto* k = std::get_if<K5Leaf>(&node->data)) {
        for (int i = 0; i < 5; ++i)
            for (int j = i + 1; j < 5; ++j)
                out.emplace_back(k->to_global[i], k->to_global[j]);
    }
    return out;
}

inline const TreeNode* some_leaf(const TreeNode* node, Rng& rng) {
    std::vector<const TreeNode*> leaves, todo{node};
    while (!todo.empty()) {
        const TreeNode* cur = todo.back();
        todo.pop_back();
        if (auto* s = std::get_if<SumNode>(&cur->data)) {
            todo.push_back(s->first.get());
            todo.push_back(s->second.get());
        } else {
            leaves.push_back(cur);
        }
    }
    return leaves[rng.below(static_cast<int>(leaves.size()))];
}

}  // namespace detail

/// Full decomposition instance: tree, cover, values, and a seed placed on a
/// seam or inside a leaf, children ordered seed-side first.
inline Instance gen_instance(const GenSpec& spec, Rng& rng) {
    auto gen = gen_tree(spec, rng);
    std::vector<int> seed_verts;
    std::vector<const SumNode*> seams;
    detail::collect_seams(gen.tree.root.get(), seams);
    bool use_seam = !seams.empty() && rng.chance(spec.seam_seed_prob);
    if (use_seam) {
        const SumNode* s = seams[rng.below(static_cast<int>(seams.size()))];
        seed_verts = s->seam;
        if (spec.mode == GenSpec::Mode::K33 && seed_verts.size() == 3) use_seam = false;
    }
    if (seed_verts.empty() || !use_seam) {
        const TreeNode* leaf = detail::some_leaf(gen.tree.root.get(), rng);
        bool want_k3 = spec.mode == GenSpec::Mode::K5 &&
                       std::holds_alternative<TriLeaf>(leaf->data) && rng.chance(0.5);
        if (want_k3) {
            auto* t = std::get_if<TriLeaf>(&leaf->data);
            auto tris = detail::all_triangles(t->emb.graph);
            auto tri = tris[rng.below(static_cast<int>(tris.size()))];
            seed_verts = {t->to_global[tri[0]], t->to_global[tri[1]], t->to_global[tri[2]]};
        } else {
            auto edges = detail::leaf_global_edges(leaf);
            auto [u, v] = edges[rng.below(static_cast<int>(edges.size()))];
            seed_verts = {u, v};
        }
    }
    detail::put_seed_side_first(gen.tree.root.get(), seed_verts);
    auto bundle = gen_cover(gen.flat, spec, rng, seed_verts);
    Instance inst;
    inst.tree = std::move(gen.tree);
    inst.cover = std::move(bundle.cover);
    inst.f = std::move(bundle.f);
    inst.seed = std::move(bundle.seed);
    return inst;
}

/// Near-triangulation extension instance with outer sums 3, interior sums 5.
inline FNTInstance gen_fnt_instance(const GenSpec& spec, Rng& rng) {
    auto nt = spec.nt_size <= 3 ? gen_apollonian(3, rng)
                                : gen_near_triangulation(spec.nt_size, rng);
    std::vector<int> targets(nt.size(), 5);
    for (int v : nt.outer_cycle) targets[v] = 3;
    int k = rng.below(nt.outer_len());
    std::vector<int> seed_verts{nt.outer_cycle[k],
                                nt.outer_cycle[(k + 1) % nt.outer_len()]};
    auto bundle = gen_cover(nt.emb.graph, spec, rng, seed_verts, targets);
    FNTInstance inst;
    inst.nt = std::move(nt);
    inst.cover = std::move(bundle.cover);
    inst.f = std::move(bundle.f);
    inst.seed = std::move(bundle.seed);
    return inst;
}

}  // namespace fdt
