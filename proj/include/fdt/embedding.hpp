#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "fdt/errors.hpp"
#include "fdt/graph.hpp"

namespace fdt {

/// Combinatorial plane embedding: a rotation system over a simple connected
/// graph. Faces are always derived by tracing, never taken as input.
struct PlaneEmbedding {
    Graph graph;
    std::vector<std::vector<int>> rotation;
    // per vertex: (neighbor, index in rotation), sorted by neighbor
    std::vector<std::vector<std::pair<int, int>>> rot_pos;
    std::vector<int> dart_base;  // dart id of (v, rotation index 0)

    int rot_index(int v, int u) const {
        const auto& rp = rot_pos[v];
        auto it = std::lower_bound(rp.begin(), rp.end(), std::make_pair(u, -1));
        if (it == rp.end() || it->first != u)
            fail(Err::InvalidInstance, "no dart " + std::to_string(v) + "->" + std::to_string(u));
        return it->second;
    }

    int dart_id(int v, int u) const { return dart_base[v] + rot_index(v, u); }

    int dart_count() const {
        return dart_base.empty() ? 0
                                 : dart_base.back() +
                                       static_cast<int>(rotation.empty() ? 0 : rotation.back().size());
    }

    /// Builds from a rotation system alone; the graph is derived from it.
    static PlaneEmbedding make(std::vector<std::vector<int>> rotation) {
        PlaneEmbedding emb;
        int n = static_cast<int>(rotation.size());
        emb.graph.n = n;
        emb.graph.adj.resize(n);
        for (int v = 0; v < n; ++v) {
            emb.graph.adj[v] = rotation[v];
            std::sort(emb.graph.adj[v].begin(), emb.graph.adj[v].end());
        }
        emb.rotation = std::move(rotation);
        emb.graph.validate();
        if (n > 0 && !emb.graph.connected())
            fail(Err::InvalidInstance, "embedding must be connected");
        emb.rot_pos.resize(n);
        emb.dart_base.resize(n);
        int base = 0;
        for (int v = 0; v < n; ++v) {
            emb.dart_base[v] = base;
            base += static_cast<int>(emb.rotation[v].size());
            auto& rp = emb.rot_pos[v];
            rp.reserve(emb.rotation[v].size());
            for (int i = 0; i < static_cast<int>(emb.rotation[v].size()); ++i)
                rp.emplace_back(emb.rotation[v][i], i);
            std::sort(rp.begin(), rp.end());
        }
        return emb;
    }
};

/// Faces of an embedding as closed directed-edge walks.
struct FaceSet {
    // walk[f] lists the face's vertices; dart k goes walk[f][k] -> walk[f][k+1 mod len]
    std::vector<std::vector<int>> walk;
    std::vector<int> face_of_dart;  // indexed by PlaneEmbedding dart ids

    int count() const { return static_cast<int>(walk.size()); }

    int face_at(const PlaneEmbedding& emb, int u, int v) const {
        return face_of_dart[emb.dart_id(u, v)];
    }
};

/// Rotation-system face tracing: next dart of (u -> v) is (v -> w) where w
/// follows u in the rotation at v. Every dart lands in exactly one face.
inline FaceSet trace_faces(const PlaneEmbedding& emb) {
    FaceSet fs;
    int darts = emb.dart_count();
    fs.face_of_dart.assign(darts, -1);
    for (int u = 0; u < emb.graph.n; ++u) {
        for (int i = 0; i < static_cast<int>(emb.rotation[u].size()); ++i) {
            int start = emb.dart_base[u] + i;
            if (fs.face_of_dart[start] != -1) continue;
            int face = fs.count();
            fs.walk.emplace_back();
            int cu = u, cv = emb.rotation[u][i];
            int dart = start;
            do {
                fs.face_of_dart[dart] = face;
                fs.walk.back().push_back(cu);
                int k = emb.rot_index(cv, cu);
                int deg = static_cast<int>(emb.rotation[cv].size());
                int w = emb.rotation[cv][(k + 1) % deg];
                cu = cv;
                cv = w;
                dart = emb.dart_base[cu] + (k + 1) % deg;
            } while (dart != start);
        }
    }
    long long euler = static_cast<long long>(emb.graph.n) -
                      static_cast<long long>(emb.graph.edge_count()) + fs.count();
    if (emb.graph.n > 0 && euler != 2)
        fail(Err::NonPlanarRotation,
             "V - E + F = " + std::to_string(euler) + ", expected 2");
    return fs;
}

/// Finds the face whose boundary equals the given closed walk, up to
/// rotation and reflection. Used to resolve JSON outer_face walks.
inline std::optional<int> locate_face(const FaceSet& fs, const std::vector<int>& cycle) {
    auto matches = [&](const std::vector<int>& w) {
        if (w.size() != cycle.size()) return false;
        std::size_t len = w.size();
        for (std::size_t off = 0; off < len; ++off) {
            bool fwd = true, bwd = true;
            for (std::size_t k = 0; k < len && (fwd || bwd); ++k) {
                if (w[(off + k) % len] != cycle[k]) fwd = false;
                if (w[(off + len - k) % len] != cycle[k]) bwd = false;
            }
            if (fwd || bwd) return true;
        }
        return false;
    };
    for (int f = 0; f < fs.count(); ++f)
        if (matches(fs.walk[f])) return f;
    return std::nullopt;
}

/// Near-triangulation: outer face a simple cycle, every inner face a triangle.
struct NearTriangulation {
    PlaneEmbedding emb;
    FaceSet faces;
    int outer_face = -1;
    std::vector<int> outer_cycle;
    // local -> parent vertex ids when this was cut out of a larger structure
    std::vector<int> to_parent;

    int size() const { return emb.graph.n; }
    int outer_len() const { return static_cast<int>(outer_cycle.size()); }
};

inline NearTriangulation validate_near_triangulation(PlaneEmbedding emb, int outer_face_id) {
    NearTriangulation nt;
    nt.faces = trace_faces(emb);
    if (outer_face_id < 0 || outer_face_id >= nt.faces.count())
        fail(Err::InvalidInstance, "outer face id out of range");
    nt.outer_face = outer_face_id;
    const auto& outer = nt.faces.walk[outer_face_id];
    {
        std::vector<int> sorted = outer;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            fail(Err::OuterNotCycle, "outer boundary repeats a vertex");
    }
    if (outer.size() < 3) fail(Err::OuterNotCycle, "outer boundary shorter than a cycle");
    for (int f = 0; f < nt.faces.count(); ++f) {
        if (f == outer_face_id) continue;
        if (nt.faces.walk[f].size() != 3)
            fail(Err::InnerFaceNotTriangle, "face " + std::to_string(f) + " has length " +
                                                std::to_string(nt.faces.walk[f].size()));
    }
    nt.outer_cycle = outer;
    nt.emb = std::move(emb);
    return nt;
}

/// Re-roots the outer cycle so it starts v1, v2 (reversing if needed).
inline void root_outer_cycle(NearTriangulation& nt, int v1, int v2) {
    auto& cyc = nt.outer_cycle;
    int p = static_cast<int>(cyc.size());
    auto it = std::find(cyc.begin(), cyc.end(), v1);
    if (it == cyc.end()) fail(Err::InvalidInstance, "v1 not on outer cycle");
    std::rotate(cyc.begin(), it, cyc.end());
    if (cyc[1] == v2) return;
    if (cyc[p - 1] == v2) {
        std::reverse(cyc.begin() + 1, cyc.end());
        return;
    }
    fail(Err::InvalidInstance, "v1v2 is not an outer edge");
}

/// Smallest chord of the outer cycle by (position i, position j), or none.
inline std::optional<std::pair<int, int>> find_chord(const NearTriangulation& nt) {
    int p = nt.outer_len();
    std::vector<int> pos(nt.size(), -1);
    for (int i = 0; i < p; ++i) pos[nt.outer_cycle[i]] = i;
    for (int i = 0; i < p; ++i) {
        int v = nt.outer_cycle[i];
        int best_j = -1;
        for (int w : nt.emb.graph.adj[v]) {
            int j = pos[w];
            if (j <= i) continue;
            if (j == i + 1 || (i == 0 && j == p - 1)) continue;  // cycle edges
            if (best_j == -1 || j < best_j) best_j = j;
        }
        if (best_j != -1) return std::make_pair(nt.outer_cycle[i], nt.outer_cycle[best_j]);
    }
    return std::nullopt;
}

namespace detail {

/// Splits interior vertices of nt by chord side. Returns per-vertex side
/// (0 = low arc side, 1 = high arc side, -1 = on the outer cycle).
inline std::vector<int> chord_interior_sides(const NearTriangulation& nt, int pi, int pj) {
    int n = nt.size(), p = nt.outer_len();
    std::vector<int> pos(n, -1);
    for (int i = 0; i < p; ++i) pos[nt.outer_cycle[i]] = i;
    // arc side of outer vertices strictly between the chord ends
    auto arc_side = [&](int position) -> int {
        if (position > pi && position < pj) return 0;
        return 1;
    };
    std::vector<int> side(n, -2);
    for (int v = 0; v < n; ++v)
        if (pos[v] >= 0) side[v] = -1;
    int u = nt.outer_cycle[pi], w = nt.outer_cycle[pj];
    for (int start = 0; start < n; ++start) {
        if (side[start] != -2) continue;
        std::vector<int> comp{start};
        side[start] = -3;  // visiting
        int found = -1;
        for (std::size_t k = 0; k < comp.size(); ++k) {
            for (int x : nt.emb.graph.adj[comp[k]]) {
                if (side[x] == -2) {
                    side[x] = -3;
                    comp.push_back(x);
                } else if (side[x] == -1 && x != u && x != w) {
                    int s = arc_side(pos[x]);
                    check_internal(found == -1 || found == s,
                                   "interior component touches both chord sides");
                    found = s;
                }
            }
        }
        check_internal(found != -1, "interior component attached only to chord ends");
        for (int x : comp) side[x] = found;
    }
    return side;
}

/// Builds the sub-near-triangulation induced by `verts` whose outer boundary
/// is `cycle` (both in nt-local ids); result carries a to_parent map.
inline NearTriangulation make_sub_nt(const NearTriangulation& nt, std::vector<int> verts,
                                     const std::vector<int>& cycle) {
    std::sort(verts.begin(), verts.end());
    int n = static_cast<int>(verts.size());
    std::vector<int> local(nt.size(), -1);
    for (int i = 0; i < n; ++i) local[verts[i]] = i;
    std::vector<std::vector<int>> rot(n);
    for (int i = 0; i < n; ++i) {
        for (int w : nt.emb.rotation[verts[i]])
            if (local[w] != -1) rot[i].push_back(local[w]);
    }
    auto emb = PlaneEmbedding::make(std::move(rot));
    auto fs = trace_faces(emb);
    std::vector<int> local_cycle;
    local_cycle.reserve(cycle.size());
    for (int v : cycle) local_cycle.push_back(local[v]);
    auto outer = locate_face(fs, local_cycle);
    check_internal(outer.has_value(), "expected outer cycle is not a face of the part");
    auto sub = validate_near_triangulation(std::move(emb), *outer);
    root_outer_cycle(sub, local_cycle[0], local_cycle[1]);
    sub.to_parent = std::move(verts);
    return sub;
}

}  // namespace detail

/// Splits at a chord into the part containing the outer edge v1v2 (first)
/// and the remaining part, both rooted: C1 at (v1, v2), C2 at the chord.
inline std::pair<NearTriangulation, NearTriangulation> split_on_chord(
    const NearTriangulation& nt, std::pair<int, int> chord) {
    int p = nt.outer_len();
    std::vector<int> pos(nt.size(), -1);
    for (int i = 0; i < p; ++i) pos[nt.outer_cycle[i]] = i;
    int pi = pos[chord.first], pj = pos[chord.second];
    if (pi < 0 || pj < 0) fail(Err::InvalidInstance, "chord endpoint not on outer cycle");
    if (pi > pj) std::swap(pi, pj);
    auto side = detail::chord_interior_sides(nt, pi, pj);

    auto outer_at = [&](int i) { return nt.outer_cycle[i]; };
    std::vector<int> cyc_low, cyc_high;
    for (int i = pi; i <= pj; ++i) cyc_low.push_back(outer_at(i));
    cyc_high.push_back(outer_at(pi));
    cyc_high.push_back(outer_at(pj));
    for (int i = pj + 1; i < p; ++i) cyc_high.push_back(outer_at(i));
    for (int i = 0; i < pi; ++i) cyc_high.push_back(outer_at(i));
    // cyc_high currently reads v_i, v_j, v_{j+1}, ..., v_{i-1}: a closed cycle
    // through the chord; cyc_low is the arc pi..pj closed by the chord.

    auto collect = [&](int which, const std::vector<int>& cyc) {
        std::vector<int> verts = cyc;
        for (int v = 0; v < nt.size(); ++v)
            if (side[v] == which) verts.push_back(v);
        return verts;
    };

    if (pi == 0) {
        // seed edge (positions 0,1) lies on the low arc
        std::vector<int> c2 = cyc_high;  // rooted (v_i, v_j) already
        auto part1 = detail::make_sub_nt(nt, collect(0, cyc_low), cyc_low);
        auto part2 = detail::make_sub_nt(nt, collect(1, c2), c2);
        return {std::move(part1), std::move(part2)};
    }
    // seed edge lies on the high side
    std::vector<int> c1;
    for (int i = 0; i <= pi; ++i) c1.push_back(outer_at(i));
    for (int i = pj; i < p; ++i) c1.push_back(outer_at(i));
    std::vector<int> c2{outer_at(pi), outer_at(pj)};
    for (int i = pj - 1; i > pi; --i) c2.push_back(outer_at(i));
    auto part1 = detail::make_sub_nt(nt, collect(1, c1), c1);
    auto part2 = detail::make_sub_nt(nt, collect(0, c2), c2);
    return {std::move(part1), std::move(part2)};
}

/// Neighbors of the last outer vertex v_p swept from v_1 to v_{p-1}:
/// the path v_1, u_1, ..., u_m, v_{p-1} around v_p.
inline std::vector<int> fan_around_last(const NearTriangulation& nt) {
    if (find_chord(nt)) fail(Err::ChordPresent, "outer cycle has a chord");
    int p = nt.outer_len();
    if (p < 3 || nt.size() <= 3) fail(Err::InvalidInstance, "fan needs more than a triangle");
    int vp = nt.outer_cycle[p - 1];
    int v1 = nt.outer_cycle[0];
    int vprev = nt.outer_cycle[p - 2];
    const auto& rot = nt.emb.rotation[vp];
    int deg = static_cast<int>(rot.size());
    int i1 = nt.emb.rot_index(vp, v1);
    std::vector<int> arc_a, arc_b;  // strictly between v1..vprev and vprev..v1
    for (int k = (i1 + 1) % deg; rot[k] != vprev; k = (k + 1) % deg) arc_a.push_back(rot[k]);
    int ip = nt.emb.rot_index(vp, vprev);
    for (int k = (ip + 1) % deg; rot[k] != v1; k = (k + 1) % deg) arc_b.push_back(rot[k]);
    check_internal(arc_a.empty() || arc_b.empty(),
                   "outer neighbors of v_p are not rotation-adjacent");
    std::vector<int> path{v1};
    if (!arc_a.empty()) {
        path.insert(path.end(), arc_a.begin(), arc_a.end());
    } else {
        path.insert(path.end(), arc_b.rbegin(), arc_b.rend());
    }
    path.push_back(vprev);
    // P together with O - v_p must close into a cycle: consecutive fan
    // members adjacent, all interior, no repeats
    std::vector<char> on_outer(nt.size(), 0);
    for (int v : nt.outer_cycle) on_outer[v] = 1;
    for (std::size_t k = 0; k + 1 < path.size(); ++k)
        check_internal(nt.emb.graph.has_edge(path[k], path[k + 1]), "fan is not a path");
    for (std::size_t k = 1; k + 1 < path.size(); ++k)
        check_internal(!on_outer[path[k]], "fan vertex lies on the outer cycle");
    {
        std::vector<int> s(path.begin() + 1, path.end() - 1);
        std::sort(s.begin(), s.end());
        check_internal(std::adjacent_find(s.begin(), s.end()) == s.end(), "fan repeats a vertex");
    }
    return path;
}

}  // namespace fdt
