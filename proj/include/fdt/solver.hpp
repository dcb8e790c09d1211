#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "fdt/cover.hpp"
#include "fdt/embedding.hpp"
#include "fdt/errors.hpp"

namespace fdt {

struct SolveStats {
    std::uint64_t base_cases = 0;
    std::uint64_t chord_splits = 0;
    std::uint64_t two_open_steps = 0;     // fan steps with two reserved slots
    std::uint64_t single_open_steps = 0;  // fan steps forced through one slot
    std::uint64_t tri_leaves = 0;
    std::uint64_t wagner_leaves = 0;
    std::uint64_t k5_leaves = 0;
    std::uint64_t sum_nodes = 0;
    std::uint64_t separating_splits = 0;
    std::uint64_t edge_promotions = 0;
};

struct SolveOptions {
    bool paranoid = false;  // re-verify the order after every insertion
    SolveStats* stats = nullptr;
};

/// Mutable working state shared by the solver passes: slot budgets with undo,
/// disabled matchings, and the partial choice. One context per solve call.
class SolveContext {
public:
    SolveContext(const Cover& cover, const ValueFunction& f, SolveOptions opts = {})
        : cover(cover),
          budget(f.value),
          edge_off(cover.edge_list.size(), 0),
          choice(cover.base.n, -1),
          opts(opts) {
        if (f.width != cover.width ||
            static_cast<int>(f.value.size()) != cover.slot_count())
            fail(Err::InvalidInstance, "value function does not match the cover");
    }

    const Cover& cover;
    std::vector<std::int8_t> budget;
    std::vector<char> edge_off;
    std::vector<int> choice;
    SolveOptions opts;

    SolveStats& stats() { return opts.stats ? *opts.stats : local_stats_; }

    std::size_t budget_mark() const { return budget_log_.size(); }
    void set_budget(SlotId s, int v) {
        budget_log_.emplace_back(s, budget[s]);
        budget[s] = static_cast<std::int8_t>(v);
    }
    void restore_budget(std::size_t mark) {
        while (budget_log_.size() > mark) {
            auto [s, old] = budget_log_.back();
            budget_log_.pop_back();
            budget[s] = old;
        }
    }

    std::size_t edge_mark() const { return edge_log_.size(); }
    void disable_edge(int e) {
        edge_log_.push_back(e);
        edge_off[e] = 1;
    }
    void restore_edges(std::size_t mark) {
        while (edge_log_.size() > mark) {
            edge_off[edge_log_.back()] = 0;
            edge_log_.pop_back();
        }
    }

    SlotId chosen_slot(int v) const { return cover.slot(v, choice[v]); }

    /// The slot of vertex w matched to s, honoring disabled edges; -1 if none.
    SlotId matched_slot_at(SlotId s, int w) const {
        for (auto [t, e] : cover.slot_adj[s])
            if (cover.slot_vertex(t) == w && !edge_off[e]) return t;
        return -1;
    }

    bool slots_adjacent(SlotId x, SlotId y) const {
        for (auto [t, e] : cover.slot_adj[x])
            if (t == y && !edge_off[e]) return true;
        return false;
    }

private:
    std::vector<std::pair<SlotId, std::int8_t>> budget_log_;
    std::vector<int> edge_log_;
    SolveStats local_stats_;
};

inline bool slots_matched(const Cover& cover, SlotId x, SlotId y) {
    for (auto [t, e] : cover.slot_adj[x])
        if (t == y) return true;
    return false;
}

/// Roots a cycle vector so it starts v1, v2, reversing if needed.
inline void root_cycle(std::vector<int>& cyc, int v1, int v2) {
    auto it = std::find(cyc.begin(), cyc.end(), v1);
    if (it == cyc.end()) fail(Err::InvalidInstance, "vertex not on the cycle");
    std::rotate(cyc.begin(), it, cyc.end());
    if (cyc.size() > 1 && cyc[1] == v2) return;
    if (cyc.size() > 1 && cyc.back() == v2) {
        std::reverse(cyc.begin() + 1, cyc.end());
        return;
    }
    fail(Err::InvalidInstance, "given pair is not a cycle edge");
}

/// Removing order for a two-slot seed: smaller slot first when both work.
inline std::optional<std::pair<SlotId, SlotId>> seed_pair_order(const Cover& cover,
                                                                const ValueFunction& f,
                                                                SlotId a, SlotId b) {
    bool adj = slots_matched(cover, a, b);
    SlotId lo = std::min(a, b), hi = std::max(a, b);
    auto works = [&](SlotId first, SlotId second) {
        return f.at(first) > (adj ? 1 : 0) && f.at(second) > 0;
    };
    if (works(lo, hi)) return std::make_pair(lo, hi);
    if (works(hi, lo)) return std::make_pair(hi, lo);
    return std::nullopt;
}

namespace detail {

/// The near-triangulation extension engine. Operates on a (possibly local)
/// embedding whose vertices map into the shared context via to_global; all
/// slot and choice state lives in the context. Uses an explicit work stack:
/// fan removals can nest as deep as the vertex count.
class NtEngine {
public:
    struct Seed {
        int v1, v2;       // local outer endpoints; outer cycle starts v1, v2
        SlotId t1, t2;    // their chosen slots as a removing order, t1 first
    };

    NtEngine(SolveContext& ctx, const PlaneEmbedding& emb, const std::vector<int>& to_global)
        : ctx_(ctx),
          emb_(emb),
          to_global_(to_global),
          stamp_(emb.graph.n, 0),
          on_outer_(emb.graph.n, 0),
          outer_deg_(emb.graph.n, 0),
          fan_local_(emb.graph.n, 0),
          pos_(emb.graph.n, -1),
          side_(emb.graph.n, -2),
          fan_flag_global_(ctx.cover.base.n, 0),
          slot_pos_(ctx.cover.slot_count(), -1) {}

    std::vector<SlotId> solve(std::vector<int> verts, std::vector<int> outer, Seed seed) {
        std::vector<Work> stack;
        {
            Work w;
            w.kind = Work::Solve;
            w.verts = std::move(verts);
            w.outer = std::move(outer);
            w.seed = seed;
            stack.push_back(std::move(w));
        }
        std::vector<SlotId> ret;
        while (!stack.empty()) {
            Work wk = std::move(stack.back());
            stack.pop_back();
            switch (wk.kind) {
                case Work::Solve:
                    run_frame(std::move(wk), stack, ret);
                    break;
                case Work::ChordSecond: {
                    int gu = to_global_[wk.u], gw = to_global_[wk.w];
                    SlotId cu = ctx_.chosen_slot(gu), cw = ctx_.chosen_slot(gw);
                    Work merge;
                    merge.kind = Work::ChordMerge;
                    merge.first_order = std::move(ret);
                    ret.clear();
                    merge.budget_mark = ctx_.budget_mark();
                    merge.edge_mark = ctx_.edge_mark();
                    merge.exp_t1 = cu;
                    merge.exp_t2 = cw;
                    ctx_.set_budget(cu, 1);
                    ctx_.set_budget(cw, 1);
                    ctx_.disable_edge(ctx_.cover.edge_id(gu, gw));
                    Work child;
                    child.kind = Work::Solve;
                    child.verts = std::move(wk.verts);
                    child.outer = std::move(wk.outer);
                    child.seed = {wk.u, wk.w, cu, cw};
                    stack.push_back(std::move(merge));
                    stack.push_back(std::move(child));
                    break;
                }
                case Work::ChordMerge: {
                    ctx_.restore_edges(wk.edge_mark);
                    ctx_.restore_budget(wk.budget_mark);
                    check_internal(ret.size() >= 2 && ret[ret.size() - 2] == wk.exp_t1 &&
                                       ret.back() == wk.exp_t2,
                                   "part order does not end at the seam choices");
                    ret.resize(ret.size() - 2);
                    ret.insert(ret.end(), wk.first_order.begin(), wk.first_order.end());
                    break;
                }
                case Work::FanUnwind:
                    unwind_fans(wk.fans, ret);
                    break;
            }
        }
        return ret;
    }

private:
    struct FanRecord {
        int removed, prev;  // local v_p and v_{p-1}
        bool single_open;
        SlotId open_a = -1, open_b = -1;
        bool p_was_3;
        std::size_t budget_mark;
    };

    struct Work {
        enum Kind { Solve, ChordSecond, ChordMerge, FanUnwind } kind = Solve;
        std::vector<int> verts, outer;
        Seed seed{};
        int u = -1, w = -1;
        std::vector<SlotId> first_order;
        SlotId exp_t1 = -1, exp_t2 = -1;
        std::size_t budget_mark = 0, edge_mark = 0;
        std::vector<FanRecord> fans;
    };

    SolveContext& ctx_;
    const PlaneEmbedding& emb_;
    const std::vector<int>& to_global_;
    std::vector<int> stamp_;
    int epoch_ = 0;
    std::vector<char> on_outer_;
    std::vector<int> outer_deg_;
    std::vector<char> fan_local_;
    std::vector<int> pos_;
    std::vector<int> side_;
    std::vector<char> fan_flag_global_;
    std::vector<int> slot_pos_;

    bool alive(int v) const { return stamp_[v] == epoch_; }

    void run_frame(Work wk, std::vector<Work>& stack, std::vector<SlotId>& ret) {
        ++epoch_;
        for (int v : wk.verts) {
            stamp_[v] = epoch_;
            on_outer_[v] = 0;
        }
        for (int v : wk.outer) on_outer_[v] = 1;
        int chorded = 0;
        for (int v : wk.outer) {
            int d = 0;
            for (int x : emb_.graph.adj[v])
                if (alive(x) && on_outer_[x]) ++d;
            outer_deg_[v] = d;
            if (d >= 3) ++chorded;
        }
        int alive_count = static_cast<int>(wk.verts.size());
        std::vector<FanRecord> fans;
        auto& outer = wk.outer;

        for (;;) {
            if (alive_count == 3) {
                ++ctx_.stats().base_cases;
                ret = solve_base(outer, wk.seed);
                unwind_fans(fans, ret);
                return;
            }
            if (chorded > 0) {
                split_at_chord(wk, fans, stack);
                return;
            }
            fan_step(outer, fans, alive_count, chorded);
        }
    }

    std::vector<SlotId> solve_base(const std::vector<int>& outer, const Seed& seed) {
        int gv3 = to_global_[outer[2]];
        for (int i = 0; i < ctx_.cover.width; ++i) {
            SlotId x = ctx_.cover.slot(gv3, i);
            if (ctx_.budget[x] <= 0) continue;
            int d = (ctx_.slots_adjacent(x, seed.t1) ? 1 : 0) +
                    (ctx_.slots_adjacent(x, seed.t2) ? 1 : 0);
            if (d < ctx_.budget[x]) {
                ctx_.choice[gv3] = i;
                return {x, seed.t1, seed.t2};
            }
        }
        check_internal(false, "triangle base case has no extendable slot");
        return {};
    }

    /// Interior fan of v_p between v1 and vprev, in rotation order.
    std::vector<int> fan_interior(int vp, int v1, int vprev) {
        std::vector<int> filt;
        for (int x : emb_.rotation[vp])
            if (alive(x)) filt.push_back(x);
        int deg = static_cast<int>(filt.size());
        int i1 = -1, ip = -1;
        for (int k = 0; k < deg; ++k) {
            if (filt[k] == v1) i1 = k;
            if (filt[k] == vprev) ip = k;
        }
        check_internal(i1 >= 0 && ip >= 0, "outer neighbors missing from the fan");
        std::vector<int> arc_a, arc_b;
        for (int k = (i1 + 1) % deg; k != ip; k = (k + 1) % deg) arc_a.push_back(filt[k]);
        for (int k = (ip + 1) % deg; k != i1; k = (k + 1) % deg) arc_b.push_back(filt[k]);
        check_internal(arc_a.empty() || arc_b.empty(),
                       "outer neighbors of v_p are not rotation-adjacent");
        std::vector<int> fan = arc_a.empty() ? std::vector<int>(arc_b.rbegin(), arc_b.rend())
                                             : std::move(arc_a);
        check_internal(!fan.empty(), "empty fan while more than a triangle remains");
        int last = v1;
        for (int u : fan) {
            check_internal(!on_outer_[u], "fan vertex already on the outer cycle");
            check_internal(emb_.graph.has_edge(last, u), "fan is not a path");
            last = u;
        }
        check_internal(emb_.graph.has_edge(last, vprev), "fan does not reach v_{p-1}");
        return fan;
    }

    void fan_step(std::vector<int>& outer, std::vector<FanRecord>& fans, int& alive_count,
                  int& chorded) {
        int p = static_cast<int>(outer.size());
        int vp = outer[p - 1], vprev = outer[p - 2], v1 = outer[0];
        int gvp = to_global_[vp];
        auto fan = fan_interior(vp, v1, vprev);

        // budgets on the last vertex after paying for the v1 conflict
        SlotId a = ctx_.chosen_slot(to_global_[v1]);
        SlotId hit = ctx_.matched_slot_at(a, gvp);
        SlotId open_a = -1, open_b = -1;
        int open_count = 0, single_value = 0;
        for (int i = 0; i < ctx_.cover.width; ++i) {
            SlotId x = ctx_.cover.slot(gvp, i);
            int fp = ctx_.budget[x];
            if (x == hit) fp = std::max(0, fp - 1);
            if (fp <= 0) continue;
            ++open_count;
            if (open_a < 0) {
                open_a = x;
                single_value = fp;
            } else if (open_b < 0) {
                open_b = x;
            }
        }
        check_internal(open_count >= 1, "no open slot on the last outer vertex");

        FanRecord rec;
        rec.removed = vp;
        rec.prev = vprev;
        rec.p_was_3 = (p == 3);
        rec.budget_mark = ctx_.budget_mark();
        for (int u : fan) fan_flag_global_[to_global_[u]] = 1;
        if (open_count >= 2) {
            ++ctx_.stats().two_open_steps;
            rec.single_open = false;
            rec.open_a = open_a;
            rec.open_b = open_b;
            std::vector<SlotId> touched;
            for (SlotId x : {open_a, open_b})
                for (auto [t, e] : ctx_.cover.slot_adj[x])
                    if (!ctx_.edge_off[e] && fan_flag_global_[ctx_.cover.slot_vertex(t)])
                        touched.push_back(t);
            std::sort(touched.begin(), touched.end());
            touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
            for (SlotId t : touched) ctx_.set_budget(t, std::max(0, ctx_.budget[t] - 1));
        } else {
            ++ctx_.stats().single_open_steps;
            rec.single_open = true;
            rec.open_a = open_a;
            check_internal(single_value == 2, "forced slot must carry a budget of 2");
            for (auto [t, e] : ctx_.cover.slot_adj[open_a])
                if (!ctx_.edge_off[e] && fan_flag_global_[ctx_.cover.slot_vertex(t)])
                    ctx_.set_budget(t, 0);
        }
        for (int u : fan) fan_flag_global_[to_global_[u]] = 0;
        fans.push_back(rec);

        // remove v_p and splice the fan into the outer cycle
        stamp_[vp] = -1;
        --alive_count;
        on_outer_[vp] = 0;
        bump_outer_deg(v1, -1, chorded);
        bump_outer_deg(vprev, -1, chorded);
        outer.pop_back();
        for (int u : fan) {
            on_outer_[u] = 1;
            fan_local_[u] = 1;
        }
        for (auto it = fan.rbegin(); it != fan.rend(); ++it) outer.push_back(*it);
        for (int u : fan) {
            int d = 0;
            for (int x : emb_.graph.adj[u]) {
                if (!alive(x) || !on_outer_[x]) continue;
                ++d;
                if (!fan_local_[x]) bump_outer_deg(x, +1, chorded);
            }
            outer_deg_[u] = d;
            if (d >= 3) ++chorded;
        }
        for (int u : fan) fan_local_[u] = 0;
    }

    void bump_outer_deg(int v, int delta, int& chorded) {
        int before = outer_deg_[v];
        outer_deg_[v] = before + delta;
        chorded += (outer_deg_[v] >= 3) - (before >= 3);
    }

    void split_at_chord(Work& wk, std::vector<FanRecord>& fans, std::vector<Work>& stack) {
        ++ctx_.stats().chord_splits;
        auto& outer = wk.outer;
        int p = static_cast<int>(outer.size());
        for (int k = 0; k < p; ++k) pos_[outer[k]] = k;
        int pi = -1, pj = -1;
        for (int i = 0; i < p && pi < 0; ++i) {
            int v = outer[i];
            if (outer_deg_[v] < 3) continue;
            int best = -1;
            for (int x : emb_.graph.adj[v]) {
                if (!alive(x) || !on_outer_[x]) continue;
                int j = pos_[x];
                if (j <= i + 1) continue;
                if (i == 0 && j == p - 1) continue;
                if (best < 0 || j < best) best = j;
            }
            if (best >= 0) {
                pi = i;
                pj = best;
            }
        }
        check_internal(pi >= 0, "chord bookkeeping claims a chord but none found");
        int u = outer[pi], w = outer[pj];

        // classify alive interior vertices by chord side
        for (int v : wk.verts)
            if (alive(v)) side_[v] = on_outer_[v] ? -1 : -2;
        std::vector<int> comp;
        for (int v : wk.verts) {
            if (!alive(v) || side_[v] != -2) continue;
            comp.assign(1, v);
            side_[v] = -3;
            int found = -1;
            for (std::size_t k = 0; k < comp.size(); ++k) {
                for (int x : emb_.graph.adj[comp[k]]) {
                    if (!alive(x)) continue;
                    if (side_[x] == -2) {
                        side_[x] = -3;
                        comp.push_back(x);
                    } else if (side_[x] == -1 && x != u && x != w) {
                        int s = (pos_[x] > pi && pos_[x] < pj) ? 0 : 1;
                        check_internal(found < 0 || found == s,
                                       "interior component touches both chord sides");
                        found = s;
                    }
                }
            }
            check_internal(found >= 0, "interior component attached only to chord ends");
            for (int x : comp) side_[x] = found;
        }

        std::vector<int> verts_low, verts_high, cyc_low, cyc_high;
        for (int k = pi; k <= pj; ++k) cyc_low.push_back(outer[k]);
        cyc_high.push_back(u);
        cyc_high.push_back(w);
        for (int k = pj + 1; k < p; ++k) cyc_high.push_back(outer[k]);
        for (int k = 0; k < pi; ++k) cyc_high.push_back(outer[k]);
        verts_low = cyc_low;
        verts_high = cyc_high;
        for (int v : wk.verts)
            if (alive(v) && !on_outer_[v]) (side_[v] == 0 ? verts_low : verts_high).push_back(v);

        Work first, second;
        first.kind = Work::Solve;
        second.kind = Work::ChordSecond;
        second.u = u;
        second.w = w;
        if (pi == 0) {
            // the seed edge (positions 0,1) lies on the low arc
            first.verts = std::move(verts_low);
            first.outer = std::move(cyc_low);
            second.verts = std::move(verts_high);
            second.outer = std::move(cyc_high);
        } else {
            std::vector<int> cyc1;
            for (int k = 0; k <= pi; ++k) cyc1.push_back(outer[k]);
            for (int k = pj; k < p; ++k) cyc1.push_back(outer[k]);
            std::vector<int> cyc2{u, w};
            for (int k = pj - 1; k > pi; --k) cyc2.push_back(outer[k]);
            first.verts = std::move(verts_high);
            first.outer = std::move(cyc1);
            second.verts = std::move(verts_low);
            second.outer = std::move(cyc2);
        }
        first.seed = wk.seed;
        if (!fans.empty()) {
            Work fw;
            fw.kind = Work::FanUnwind;
            fw.fans = std::move(fans);
            stack.push_back(std::move(fw));
        }
        stack.push_back(std::move(second));
        stack.push_back(std::move(first));
    }

    void unwind_fans(std::vector<FanRecord>& fans, std::vector<SlotId>& ord) {
        for (auto it = fans.rbegin(); it != fans.rend(); ++it) {
            const FanRecord& rec = *it;
            ctx_.restore_budget(rec.budget_mark);
            int gvp = to_global_[rec.removed];
            SlotId prev_slot = ctx_.chosen_slot(to_global_[rec.prev]);
            if (!rec.single_open) {
                SlotId pick;
                if (!ctx_.slots_adjacent(rec.open_a, prev_slot)) {
                    pick = rec.open_a;
                } else {
                    check_internal(!ctx_.slots_adjacent(rec.open_b, prev_slot),
                                   "both reserved slots clash with the previous choice");
                    pick = rec.open_b;
                }
                ctx_.choice[gvp] = ctx_.cover.slot_index(pick);
                check_internal(ord.size() >= 2, "order too short for insertion");
                ord.insert(ord.end() - 2, pick);
            } else {
                ctx_.choice[gvp] = ctx_.cover.slot_index(rec.open_a);
                std::size_t at;
                if (rec.p_was_3) {
                    // v_{p-1} is the seed vertex v2; placing the forced slot
                    // third from the right keeps the seed pair rightmost and
                    // matches the predecessor rule whenever v2's choice sits
                    // left of the pair
                    at = ord.size() - 2;
                    auto pp = std::find(ord.begin(), ord.end(), prev_slot);
                    check_internal(pp != ord.end(), "previous choice missing from the order");
                    std::size_t paper_at = static_cast<std::size_t>(pp - ord.begin());
                    if (paper_at == ord.size() - 2)
                        check_internal(paper_at == at, "insertion rules diverged");
                } else {
                    auto pp = std::find(ord.begin(), ord.end(), prev_slot);
                    check_internal(pp != ord.end(), "previous choice missing from the order");
                    at = static_cast<std::size_t>(pp - ord.begin());
                }
                ord.insert(ord.begin() + at, rec.open_a);
            }
            if (ctx_.opts.paranoid) paranoid_check(ord);
        }
        fans.clear();
    }

    /// Verifies the partial order against the live budgets and matchings.
    void paranoid_check(const std::vector<SlotId>& ord) {
        for (std::size_t k = 0; k < ord.size(); ++k) slot_pos_[ord[k]] = static_cast<int>(k);
        bool ok = true;
        for (std::size_t k = 0; k < ord.size() && ok; ++k) {
            SlotId s = ord[k];
            int rights = 0;
            for (auto [t, e] : ctx_.cover.slot_adj[s])
                if (!ctx_.edge_off[e] && slot_pos_[t] > static_cast<int>(k)) ++rights;
            if (rights >= ctx_.budget[s]) ok = false;
        }
        for (SlotId s : ord) slot_pos_[s] = -1;
        check_internal(ok, "incremental order verification failed");
    }
};

}  // namespace detail

/// Rewrites a removing order so the pinned slots sit rightmost, keeping the
/// relative order of everything else. Valid when pinned slots have value 1
/// and no edges among themselves.
inline std::vector<SlotId> normalize_order(const Cover& cover, const ValueFunction& f,
                                           const std::vector<int>& choice,
                                           const std::vector<SlotId>& order,
                                           const std::vector<SlotId>& pinned) {
    if (!verify_removing_order(cover, f, choice, order))
        fail(Err::NotRemovingOrder, "input certificate is invalid");
    std::vector<char> is_pinned(cover.slot_count(), 0);
    for (SlotId s : pinned) is_pinned[s] = 1;
    std::vector<SlotId> out;
    out.reserve(order.size());
    for (SlotId s : order)
        if (!is_pinned[s]) out.push_back(s);
    for (SlotId s : order)
        if (is_pinned[s]) out.push_back(s);
    if (!verify_removing_order(cover, f, choice, out))
        fail(Err::NotRemovingOrder, "pinned slots do not satisfy the move conditions");
    return out;
}

/// Union of two partial transversals glued along a seam, with the combined
/// order: the second part left of the first, seam entries dropped from the
/// second. The second order must already end at the seam choices.
inline Transversal merge_transversals(const Cover& cover, const Transversal& r,
                                      const Transversal& rstar, const std::vector<int>& seam) {
    int n = cover.base.n;
    std::vector<char> on_seam(n, 0);
    for (int v : seam) {
        on_seam[v] = 1;
        if (r.choice[v] < 0 || rstar.choice[v] < 0)
            fail(Err::SeamMismatch, "seam vertex uncolored in one part");
        if (r.choice[v] != rstar.choice[v])
            fail(Err::SeamMismatch, "parts disagree at vertex " + std::to_string(v));
    }
    for (int v = 0; v < n; ++v)
        if (!on_seam[v] && r.choice[v] >= 0 && rstar.choice[v] >= 0)
            fail(Err::InvalidInstance, "parts overlap beyond the seam");
    std::size_t k = seam.size();
    if (rstar.order.size() < k) fail(Err::NotRemovingOrder, "second order shorter than the seam");
    std::vector<SlotId> tail(rstar.order.end() - k, rstar.order.end());
    std::vector<SlotId> want;
    for (int v : seam) want.push_back(cover.slot(v, rstar.choice[v]));
    std::sort(tail.begin(), tail.end());
    std::sort(want.begin(), want.end());
    if (tail != want)
        fail(Err::NotRemovingOrder, "second order does not end at the seam choices");

    Transversal out;
    out.choice.assign(n, -1);
    for (int v = 0; v < n; ++v)
        out.choice[v] = r.choice[v] >= 0 ? r.choice[v] : rstar.choice[v];
    out.order.assign(rstar.order.begin(), rstar.order.end() - k);
    out.order.insert(out.order.end(), r.order.begin(), r.order.end());
    return out;
}

/// Near-triangulation extension instance: outer budgets at least 3, interior
/// at least 5, values within {0,1,2}, seed on an outer edge.
struct FNTInstance {
    NearTriangulation nt;
    Cover cover;
    ValueFunction f;
    SeedColoring seed;
};

inline void validate_fnt_instance(const FNTInstance& inst) {
    if (!inst.cover.base.same_edges(inst.nt.emb.graph))
        fail(Err::InvalidInstance, "cover base differs from the embedded graph");
    if (inst.f.width != inst.cover.width ||
        static_cast<int>(inst.f.value.size()) != inst.cover.slot_count())
        fail(Err::InvalidInstance, "value function shape mismatch");
    for (auto x : inst.f.value)
        if (x < 0 || x > 2) fail(Err::InvalidInstance, "values must lie in {0,1,2}");
    if (inst.seed.vertices.size() != 2 || inst.seed.slots.size() != 2)
        fail(Err::InvalidInstance, "seed must color exactly the two outer edge ends");
    int v1 = inst.seed.vertices[0], v2 = inst.seed.vertices[1];
    if (!inst.cover.base.has_edge(v1, v2)) fail(Err::InvalidInstance, "seed pair not an edge");
    std::vector<char> on_outer(inst.cover.base.n, 0);
    for (int v : inst.nt.outer_cycle) on_outer[v] = 1;
    if (!on_outer[v1] || !on_outer[v2])
        fail(Err::InvalidInstance, "seed edge must lie on the outer cycle");
    for (int v = 0; v < inst.cover.base.n; ++v) {
        int need = on_outer[v] ? 3 : 5;
        if (inst.f.vertex_sum(v) < need)
            fail(Err::InvalidInstance, "vertex " + std::to_string(v) + " has budget sum " +
                                           std::to_string(inst.f.vertex_sum(v)) + " < " +
                                           std::to_string(need));
    }
    for (int k = 0; k < 2; ++k) {
        int s = inst.seed.slots[k];
        if (s < 0 || s >= inst.cover.width) fail(Err::InvalidInstance, "seed slot out of range");
    }
    SlotId a = inst.cover.slot(v1, inst.seed.slots[0]);
    SlotId b = inst.cover.slot(v2, inst.seed.slots[1]);
    if (!seed_pair_order(inst.cover, inst.f, a, b))
        fail(Err::InvalidInstance, "seed is not strictly degenerate");
}

/// Extends the seed to a strictly f-degenerate transversal of the whole
/// near-triangulation, with its removing order; total on valid instances.
inline Transversal extend_near_triangulation(const FNTInstance& inst,
                                             const SolveOptions& opts = {}) {
    validate_fnt_instance(inst);
    int n = inst.cover.base.n;
    SolveContext ctx(inst.cover, inst.f, opts);
    int v1 = inst.seed.vertices[0], v2 = inst.seed.vertices[1];
    ctx.choice[v1] = inst.seed.slots[0];
    ctx.choice[v2] = inst.seed.slots[1];
    auto tail = seed_pair_order(inst.cover, inst.f, ctx.chosen_slot(v1), ctx.chosen_slot(v2));
    std::vector<int> outer = inst.nt.outer_cycle;
    root_cycle(outer, v1, v2);
    std::vector<int> identity(n);
    std::iota(identity.begin(), identity.end(), 0);
    detail::NtEngine engine(ctx, inst.nt.emb, identity);
    std::vector<int> verts = identity;
    Transversal out;
    out.order = engine.solve(std::move(verts), std::move(outer),
                             {v1, v2, tail->first, tail->second});
    out.choice = std::move(ctx.choice);
    if (!verify_removing_order(inst.cover, inst.f, out.choice, out.order))
        fail(Err::InternalFailure, "emitted order failed verification");
    return out;
}

/// DP-coloring specialization: unit budgets, optional forbidden slots.
inline Transversal extend_nt_dp(const NearTriangulation& nt, const Cover& cover,
                                const SeedColoring& seed,
                                const std::vector<SlotId>& forbidden = {},
                                const SolveOptions& opts = {}) {
    FNTInstance inst{nt, cover, ValueFunction::uniform(cover.base.n, cover.width, 1), seed};
    for (SlotId s : forbidden) inst.f.value[s] = 0;
    auto out = extend_near_triangulation(inst, opts);
    if (!is_dp_coloring(cover, out.choice))
        fail(Err::InternalFailure, "unit-budget extension is not a DP-coloring");
    return out;
}

namespace detail {

/// Greedy coloring pass used on low-degree pieces: colors to_color in order,
/// always taking the smallest slot whose budget exceeds its already-chosen
/// matched neighbors. The removing order is the reverse, seed tail last.
inline std::vector<SlotId> greedy_in_context(SolveContext& ctx, const std::vector<int>& to_color,
                                             const std::vector<SlotId>& seed_tail) {
    std::vector<SlotId> colored;
    colored.reserve(to_color.size());
    for (int v : to_color) {
        int picked = -1;
        for (int i = 0; i < ctx.cover.width && picked < 0; ++i) {
            SlotId x = ctx.cover.slot(v, i);
            if (ctx.budget[x] <= 0) continue;
            int cnt = 0;
            for (auto [t, e] : ctx.cover.slot_adj[x]) {
                if (ctx.edge_off[e]) continue;
                int wv = ctx.cover.slot_vertex(t);
                if (ctx.choice[wv] == ctx.cover.slot_index(t)) ++cnt;
            }
            if (cnt < ctx.budget[x]) picked = i;
        }
        check_internal(picked >= 0, "greedy extension found no available slot");
        ctx.choice[v] = picked;
        colored.push_back(ctx.cover.slot(v, picked));
    }
    std::vector<SlotId> order(colored.rbegin(), colored.rend());
    order.insert(order.end(), seed_tail.begin(), seed_tail.end());
    return order;
}

}  // namespace detail

/// Greedily extends a partial coloring on a piece of maximum degree at most
/// four; budget sums of at least 5 guarantee a free slot at every step.
inline Transversal greedy_extend(const Cover& cover, const ValueFunction& f,
                                 const SeedColoring& seed, const SolveOptions& opts = {}) {
    SolveContext ctx(cover, f, opts);
    for (std::size_t k = 0; k < seed.vertices.size(); ++k)
        ctx.choice[seed.vertices[k]] = seed.slots[k];
    std::vector<int> to_color;
    for (int v = 0; v < cover.base.n; ++v) {
        if (ctx.choice[v] >= 0) continue;
        if (cover.base.degree(v) > 4)
            fail(Err::DegreeTooHigh, "vertex " + std::to_string(v) + " has degree " +
                                         std::to_string(cover.base.degree(v)));
        if (f.vertex_sum(v) < 5)
            fail(Err::InvalidInstance, "uncolored vertex " + std::to_string(v) +
                                           " has budget sum below 5");
        to_color.push_back(v);
    }
    // removing order of the seed itself, by peeling its restriction
    std::vector<SlotId> seed_tail;
    if (!seed.vertices.empty()) {
        auto rc = restrict(cover, seed.vertices);
        auto rf = restrict_values(f, rc.to_parent);
        std::vector<int> sub_choice(rc.to_parent.size());
        for (std::size_t i = 0; i < rc.to_parent.size(); ++i)
            sub_choice[i] = ctx.choice[rc.to_parent[i]];
        auto peel = is_strictly_f_degenerate(rc.cover, rf, sub_choice);
        if (!peel.ok) fail(Err::InvalidInstance, "seed is not strictly degenerate");
        for (SlotId s : peel.order)
            seed_tail.push_back(
                cover.slot(rc.to_parent[rc.cover.slot_vertex(s)], rc.cover.slot_index(s)));
    }
    Transversal out;
    out.order = detail::greedy_in_context(ctx, to_color, seed_tail);
    out.choice = std::move(ctx.choice);
    if (!verify_removing_order(cover, f, out.choice, out.order))
        fail(Err::InternalFailure, "greedy order failed verification");
    return out;
}

}  // namespace fdt
