#include "wm/tree_merge.hpp"

#include <algorithm>
#include <stdexcept>

namespace wm {

Classification classify(int r_e, int r_av, int r_aw) {
    if (r_e > r_av) return {EdgeKind::L, true, r_e};
    if (r_av <= r_aw) return {EdgeKind::S, true, std::max(r_av + 1, r_aw)};
    return {EdgeKind::D, false, r_av};
}

namespace {
int credits_for(EdgeKind k, bool in_packet) {
    if (k == EdgeKind::D) return in_packet ? 2 : 3;
    return 1;
}
}  // namespace

TreeMerge::TreeMerge(int capacity, bool debug)
    : debug_(debug),
      lg_(capacity + 2, 0),
      parent_(capacity, -1),
      depth_(capacity, -1),
      uf_(capacity, -1),
      blossom_of_(capacity, -1),
      gather_nb_(capacity, -1),
      gather_pk_(64, -1),
      gather_pk_best_(64, -1) {
    for (int s = 2; s < static_cast<int>(lg_.size()); ++s) lg_[s] = lg_[s / 2] + 1;
}

int TreeMerge::new_blossom(int v) {
    Blossom b;
    b.rep = v;
    b.top = v;
    bl_.push_back(std::move(b));
    int id = static_cast<int>(bl_.size()) - 1;
    uf_[v] = v;
    blossom_of_[v] = id;
    return id;
}

void TreeMerge::add_root(int y) {
    if (y < 0 || y >= capacity()) throw std::out_of_range("add_root: vertex out of range");
    if (in_tree(y)) throw std::invalid_argument("add_root: vertex already in tree");
    depth_[y] = 0;
    parent_[y] = -1;
    new_blossom(y);
}

void TreeMerge::add_leaf(int x, int y) {
    if (x < 0 || x >= capacity() || y < 0 || y >= capacity())
        throw std::out_of_range("add_leaf: vertex out of range");
    if (!in_tree(x)) throw std::invalid_argument("add_leaf: parent not in tree");
    if (in_tree(y)) throw std::invalid_argument("add_leaf: vertex already in tree");
    depth_[y] = depth_[x] + 1;
    parent_[y] = x;
    new_blossom(y);
}

int TreeMerge::uf_find(int v) {
    while (uf_[v] != v) {
        uf_[v] = uf_[uf_[v]];
        v = uf_[v];
    }
    return v;
}

int TreeMerge::find(int v) {
    if (!in_tree(v)) throw std::invalid_argument("find: vertex not in tree");
    return blossom_of_[uf_find(v)];
}

bool TreeMerge::better(int a, int b) const {
    if (b < 0) return true;
    if (edges_[a].t != edges_[b].t) return edges_[a].t < edges_[b].t;
    return a < b;
}

void TreeMerge::ring_append(int& ring, int e) {
    if (ring < 0) {
        edges_[e].next = e;
    } else {
        edges_[e].next = edges_[ring].next;
        edges_[ring].next = e;
    }
    ring = e;
}

int TreeMerge::ring_concat(int a, int b) {
    if (a < 0) return b;
    if (b < 0) return a;
    std::swap(edges_[a].next, edges_[b].next);
    return b;
}

void TreeMerge::refresh_heap(int b) {
    auto& B = bl_[b];
    if (B.best < 0) return;
    int64_t t = edges_[B.best].t;
    if (!B.h) B.h = heap_.insert(t, b);
    else if (t < heap_.key(B.h)) heap_.decrease_key(B.h, t);
}

void TreeMerge::place_loose(int b, int e) {
    auto& B = bl_[b];
    ring_append(B.loose, e);
    ++B.loose_len;
    edges_[e].credits = credits_for(edges_[e].kind, false);
    if (better(e, B.best)) {
        B.best = e;
        refresh_heap(b);
    }
}

void TreeMerge::check_stem(int e, int bv) {
    const auto& E = edges_[e];
    if (E.kind == EdgeKind::L) return;
    int top = bl_[bv].top;
    int gap = depth_[top] - depth_[E.w];
    if (gap < 0 || gap > 2 * bl_[bv].size) ++stem_violations_;
}

void TreeMerge::make_edge(int v, int w, int64_t t, int64_t payload) {
    if (!in_tree(v) || !in_tree(w)) throw std::invalid_argument("make_edge: endpoint not in tree");
    if (depth_[v] <= depth_[w]) throw std::invalid_argument("make_edge: requires d(v) > d(w)");
    ++cnt_.make_edges;
    ++cnt_.charged_units;
    int bv = find(v), bw = find(w);
    if (bv == bw) {
        ++cnt_.discarded;
        return;
    }
    int r_e = lg_[depth_[v] - depth_[w]];
    Classification c = classify(r_e, bl_[bv].rank, bl_[bw].rank);
    edges_.push_back(Edge{v, w, t, payload, -1, c.kind, c.u_is_v, c.r, 0});
    int e = static_cast<int>(edges_.size()) - 1;
    if (debug_) check_stem(e, bv);
    place_loose(c.u_is_v ? bv : bw, e);
}

int TreeMerge::merge(int x, int y) {
    if (x == y || x < 0 || y < 0 || x >= static_cast<int>(bl_.size()) ||
        y >= static_cast<int>(bl_.size()) || !bl_[x].alive || !bl_[y].alive)
        throw std::invalid_argument("merge: blossoms must be distinct and current");
    ++cnt_.merges;
    int logn = lg_[capacity()];
    cnt_.charged_units += logn + 1;

    Blossom& X = bl_[x];
    Blossom& Y = bl_[y];
    int rx = X.rep, ry = Y.rep;
    int zsize = X.size + Y.size;
    int top = depth_[X.top] <= depth_[Y.top] ? X.top : Y.top;
    // union by size
    int root = X.size >= Y.size ? rx : ry;
    uf_[root == rx ? ry : rx] = root;

    // collect R0 and keep the high-rank packets
    int zrank = lg_[zsize];
    r0_.clear();
    std::vector<Packet> high;
    auto take_ring = [&](int ring) {
        if (ring < 0) return;
        int s = edges_[ring].next;
        int e = s;
        do {
            r0_.push_back(e);
            e = edges_[e].next;
        } while (e != s);
    };
    for (Blossom* B : {&X, &Y}) {
        take_ring(B->loose);
        for (auto& p : B->packets) {
            if (p.r <= zrank) take_ring(p.ring);
            else high.push_back(p);
        }
        if (B->h) heap_.lazy_delete(B->h);
        B->alive = false;
        B->packets.clear();
        B->packets.shrink_to_fit();
    }

    Blossom Zb;
    Zb.size = zsize;
    Zb.rank = zrank;
    Zb.rep = root;
    Zb.top = top;
    bl_.push_back(std::move(Zb));
    int z = static_cast<int>(bl_.size()) - 1;
    blossom_of_[root] = z;

    // gather R0 by neighbouring blossom, keep one smallest edge per neighbour
    touched_nb_.clear();
    for (int e : r0_) {
        ++cnt_.charged_units;
        auto& E = edges_[e];
        int bv = find(E.v), bw = find(E.w);
        if (bv == bw) {
            if (debug_ && bl_[bv].rank < E.r) ++rank_violations_;
            E.credits = 0;
            continue;
        }
        int nb = bv == z ? bw : bv;
        int key = bl_[nb].rep;
        int& slot = gather_nb_[key];
        if (slot < 0) {
            slot = e;
            touched_nb_.push_back(key);
        } else if (better(e, slot)) {
            edges_[slot].credits = 0;
            slot = e;
        } else {
            E.credits = 0;
        }
    }

    touched_pk_.clear();
    auto bucket = [&](int r) -> int& {
        if (r >= static_cast<int>(gather_pk_.size())) {
            gather_pk_.resize(r + 1, -1);
            gather_pk_best_.resize(r + 1, -1);
        }
        if (gather_pk_[r] < 0 && gather_pk_best_[r] != -2) {
            touched_pk_.push_back(r);
            gather_pk_best_[r] = -2;  // marks touched
        }
        return gather_pk_[r];
    };
    auto bucket_best = [&](int r, int e) {
        int& b = gather_pk_best_[r];
        if (b < 0 || better(e, b)) b = e;
    };

    for (int key : touched_nb_) {
        int e = gather_nb_[key];
        gather_nb_[key] = -1;
        auto& E = edges_[e];
        int bv = find(E.v), bw = find(E.w);
        Classification c = classify(lg_[depth_[E.v] - depth_[E.w]], bl_[bv].rank, bl_[bw].rank);
        ++cnt_.reclassified;
        E.kind = c.kind;
        E.u_is_v = c.u_is_v;
        E.r = c.r;
        if (debug_) check_stem(e, bv);
        int bu = c.u_is_v ? bv : bw;
        if (bu != z) {
            place_loose(bu, e);
        } else {
            if (debug_ && c.r <= zrank) ++rank_violations_;
            int& ring = bucket(c.r);
            ring_append(ring, e);
            bucket_best(c.r, e);
            E.credits = credits_for(c.kind, true);
        }
    }

    for (auto& p : high) {
        int& ring = bucket(p.r);
        ring = ring_concat(ring, p.ring);
        bucket_best(p.r, p.best);
    }

    Blossom& Z = bl_[z];
    for (int r : touched_pk_) {
        Z.packets.push_back(Packet{r, gather_pk_[r], gather_pk_best_[r]});
        if (better(gather_pk_best_[r], Z.best)) Z.best = gather_pk_best_[r];
        gather_pk_[r] = -1;
        gather_pk_best_[r] = -1;
    }
    refresh_heap(z);
    return z;
}

std::optional<TbmMin> TreeMerge::find_min() {
    auto h = heap_.min_handle();
    if (!h) return std::nullopt;
    int b = heap_.payload(*h);
    const auto& E = edges_[bl_[b].best];
    if (debug_ && find(E.v) == find(E.w))
        throw std::logic_error("tree-merge: minimum edge lies inside one blossom");
    return TbmMin{E.v, E.w, E.t, E.payload};
}

std::vector<TbmBlossomDump> TreeMerge::dump() const {
    std::vector<TbmBlossomDump> out;
    for (int i = 0; i < static_cast<int>(bl_.size()); ++i) {
        const auto& B = bl_[i];
        if (!B.alive) continue;
        TbmBlossomDump d{i, B.size, B.rank, B.loose_len, {}, B.best < 0 ? kInfKey : edges_[B.best].t};
        for (auto& p : B.packets) d.packet_ranks.push_back(p.r);
        std::sort(d.packet_ranks.begin(), d.packet_ranks.end());
        out.push_back(std::move(d));
    }
    return out;
}

std::string TreeMerge::audit_credits() const {
    for (const auto& B : bl_) {
        if (!B.alive) continue;
        auto walk = [&](int ring, bool in_packet) -> std::string {
            if (ring < 0) return "";
            int s = edges_[ring].next, e = s;
            do {
                const auto& E = edges_[e];
                if (E.credits < 0) return "negative credit";
                if (E.credits != credits_for(E.kind, in_packet)) return "credit mismatch";
                e = E.next;
            } while (e != s);
            return "";
        };
        if (auto m = walk(B.loose, false); !m.empty()) return m;
        for (auto& p : B.packets)
            if (auto m = walk(p.ring, true); !m.empty()) return m;
    }
    return "";
}

int64_t TreeMerge::total_credits() const {
    int64_t s = 0;
    for (const auto& E : edges_) s += E.credits;
    return s;
}

}  // namespace wm
