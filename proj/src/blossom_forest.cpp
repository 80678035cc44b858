#include "wm/blossom_forest.hpp"

#include <algorithm>
#include <stdexcept>

namespace wm {

BlossomForest::BlossomForest(const Multigraph& g)
    : x(g.m(), 0), g_(&g), n_(g.n()), parent_(g.n(), -1), pos_(g.n(), -1), eta_(g.n(), -1),
      mark_(g.n(), 0) {
    live_[0].assign(g.m(), 0);
    live_[1].assign(g.m(), 0);
}

int BlossomForest::new_copy(int rec, bool matched) {
    if (matched) x[rec]++;
    return adopt(rec, matched);
}

int BlossomForest::adopt(int rec, bool matched) {
    copies_.push_back({rec, matched});
    refs_.push_back(0);
    return static_cast<int>(copies_.size()) - 1;
}

void BlossomForest::retain(int c) {
    if (refs_[c]++ == 0) live_[copies_[c].matched ? 1 : 0][copies_[c].rec]++;
}

void BlossomForest::release(int c) {
    if (refs_[c] <= 0) throw std::logic_error("release of an unreferenced copy");
    if (--refs_[c] == 0) live_[copies_[c].matched ? 1 : 0][copies_[c].rec]--;
}

void BlossomForest::set_eta(int node, int c) {
    if (eta_[node] == c) return;
    if (eta_[node] >= 0) release(eta_[node]);
    eta_[node] = c;
    if (c >= 0) retain(c);
}

void BlossomForest::flip_copy(int c) {
    Copy& cp = copies_[c];
    if (refs_[c] > 0) {
        live_[cp.matched ? 1 : 0][cp.rec]--;
        live_[cp.matched ? 0 : 1][cp.rec]++;
    }
    cp.matched = !cp.matched;
    x[cp.rec] += cp.matched ? 1 : -1;
    work++;
}

int BlossomForest::top_of(int v) const {
    while (parent_[v] >= 0) v = parent_[v];
    return v;
}

int BlossomForest::child_containing(int B, int v) const {
    int c = v;
    while (parent_[c] != B) {
        c = parent_[c];
        if (c < 0) throw std::invalid_argument("vertex not in blossom");
    }
    return c;
}

int BlossomForest::kid_index(int B, int kid) const {
    if (parent_[kid] != B) throw std::invalid_argument("not a child");
    return pos_[kid];
}

MType BlossomForest::mtype(int node) const {
    while (!is_atom(at(node).kids[0])) node = at(node).kids[0];
    return copy_type(at(node).ring[0]);
}

int BlossomForest::eta(int node) const {
    while (parent_[node] >= 0 && pos_[node] == 0) node = parent_[node];
    return eta_[node];
}

void BlossomForest::vertices(int node, std::vector<int>& out) const {
    if (is_atom(node)) {
        out.push_back(node);
        return;
    }
    for (int k : at(node).kids) vertices(k, out);
}

int BlossomForest::vertex_count(int node) const {
    if (is_atom(node)) return 1;
    int s = 0;
    for (int k : at(node).kids) s += vertex_count(k);
    return s;
}

int BlossomForest::contract(std::vector<int> kids, std::vector<int> ring, std::vector<int> ring_a,
                            std::vector<int> ring_b, int eta_max) {
    const int k = static_cast<int>(kids.size());
    if (k == 0 || static_cast<int>(ring.size()) != k || static_cast<int>(ring_a.size()) != k ||
        static_cast<int>(ring_b.size()) != k)
        throw std::invalid_argument("contract: ring size mismatch");
    const int N = n_ + static_cast<int>(bl_.size());
    for (int i = 0; i < k; i++) {
        if (parent_[kids[i]] >= 0) throw std::invalid_argument("contract: kid not maximal");
        parent_[kids[i]] = N;
        pos_[kids[i]] = i;
    }
    parent_.push_back(-1);
    pos_.push_back(-1);
    eta_.push_back(-1);
    set_eta(N, eta_max);
    for (int c : ring) retain(c);
    Blossom b;
    b.base = base(kids[0]);
    b.kids = std::move(kids);
    b.ring = std::move(ring);
    b.ring_a = std::move(ring_a);
    b.ring_b = std::move(ring_b);
    bl_.push_back(std::move(b));
    const Blossom& B = bl_.back();
    set_eta(B.kids[0], -1);
    for (int i = 1; i < k; i++) {
        int c = B.kids[i];
        if (is_atom(c)) continue;
        int prev = B.ring[i - 1], next = B.ring[i];
        if (eta_[c] == prev || eta_[c] == next) continue;
        MType want = flip(mtype(c));
        int bc = base(c);
        if (B.ring_b[i - 1] == bc && copy_type(prev) == want)
            set_eta(c, prev);
        else if (B.ring_a[i] == bc && copy_type(next) == want)
            set_eta(c, next);
        else
            throw std::logic_error("contract: child has no base edge in the ring");
    }
    work += k;
    return N;
}

void BlossomForest::dissolve(int node) {
    if (is_atom(node) || !maximal(node)) throw std::invalid_argument("dissolve: not a maximal blossom");
    Blossom& B = bl_[bid(node)];
    if (!is_atom(B.kids[0])) set_eta(B.kids[0], eta_[node]);
    set_eta(node, -1);
    for (int c : B.kids) {
        parent_[c] = -1;
        pos_[c] = -1;
    }
    for (int c : B.ring) release(c);
    B.alive = false;
    work += static_cast<int64_t>(B.kids.size());
}

void BlossomForest::plan(int node, int v, int i, std::vector<Item>& items) const {
    const Blossom& B = at(node);
    const int k = static_cast<int>(B.kids.size());
    const MType tB = mtype(node);
    const int j = kid_index(node, child_containing(node, v));
    auto pass = [&](int idx, int sv, int si, bool rev, int in, int out) {
        items.push_back({false, -1, false, idx, sv, si, rev, in, out});
    };

    bool fwd = true;
    if (j == 0) {
        if (!is_atom(B.kids[0])) {
            pass(0, v, i, false, -1, -1);
            return;
        }
        if (i == 0) return;
        // whole cycle, leaving α by ring[0]
    } else {
        int c0 = B.kids[j];
        int next = B.ring[j], prev = B.ring[j - 1];
        if (is_atom(c0)) {
            MType want = i == 0 ? flip(tB) : tB;
            if (copy_type(next) == want)
                fwd = true;
            else if (copy_type(prev) == want)
                fwd = false;
            else
                throw std::logic_error("trail: no exit edge of the required type");
        } else {
            int e = eta(c0);
            if (e == next)
                fwd = true;
            else if (e == prev)
                fwd = false;
            else
                throw std::logic_error("trail: base edge of child is not a ring edge");
            int si = mtype(c0) == tB ? i : 1 - i;
            pass(j, v, si, false, -1, fwd ? j : j - 1);
        }
    }

    int cur = j;
    for (;;) {
        int r = fwd ? cur : (cur - 1 + k) % k;
        items.push_back({true, r, fwd, -1, -1, -1, false, -1, -1});
        work++;
        int nxt = fwd ? (cur + 1) % k : (cur - 1 + k) % k;
        int entry = fwd ? B.ring_b[r] : B.ring_a[r];
        int c = B.kids[nxt];
        if (nxt == 0) {
            if (!is_atom(c)) {
                int si = copy_type(B.ring[r]) == mtype(c) ? 0 : 1;
                pass(0, entry, si, false, r, -1);
            }
            break;
        }
        int r2 = fwd ? nxt : nxt - 1;
        if (!is_atom(c)) {
            int ec = eta(c);
            if (ec == B.ring[r2]) {
                int si = copy_type(B.ring[r]) == mtype(c) ? 0 : 1;
                pass(nxt, entry, si, false, r, r2);
            } else if (ec == B.ring[r]) {
                int exitv = fwd ? B.ring_a[r2] : B.ring_b[r2];
                int si = copy_type(B.ring[r2]) == mtype(c) ? 0 : 1;
                pass(nxt, exitv, si, true, r, r2);
            } else {
                throw std::logic_error("trail: base edge of child is not a ring edge");
            }
        }
        cur = nxt;
    }
}

BlossomForest::TopPath BlossomForest::top_path(int node, int v, int i) const {
    std::vector<Item> items;
    plan(node, v, i, items);
    TopPath p;
    p.kids.push_back(pos_[child_containing(node, v)]);
    for (const Item& it : items) {
        if (!it.is_ring) continue;
        const int k = static_cast<int>(at(node).kids.size());
        int nxt = it.fwd ? (it.r + 1) % k : it.r;
        p.rings.push_back(it.r);
        p.kids.push_back(nxt);
    }
    return p;
}

void BlossomForest::trail(int node, int v, int i, std::vector<TrailEdge>& out) const {
    if (is_atom(node)) {
        if (node != v) throw std::invalid_argument("trail: vertex not in node");
        return;
    }
    std::vector<Item> items;
    plan(node, v, i, items);
    const Blossom& B = at(node);
    for (const Item& it : items) {
        if (it.is_ring) {
            int c = B.ring[it.r];
            if (it.fwd)
                out.push_back({c, B.ring_a[it.r], B.ring_b[it.r]});
            else
                out.push_back({c, B.ring_b[it.r], B.ring_a[it.r]});
        } else if (!it.rev) {
            trail(B.kids[it.idx], it.sub_v, it.sub_i, out);
        } else {
            size_t start = out.size();
            trail(B.kids[it.idx], it.sub_v, it.sub_i, out);
            std::reverse(out.begin() + static_cast<std::ptrdiff_t>(start), out.end());
            for (size_t t = start; t < out.size(); t++) std::swap(out[t].from, out[t].to);
        }
    }
}

void BlossomForest::rematch(int node, int v, int i) {
    if (is_atom(node)) return;
    std::vector<Item> items;
    plan(node, v, i, items);
    Blossom& B = bl_[bid(node)];
    const int k = static_cast<int>(B.kids.size());
    const int j = pos_[child_containing(node, v)];

    // new base edges follow the trail: the edge of δ(c, trail) other than the old η(c)
    std::vector<std::pair<int, int>> new_eta;
    for (const Item& it : items) {
        if (it.is_ring || it.idx == j) continue;
        int c = B.kids[it.idx];
        if (it.idx == 0) {
            new_eta.push_back({c, B.ring[it.in_ring]});
        } else {
            int old = eta_[c];
            int in = B.ring[it.in_ring], out = B.ring[it.out_ring];
            new_eta.push_back({c, old == out ? in : out});
        }
    }
    for (const Item& it : items) {
        if (it.is_ring)
            flip_copy(B.ring[it.r]);
        else
            rematch(B.kids[it.idx], it.sub_v, it.sub_i);
    }
    if (j != 0) {
        std::rotate(B.kids.begin(), B.kids.begin() + j, B.kids.end());
        std::rotate(B.ring.begin(), B.ring.begin() + j, B.ring.end());
        std::rotate(B.ring_a.begin(), B.ring_a.begin() + j, B.ring_a.end());
        std::rotate(B.ring_b.begin(), B.ring_b.begin() + j, B.ring_b.end());
        for (int t = 0; t < k; t++) pos_[B.kids[t]] = t;
        work += k;
        int c0 = B.kids[0];
        if (!is_atom(c0)) set_eta(c0, -1);
    }
    for (auto [c, e] : new_eta) set_eta(c, e);
    B.base = v;
}

bool BlossomForest::is_mature(int node, Mode mode, const DegreeFn& deg) const {
    std::vector<int> vs;
    vertices(node, vs);
    const int beta = base(node);
    if (mode == Mode::F) {
        for (int u : vs)
            if (u != beta && d(u) != deg[u]) return false;
        int e = eta(node);
        if (d(beta) == deg[beta]) return e >= 0;
        return d(beta) == deg[beta] - 1 && e < 0;
    }
    for (int u : vs) mark_[u] = 1;
    bool ok = true;
    for (int u : vs) {
        int64_t din = 0;
        for (int rec : g_->incident(u)) {
            const EdgeRec& er = g_->edge(rec);
            if (!mark_[er.other(u)]) continue;
            din += er.loop() ? 2 * x[rec] : x[rec];
        }
        if (din != deg[u] - (u == beta ? 1 : 0)) {
            ok = false;
            break;
        }
    }
    for (int u : vs) mark_[u] = 0;
    return ok;
}

int64_t BlossomForest::inner_matched(int node) const {
    std::vector<int> vs;
    vertices(node, vs);
    for (int u : vs) mark_[u] = 1;
    int64_t s = 0;
    for (int u : vs)
        for (int rec : g_->incident(u)) {
            const EdgeRec& er = g_->edge(rec);
            int o = er.other(u);
            if (mark_[o] && (o > u || er.loop())) s += x[rec];
        }
    for (int u : vs) mark_[u] = 0;
    return s;
}

}  // namespace wm
