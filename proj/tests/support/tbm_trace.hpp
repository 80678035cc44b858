#pragma once

// Random operation traces for the tree-merge structure together with a naive
// reference that recomputes the inter-blossom minimum from scratch.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wm/tree_merge.hpp"

namespace wmtest {

struct NaiveTbm {
    std::vector<int> label, parent, depth;
    std::vector<std::vector<int>> members;
    struct E {
        int v, w;
        int64_t t;
    };
    std::vector<E> edges;

    explicit NaiveTbm(int n) : label(n, -1), parent(n, -1), depth(n, -1), members(n) {}
    void add(int x, int y) {
        parent[y] = x;
        depth[y] = x < 0 ? 0 : depth[x] + 1;
        label[y] = y;
        members[y] = {y};
    }
    int top(int lab) const {
        int best = members[lab][0];
        for (int v : members[lab])
            if (depth[v] < depth[best]) best = v;
        return best;
    }
    void merge(int a, int b) {
        if (members[a].size() < members[b].size()) std::swap(a, b);
        for (int v : members[b]) {
            label[v] = a;
            members[a].push_back(v);
        }
        members[b].clear();
    }
    bool min_key(int64_t& out) const {
        bool found = false;
        for (auto& e : edges) {
            if (label[e.v] == label[e.w]) continue;
            if (!found || e.t < out) out = e.t;
            found = true;
        }
        return found;
    }
};

struct TraceResult {
    int64_t find_mins = 0;
    int64_t mismatches = 0;
    std::string first_error;
    wm::TbmCounters counters;
    int64_t stem_violations = 0;
    int64_t rank_violations = 0;
    std::string credit_error;
};

// Interleaved add_leaf / make_edge / merge / find_min with a naive check at
// every find_min. `chain_bias` makes the tree deeper.
inline TraceResult run_checked_trace(int n, int ops, uint64_t seed, bool debug = true) {
    std::mt19937_64 rng(seed);
    wm::TreeMerge tm(n, debug);
    NaiveTbm nv(n);
    std::vector<int> inT;
    TraceResult res;
    tm.add_root(0);
    nv.add(-1, 0);
    inT.push_back(0);
    int next = 1;
    int64_t clock = 0;
    for (int op = 0; op < ops; ++op) {
        int k = static_cast<int>(rng() % 100);
        if (k < 35 && next < n) {
            int x = rng() % 3 == 0 ? inT.back() : inT[rng() % inT.size()];
            tm.add_leaf(x, next);
            nv.add(x, next);
            inT.push_back(next++);
        } else if (k < 65) {
            int v = inT[rng() % inT.size()];
            if (nv.depth[v] == 0) continue;
            int steps = 1 + static_cast<int>(rng() % nv.depth[v]);
            int w = v;
            for (int i = 0; i < steps; ++i) w = nv.parent[w];
            int64_t t = clock + static_cast<int64_t>(rng() % 1000);
            tm.make_edge(v, w, t, static_cast<int64_t>(nv.edges.size()));
            nv.edges.push_back({v, w, t});
        } else if (k < 85) {
            int v = inT[rng() % inT.size()];
            int lab = nv.label[v];
            int r = nv.top(lab);
            if (nv.parent[r] < 0) continue;
            int other = nv.label[nv.parent[r]];
            tm.merge(tm.find(v), tm.find(nv.parent[r]));
            nv.merge(lab, other);
        } else {
            ++res.find_mins;
            int64_t want = 0;
            bool has = nv.min_key(want);
            auto got = tm.find_min();
            bool ok = got.has_value() == has;
            if (ok && has) {
                ok = got->t == want && nv.label[got->v] != nv.label[got->w] &&
                     nv.edges[static_cast<size_t>(got->payload)].t == got->t;
            }
            if (!ok) {
                ++res.mismatches;
                if (res.first_error.empty())
                    res.first_error = "op " + std::to_string(op) + ": find_min disagrees with oracle";
            }
            clock += static_cast<int64_t>(rng() % 50);
        }
    }
    res.counters = tm.counters();
    res.stem_violations = tm.stem_violations();
    res.rank_violations = tm.rank_violations();
    res.credit_error = tm.audit_credits();
    return res;
}

// Unchecked scaling trace: n vertices, about m_per_n*n make_edge calls and
// n-1 merges, for the work-counter ratio.
inline wm::TbmCounters run_scaling_trace(int n, int m_per_n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    wm::TreeMerge tm(n, false);
    std::vector<int> parent(n, -1), depth(n, 0);
    tm.add_root(0);
    // grow the whole tree first in bursts of chains
    for (int y = 1; y < n; ++y) {
        int x = rng() % 4 == 0 ? static_cast<int>(rng() % y) : y - 1;
        tm.add_leaf(x, y);
        parent[y] = x;
        depth[y] = depth[x] + 1;
    }
    std::vector<int> top(n);  // blossom top by blossom id is tracked through the vertices
    int64_t edges_left = static_cast<int64_t>(m_per_n) * n;
    int merges_left = n - 1;
    int64_t clock = 0;
    // order of merges: process vertices from deepest to shallowest, merging a
    // vertex's blossom into its parent's blossom, interleaved with edges
    std::vector<int> order(n - 1);
    for (int i = 0; i < n - 1; ++i) order[i] = i + 1;
    std::shuffle(order.begin(), order.end(), rng);
    size_t oi = 0;
    while (edges_left > 0 || merges_left > 0) {
        bool do_edge = edges_left > 0 && (merges_left == 0 || rng() % (m_per_n + 1) != 0);
        if (do_edge) {
            int v = 1 + static_cast<int>(rng() % (n - 1));
            int steps = 1 + static_cast<int>(rng() % std::min(depth[v], 64));
            int w = v;
            for (int i = 0; i < steps; ++i) w = parent[w];
            tm.make_edge(v, w, clock + static_cast<int64_t>(rng() % 1000), 0);
            --edges_left;
            if (rng() % 8 == 0) {
                tm.find_min();
                ++clock;
            }
        } else {
            int v = order[oi++];
            int a = tm.find(v), b = tm.find(parent[v]);
            if (a != b) tm.merge(a, b);
            --merges_left;
        }
    }
    return tm.counters();
}

}  // namespace wmtest
