#pragma once

// Random instance generators shared by tests and the acceptance runner.

#include <random>

#include "wm/certify.hpp"
#include "wm/multigraph.hpp"

namespace wm::gen {

using Rng = std::mt19937_64;

inline int uni(Rng& r, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(r); }

// simple graph, weights in [lo, hi]
inline Multigraph simple_graph(Rng& r, int n, double p, int lo, int hi) {
    std::vector<EdgeRec> es;
    std::bernoulli_distribution keep(p);
    for (int u = 0; u < n; u++)
        for (int v = u + 1; v < n; v++)
            if (keep(r)) es.push_back({u, v, uni(r, lo, hi), 1, 0});
    for (size_t i = 0; i < es.size(); i++) es[i].orig = static_cast<int>(i);
    return Multigraph(n, es);
}

// multigraph with m random edges (parallel edges and loops allowed) and
// multiplicities drawn from [mlo, mhi] (kUnbounded when mhi < 0)
inline Multigraph multigraph(Rng& r, int n, int m, int lo, int hi, int mlo, int mhi, double loop_p) {
    std::vector<EdgeRec> es;
    std::bernoulli_distribution lp(loop_p);
    for (int i = 0; i < m; i++) {
        int u = uni(r, 0, n - 1), v = u;
        if (n > 1 && !lp(r))
            while (v == u) v = uni(r, 0, n - 1);
        int64_t mult = mhi < 0 ? kUnbounded : uni(r, mlo, mhi);
        es.push_back({u, v, uni(r, lo, hi), mult, i});
    }
    return Multigraph(n, es);
}

// random spanning tree plus `extra` non-loop edges, weights in [lo, hi]
inline Multigraph connected_graph(Rng& r, int n, int extra, int lo, int hi) {
    std::vector<EdgeRec> es;
    for (int v = 1; v < n; v++) es.push_back({uni(r, 0, v - 1), v, uni(r, lo, hi), 1, 0});
    for (int i = 0; i < extra && n > 1; i++) {
        int u = uni(r, 0, n - 1), v = u;
        while (v == u) v = uni(r, 0, n - 1);
        es.push_back({u, v, uni(r, lo, hi), 1, 0});
    }
    return Multigraph(n, es);
}

// connected with no negative cycle; resamples, so keep n-1+extra ≤ 14.
// A cost is negative with probability 1/4 so that few samples are rejected.
inline Multigraph conservative_graph(Rng& r, int n, int extra, int lo, int hi) {
    std::bernoulli_distribution neg(0.25);
    for (;;) {
        std::vector<EdgeRec> es = connected_graph(r, n, extra, 0, 0).edges();
        for (auto& e : es) e.w = lo < 0 && neg(r) ? uni(r, lo, -1) : uni(r, std::max(lo, 0), hi);
        Multigraph g(n, es);
        if (brute_force_tjoin(g, {}) >= 0) return g;
    }
}

inline DegreeFn degrees(Rng& r, int n, int lo, int hi) {
    DegreeFn d(n);
    for (auto& x : d) x = uni(r, lo, hi);
    return d;
}

// product of (copy_cap+1): the size of the degree oracle's search space
inline double oracle_space(const Multigraph& g, const DegreeFn& d) {
    double s = 1;
    for (int i = 0; i < g.m(); i++) s *= static_cast<double>(copy_cap(g, d, i) + 1);
    return s;
}

}  // namespace wm::gen
