#include <algorithm>
#include <numeric>

#include "wm/certify.hpp"

namespace wm {

namespace {

struct Dsu {
    std::vector<int> p;
    explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int a) {
        while (p[a] != a) a = p[a] = p[p[a]];
        return a;
    }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

constexpr int64_t kNone = std::numeric_limits<int64_t>::min() / 4;

}  // namespace

BruteResult brute_force_matching(const Multigraph& g) {
    const int n = g.n();
    if (n > 12) throw OracleLimit("matching oracle is limited to 12 vertices");
    // heaviest parallel edge per pair
    std::vector<int> best(n * n, -1);
    for (int i = 0; i < g.m(); i++) {
        const EdgeRec& e = g.edge(i);
        if (e.loop() || e.mult == 0) continue;
        int& s = best[e.u * n + e.v];
        if (s < 0 || g.edge(s).w < e.w) s = best[e.v * n + e.u] = i;
    }
    const int full = (1 << n) - 1;
    // dp over the set of vertices still to be matched
    std::vector<int64_t> wt(full + 1, kNone);
    std::vector<int> pick(full + 1, -1);
    std::vector<int> sz(full + 1, 0);
    wt[0] = 0;
    for (int mask = 1; mask <= full; mask++) {
        int u = __builtin_ctz(mask);
        int rest = mask & ~(1 << u);
        sz[mask] = sz[rest];
        for (int v = u + 1; v < n; v++) {
            if (!(rest >> v & 1) || best[u * n + v] < 0) continue;
            int sub = rest & ~(1 << v);
            sz[mask] = std::max(sz[mask], sz[sub] + 1);
            if (wt[sub] == kNone) continue;
            int64_t cand = wt[sub] + g.edge(best[u * n + v]).w;
            if (wt[mask] == kNone || cand > wt[mask]) {
                wt[mask] = cand;
                pick[mask] = best[u * n + v];
            }
        }
    }
    BruteResult r;
    r.max_size = sz[full];
    r.x.assign(g.m(), 0);
    if (wt[full] == kNone) return r;
    r.feasible = true;
    r.weight = wt[full];
    for (int mask = full; mask;) {
        const EdgeRec& e = g.edge(pick[mask]);
        r.x[pick[mask]] = 1;
        mask &= ~(1 << e.u);
        mask &= ~(1 << e.v);
    }
    return r;
}

BruteResult brute_force_degree(const Multigraph& g, const DegreeFn& deg) {
    const int m = g.m(), n = g.n();
    std::vector<int64_t> cap(m);
    double space = 1;
    for (int i = 0; i < m; i++) {
        cap[i] = copy_cap(g, deg, i);
        space *= static_cast<double>(cap[i] + 1);
    }
    if (space > 1e7) throw OracleLimit("degree oracle search space exceeds 10^7");
    BruteResult r;
    r.x.assign(m, 0);
    MatchingVec x(m, 0);
    std::vector<int64_t> res = deg;
    int64_t size = 0, w = 0;
    auto rec = [&](auto&& self, int i) -> void {
        if (i == m) {
            r.max_size = std::max(r.max_size, size);
            for (int v = 0; v < n; v++)
                if (res[v] != 0) return;
            if (!r.feasible || w > r.weight) {
                r.feasible = true;
                r.weight = w;
                r.x = x;
            }
            return;
        }
        const EdgeRec& e = g.edge(i);
        int64_t per = e.loop() ? 2 : 1;
        for (int64_t k = 0; k <= cap[i]; k++) {
            if (k > 0) {
                if (res[e.u] < per || (!e.loop() && res[e.v] < 1)) break;
                res[e.u] -= e.loop() ? 2 : 1;
                if (!e.loop()) res[e.v] -= 1;
                size++;
                w += e.w;
            }
            x[i] = k;
            self(self, i + 1);
        }
        res[e.u] += x[i] * per;
        if (!e.loop()) res[e.v] += x[i];
        size -= x[i];
        w -= x[i] * e.w;
        x[i] = 0;
    };
    rec(rec, 0);
    return r;
}

int64_t brute_force_tjoin(const Multigraph& g, const std::vector<int>& T, std::vector<int>* edges) {
    const int m = g.m(), n = g.n();
    if (m > 14) throw OracleLimit("T-join oracle is limited to 14 edges");
    std::vector<char> want(n, 0);
    for (int t : T) want[t] ^= 1;
    int64_t best = kInfDist;
    int best_mask = -1;
    std::vector<char> par(n);
    for (int mask = 0; mask < (1 << m); mask++) {
        std::fill(par.begin(), par.end(), 0);
        int64_t c = 0;
        for (int i = 0; i < m; i++)
            if (mask >> i & 1) {
                const EdgeRec& e = g.edge(i);
                c += e.w;
                if (!e.loop()) {
                    par[e.u] ^= 1;
                    par[e.v] ^= 1;
                }
            }
        if (par != want || c >= best) continue;
        best = c;
        best_mask = mask;
    }
    if (edges) {
        edges->clear();
        for (int i = 0; i < m && best_mask >= 0; i++)
            if (best_mask >> i & 1) edges->push_back(i);
    }
    return best;
}

std::vector<int64_t> brute_force_sssp(const Multigraph& g, int s) {
    const int n = g.n();
    if (n > 9) throw OracleLimit("shortest-path oracle is limited to 9 vertices");
    std::vector<int64_t> dist(n, kInfDist);
    std::vector<char> on(n, 0);
    auto dfs = [&](auto&& self, int v, int64_t d) -> void {
        dist[v] = std::min(dist[v], d);
        on[v] = 1;
        for (int i : g.incident(v)) {
            const EdgeRec& e = g.edge(i);
            int w = e.other(v);
            if (e.loop() || on[w]) continue;
            self(self, w, d + e.w);
        }
        on[v] = 0;
    };
    dfs(dfs, s, 0);
    return dist;
}

int64_t eval_min_max_b(const Multigraph& g, const DegreeFn& b) {
    const int n = g.n();
    if (n > 14) throw OracleLimit("b min-max enumeration is limited to 14 vertices");
    int64_t best = kInfDist;
    for (int I = 0; I < (1 << n); I++) {
        int64_t val = 0;
        for (int v = 0; v < n; v++)
            if (I >> v & 1) val += b[v];
        Dsu d(n);
        std::vector<char> loop(n, 0);
        for (int i = 0; i < g.m(); i++) {
            const EdgeRec& e = g.edge(i);
            if ((I >> e.u & 1) || (I >> e.v & 1) || e.mult == 0) continue;
            if (e.loop())
                loop[e.u] = 1;
            else
                d.unite(e.u, e.v);
        }
        std::vector<int64_t> bc(n, 0);
        std::vector<int> cnt(n, 0);
        std::vector<char> lp(n, 0);
        for (int v = 0; v < n; v++) {
            if (I >> v & 1) continue;
            int r = d.find(v);
            bc[r] += b[v];
            cnt[r]++;
            lp[r] |= loop[v];
        }
        for (int r = 0; r < n; r++)
            if (cnt[r] >= 2 || lp[r]) val += bc[r] / 2;
        best = std::min(best, val);
    }
    return best;
}

int64_t eval_min_max_f(const Multigraph& g, const DegreeFn& f) {
    const int n = g.n();
    if (n > 10) throw OracleLimit("f min-max enumeration is limited to 10 vertices");
    int total = 1;
    for (int i = 0; i < n; i++) total *= 3;
    std::vector<int> role(n);
    std::vector<int64_t> cap(g.m());
    for (int i = 0; i < g.m(); i++) cap[i] = copy_cap(g, f, i);
    int64_t best = kInfDist;
    for (int code = 0; code < total; code++) {
        for (int v = 0, c = code; v < n; v++, c /= 3) role[v] = c % 3;  // 0 C, 1 I, 2 O
        int64_t val = 0;
        Dsu d(n);
        for (int v = 0; v < n; v++)
            if (role[v] == 1) val += f[v];
        for (int i = 0; i < g.m(); i++) {
            const EdgeRec& e = g.edge(i);
            if (role[e.u] == 0 && role[e.v] == 0) d.unite(e.u, e.v);
            if (role[e.u] == 2 && role[e.v] == 2) val += cap[i];
        }
        std::vector<int64_t> acc(n, 0);
        for (int v = 0; v < n; v++)
            if (role[v] == 0) acc[d.find(v)] += f[v];
        for (int i = 0; i < g.m(); i++) {
            const EdgeRec& e = g.edge(i);
            if (role[e.u] == 0 && role[e.v] == 2) acc[d.find(e.u)] += cap[i];
            if (role[e.v] == 0 && role[e.u] == 2) acc[d.find(e.v)] += cap[i];
        }
        for (int v = 0; v < n; v++)
            if (role[v] == 0 && d.find(v) == v) val += acc[v] / 2;
        best = std::min(best, val);
        if (best == 0) break;
    }
    return best;
}

}  // namespace wm
