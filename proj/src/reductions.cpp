#include "wm/reductions.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>

#include <json.hpp>

namespace wm {

namespace {

int64_t floor_div(int64_t a, int64_t b) {
    int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Multigraph regroups its records; carries per-record tags to the new order.
std::vector<int> build_aux(int n, std::vector<EdgeRec> es, const std::vector<int>& tag, Multigraph& out) {
    out = Multigraph(n, std::move(es));
    std::vector<int> t(out.m());
    for (int i = 0; i < out.m(); i++) t[i] = tag[out.edge(i).orig];
    return t;
}

void check_degrees(const Multigraph& g, const DegreeFn& d, const char* what) {
    if (static_cast<int>(d.size()) != g.n()) throw std::invalid_argument(std::string(what) + " has the wrong size");
    for (int64_t k : d)
        if (k < 0) throw std::invalid_argument(std::string(what) + " is negative");
}

}  // namespace

// ---- (ℓ,h)-subgraphs

ReductionPlan build_lh_reduction(const Multigraph& g, const DegreeFn& lo, const DegreeFn& hi, Sense sense) {
    const int n = g.n(), m = g.m();
    check_degrees(g, lo, "lower bound");
    check_degrees(g, hi, "upper bound");
    for (int v = 0; v < n; v++)
        if (lo[v] > hi[v]) throw std::invalid_argument("lower bound exceeds upper bound at vertex " + std::to_string(v + 1));

    ReductionPlan p;
    p.sign = sense == Sense::Min ? -1 : 1;
    p.forced.assign(m, 0);
    DegreeFn l = lo, h = hi;

    bool nonneg = true, hdeg = !g.has_unbounded();
    for (const EdgeRec& e : g.edges()) nonneg &= e.w >= 0;
    if (hdeg) {
        MatchingVec all(m);
        for (int i = 0; i < m; i++) all[i] = g.edge(i).mult;
        for (int v = 0; v < n; v++) hdeg &= degree(g, all, v) == h[v];
    }
    std::vector<char> drop(m, 0);
    // h = d_G: every negative edge belongs to some optimum, take it outright
    if (sense == Sense::Min && !nonneg && hdeg) {
        for (int i = 0; i < m; i++)
            if (g.edge(i).w < 0) {
                p.forced[i] = g.edge(i).mult;
                drop[i] = 1;
            }
        for (int v = 0; v < n; v++) {
            int64_t dn = degree(g, p.forced, v);
            l[v] = std::max<int64_t>(l[v] - dn, 0);
            h[v] -= dn;
        }
    }
    const bool warm = sense == Sense::Min && (nonneg || hdeg);

    std::vector<EdgeRec> es;
    for (int i = 0; i < m; i++) {
        if (drop[i]) continue;
        EdgeRec e = g.edge(i);
        e.w = p.sign * e.w;
        es.push_back(e);
        p.back.push_back(i);
    }
    const int s = n;
    int64_t hV = 0, lV = 0;
    for (int v = 0; v < n; v++) {
        hV = checked_add(hV, h[v]);
        lV += l[v];
    }
    for (int v = 0; v < n; v++)
        if (h[v] > l[v]) {
            es.push_back({v, s, 0, h[v] - l[v]});
            p.back.push_back(-1);
        }
    if (hV / 2 > 0) {
        es.push_back({s, s, 0, hV / 2});
        p.back.push_back(-1);
    }
    p.back = build_aux(n + 1, std::move(es), p.back, p.aux);
    p.deg = h;
    p.deg.push_back(hV);

    if (warm) {
        MatchingVec x(p.aux.m(), 0);
        for (int i = 0; i < p.aux.m(); i++) {
            if (p.back[i] >= 0) continue;
            const EdgeRec& e = p.aux.edge(i);
            x[i] = e.loop() ? (lV - lV % 2) / 2 : e.mult;
        }
        p.warm_x = std::move(x);
        p.warm_y = std::vector<int64_t>(n + 1, 0);
    }
    return p;
}

PlanResult solve_plan(const Multigraph& g, const ReductionPlan& plan, const SolveOptions& opt) {
    SolveOptions o = opt;
    if (plan.warm_x) o.warm_x = plan.warm_x;
    if (plan.warm_y) o.warm_y = plan.warm_y;
    PlanResult r;
    r.aux = solve_f_factor(plan.aux, plan.deg, o);
    r.feasible = r.aux.perfect;
    r.x = plan.forced;
    if (r.x.empty()) r.x.assign(g.m(), 0);
    for (int i = 0; i < plan.aux.m(); i++)
        if (plan.back[i] >= 0) r.x[plan.back[i]] += r.aux.x[i];
    r.weight = matching_weight(g, r.x);
    return r;
}

// ---- T-joins

ReductionPlan build_tjoin_reduction(const Multigraph& g, const std::vector<int>& T) {
    const int n = g.n(), m = g.m();
    std::vector<char> inT(n, 0);
    for (int t : T) {
        if (t < 0 || t >= n) throw std::invalid_argument("terminal out of range");
        if (inT[t]) throw std::invalid_argument("duplicate terminal");
        inT[t] = 1;
    }
    if (T.size() % 2) throw std::invalid_argument("T-join needs an even number of terminals");

    ReductionPlan p;
    p.sign = -1;
    p.forced.assign(m, 0);
    MatchingVec neg(m, 0);
    int64_t nneg = 0;
    std::vector<EdgeRec> es;
    for (int i = 0; i < m; i++) {
        EdgeRec e = g.edge(i);
        e.w = -e.w;
        e.mult = 1;
        if (e.w > 0) {
            neg[i] = 1;
            nneg++;
        }
        es.push_back(e);
        p.back.push_back(i);
    }
    const int64_t t = static_cast<int64_t>(T.size()) + 2 * nneg;
    if (t / 2 > 0)
        for (int v = 0; v < n; v++) {
            es.push_back({v, v, 0, t / 2});
            p.back.push_back(-1);
        }
    p.back = build_aux(n, std::move(es), p.back, p.aux);
    p.deg.assign(n, t);
    for (int v = 0; v < n; v++)
        if (inT[v]) p.deg[v] = t - 1;

    // negative edges plus loops up to f(v)-1 ≤ d(v) ≤ f(v)
    MatchingVec x(p.aux.m(), 0);
    for (int i = 0; i < p.aux.m(); i++) {
        int v = p.aux.edge(i).u;
        x[i] = p.back[i] >= 0 ? neg[p.back[i]] : (p.deg[v] - degree(g, neg, v)) / 2;
    }
    p.warm_x = std::move(x);
    p.warm_y = std::vector<int64_t>(n, 0);
    return p;
}

TJoinResult solve_t_join(const Multigraph& g, const std::vector<int>& T, const SolveOptions& opt) {
    ReductionPlan p = build_tjoin_reduction(g, T);
    PlanResult pr = solve_plan(g, p, opt);
    TJoinResult r;
    r.feasible = pr.feasible;
    r.searches = pr.aux.counters.searches;
    if (r.feasible)
        for (int i = 0; i < g.m(); i++)
            if (pr.x[i] > 0) {
                r.edges.push_back(i);
                r.cost += g.edge(i).w;
            }
    r.aux = std::move(pr.aux);
    return r;
}

// ---- shortest paths

namespace {

struct SsspAux {
    std::shared_ptr<Multigraph> g;
    std::vector<int> to_orig;
};

// Non-loop edges at cost 4n·c+1 (as weights, negated), one zero loop per
// vertex except `skip`.
SsspAux sssp_graph(const Multigraph& g, int skip) {
    const int n = g.n();
    const int64_t K = 4 * static_cast<int64_t>(n);
    SsspAux a;
    std::vector<EdgeRec> es;
    for (int i = 0; i < g.m(); i++) {
        const EdgeRec& e = g.edge(i);
        if (e.loop()) continue;
        es.push_back({e.u, e.v, -checked_add(checked_mul(K, e.w), 1), 1});
        a.to_orig.push_back(i);
    }
    for (int v = 0; v < n; v++)
        if (v != skip) {
            es.push_back({v, v, 0, 1});
            a.to_orig.push_back(-1);
        }
    auto G = std::make_shared<Multigraph>();
    a.to_orig = build_aux(n, std::move(es), a.to_orig, *G);
    a.g = std::move(G);
    return a;
}

// A negative-cost f-factor of cycles, or empty when c is conservative.
std::vector<int> negative_cycles(const Multigraph& g) {
    SsspAux a = sssp_graph(g, -1);
    SolveResult r = solve_f_factor(*a.g, DegreeFn(g.n(), 2));
    std::vector<int> out;
    if (r.weight <= 0) return out;
    for (int i = 0; i < a.g->m(); i++)
        if (r.x[i] > 0 && a.to_orig[i] >= 0) out.push_back(a.to_orig[i]);
    return out;
}

[[noreturn]] void report_nonconservative(const Multigraph& g) {
    std::vector<int> cyc = negative_cycles(g);
    if (cyc.empty()) throw InvariantError("shortest path labels failed to verify on conservative costs");
    throw NonConservative("cost function has a negative cycle", std::move(cyc));
}

}  // namespace

GspStructure build_sssp(const Multigraph& g, int s, const SolveOptions& opt) {
    const int n = g.n();
    if (s < 0 || s >= n) throw std::invalid_argument("source out of range");
    for (int i = 0; i < g.m(); i++)
        if (g.edge(i).loop() && g.edge(i).w < 0) throw NonConservative("negative loop", {i});
    {
        std::vector<int> p(n);
        std::iota(p.begin(), p.end(), 0);
        auto find = [&](int a) {
            while (p[a] != a) a = p[a] = p[p[a]];
            return a;
        };
        int comps = n;
        for (const EdgeRec& e : g.edges())
            if (find(e.u) != find(e.v)) {
                p[find(e.u)] = find(e.v);
                comps--;
            }
        if (comps != 1) throw std::invalid_argument("shortest paths need a connected graph");
    }

    SsspAux a = sssp_graph(g, s);
    const Multigraph& G = *a.g;
    DegreeFn f(n, 2);
    f[s] = 0;

    // y = W at ends of negative edges, 0 elsewhere; loops matched where y = 0
    int64_t W = 1;
    for (const EdgeRec& e : G.edges()) W = std::max(W, std::abs(e.w));
    std::vector<char> touched(n, 0);
    for (const EdgeRec& e : g.edges())
        if (e.w < 0) touched[e.u] = touched[e.v] = 1;
    EngineOptions eo;
    eo.debug = opt.debug;
    eo.trace = opt.trace;
    eo.warm_y = std::vector<int64_t>(n, 0);
    eo.warm_x = MatchingVec(G.m(), 0);
    for (int v = 0; v < n; v++)
        if (touched[v]) (*eo.warm_y)[v] = checked_mul(W, kDualScale);
    for (int i = 0; i < G.m(); i++)
        if (G.edge(i).loop() && !touched[G.edge(i).u]) (*eo.warm_x)[i] = 1;

    Engine e(G, f, Mode::F, eo);
    if (!e.run()) throw InvariantError("loop factor not found");
    if (e.weight() > 0) {
        std::vector<int> cyc;
        for (int i = 0; i < G.m(); i++)
            if (e.x()[i] > 0 && a.to_orig[i] >= 0) cyc.push_back(a.to_orig[i]);
        throw NonConservative("cost function has a negative cycle", std::move(cyc));
    }
    // cycles through s are invisible with f(s) = 0
    if (std::any_of(touched.begin(), touched.end(), [](char t) { return t != 0; })) {
        std::vector<int> cyc = negative_cycles(g);
        if (!cyc.empty()) throw NonConservative("cost function has a negative cycle", std::move(cyc));
    }
    e.set_degree(s, 1);
    if (e.run_one_search() != Engine::Outcome::Failed) throw InvariantError("search with f(s)=1 augmented");
    for (int v = 0; v < n; v++)
        if (e.status(e.top(v)) != NodeStatus::Outer) report_nonconservative(g);

    const int64_t unit = kDualScale * 4 * static_cast<int64_t>(n);  // 4n at engine scale
    int64_t ys = e.y(s);
    e.adjust(ys - floor_div(ys, unit) * unit);
    ys = e.y(s);

    GspStructure S;
    S.source = s;
    S.d.resize(n);
    S.y.resize(n);
    for (int v = 0; v < n; v++) {
        int64_t yv = e.y(v);
        S.y[v] = floor_div(yv, unit);
        S.d[v] = S.y[v] - ys / unit;
        int64_t len = yv - S.y[v] * unit;  // kDualScale·ℓ(P_v)
        if (len % kDualScale != 0 || len / kDualScale > n - 1) report_nonconservative(g);
    }
    S.zV = -2 * (ys / unit);

    const BlossomForest& F = e.forest();
    std::set<int> etas;
    for (int N = 0; N < F.num_nodes(); N++)
        if (F.is_atom(N) || F.at(N).alive)
            if (F.eta(N) >= 0) etas.insert(F.eta(N));
    auto orig_of = [&](int copy) { return a.to_orig[F.copy(copy).rec]; };

    // Z(B) from a witness, then z(B) = Z(B) - Z(parent)
    std::vector<int> idx(F.num_nodes(), -1);
    std::vector<int64_t> Z;
    for (int b = 0; b < F.num_blossoms(); b++) {
        if (!F.blossom(b).alive) continue;
        int N = F.node_of(b);
        const Blossom& B = F.blossom(b);
        GspBlossom gb;
        gb.node = N;
        F.vertices(N, gb.vertices);
        gb.base = F.base(N);
        gb.eta = F.eta(N) >= 0 ? orig_of(F.eta(N)) : -1;
        int wit = -1;
        for (int c : B.ring) {
            int rec = F.copy(c).rec;
            gb.ring.push_back(G.edge(rec).loop() ? -1 - G.edge(rec).u : a.to_orig[rec]);
            bool ok = G.edge(rec).loop() ? B.kids.size() == 1 : !etas.count(c);
            if (ok && wit < 0) wit = rec;
        }
        if (wit < 0) throw InvariantError("blossom without a witness edge");
        const EdgeRec& we = G.edge(wit);
        int64_t cost = a.to_orig[wit] >= 0 ? g.edge(a.to_orig[wit]).w : 0;
        int64_t Zb = -cost - S.y[we.u] - S.y[we.v];
        int64_t Zp = 0;
        for (int A = N; A >= 0; A = F.parent(A)) Zp += e.z(A);
        // 4n·Z(B) - Z'(B) lies in [0, 2n-1]
        int64_t r = Zb * unit - Zp;
        if (r < 0 || r > kDualScale * (2 * static_cast<int64_t>(n) - 1)) report_nonconservative(g);
        gb.witness = a.to_orig[wit];
        idx[N] = static_cast<int>(S.blossoms.size());
        Z.push_back(Zb);
        S.blossoms.push_back(std::move(gb));
    }
    for (size_t k = 0; k < S.blossoms.size(); k++) {
        int P = F.parent(S.blossoms[k].node);
        S.blossoms[k].parent = P >= 0 ? idx[P] : -1;
        S.blossoms[k].z = Z[k] - (P >= 0 ? Z[idx[P]] : 0);
    }

    S.aux = a.g;
    S.aux_to_orig = a.to_orig;
    S.forest = std::make_shared<BlossomForest>(F);
    S.tau.assign(F.num_nodes(), -1);
    S.tau_cv.assign(F.num_nodes(), -1);
    S.tau_pv.assign(F.num_nodes(), -1);
    S.top.resize(n);
    std::vector<char> seen(F.num_nodes(), 0);
    for (int v = 0; v < n; v++) {
        int N = e.top(v);
        S.top[v] = N;
        if (seen[N]) continue;
        seen[N] = 1;
        S.tau[N] = e.tau(N);
        S.tau_cv[N] = e.tau_child_end(N);
        S.tau_pv[N] = e.tau_parent_end(N);
        GspStructure::TreeEdge te;
        F.vertices(N, te.vertices);
        te.base = F.base(N);
        te.edge = e.tau(N) >= 0 ? orig_of(e.tau(N)) : -1;
        te.child_end = e.tau_child_end(N);
        te.parent_end = e.tau_parent_end(N);
        S.tree.push_back(std::move(te));
    }
    S.counters = e.counters();
    e.finish_search();

    if (!check_gsp(g, S).empty()) report_nonconservative(g);
    for (int v = 0; v < n; v++) {
        int64_t c = 0;
        for (int i : query_shortest_path(S, v)) c += g.edge(i).w;
        if (c != S.d[v]) report_nonconservative(g);
    }
    return S;
}

std::vector<int> query_shortest_path(const GspStructure& S, int v) {
    const BlossomForest& F = *S.forest;
    std::vector<int> out;
    std::vector<TrailEdge> tr;
    int N = S.top.at(v), vin = v;
    MType entry = MType::Light;  // the imagined pendant edge at v is unmatched
    for (;;) {
        if (!F.is_atom(N)) {
            tr.clear();
            F.trail(N, vin, entry == F.mtype(N) ? 0 : 1, tr);
            for (const TrailEdge& t : tr) {
                int o = S.aux_to_orig[F.copy(t.copy).rec];
                if (o >= 0) out.push_back(o);
            }
        }
        int t = S.tau[N];
        if (t < 0) break;
        out.push_back(S.aux_to_orig[F.copy(t).rec]);
        entry = F.copy_type(t);
        vin = S.tau_pv[N];
        N = S.top[vin];
    }
    return out;
}

std::vector<Violation> check_gsp(const Multigraph& g, const GspStructure& S) {
    std::vector<Violation> out;
    const Multigraph& G = *S.aux;
    const int n = g.n(), nb = static_cast<int>(S.blossoms.size());
    // smallest blossom per vertex
    std::vector<int> order(nb), owner(n, -1);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        return S.blossoms[x].vertices.size() > S.blossoms[y].vertices.size();
    });
    for (int b : order)
        for (int v : S.blossoms[b].vertices) owner[v] = b;
    std::set<int> structure;
    for (const auto& te : S.tree)
        if (te.edge >= 0) structure.insert(te.edge);
    for (const GspBlossom& B : S.blossoms) {
        if (B.z < 0) out.push_back({"nonnegativity", "blossom at base " + std::to_string(B.base), B.z});
        for (int r : B.ring)
            if (r >= 0) structure.insert(r);
    }
    for (int i = 0; i < G.m(); i++) {
        const EdgeRec& e = G.edge(i);
        int o = S.aux_to_orig[i];
        int64_t c = o >= 0 ? g.edge(o).w : 0;
        int64_t lhs = S.d[e.u] + S.d[e.v] + c;
        int64_t rhs = S.zV;
        std::vector<int> cu, cv;
        for (int b = owner[e.u]; b >= 0; b = S.blossoms[b].parent) cu.push_back(b);
        for (int b = owner[e.v]; b >= 0; b = S.blossoms[b].parent) cv.push_back(b);
        for (int b : cu) {
            bool both = std::find(cv.begin(), cv.end(), b) != cv.end();
            if (both || (o >= 0 && S.blossoms[b].eta == o)) rhs -= S.blossoms[b].z;
        }
        for (int b : cv)
            if (std::find(cu.begin(), cu.end(), b) == cu.end() && o >= 0 && S.blossoms[b].eta == o)
                rhs -= S.blossoms[b].z;
        std::string where = o >= 0 ? "edge " + std::to_string(o) : "loop at " + std::to_string(e.u);
        if (lhs < rhs) out.push_back({"gsp inequality", where, rhs - lhs});
        bool tight = o < 0 || structure.count(o);
        if (tight && lhs != rhs) out.push_back({"gsp equality", where, lhs - rhs});
    }
    return out;
}

std::string gsp_to_json(const Multigraph& g, const GspStructure& S) {
    using nlohmann::json;
    auto file = [&](int i) { return i >= 0 ? json(g.edge(i).orig) : json(nullptr); };
    json j;
    j["source"] = S.source;
    j["d"] = S.d;
    j["y"] = S.y;
    j["zV"] = S.zV;
    j["blossoms"] = json::array();
    for (const GspBlossom& B : S.blossoms) {
        json ring = json::array();
        for (int r : B.ring) ring.push_back(r >= 0 ? file(r) : json({{"loop", -1 - r}}));
        j["blossoms"].push_back({{"vertices", B.vertices},
                                 {"base", B.base},
                                 {"eta", file(B.eta)},
                                 {"parent", B.parent >= 0 ? json(B.parent) : json(nullptr)},
                                 {"witness", file(B.witness)},
                                 {"z_label", -B.z},
                                 {"ring", ring}});
    }
    j["tree"] = json::array();
    for (const auto& te : S.tree)
        j["tree"].push_back({{"vertices", te.vertices},
                             {"base", te.base},
                             {"edge", file(te.edge)},
                             {"child_end", te.child_end},
                             {"parent_end", te.parent_end}});
    return j.dump(1);
}

// ---- strongly polynomial warm start

std::vector<std::pair<int64_t, int64_t>> euler_orient(const Multigraph& gp, const MatchingVec& x) {
    const int n = gp.n(), m = gp.m();
    if (static_cast<int>(x.size()) != m) throw std::invalid_argument("matching size mismatch");
    for (int v = 0; v < n; v++)
        if (degree(gp, x, v) % 2) throw std::invalid_argument("odd degree at vertex " + std::to_string(v + 1));
    MatchingVec rem = x;
    std::vector<std::pair<int64_t, int64_t>> out(m, {0, 0});
    std::vector<size_t> ptr(n, 0);
    auto next_edge = [&](int u) {
        const auto& inc = gp.incident(u);
        while (ptr[u] < inc.size() && rem[inc[ptr[u]]] == 0) ptr[u]++;
        return ptr[u] < inc.size() ? inc[ptr[u]] : -1;
    };
    // closed trails: with all degrees even a walk can only get stuck at its start
    for (int start = 0; start < n; start++) {
        int u = start;
        for (int i = next_edge(u); i >= 0; i = next_edge(u)) {
            const EdgeRec& e = gp.edge(i);
            rem[i]--;
            if (e.u == u)
                out[i].first++;
            else
                out[i].second++;
            u = e.other(u);
        }
        if (u != start) throw std::logic_error("euler_orient: open trail");
    }
    return out;
}

namespace {

// Min-cost flow by successive shortest paths with potentials.
class MinCostFlow {
public:
    explicit MinCostFlow(int n) : adj_(n), pot_(n, 0) {}

    int add_arc(int a, int b, int64_t cap, int64_t cost) {
        int id = static_cast<int>(arcs_.size());
        arcs_.push_back({b, cap, cost});
        arcs_.push_back({a, 0, -cost});
        adj_[a].push_back(id);
        adj_[b].push_back(id + 1);
        return id;
    }

    // Sends up to `want` units; returns the amount sent.
    int64_t run(int src, int snk, int64_t want, int64_t* paths) {
        const int n = static_cast<int>(adj_.size());
        bellman_ford_init(src);
        int64_t sent = 0;
        std::vector<int64_t> dist(n);
        std::vector<int> via(n);
        while (sent < want) {
            std::fill(dist.begin(), dist.end(), kInf);
            std::fill(via.begin(), via.end(), -1);
            using Item = std::pair<int64_t, int>;
            std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
            dist[src] = 0;
            pq.push({0, src});
            while (!pq.empty()) {
                auto [dv, v] = pq.top();
                pq.pop();
                if (dv != dist[v]) continue;
                for (int id : adj_[v]) {
                    const Arc& a = arcs_[id];
                    if (a.cap == 0) continue;
                    int64_t nd = dv + a.cost + pot_[v] - pot_[a.to];
                    if (nd < dist[a.to]) {
                        dist[a.to] = nd;
                        via[a.to] = id;
                        pq.push({nd, a.to});
                    }
                }
            }
            if (dist[snk] == kInf) break;
            int64_t reach = 0;
            for (int v = 0; v < n; v++)
                if (dist[v] != kInf) reach = std::max(reach, dist[v]);
            for (int v = 0; v < n; v++) pot_[v] += dist[v] != kInf ? dist[v] : reach;
            int64_t push = want - sent;
            for (int v = snk; v != src; v = arcs_[via[v] ^ 1].to) push = std::min(push, arcs_[via[v]].cap);
            for (int v = snk; v != src; v = arcs_[via[v] ^ 1].to) {
                arcs_[via[v]].cap -= push;
                arcs_[via[v] ^ 1].cap += push;
            }
            sent += push;
            ++*paths;
        }
        return sent;
    }

    int64_t flow(int id) const { return arcs_[id ^ 1].cap; }
    int64_t residual(int id) const { return arcs_[id].cap; }

private:
    static constexpr int64_t kInf = std::numeric_limits<int64_t>::max() / 4;
    struct Arc {
        int to;
        int64_t cap;
        int64_t cost;
    };

    void bellman_ford_init(int src) {
        const int n = static_cast<int>(adj_.size());
        std::vector<int64_t> d(n, kInf);
        d[src] = 0;
        for (int round = 0; round < n; round++) {
            bool changed = false;
            for (int v = 0; v < n; v++) {
                if (d[v] == kInf) continue;
                for (int id : adj_[v])
                    if (arcs_[id].cap > 0 && d[v] + arcs_[id].cost < d[arcs_[id].to]) {
                        d[arcs_[id].to] = d[v] + arcs_[id].cost;
                        changed = true;
                    }
            }
            if (!changed) break;
        }
        for (int v = 0; v < n; v++) pot_[v] = d[v] == kInf ? 0 : d[v];
    }

    std::vector<Arc> arcs_;
    std::vector<std::vector<int>> adj_;
    std::vector<int64_t> pot_;
};

}  // namespace

WarmStart strong_poly_warm_start(const Multigraph& g, const DegreeFn& deg, Mode kind) {
    check_degrees(g, deg, "degree bound");
    const int n = g.n(), N = n + 1, s = n;
    DegreeFn dp(N, 0);
    for (int v = 0; v < n; v++) {
        dp[v] = 2 * (deg[v] / 2);
        dp[s] = checked_add(dp[s], dp[v]);
    }
    int64_t W = 1;
    for (const EdgeRec& e : g.edges()) W = std::max(W, std::abs(e.w));
    const int64_t big = dp[s] + 1;
    const bool fk = kind == Mode::F;

    // L(v) = v, R(v) = N+v; arcs L(u)R(v) stand for u1v2 of the double cover
    const int src = 2 * N, snk = 2 * N + 1;
    MinCostFlow mcf(2 * N + 2);
    struct Mid {
        int arc, l, r;
        int64_t w;
        int edge;
    };
    std::vector<Mid> mid;
    auto add = [&](int u, int v, int64_t cap, int64_t w, int edge) {
        if (cap <= 0) return;
        mid.push_back({mcf.add_arc(u, N + v, cap, -w), u, v, w, edge});
    };
    for (int i = 0; i < g.m(); i++) {
        const EdgeRec& e = g.edge(i);
        int64_t c = fk && !e.unbounded() ? e.mult : -1;
        int64_t cp = c < 0 ? big : 2 * ((c + 1) / 2);  // c' = 2⌈c/2⌉
        if (e.loop()) {
            add(e.u, e.u, cp, e.w, i);
        } else {
            add(e.u, e.v, c < 0 ? big : cp / 2, e.w, i);
            add(e.v, e.u, c < 0 ? big : cp / 2, e.w, i);
        }
    }
    for (int v = 0; v < n; v++) {
        add(v, s, fk ? dp[v] / 2 : big, 0, -1);
        add(s, v, fk ? dp[v] / 2 : big, 0, -1);
    }
    add(s, s, fk ? dp[s] : big, checked_mul(W, dp[s]), -1);
    for (int v = 0; v < N; v++) {
        mcf.add_arc(src, v, dp[v] / 2, 0);
        mcf.add_arc(N + v, snk, dp[v] / 2, 0);
    }
    WarmStart ws;
    if (mcf.run(src, snk, dp[s], &ws.transport_paths) != dp[s])
        throw std::logic_error("transportation subproblem has no perfect solution");

    // optimal duals from the final residual graph: y(v1) = π(L v), y(v2) = -π(R v)
    std::vector<int64_t> pi(2 * N, 0);
    for (int round = 0;; round++) {
        if (round > 2 * N + 1) throw std::logic_error("negative residual cycle in an optimal flow");
        bool changed = false;
        for (const Mid& a : mid) {
            if (mcf.residual(a.arc) > 0 && pi[a.l] - a.w < pi[N + a.r]) {
                pi[N + a.r] = pi[a.l] - a.w;
                changed = true;
            }
            if (mcf.flow(a.arc) > 0 && pi[N + a.r] + a.w < pi[a.l]) {
                pi[a.l] = pi[N + a.r] + a.w;
                changed = true;
            }
        }
        if (!changed) break;
    }
    ws.y.resize(n);
    for (int v = 0; v < n; v++) ws.y[v] = (kDualScale / 2) * (pi[v] - pi[N + v]);

    ws.x.assign(g.m(), 0);
    for (const Mid& a : mid)
        if (a.edge >= 0) ws.x[a.edge] += mcf.flow(a.arc);
    if (fk)
        for (int i = 0; i < g.m(); i++) ws.x[i] = std::min(ws.x[i], g.edge(i).mult);
    return ws;
}

SolveResult solve_strong_poly(const Multigraph& g, const DegreeFn& deg, Mode kind, const SolveOptions& opt) {
    Mode mode = kind == Mode::B && needs_f_engine(g, deg) ? Mode::F : kind;
    WarmStart ws = strong_poly_warm_start(g, deg, mode);
    SolveOptions o = opt;
    o.warm_x = std::move(ws.x);
    o.warm_y = std::move(ws.y);
    return mode == Mode::F ? solve_f_factor(g, deg, o) : solve_b_matching(g, deg, o);
}

}  // namespace wm
