#include "wm/solve.hpp"

#include <map>
#include <unordered_map>

namespace wm {

bool needs_f_engine(const Multigraph& g, const DegreeFn& b) {
    for (int i = 0; i < g.m(); i++) {
        const EdgeRec& e = g.edge(i);
        if (e.unbounded()) continue;
        int64_t lim = e.loop() ? b[e.u] / 2 : std::min(b[e.u], b[e.v]);
        if (e.mult < lim) return true;
    }
    return false;
}

Certificate make_certificate(const Engine& e) {
    const Multigraph& g = e.graph();
    const BlossomForest& F = e.forest();
    Certificate c;
    c.mode = e.mode();
    c.scale = kDualScale;
    c.x = e.x();
    for (int v = 0; v < g.n(); v++) c.y.push_back(e.y(v));
    std::unordered_map<int, int> copy_idx;
    std::vector<char> mark(g.n(), 0);
    for (int b = 0; b < F.num_blossoms(); b++) {
        if (!F.blossom(b).alive) continue;
        int N = F.node_of(b);
        CertBlossom B;
        F.vertices(N, B.vertices);
        B.base = F.base(N);
        B.z = e.z(N);
        int et = F.eta(N);
        if (et >= 0) {
            auto [it, fresh] = copy_idx.emplace(et, static_cast<int>(c.copies.size()));
            if (fresh) c.copies.push_back({F.copy(et).rec, F.copy(et).matched});
            B.eta = it->second;
        }
        if (c.mode == Mode::F) {
            for (int v : B.vertices) mark[v] = 1;
            std::map<std::pair<int, bool>, int64_t> I;
            for (int v : B.vertices)
                for (int i : g.incident(v))
                    if (!mark[g.edge(i).other(v)] && c.x[i] > 0) I[{i, true}] += c.x[i];
            if (et >= 0) I[{F.copy(et).rec, F.copy(et).matched}] += F.copy(et).matched ? -1 : 1;
            for (auto& [k, cnt] : I)
                if (cnt != 0) B.I.push_back({k.first, k.second, cnt});
            for (int v : B.vertices) mark[v] = 0;
        }
        c.blossoms.push_back(std::move(B));
    }
    return c;
}

namespace {

SolveResult run_engine(const Multigraph& g, const DegreeFn& deg, Mode mode, const SolveOptions& opt) {
    EngineOptions eo;
    eo.debug = opt.debug;
    eo.trace = opt.trace;
    eo.warm_x = opt.warm_x;
    eo.warm_y = opt.warm_y;
    Engine e(g, deg, mode, eo);
    SolveResult r;
    r.mode = mode;
    r.perfect = e.run();
    if (opt.debug && !r.perfect) e.check_invariants("final");
    r.x = e.x();
    r.weight = e.weight();
    r.size = e.size();
    if (r.perfect)
        r.cert = make_certificate(e);
    else
        r.def = e.deficiency();
    r.counters = e.counters();
    return r;
}

}  // namespace

SolveResult solve_b_matching(const Multigraph& g, const DegreeFn& b, const SolveOptions& opt) {
    return run_engine(g, b, needs_f_engine(g, b) ? Mode::F : Mode::B, opt);
}

SolveResult solve_f_factor(const Multigraph& g, const DegreeFn& f, const SolveOptions& opt) {
    return run_engine(g, f, Mode::F, opt);
}

SolveResult solve_matching(const Multigraph& g, const SolveOptions& opt) {
    return solve_b_matching(g, DegreeFn(g.n(), 1), opt);
}

}  // namespace wm
