#include <doctest.h>

#include <json.hpp>
#include <optional>

#include "support/gen.hpp"
#include "wm/reductions.hpp"

using namespace wm;

namespace {

Multigraph graph(int n, std::vector<EdgeRec> es) {
    for (size_t i = 0; i < es.size(); i++) es[i].orig = static_cast<int>(i);
    return Multigraph(n, es);
}

SolveOptions dbg() {
    SolveOptions o;
    o.debug = true;
    return o;
}

// best (ℓ,h)-subgraph weight by enumerating x ≤ mult
std::optional<int64_t> brute_lh(const Multigraph& g, const DegreeFn& lo, const DegreeFn& hi, Sense sense) {
    std::optional<int64_t> best;
    MatchingVec x(g.m(), 0);
    auto rec = [&](auto&& self, int i) -> void {
        if (i == g.m()) {
            for (int v = 0; v < g.n(); v++) {
                int64_t d = degree(g, x, v);
                if (d < lo[v] || d > hi[v]) return;
            }
            int64_t w = matching_weight(g, x);
            if (!best || (sense == Sense::Max ? w > *best : w < *best)) best = w;
            return;
        }
        for (x[i] = 0; x[i] <= g.edge(i).mult; x[i]++) self(self, i + 1);
        x[i] = 0;
    };
    rec(rec, 0);
    return best;
}

bool is_tjoin(const Multigraph& g, const std::vector<int>& T, const std::vector<int>& edges) {
    std::vector<int> par(g.n(), 0);
    for (int i : edges)
        if (!g.edge(i).loop()) {
            par[g.edge(i).u] ^= 1;
            par[g.edge(i).v] ^= 1;
        }
    for (int t : T) par[t] ^= 1;
    for (int p : par)
        if (p) return false;
    return true;
}

// the edges form a walk from v to s
bool is_walk(const Multigraph& g, int v, int s, const std::vector<int>& edges) {
    int cur = v;
    for (int i : edges) {
        const EdgeRec& e = g.edge(i);
        if (e.u != cur && e.v != cur) return false;
        cur = e.other(cur);
    }
    return cur == s;
}

}  // namespace

TEST_CASE("lh reduction shape on K2") {
    Multigraph g = graph(2, {{0, 1, 5, 1, 0}});
    ReductionPlan p = build_lh_reduction(g, {0, 0}, {1, 1}, Sense::Max);
    REQUIRE(p.aux.n() == 3);
    CHECK(p.deg == DegreeFn{1, 1, 2});
    int vs = 0, ss = 0;
    for (int i = 0; i < p.aux.m(); i++) {
        const EdgeRec& e = p.aux.edge(i);
        if (e.u == 2 && e.v == 2) ss += static_cast<int>(e.mult);
        else if (e.u == 2 || e.v == 2) vs += static_cast<int>(e.mult);
    }
    CHECK(vs == 2);
    CHECK(ss == 1);
    PlanResult r = solve_plan(g, p, dbg());
    REQUIRE(r.feasible);
    CHECK(r.weight == 5);
}

TEST_CASE("minimum edge cover of P3") {
    Multigraph g = graph(3, {{0, 1, 2, 1, 0}, {1, 2, 3, 1, 0}});
    ReductionPlan p = build_lh_reduction(g, {1, 1, 1}, {1, 2, 1}, Sense::Min);
    CHECK(p.warm_x.has_value());
    PlanResult r = solve_plan(g, p, dbg());
    REQUIRE(r.feasible);
    CHECK(r.weight == 5);
}

TEST_CASE("lh reduction rejects l > h") {
    Multigraph g = graph(2, {{0, 1, 1, 1, 0}});
    CHECK_THROWS_AS(build_lh_reduction(g, {2, 0}, {1, 1}, Sense::Max), std::invalid_argument);
}

TEST_CASE("lh reduction against enumeration") {
    gen::Rng rng(11);
    for (int it = 0; it < 150; it++) {
        int n = gen::uni(rng, 1, 5);
        Multigraph g = gen::multigraph(rng, n, gen::uni(rng, 1, 6), -8, 8, 1, 2, 0.15);
        DegreeFn lo(n), hi(n);
        Sense sense = it % 2 ? Sense::Min : Sense::Max;
        int flavor = it % 3;
        MatchingVec all(g.m());
        for (int i = 0; i < g.m(); i++) all[i] = g.edge(i).mult;
        for (int v = 0; v < n; v++) {
            hi[v] = flavor == 2 ? degree(g, all, v) : gen::uni(rng, 0, 4);
            lo[v] = gen::uni(rng, 0, static_cast<int>(hi[v]));
        }
        std::vector<EdgeRec> es = g.edges();
        if (flavor == 1)
            for (auto& e : es) e.w = std::abs(e.w);
        Multigraph h = Multigraph(n, es);
        auto want = brute_lh(h, lo, hi, sense);
        PlanResult r = solve_plan(h, build_lh_reduction(h, lo, hi, sense), dbg());
        CAPTURE(it);
        REQUIRE(r.feasible == want.has_value());
        if (want) {
            CHECK(r.weight == *want);
            for (int v = 0; v < n; v++) {
                CHECK(degree(h, r.x, v) >= lo[v]);
                CHECK(degree(h, r.x, v) <= hi[v]);
            }
        }
    }
}

TEST_CASE("T-join examples") {
    Multigraph path = graph(3, {{0, 1, 2, 1, 0}, {1, 2, 3, 1, 0}});
    TJoinResult r = solve_t_join(path, {0, 2}, dbg());
    REQUIRE(r.feasible);
    CHECK(r.cost == 5);
    CHECK(r.edges.size() == 2);

    TJoinResult e = solve_t_join(path, {}, dbg());
    REQUIRE(e.feasible);
    CHECK(e.cost == 0);
    CHECK(e.edges.empty());

    Multigraph loop = graph(1, {{0, 0, -4, 1, 0}});
    TJoinResult l = solve_t_join(loop, {}, dbg());
    REQUIRE(l.feasible);
    CHECK(l.cost == -4);

    CHECK_THROWS_AS(solve_t_join(path, {0}), std::invalid_argument);
}

TEST_CASE("T-join against subset enumeration") {
    gen::Rng rng(12);
    for (int it = 0; it < 200; it++) {
        int n = gen::uni(rng, 2, 8);
        bool nonneg = it % 2;
        Multigraph g = gen::conservative_graph(rng, n, gen::uni(rng, 0, 14 - (n - 1)), nonneg ? 0 : -10, 10);
        std::vector<int> T;
        for (int v = 0; v < n; v++)
            if (gen::uni(rng, 0, 1)) T.push_back(v);
        if (T.size() % 2) T.pop_back();
        int64_t want = brute_force_tjoin(g, T);
        TJoinResult r = solve_t_join(g, T, dbg());
        CAPTURE(it);
        REQUIRE(r.feasible);
        CHECK(r.cost == want);
        CHECK(is_tjoin(g, T, r.edges));
        CHECK(r.searches <= std::max(n / 2, 1));
        if (nonneg) CHECK(r.searches <= static_cast<int64_t>(T.size()) / 2);
    }
}

TEST_CASE("shortest paths on small examples") {
    Multigraph path = graph(3, {{0, 1, 1, 1, 0}, {1, 2, 2, 1, 0}});
    GspStructure S = build_sssp(path, 0, dbg());
    CHECK(S.d == std::vector<int64_t>{0, 1, 3});
    CHECK(query_shortest_path(S, 0).empty());
    CHECK(query_shortest_path(S, 2).size() == 2);

    // s=0, a=1, b=2: sa=5, sb=1, ab=-2
    Multigraph tri = graph(3, {{0, 1, 5, 1, 0}, {0, 2, 1, 1, 0}, {1, 2, -2, 1, 0}});
    GspStructure T = build_sssp(tri, 0, dbg());
    CHECK(T.d[0] == 0);
    CHECK(T.d[2] == 1);
    CHECK(T.d[1] == -1);
    CHECK(check_gsp(tri, T).empty());
}

TEST_CASE("shortest paths report negative cycles") {
    Multigraph g = graph(4, {{0, 1, 1, 1, 0}, {1, 2, -3, 1, 0}, {2, 3, 1, 1, 0}, {3, 1, 1, 1, 0}});
    for (int s : {0, 1}) {
        try {
            build_sssp(g, s);
            FAIL("expected NonConservative");
        } catch (const NonConservative& e) {
            int64_t c = 0;
            for (int i : e.edges) c += g.edge(i).w;
            CHECK(c < 0);
        }
    }
    Multigraph split = graph(3, {{0, 1, 1, 1, 0}});
    CHECK_THROWS_AS(build_sssp(split, 0), std::invalid_argument);
}

TEST_CASE("shortest paths against simple-path enumeration") {
    gen::Rng rng(13);
    for (int it = 0; it < 200; it++) {
        int n = gen::uni(rng, 1, 9);
        Multigraph g = gen::conservative_graph(rng, n, gen::uni(rng, 0, 14 - (n - 1)), -10, 10);
        int s = gen::uni(rng, 0, n - 1);
        auto want = brute_force_sssp(g, s);
        GspStructure S = build_sssp(g, s, dbg());
        CAPTURE(it);
        for (int v = 0; v < n; v++) {
            CHECK(S.d[v] == want[v]);
            CHECK(S.d[v] == S.y[v] - S.y[s]);
            std::vector<int> p = query_shortest_path(S, v);
            int64_t c = 0;
            for (int i : p) c += g.edge(i).w;
            CHECK(c == S.d[v]);
            CHECK(is_walk(g, v, s, p));
        }
        auto vio = check_gsp(g, S);
        for (const Violation& x : vio) MESSAGE(x.rule << ": " << x.where << " (" << x.amount << ")");
        CHECK(vio.empty());
        for (const GspBlossom& B : S.blossoms) CHECK(B.z >= 0);
    }
}

TEST_CASE("euler orientation splits degrees") {
    Multigraph c4 = graph(4, {{0, 1, 0, 1, 0}, {1, 2, 0, 1, 0}, {2, 3, 0, 1, 0}, {3, 0, 0, 1, 0}});
    auto o = euler_orient(c4, {1, 1, 1, 1});
    for (auto [a, b] : o) CHECK(a + b == 1);

    Multigraph dbl = graph(2, {{0, 1, 0, 2, 0}});
    auto d = euler_orient(dbl, {2});
    CHECK(d[0].first == 1);
    CHECK(d[0].second == 1);

    CHECK_THROWS_AS(euler_orient(dbl, {1}), std::invalid_argument);

    gen::Rng rng(14);
    for (int it = 0; it < 100; it++) {
        int n = gen::uni(rng, 1, 10);
        Multigraph g = gen::multigraph(rng, n, gen::uni(rng, 1, 20), 0, 0, 1, 4, 0.2);
        MatchingVec x(g.m());
        for (auto& v : x) v = gen::uni(rng, 0, 4);
        // fix parities with loops-free pairing along a path of odd vertices
        std::vector<int> odd;
        for (int v = 0; v < n; v++)
            if (degree(g, x, v) % 2) odd.push_back(v);
        std::vector<EdgeRec> es = g.edges();
        MatchingVec xx = x;
        for (size_t k = 0; k + 1 < odd.size(); k += 2) {
            es.push_back({odd[k], odd[k + 1], 0, 1, 0});
            xx.push_back(1);
        }
        Multigraph h(n, es);
        MatchingVec xh(h.m());
        for (int i = 0; i < h.m(); i++) xh[i] = xx[h.edge(i).orig];
        auto orient = euler_orient(h, xh);
        std::vector<int64_t> out(n, 0), in(n, 0);
        for (int i = 0; i < h.m(); i++) {
            const EdgeRec& e = h.edge(i);
            CHECK(orient[i].first + orient[i].second == xh[i]);
            out[e.u] += orient[i].first;
            in[e.v] += orient[i].first;
            out[e.v] += orient[i].second;
            in[e.u] += orient[i].second;
        }
        for (int v = 0; v < n; v++) {
            CHECK(out[v] == degree(h, xh, v) / 2);
            CHECK(in[v] == degree(h, xh, v) / 2);
        }
    }
}

TEST_CASE("warm start rounds degrees and multiplicities") {
    Multigraph tri = graph(3, {{0, 1, 1, kUnbounded, 0}, {1, 2, 1, kUnbounded, 0}, {0, 2, 1, kUnbounded, 0}});
    WarmStart ws = strong_poly_warm_start(tri, {3, 3, 3}, Mode::B);
    for (int v = 0; v < 3; v++) CHECK(degree(tri, ws.x, v) == 2);

    // c = 3 rounds to 4 in the double cover; the extra copy is dropped
    Multigraph e3 = graph(2, {{0, 1, 5, 3, 0}});
    WarmStart wf = strong_poly_warm_start(e3, {4, 4}, Mode::F);
    CHECK(wf.x[0] == 3);
    SolveResult r = solve_strong_poly(e3, {4, 4}, Mode::F, dbg());
    CHECK_FALSE(r.perfect);
    CHECK(r.size == 3);
}

TEST_CASE("strong-poly warm start matches the direct solve") {
    gen::Rng rng(15);
    for (int it = 0; it < 60; it++) {
        int n = gen::uni(rng, 2, 12);
        bool fk = it % 3 == 2;
        Multigraph g = gen::multigraph(rng, n, gen::uni(rng, n, 3 * n), -20, 20, 1, fk ? 6 : -1, 0.1);
        MatchingVec x(g.m());
        for (int i = 0; i < g.m(); i++) x[i] = gen::uni(rng, 0, fk ? static_cast<int>(g.edge(i).mult) : 6);
        DegreeFn b(n);
        for (int v = 0; v < n; v++) b[v] = degree(g, x, v);
        SolveResult d = fk ? solve_f_factor(g, b, dbg()) : solve_b_matching(g, b, dbg());
        SolveResult w = solve_strong_poly(g, b, fk ? Mode::F : Mode::B, dbg());
        CAPTURE(it);
        REQUIRE(d.perfect);
        REQUIRE(w.perfect);
        CHECK(w.weight == d.weight);
        CHECK(w.counters.augments <= n);
        auto v = verify_certificate(g, b, w.cert);
        CHECK(v.empty());
    }
}

TEST_CASE("certificates and gsp json use file edge order") {
    // records are stored heaviest first per pair, so storage order differs from file order
    Multigraph g = graph(4, {{0, 1, 1, 1, 0}, {2, 3, 1, 1, 0}, {0, 1, 9, 1, 0}, {1, 2, 2, 1, 0}});
    REQUIRE(g.edge(0).orig != 0);
    SolveResult r = solve_matching(g, dbg());
    REQUIRE(r.perfect);
    Certificate f = to_file_order(g, r.cert);
    CHECK(f.x[2] == 1);
    CHECK(f.x[0] == 0);
    Certificate back = from_file_order(g, certificate_from_json(certificate_to_json(f)));
    CHECK(back.x == r.cert.x);
    CHECK(verify_certificate(g, DegreeFn(4, 1), back).empty());

    GspStructure S = build_sssp(g, 0, dbg());
    auto j = nlohmann::json::parse(gsp_to_json(g, S));
    CHECK(j["d"] == nlohmann::json(S.d));
    for (const auto& te : j["tree"])
        if (!te["edge"].is_null()) CHECK(te["edge"].get<int>() < g.m());
}
