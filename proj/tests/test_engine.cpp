#include <doctest.h>

#include "support/gen.hpp"
#include "wm/solve.hpp"

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

void expect_verified(const Multigraph& g, const DegreeFn& d, const SolveResult& r) {
    auto v = verify_certificate(g, d, r.cert);
    for (const Violation& x : v) MESSAGE(x.rule << ": " << x.where << " (" << x.amount << ")");
    CHECK(v.empty());
}

}  // namespace

TEST_CASE("single edge, b = 2, takes both copies") {
    Multigraph g = graph(2, {{0, 1, 7, kUnbounded, 0}});
    DegreeFn b{2, 2};
    SolveResult r = solve_b_matching(g, b, dbg());
    REQUIRE(r.perfect);
    CHECK(r.x[0] == 2);
    CHECK(r.weight == 14);
    expect_verified(g, b, r);
}

TEST_CASE("triangle 2-factor") {
    Multigraph g = graph(3, {{0, 1, 1, 1, 0}, {1, 2, 2, 1, 0}, {2, 0, 3, 1, 0}});
    DegreeFn f{2, 2, 2};
    SolveResult r = solve_f_factor(g, f, dbg());
    REQUIRE(r.perfect);
    CHECK(r.weight == 6);
    expect_verified(g, f, r);

    Multigraph gb = graph(3, {{0, 1, 1, kUnbounded, 0}, {1, 2, 1, kUnbounded, 0}, {2, 0, 1, kUnbounded, 0}});
    SolveResult rb = solve_b_matching(gb, f, dbg());
    REQUIRE(rb.perfect);
    CHECK(rb.weight == 3);
    expect_verified(gb, f, rb);
}

TEST_CASE("K4 matching") {
    Multigraph g = graph(4, {{0, 1, 1, 1, 0}, {0, 2, 2, 1, 0}, {0, 3, 3, 1, 0},
                             {1, 2, 4, 1, 0}, {1, 3, 5, 1, 0}, {2, 3, 6, 1, 0}});
    SolveResult r = solve_matching(g, dbg());
    REQUIRE(r.perfect);
    CHECK(r.weight == 7);
    CHECK(brute_force_matching(g).weight == 7);
    SolveResult rf = solve_f_factor(g, DegreeFn(4, 1), dbg());
    CHECK(rf.weight == 7);
}

TEST_CASE("deficiency witnesses") {
    SUBCASE("path P3, f = 1") {
        Multigraph g = graph(3, {{0, 1, 1, 1, 0}, {1, 2, 1, 1, 0}});
        SolveResult r = solve_f_factor(g, {1, 1, 1}, dbg());
        CHECK_FALSE(r.perfect);
        CHECK(r.def.bound == 1);
        CHECK(r.size == 1);
        CHECK(eval_min_max_f(g, {1, 1, 1}) == 1);
    }
    SUBCASE("star K1,3, b = 1") {
        Multigraph g = graph(4, {{0, 1, 1, kUnbounded, 0}, {0, 2, 1, kUnbounded, 0}, {0, 3, 1, kUnbounded, 0}});
        SolveResult r = solve_b_matching(g, {1, 1, 1, 1}, dbg());
        CHECK_FALSE(r.perfect);
        CHECK(r.def.bound == 1);
        REQUIRE(r.def.inner.size() == 1);
        CHECK(r.def.inner[0] == 0);
    }
    SUBCASE("C5, f = 1") {
        Multigraph g = graph(5, {{0, 1, 1, 1, 0}, {1, 2, 1, 1, 0}, {2, 3, 1, 1, 0}, {3, 4, 1, 1, 0}, {4, 0, 1, 1, 0}});
        SolveResult r = solve_f_factor(g, DegreeFn(5, 1), dbg());
        CHECK_FALSE(r.perfect);
        CHECK(r.def.bound == 2);
        CHECK(eval_min_max_f(g, DegreeFn(5, 1)) == 2);
        CHECK(eval_min_max_b(g, DegreeFn(5, 1)) == 2);
    }
    SUBCASE("isolated vertex") {
        Multigraph g = graph(1, {});
        SolveResult r = solve_f_factor(g, {1}, dbg());
        CHECK_FALSE(r.perfect);
        CHECK(r.def.bound == 0);
    }
}

TEST_CASE("random matchings agree with enumeration") {
    gen::Rng rng(11);
    for (int it = 0; it < 300; it++) {
        int n = gen::uni(rng, 2, 10);
        Multigraph g = gen::simple_graph(rng, n, 0.3 + 0.6 * (it % 5) / 4.0, -50, 50);
        BruteResult br = brute_force_matching(g);
        SolveResult r = solve_matching(g, dbg());
        CAPTURE(it);
        CHECK(r.perfect == br.feasible);
        if (r.perfect && br.feasible) {
            CHECK(r.weight == br.weight);
            expect_verified(g, DegreeFn(n, 1), r);
        } else if (!r.perfect) {
            CHECK(r.def.bound == r.size);
            CHECK(r.size == br.max_size);
        }
    }
}

TEST_CASE("random b-matchings agree with enumeration") {
    gen::Rng rng(12);
    int done = 0;
    for (int it = 0; done < 200; it++) {
        int n = gen::uni(rng, 1, 7);
        Multigraph g = gen::multigraph(rng, n, gen::uni(rng, 0, 2 * n), -20, 20, 0, -1, 0.15);
        DegreeFn b = gen::degrees(rng, n, 1, 3);
        if (gen::oracle_space(g, b) > 2e5) continue;
        done++;
        BruteResult br = brute_force_degree(g, b);
        SolveResult r = solve_b_matching(g, b, dbg());
        CAPTURE(it);
        CHECK(r.perfect == br.feasible);
        if (r.perfect && br.feasible) {
            CHECK(r.weight == br.weight);
            expect_verified(g, b, r);
        } else if (!r.perfect) {
            CHECK(r.size == br.max_size);
            CHECK(r.def.bound == r.size);
            CHECK(eval_min_max_b(g, b) == r.def.bound);
        }
    }
}

TEST_CASE("random f-factors agree with enumeration") {
    gen::Rng rng(13);
    int done = 0;
    for (int it = 0; done < 200; it++) {
        int n = gen::uni(rng, 1, 7);
        Multigraph g = gen::multigraph(rng, n, gen::uni(rng, 0, 2 * n), -20, 20, 1, 2, 0.15);
        DegreeFn f = gen::degrees(rng, n, 1, 3);
        if (gen::oracle_space(g, f) > 2e5) continue;
        done++;
        BruteResult br = brute_force_degree(g, f);
        SolveResult r = solve_f_factor(g, f, dbg());
        CAPTURE(it);
        CHECK(r.perfect == br.feasible);
        if (r.perfect && br.feasible) {
            CHECK(r.weight == br.weight);
            expect_verified(g, f, r);
        } else if (!r.perfect) {
            CHECK(r.size == br.max_size);
            CHECK(r.def.bound == r.size);
            CHECK(eval_min_max_f(g, f) == r.def.bound);
        }
    }
}
