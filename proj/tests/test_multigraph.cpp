#include <random>

#include "doctest.h"
#include "wm/multigraph.hpp"

using namespace wm;

TEST_CASE("parse smallest instance") {
    auto inst = parse_instance("p matching 2 1\ne 1 2 5\n");
    CHECK(inst.kind == ProblemKind::Matching);
    CHECK(inst.g.n() == 2);
    REQUIRE(inst.g.m() == 1);
    CHECK(inst.g.edge(0).u == 0);
    CHECK(inst.g.edge(0).v == 1);
    CHECK(inst.g.edge(0).w == 5);
    CHECK(inst.deg == DegreeFn{1, 1});
}

TEST_CASE("parse loop with degree") {
    auto inst = parse_instance("p ffactor 1 1\nd 1 2\ne 1 1 3 1\n");
    REQUIRE(inst.g.m() == 1);
    CHECK(inst.g.edge(0).loop());
    CHECK(inst.g.edge(0).w == 3);
    CHECK(inst.deg[0] == 2);
}

TEST_CASE("parse errors carry line numbers") {
    auto line_of = [](const char* text) {
        try {
            parse_instance(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return -1;
    };
    CHECK(line_of("p matching 2 1\ne 1 3 5\n") == 2);
    CHECK(line_of("p bmatch 2 1\n\ne 1 2 5 0\n") == 3);
    CHECK(line_of("p matching 2 1\ne 1 2 x\n") == 2);
    CHECK(line_of("p matching 2 1\ne 1 2 5 *\n") == 2);
    CHECK(line_of("e 1 2 5\n") == 1);
    CHECK(line_of("p matching 2 1\nq 1\n") == 2);
    CHECK(line_of("p matching 2 2\ne 1 2 5\n") == 2);
}

TEST_CASE("parallel records sorted by decreasing weight") {
    auto inst = parse_instance("p bmatch 3 4\ne 1 2 1\ne 2 3 4\ne 2 1 7 *\ne 1 2 3 2\n");
    const auto& g = inst.g;
    CHECK(g.edge(0).w == 7);
    CHECK(g.edge(1).w == 3);
    CHECK(g.edge(2).w == 1);
    CHECK(g.edge(3).w == 4);
    CHECK(g.edge(0).unbounded());
    CHECK(g.edge(0).orig == 2);
}

TEST_CASE("degree counts loops twice") {
    Multigraph g(3, {{0, 0, 1, 1}, {0, 1, 1, 3}, {1, 1, 2, 1}});
    // records sorted: (0,0), (0,1), (1,1)
    MatchingVec x{1, 0, 0};
    CHECK(degree(g, x, 0) == 2);
    CHECK(degree(g, x, 2) == 0);
    x = {0, 2, 0};
    CHECK(degree(g, x, 1) == 2);
    CHECK(degree(g, x, 0) == 2);
}

TEST_CASE("serialize round trip on random instances") {
    std::mt19937_64 rng(7);
    const ProblemKind kinds[] = {ProblemKind::Matching, ProblemKind::BMatch, ProblemKind::FFactor,
                                 ProblemKind::TJoin, ProblemKind::SSSP};
    for (int it = 0; it < 200; ++it) {
        Instance a;
        a.kind = kinds[rng() % 5];
        int n = 1 + static_cast<int>(rng() % 8);
        int m = static_cast<int>(rng() % 12);
        std::vector<EdgeRec> es;
        for (int i = 0; i < m; ++i) {
            EdgeRec e;
            e.u = static_cast<int>(rng() % n);
            e.v = static_cast<int>(rng() % n);
            e.w = static_cast<int64_t>(rng() % 41) - 20;
            e.mult = 1 + static_cast<int64_t>(rng() % 3);
            if (a.kind == ProblemKind::BMatch && rng() % 4 == 0) e.mult = kUnbounded;
            es.push_back(e);
        }
        a.g = Multigraph(n, es);
        a.deg.assign(n, 1);
        for (auto& d : a.deg) d = static_cast<int64_t>(rng() % 4);
        if (a.kind == ProblemKind::TJoin)
            for (int v = 0; v < n; ++v)
                if (rng() % 2) a.terminals.push_back(v);
        if (a.kind == ProblemKind::SSSP) a.source = static_cast<int>(rng() % n);
        auto b = parse_instance(serialize_instance(a));
        auto c = parse_instance(serialize_instance(b));
        REQUIRE(b.kind == a.kind);
        REQUIRE(b.g.n() == a.g.n());
        REQUIRE(b.g.m() == a.g.m());
        for (int i = 0; i < a.g.m(); ++i) {
            CHECK(b.g.edge(i).u == a.g.edge(i).u);
            CHECK(b.g.edge(i).v == a.g.edge(i).v);
            CHECK(b.g.edge(i).w == a.g.edge(i).w);
            CHECK(b.g.edge(i).mult == a.g.edge(i).mult);
        }
        CHECK(b.deg == a.deg);
        CHECK(b.terminals == a.terminals);
        CHECK(b.source == a.source);
        CHECK(serialize_instance(c) == serialize_instance(b));
    }
}
