#pragma once

// Problems solved through the f-factor engine: (ℓ,h)-subgraphs, T-joins,
// shortest paths with conservative costs, and the bipartite warm start.

#include <memory>
#include <optional>
#include <vector>

#include "wm/solve.hpp"

namespace wm {

enum class Sense { Max, Min };

// An auxiliary f-factor instance plus the way back to the original edges.
struct ReductionPlan {
    Multigraph aux;
    DegreeFn deg;
    std::vector<int> back;  // aux edge -> original edge, -1 for added edges
    MatchingVec forced;     // copies of original edges taken before solving
    std::optional<MatchingVec> warm_x;
    std::optional<std::vector<int64_t>> warm_y;  // kDualScale
    int64_t sign = 1;                            // aux weight = sign * original weight
};

struct PlanResult {
    bool feasible = false;
    MatchingVec x;       // on the original edges
    int64_t weight = 0;  // original weights
    SolveResult aux;
};

// G plus a vertex s joined to every v by h(v)-ℓ(v) copies of vs and ⌊h(V)/2⌋
// loops ss. Minimization negates weights. When minimizing with w ≥ 0, or with
// h equal to the degree in G, the plan carries the matching of all vs copies
// as a warm start.
ReductionPlan build_lh_reduction(const Multigraph& g, const DegreeFn& lo, const DegreeFn& hi, Sense sense);
PlanResult solve_plan(const Multigraph& g, const ReductionPlan& plan, const SolveOptions& opt = {});

// Edge weights are read as costs. Each edge record is a single edge.
struct TJoinResult {
    bool feasible = false;
    std::vector<int> edges;
    int64_t cost = 0;
    int64_t searches = 0;
    SolveResult aux;
};
ReductionPlan build_tjoin_reduction(const Multigraph& g, const std::vector<int>& T);
TJoinResult solve_t_join(const Multigraph& g, const std::vector<int>& T, const SolveOptions& opt = {});

// ---- shortest paths

class NonConservative : public std::runtime_error {
public:
    NonConservative(const std::string& msg, std::vector<int> cycle_edges)
        : std::runtime_error(msg), edges(std::move(cycle_edges)) {}
    std::vector<int> edges;  // a negative f-factor of G (disjoint cycles)
};

struct GspBlossom {
    int node = -1;
    std::vector<int> vertices;
    int base = -1;
    int eta = -1;      // original edge, -1 for none
    int parent = -1;   // index in GspStructure::blossoms
    int witness = -1;  // original edge of C(B) fixing Z(B)
    int64_t z = 0;     // z(B) ≥ 0; the label is z'(B) = -z(B)
    std::vector<int> ring;  // original edges of C(B), loops as -1-v
};

struct GspStructure {
    int source = -1;
    std::vector<int64_t> d;  // d(v) = y(v) - y(s)
    std::vector<int64_t> y;  // duals for the original costs
    int64_t zV = 0;          // z'(V) = -2y(s)
    std::vector<GspBlossom> blossoms;
    // search structure: per maximal node, the edge to its parent node
    struct TreeEdge {
        std::vector<int> vertices;
        int base;
        int edge;  // original edge, -1 at the root
        int child_end;
        int parent_end;
    };
    std::vector<TreeEdge> tree;
    EngineCounters counters;

    // solver state for path queries
    std::shared_ptr<const Multigraph> aux;
    std::shared_ptr<const BlossomForest> forest;
    std::vector<int> aux_to_orig;  // -1 for the added loops
    std::vector<int> tau, tau_cv, tau_pv, top;
};

// Requires G connected and c conservative; throws NonConservative with a
// negative cycle set otherwise.
GspStructure build_sssp(const Multigraph& g, int s, const SolveOptions& opt = {});
// Original edges of a shortest v-s path, in order from v.
std::vector<int> query_shortest_path(const GspStructure& S, int v);
// d(u)+d(v)+c(uv) ≥ z'{B : uv ∈ γ(B) ∪ η(B)} + z'(V) on every edge (loops
// included, at cost 0), with equality on tree and ring edges; z ≥ 0.
std::vector<Violation> check_gsp(const Multigraph& g, const GspStructure& S);
// Edges are given by their position in the instance file.
std::string gsp_to_json(const Multigraph& g, const GspStructure& S);

// ---- strongly polynomial warm start

struct WarmStart {
    MatchingVec x;
    std::vector<int64_t> y;  // kDualScale
    int64_t transport_paths = 0;
};

// Per edge of gp: copies oriented from e.u to e.v (u1v2 in the bipartite
// graph) and from e.v to e.u. Loops are all counted in the first entry.
// Throws std::invalid_argument when some degree is odd.
std::vector<std::pair<int64_t, int64_t>> euler_orient(const Multigraph& gp, const MatchingVec& x);

// Rounds the degrees down to even values, solves the bipartite double cover of
// G plus s by successive shortest paths, and projects the result back to G.
WarmStart strong_poly_warm_start(const Multigraph& g, const DegreeFn& deg, Mode kind);
SolveResult solve_strong_poly(const Multigraph& g, const DegreeFn& deg, Mode kind, const SolveOptions& opt = {});

}  // namespace wm
