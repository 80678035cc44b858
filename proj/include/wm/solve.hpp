#pragma once

// Entry points for b-matchings and f-factors.

#include <optional>

#include "wm/certify.hpp"
#include "wm/engine.hpp"

namespace wm {

struct SolveOptions {
    bool debug = false;
    std::ostream* trace = nullptr;
    std::optional<MatchingVec> warm_x;
    std::optional<std::vector<int64_t>> warm_y;  // at kDualScale
};

struct SolveResult {
    bool perfect = false;
    Mode mode = Mode::B;
    MatchingVec x;
    int64_t weight = 0;
    int64_t size = 0;
    Certificate cert;  // when perfect
    Deficiency def;    // otherwise
    EngineCounters counters;
};

// Edges with a finite multiplicity below min(b(u),b(v)) send the instance to
// the f-factor engine, which tracks multiplicities.
bool needs_f_engine(const Multigraph& g, const DegreeFn& b);

SolveResult solve_b_matching(const Multigraph& g, const DegreeFn& b, const SolveOptions& opt = {});
SolveResult solve_f_factor(const Multigraph& g, const DegreeFn& f, const SolveOptions& opt = {});
SolveResult solve_matching(const Multigraph& g, const SolveOptions& opt = {});

Certificate make_certificate(const Engine& e);

}  // namespace wm
