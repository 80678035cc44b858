#pragma once

// Optimality certificates, an independent verifier, and exhaustive oracles
// for small instances.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wm/blossom_forest.hpp"
#include "wm/multigraph.hpp"

namespace wm {

// A copy of an edge that a certificate refers to by identity (base edges).
struct CertCopy {
    int edge;
    bool matched;
};

// count copies of `edge` with the given type
struct CertIEntry {
    int edge;
    bool matched;
    int64_t count;
};

struct CertBlossom {
    std::vector<int> vertices;
    int base = -1;
    int eta = -1;  // index into Certificate::copies, -1 for none
    int64_t z = 0;
    std::vector<CertIEntry> I;  // f-factors only
};

struct Certificate {
    Mode mode = Mode::B;
    int64_t scale = 1;  // y, z are given at `scale` times the weight unit
    MatchingVec x;
    std::vector<int64_t> y;
    std::vector<CertCopy> copies;
    std::vector<CertBlossom> blossoms;
};

struct Violation {
    std::string rule;
    std::string where;
    int64_t amount = 0;
};

// Per-edge copy limit: b-matchings use min(b(u),b(v)) (⌊b/2⌋ for loops) on
// unbounded edges; f-factors use the multiplicity.
int64_t copy_cap(const Multigraph& g, const DegreeFn& deg, int edge);

// Checks primal feasibility, dual feasibility and complementary slackness.
// An empty result means x is a maximum-weight perfect solution.
std::vector<Violation> verify_certificate(const Multigraph& g, const DegreeFn& deg, const Certificate& c);

std::string certificate_to_json(const Certificate& c);
// Edge indices of g's storage order to instance file order and back.
Certificate to_file_order(const Multigraph& g, const Certificate& c);
Certificate from_file_order(const Multigraph& g, const Certificate& c);
// Throws std::invalid_argument on malformed input.
Certificate certificate_from_json(const std::string& text);

// ---- exhaustive oracles

struct BruteResult {
    bool feasible = false;  // a perfect solution exists
    int64_t weight = 0;     // its maximum weight
    MatchingVec x;          // a witness
    int64_t max_size = 0;   // maximum x(E) over all partial solutions
};

class OracleLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Perfect matchings by pairing the lowest unmatched vertex; n ≤ 12.
BruteResult brute_force_matching(const Multigraph& g);
// Enumerates x ≤ copy_cap on every edge; Π(cap+1) ≤ 10⁷.
BruteResult brute_force_degree(const Multigraph& g, const DegreeFn& deg);
// Minimum-cost T-join by subset enumeration; m ≤ 14. Returns the cost and
// fills `edges` with a minimizer.
int64_t brute_force_tjoin(const Multigraph& g, const std::vector<int>& T, std::vector<int>* edges = nullptr);
// Shortest simple-path distances from s under costs w; n ≤ 9. Unreachable
// vertices get kInfDist.
inline constexpr int64_t kInfDist = std::numeric_limits<int64_t>::max() / 4;
std::vector<int64_t> brute_force_sssp(const Multigraph& g, int s);

// min over I ⊆ V of b(I) + Σ ⌊b(C)/2⌋, C the nontrivial components of G−I.
int64_t eval_min_max_b(const Multigraph& g, const DegreeFn& b);
// min over disjoint I, O of f(I) + |γ(O)| + Σ ⌊(f(C)+|E[C,O]|)/2⌋, counting
// edges with copy_cap multiplicity.
int64_t eval_min_max_f(const Multigraph& g, const DegreeFn& f);

}  // namespace wm
