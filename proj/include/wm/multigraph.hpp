#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wm {

// Multiplicity value meaning "as many copies as needed" (b-matching only).
inline constexpr int64_t kUnbounded = -1;

// Largest accepted |weight| in an instance file. Engines scale weights and
// sum duals along paths, so this leaves ample headroom in int64.
inline constexpr int64_t kMaxAbsWeight = int64_t{1} << 40;

struct EdgeRec {
    int u = 0;
    int v = 0;
    int64_t w = 0;
    int64_t mult = 1;
    int orig = 0;  // position of the record in the source file

    bool loop() const { return u == v; }
    bool unbounded() const { return mult == kUnbounded; }
    int other(int x) const { return x == u ? v : u; }
};

enum class ProblemKind { Matching, BMatch, FFactor, TJoin, SSSP };

const char* to_string(ProblemKind k);

class Multigraph {
public:
    Multigraph() = default;
    Multigraph(int n, std::vector<EdgeRec> edges);

    int n() const { return n_; }
    int m() const { return static_cast<int>(edges_.size()); }
    const EdgeRec& edge(int i) const { return edges_[i]; }
    const std::vector<EdgeRec>& edges() const { return edges_; }
    // Edge ids incident to v; a loop appears once.
    const std::vector<int>& incident(int v) const { return inc_[v]; }
    int64_t max_weight() const;
    bool has_unbounded() const;

private:
    int n_ = 0;
    std::vector<EdgeRec> edges_;
    std::vector<std::vector<int>> inc_;
};

using DegreeFn = std::vector<int64_t>;
using MatchingVec = std::vector<int64_t>;

struct Instance {
    ProblemKind kind = ProblemKind::Matching;
    Multigraph g;
    DegreeFn deg;
    std::vector<int> terminals;
    int source = -1;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& msg);
    int line() const { return line_; }

private:
    int line_;
};

Instance parse_instance(std::string_view text);
Instance load_instance(const std::string& path);
std::string serialize_instance(const Instance& inst);

// x(δ(v)) + 2·x(γ(v)).
int64_t degree(const Multigraph& g, const MatchingVec& x, int v);
int64_t matching_weight(const Multigraph& g, const MatchingVec& x);

int64_t checked_add(int64_t a, int64_t b);
int64_t checked_mul(int64_t a, int64_t b);

}  // namespace wm
