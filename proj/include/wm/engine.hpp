#pragma once

// Blossom search engine for b-matchings (Mode::B) and f-factors (Mode::F).
// Duals are kept at kDualScale times the weight scale. Vertex and blossom
// duals of nodes in the search structure are stored relative to Δ, the total
// of all dual adjustments in the current search.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "wm/blossom_forest.hpp"
#include "wm/heap.hpp"
#include "wm/multigraph.hpp"
#include "wm/tree_merge.hpp"

namespace wm {

inline constexpr int64_t kDualScale = 4;

enum class NodeStatus : uint8_t { Out, Inner, Outer };

class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct EngineOptions {
    bool debug = false;
    std::ostream* trace = nullptr;
    // warm start: x must be a partial f/b-matching, y at kDualScale
    std::optional<MatchingVec> warm_x;
    std::optional<std::vector<int64_t>> warm_y;
};

struct EngineCounters {
    int64_t searches = 0;
    int64_t augments = 0;
    int64_t grows = 0;
    int64_t blossoms = 0;
    int64_t expands = 0;
    int64_t dual_adjusts = 0;
    int64_t events = 0;
    int64_t stale_events = 0;
    int64_t discards = 0;
    int64_t invariant_checks = 0;
    int64_t work = 0;  // total primitive steps, including tree-merge charges
    std::vector<int64_t> search_work;
};

struct Deficiency {
    std::vector<int> inner;  // I
    std::vector<int> outer;  // O (f-factors only)
    std::vector<std::vector<int>> components;
    int64_t bound = 0;  // size bound given by the witness
    int64_t size = 0;   // current matching size x(E)
};

class Engine {
public:
    enum class Outcome { Augmented, Failed, Perfect };

    Engine(const Multigraph& g, DegreeFn deg, Mode mode, EngineOptions opt = {});
    ~Engine();
    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    // Searches until the matching is perfect (true) or a search fails (false).
    bool run();
    // One search. After Failed the search structure stays available until the
    // next call or finish_search().
    Outcome run_one_search();
    void finish_search();
    bool in_search() const { return in_search_; }
    // Extra dual adjustment on a failed search structure (internal units).
    void adjust(int64_t delta);
    void set_degree(int v, int64_t d);

    Mode mode() const { return mode_; }
    const Multigraph& graph() const { return g_; }
    const DegreeFn& deg() const { return deg_; }
    const BlossomForest& forest() const { return F_; }
    const MatchingVec& x() const { return F_.x; }
    int64_t y(int v) const;
    int64_t z(int node) const;
    int top(int v) const { return grp_node_[grp_[v]]; }
    NodeStatus status(int node) const { return stat_[node]; }
    int tau(int node) const { return tau_[node]; }
    int tau_child_end(int node) const { return tau_cv_[node]; }
    int tau_parent_end(int node) const { return tau_pv_[node]; }
    int tree(int node) const { return tree_[node]; }
    int64_t capacity(int rec) const { return cap_[rec]; }
    int64_t scaled_weight(int rec) const { return W_[rec]; }
    bool perfect() const;
    int64_t size() const;
    int64_t weight() const { return matching_weight(g_, F_.x); }
    const EngineCounters& counters() const { return cnt_; }
    int64_t total_work() const;

    // Ĥyz of a copy of `rec` minus its weight (both at kDualScale); `copy` is
    // a copy object or -1 for an anonymous copy of the given type.
    int64_t hyz(int rec, int copy, bool matched) const;
    // Witness for a failed search.
    Deficiency deficiency() const;
    // Throws InvariantError describing the first violation.
    void check_invariants(const char* where);

private:
    static constexpr int kGenM = -1;
    static constexpr int kGenU = -2;
    enum EvKind : uint8_t { kGrow = 0, kPair = 1, kExpand = 2 };
    struct Cand {
        int rec;
        int cls;  // copy object, kGenM or kGenU
        int x;    // end known to be eligible
        int y;
    };
    struct Ev {
        EvKind kind;
        int ref;  // candidate or node
    };

    int64_t off(NodeStatus s) const;
    int64_t zoff(NodeStatus s) const;
    void ensure_nodes();
    void set_status(int node, NodeStatus s);
    int parent_node(int node) const;
    bool is_free(int node) const;
    int vsize(int node) const { return vsize_[node]; }

    bool cand_matched(const Cand& c) const;
    bool eligible_at(int node, const Cand& c, int end) const;
    bool available(const Cand& c) const;
    void classes(int rec, int x, int nx, int y, int ny, std::vector<int>& out) const;
    int64_t iterm(int v, int node, int copy, bool matched) const;
    int64_t slack(const Cand& c) const;
    int materialize(const Cand& c);

    void start_search();
    void make_root(int node);
    void push_event(int64_t delta_key, EvKind kind, int ref);
    void consider(const Cand& c);
    void scan_vertex(int x);
    void scan_node(int node);
    void scan_eta(int node);
    void scan_reverse(int u);
    void push_expand(int node);

    // supporting tree
    void t_root(int v);
    void t_leaf(int parent, int v);
    int t_nca(int a, int b) const;
    void t_add_path(int node, int entry, int parent_v);
    void t_absorb(int node, int anchor);
    void t_node_for(int node);

    // steps
    void advance(int64_t delta);
    void grow(const Cand& c);
    bool blossom_step(const Cand& c);
    void augment_cross(const Cand& c);
    void augment_cycle(std::vector<int> kids, std::vector<int> ring, std::vector<int> ra,
                       std::vector<int> rb);
    int contract_outer(std::vector<int> kids, std::vector<int> ring, std::vector<int> ra,
                       std::vector<int> rb, int eta);
    void expand_f(int node);
    bool expand_b(int node);
    bool expand_rec(int node, int e, int ve, int pv, int f, int vf, int tree);
    void attach(int node, int tau, int cv, int pv, int tree);
    void leave_search(int node);
    void discard_unless_light_mature(int node, std::vector<int>* out_nodes);
    void post_augment();
    void relabel_split(int old_node, const std::vector<int>& kids);
    void relabel_merge(int new_node, const std::vector<int>& kids);
    void trace_line(const char* fmt, ...) const;

    // debug
    void snapshot_slacks(std::vector<std::tuple<int, int, int, int, int64_t, int>>& out) const;
    void check_adjust(int64_t delta);
    void check_eligibility_monotone();

    const Multigraph& g_;
    DegreeFn deg_;
    Mode mode_;
    EngineOptions opt_;
    BlossomForest F_;
    std::vector<int64_t> W_, cap_;
    std::vector<int64_t> Y_;
    int64_t Delta_ = 0;

    // per node
    std::vector<NodeStatus> stat_;
    std::vector<int> tree_, tau_, tau_cv_, tau_pv_, vsize_, node_grp_;
    std::vector<int> marka_, markb_;
    int stamp_ = 0;
    // per vertex
    std::vector<int> grp_;
    std::vector<int> grp_node_;
    // per copy
    std::vector<char> in_sbar_;

    // search state
    bool in_search_ = false;
    bool augmented_ = false;
    int ntrees_ = 0;
    std::vector<int> snodes_;
    std::unique_ptr<TreeMerge> tbm_;
    std::unique_ptr<PairingHeap<Ev>> heap_;
    std::vector<Cand> cands_;
    int lg_ = 1;
    std::vector<int> up_;  // lg_ x n ancestor table of T
    std::vector<int> scratch_;

    EngineCounters cnt_;
    mutable int64_t work_ = 0;
    int64_t tbm_done_ = 0;
    int64_t heap_done_ = 0;
    int64_t search_start_work_ = 0;
    std::set<std::tuple<int, int, int>> elig_prev_;
};

}  // namespace wm
