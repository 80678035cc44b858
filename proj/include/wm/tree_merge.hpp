#pragma once

// Tree-blossom merging: blossoms are vertex sets of a growing supporting tree
// T that get merged along tree edges. Edges vw (w an ancestor of v) carry a
// key t; find_min returns the smallest key over edges joining two distinct
// blossoms. Edges are kept in per-blossom loose lists and rank packets so
// that the total work is O(#make_edge + n log n).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wm/heap.hpp"

namespace wm {

enum class EdgeKind : uint8_t { L, S, D };

struct Classification {
    EdgeKind kind;
    bool u_is_v;  // associated end: v for l/s edges, w for d edges
    int r;
};

// Type table for an edge of rank r_e whose ends lie in blossoms of rank
// r_av (lower end v) and r_aw (upper end w).
Classification classify(int r_e, int r_av, int r_aw);

struct TbmMin {
    int v, w;
    int64_t t;
    int64_t payload;
};

struct TbmCounters {
    int64_t charged_units = 0;  // R0 edge touches + per-merge log n block + make_edge units
    int64_t merges = 0;
    int64_t make_edges = 0;
    int64_t discarded = 0;
    int64_t reclassified = 0;
};

struct TbmBlossomDump {
    int id;
    int size;
    int rank;
    int loose_len;
    std::vector<int> packet_ranks;
    int64_t smallest;  // kInfKey when no edge
};

class TreeMerge {
public:
    explicit TreeMerge(int capacity, bool debug = false);

    void add_root(int y);
    void add_leaf(int x, int y);
    bool in_tree(int v) const { return depth_[v] >= 0; }
    int depth(int v) const { return depth_[v]; }
    int tree_parent(int v) const { return parent_[v]; }
    int capacity() const { return static_cast<int>(depth_.size()); }

    // Current blossom id containing v.
    int find(int v);
    int size_of(int b) const { return bl_[b].size; }
    int rank_of(int b) const { return bl_[b].rank; }
    bool alive(int b) const { return bl_[b].alive; }

    void make_edge(int v, int w, int64_t t, int64_t payload);
    int merge(int x, int y);
    std::optional<TbmMin> find_min();

    const TbmCounters& counters() const { return cnt_; }
    const HeapCounters& heap_counters() const { return heap_.counters(); }
    std::vector<TbmBlossomDump> dump() const;
    // Checks the per-edge credit invariant; returns an error message or "".
    std::string audit_credits() const;
    int64_t total_credits() const;
    int64_t stem_violations() const { return stem_violations_; }
    int64_t rank_violations() const { return rank_violations_; }

private:
    struct Edge {
        int v, w;
        int64_t t;
        int64_t payload;
        int next;
        EdgeKind kind;
        bool u_is_v;
        int r;
        int credits;
    };
    struct Packet {
        int r;
        int ring;  // tail of a circular list
        int best;  // edge index of smallest key
    };
    struct Blossom {
        int size = 1;
        int rank = 0;
        int rep = -1;   // union-find root vertex
        int top = -1;   // min-depth vertex
        int loose = -1;
        int loose_len = 0;
        int best = -1;  // smallest edge over all lists
        std::vector<Packet> packets;
        PairingHeap<int>::Handle h = nullptr;
        bool alive = true;
    };

    int new_blossom(int v);
    int uf_find(int v);
    bool better(int a, int b) const;  // a has smaller (t, index) than b
    void ring_append(int& ring, int e);
    int ring_concat(int a, int b);
    void place_loose(int b, int e);
    void refresh_heap(int b);
    void check_stem(int e, int bv);

    bool debug_;
    std::vector<int> lg_;
    std::vector<int> parent_, depth_;
    std::vector<int> uf_, blossom_of_;
    std::vector<Blossom> bl_;
    std::vector<Edge> edges_;
    PairingHeap<int> heap_;
    // gather arrays
    std::vector<int> gather_nb_;
    std::vector<int> touched_nb_;
    std::vector<int> gather_pk_;
    std::vector<int> gather_pk_best_;
    std::vector<int> touched_pk_;
    std::vector<int> r0_;
    TbmCounters cnt_;
    int64_t stem_violations_ = 0;
    int64_t rank_violations_ = 0;
};

}  // namespace wm
