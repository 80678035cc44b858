#pragma once

// Nested blossoms over a multigraph. Node ids: 0..n-1 are atoms (vertices),
// n+b is blossom b. Each blossom stores the ring of its children C(B): kid[0]
// is α(B) and ring[i] is an edge copy joining kid[i] and kid[(i+1) mod k].
// Edge copies are individual logical edges with a matched flag.

#include <cstdint>
#include <vector>

#include "wm/multigraph.hpp"

namespace wm {

enum class MType : uint8_t { Light, Heavy };

inline MType type_of_edge(bool matched) { return matched ? MType::Heavy : MType::Light; }
inline MType flip(MType t) { return t == MType::Heavy ? MType::Light : MType::Heavy; }

enum class Mode : uint8_t { B, F };

struct Copy {
    int rec;
    bool matched;
};

struct TrailEdge {
    int copy;
    int from;
    int to;
};

struct Blossom {
    std::vector<int> kids;
    std::vector<int> ring;
    std::vector<int> ring_a;  // end of ring[i] inside kids[i]
    std::vector<int> ring_b;  // end of ring[i] inside kids[i+1]
    int base = -1;
    int64_t z = 0;
    bool alive = true;
};

class BlossomForest {
public:
    explicit BlossomForest(const Multigraph& g);

    const Multigraph& graph() const { return *g_; }
    int n() const { return n_; }
    bool is_atom(int node) const { return node < n_; }
    int node_of(int b) const { return n_ + b; }
    int bid(int node) const { return node - n_; }
    int num_blossoms() const { return static_cast<int>(bl_.size()); }
    int num_nodes() const { return n_ + num_blossoms(); }
    const Blossom& blossom(int b) const { return bl_[b]; }
    Blossom& blossom(int b) { return bl_[b]; }
    const Blossom& at(int node) const { return bl_[node - n_]; }

    // matching state
    MatchingVec x;
    // new_copy adds a copy to the matching when `matched`; adopt names a copy
    // that x already accounts for.
    int new_copy(int rec, bool matched);
    int adopt(int rec, bool matched);
    const Copy& copy(int c) const { return copies_[c]; }
    int num_copies() const { return static_cast<int>(copies_.size()); }
    void flip_copy(int c);
    MType copy_type(int c) const { return type_of_edge(copies_[c].matched); }
    // Copies referenced by the structure (rings, base edges, search edges)
    // are live; the rest of x and of the multiplicity is anonymous.
    void retain(int c);
    void release(int c);
    bool live(int c) const { return refs_[c] > 0; }
    int64_t live_count(int rec, bool matched) const { return live_[matched ? 1 : 0][rec]; }

    // structure
    int parent(int node) const { return parent_[node]; }
    bool maximal(int node) const { return parent_[node] < 0; }
    int base(int node) const { return is_atom(node) ? node : at(node).base; }
    int top_of(int v) const;
    // child of blossom node B containing vertex v (v must lie in B)
    int child_containing(int B, int v) const;
    int kid_index(int B, int kid) const;
    MType mtype(int node) const;
    // base edge copy, or -1 for ∅
    int eta(int node) const;
    void set_eta(int node, int c);
    void vertices(int node, std::vector<int>& out) const;
    int vertex_count(int node) const;

    // Creates a blossom from a ring; kids must be maximal. `eta_max` is the
    // new blossom's base edge. Returns the new node id.
    int contract(std::vector<int> kids, std::vector<int> ring, std::vector<int> ring_a,
                 std::vector<int> ring_b, int eta_max);
    // Removes a maximal blossom; its kids become maximal with their η fixed.
    void dissolve(int node);

    // Kid indices visited by P_i(v, β(node)) at the top level, in trail
    // order, and the ring indices joining consecutive ones.
    struct TopPath {
        std::vector<int> kids;
        std::vector<int> rings;
    };
    TopPath top_path(int node, int v, int i) const;

    // P_i(v, β(node)) as directed edges from v to the base.
    void trail(int node, int v, int i, std::vector<TrailEdge>& out) const;
    // Flips P_i(v, β(node)) and restores the blossom structure with base v.
    void rematch(int node, int v, int i);

    bool is_mature(int node, Mode mode, const DegreeFn& deg) const;
    // number of matched copies with both ends in V(node), loops counted once
    int64_t inner_matched(int node) const;
    int64_t d(int v) const { return degree(*g_, x, v); }

    mutable int64_t work = 0;  // primitive steps spent in trails and rematching

private:
    // One element of P_i(v, β(B)) at the top level of B: either a ring edge
    // or a pass through kid `idx` (recursive trail P_sub_i(sub_v, β(kid))).
    struct Item {
        bool is_ring;
        int r;        // ring index (ring items)
        bool fwd;     // ring traversed from kid r to kid r+1
        int idx;      // kid index (pass items)
        int sub_v;
        int sub_i;
        bool rev;     // the kid's trail is traversed backwards
        int in_ring;  // ring index entering the kid, -1 if the trail starts inside it
        int out_ring; // ring index leaving the kid, -1 if the trail ends inside it
    };
    void plan(int node, int v, int i, std::vector<Item>& items) const;

    const Multigraph* g_;
    int n_;
    std::vector<Copy> copies_;
    std::vector<int> refs_;
    std::vector<int64_t> live_[2];
    std::vector<Blossom> bl_;
    std::vector<int> parent_;
    std::vector<int> pos_;  // index among the parent's kids
    std::vector<int> eta_;
    mutable std::vector<char> mark_;
};

}  // namespace wm
