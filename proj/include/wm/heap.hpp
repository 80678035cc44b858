#pragma once

// Pairing heap with lazy deletion and meld. Ties on key are broken by
// insertion sequence, so the order of equal keys is deterministic.

#include <atomic>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace wm {

inline constexpr int64_t kInfKey = std::numeric_limits<int64_t>::max();

class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct HeapCounters {
    int64_t comparisons = 0;
    int64_t inserts = 0;
    int64_t melds = 0;
    int64_t decrease_keys = 0;
    int64_t deletes = 0;  // physical removals of the minimum
    int64_t max_size = 0;
};

template <class Payload>
class PairingHeap {
    struct Node {
        int64_t key;
        uint64_t seq;
        Payload payload;
        bool dead = false;
        bool in_heap = true;
        Node* child = nullptr;
        Node* next = nullptr;  // sibling
        Node* prev = nullptr;  // previous sibling, or parent for a first child
    };

public:
    using Handle = Node*;

    PairingHeap() = default;
    PairingHeap(const PairingHeap&) = delete;
    PairingHeap& operator=(const PairingHeap&) = delete;
    PairingHeap(PairingHeap&&) = default;
    PairingHeap& operator=(PairingHeap&&) = default;

    Handle insert(int64_t key, Payload p) {
        pool_.push_back(std::make_unique<Node>(Node{key, next_seq_.fetch_add(1), std::move(p)}));
        Node* x = pool_.back().get();
        ++cnt_.inserts;
        ++size_;
        ++live_;
        if (size_ > cnt_.max_size) cnt_.max_size = size_;
        root_ = link(root_, x);
        return x;
    }

    void decrease_key(Handle h, int64_t key) {
        if (!h->in_heap || h->dead) throw ContractError("decrease_key on a removed or dead entry");
        if (key > h->key) throw ContractError("decrease_key would increase the key");
        ++cnt_.decrease_keys;
        h->key = key;
        if (h == root_) return;
        cut(h);
        root_ = link(root_, h);
    }

    void lazy_delete(Handle h) {
        if (!h->in_heap) throw ContractError("lazy_delete on a removed entry");
        if (!h->dead) {
            h->dead = true;
            --live_;
        }
    }

    // Moves every entry of `other` into this heap; handles stay valid.
    void meld(PairingHeap& other) {
        if (&other == this) return;
        ++cnt_.melds;
        for (auto& p : other.pool_) pool_.push_back(std::move(p));
        other.pool_.clear();
        size_ += other.size_;
        live_ += other.live_;
        if (size_ > cnt_.max_size) cnt_.max_size = size_;
        root_ = link(root_, other.root_);
        other.root_ = nullptr;
        other.size_ = other.live_ = 0;
    }

    // Removes dead minima, then reports the live minimum without removing it.
    std::optional<std::pair<int64_t, Payload>> extract_min_live() {
        while (root_ && root_->dead) remove_root();
        if (!root_) return std::nullopt;
        return std::make_pair(root_->key, root_->payload);
    }

    std::optional<Handle> min_handle() {
        while (root_ && root_->dead) remove_root();
        if (!root_) return std::nullopt;
        return root_;
    }

    // Removes the live minimum (after extract_min_live reported it).
    void pop_min() {
        while (root_ && root_->dead) remove_root();
        if (!root_) return;
        --live_;
        remove_root();
    }

    bool empty_live() { return !extract_min_live().has_value(); }
    int64_t live_size() const { return live_; }
    int64_t key(Handle h) const { return h->key; }
    const Payload& payload(Handle h) const { return h->payload; }
    bool alive(Handle h) const { return h->in_heap && !h->dead; }
    const HeapCounters& counters() const { return cnt_; }

private:
    bool less(const Node* a, const Node* b) {
        ++cnt_.comparisons;
        return a->key < b->key || (a->key == b->key && a->seq < b->seq);
    }

    Node* link(Node* a, Node* b) {
        if (!a) return b;
        if (!b) return a;
        if (less(b, a)) std::swap(a, b);
        // b becomes the first child of a
        b->prev = a;
        b->next = a->child;
        if (a->child) a->child->prev = b;
        a->child = b;
        a->next = a->prev = nullptr;
        return a;
    }

    void cut(Node* x) {
        if (x->prev->child == x) x->prev->child = x->next;
        else x->prev->next = x->next;
        if (x->next) x->next->prev = x->prev;
        x->next = x->prev = nullptr;
    }

    void remove_root() {
        Node* r = root_;
        r->in_heap = false;
        ++cnt_.deletes;
        --size_;
        // two-pass pairing of the children
        std::vector<Node*>& pairs = scratch_;
        pairs.clear();
        Node* c = r->child;
        while (c) {
            Node* a = c;
            Node* b = c->next;
            c = b ? b->next : nullptr;
            a->next = a->prev = nullptr;
            if (b) b->next = b->prev = nullptr;
            pairs.push_back(link(a, b));
        }
        Node* acc = nullptr;
        for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) acc = link(*it, acc);
        root_ = acc;
        r->child = nullptr;
    }

    Node* root_ = nullptr;
    std::vector<std::unique_ptr<Node>> pool_;
    std::vector<Node*> scratch_;
    static inline std::atomic<uint64_t> next_seq_{0};
    int64_t size_ = 0;
    int64_t live_ = 0;
    HeapCounters cnt_;
};

}  // namespace wm
