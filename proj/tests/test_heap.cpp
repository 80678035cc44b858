#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "wm/heap.hpp"

using namespace wm;

TEST_CASE("heap basics") {
    PairingHeap<int> h;
    auto a = h.insert(5, 1);
    h.insert(3, 2);
    CHECK(h.extract_min_live()->first == 3);
    h.decrease_key(a, 1);
    CHECK(h.extract_min_live()->first == 1);
    CHECK_THROWS_AS(h.decrease_key(a, 4), ContractError);
}

TEST_CASE("lazy delete semantics") {
    PairingHeap<int> h;
    auto a = h.insert(4, 0);
    h.lazy_delete(a);
    CHECK_FALSE(h.extract_min_live().has_value());

    PairingHeap<int> g;
    auto d = g.insert(3, 0);
    g.insert(7, 1);
    g.lazy_delete(d);
    auto m = g.extract_min_live();
    REQUIRE(m);
    CHECK(m->first == 7);
    CHECK(g.counters().deletes == 1);
    auto again = g.extract_min_live();
    CHECK(again->first == 7);
    CHECK(again->second == 1);
    CHECK(g.counters().deletes == 1);
}

TEST_CASE("ties broken by insertion order") {
    PairingHeap<int> h;
    for (int i = 0; i < 10; ++i) h.insert(2, i);
    for (int i = 0; i < 10; ++i) {
        CHECK(h.extract_min_live()->second == i);
        h.pop_min();
    }
}

namespace {
struct NaiveEntry {
    int64_t key;
    uint64_t seq;
    int payload;
    bool dead;
    bool removed;
};
}  // namespace

TEST_CASE("heap against sorted-list oracle") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 5; ++round) {
        PairingHeap<int> h, other;
        std::vector<PairingHeap<int>::Handle> handles;
        std::vector<NaiveEntry> naive;
        std::vector<int> in_other;
        uint64_t seq = 0;
        for (int op = 0; op < 10000; ++op) {
            int kind = static_cast<int>(rng() % 10);
            if (kind < 4 || naive.empty()) {
                int64_t key = static_cast<int64_t>(rng() % 1000);
                bool to_other = rng() % 5 == 0;
                int id = static_cast<int>(naive.size());
                handles.push_back(to_other ? other.insert(key, id) : h.insert(key, id));
                naive.push_back({key, seq++, id, false, false});
                if (to_other) in_other.push_back(id);
            } else if (kind < 6) {
                int id = static_cast<int>(rng() % naive.size());
                auto& e = naive[id];
                if (e.dead || e.removed) continue;
                int64_t k = e.key - static_cast<int64_t>(rng() % 50);
                (std::find(in_other.begin(), in_other.end(), id) != in_other.end() ? other : h)
                    .decrease_key(handles[id], k);
                e.key = k;
            } else if (kind < 7) {
                int id = static_cast<int>(rng() % naive.size());
                auto& e = naive[id];
                if (e.removed || e.dead) continue;
                (std::find(in_other.begin(), in_other.end(), id) != in_other.end() ? other : h)
                    .lazy_delete(handles[id]);
                e.dead = true;
            } else if (kind < 8) {
                h.meld(other);
                in_other.clear();
            } else {
                // compare the live minimum over entries held by h
                const NaiveEntry* best = nullptr;
                for (auto& e : naive) {
                    if (e.dead || e.removed) continue;
                    if (std::find(in_other.begin(), in_other.end(), e.payload) != in_other.end()) continue;
                    if (!best || e.key < best->key || (e.key == best->key && e.seq < best->seq)) best = &e;
                }
                auto got = h.extract_min_live();
                REQUIRE(got.has_value() == (best != nullptr));
                if (best) {
                    CHECK(got->first == best->key);
                    CHECK(got->second == best->payload);
                    if (rng() % 2) {
                        h.pop_min();
                        naive[best->payload].removed = true;
                    }
                }
            }
        }
        // amortized comparison contract
        const auto& c = h.counters();
        double logm = std::log2(static_cast<double>(std::max<int64_t>(2, c.max_size)));
        double budget = static_cast<double>(c.inserts + c.melds + c.decrease_keys) +
                        static_cast<double>(c.deletes) * logm;
        CHECK(static_cast<double>(c.comparisons) <= 4.0 * budget);
    }
}
