#include <algorithm>
#include <numeric>
#include <string>

#include "wm/engine.hpp"

namespace wm {

namespace {

struct Dsu {
    std::vector<int> p;
    explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int a) {
        while (p[a] != a) a = p[a] = p[p[a]];
        return a;
    }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

[[noreturn]] void fail(const char* where, const std::string& what) {
    throw InvariantError(std::string(where) + ": " + what);
}

}  // namespace

Deficiency Engine::deficiency() const {
    const int n = g_.n();
    Deficiency D;
    D.size = size();
    // 0 = component, 1 = I, 2 = O
    std::vector<int> role(n, 0);
    for (int v = 0; v < n; v++) {
        int N = top(v);
        if (!in_search_ || !F_.is_atom(N) || stat_[N] == NodeStatus::Out) continue;
        if (stat_[N] == NodeStatus::Inner)
            role[v] = 1;
        else if (mode_ == Mode::F)
            role[v] = 2;
    }
    Dsu dsu(n);
    for (int i = 0; i < g_.m(); i++) {
        const EdgeRec& e = g_.edge(i);
        if (role[e.u] == 0 && role[e.v] == 0) dsu.unite(e.u, e.v);
    }
    std::vector<int> comp_of(n, -1);
    for (int v = 0; v < n; v++) {
        if (role[v] == 1) D.inner.push_back(v);
        if (role[v] == 2) D.outer.push_back(v);
        if (role[v] != 0) continue;
        int r = dsu.find(v);
        if (comp_of[r] < 0) {
            comp_of[r] = static_cast<int>(D.components.size());
            D.components.emplace_back();
        }
        D.components[comp_of[r]].push_back(v);
    }
    int64_t bound = 0;
    for (int v : D.inner) bound += deg_[v];
    const int nc = static_cast<int>(D.components.size());
    std::vector<int64_t> fc(nc, 0), across(nc, 0);
    std::vector<char> has_loop(nc, 0);
    for (int c = 0; c < nc; c++)
        for (int v : D.components[c]) fc[c] += deg_[v];
    for (int i = 0; i < g_.m(); i++) {
        const EdgeRec& e = g_.edge(i);
        int64_t cap = cap_[i] < 0 ? kInfKey : cap_[i];
        int ru = role[e.u], rv = role[e.v];
        if (ru == 0 && rv == 0) {
            if (e.loop()) has_loop[comp_of[dsu.find(e.u)]] = 1;
        } else if (ru == 2 && rv == 2) {
            bound += cap;
        } else if ((ru == 0 && rv == 2) || (ru == 2 && rv == 0)) {
            int v = ru == 0 ? e.u : e.v;
            across[comp_of[dsu.find(v)]] += cap;
        }
    }
    for (int c = 0; c < nc; c++) {
        if (mode_ == Mode::B && D.components[c].size() < 2 && !has_loop[c]) continue;
        bound += (fc[c] + across[c]) / 2;
    }
    D.bound = bound;
    return D;
}

void Engine::snapshot_slacks(std::vector<std::tuple<int, int, int, int, int64_t, int>>& out) const {
    out.clear();
    std::vector<int> cls;
    // expected slack change per unit of δ at one end; bit 4 marks eligibility
    auto coef_at = [&](int v, const Cand& c) {
        int N = top(v);
        if (stat_[N] == NodeStatus::Out) return 0;
        bool el = eligible_at(N, c, v);
        if (mode_ == Mode::F) return el ? -1 + 4 : 1;
        bool m = cand_matched(c);
        int k = (stat_[N] == NodeStatus::Outer) != m ? -1 : 1;
        return el ? k + 4 : k;
    };
    for (int rec = 0; rec < g_.m(); rec++) {
        const EdgeRec& e = g_.edge(rec);
        int nu = top(e.u), nv = top(e.v);
        if (nu == nv && !(e.loop() && F_.is_atom(nu))) continue;
        if (stat_[nu] == NodeStatus::Out && stat_[nv] == NodeStatus::Out) continue;
        classes(rec, e.u, nu, e.v, nv, cls);
        for (int N : {nu, nv})
            if (tau_[N] >= 0 && F_.copy(tau_[N]).rec == rec) cls.push_back(tau_[N]);
        for (int k : cls) {
            Cand c{rec, k, e.u, e.v};
            int a = coef_at(e.u, c), b = coef_at(e.v, c);
            bool both = a >= 3 && b >= 3 && (k < 0 || !in_sbar_[k]);
            int coef = (a >= 3 ? a - 4 : a) + (b >= 3 ? b - 4 : b);
            if (k >= 0 && in_sbar_[k]) coef = 0;  // search edges stay tight
            out.emplace_back(rec, k, e.u, e.v, slack(c), both ? coef - 8 : coef);
        }
    }
}

void Engine::check_adjust(int64_t delta) {
    std::vector<std::tuple<int, int, int, int, int64_t, int>> before, after;
    snapshot_slacks(before);
    std::vector<int64_t> zb;
    for (int N : snodes_)
        if (!F_.is_atom(N) && F_.at(N).alive && F_.maximal(N)) zb.push_back(z(N));
    Delta_ += delta;
    snapshot_slacks(after);
    ++cnt_.invariant_checks;
    if (before.size() != after.size()) fail("adjust", "candidate set changed");
    for (size_t i = 0; i < before.size(); i++) {
        auto [rec, k, u, v, s0, coef] = before[i];
        bool both = coef < -4;
        if (both) coef += 8;
        int64_t s1 = std::get<4>(after[i]);
        if (s1 - s0 != coef * delta)
            fail("adjust", "slack of edge " + std::to_string(rec) + " changed by " + std::to_string(s1 - s0) +
                               ", expected " + std::to_string(coef * delta));
        if (s1 < 0) fail("adjust", "negative slack on edge " + std::to_string(rec));
        if (both && s1 - s0 != -2 * delta) fail("adjust", "edge eligible at both ends not decreased by 2δ");
    }
    for (int N : snodes_)
        if (!F_.is_atom(N) && F_.at(N).alive && F_.maximal(N) && z(N) < 0)
            fail("adjust", "negative blossom dual");
}

void Engine::check_eligibility_monotone() {
    std::set<std::tuple<int, int, int>> now;
    std::vector<int> cls;
    for (int rec = 0; rec < g_.m(); rec++) {
        const EdgeRec& e = g_.edge(rec);
        int nu = top(e.u), nv = top(e.v);
        if (nu == nv && !(e.loop() && F_.is_atom(nu))) continue;
        classes(rec, e.u, nu, e.v, nv, cls);
        for (int k : cls)
            for (int end : {e.u, e.v}) {
                int N = top(end);
                Cand c{rec, k, end, e.other(end)};
                if (stat_[N] != NodeStatus::Out && eligible_at(N, c, end)) now.emplace(rec, k, end);
            }
    }
    for (const auto& [rec, k0, end] : elig_prev_) {
        int k = k0;
        if (k >= 0 && !F_.live(k)) k = F_.copy(k).matched ? kGenM : kGenU;
        if (now.count({rec, k, end})) continue;
        const EdgeRec& e = g_.edge(rec);
        int N = top(end), M = top(e.other(end));
        if (stat_[N] == NodeStatus::Out) continue;
        if (N == M && !(e.loop() && F_.is_atom(N))) continue;
        Cand c{rec, k, end, e.other(end)};
        if (k >= 0 && (in_sbar_[k] || !available(c))) continue;
        if (k < 0 && !available(c)) continue;
        fail("eligibility", "edge " + std::to_string(rec) + " lost eligibility at vertex " + std::to_string(end));
    }
    elig_prev_ = std::move(now);
    ++cnt_.invariant_checks;
}

void Engine::check_invariants(const char* where) {
    ++cnt_.invariant_checks;
    const int n = g_.n();
    for (int v = 0; v < n; v++) {
        if (top(v) != F_.top_of(v)) fail(where, "top of vertex " + std::to_string(v) + " out of date");
        if (F_.d(v) > deg_[v]) fail(where, "degree bound exceeded at " + std::to_string(v));
    }
    for (int i = 0; i < g_.m(); i++) {
        if (F_.x[i] < 0 || (cap_[i] >= 0 && F_.x[i] > cap_[i])) fail(where, "multiplicity exceeded");
        if (F_.live_count(i, true) > F_.x[i]) fail(where, "more live matched copies than matched edges");
        if (cap_[i] >= 0 && F_.live_count(i, false) > cap_[i] - F_.x[i])
            fail(where, "more live unmatched copies than free multiplicity");
    }
    // I3: rings are cycles through the children
    for (int b = 0; b < F_.num_blossoms(); b++) {
        const Blossom& B = F_.blossom(b);
        if (!B.alive) continue;
        int N = F_.node_of(b);
        const int k = static_cast<int>(B.kids.size());
        for (int i = 0; i < k; i++) {
            const EdgeRec& e = g_.edge(F_.copy(B.ring[i]).rec);
            int a = B.ring_a[i], c = B.ring_b[i];
            if (!((e.u == a && e.v == c) || (e.u == c && e.v == a))) fail(where, "ring edge ends mismatch");
            if (F_.child_containing(N, a) != B.kids[i] || F_.child_containing(N, c) != B.kids[(i + 1) % k])
                fail(where, "ring edge does not join consecutive children");
            if (hyz(e.u == a ? F_.copy(B.ring[i]).rec : F_.copy(B.ring[i]).rec, B.ring[i],
                    F_.copy(B.ring[i]).matched) != 0)
                fail(where, "ring edge of blossom " + std::to_string(N) + " not tight");
        }
        if (!F_.maximal(N) && B.z < 0) fail(where, "negative blossom dual");
        if (F_.maximal(N) && z(N) < 0) fail(where, "negative blossom dual");
        // I2
        if (mode_ == Mode::F) {
            if (!F_.is_mature(N, Mode::F, deg_)) fail(where, "immature blossom " + std::to_string(N));
        } else {
            if (z(N) > 0 && (F_.mtype(N) != MType::Light || !F_.is_mature(N, Mode::B, deg_)))
                fail(where, "positive dual on a heavy or immature blossom");
            if (F_.maximal(N) && F_.mtype(N) != MType::Light) fail(where, "maximal heavy blossom");
            if (F_.maximal(N) && stat_[N] != NodeStatus::Outer) {
                if (!F_.is_mature(N, Mode::B, deg_)) fail(where, "immature inner or out-of-search blossom");
                int et = F_.eta(N);
                if (et < 0 || !F_.copy(et).matched) fail(where, "base of a mature blossom not on a matched edge");
            }
        }
        int et = F_.eta(N);
        if (F_.maximal(N) && et >= 0) {
            const EdgeRec& e = g_.edge(F_.copy(et).rec);
            if (e.u != B.base && e.v != B.base) fail(where, "base edge not at the base vertex");
            int64_t h = hyz(F_.copy(et).rec, et, F_.copy(et).matched);
            if (F_.copy(et).matched ? h > 0 : h < 0) fail(where, "base edge has negative slack");
        }
    }
    // I4 for anonymous copies
    for (int i = 0; i < g_.m(); i++) {
        if (F_.x[i] - F_.live_count(i, true) > 0) {
            int64_t h = hyz(i, -1, true);
            if (h > 0 || (mode_ == Mode::B && h != 0)) fail(where, "matched edge " + std::to_string(i) + " not tight");
        }
        if (cap_[i] < 0 || cap_[i] - F_.x[i] - F_.live_count(i, false) > 0)
            if (hyz(i, -1, false) < 0) fail(where, "unmatched edge " + std::to_string(i) + " dominated");
    }
    if (!in_search_) return;
    // I1 and search structure consistency
    std::vector<char> sbar(in_sbar_.size(), 0);
    for (int N : snodes_) {
        if (!(N < n || (F_.at(N).alive && F_.maximal(N)))) {
            if (stat_[N] != NodeStatus::Out) fail(where, "non-maximal node with a search status");
            continue;
        }
        if (stat_[N] == NodeStatus::Out) continue;
        int t = tau_[N];
        if (t < 0) {
            if (!is_free(N)) fail(where, "root is not free");
            if (!F_.is_atom(N) && F_.mtype(N) != MType::Light) fail(where, "root blossom is heavy");
            if (stat_[N] != NodeStatus::Outer) fail(where, "root is not outer");
            continue;
        }
        sbar[t] = 1;
        if (!in_sbar_[t]) fail(where, "search edge not marked");
        if (hyz(F_.copy(t).rec, t, F_.copy(t).matched) != 0) fail(where, "search edge not tight");
        int P = parent_node(N);
        if (stat_[P] == NodeStatus::Out || tree_[P] != tree_[N]) fail(where, "parent outside the tree");
        if (top(tau_cv_[N]) != N) fail(where, "search edge child end outside the node");
        bool m = F_.copy(t).matched;
        bool outer = stat_[N] == NodeStatus::Outer;
        if (F_.is_atom(N) || mode_ == Mode::B) {
            if (outer != m && (F_.is_atom(N) || mode_ == Mode::F)) fail(where, "atom status does not match its edge");
            if (mode_ == Mode::B && !F_.is_atom(N) && !outer && m) fail(where, "inner blossom on a matched edge");
        } else if (outer != (t == F_.eta(N))) {
            fail(where, "blossom status does not match its base edge");
        }
        if (F_.is_atom(P)) {
            if ((stat_[P] == NodeStatus::Outer) == m) fail(where, "no alternation at an atom");
        } else if (stat_[P] == NodeStatus::Inner) {
            if (mode_ == Mode::F && t != F_.eta(P)) fail(where, "child of an inner blossom off its base edge");
            if (mode_ == Mode::B && !m) fail(where, "child of an inner blossom on an unmatched edge");
        }
        if (mode_ == Mode::B && stat_[P] == NodeStatus::Inner && !outer) fail(where, "inner child of an inner node");
    }
    for (size_t c = 0; c < in_sbar_.size(); c++)
        if (in_sbar_[c] && !sbar[c]) fail(where, "stale search edge mark");
}

}  // namespace wm
