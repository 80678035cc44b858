#include "wm/engine.hpp"

#include <algorithm>
#include <cstdarg>
#include <cstdio>
#include <ostream>
#include <string>

namespace wm {

namespace {

int floor_log2(int v) {
    int r = 0;
    while ((2 << r) <= v) r++;
    return r;
}

}  // namespace

Engine::Engine(const Multigraph& g, DegreeFn deg, Mode mode, EngineOptions opt)
    : g_(g), deg_(std::move(deg)), mode_(mode), opt_(std::move(opt)), F_(g) {
    const int n = g_.n(), m = g_.m();
    if (static_cast<int>(deg_.size()) != n) throw std::invalid_argument("degree vector size mismatch");
    for (int64_t d : deg_)
        if (d < 0) throw std::invalid_argument("negative degree bound");
    W_.resize(m);
    cap_.resize(m);
    int64_t maxw = 0;
    for (int i = 0; i < m; i++) {
        const EdgeRec& e = g_.edge(i);
        W_[i] = checked_mul(e.w, kDualScale);
        if (i == 0 || W_[i] > maxw) maxw = W_[i];
        if (mode_ == Mode::B) {
            cap_[i] = kUnbounded;
        } else if (e.unbounded()) {
            cap_[i] = e.loop() ? deg_[e.u] / 2 : std::min(deg_[e.u], deg_[e.v]);
        } else {
            cap_[i] = e.mult;
        }
    }
    if (opt_.warm_y) {
        if (static_cast<int>(opt_.warm_y->size()) != n) throw std::invalid_argument("warm y size mismatch");
        Y_ = *opt_.warm_y;
    } else {
        Y_.assign(n, maxw / 2);
    }
    if (opt_.warm_x) {
        if (static_cast<int>(opt_.warm_x->size()) != m) throw std::invalid_argument("warm x size mismatch");
        for (int i = 0; i < m; i++) {
            int64_t xi = (*opt_.warm_x)[i];
            if (xi < 0 || (cap_[i] >= 0 && xi > cap_[i])) throw std::invalid_argument("warm x exceeds multiplicity");
        }
        F_.x = *opt_.warm_x;
        for (int v = 0; v < n; v++)
            if (degree(g_, F_.x, v) > deg_[v]) throw std::invalid_argument("warm x exceeds a degree bound");
    }
    grp_.resize(n);
    grp_node_.resize(n);
    for (int v = 0; v < n; v++) grp_[v] = grp_node_[v] = v;
    ensure_nodes();
    for (int v = 0; v < n; v++) {
        node_grp_[v] = v;
        vsize_[v] = 1;
    }
    lg_ = floor_log2(std::max(n, 1)) + 1;
    // dual feasibility of the starting point
    for (int i = 0; i < m; i++) {
        if (F_.x[i] > 0) {
            int64_t h = hyz(i, -1, true);
            if (h > 0 || (mode_ == Mode::B && h != 0))
                throw std::invalid_argument("initial matched edge violates complementary slackness");
        }
        if (cap_[i] < 0 || F_.x[i] < cap_[i])
            if (hyz(i, -1, false) < 0) throw std::invalid_argument("initial duals are infeasible");
    }
}

Engine::~Engine() = default;

int64_t Engine::off(NodeStatus s) const {
    return s == NodeStatus::Outer ? -Delta_ : s == NodeStatus::Inner ? Delta_ : 0;
}

int64_t Engine::zoff(NodeStatus s) const {
    return s == NodeStatus::Outer ? 2 * Delta_ : s == NodeStatus::Inner ? -2 * Delta_ : 0;
}

void Engine::ensure_nodes() {
    size_t nn = static_cast<size_t>(F_.num_nodes());
    if (stat_.size() < nn) {
        stat_.resize(nn, NodeStatus::Out);
        tree_.resize(nn, -1);
        tau_.resize(nn, -1);
        tau_cv_.resize(nn, -1);
        tau_pv_.resize(nn, -1);
        vsize_.resize(nn, 0);
        node_grp_.resize(nn, -1);
        marka_.resize(nn, 0);
        markb_.resize(nn, 0);
    }
    if (in_sbar_.size() < static_cast<size_t>(F_.num_copies())) in_sbar_.resize(F_.num_copies(), 0);
}

int64_t Engine::y(int v) const { return Y_[v] + off(stat_[top(v)]); }

int64_t Engine::z(int node) const {
    if (F_.is_atom(node)) return 0;
    int64_t raw = F_.at(node).z;
    return F_.maximal(node) ? raw + zoff(stat_[node]) : raw;
}

void Engine::set_status(int node, NodeStatus s) {
    NodeStatus old = stat_[node];
    if (old == s) return;
    int64_t dy = off(old) - off(s);
    if (dy != 0) {
        scratch_.clear();
        F_.vertices(node, scratch_);
        work_ += static_cast<int64_t>(scratch_.size());
        for (int v : scratch_) Y_[v] += dy;
    }
    if (!F_.is_atom(node)) F_.blossom(F_.bid(node)).z += zoff(old) - zoff(s);
    stat_[node] = s;
}

void Engine::set_degree(int v, int64_t d) {
    if (in_search_) finish_search();
    if (d < 0) throw std::invalid_argument("negative degree bound");
    deg_[v] = d;
}

int Engine::parent_node(int node) const { return tau_[node] >= 0 ? top(tau_pv_[node]) : -1; }

bool Engine::is_free(int node) const {
    int b = F_.base(node);
    return F_.d(b) < deg_[b];
}

bool Engine::perfect() const {
    for (int v = 0; v < g_.n(); v++)
        if (F_.d(v) != deg_[v]) return false;
    return true;
}

int64_t Engine::size() const {
    int64_t s = 0;
    for (int64_t xi : F_.x) s += xi;
    return s;
}

int64_t Engine::total_work() const {
    int64_t w = work_ + F_.work + tbm_done_ + heap_done_;
    if (tbm_) w += tbm_->counters().charged_units;
    if (heap_) w += heap_->counters().comparisons;
    return w;
}

void Engine::trace_line(const char* fmt, ...) const {
    if (!opt_.trace) return;
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    *opt_.trace << buf << '\n';
}

// ---------------------------------------------------------------- candidates

bool Engine::cand_matched(const Cand& c) const {
    return c.cls >= 0 ? F_.copy(c.cls).matched : c.cls == kGenM;
}

bool Engine::eligible_at(int node, const Cand& c, int /*end*/) const {
    NodeStatus s = stat_[node];
    if (s == NodeStatus::Out) return false;
    bool m = cand_matched(c);
    if (F_.is_atom(node)) return s == NodeStatus::Outer ? !m : m;
    if (s == NodeStatus::Outer) return true;
    if (mode_ == Mode::F) return c.cls >= 0 && c.cls == F_.eta(node);
    return m;
}

bool Engine::available(const Cand& c) const {
    if (c.cls >= 0) {
        if (in_sbar_[c.cls] || F_.copy(c.cls).rec != c.rec) return false;
        int nx = top(c.x), ny = top(c.y);
        if (nx == ny) return false;
        // a released copy is as good as an anonymous one
        if (!F_.live(c.cls)) return available(Cand{c.rec, F_.copy(c.cls).matched ? kGenM : kGenU, c.x, c.y});
        auto is_eta = [&](int node, int v) {
            return !F_.is_atom(node) && F_.base(node) == v && F_.eta(node) == c.cls;
        };
        return is_eta(nx, c.x) || is_eta(ny, c.y);
    }
    if (c.cls == kGenM) return F_.x[c.rec] - F_.live_count(c.rec, true) > 0;
    return cap_[c.rec] < 0 || cap_[c.rec] - F_.x[c.rec] - F_.live_count(c.rec, false) > 0;
}

void Engine::classes(int rec, int x, int nx, int y, int ny, std::vector<int>& out) const {
    out.clear();
    auto eta_of = [&](int node, int v) {
        if (F_.is_atom(node) || F_.base(node) != v) return;
        int c = F_.eta(node);
        if (c < 0 || F_.copy(c).rec != rec || in_sbar_[c]) return;
        if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    };
    if (nx != ny) {
        eta_of(nx, x);
        eta_of(ny, y);
    }
    if (F_.x[rec] - F_.live_count(rec, true) > 0) out.push_back(kGenM);
    if (cap_[rec] < 0 || cap_[rec] - F_.x[rec] - F_.live_count(rec, false) > 0) out.push_back(kGenU);
}

// z-contribution of the I(A) sets at end v of an edge leaving maximal node `node`
int64_t Engine::iterm(int v, int node, int copy, bool matched) const {
    if (mode_ == Mode::B || F_.is_atom(node)) return 0;
    bool is_eta = copy >= 0 && v == F_.base(node) && F_.eta(node) == copy;
    int64_t s = 0;
    for (int A = F_.parent(v); A >= 0; A = F_.parent(A)) {
        ++work_;
        bool in_i = matched != (is_eta && F_.base(A) == v);
        if (in_i) s += z(A);
    }
    return s;
}

int64_t Engine::slack(const Cand& c) const {
    bool m = cand_matched(c);
    int64_t h = y(c.x) + y(c.y);
    if (c.x != c.y) {
        int copy = c.cls >= 0 ? c.cls : -1;
        h += iterm(c.x, top(c.x), copy, m) + iterm(c.y, top(c.y), copy, m);
    }
    int64_t d = h - W_[c.rec];
    return m ? -d : d;
}

int64_t Engine::hyz(int rec, int copy, bool matched) const {
    const EdgeRec& e = g_.edge(rec);
    std::vector<int> au, av;
    for (int A = F_.parent(e.u); A >= 0; A = F_.parent(A)) au.push_back(A);
    for (int A = F_.parent(e.v); A >= 0; A = F_.parent(A)) av.push_back(A);
    int64_t h = y(e.u) + y(e.v);
    // common ancestors form a suffix of both chains
    size_t cu = au.size(), cv = av.size();
    while (cu > 0 && cv > 0 && au[cu - 1] == av[cv - 1]) {
        cu--;
        cv--;
    }
    for (size_t i = cu; i < au.size(); i++) h += z(au[i]);
    if (mode_ == Mode::F) {
        auto side = [&](const std::vector<int>& chain, size_t lim) {
            int64_t s = 0;
            for (size_t i = 0; i < lim; i++) {
                bool is_eta = copy >= 0 && F_.eta(chain[i]) == copy;
                if (matched != is_eta) s += z(chain[i]);
            }
            return s;
        };
        h += side(au, cu) + side(av, cv);
    }
    return h - W_[rec];
}

int Engine::materialize(const Cand& c) {
    if (c.cls >= 0) return c.cls;
    int id = F_.adopt(c.rec, c.cls == kGenM);
    ensure_nodes();
    return id;
}

// ---------------------------------------------------------------- supporting tree

void Engine::t_root(int v) {
    tbm_->add_root(v);
    const int n = g_.n();
    for (int k = 0; k < lg_; k++) up_[k * n + v] = v;
    work_ += lg_;
}

void Engine::t_leaf(int parent, int v) {
    tbm_->add_leaf(parent, v);
    const int n = g_.n();
    up_[v] = parent;
    for (int k = 1; k < lg_; k++) up_[k * n + v] = up_[(k - 1) * n + up_[(k - 1) * n + v]];
    work_ += lg_;
}

int Engine::t_nca(int a, int b) const {
    const int n = g_.n();
    work_ += 2 * lg_;
    int da = tbm_->depth(a), db = tbm_->depth(b);
    if (da < db) {
        std::swap(a, b);
        std::swap(da, db);
    }
    for (int k = lg_ - 1; k >= 0; k--)
        if (da - (1 << k) >= db) {
            a = up_[k * n + a];
            da -= 1 << k;
        }
    if (a == b) return a;
    for (int k = lg_ - 1; k >= 0; k--)
        if (up_[k * n + a] != up_[k * n + b]) {
            a = up_[k * n + a];
            b = up_[k * n + b];
        }
    return up_[a];
}

// Inner blossom: the loop-erased trail from the entry vertex to the base.
void Engine::t_add_path(int node, int entry, int parent_v) {
    if (F_.is_atom(node)) {
        if (!tbm_->in_tree(node)) t_leaf(parent_v, node);
        return;
    }
    int i = F_.copy_type(tau_[node]) == F_.mtype(node) ? 0 : 1;
    std::vector<TrailEdge> tr;
    F_.trail(node, entry, i, tr);
    std::vector<int> seq{entry};
    for (const TrailEdge& t : tr) {
        auto it = std::find(seq.begin(), seq.end(), t.to);
        if (it != seq.end())
            seq.erase(it + 1, seq.end());
        else
            seq.push_back(t.to);
    }
    work_ += static_cast<int64_t>(tr.size());
    int prev = parent_v;
    for (int v : seq) {
        if (!tbm_->in_tree(v)) t_leaf(prev, v);
        prev = v;
    }
}

// Puts every vertex of `node` into T (hanging missing ones below `anchor`)
// and merges them into one tree-merge blossom.
void Engine::t_absorb(int node, int anchor) {
    std::vector<int> vs;
    F_.vertices(node, vs);
    if (!tbm_->in_tree(anchor)) throw InvariantError("supporting tree anchor missing");
    for (int v : vs)
        if (!tbm_->in_tree(v)) t_leaf(anchor, v);
    int cur = tbm_->find(vs[0]);
    for (size_t k = 1; k < vs.size(); k++) {
        int s = tbm_->find(vs[k]);
        if (s != cur) cur = tbm_->merge(cur, s);
    }
    work_ += static_cast<int64_t>(vs.size());
}

void Engine::t_node_for(int node) {
    int entry = tau_cv_[node], pv = tau_pv_[node];
    if (F_.is_atom(node)) {
        if (!tbm_->in_tree(node)) t_leaf(pv, node);
        return;
    }
    if (stat_[node] == NodeStatus::Outer) {
        if (!tbm_->in_tree(entry)) t_leaf(pv, entry);
        t_absorb(node, entry);
    } else {
        t_add_path(node, entry, pv);
    }
}

// ---------------------------------------------------------------- events

void Engine::push_event(int64_t delta_key, EvKind kind, int ref) {
    heap_->insert(delta_key * 4 + kind, Ev{kind, ref});
    ++cnt_.events;
}

void Engine::push_expand(int node) { push_event(Delta_ + z(node) / 2, kExpand, node); }

void Engine::consider(const Cand& c) {
    int nx = top(c.x), ny = top(c.y);
    bool loop = c.x == c.y;
    if (stat_[ny] == NodeStatus::Out) {
        int64_t s = slack(c);
        if (opt_.debug && s < 0) throw InvariantError("negative slack on a grow candidate");
        cands_.push_back(c);
        push_event(Delta_ + s, kGrow, static_cast<int>(cands_.size()) - 1);
        return;
    }
    if (!loop && !eligible_at(ny, c, c.y)) return;
    int64_t s = slack(c);
    if (s < 0 && opt_.debug) throw InvariantError("negative slack on a blossom candidate");
    if (s & 1) throw InvariantError("odd slack on an edge eligible at both ends");
    cands_.push_back(c);
    int idx = static_cast<int>(cands_.size()) - 1;
    if (loop || tree_[nx] != tree_[ny]) {
        push_event(Delta_ + s / 2, kPair, idx);
        return;
    }
    int a = t_nca(c.x, c.y);
    int64_t t = (Delta_ + s / 2) * 4 + kPair;
    if (c.x != a) tbm_->make_edge(c.x, a, t, idx);
    if (c.y != a) tbm_->make_edge(c.y, a, t, idx);
}

void Engine::scan_vertex(int x) {
    int nx = top(x);
    std::vector<int> cls;
    for (int rec : g_.incident(x)) {
        ++work_;
        int y = g_.edge(rec).other(x);
        int ny = top(y);
        if (ny == nx && !(x == y && F_.is_atom(nx))) continue;
        classes(rec, x, nx, y, ny, cls);
        for (int k : cls) {
            Cand c{rec, k, x, y};
            if (eligible_at(nx, c, x)) consider(c);
        }
    }
}

void Engine::scan_node(int node) {
    if (F_.is_atom(node)) {
        scan_vertex(node);
        return;
    }
    std::vector<int> vs;
    F_.vertices(node, vs);
    for (int v : vs) scan_vertex(v);
}

void Engine::scan_eta(int node) {
    int c = F_.eta(node);
    if (c < 0 || in_sbar_[c]) return;
    int x = F_.base(node);
    int rec = F_.copy(c).rec;
    int y = g_.edge(rec).other(x);
    if (top(y) == node) return;
    Cand cd{rec, c, x, y};
    if (eligible_at(node, cd, x)) consider(cd);
}

void Engine::scan_reverse(int u) {
    int nu = top(u);
    std::vector<int> cls;
    for (int rec : g_.incident(u)) {
        ++work_;
        int w = g_.edge(rec).other(u);
        int nw = top(w);
        if (nw == nu || stat_[nw] == NodeStatus::Out) continue;
        classes(rec, w, nw, u, nu, cls);
        for (int k : cls) {
            Cand c{rec, k, w, u};
            if (eligible_at(nw, c, w)) consider(c);
        }
    }
}

// ---------------------------------------------------------------- search

void Engine::make_root(int node) {
    set_status(node, NodeStatus::Outer);
    tree_[node] = ntrees_++;
    tau_[node] = -1;
    int b = F_.base(node);
    t_root(b);
    if (!F_.is_atom(node)) t_absorb(node, b);
    snodes_.push_back(node);
}

void Engine::start_search() {
    in_search_ = true;
    augmented_ = false;
    Delta_ = 0;
    ntrees_ = 0;
    snodes_.clear();
    cands_.clear();
    elig_prev_.clear();
    const int n = g_.n();
    tbm_ = std::make_unique<TreeMerge>(std::max(n, 1), opt_.debug);
    heap_ = std::make_unique<PairingHeap<Ev>>();
    up_.assign(static_cast<size_t>(lg_) * n, -1);
    ++cnt_.searches;
    std::vector<int> roots;
    for (int v = 0; v < n; v++) {
        int N = top(v);
        if (F_.base(N) != v) continue;
        if (is_free(N)) {
            make_root(N);
            roots.push_back(N);
        }
    }
    for (int N : roots) scan_node(N);
    trace_line("search %lld roots=%zu", static_cast<long long>(cnt_.searches), roots.size());
}

void Engine::attach(int node, int tau, int cv, int pv, int tree) {
    tau_[node] = tau;
    tau_cv_[node] = cv;
    tau_pv_[node] = pv;
    tree_[node] = tree;
    in_sbar_[tau] = 1;
    F_.retain(tau);
}

void Engine::finish_search() {
    if (!in_search_) return;
    for (int N : snodes_)
        if (N < F_.n() || (F_.at(N).alive && F_.maximal(N))) set_status(N, NodeStatus::Out);
    for (int N : snodes_) {
        if (tau_[N] >= 0) {
            in_sbar_[tau_[N]] = 0;
            F_.release(tau_[N]);
            tau_[N] = -1;
        }
        tree_[N] = -1;
    }
    snodes_.clear();
    Delta_ = 0;
    tbm_done_ += tbm_->counters().charged_units;
    heap_done_ += heap_->counters().comparisons;
    tbm_.reset();
    heap_.reset();
    cands_.clear();
    in_search_ = false;
    if (augmented_) post_augment();
    cnt_.search_work.push_back(total_work() - search_start_work_);
    cnt_.work = total_work();
}

void Engine::adjust(int64_t delta) {
    if (!in_search_) throw std::logic_error("adjust outside a search");
    if (delta < 0) throw std::invalid_argument("negative dual adjustment");
    Delta_ += delta;
}

void Engine::advance(int64_t delta) {
    if (delta < 0) throw InvariantError("event scheduled in the past");
    if (delta == 0) return;
    if (opt_.debug) {
        check_adjust(delta);
    } else {
        Delta_ += delta;
    }
    ++cnt_.dual_adjusts;
    trace_line("adjust delta=%lld", static_cast<long long>(delta));
}

bool Engine::run() {
    for (;;) {
        Outcome o = run_one_search();
        if (o == Outcome::Perfect) return true;
        if (o == Outcome::Failed) return false;
    }
}

Engine::Outcome Engine::run_one_search() {
    if (in_search_) finish_search();
    if (perfect()) {
        cnt_.work = total_work();
        return Outcome::Perfect;
    }
    search_start_work_ = total_work();
    start_search();
    for (;;) {
        if (opt_.debug) {
            check_invariants("step");
            check_eligibility_monotone();
        }
        int64_t hk = kInfKey, tk = kInfKey;
        auto hmin = heap_->extract_min_live();
        if (hmin) hk = hmin->first;
        auto tmin = tbm_->find_min();
        if (tmin) tk = tmin->t;
        if (hk == kInfKey && tk == kInfKey) {
            cnt_.work = total_work();
            trace_line("search failed");
            return Outcome::Failed;
        }
        bool done = false;
        if (tk < hk) {
            const Cand c = cands_[tmin->payload];
            int64_t when = tk >> 2;
            if (opt_.debug) {
                int nx = top(c.x), ny = top(c.y);
                if (nx == ny || tree_[nx] != tree_[ny] || !eligible_at(nx, c, c.x) ||
                    !eligible_at(ny, c, c.y) || !available(c))
                    throw InvariantError("tree-merge minimum is not a valid blossom edge");
                if (Delta_ + slack(c) / 2 != when) throw InvariantError("tree-merge key out of date");
            }
            advance(when - Delta_);
            done = blossom_step(c);
        } else {
            heap_->pop_min();
            Ev ev = hmin->second;
            int64_t when = hk >> 2;
            int64_t truth = kInfKey;
            if (ev.kind == kExpand) {
                int N = ev.ref;
                if (F_.is_atom(N) || !F_.at(N).alive || !F_.maximal(N) || stat_[N] != NodeStatus::Inner)
                    continue;
                truth = Delta_ + z(N) / 2;
            } else {
                const Cand& c = cands_[ev.ref];
                int nx = top(c.x), ny = top(c.y);
                if (stat_[nx] == NodeStatus::Out || !eligible_at(nx, c, c.x) || !available(c)) continue;
                if (ev.kind == kGrow) {
                    if (stat_[ny] != NodeStatus::Out) continue;
                    truth = Delta_ + slack(c);
                } else {
                    bool loop = c.x == c.y;
                    if (stat_[ny] == NodeStatus::Out || (!loop && (nx == ny || !eligible_at(ny, c, c.y))))
                        continue;
                    if (loop && !F_.is_atom(nx)) continue;
                    if (!loop && tree_[nx] == tree_[ny]) continue;
                    int64_t s = slack(c);
                    if (s & 1) throw InvariantError("odd slack on an edge eligible at both ends");
                    truth = Delta_ + s / 2;
                }
            }
            if (truth > when) {
                ++cnt_.stale_events;
                push_event(truth, ev.kind, ev.ref);
                continue;
            }
            if (truth < when && opt_.debug) throw InvariantError("event fired late");
            advance(truth - Delta_);
            if (ev.kind == kGrow) {
                grow(cands_[ev.ref]);
            } else if (ev.kind == kPair) {
                const Cand c = cands_[ev.ref];
                if (c.x == c.y)
                    done = blossom_step(c);
                else {
                    augment_cross(c);
                    done = true;
                }
            } else if (mode_ == Mode::F) {
                expand_f(ev.ref);
            } else {
                done = expand_b(ev.ref);
            }
        }
        if (done) {
            ++cnt_.augments;
            augmented_ = true;
            trace_line("augment size=%lld", static_cast<long long>(size()));
            finish_search();
            return Outcome::Augmented;
        }
    }
}

// ---------------------------------------------------------------- steps

void Engine::grow(const Cand& c) {
    int nx = top(c.x), ny = top(c.y);
    int id = materialize(c);
    attach(ny, id, c.y, c.x, tree_[nx]);
    bool m = F_.copy(id).matched;
    NodeStatus s;
    if (F_.is_atom(ny) || mode_ == Mode::B)
        s = m ? NodeStatus::Outer : NodeStatus::Inner;
    else
        s = id == F_.eta(ny) ? NodeStatus::Outer : NodeStatus::Inner;
    set_status(ny, s);
    snodes_.push_back(ny);
    t_node_for(ny);
    ++cnt_.grows;
    trace_line("grow %d-%d rec=%d %s", c.x, c.y, c.rec, s == NodeStatus::Outer ? "outer" : "inner");
    if (F_.is_atom(ny) || s == NodeStatus::Outer) {
        scan_node(ny);
    } else {
        if (mode_ == Mode::F)
            scan_eta(ny);
        else
            scan_vertex(F_.base(ny));
        push_expand(ny);
    }
}

int Engine::contract_outer(std::vector<int> kids, std::vector<int> ring, std::vector<int> ra,
                           std::vector<int> rb, int eta) {
    const int k = static_cast<int>(kids.size());
    const int alpha = kids[0];
    std::vector<NodeStatus> st(k);
    for (int i = 0; i < k; i++) st[i] = stat_[kids[i]];
    for (int i = 1; i < k; i++) {
        int K = kids[i];
        if (tau_[K] >= 0) {
            in_sbar_[tau_[K]] = 0;
            F_.release(tau_[K]);
            tau_[K] = -1;
        }
    }
    // tree-merge: every vertex joins T and one merged set
    int cur = -1;
    for (int i = 0; i < k; i++) {
        int K = kids[i];
        int b = F_.base(K);
        if (st[i] != NodeStatus::Outer) t_absorb(K, b);
        int s = tbm_->find(b);
        if (cur < 0)
            cur = s;
        else if (s != cur)
            cur = tbm_->merge(cur, s);
    }
    for (int i = 0; i < k; i++) {
        int K = kids[i];
        set_status(K, NodeStatus::Outer);
        if (!F_.is_atom(K)) F_.blossom(F_.bid(K)).z += zoff(NodeStatus::Outer);
    }
    int N = F_.contract(kids, ring, ra, rb, eta);
    ensure_nodes();
    int sz = 0;
    for (int K : kids) {
        sz += vsize_[K];
        stat_[K] = NodeStatus::Out;
    }
    vsize_[N] = sz;
    stat_[N] = NodeStatus::Outer;
    F_.blossom(F_.bid(N)).z = -zoff(NodeStatus::Outer);
    tree_[N] = tree_[alpha];
    tau_[N] = tau_[alpha];
    tau_cv_[N] = tau_cv_[alpha];
    tau_pv_[N] = tau_pv_[alpha];
    tau_[alpha] = -1;
    relabel_merge(N, kids);
    snodes_.push_back(N);
    ++cnt_.blossoms;
    if (opt_.trace) {
        std::string ks;
        for (int K : kids) ks += " " + std::to_string(K);
        trace_line("blossom node=%d base=%d kids%s", N, F_.base(N), ks.c_str());
    }
    for (int i = 0; i < k; i++) {
        if (st[i] == NodeStatus::Outer && !F_.is_atom(kids[i])) continue;
        scan_node(kids[i]);
    }
    return N;
}

void Engine::augment_cycle(std::vector<int> kids, std::vector<int> ring, std::vector<int> ra,
                           std::vector<int> rb) {
    int v = F_.base(kids[0]);
    int tmp = F_.contract(std::move(kids), std::move(ring), std::move(ra), std::move(rb), -1);
    ensure_nodes();
    F_.rematch(tmp, v, 1);
    F_.dissolve(tmp);
    trace_line("augment cycle at %d", v);
}

bool Engine::blossom_step(const Cand& c) {
    int e = materialize(c);
    int nx = top(c.x), ny = top(c.y);
    std::vector<int> kids, ring, ra, rb;
    if (nx == ny) {
        kids = {nx};
        ring = {e};
        ra = {c.x};
        rb = {c.x};
    } else {
        // nearest common ancestor in the search forest, walking both sides
        ++stamp_;
        int a = nx, b = ny, alpha = -1;
        while (alpha < 0) {
            if (a >= 0) {
                ++work_;
                if (markb_[a] == stamp_) {
                    alpha = a;
                    break;
                }
                marka_[a] = stamp_;
                a = parent_node(a);
            }
            if (b >= 0) {
                ++work_;
                if (marka_[b] == stamp_) {
                    alpha = b;
                    break;
                }
                markb_[b] = stamp_;
                b = parent_node(b);
            }
            if (a < 0 && b < 0) throw InvariantError("blossom step across different trees");
        }
        std::vector<int> px, py;
        for (int t = nx; t != alpha; t = parent_node(t)) px.push_back(t);
        for (int t = ny; t != alpha; t = parent_node(t)) py.push_back(t);
        kids.push_back(alpha);
        for (auto it = px.rbegin(); it != px.rend(); ++it) {
            kids.push_back(*it);
            ring.push_back(tau_[*it]);
            ra.push_back(tau_pv_[*it]);
            rb.push_back(tau_cv_[*it]);
        }
        ring.push_back(e);
        ra.push_back(c.x);
        rb.push_back(c.y);
        for (size_t j = 0; j < py.size(); j++) {
            int K = py[j];
            kids.push_back(K);
            ring.push_back(tau_[K]);
            ra.push_back(tau_cv_[K]);
            rb.push_back(tau_pv_[K]);
        }
    }
    int alpha = kids[0];
    if (mode_ == Mode::B && F_.is_atom(alpha) && stat_[alpha] == NodeStatus::Inner) {
        // heavy blossom at an inner atom, wrapped with its parent edge
        int h = contract_outer(kids, ring, ra, rb, tau_[alpha]);
        int f = tau_[h];
        int P = parent_node(h);
        int pv = tau_pv_[h], cv = tau_cv_[h];
        int f2 = F_.adopt(F_.copy(f).rec, false);
        ensure_nodes();
        std::vector<int> k2{P, h}, r2{f, f2}, a2{pv, cv}, b2{cv, pv};
        if (F_.is_atom(P) && F_.d(P) <= deg_[P] - 2) {
            augment_cycle(k2, r2, a2, b2);
            return true;
        }
        contract_outer(k2, r2, a2, b2, tau_[P]);
        return false;
    }
    if (F_.is_atom(alpha) && F_.d(alpha) <= deg_[alpha] - 2) {
        augment_cycle(kids, ring, ra, rb);
        return true;
    }
    contract_outer(kids, ring, ra, rb, tau_[alpha]);
    return false;
}

void Engine::augment_cross(const Cand& c) {
    int e = materialize(c);
    struct Seg {
        int node, v, i, eta;
    };
    std::vector<Seg> segs;
    std::vector<int> flips{e};
    for (int end : {c.x, c.y}) {
        int N = top(end), entry = e, vin = end;
        for (;;) {
            ++work_;
            if (!F_.is_atom(N)) {
                if (stat_[N] == NodeStatus::Outer) {
                    int i = F_.copy_type(entry) == F_.mtype(N) ? 0 : 1;
                    segs.push_back({N, vin, i, entry});
                } else {
                    if (opt_.debug && mode_ == Mode::F && entry != F_.eta(N))
                        throw InvariantError("augmenting trail enters an inner blossom off its base edge");
                    int t = tau_[N];
                    int i = F_.copy_type(t) == F_.mtype(N) ? 0 : 1;
                    segs.push_back({N, tau_cv_[N], i, t});
                }
            }
            if (tau_[N] < 0) break;
            flips.push_back(tau_[N]);
            entry = tau_[N];
            vin = tau_pv_[N];
            N = parent_node(N);
        }
    }
    for (int f : flips) F_.flip_copy(f);
    for (const Seg& s : segs) {
        F_.rematch(s.node, s.v, s.i);
        F_.set_eta(s.node, s.eta);
    }
    trace_line("augment %d-%d rec=%d", c.x, c.y, c.rec);
}

void Engine::relabel_merge(int N, const std::vector<int>& kids) {
    int L = kids[0];
    for (int K : kids)
        if (vsize_[K] > vsize_[L]) L = K;
    int g = node_grp_[L];
    std::vector<int> vs;
    for (int K : kids) {
        if (K == L) continue;
        vs.clear();
        F_.vertices(K, vs);
        for (int v : vs) grp_[v] = g;
        work_ += static_cast<int64_t>(vs.size());
        node_grp_[K] = -1;
    }
    grp_node_[g] = N;
    node_grp_[N] = g;
    node_grp_[L] = -1;
}

void Engine::relabel_split(int B, const std::vector<int>& kids) {
    int L = kids[0];
    for (int K : kids)
        if (vsize_[K] > vsize_[L]) L = K;
    int g = node_grp_[B];
    grp_node_[g] = L;
    node_grp_[L] = g;
    node_grp_[B] = -1;
    std::vector<int> vs;
    for (int K : kids) {
        if (K == L) continue;
        int ng = static_cast<int>(grp_node_.size());
        grp_node_.push_back(K);
        node_grp_[K] = ng;
        vs.clear();
        F_.vertices(K, vs);
        for (int v : vs) grp_[v] = ng;
        work_ += static_cast<int64_t>(vs.size());
    }
}

void Engine::leave_search(int node) {
    stat_[node] = NodeStatus::Out;
    tau_[node] = -1;
    std::vector<int> vs;
    F_.vertices(node, vs);
    for (int v : vs) scan_reverse(v);
}

void Engine::expand_f(int B) {
    int e = tau_[B], v = tau_cv_[B], pv = tau_pv_[B], tr = tree_[B];
    int i = F_.copy_type(e) == F_.mtype(B) ? 0 : 1;
    BlossomForest::TopPath p = F_.top_path(B, v, i);
    const Blossom& BB = F_.at(B);
    const int k = static_cast<int>(BB.kids.size());
    std::vector<char> on(k, 0);
    for (int idx : p.kids) on[idx] = 1;
    ++cnt_.expands;
    // C_e = C(B) exactly when the trail runs around the whole ring
    if (static_cast<int>(p.rings.size()) == k) {
        F_.set_eta(B, e);
        set_status(B, NodeStatus::Outer);
        t_absorb(B, v);
        trace_line("expand %d -> outer", B);
        scan_node(B);
        return;
    }
    std::vector<int> kids = BB.kids, ring = BB.ring, ra = BB.ring_a, rb = BB.ring_b;
    set_status(B, NodeStatus::Out);
    tau_[B] = -1;  // the search edge moves to the first kid
    F_.dissolve(B);
    relabel_split(B, kids);
    trace_line("expand %d kids=%d path=%zu", B, k, p.kids.size());
    std::vector<int> path_nodes;
    for (size_t t = 0; t < p.kids.size(); t++) {
        int K = kids[p.kids[t]];
        if (t == 0) {
            tau_[K] = e;
            tau_cv_[K] = v;
            tau_pv_[K] = pv;
            tree_[K] = tr;
        } else {
            int r = p.rings[t - 1];
            bool k_is_a = p.kids[t] == r;
            attach(K, ring[r], k_is_a ? ra[r] : rb[r], k_is_a ? rb[r] : ra[r], tr);
        }
        NodeStatus s;
        if (F_.is_atom(K))
            s = F_.copy(tau_[K]).matched ? NodeStatus::Outer : NodeStatus::Inner;
        else
            s = tau_[K] == F_.eta(K) ? NodeStatus::Outer : NodeStatus::Inner;
        set_status(K, s);
        snodes_.push_back(K);
        path_nodes.push_back(K);
    }
    for (int K : path_nodes)
        if (!F_.is_atom(K) && stat_[K] == NodeStatus::Outer) t_absorb(K, tau_cv_[K]);
    for (int idx = 0; idx < k; idx++)
        if (!on[idx]) leave_search(kids[idx]);
    for (int K : path_nodes) {
        if (F_.is_atom(K) || stat_[K] == NodeStatus::Outer) {
            scan_node(K);
        } else {
            scan_eta(K);
            push_expand(K);
        }
    }
}

void Engine::discard_unless_light_mature(int node, std::vector<int>* out_nodes) {
    std::vector<int> st{node};
    while (!st.empty()) {
        int N = st.back();
        st.pop_back();
        if (F_.is_atom(N) || (F_.mtype(N) == MType::Light && F_.is_mature(N, Mode::B, deg_))) {
            if (out_nodes) out_nodes->push_back(N);
            continue;
        }
        if (z(N) != 0) throw InvariantError("discarding a blossom with positive dual");
        std::vector<int> kids = F_.at(N).kids;
        F_.dissolve(N);
        relabel_split(N, kids);
        ++cnt_.discards;
        for (int K : kids) st.push_back(K);
    }
}

void Engine::post_augment() {
    if (mode_ != Mode::B) return;
    for (int v = 0; v < g_.n(); v++) {
        int N = top(v);
        if (F_.is_atom(N) || F_.base(N) != v) continue;
        discard_unless_light_mature(N, nullptr);
    }
}

bool Engine::expand_b(int B) {
    int e = tau_[B], ve = tau_cv_[B], pv = tau_pv_[B], tr = tree_[B];
    int f = F_.eta(B);
    if (f < 0) throw InvariantError("inner blossom without a matched base edge");
    int vf = F_.base(B);
    set_status(B, NodeStatus::Out);
    in_sbar_[e] = 0;
    F_.release(e);
    tau_[B] = -1;
    ++cnt_.expands;
    trace_line("expand %d", B);
    return expand_rec(B, e, ve, pv, f, vf, tr);
}

// Expand(K, e, f): K is out of S; e enters K at ve from pv (in S), f leaves K at vf.
bool Engine::expand_rec(int K, int e, int ve, int pv, int f, int vf, int tr) {
    bool e_m = F_.copy(e).matched;
    auto make_node = [&](NodeStatus s) {
        attach(K, e, ve, pv, tr);
        set_status(K, s);
        snodes_.push_back(K);
        t_node_for(K);
        if (F_.is_atom(K) || s == NodeStatus::Outer) {
            scan_node(K);
        } else {
            scan_vertex(F_.base(K));
            push_expand(K);
        }
    };
    if (F_.is_atom(K) || z(K) > 0) {
        make_node(e_m ? NodeStatus::Outer : NodeStatus::Inner);
        return false;
    }
    int beta = F_.base(K);
    if (F_.mtype(K) == MType::Light && e_m && ve == beta) {
        make_node(NodeStatus::Outer);
        return false;
    }
    if (!e_m && !F_.copy(f).matched && ve == beta && vf == beta) {
        int u = pv;
        int Bu = top(u);
        int e2 = F_.adopt(F_.copy(e).rec, false);
        ensure_nodes();
        std::vector<int> k2{Bu, K}, r2{e, e2}, a2{u, beta}, b2{beta, u};
        if (F_.is_atom(Bu) && F_.d(u) <= deg_[u] - 2) {
            augment_cycle(k2, r2, a2, b2);
            return true;
        }
        attach(K, e, beta, u, tr);
        set_status(K, NodeStatus::Inner);
        snodes_.push_back(K);
        if (!tbm_->in_tree(beta)) t_leaf(u, beta);
        contract_outer(k2, r2, a2, b2, tau_[Bu]);
        return false;
    }
    // follow P_0 through the ring
    std::vector<int> order;
    std::vector<int> links;  // ring index between order[t] and order[t+1]
    const std::vector<int> kids = F_.at(K).kids;
    const std::vector<int> ring = F_.at(K).ring, ra = F_.at(K).ring_a, rb = F_.at(K).ring_b;
    const int k = static_cast<int>(kids.size());
    if (vf == beta) {
        int i = F_.copy_type(e) == F_.mtype(K) ? 0 : 1;
        auto p = F_.top_path(K, ve, i);
        order = p.kids;
        links = p.rings;
    } else {
        int i = F_.copy_type(f) == F_.mtype(K) ? 0 : 1;
        auto p = F_.top_path(K, vf, i);
        order.assign(p.kids.rbegin(), p.kids.rend());
        links.assign(p.rings.rbegin(), p.rings.rend());
    }
    std::vector<char> on(k, 0);
    for (int idx : order) on[idx] = 1;
    F_.dissolve(K);
    relabel_split(K, kids);
    for (size_t t = 0; t < order.size(); t++) {
        int Kt = kids[order[t]];
        int ein = e, vin = ve, pin = pv;
        if (t > 0) {
            int r = links[t - 1];
            bool a_here = order[t] == r;
            ein = ring[r];
            vin = a_here ? ra[r] : rb[r];
            pin = a_here ? rb[r] : ra[r];
        }
        int eout = f, vout = vf;
        if (t + 1 < order.size()) {
            int r = links[t];
            eout = ring[r];
            vout = order[t] == r ? ra[r] : rb[r];
        }
        if (expand_rec(Kt, ein, vin, pin, eout, vout, tr)) return true;
    }
    for (int idx = 0; idx < k; idx++) {
        if (on[idx]) continue;
        std::vector<int> parts;
        discard_unless_light_mature(kids[idx], &parts);
        for (int P : parts) leave_search(P);
    }
    return false;
}

}  // namespace wm
