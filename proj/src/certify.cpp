#include "wm/certify.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace wm {

int64_t copy_cap(const Multigraph& g, const DegreeFn& deg, int edge) {
    const EdgeRec& e = g.edge(edge);
    int64_t lim = e.loop() ? deg[e.u] / 2 : std::min(deg[e.u], deg[e.v]);
    return e.unbounded() ? lim : std::min(e.mult, lim);
}

namespace {

std::string edge_name(const Multigraph& g, int i) {
    const EdgeRec& e = g.edge(i);
    return "edge " + std::to_string(i) + " (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")";
}

}  // namespace

std::vector<Violation> verify_certificate(const Multigraph& g, const DegreeFn& deg, const Certificate& c) {
    std::vector<Violation> out;
    auto bad = [&](std::string rule, std::string where, int64_t amount = 0) {
        out.push_back({std::move(rule), std::move(where), amount});
    };
    const int n = g.n(), m = g.m();
    if (static_cast<int>(c.x.size()) != m || static_cast<int>(c.y.size()) != n ||
        static_cast<int>(deg.size()) != n || c.scale <= 0) {
        bad("shape", "certificate does not match the instance");
        return out;
    }
    const bool fmode = c.mode == Mode::F;
    // cap < 0 means no limit
    std::vector<int64_t> cap(m);
    for (int i = 0; i < m; i++) {
        const EdgeRec& e = g.edge(i);
        cap[i] = e.unbounded() ? (fmode ? copy_cap(g, deg, i) : -1) : e.mult;
        if (c.x[i] < 0 || (cap[i] >= 0 && c.x[i] > cap[i])) bad("multiplicity", edge_name(g, i), c.x[i]);
    }
    for (int v = 0; v < n; v++) {
        int64_t d = degree(g, c.x, v);
        if (d != deg[v]) bad("degree", "vertex " + std::to_string(v), d - deg[v]);
    }
    for (size_t k = 0; k < c.copies.size(); k++)
        if (c.copies[k].edge < 0 || c.copies[k].edge >= m) {
            bad("copy", "copy " + std::to_string(k) + " names no edge");
            return out;
        }

    // laminar family: process largest first, each blossom must sit inside one owner
    const int nb = static_cast<int>(c.blossoms.size());
    std::vector<int> order(nb), parent(nb, -1), owner(n, -1);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return c.blossoms[a].vertices.size() > c.blossoms[b].vertices.size();
    });
    std::vector<char> seen(n, 0);
    for (int b : order) {
        const CertBlossom& B = c.blossoms[b];
        std::string nm = "blossom " + std::to_string(b);
        if (B.vertices.empty()) {
            bad("blossom", nm + " is empty");
            return out;
        }
        for (int v : B.vertices)
            if (v < 0 || v >= n || seen[v]) {
                bad("blossom", nm + " has an invalid or repeated vertex");
                return out;
            } else {
                seen[v] = 1;
            }
        for (int v : B.vertices) seen[v] = 0;
        int own = owner[B.vertices[0]];
        for (int v : B.vertices)
            if (owner[v] != own) {
                bad("laminar", nm + " crosses another blossom");
                return out;
            }
        parent[b] = own;
        for (int v : B.vertices) owner[v] = b;
        if (std::find(B.vertices.begin(), B.vertices.end(), B.base) == B.vertices.end())
            bad("blossom", nm + " base outside the blossom");
        if (B.z < 0) bad("nonnegativity", nm, B.z);
        if (B.eta >= static_cast<int>(c.copies.size())) bad("blossom", nm + " base edge names no copy");
    }
    // owner[v] is now the smallest blossom containing v

    // distinguished copies per edge
    std::vector<int64_t> dm(m, 0), du(m, 0);
    for (const CertCopy& k : c.copies) (k.matched ? dm : du)[k.edge]++;
    for (int i = 0; i < m; i++) {
        if (dm[i] > c.x[i]) bad("copy", edge_name(g, i) + " has more named matched copies than x", dm[i] - c.x[i]);
        if (cap[i] >= 0 && du[i] > cap[i] - c.x[i])
            bad("copy", edge_name(g, i) + " has more named unmatched copies than remain", du[i]);
    }

    // I(B) = δ(B,M) ⊕ η(B)
    std::vector<std::map<std::pair<int, bool>, int64_t>> Iset(nb);
    std::vector<int64_t> gam(nb, 0), fB(nb, 0);
    for (int b = 0; b < nb; b++) {
        const CertBlossom& B = c.blossoms[b];
        for (int v : B.vertices) fB[b] += deg[v];
        std::vector<char> mark(n, 0);
        for (int v : B.vertices) mark[v] = 1;
        for (int v : B.vertices)
            for (int i : g.incident(v)) {
                const EdgeRec& e = g.edge(i);
                int w = e.other(v);
                if (mark[w]) {
                    if (e.loop() || v < w) gam[b] += c.x[i];
                } else if (c.x[i] > 0) {
                    Iset[b][{i, true}] += c.x[i];
                }
            }
        if (B.eta >= 0 && B.eta < static_cast<int>(c.copies.size())) {
            const CertCopy& k = c.copies[B.eta];
            const EdgeRec& e = g.edge(k.edge);
            bool ends_ok = (e.u == B.base && !mark[e.v]) || (e.v == B.base && !mark[e.u]);
            if (!ends_ok) bad("base edge", "blossom " + std::to_string(b) + " base edge does not leave its base");
            auto& slot = Iset[b][{k.edge, k.matched}];
            slot += k.matched ? -1 : 1;
        }
        for (auto it = Iset[b].begin(); it != Iset[b].end();)
            it = it->second == 0 ? Iset[b].erase(it) : std::next(it);
        if (!fmode) continue;
        std::map<std::pair<int, bool>, int64_t> given;
        for (const CertIEntry& t : B.I)
            if (t.count != 0) given[{t.edge, t.matched}] += t.count;
        if (given != Iset[b]) bad("I(B)", "blossom " + std::to_string(b) + " I set differs from δ(B,M)⊕η(B)");
    }

    // dual feasibility / complementary slackness per copy class
    auto hyz = [&](int i, int copy, bool matched) {
        const EdgeRec& e = g.edge(i);
        int64_t h = c.y[e.u] + c.y[e.v];
        std::vector<int> cu, cv;
        for (int a = owner[e.u]; a >= 0; a = parent[a]) cu.push_back(a);
        for (int a = owner[e.v]; a >= 0; a = parent[a]) cv.push_back(a);
        for (int a : cu) {
            bool both = std::find(cv.begin(), cv.end(), a) != cv.end();
            if (both) {
                h += c.blossoms[a].z;
            } else if (fmode) {
                bool is_eta = copy >= 0 && c.blossoms[a].eta == copy;
                if (matched != is_eta) h += c.blossoms[a].z;
            }
        }
        if (fmode)
            for (int a : cv) {
                if (std::find(cu.begin(), cu.end(), a) != cu.end()) continue;
                bool is_eta = copy >= 0 && c.blossoms[a].eta == copy;
                if (matched != is_eta) h += c.blossoms[a].z;
            }
        return h;
    };
    auto check = [&](int i, int copy, bool matched) {
        int64_t W = c.scale * g.edge(i).w;
        int64_t h = hyz(i, copy, matched);
        std::string nm = edge_name(g, i) + (copy >= 0 ? " copy " + std::to_string(copy) : std::string());
        if (!matched && h < W) bad("dominated", nm + " unmatched but underrated", W - h);
        if (matched && fmode && h > W) bad("underrated", nm + " matched but dominated", h - W);
        if (matched && !fmode && h != W) bad("tight", nm + " matched but not tight", h - W);
    };
    for (int i = 0; i < m; i++) {
        if (c.x[i] - dm[i] > 0) check(i, -1, true);
        if (cap[i] < 0 || cap[i] - c.x[i] - du[i] > 0) check(i, -1, false);
    }
    for (size_t k = 0; k < c.copies.size(); k++) check(c.copies[k].edge, static_cast<int>(k), c.copies[k].matched);

    // positive blossoms are tight
    for (int b = 0; b < nb; b++) {
        if (c.blossoms[b].z <= 0) continue;
        int64_t lhs = 2 * gam[b], rhs = fB[b] - 1;
        if (fmode) {
            int64_t isz = 0, im = 0;
            for (auto& [key, cnt] : Iset[b]) {
                isz += cnt;
                if (key.second) im += cnt;
            }
            lhs += 2 * im;
            rhs += isz;
        }
        if (lhs != rhs) bad("blossom tightness", "blossom " + std::to_string(b), lhs - rhs);
    }
    return out;
}

std::string certificate_to_json(const Certificate& c) {
    using nlohmann::json;
    json j;
    j["mode"] = c.mode == Mode::F ? "f" : "b";
    j["scale"] = c.scale;
    j["x"] = c.x;
    j["y"] = c.y;
    j["copies"] = json::array();
    for (const CertCopy& k : c.copies) j["copies"].push_back({{"edge", k.edge}, {"matched", k.matched}});
    j["blossoms"] = json::array();
    for (const CertBlossom& B : c.blossoms) {
        json jb;
        jb["vertices"] = B.vertices;
        jb["base"] = B.base;
        jb["eta"] = B.eta >= 0 ? json(B.eta) : json(nullptr);
        jb["z"] = B.z;
        if (c.mode == Mode::F) {
            jb["I"] = json::array();
            for (const CertIEntry& t : B.I)
                jb["I"].push_back({{"edge", t.edge}, {"matched", t.matched}, {"count", t.count}});
        }
        j["blossoms"].push_back(std::move(jb));
    }
    return j.dump(1);
}

namespace {

Certificate remap_edges(const Certificate& c, const std::vector<int>& to, int m) {
    if (static_cast<int>(c.x.size()) != m) throw std::invalid_argument("certificate has the wrong number of edges");
    auto at = [&](int i) {
        if (i < 0 || i >= m) throw std::invalid_argument("certificate edge index out of range");
        return to[i];
    };
    Certificate r = c;
    for (int i = 0; i < m; i++) r.x[to[i]] = c.x[i];
    for (CertCopy& k : r.copies) k.edge = at(k.edge);
    for (CertBlossom& B : r.blossoms)
        for (CertIEntry& t : B.I) t.edge = at(t.edge);
    return r;
}

}  // namespace

Certificate to_file_order(const Multigraph& g, const Certificate& c) {
    std::vector<int> to(g.m());
    for (int i = 0; i < g.m(); i++) to[i] = g.edge(i).orig;
    return remap_edges(c, to, g.m());
}

Certificate from_file_order(const Multigraph& g, const Certificate& c) {
    std::vector<int> to(g.m());
    for (int i = 0; i < g.m(); i++) to[g.edge(i).orig] = i;
    return remap_edges(c, to, g.m());
}

Certificate certificate_from_json(const std::string& text) {
    using nlohmann::json;
    Certificate c;
    try {
        json j = json::parse(text);
        std::string mode = j.at("mode").get<std::string>();
        if (mode != "b" && mode != "f") throw std::invalid_argument("mode must be \"b\" or \"f\"");
        c.mode = mode == "f" ? Mode::F : Mode::B;
        c.scale = j.at("scale").get<int64_t>();
        c.x = j.at("x").get<MatchingVec>();
        c.y = j.at("y").get<std::vector<int64_t>>();
        for (const json& k : j.at("copies")) c.copies.push_back({k.at("edge").get<int>(), k.at("matched").get<bool>()});
        for (const json& jb : j.at("blossoms")) {
            CertBlossom B;
            B.vertices = jb.at("vertices").get<std::vector<int>>();
            B.base = jb.at("base").get<int>();
            B.eta = jb.at("eta").is_null() ? -1 : jb.at("eta").get<int>();
            B.z = jb.at("z").get<int64_t>();
            if (jb.contains("I"))
                for (const json& t : jb.at("I"))
                    B.I.push_back({t.at("edge").get<int>(), t.at("matched").get<bool>(), t.at("count").get<int64_t>()});
            c.blossoms.push_back(std::move(B));
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed certificate: ") + e.what());
    }
    return c;
}

}  // namespace wm
