#include "wm/multigraph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace wm {

const char* to_string(ProblemKind k) {
    switch (k) {
    case ProblemKind::Matching: return "matching";
    case ProblemKind::BMatch: return "bmatch";
    case ProblemKind::FFactor: return "ffactor";
    case ProblemKind::TJoin: return "tjoin";
    case ProblemKind::SSSP: return "sssp";
    }
    return "?";
}

Multigraph::Multigraph(int n, std::vector<EdgeRec> edges) : n_(n) {
    if (n < 0) throw std::invalid_argument("negative vertex count");
    for (size_t i = 0; i < edges.size(); ++i) {
        auto& e = edges[i];
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
            throw std::invalid_argument("edge endpoint out of range");
        if (e.mult != kUnbounded && e.mult < 1)
            throw std::invalid_argument("nonpositive multiplicity");
        e.orig = static_cast<int>(i);
    }
    // Parallel records grouped per endpoint pair, heaviest first.
    std::stable_sort(edges.begin(), edges.end(), [](const EdgeRec& a, const EdgeRec& b) {
        auto ka = std::minmax(a.u, a.v), kb = std::minmax(b.u, b.v);
        if (ka != kb) return ka < kb;
        return a.w > b.w;
    });
    edges_ = std::move(edges);
    inc_.assign(n, {});
    for (int i = 0; i < m(); ++i) {
        inc_[edges_[i].u].push_back(i);
        if (!edges_[i].loop()) inc_[edges_[i].v].push_back(i);
    }
}

int64_t Multigraph::max_weight() const {
    int64_t best = std::numeric_limits<int64_t>::min();
    for (auto& e : edges_) best = std::max(best, e.w);
    return edges_.empty() ? 0 : best;
}

bool Multigraph::has_unbounded() const {
    return std::any_of(edges_.begin(), edges_.end(), [](auto& e) { return e.unbounded(); });
}

ParseError::ParseError(int line, const std::string& msg)
    : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

int64_t to_int(std::string_view tok, int line) {
    int64_t v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw ParseError(line, "expected integer, got '" + std::string(tok) + "'");
    return v;
}

ProblemKind kind_from(std::string_view s, int line) {
    if (s == "matching") return ProblemKind::Matching;
    if (s == "bmatch") return ProblemKind::BMatch;
    if (s == "ffactor") return ProblemKind::FFactor;
    if (s == "tjoin") return ProblemKind::TJoin;
    if (s == "sssp") return ProblemKind::SSSP;
    throw ParseError(line, "unknown problem kind '" + std::string(s) + "'");
}

}  // namespace

Instance parse_instance(std::string_view text) {
    Instance inst;
    bool have_p = false;
    int n = 0;
    int64_t m_decl = 0;
    std::vector<EdgeRec> edges;
    std::vector<bool> is_terminal;
    int line_no = 0, last_line = 0;
    size_t pos = 0;
    auto vertex = [&](std::string_view tok, int line) {
        int64_t v = to_int(tok, line);
        if (v < 1 || v > n) throw ParseError(line, "vertex id " + std::string(tok) + " out of range");
        return static_cast<int>(v - 1);
    };
    while (pos <= text.size()) {
        size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        auto tok = split_ws(raw);
        if (tok.empty() || tok[0][0] == 'c' || tok[0][0] == '#') continue;
        last_line = line_no;
        char d = tok[0].size() == 1 ? tok[0][0] : '?';
        if (d == 'p') {
            if (have_p) throw ParseError(line_no, "duplicate problem line");
            if (tok.size() != 4) throw ParseError(line_no, "malformed problem line");
            inst.kind = kind_from(tok[1], line_no);
            int64_t nn = to_int(tok[2], line_no);
            m_decl = to_int(tok[3], line_no);
            if (nn < 0 || nn > (1 << 26) || m_decl < 0)
                throw ParseError(line_no, "bad instance size");
            n = static_cast<int>(nn);
            inst.deg.assign(n, 1);
            is_terminal.assign(n, false);
            have_p = true;
            continue;
        }
        if (!have_p) throw ParseError(line_no, "directive before problem line");
        switch (d) {
        case 'd': {
            if (tok.size() != 3) throw ParseError(line_no, "malformed degree line");
            int v = vertex(tok[1], line_no);
            int64_t k = to_int(tok[2], line_no);
            if (k < 0) throw ParseError(line_no, "negative degree bound");
            inst.deg[v] = k;
            break;
        }
        case 'e': {
            if (tok.size() != 4 && tok.size() != 5) throw ParseError(line_no, "malformed edge line");
            EdgeRec e;
            e.u = vertex(tok[1], line_no);
            e.v = vertex(tok[2], line_no);
            e.w = to_int(tok[3], line_no);
            if (e.w > kMaxAbsWeight || e.w < -kMaxAbsWeight)
                throw ParseError(line_no, "weight magnitude too large");
            if (tok.size() == 5) {
                if (tok[4] == "*") {
                    if (inst.kind != ProblemKind::BMatch)
                        throw ParseError(line_no, "unbounded multiplicity is only allowed for bmatch");
                    e.mult = kUnbounded;
                } else {
                    e.mult = to_int(tok[4], line_no);
                    if (e.mult < 1) throw ParseError(line_no, "nonpositive multiplicity");
                }
            }
            edges.push_back(e);
            break;
        }
        case 't': {
            if (tok.size() != 2) throw ParseError(line_no, "malformed terminal line");
            int v = vertex(tok[1], line_no);
            if (is_terminal[v]) throw ParseError(line_no, "duplicate terminal");
            is_terminal[v] = true;
            inst.terminals.push_back(v);
            break;
        }
        case 's': {
            if (tok.size() != 2) throw ParseError(line_no, "malformed source line");
            if (inst.source >= 0) throw ParseError(line_no, "duplicate source line");
            inst.source = vertex(tok[1], line_no);
            break;
        }
        default:
            throw ParseError(line_no, "unknown directive '" + std::string(tok[0]) + "'");
        }
    }
    if (!have_p) throw ParseError(line_no, "missing problem line");
    if (static_cast<int64_t>(edges.size()) != m_decl)
        throw ParseError(last_line, "edge count " + std::to_string(edges.size()) +
                                        " does not match declared " + std::to_string(m_decl));
    inst.g = Multigraph(n, std::move(edges));
    return inst;
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_instance(ss.str());
}

std::string serialize_instance(const Instance& inst) {
    std::ostringstream os;
    const auto& g = inst.g;
    os << "p " << to_string(inst.kind) << ' ' << g.n() << ' ' << g.m() << '\n';
    for (int v = 0; v < g.n(); ++v)
        if (inst.deg[v] != 1) os << "d " << v + 1 << ' ' << inst.deg[v] << '\n';
    for (auto& e : g.edges()) {
        os << "e " << e.u + 1 << ' ' << e.v + 1 << ' ' << e.w;
        if (e.unbounded()) os << " *";
        else if (e.mult != 1) os << ' ' << e.mult;
        os << '\n';
    }
    for (int t : inst.terminals) os << "t " << t + 1 << '\n';
    if (inst.source >= 0) os << "s " << inst.source + 1 << '\n';
    return os.str();
}

int64_t degree(const Multigraph& g, const MatchingVec& x, int v) {
    int64_t d = 0;
    for (int id : g.incident(v)) d += g.edge(id).loop() ? 2 * x[id] : x[id];
    return d;
}

int64_t matching_weight(const Multigraph& g, const MatchingVec& x) {
    int64_t s = 0;
    for (int i = 0; i < g.m(); ++i) s = checked_add(s, checked_mul(g.edge(i).w, x[i]));
    return s;
}

int64_t checked_add(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow");
    return r;
}

int64_t checked_mul(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow");
    return r;
}

}  // namespace wm
