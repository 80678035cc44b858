// Command line front end: solve, verify, reduce, oracle, bench.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "support/gen.hpp"
#include "support/tbm_trace.hpp"
#include "wm/reductions.hpp"

using namespace wm;

namespace {

constexpr int kSolved = 0, kError = 1, kInfeasible = 2;

struct Config {
    std::string instance;
    std::string cert_in;
    std::string problem;
    std::string objective = "max";
    std::string cert_out;
    std::string gsp_out;
    bool strong_poly = false;
    bool counters = false;
    bool trace = false;
    bool debug = false;
    bool cover = false;
    std::vector<int> paths;
    uint64_t seed = 1;
    int n = 1024;
    int m_per_n = 8;
    bool tbm = false;
};

ProblemKind kind_of(const std::string& s) {
    for (ProblemKind k : {ProblemKind::Matching, ProblemKind::BMatch, ProblemKind::FFactor, ProblemKind::TJoin,
                          ProblemKind::SSSP})
        if (s == to_string(k)) return k;
    throw std::invalid_argument("unknown problem kind " + s);
}

Instance load(const Config& c) {
    Instance inst = load_instance(c.instance);
    if (!c.problem.empty()) inst.kind = kind_of(c.problem);
    if (inst.kind == ProblemKind::Matching) inst.deg.assign(inst.g.n(), 1);
    if (inst.kind != ProblemKind::BMatch && inst.g.has_unbounded())
        throw std::invalid_argument("unbounded multiplicity is only allowed for bmatch");
    if (inst.kind == ProblemKind::SSSP && inst.source < 0) throw std::invalid_argument("sssp needs a source line");
    return inst;
}

// edge records back in file order, so that orig survives a rebuild
std::vector<EdgeRec> file_edges(const Multigraph& g) {
    std::vector<EdgeRec> es(g.m());
    for (const EdgeRec& e : g.edges()) es[e.orig] = e;
    return es;
}

Multigraph negated(const Multigraph& g) {
    std::vector<EdgeRec> es = file_edges(g);
    for (EdgeRec& e : es) e.w = -e.w;
    return Multigraph(g.n(), es);
}

std::string vertex_list(const std::vector<int>& vs) {
    std::string s;
    for (int v : vs) s += " " + std::to_string(v + 1);
    return s;
}

void print_x(const Multigraph& g, const MatchingVec& x) {
    MatchingVec fx(g.m(), 0);
    for (int i = 0; i < g.m(); i++) fx[g.edge(i).orig] = x[i];
    std::cout << "x";
    for (int i = 0; i < g.m(); i++)
        if (fx[i]) std::cout << ' ' << i + 1 << ':' << fx[i];
    std::cout << '\n';
}

void print_counters(const EngineCounters& k) {
    std::cout << "counter searches " << k.searches << '\n'
              << "counter augments " << k.augments << '\n'
              << "counter grows " << k.grows << '\n'
              << "counter blossoms " << k.blossoms << '\n'
              << "counter expands " << k.expands << '\n'
              << "counter dual_adjusts " << k.dual_adjusts << '\n'
              << "counter events " << k.events << '\n'
              << "counter stale_events " << k.stale_events << '\n'
              << "counter discards " << k.discards << '\n'
              << "counter invariant_checks " << k.invariant_checks << '\n'
              << "counter work " << k.work << '\n';
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text << '\n';
}

// h = degree in G, with every copy of every edge
DegreeFn cover_upper(const Instance& inst) {
    if (inst.g.has_unbounded()) throw std::invalid_argument("edge covers need finite multiplicities");
    MatchingVec all(inst.g.m());
    for (int i = 0; i < inst.g.m(); i++) all[i] = inst.g.edge(i).mult;
    DegreeFn hi(inst.g.n());
    for (int v = 0; v < inst.g.n(); v++) hi[v] = std::max(degree(inst.g, all, v), inst.deg[v]);
    return hi;
}

SolveOptions options(const Config& c) {
    SolveOptions o;
    o.debug = c.debug;
    if (c.trace) o.trace = &std::cerr;
    return o;
}

int solve_degree(const Config& c, const Instance& inst) {
    const bool min = c.objective == "min";
    const Mode kind = inst.kind == ProblemKind::FFactor ? Mode::F : Mode::B;
    SolveOptions opt = options(c);

    if (c.cover) {
        // minimum weight ℓ-edge cover with ℓ = the degree lines
        PlanResult r = solve_plan(inst.g, build_lh_reduction(inst.g, inst.deg, cover_upper(inst), Sense::Min), opt);
        std::cout << "problem cover\n";
        if (c.counters) print_counters(r.aux.counters);
        if (!r.feasible) {
            std::cout << "status infeasible\n";
            return kInfeasible;
        }
        std::cout << "status perfect\nweight " << r.weight << '\n';
        print_x(inst.g, r.x);
        return kSolved;
    }

    Multigraph g = min ? negated(inst.g) : inst.g;
    SolveResult r = c.strong_poly ? solve_strong_poly(g, inst.deg, kind, opt)
                    : kind == Mode::F ? solve_f_factor(g, inst.deg, opt)
                                      : solve_b_matching(g, inst.deg, opt);
    std::cout << "problem " << to_string(inst.kind) << '\n';
    if (c.counters) print_counters(r.counters);
    if (!r.perfect) {
        std::cout << "status deficient\n"
                  << "size " << r.size << '\n'
                  << "bound " << r.def.bound << '\n'
                  << "I" << vertex_list(r.def.inner) << '\n';
        if (r.mode == Mode::F) std::cout << "O" << vertex_list(r.def.outer) << '\n';
        for (const auto& C : r.def.components) std::cout << "C" << vertex_list(C) << '\n';
        return kInfeasible;
    }
    std::cout << "status perfect\n"
              << "weight " << (min ? -r.weight : r.weight) << '\n'
              << "size " << r.size << '\n';
    print_x(g, r.x);
    if (!c.cert_out.empty()) write_file(c.cert_out, certificate_to_json(to_file_order(g, r.cert)));
    return kSolved;
}

int solve_tjoin(const Config& c, const Instance& inst) {
    if (inst.terminals.size() % 2) {
        std::cout << "status infeasible\nreason odd number of terminals\n";
        return kInfeasible;
    }
    TJoinResult r = solve_t_join(inst.g, inst.terminals, options(c));
    if (c.counters) print_counters(r.aux.counters);
    std::cout << "status solved\ncost " << r.cost << "\nedges";
    std::vector<int> ids;
    for (int i : r.edges) ids.push_back(inst.g.edge(i).orig);
    std::sort(ids.begin(), ids.end());
    std::cout << vertex_list(ids) << '\n';
    return kSolved;
}

int solve_sssp(const Config& c, const Instance& inst) {
    GspStructure S;
    try {
        S = build_sssp(inst.g, inst.source, options(c));
    } catch (const NonConservative& e) {
        std::vector<int> ids;
        for (int i : e.edges) ids.push_back(inst.g.edge(i).orig);
        std::sort(ids.begin(), ids.end());
        std::cout << "status nonconservative\ncycle edges" << vertex_list(ids) << '\n';
        return kInfeasible;
    }
    if (c.counters) print_counters(S.counters);
    std::cout << "status solved\nsource " << inst.source + 1 << '\n';
    for (int v = 0; v < inst.g.n(); v++) std::cout << "d " << v + 1 << ' ' << S.d[v] << '\n';
    for (int v : c.paths) {
        if (v < 1 || v > inst.g.n()) throw std::invalid_argument("path vertex out of range");
        std::vector<int> ids;
        for (int i : query_shortest_path(S, v - 1)) ids.push_back(inst.g.edge(i).orig);
        std::cout << "path " << v << " edges" << vertex_list(ids) << '\n';
    }
    std::string js = gsp_to_json(inst.g, S);
    if (c.gsp_out.empty())
        std::cout << "gsp\n" << js << '\n';
    else
        write_file(c.gsp_out, js);
    return kSolved;
}

int cmd_solve(const Config& c) {
    Instance inst = load(c);
    if (c.objective != "max" && c.objective != "min") throw std::invalid_argument("objective is max or min");
    bool degree_kind = inst.kind == ProblemKind::Matching || inst.kind == ProblemKind::BMatch ||
                       inst.kind == ProblemKind::FFactor;
    if (!degree_kind && (c.strong_poly || c.cover || c.objective == "min" || !c.cert_out.empty()))
        throw std::invalid_argument("--strong-poly, --cover, --objective and --cert apply to matching, bmatch, ffactor");
    if (c.cover && c.strong_poly) throw std::invalid_argument("--cover and --strong-poly do not combine");
    if (degree_kind) return solve_degree(c, inst);
    if (inst.kind == ProblemKind::TJoin) return solve_tjoin(c, inst);
    return solve_sssp(c, inst);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int cmd_verify(const Config& c) {
    Instance inst = load(c);
    if (inst.kind == ProblemKind::TJoin || inst.kind == ProblemKind::SSSP)
        throw std::invalid_argument("certificates exist for matching, bmatch and ffactor");
    Multigraph g = c.objective == "min" ? negated(inst.g) : inst.g;
    Certificate cert = from_file_order(g, certificate_from_json(read_file(c.cert_in)));
    auto vio = verify_certificate(g, inst.deg, cert);
    if (!vio.empty()) {
        std::cout << "status invalid\n";
        for (const Violation& v : vio) std::cout << "violation " << v.rule << " at " << v.where << " amount " << v.amount << '\n';
        return kInfeasible;
    }
    int64_t w = matching_weight(g, cert.x);
    std::cout << "status valid\nweight " << (c.objective == "min" ? -w : w) << '\n';
    return kSolved;
}

int cmd_reduce(const Config& c) {
    Instance inst = load(c);
    ReductionPlan plan;
    if (inst.kind == ProblemKind::TJoin) {
        if (inst.terminals.size() % 2) throw std::invalid_argument("odd number of terminals");
        plan = build_tjoin_reduction(inst.g, inst.terminals);
    } else if (c.strong_poly && (inst.kind == ProblemKind::BMatch || inst.kind == ProblemKind::FFactor ||
                                 inst.kind == ProblemKind::Matching)) {
        Mode kind = inst.kind == ProblemKind::FFactor ? Mode::F : Mode::B;
        if (kind == Mode::B && needs_f_engine(inst.g, inst.deg)) kind = Mode::F;
        WarmStart ws = strong_poly_warm_start(inst.g, inst.deg, kind);
        std::cout << "c warm start, " << ws.transport_paths << " augmenting paths\n";
        MatchingVec fx(inst.g.m());
        for (int i = 0; i < inst.g.m(); i++) fx[inst.g.edge(i).orig] = ws.x[i];
        for (int i = 0; i < inst.g.m(); i++)
            if (fx[i]) std::cout << "x " << i + 1 << ' ' << fx[i] << '\n';
        for (int v = 0; v < inst.g.n(); v++) std::cout << "y " << v + 1 << ' ' << ws.y[v] << "/" << kDualScale << '\n';
        return kSolved;
    } else if (c.cover && (inst.kind == ProblemKind::BMatch || inst.kind == ProblemKind::FFactor)) {
        plan = build_lh_reduction(inst.g, inst.deg, cover_upper(inst), Sense::Min);
    } else {
        throw std::invalid_argument("reduce takes a tjoin instance, or bmatch/ffactor with --cover or --strong-poly");
    }
    Instance out;
    out.kind = ProblemKind::FFactor;
    out.g = plan.aux;
    out.deg = plan.deg;
    std::cout << serialize_instance(out);
    for (int i = 0; i < plan.aux.m(); i++)
        if (plan.back[i] >= 0) std::cout << "c back " << i + 1 << ' ' << inst.g.edge(plan.back[i]).orig + 1 << '\n';
    return kSolved;
}

int cmd_oracle(const Config& c) {
    Instance inst = load(c);
    const Multigraph& g = inst.g;
    switch (inst.kind) {
    case ProblemKind::Matching:
    case ProblemKind::BMatch:
    case ProblemKind::FFactor: {
        BruteResult r = inst.kind == ProblemKind::Matching ? brute_force_matching(g) : brute_force_degree(g, inst.deg);
        int64_t bound = inst.kind == ProblemKind::FFactor ? eval_min_max_f(g, inst.deg) : eval_min_max_b(g, inst.deg);
        std::cout << "minmax " << bound << '\n';
        if (inst.kind != ProblemKind::Matching) std::cout << "max_size " << r.max_size << '\n';
        if (!r.feasible) {
            std::cout << "status infeasible\n";
            return kInfeasible;
        }
        std::cout << "status perfect\nweight " << r.weight << '\n';
        print_x(g, r.x);
        return kSolved;
    }
    case ProblemKind::TJoin: {
        if (inst.terminals.size() % 2) {
            std::cout << "status infeasible\n";
            return kInfeasible;
        }
        std::vector<int> edges;
        int64_t cost = brute_force_tjoin(g, inst.terminals, &edges);
        std::vector<int> ids;
        for (int i : edges) ids.push_back(g.edge(i).orig);
        std::sort(ids.begin(), ids.end());
        std::cout << "status solved\ncost " << cost << "\nedges" << vertex_list(ids) << '\n';
        return kSolved;
    }
    case ProblemKind::SSSP: {
        auto d = brute_force_sssp(g, inst.source);
        std::cout << "status solved\nsource " << inst.source + 1 << '\n';
        for (int v = 0; v < g.n(); v++) {
            std::cout << "d " << v + 1 << ' ';
            if (d[v] >= kInfDist) std::cout << "inf\n";
            else std::cout << d[v] << '\n';
        }
        return kSolved;
    }
    }
    return kError;
}

int cmd_bench(const Config& c) {
    if (c.n < 2) throw std::invalid_argument("--n must be at least 2");
    const double nlog = c.n * std::log2(static_cast<double>(c.n));
    if (c.tbm) {
        TbmCounters k = wmtest::run_scaling_trace(c.n, c.m_per_n, c.seed);
        std::cout << "n " << c.n << "\nmake_edge " << k.make_edges << "\ncharged " << k.charged_units << "\nratio "
                  << static_cast<double>(k.charged_units) / (static_cast<double>(k.make_edges) + nlog) << '\n';
        return kSolved;
    }
    gen::Rng rng(c.seed);
    Multigraph g = gen::multigraph(rng, c.n, c.m_per_n * c.n, -100, 100, 1, 1, 0.0);
    SolveOptions opt = options(c);
    SolveResult r = solve_matching(g, opt);
    int64_t per = r.counters.searches ? r.counters.work / r.counters.searches : 0;
    std::cout << "n " << c.n << "\nm " << g.m() << "\nperfect " << (r.perfect ? 1 : 0) << "\nweight " << r.weight
              << '\n';
    print_counters(r.counters);
    std::cout << "work_per_search " << per << "\nratio "
              << static_cast<double>(per) / (static_cast<double>(g.m()) + nlog) << '\n';
    return kSolved;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted matching, b-matching and f-factor solver"};
    app.require_subcommand(1);
    Config c;

    auto common = [&](CLI::App* s) {
        s->add_option("--problem", c.problem, "override the problem line: matching|bmatch|ffactor|tjoin|sssp");
        s->add_option("--objective", c.objective, "max or min")->check(CLI::IsMember({"max", "min"}));
    };

    auto* solve = app.add_subcommand("solve", "solve an instance file");
    common(solve);
    solve->add_option("instance", c.instance, "instance file")->required();
    solve->add_flag("--strong-poly", c.strong_poly, "warm start from the bipartite double cover");
    solve->add_flag("--counters", c.counters, "print work counters");
    solve->add_flag("--trace", c.trace, "step trace on standard error");
    solve->add_flag("--debug", c.debug, "check invariants after every step");
    solve->add_flag("--cover", c.cover, "minimum weight edge cover with the degree lines as lower bounds");
    solve->add_option("--cert", c.cert_out, "write the optimality certificate here");
    solve->add_option("--gsp", c.gsp_out, "sssp: write the path structure here instead of standard output");
    solve->add_option("--path", c.paths, "sssp: print a shortest path to this vertex");

    auto* verify = app.add_subcommand("verify", "check a certificate against an instance");
    common(verify);
    verify->add_option("certificate", c.cert_in, "certificate file")->required();
    verify->add_option("instance", c.instance, "instance file")->required();

    auto* reduce = app.add_subcommand("reduce", "print the auxiliary f-factor instance of a reduction");
    common(reduce);
    reduce->add_option("instance", c.instance, "instance file")->required();
    reduce->add_flag("--cover", c.cover, "edge cover reduction");
    reduce->add_flag("--strong-poly", c.strong_poly, "print the warm start instead");

    auto* oracle = app.add_subcommand("oracle", "exhaustive reference answer for a small instance");
    common(oracle);
    oracle->add_option("instance", c.instance, "instance file")->required();

    auto* bench = app.add_subcommand("bench", "counters on a random instance");
    bench->add_option("--n", c.n, "vertices");
    bench->add_option("--m-per-n", c.m_per_n, "edges per vertex");
    bench->add_option("--seed", c.seed, "random seed");
    bench->add_flag("--tbm", c.tbm, "tree-merge trace instead of a matching solve");
    bench->add_flag("--debug", c.debug, "check invariants after every step");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kError;
    }
    try {
        if (*solve) return cmd_solve(c);
        if (*verify) return cmd_verify(c);
        if (*reduce) return cmd_reduce(c);
        if (*oracle) return cmd_oracle(c);
        return cmd_bench(c);
    } catch (const ParseError& e) {
        std::cerr << c.instance << ": " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return kError;
}
