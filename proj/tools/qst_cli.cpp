#include "qst.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::json;

namespace {

struct Failure {
    qst_status status;
    std::string message;
};

void check(qst_status s) {
    if (s != QST_OK) throw Failure{s, qst_last_error()};
}

void invalid(const std::string& message) { throw Failure{QST_VALIDATION_ERROR, message}; }

struct Text {
    char* p = nullptr;
    ~Text() { qst_string_free(p); }
    char** out() { return &p; }
    std::string str() const { return p ? p : ""; }
    json parsed() const { return json::parse(str()); }
};

struct QuiverDel {
    void operator()(qst_quiver* q) const { qst_quiver_free(q); }
};
struct NetworksDel {
    void operator()(qst_networks* n) const { qst_networks_free(n); }
};
struct RepDel {
    void operator()(qst_rep* r) const { qst_rep_free(r); }
};
using QuiverPtr = std::unique_ptr<qst_quiver, QuiverDel>;
using NetworksPtr = std::unique_ptr<qst_networks, NetworksDel>;
using RepPtr = std::unique_ptr<qst_rep, RepDel>;

std::string fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

struct Options {
    std::string quiver;
    std::string lattice;
    std::string out;
    std::string route = "matrix";
    std::string f = "x^2";
    std::uint64_t seed = 1;
    int threads = 1;
    int N = 1;
    std::size_t samples = 1000;
    std::size_t index = 0;
    double lambda = 1.0;
    double a = 0.0;
    double tau = 0.0;
    int limit = -1;
    bool full_matrix_only = false;
    bool all_networks = false;
};

// Input document after resolving --quiver / --lattice.
struct Input {
    std::string text;
    json doc;
    bool is_json = false;
};

std::string read_stream(std::istream& in) {
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string lattice_spec(const Options& o) {
    std::string spec = "torus:" + o.lattice;
    std::ostringstream extra;
    extra << std::setprecision(17);
    if (o.a > 0.0) extra << ",a=" << o.a;
    if (o.tau != 0.0) extra << ",tau=" << o.tau << ",self_loops=1";
    return spec + extra.str();
}

Input resolve_input(const Options& o) {
    Input in;
    if (!o.lattice.empty()) {
        if (!o.quiver.empty()) invalid("use either --quiver or --lattice");
        in.text = lattice_spec(o);
        return in;
    }
    std::string src = o.quiver.empty() ? "-" : o.quiver;
    if (src == "-") {
        in.text = read_stream(std::cin);
    } else if (std::ifstream file(src); file) {
        in.text = read_stream(file);
    } else {
        in.text = src;
        return in;
    }
    try {
        in.doc = json::parse(in.text);
    } catch (const json::exception& e) {
        invalid(std::string("input is not valid JSON: ") + e.what());
    }
    in.is_json = true;
    return in;
}

QuiverPtr load_quiver(const Input& in) {
    qst_quiver* q = nullptr;
    if (!in.is_json) {
        check(qst_quiver_from_spec(in.text.c_str(), &q));
    } else {
        const json& j = in.doc.contains("quiver") ? in.doc.at("quiver") : in.doc;
        check(qst_quiver_from_json(j.dump().c_str(), &q));
    }
    return QuiverPtr(q);
}

// Lattice quivers default to the full matrix network A_v = M_N.
int full_matrix(const qst_quiver* q, const Options& o) {
    if (o.full_matrix_only && o.all_networks) invalid("--full-matrix-only conflicts with --all-networks");
    if (o.full_matrix_only) return 1;
    if (o.all_networks) return 0;
    Text t;
    check(qst_quiver_to_json(q, t.out()));
    return t.parsed().contains("lattice") ? 1 : 0;
}

NetworksPtr enumerate(const qst_quiver* q, const Options& o) {
    qst_networks* n = nullptr;
    check(qst_networks_enumerate(q, o.N, full_matrix(q, o), 0, &n));
    return NetworksPtr(n);
}

// A representation from the input: either given directly, or sampled with --seed
// from the networks listed in the input or enumerated for -N.
RepPtr load_rep(const Input& in, const Options& o) {
    qst_rep* r = nullptr;
    if (in.is_json && in.doc.contains("L")) {
        check(qst_rep_from_json(in.text.c_str(), &r));
        return RepPtr(r);
    }
    auto q = load_quiver(in);
    NetworksPtr nets;
    if (in.is_json && in.doc.contains("networks")) {
        qst_networks* n = nullptr;
        check(qst_networks_from_json(in.text.c_str(), &n));
        nets.reset(n);
    } else {
        nets = enumerate(q.get(), o);
    }
    if (qst_networks_size(nets.get()) == 0) invalid("no Bratteli network of dimension " + std::to_string(o.N));
    check(qst_rep_random(q.get(), nets.get(), o.index, o.seed, &r));
    return RepPtr(r);
}

qst_route parse_route(const std::string& s) {
    if (s == "matrix") return QST_ROUTE_MATRIX;
    if (s == "paths") return QST_ROUTE_PATHS;
    if (s == "closed-form") return QST_ROUTE_CLOSED_FORM;
    if (s == "insertion") return QST_ROUTE_INSERTION;
    invalid("unknown route: " + s);
    return QST_ROUTE_MATRIX;
}

void emit(json j, const Options& o, const Input& in, const std::string& command) {
    j["run"] = {{"command", command}, {"version", qst_version()}, {"seed", o.seed}, {"input_hash", fnv1a(in.text)}};
    std::cout << j.dump(2) << "\n";
}

void require_json_out(const Options& o) {
    if (o.out != "json") invalid("this command only writes JSON");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, sep);)
        if (!item.empty()) parts.push_back(item);
    return parts;
}

void print_list(const std::vector<std::string>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) std::cout << (i ? "," : "") << values[i];
    std::cout << "\n";
}

double rel_err(double x, double y) { return std::abs(x - y) / (1.0 + std::abs(x)); }

void run_lattice(const Options& o) {
    require_json_out(o);
    auto in = resolve_input(o);
    auto q = load_quiver(in);
    Text t;
    check(qst_quiver_to_json(q.get(), t.out()));
    emit(t.parsed(), o, in, "lattice");
}

void run_networks(const Options& o, bool count_only) {
    auto in = resolve_input(o);
    auto q = load_quiver(in);
    if (count_only) {
        Text c;
        check(qst_networks_count(q.get(), o.N, full_matrix(q.get(), o), c.out()));
        if (o.out == "csv") {
            std::cout << c.str() << "\n";
            return;
        }
        emit({{"N", o.N}, {"count", c.str()}}, o, in, "networks");
        return;
    }
    auto nets = enumerate(q.get(), o);
    Text t;
    check(qst_networks_to_json(q.get(), nets.get(), o.N, t.out()));
    json j = t.parsed();
    if (o.out == "csv") {
        std::cout << "index,rep_space_dimension,gauge_group_dimension\n";
        std::size_t i = 0;
        for (const auto& n : j.at("networks"))
            std::cout << i++ << "," << n.at("rep_space").at("real_dimension") << ","
                      << n.at("gauge_group").at("real_dimension") << "\n";
        return;
    }
    emit(j, o, in, "networks");
}

void run_repr(const Options& o) {
    require_json_out(o);
    auto in = resolve_input(o);
    auto rep = load_rep(in, o);
    Text t;
    check(qst_rep_to_json(rep.get(), t.out()));
    emit(t.parsed(), o, in, "repr");
}

void run_action(const Options& o, int k, bool compare, bool spectrum) {
    auto in = resolve_input(o);
    auto rep = load_rep(in, o);
    if (spectrum) {
        std::size_t n = 0;
        check(qst_dirac_spectrum(rep.get(), nullptr, 0, &n));
        std::vector<double> ev(n);
        check(qst_dirac_spectrum(rep.get(), ev.data(), n, &n));
        if (o.out == "csv") {
            std::cout << "index,eigenvalue\n" << std::setprecision(17);
            for (std::size_t i = 0; i < n; ++i) std::cout << i << "," << ev[i] << "\n";
            return;
        }
        emit({{"spectrum", ev}}, o, in, "action");
        return;
    }
    require_json_out(o);
    const qst_route route = parse_route(o.route);
    if (k >= 0) {
        double dense = 0.0, other = 0.0;
        check(qst_trace_power(rep.get(), k, QST_ROUTE_MATRIX, o.limit, &dense));
        if (compare || route != QST_ROUTE_MATRIX) {
            const qst_route second = route == QST_ROUTE_MATRIX ? QST_ROUTE_PATHS : route;
            check(qst_trace_power(rep.get(), k, second, o.limit, &other));
            const char* key = second == QST_ROUTE_PATHS       ? "trace_paths"
                              : second == QST_ROUTE_INSERTION ? "trace_insertion"
                                                              : "trace_closed_form";
            json j = {{"k", k}, {"trace_matrix", dense}, {key, other}, {"rel_err", rel_err(dense, other)}};
            if (second == QST_ROUTE_CLOSED_FORM) {
                Text t;
                check(qst_closed_form_json(rep.get(), k, t.out()));
                j["closed_form"] = t.parsed();
            }
            emit(j, o, in, "action");
        } else {
            emit({{"k", k}, {"trace_matrix", dense}}, o, in, "action");
        }
        return;
    }
    double value = 0.0;
    check(qst_spectral_action(rep.get(), o.f.c_str(), o.lambda, route, o.limit, &value));
    json j = {{"f", o.f}, {"lambda", o.lambda}, {"route", o.route}, {"action", value}};
    if (compare && route != QST_ROUTE_MATRIX) {
        double dense = 0.0;
        check(qst_spectral_action(rep.get(), o.f.c_str(), o.lambda, QST_ROUTE_MATRIX, o.limit, &dense));
        j["action_matrix"] = dense;
        j["rel_err"] = rel_err(dense, value);
    }
    if (route == QST_ROUTE_CLOSED_FORM) {
        Text t;
        check(qst_spectral_action_closed_form_json(rep.get(), o.f.c_str(), 1.0 / o.lambda, t.out()));
        j["closed_form"] = t.parsed();
    }
    emit(j, o, in, "action");
}

void run_d6(const Options& o, int census_d) {
    require_json_out(o);
    if (census_d > 0) {
        Text t;
        check(qst_d6_census_json(census_d, t.out()));
        emit(t.parsed(), o, Input{"d=" + std::to_string(census_d), {}, false}, "d6");
        return;
    }
    auto in = resolve_input(o);
    auto rep = load_rep(in, o);
    Text t;
    check(qst_d6_json(rep.get(), t.out()));
    emit(t.parsed(), o, in, "d6");
}

struct CountArgs {
    bool hz = false, loops = false, walks = false, bounds = false, self_looped = false;
    int d = 2, k = 6, m = 0, n = 3, lambda_loops = -1, nu = 1;
};

void run_count(const Options& o, const CountArgs& c) {
    if (c.hz + c.loops + c.walks + c.bounds != 1) invalid("choose one of --hz, --loops, --walks, --bounds");
    if (c.k < 0) invalid("-k must be non-negative");
    std::vector<std::string> values;
    std::string label;
    Input in{"count", {}, false};
    json extra;
    if (c.hz) {
        label = "coordination";
        for (int k = 0; k <= c.k; ++k) {
            Text t;
            check(qst_coordination(c.d, k, t.out()));
            values.push_back(t.str());
        }
        if (c.m > 0) {
            std::vector<long long> bfs(c.k + 1);
            check(qst_coordination_bfs(c.d, c.m, c.k, bfs.data()));
            std::vector<std::string> b;
            for (auto x : bfs) b.push_back(std::to_string(x));
            if (b != values) invalid("breadth-first sphere sizes disagree with the generating function");
            extra["bfs_m"] = c.m;
        }
    } else if (c.loops) {
        label = "loop_count";
        for (int k = 0; k <= c.k; ++k) {
            Text t;
            check(qst_loop_count_lattice(c.d, k, t.out()));
            values.push_back(t.str());
        }
    } else if (c.walks) {
        label = "closed_walks";
        qst_walk_kind kind = QST_WALKS_COMPLETE;
        if (c.lambda_loops >= 0) kind = QST_WALKS_UNIFORM;
        else if (c.self_looped) kind = QST_WALKS_COMPLETE_SELF_LOOPED;
        for (int l = 1; l <= c.k; ++l) {
            Text t;
            check(qst_closed_walks(kind, c.n, std::max(c.lambda_loops, 0), c.nu, l, t.out()));
            values.push_back(t.str());
        }
    } else {
        in = resolve_input(o);
        auto q = load_quiver(in);
        json rows = json::array();
        for (int l = 1; l <= c.k; ++l) {
            Text t;
            check(qst_closed_walk_bounds_json(q.get(), l, t.out()));
            rows.push_back(t.parsed());
        }
        if (o.out == "csv") {
            std::cout << "l,exact,bound_with_loops,bound_uniform\n";
            for (const auto& r : rows)
                std::cout << r.at("l") << "," << r.at("exact").get<std::string>() << ","
                          << r.at("bound_with_loops").get<std::string>() << ","
                          << r.at("bound_uniform").get<std::string>() << "\n";
            return;
        }
        emit({{"bounds", rows}}, o, in, "count");
        return;
    }
    if (o.out == "csv") {
        print_list(values);
        return;
    }
    json j = {{label, values}, {"d", c.d}, {"k", c.k}};
    j.update(extra);
    emit(j, o, in, "count");
}

void run_mc(const Options& o, const std::string& wilson, bool weighted) {
    auto in = resolve_input(o);
    auto q = load_quiver(in);
    Text t;
    if (wilson.empty()) {
        check(qst_mc_partition_json(q.get(), o.N, o.f.c_str(), o.lambda, o.samples, o.seed, o.threads,
                                    full_matrix(q.get(), o), t.out()));
    } else {
        std::vector<int> loop;
        try {
            for (const auto& s : split(wilson, ',')) loop.push_back(std::stoi(s));
        } catch (const std::exception&) {
            invalid("--wilson expects comma-separated edge ids");
        }
        check(qst_mc_wilson_json(q.get(), o.N, loop.data(), loop.size(), o.f.c_str(), o.lambda, weighted, o.samples,
                                 o.seed, o.threads, full_matrix(q.get(), o), t.out()));
    }
    json j = t.parsed();
    if (o.out == "csv") {
        std::cout << "network,mean,std_error,samples\n" << std::setprecision(17);
        std::size_t i = 0;
        for (const auto& p : j.at("per_network"))
            std::cout << i++ << "," << p.at("mean") << "," << p.at("std_error") << "," << p.at("samples") << "\n";
        return;
    }
    emit(j, o, in, "mc");
}

void run_verify(const Options& o, int max_k) {
    require_json_out(o);
    auto in = resolve_input(o);
    auto rep = load_rep(in, o);
    Text t;
    check(qst_verify_json(rep.get(), o.seed, max_k, t.out()));
    json j = t.parsed();
    emit(j, o, in, "verify");
    if (!j.at("pass").get<bool>()) throw Failure{QST_VALIDATION_ERROR, "invariant suite failed"};
}

void run_gauge(const Options& o, std::uint64_t gauge_seed, bool emit_rep) {
    require_json_out(o);
    auto in = resolve_input(o);
    auto rep = load_rep(in, o);
    qst_rep* g = nullptr;
    check(qst_rep_gauge_random(rep.get(), gauge_seed, &g));
    RepPtr moved(g);
    const qst_route route = parse_route(o.route);
    double before = 0.0, after = 0.0;
    check(qst_spectral_action(rep.get(), o.f.c_str(), o.lambda, route, o.limit, &before));
    check(qst_spectral_action(moved.get(), o.f.c_str(), o.lambda, route, o.limit, &after));
    json j = {{"f", o.f},
              {"lambda", o.lambda},
              {"gauge_seed", gauge_seed},
              {"action_before", before},
              {"action_after", after},
              {"rel_diff", std::abs(before - after) / std::max(1.0, std::abs(before))}};
    if (emit_rep) {
        Text t;
        check(qst_rep_to_json(moved.get(), t.out()));
        j["representation"] = t.parsed();
    }
    emit(j, o, in, "gauge");
}

void run_curvature(const Options& o, int d, int m, const std::vector<double>& spacings) {
    json rows = json::array();
    for (double a : spacings) {
        Text t;
        check(qst_curvature_json(d, m, o.N, a, o.seed, t.out()));
        rows.push_back(t.parsed());
    }
    if (o.out == "csv") {
        std::cout << "a,max_residual,plaquettes\n" << std::setprecision(17);
        for (const auto& r : rows) std::cout << r.at("a") << "," << r.at("max_residual") << "," << r.at("plaquettes") << "\n";
        return;
    }
    emit({{"d", d}, {"m", m}, {"N", o.N}, {"results", rows}}, o, Input{"curvature", {}, false}, "curvature");
}

int fail(qst_status status, const std::string& message) {
    std::cerr << json{{"error", status == QST_RESOURCE_ERROR ? "resource" : status == QST_VALIDATION_ERROR ? "validation"
                                                                                                             : "internal"},
                      {"message", message},
                      {"version", qst_version()}}
                     .dump()
              << "\n";
    return status == QST_RESOURCE_ERROR ? 2 : status == QST_VALIDATION_ERROR ? 1 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quiver representations on finite prespectral triples"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(qst_version()));
    Options o;

    auto input_flags = [&](CLI::App* sub) {
        sub->add_option("--quiver", o.quiver, "Quiver spec, JSON file, or - for stdin");
        sub->add_option("--lattice", o.lattice, "Lattice spec d=..,m=..[,self_loops=1]");
        sub->add_option("--a", o.a, "Lattice spacing");
        sub->add_option("--tau", o.tau, "Self-loop scale; adds decoration loops");
        sub->add_option("-N", o.N, "Hilbert space dimension per vertex");
        sub->add_option("--seed", o.seed, "Random seed");
        sub->add_option("--out", o.out, "Output format")->check(CLI::IsMember({"json", "csv"}));
        sub->add_flag("--full-matrix-only", o.full_matrix_only, "Restrict to A_v = M_N networks");
        sub->add_flag("--all-networks", o.all_networks, "Enumerate every network, also on lattices");
        sub->add_option("--network-index", o.index, "Network used when sampling");
    };
    auto action_flags = [&](CLI::App* sub) {
        sub->add_option("--f", o.f, "Polynomial f0 + f1*x + ... + fK*x^K");
        sub->add_option("--lambda", o.lambda, "Spectral scale");
        sub->add_option("--route", o.route, "matrix|paths|closed-form|insertion");
        sub->add_option("--limit-loop-length", o.limit, "Path enumeration budget");
    };

    auto* lattice = app.add_subcommand("lattice", "Generate quiver JSON");
    input_flags(lattice);

    bool count_only = false;
    auto* networks = app.add_subcommand("networks", "Enumerate Bratteli networks");
    input_flags(networks);
    networks->add_flag("--count", count_only, "Only count networks");

    auto* repr = app.add_subcommand("repr", "Sample a representation");
    input_flags(repr);

    int k = -1;
    bool compare = false, spectrum = false;
    auto* action = app.add_subcommand("action", "Spectral action or Tr D^k by a chosen route");
    input_flags(action);
    action_flags(action);
    action->add_option("-k", k, "Evaluate Tr D^k instead of the spectral action");
    action->add_flag("--compare", compare, "Also report the dense value and relative error");
    action->add_flag("--spectrum", spectrum, "Dump the spectrum of D");

    int census_d = 0;
    auto* d6 = app.add_subcommand("d6", "Length-6 loop decomposition of Tr D^6");
    input_flags(d6);
    d6->add_option("--census", census_d, "Class census of closed 6-step walks in Z^d");

    CountArgs c;
    auto* count = app.add_subcommand("count", "Coordination, loop and walk counts");
    count->add_flag("--hz", c.hz, "Coordination sequence h_d(0..k)");
    count->add_flag("--loops", c.loops, "Closed lattice walks c_d(0..k)");
    count->add_flag("--walks", c.walks, "Closed walks t(1..k) on complete or uniform graphs");
    count->add_flag("--bounds", c.bounds, "Closed-walk bounds for --quiver, l = 1..k");
    count->add_option("-d", c.d, "Lattice dimension");
    count->add_option("-k", c.k, "Largest length");
    count->add_option("-m", c.m, "Cross-check on T^d_m by breadth-first search");
    count->add_option("-n", c.n, "Vertices of the complete graph");
    count->add_flag("--self-looped", c.self_looped, "Complete graph with a loop at each vertex");
    count->add_option("--uniform-loops", c.lambda_loops, "Self-loops per vertex of a uniform multigraph");
    count->add_option("--nu", c.nu, "Edges between each pair of a uniform multigraph");
    count->add_option("--quiver", o.quiver, "Quiver for --bounds");
    count->add_option("--out", o.out, "Output format")->check(CLI::IsMember({"json", "csv"}));

    std::string wilson;
    bool weighted = false;
    auto* mc = app.add_subcommand("mc", "Monte Carlo partition function or Wilson loop");
    input_flags(mc);
    action_flags(mc);
    mc->add_option("--samples", o.samples, "Samples per network");
    mc->add_option("--threads", o.threads, "Worker threads");
    mc->add_option("--wilson", wilson, "Loop as comma-separated edge ids of the augmented quiver");
    mc->add_flag("--weighted", weighted, "Weight samples by exp(-Tr f(D/lambda))");

    int max_k = 4;
    auto* verify = app.add_subcommand("verify", "Run the invariant suite");
    input_flags(verify);
    verify->add_option("--max-k", max_k, "Largest trace power checked");

    std::uint64_t gauge_seed = 7;
    bool emit_rep = false;
    auto* gauge = app.add_subcommand("gauge", "Apply a random gauge element and re-evaluate");
    input_flags(gauge);
    action_flags(gauge);
    gauge->add_option("--gauge-seed", gauge_seed, "Seed of the gauge element");
    gauge->add_flag("--emit", emit_rep, "Include the transformed representation");

    int cd = 2, cm = 16;
    std::vector<double> spacings{0.2, 0.1, 0.05};
    auto* curvature = app.add_subcommand("curvature", "Plaquette holonomy against a^2 F for a smooth field");
    curvature->add_option("-d", cd, "Dimension");
    curvature->add_option("-m", cm, "Torus size");
    curvature->add_option("-N", o.N, "Matrix size");
    curvature->add_option("--seed", o.seed, "Field seed");
    curvature->add_option("--a", spacings, "Lattice spacings");
    curvature->add_option("--out", o.out, "Output format")->check(CLI::IsMember({"json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(QST_VALIDATION_ERROR, e.what());
    }
    if (o.out.empty()) o.out = count->parsed() || (action->parsed() && spectrum) ? "csv" : "json";
    if (curvature->parsed() && !curvature->count("-N")) o.N = 2;

    try {
        if (lattice->parsed()) run_lattice(o);
        else if (networks->parsed()) run_networks(o, count_only);
        else if (repr->parsed()) run_repr(o);
        else if (action->parsed()) run_action(o, k, compare, spectrum);
        else if (d6->parsed()) run_d6(o, census_d);
        else if (count->parsed()) run_count(o, c);
        else if (mc->parsed()) run_mc(o, wilson, weighted);
        else if (verify->parsed()) run_verify(o, max_k);
        else if (gauge->parsed()) run_gauge(o, gauge_seed, emit_rep);
        else if (curvature->parsed()) run_curvature(o, cd, cm, spacings);
    } catch (const Failure& e) {
        return fail(e.status, e.message);
    } catch (const std::exception& e) {
        return fail(QST_INTERNAL_ERROR, e.what());
    }
    return 0;
}
