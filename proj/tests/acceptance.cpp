#include "qst/io.hpp"
#include "qst/verify.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

using namespace qst;

namespace {

double rel(double x, double y) { return std::abs(x - y) / (1.0 + std::abs(x)); }

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

using Check = std::function<void(Outcome&)>;

struct Criterion {
    int id;
    std::string title;
    double budget_s;
    Check run;
    bool known_deviation = false;
};

IntMatrix mat(int rows, int cols, std::vector<int> data) {
    IntMatrix C(rows, cols);
    C.data = std::move(data);
    return C;
}

double max_edge_diff(const Representation& a, const Representation& b) {
    double worst = 0.0;
    for (size_t e = 0; e < a.L.size(); ++e) worst = std::max(worst, (a.L[e] - b.L[e]).norm());
    return worst;
}

void counting(Outcome& o) {
    const std::vector<int> hz3{1, 6, 18, 38, 66, 102, 146, 198};
    for (int k = 0; k <= 7; ++k) o.require(coordination(3, k) == hz3[k], "h_3(" + std::to_string(k) + ")");
    auto bfs = coordination_bfs(3, 17, 7);
    for (int k = 0; k <= 7; ++k) o.require(bfs[k] == hz3[k], "sphere size on T^3_17");
    const std::vector<int> k3{0, 6, 6, 18, 30, 66, 126, 258, 510};
    for (int l = 1; l <= 9; ++l) {
        o.require(closed_walks_complete(3, l) == k3[l - 1], "t_K3(" + std::to_string(l) + ")");
        o.require(adjacency_trace(underlying_adjacency(Quiver(3, {{0, 1}, {1, 2}, {0, 2}})), l) == k3[l - 1],
                  "K3 adjacency trace");
    }
    for (int d = 1; d <= 5; ++d) {
        const BigInt expected = 120 * d * d * d - 180 * d * d + 80 * d;
        o.require(loop_count_lattice(d, 6) == expected, "c_" + std::to_string(d) + "(6)");
        if (d <= 3) {
            auto ts = augment(make_torus({d, 7, false, 1.0, 1.0}));
            const BigInt all = BigInt(count_loops(ts, 6));
            o.require(all == expected * ts.vertex_count(), "exhaustive length-6 loops on T^" + std::to_string(d) + "_7");
        }
    }
    o.detail << " h_3 = 1,6,18,38,66,102,146,198; t_K3(1..9) = 0,...,510; c_d(6) for d=1..5";
}

void bratteli(Outcome& o) {
    auto src = make_profile({1, 2, 3}, {2, 8, 3});
    auto dst = make_profile({3, 7}, {2, 3});
    auto all = enumerate_bratteli(src, dst);
    o.require(all.size() == 1 && all[0] == mat(3, 2, {1, 0, 1, 2, 0, 1}), "unique diagram");

    const std::vector<int> images{1, 6, 11, 2, 3, 4, 5, 7, 8, 9, 10, 12, 13, 14, 15};
    auto pi = canonical_permutation(mat(2, 1, {1, 2}), make_profile({1, 2}, {3, 6}), make_profile({5}, {3}));
    CMat P = permutation_matrix(pi);
    bool exact = pi.size() == 15 && P.rows() == 15;
    for (int i = 0; exact && i < 15; ++i)
        for (int j = 0; j < 15; ++j)
            exact = exact && P(images[j] - 1, j) == cd(1) && (P.col(j).cwiseAbs().sum() == 1.0);
    o.require(exact, "15x15 permutation");

    auto big = make_profile({11}, {1});
    auto split = make_profile({5, 6}, {1, 1});
    o.require(enumerate_bratteli(big, split).empty(), "empty hom-set");
    NetworkOptions opt;
    opt.pinned = {big, std::nullopt};
    bool absent = true;
    for (const auto& net : enumerate_networks(Quiver(2, {{0, 1}}), 11, opt)) absent = absent && net.profiles[1] != split;
    o.require(absent, "spurious labeling absent from networks");

    auto g = automorphism_profile(make_profile({2, 2, 4, 4, 5, 5, 5, 5}, {1, 2, 2, 2, 1, 1, 1, 3}));
    o.require(g.component_count == 12, "12 components");
    o.detail << " C = [[1,0],[1,2],[0,1]]; pi = (2,6,4)(3,11,10,9,8,7,5); automorphism components = "
             << g.component_count;
}

void dual_route(Outcome& o) {
    double worst = 0.0, worst_cf = 0.0;
    for (auto [d, m, N, loops] : {std::tuple{2, 5, 1, false}, std::tuple{2, 5, 2, false}, std::tuple{3, 7, 1, false},
                                  std::tuple{2, 5, 1, true}, std::tuple{2, 5, 2, true}, std::tuple{3, 7, 1, true}}) {
        auto q = make_torus({d, m, loops, loops ? 0.5 : 1.0, loops ? 1.3 : 1.0});
        auto rep = random_representation(q, full_matrix_network(q, N), 1000 + d * 100 + m * 10 + N);
        auto D = dirac(rep);
        for (int k : {0, 2, 3, 4}) {
            const double dense = trace_power_matrix(D, k);
            const double paths = trace_power_paths(rep, k);
            const double cf = lattice_trace_closed_form(rep, k).total;
            worst = std::max(worst, rel(dense, paths));
            worst_cf = std::max(worst_cf, rel(dense, cf));
            if (k == 3 && !loops) o.require(std::abs(dense) <= 1e-8 && std::abs(paths) <= 1e-8, "odd trace vanishes");
        }
    }
    o.require(worst <= 1e-8, "matrix vs paths");
    o.require(worst_cf <= 1e-8, "closed form vs matrix");
    o.detail << " max rel diff paths " << worst << ", closed form " << worst_cf;
}

void length_six(Outcome& o) {
    auto t = make_torus({3, 7, false, 1.0, 1.0});
    double worst_paper = 0.0, worst_census = 0.0;
    for (int N : {1, 2}) {
        auto rep = random_representation(t, full_matrix_network(t, N), 77 + N);
        auto dd = d6_decomposition(rep);
        const double dense = trace_power_matrix(dirac(rep), 6);
        worst_paper = std::max(worst_paper, std::abs(dd.reconstruction_paper - dense) / std::abs(dense));
        worst_census = std::max(worst_census, std::abs(dd.reconstruction_census - dense) / std::abs(dense));
        auto unit = unit_representation(t, full_matrix_network(t, N));
        auto ud = d6_decomposition(unit);
        const long long expected = static_cast<long long>(loop_count_lattice(3, 6)) * 343 * N;
        o.require(std::llround(ud.class_total) == expected && std::llround(trace_power_matrix(dirac(unit), 6)) == expected,
                  "unit-weight total c_6(3) 7^3 N");
    }
    auto t3 = d6_theta(3), t4 = d6_theta(4);
    o.require(t3.theta0 == 756 && t3.square == 36 && t3.door == 3 && t3.hex == 1 && t3.rect_h == 1 && t3.rect_v == 1,
              "theta table d=3");
    o.require(t4.theta0 == 4 * (640 - 176 + 24) && t4.square == 48 && t4.door == 3 && t4.hex == 1, "theta table d=4");
    o.require(worst_census <= 1e-7, "census reconstruction");
    o.require(worst_paper <= 1e-7, "reconstruction with tabulated theta within 1e-7");
    auto census = d6_census(3);
    o.detail << " tabulated-theta rel err " << worst_paper << ", census-multiplicity rel err " << worst_census
             << "; census at d=3: trivial " << census.at(D6Class::trivial) << " vs theta0 756, plaquette-class "
             << census.at(D6Class::plaquette) << " = 30 per based plaquette vs 12d = 36";
}

void gauge(Outcome& o) {
    auto t = make_torus({2, 5, false, 1.0, 1.0});
    auto rep = random_representation(t, full_matrix_network(t, 2), 5);
    auto f = parse_polynomial("0.5 - 0.2x + x^2 + 0.3x^3 - 0.1x^4 + 0.02x^5 + 0.01x^6");
    f.scale = 1.3;
    const double base = spectral_action(rep, f);
    auto pw = path_weights(rep);
    double worst_action = 0.0, worst_plaq = 0.0, worst_comp = 0.0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        auto el = random_gauge(rep.network, 500 + s);
        auto moved = gauge_transform(rep, el);
        worst_action = std::max(worst_action, std::abs(spectral_action(moved, f) - base) / std::abs(base));
        auto mw = path_weights(moved);
        for (VertexId v = 0; v < t.vertex_count(); ++v)
            for (const auto& P : plaquettes(pw.qstar, v)) {
                const cd a = wilson_loop(pw, P), b = wilson_loop(mw, P);
                worst_plaq = std::max(worst_plaq, std::abs(a - b) / std::max(1.0, std::abs(a)));
            }
        auto second = random_gauge(moved.network, 900 + s);
        auto twice = gauge_transform(moved, second);
        auto once = gauge_transform(rep, compose(second, el));
        worst_comp = std::max(worst_comp, max_edge_diff(twice, once));
    }
    // Permuting summands needs a network with repeated blocks.
    Quiver q(3, {{0, 1}, {1, 2}, {2, 0}, {1, 1}});
    for (const auto& net : enumerate_networks(q, 3)) {
        auto r = random_representation(q, net, 3);
        auto a = random_gauge(net, 4);
        auto m = gauge_transform(r, a);
        auto b = random_gauge(m.network, 5);
        worst_comp = std::max(worst_comp, max_edge_diff(gauge_transform(m, b), gauge_transform(r, compose(b, a))));
    }
    o.require(worst_action <= 1e-9, "spectral action");
    o.require(worst_plaq <= 1e-9, "plaquette Wilson loops");
    o.require(worst_comp <= 1e-10, "composition law");
    o.detail << " max rel change action " << worst_action << ", plaquettes " << worst_plaq << "; composition residual "
             << worst_comp;
}

void roundtrip(Outcome& o) {
    const std::vector<Quiver> quivers{Quiver(2, {{0, 1}}), Quiver(2, {{0, 1}, {0, 1}}), Quiver(1, {{0, 0}}),
                                      Quiver(3, {{0, 1}, {1, 2}, {2, 0}, {1, 1}}),
                                      Quiver(2, {{0, 1}, {1, 0}, {0, 0}, {0, 0}})};
    double worst = 0.0;
    int count = 0;
    for (size_t i = 0; i < quivers.size(); ++i) {
        auto nets = enumerate_networks(quivers[i], 3);
        for (int s = 0; s < 4; ++s) {
            auto rep = random_representation(quivers[i], nets[(s * 7) % nets.size()], 40 + 10 * i + s);
            auto back = to_representation(to_module(rep), quivers[i]);
            worst = std::max(worst, max_edge_diff(rep, back));
            o.require(back.network == rep.network, "network recovered");
            ++count;
        }
    }
    o.require(worst <= 1e-10, "per-edge Frobenius residual");
    o.detail << " " << count << " representations, max residual " << worst;
}

void insertion(Outcome& o) {
    double worst = 0.0;
    for (int N : {1, 2}) {
        auto q = make_torus({2, 5, true, 0.5, 1.3});
        auto rep = random_representation(q, full_matrix_network(q, N), 60 + N);
        auto D = dirac(rep);
        for (int k = 0; k <= 4; ++k) worst = std::max(worst, rel(trace_power_matrix(D, k), trace_power_insertion(rep, k)));
    }
    o.require(worst <= 1e-8, "insertion vs dense");
    o.detail << " max rel diff " << worst;
}

void curvature(Outcome& o) {
    double min_ratio = 1e9;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto A = trigonometric_field(2, 2, seed);
        std::vector<double> r;
        for (double a : {0.2, 0.1, 0.05}) r.push_back(plaquette_curvature_check(A, 2, 16, a).max_residual);
        min_ratio = std::min({min_ratio, r[0] / r[1], r[1] / r[2]});
    }
    o.require(min_ratio >= 6.0, "residual ratio >= 6");
    o.detail << " min ratio over 5 fields " << min_ratio << " (order " << std::log2(min_ratio) << ")";
}

void monte_carlo(Outcome& o) {
    McConfig cfg;
    cfg.samples = 1000;
    cfg.seed = 3;
    cfg.threads = 2;
    Quiver q(2, {{0, 1}, {1, 0}});
    auto z = estimate_partition(q, 2, cfg);
    o.require(z.mean == static_cast<double>(enumerate_networks(q, 2).size()) && z.std_error == 0.0, "Z with f = 0");
    auto cyc = make_torus({1, 3, false, 1.0, 1.0});
    cfg.f = parse_polynomial("0.4x^2");
    auto w = estimate_partition(cyc, 1, cfg);
    o.require(w.std_error <= 1e-12 && std::abs(w.mean - std::exp(-2.4)) <= 1e-12, "weight-independent integrand");
    McConfig h;
    h.samples = 10000;
    h.seed = 21;
    h.threads = 2;
    auto wl = wilson_expectation(Quiver(1, {{0, 0}}), 2, Path{{0}, 0}, h);
    o.require(std::abs(wl.mean) <= 3 * wl.std_error, "Haar Wilson loop mean");
    o.detail << " Z = " << z.mean << " +- " << z.std_error << "; exp(-2.4) se " << w.std_error << "; single-edge W = "
             << wl.mean << " +- " << wl.std_error;
}

bool connected(const Quiver& q) {
    std::vector<int> comp(q.vertex_count());
    for (int v = 0; v < q.vertex_count(); ++v) comp[v] = v;
    std::function<int(int)> find = [&](int v) { return comp[v] == v ? v : comp[v] = find(comp[v]); };
    for (const auto& e : q.edges()) comp[find(e.source)] = find(e.target);
    for (int v = 0; v < q.vertex_count(); ++v)
        if (find(v) != find(0)) return false;
    return true;
}

void bound(Outcome& o) {
    // Every connected quiver on up to 3 vertices with 1 to 4 edges, plus 4-vertex paths and cycles.
    std::vector<Quiver> quivers;
    for (int n = 1; n <= 3; ++n) {
        std::vector<Edge> slots;
        for (int s = 0; s < n; ++s)
            for (int t = 0; t < n; ++t) slots.push_back({s, t});
        std::function<void(std::vector<Edge>&, size_t)> rec = [&](std::vector<Edge>& edges, size_t from) {
            if (!edges.empty() && connected(Quiver(n, edges))) quivers.emplace_back(n, edges);
            if (edges.size() == 4) return;
            for (size_t i = from; i < slots.size(); ++i) {
                edges.push_back(slots[i]);
                rec(edges, i);
                edges.pop_back();
            }
        };
        std::vector<Edge> edges;
        rec(edges, 0);
    }
    quivers.emplace_back(4, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}});
    quivers.emplace_back(4, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    long long networks = 0;
    std::map<int, long long> violations; // by N
    bool only_single = true, per_edge = true;
    for (const auto& q : quivers)
        for (int N = 1; N <= 3; ++N) {
            auto b = rep_dimension_bound(q, N);
            for (const auto& net : enumerate_networks(q, N)) {
                ++networks;
                auto rs = rep_space_profile(q, net);
                if (BigInt(rs.real_dimension) > b) {
                    ++violations[N];
                    only_single = only_single && N == 1 && q.edge_count() >= 2 && rs.real_dimension == q.edge_count();
                }
                for (EdgeId e = 0; e < q.edge_count(); ++e) {
                    long long dim = 0;
                    for (int n : net.profiles[q.target(e)].n) dim += static_cast<long long>(n) * n;
                    per_edge = per_edge && BigInt(dim) <= b;
                }
            }
        }
    o.require(violations.empty(), "network dimension above bound");
    o.detail << " " << quivers.size() << " connected quivers, " << networks << " networks;";
    for (int N = 1; N <= 3; ++N) o.detail << " N=" << N << ": " << violations[N] << " above bound;";
    if (!violations.empty() && only_single)
        o.detail << " every violation has N = 1 with |Q1| >= 2 edges, where the bound is 1 and the dimension is |Q1|;";
    o.detail << " per-edge dimension within bound: " << (per_edge ? "yes" : "no");
}

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "counting suite", 10, counting},
        {2, "Bratteli suite", 5, bratteli},
        {3, "dual-route trace equality", 120, dual_route},
        {4, "length-6 decomposition", 300, length_six, true},
        {5, "gauge invariance", 0, gauge},
        {6, "category equivalence roundtrip", 0, roundtrip},
        {7, "insertion decomposition", 0, insertion},
        {8, "plaquette curvature order", 0, curvature},
        {9, "Monte Carlo", 60, monte_carlo},
        {10, "dimension bound", 0, bound, true},
    };
    int failed = 0, unexpected = 0;
    for (const auto& c : criteria) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0 && secs > c.budget_s) o.require(false, "runtime budget");
        std::printf("criterion %2d %s: %s (%.2fs)%s\n", c.id, c.title.c_str(), o.pass ? "PASS" : "FAIL", secs,
                    o.detail.str().c_str());
        if (!o.pass) {
            ++failed;
            if (!c.known_deviation) ++unexpected;
        }
    }
    std::printf("%zu of %zu criteria pass\n", criteria.size() - failed, criteria.size());
    if (failed > unexpected) std::printf("remaining failures are documented deviations; see README\n");
    return unexpected == 0 ? 0 : 1;
}
