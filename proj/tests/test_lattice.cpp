#include <doctest.h>

#include "qst/lattice.hpp"

#include <numeric>

using namespace qst;

namespace {

double rel(double x, double y) { return std::abs(x - y) / (1.0 + std::abs(x)); }

BigInt binom(int n, int k) {
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace

TEST_SUITE("lattice") {
    TEST_CASE("coordination sequences") {
        const std::vector<int> hz3{1, 6, 18, 38, 66, 102, 146, 198};
        for (int k = 0; k <= 7; ++k) CHECK(coordination(3, k) == hz3[k]);
        for (int k = 1; k <= 10; ++k) CHECK(coordination(1, k) == 2);
        for (int d = 1; d <= 6; ++d) CHECK(coordination(d, 0) == 1);
        auto bfs = coordination_bfs(3, 15, 7);
        for (int k = 0; k <= 7; ++k) CHECK(bfs[k] == hz3[k]);
        auto bfs4 = coordination_bfs(4, 9, 4);
        for (int k = 0; k <= 4; ++k) CHECK(BigInt(bfs4[k]) == coordination(4, k));
    }

    TEST_CASE("closed lattice walks") {
        for (int d = 1; d <= 5; ++d) CHECK(loop_count_lattice(d, 6) == 120 * d * d * d - 180 * d * d + 80 * d);
        for (int k = 0; k <= 12; k += 2) CHECK(loop_count_lattice(1, k) == binom(k, k / 2));
        CHECK(loop_count_lattice(2, 4) == 36);
        CHECK(loop_count_lattice(3, 5) == 0);
        for (int d = 1; d <= 3; ++d) {
            auto ts = augment(make_torus({d, 7, false, 1.0, 1.0}));
            CHECK(BigInt(count_loops(ts, 6, 0)) == loop_count_lattice(d, 6));
        }
        CHECK(BigInt(count_loops(augment(make_torus({2, 7, false, 1.0, 1.0})), 4, 0)) == 36);
    }

    TEST_CASE("walks on complete graphs") {
        const std::vector<int> k3{0, 6, 6, 18, 30, 66, 126, 258, 510};
        const std::vector<int> k4{0, 12, 24, 84, 240, 732, 2184, 6564};
        for (int l = 1; l <= 9; ++l) CHECK(closed_walks_complete(3, l) == k3[l - 1]);
        for (int l = 1; l <= 8; ++l) CHECK(closed_walks_complete(4, l) == k4[l - 1]);
        for (int n = 1; n <= 5; ++n)
            for (int l = 1; l <= 6; ++l) {
                CHECK(closed_walks_complete_self_looped(n, l) == pow(BigInt(n), l));
                CHECK(closed_walks_uniform(n, 1, 1, l) == pow(BigInt(n), l));
                CHECK(closed_walks_uniform(n, 0, 1, l) == closed_walks_complete(n, l));
            }
        // The uniform formula against adjacency traces of a multigraph.
        std::vector<std::vector<long long>> A(4, std::vector<long long>(4, 2));
        for (int i = 0; i < 4; ++i) A[i][i] = 3;
        for (int l = 1; l <= 8; ++l) CHECK(adjacency_trace(A, l) == closed_walks_uniform(4, 3, 2, l));
    }

    TEST_CASE("closed walk bounds") {
        Quiver q(3, {{0, 1}, {1, 2}, {2, 0}, {0, 0}, {0, 1}});
        for (int l = 1; l <= 8; ++l) {
            auto b = closed_walk_bounds(q, l);
            auto exact = adjacency_trace(underlying_adjacency(q), l);
            CHECK(exact <= b.with_loops);
            CHECK(exact <= b.uniform);
        }
        auto k3 = Quiver(3, {{0, 1}, {1, 2}, {0, 2}});
        for (int l = 1; l <= 9; ++l) CHECK(adjacency_trace(underlying_adjacency(k3), l) == closed_walks_complete(3, l));
    }

    TEST_CASE("closed forms on T^2_5") {
        auto t = make_torus({2, 5, false, 1.0, 1.0});
        auto rep = random_representation(t, full_matrix_network(t, 2), 12);
        auto D = dirac(rep);
        auto r2 = lattice_trace_closed_form(rep, 2);
        CHECK(r2.constant_term == doctest::Approx(200));
        CHECK(r2.plaquette_sum == 0.0);
        CHECK(r2.mixed_terms == 0.0);
        CHECK(r2.higgs_terms.empty());
        for (int k = 0; k <= 4; ++k) CHECK(rel(trace_power_matrix(D, k), lattice_trace_closed_form(rep, k).total) <= 1e-8);
        for (int N : {1, 3}) {
            auto unit = unit_representation(t, full_matrix_network(t, N));
            const double expected = (8.0 * 4 - 4) * 25 * N + 8.0 * 25 * N;
            CHECK(lattice_trace_closed_form(unit, 4).total == doctest::Approx(expected));
            CHECK(trace_power_matrix(dirac(unit), 4) == doctest::Approx(expected));
            CHECK(plaquette_wilson_sum(unit) == doctest::Approx(8.0 * 25 * N));
        }
        auto f0 = parse_polynomial("1.5");
        CHECK(spectral_action_closed_form(rep, f0, 0.3).total == doctest::Approx(1.5 * 50));
    }

    TEST_CASE("closed forms on O^d_m") {
        for (auto [d, m, N] : {std::tuple{2, 5, 2}, std::tuple{2, 6, 1}, std::tuple{3, 5, 1}}) {
            auto o = make_torus({d, m, true, 0.5, 1.3});
            auto rep = random_representation(o, full_matrix_network(o, N), 31);
            auto D = dirac(rep);
            for (int k = 0; k <= 4; ++k) CHECK(rel(trace_power_matrix(D, k), lattice_trace_closed_form(rep, k).total) <= 1e-8);
        }
        auto o = make_torus({2, 5, true, 0.5, 1.0});
        auto rep = random_representation(o, full_matrix_network(o, 2), 32);
        auto f = parse_polynomial("0.7 - 0.2x + 0.4x^2 + 0.05x^3 - 0.01x^4");
        f.scale = 2.0;
        CHECK(rel(spectral_action(rep, f), spectral_action_closed_form(rep, f, 0.5).total) <= 1e-8);
        auto r2 = lattice_trace_closed_form(rep, 2);
        CHECK(r2.mixed_terms == 0.0);
        CHECK_THROWS_AS(lattice_trace_closed_form(rep, 5), ValidationError);
        auto small = make_torus({2, 3, false, 1.0, 1.0});
        CHECK_THROWS_AS(lattice_trace_closed_form(random_representation(small, full_matrix_network(small, 1), 1), 2),
                        ValidationError);
    }

    TEST_CASE("length-6 coefficients and census") {
        auto t3 = d6_theta(3);
        CHECK(t3.theta0 == 756);
        CHECK(t3.theta0 == 1860 - 1104);
        CHECK(t3.square == 36);
        CHECK(t3.door == 3);
        CHECK(t3.hex == 1);
        CHECK(t3.rect_h == 1);
        CHECK(t3.rect_v == 1);
        auto t4 = d6_theta(4);
        CHECK(t4.theta0 == 4 * (10 * 64 - 11 * 16 + 6 * 4));
        CHECK(t4.square == 48);
        CHECK_THROWS_AS(d6_theta(2), ValidationError);
        for (int d : {2, 3, 4}) {
            auto census = d6_census(d);
            long long total = 0;
            for (const auto& [c, n] : census) total += n;
            CHECK(BigInt(total) == loop_count_lattice(d, 6));
        }
        CHECK(classify_d6({1, -1, 1, -1, 2, -2}) == D6Class::trivial);
        CHECK(classify_d6({1, 2, -1, -2, 1, -1}) == D6Class::plaquette);
        CHECK(classify_d6({1, 1, 2, -1, -1, -2}) == D6Class::rect_h);
        CHECK(classify_d6({1, 2, 3, -1, -2, -3}) == D6Class::hex);
    }

    TEST_CASE("length-6 decomposition on T^3_7") {
        auto t = make_torus({3, 7, false, 1.0, 1.0});
        for (int N : {1, 2}) {
            auto unit = unit_representation(t, full_matrix_network(t, N));
            auto u = d6_decomposition(unit);
            for (const auto& [name, count] : u.class_counts)
                CHECK(u.class_sums.at(name) == doctest::Approx(static_cast<double>(count) * 343 * N));
            const double expected = static_cast<double>(loop_count_lattice(3, 6)) * 343 * N;
            CHECK(std::llround(u.class_total) == std::llround(expected));
            CHECK(std::llround(trace_power_matrix(dirac(unit), 6)) == std::llround(expected));
        }
        auto rep = random_representation(t, full_matrix_network(t, 1), 3);
        auto dd = d6_decomposition(rep);
        const double dense = trace_power_matrix(dirac(rep), 6);
        CHECK(std::abs(dd.class_total - dense) <= 1e-7 * std::abs(dense));
        CHECK(std::abs(dd.reconstruction_census - dense) <= 1e-7 * std::abs(dense));
    }

    TEST_CASE("plaquette curvature") {
        // Abelian fields: the plaquette exponent is exact.
        auto abelian = trigonometric_field(1, 2, 4);
        CHECK(plaquette_curvature_check(abelian, 2, 16, 0.1).max_residual < 1e-10);
        const int d = 2, m = 8;
        std::vector<std::vector<CMat>> A(m * m, std::vector<CMat>(d));
        Rng rng = keyed_stream(3, {9});
        CMat c = random_hermitian(2, rng);
        for (auto& v : A)
            for (auto& a : v) a = c;
        CHECK(plaquette_curvature_check(A, d, m, 0.1).max_residual < 1e-12);
        auto field = trigonometric_field(2, 2, 11);
        std::vector<double> res;
        for (double a : {0.2, 0.1, 0.05}) res.push_back(plaquette_curvature_check(field, 2, 16, a).max_residual);
        CHECK(res[0] / res[1] >= 6.0);
        CHECK(res[1] / res[2] >= 6.0);
    }
}
