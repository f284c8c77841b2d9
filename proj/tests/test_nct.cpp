#include <doctest.h>

#include "qst/nct.hpp"
#include "qst/linalg.hpp"

#include <algorithm>

using namespace qst;

namespace {

IntMatrix mat(int rows, int cols, std::vector<int> data) {
    IntMatrix C(rows, cols);
    C.data = std::move(data);
    return C;
}

// Direct check of both Bratteli conditions: column sums give the target
// summand sizes, row sums give the source multiplicities.
bool brute_compatible(const IntMatrix& C, const Profile& s, const Profile& t) {
    for (int j = 0; j < t.length(); ++j) {
        int n = 0;
        for (int i = 0; i < s.length(); ++i) n += C(i, j) * s.n[i];
        if (n != t.n[j]) return false;
    }
    for (int i = 0; i < s.length(); ++i) {
        int r = 0;
        for (int j = 0; j < t.length(); ++j) r += C(i, j) * t.r[j];
        if (r != s.r[i]) return false;
    }
    for (int i = 0; i < s.length(); ++i) {
        int row = 0;
        for (int j = 0; j < t.length(); ++j) row += C(i, j);
        if (row == 0) return false;
    }
    return true;
}

long long brute_count(const Profile& s, const Profile& t, int max_entry) {
    const int cells = s.length() * t.length();
    IntMatrix C(s.length(), t.length());
    long long count = 0;
    std::vector<int> digits(cells, 0);
    while (true) {
        C.data = digits;
        if (brute_compatible(C, s, t)) ++count;
        int i = 0;
        while (i < cells && ++digits[i] > max_entry) digits[i++] = 0;
        if (i == cells) break;
    }
    return count;
}

} // namespace

TEST_SUITE("nct") {
    TEST_CASE("worked Bratteli example has a unique diagram") {
        auto src = make_profile({1, 2, 3}, {2, 8, 3});
        auto dst = make_profile({3, 7}, {2, 3});
        auto all = enumerate_bratteli(src, dst);
        REQUIRE(all.size() == 1);
        CHECK(all[0] == mat(3, 2, {1, 0, 1, 2, 0, 1}));
        CHECK(is_compatible(all[0], src, dst));
        CHECK(brute_count(src, dst, 3) == 1);
    }

    TEST_CASE("unliftable edge has an empty hom-set") {
        auto src = make_profile({11}, {1});
        auto dst = make_profile({5, 6}, {1, 1});
        CHECK(enumerate_bratteli(src, dst).empty());
        CHECK_FALSE(bratteli_exists(src, dst));
        Quiver q(2, {{0, 1}});
        NetworkOptions opt;
        opt.pinned = {src, std::nullopt};
        for (const auto& net : enumerate_networks(q, 11, opt)) CHECK(net.profiles[1] != dst);
        opt.pinned = {src, dst};
        CHECK(enumerate_labelings(q, 11, opt).empty());
        CHECK(enumerate_networks(q, 11, opt).empty());
    }

    TEST_CASE("distinct sizes force the identity") {
        auto x = make_profile({2, 3}, {1, 1});
        auto all = enumerate_bratteli(x, x);
        REQUIRE(all.size() == 1);
        CHECK(all[0] == mat(2, 2, {1, 0, 0, 1}));
    }

    TEST_CASE("enumeration agrees with brute force on small profiles") {
        for (int N = 1; N <= 3; ++N)
            for (const auto& s : profiles_of_dimension(N))
                for (const auto& t : profiles_of_dimension(N)) {
                    CHECK(static_cast<long long>(enumerate_bratteli(s, t).size()) == brute_count(s, t, N));
                    CHECK(count_bratteli(s, t) == enumerate_bratteli(s, t).size());
                }
    }

    TEST_CASE("automorphism groups") {
        auto g = automorphism_profile(make_profile({2, 2, 4, 4, 5, 5, 5, 5}, {1, 2, 2, 2, 1, 1, 1, 3}));
        CHECK(g.component_count == 12);
        auto f = g.unitary_factors;
        std::sort(f.begin(), f.end());
        CHECK(f == std::vector<int>{2, 2, 4, 4, 5, 5, 5, 5});
        auto one = automorphism_profile(make_profile({4}, {1}));
        CHECK(one.component_count == 1);
        CHECK(one.unitary_factors == std::vector<int>{4});
        CHECK(automorphism_profile(make_profile({3, 3}, {1, 1})).component_count == 2);
        CHECK(symmetry_permutations(make_profile({3, 3}, {1, 1})).size() == 2);
        CHECK(symmetry_order(make_profile({2, 2}, {1, 1})) == 2);
    }

    TEST_CASE("torus networks") {
        auto t = make_torus({2, 3, false, 1.0, 1.0});
        NetworkOptions opt;
        opt.full_matrix_only = true;
        auto nets = enumerate_networks(t, 2, opt);
        REQUIRE(nets.size() == 1);
        CHECK(nets[0] == full_matrix_network(t, 2));
        for (const auto& p : nets[0].profiles) CHECK(p == make_profile({2}, {1}));
        for (const auto& C : nets[0].diagrams) CHECK(C == mat(1, 1, {1}));
        auto rs = rep_space_profile(t, nets[0]);
        CHECK(rs.real_dimension == 72);
        auto gg = gauge_group_profile(nets[0]);
        CHECK(gg.permutation_order == 1);
        CHECK(gg.unitary_factors == std::vector<int>(9, 2));
        // Without the filter the scalar-diagonal labelings also admit networks.
        CHECK(count_networks(t, 2) == 2 + (BigInt(1) << 18));
        CHECK_THROWS_AS(enumerate_networks(t, 2), ResourceError);
    }

    TEST_CASE("two-vertex networks match brute force") {
        Quiver q(2, {{0, 1}});
        long long expected = 0;
        for (const auto& s : profiles_of_dimension(2))
            for (const auto& t : profiles_of_dimension(2)) expected += brute_count(s, t, 2);
        CHECK(profiles_of_dimension(2).size() == 3);
        CHECK(static_cast<long long>(enumerate_networks(q, 2).size()) == expected);
        CHECK(count_networks(q, 2) == expected);
    }

    TEST_CASE("representation space and gauge group profiles") {
        Quiver q(2, {{0, 1}});
        BratteliNetwork net{{make_profile({1, 2, 3}, {2, 8, 3}), make_profile({3, 7}, {2, 3})},
                            {mat(3, 2, {1, 0, 1, 2, 0, 1})}};
        validate_network(q, net);
        auto rs = rep_space_profile(q, net);
        CHECK(rs.unitary_factors == std::vector<int>{3, 7});
        CHECK(rs.real_dimension == 58);
        Quiver lone(1);
        BratteliNetwork ln{{make_profile({3}, {1})}, {}};
        CHECK(rep_space_profile(lone, ln).unitary_factors.empty());
        CHECK(rep_space_profile(lone, ln).real_dimension == 0);
        auto gg = gauge_group_profile(ln);
        CHECK(gg.unitary_factors == std::vector<int>{3});
        CHECK(gg.real_dimension == 9);
        BratteliNetwork sym{{make_profile({2, 2}, {1, 1})}, {}};
        CHECK(gauge_group_profile(sym).permutation_order == 2);
    }

    TEST_CASE("dimension bound") {
        CHECK(rep_dimension_bound(Quiver(3, {{0, 1}, {1, 2}}), 1) == 1);
        CHECK(rep_dimension_bound(Quiver(2, {{0, 1}}), 2) == 48);
        CHECK(rep_dimension_bound(Quiver(2, {{0, 1}, {1, 0}, {0, 0}}), 2) == 110592);
        for (const auto& q : {Quiver(2, {{0, 1}}), Quiver(2, {{0, 1}, {1, 0}, {0, 0}}), Quiver(1, {{0, 0}, {0, 0}})}) {
            auto bound = rep_dimension_bound(q, 2);
            for (const auto& net : enumerate_networks(q, 2)) CHECK(BigInt(rep_space_profile(q, net).real_dimension) <= bound);
        }
    }

    TEST_CASE("block permutation of the worked embedding") {
        auto src = make_profile({1, 2}, {3, 6});
        auto dst = make_profile({5}, {3});
        auto C = mat(2, 1, {1, 2});
        auto pi = canonical_permutation(C, src, dst);
        // pi = (2,6,4)(3,11,10,9,8,7,5), one-based images of 1..15
        const std::vector<int> images{1, 6, 11, 2, 3, 4, 5, 7, 8, 9, 10, 12, 13, 14, 15};
        REQUIRE(pi.size() == 15);
        for (int i = 0; i < 15; ++i) CHECK(pi[i] + 1 == images[i]);
        CMat P = permutation_matrix(pi);
        for (int i = 0; i < 15; ++i)
            for (int j = 0; j < 15; ++j) CHECK(P(i, j) == (pi[j] == i ? cd(1) : cd(0)));
    }

    TEST_CASE("trivial morphism realizes the identity") {
        auto x = make_profile({3}, {2});
        auto m = realize_morphism(mat(1, 1, {1}), x, x, {CMat::Identity(3, 3)});
        CHECK((m.L - CMat::Identity(6, 6)).norm() < 1e-14);
        Rng rng = keyed_stream(5, {1});
        CMat a = ginibre(3, 3, rng);
        CHECK((apply_morphism(m, {a})[0] - a).norm() < 1e-14);
    }

    TEST_CASE("random morphisms are compatible") {
        auto src = make_profile({1, 2, 3}, {2, 8, 3});
        auto dst = make_profile({3, 7}, {2, 3});
        Rng rng = keyed_stream(9, {2});
        std::vector<CMat> u{haar_unitary(3, rng), haar_unitary(7, rng)};
        auto m = realize_morphism(enumerate_bratteli(src, dst)[0], src, dst, u);
        CHECK(unitarity_residual(m.L) < 1e-12);
        std::vector<std::vector<CMat>> samples;
        for (int s = 0; s < 100; ++s) samples.push_back({ginibre(1, 1, rng), ginibre(2, 2, rng), ginibre(3, 3, rng)});
        CHECK(compatibility_residual(m, samples) < 1e-10);
    }
}
