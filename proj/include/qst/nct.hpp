#pragma once

#include "qst/core.hpp"
#include "qst/quiver.hpp"

#include <map>

namespace qst {

// (n, r): summand sizes and multiplicities of a prespectral triple, kept sorted
// by (n_j, r_j) ascending.
struct Profile {
    std::vector<int> n;
    std::vector<int> r;

    int length() const { return static_cast<int>(n.size()); }
    int hilbert_dim() const;
    int algebra_dim() const;
    bool operator==(const Profile&) const = default;
    auto operator<=>(const Profile&) const = default;
};

// Validates and sorts into canonical order.
Profile make_profile(std::vector<int> n, std::vector<int> r);
std::string to_string(const Profile& p);

// All profiles with hilbert_dim == N, in canonical order.
std::vector<Profile> profiles_of_dimension(int N);

bool is_compatible(const IntMatrix& C, const Profile& src, const Profile& dst);

// All C with dst.n = C^T src.n and src.r = C dst.r, lexicographic (row-major).
std::vector<IntMatrix> enumerate_bratteli(const Profile& src, const Profile& dst,
                                          std::size_t max_results = 1'000'000);
bool bratteli_exists(const Profile& src, const Profile& dst);
std::uint64_t count_bratteli(const Profile& src, const Profile& dst, std::uint64_t budget = 100'000'000);

struct GroupProfile {
    std::vector<int> unitary_factors; // sizes of U(n) factors
    BigInt permutation_order = 1;
    BigInt component_count = 1;
    long long real_dimension = 0;
    int center_dimension = 0; // one U(1) center per factor
};

GroupProfile automorphism_profile(const Profile& x);
// Order of Sym(n, r): permutations of summands preserving both n_j and r_j.
BigInt symmetry_order(const Profile& x);
// All permutations in Sym(n, r), as images sigma[j].
std::vector<std::vector<int>> symmetry_permutations(const Profile& x, std::size_t max_results = 100'000);

struct BratteliNetwork {
    std::vector<Profile> profiles;   // per vertex
    std::vector<IntMatrix> diagrams; // per edge
    bool operator==(const BratteliNetwork&) const = default;
};

void validate_network(const Quiver& q, const BratteliNetwork& net);
// Network with profile ((N),(1)) everywhere and C = [1] on every edge.
BratteliNetwork full_matrix_network(const Quiver& q, int N);

struct NetworkOptions {
    std::size_t max_networks = 200'000;
    std::size_t max_labelings = 2'000'000;
    // Restrict to A_v = M_N, H_v = C^N at every vertex.
    bool full_matrix_only = false;
    // Optional per-vertex profile constraints; empty or one entry per vertex.
    std::vector<std::optional<Profile>> pinned;
};

using Labeling = std::vector<Profile>;

// Vertex labelings for which every edge admits a Bratteli diagram.
std::vector<Labeling> enumerate_labelings(const Quiver& q, int N, const NetworkOptions& opt = {});
std::vector<BratteliNetwork> enumerate_networks(const Quiver& q, int N, const NetworkOptions& opt = {});
BigInt count_networks(const Quiver& q, int N, const NetworkOptions& opt = {});

GroupProfile rep_space_profile(const Quiver& q, const BratteliNetwork& net);
GroupProfile gauge_group_profile(const BratteliNetwork& net);
// N^{2|Q1|} ((N^2)_N)^{|Q1|}
BigInt rep_dimension_bound(const Quiver& q, int N);
BigInt falling_factorial(long long x, long long k);

// lambda(a) = sum_j 1_{r_j} (x) a_j
CMat lift(const Profile& p, const std::vector<CMat>& blocks);
// B(a)_j: block diagonal of the a_i along the slots of column j, slots ordered by
// source summand index (nondecreasing size).
std::vector<CMat> block_embedding(const IntMatrix& C, const Profile& src, const Profile& dst,
                                  const std::vector<CMat>& a);
// 0-based image pi[j] of source basis index j in the block-refined target basis.
std::vector<int> canonical_permutation(const IntMatrix& C, const Profile& src, const Profile& dst);
// P with P(pi[j], j) = 1.
CMat permutation_matrix(const std::vector<int>& pi);

struct MorphismRealization {
    IntMatrix C;
    Profile src, dst;
    std::vector<CMat> u; // one unitary per target summand
    std::vector<int> pi;
    CMat P;
    CMat L; // lambda_t(u) P
};

MorphismRealization realize_morphism(const IntMatrix& C, const Profile& src, const Profile& dst,
                                     const std::vector<CMat>& u);
// phi(a) = u B(a) u*
std::vector<CMat> apply_morphism(const MorphismRealization& m, const std::vector<CMat>& a);
// max || lambda_t(phi(a)) - L lambda_s(a) L* || over the given samples
double compatibility_residual(const MorphismRealization& m, const std::vector<std::vector<CMat>>& samples);

} // namespace qst
