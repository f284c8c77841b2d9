#pragma once

#include "qst/linalg.hpp"
#include "qst/nct.hpp"
#include "qst/quiver.hpp"

namespace qst {

struct Representation {
    Quiver quiver;
    BratteliNetwork network;
    std::vector<CMat> L; // per edge, dim H_t x dim H_s
    std::optional<std::uint64_t> seed;

    int dim(VertexId v) const { return network.profiles.at(v).hilbert_dim(); }
};

// Throws ValidationError on shape, unitarity or diagram mismatch.
void validate_representation(const Representation& rep, double tol = 1e-10, bool check_diagrams = true);
// max over sampled a in A_s of the distance of L lambda_s(a) L* from lambda_t(B(a))-type elements.
double edge_compatibility_residual(const Representation& rep, EdgeId e, Rng& rng, int samples = 8);

Representation random_representation(const Quiver& q, const BratteliNetwork& net, std::uint64_t seed);
// Every u = identity, so L_e is the canonical permutation.
Representation unit_representation(const Quiver& q, const BratteliNetwork& net);

struct GaugeElement {
    std::vector<std::vector<int>> sigma;     // per vertex, sigma[v][j] = image of summand j
    std::vector<std::vector<CMat>> g;        // per vertex, one unitary per summand
};

GaugeElement identity_gauge(const BratteliNetwork& net);
GaugeElement random_gauge(const BratteliNetwork& net, std::uint64_t seed, bool permute = true);
void validate_gauge(const BratteliNetwork& net, const GaugeElement& el, double tol = 1e-10);
// Hilbert-level Upsilon = lambda(g) Pi_sigma.
CMat hilbert_gauge(const Profile& p, const std::vector<int>& sigma, const std::vector<CMat>& g);
// (tau, h) after (sigma, g) = (tau sigma, h tau(g)).
GaugeElement compose(const GaugeElement& second, const GaugeElement& first);
// L'_e = Upsilon_t L_e Upsilon_s^{-1}, C'_e = sigma_t C_e sigma_s^{-1}.
Representation gauge_transform(const Representation& rep, const GaugeElement& el);
// sigma(x): moves summand j to position sigma[j].
std::vector<CMat> permute_blocks(const std::vector<int>& sigma, const std::vector<CMat>& x);
IntMatrix permute_diagram(const IntMatrix& C, const std::vector<int>& sigma_s, const std::vector<int>& sigma_t);

// Module over the path algebra: total space H = sum_v H_v with the constant
// paths acting as projections and each edge acting by its operator extended by zero.
struct PathModule {
    Quiver quiver;
    int dim = 0;
    std::vector<CMat> projections; // E_v
    std::vector<CMat> edge_action; // Phi_e on H
    std::vector<Profile> algebra;  // summands of A restricted by E_v
    std::vector<IntMatrix> diagrams;

    CVec act(const Path& p, const CVec& x) const;
    // (p2 . p1) x; zero when the paths do not compose.
    CVec act_product(const Path& p2, const Path& p1, const CVec& x) const;
};

PathModule to_module(const Representation& rep);
Representation to_representation(const PathModule& mod, const Quiver& q);
// Block offsets of H = sum_v H_v.
std::vector<int> block_offsets(const Representation& rep);
// sum_v Upsilon_v as an operator on H.
CMat module_map(const Representation& rep, const GaugeElement& el);

} // namespace qst
