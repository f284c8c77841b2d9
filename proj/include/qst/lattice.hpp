#pragma once

#include "qst/dirac.hpp"

#include <functional>
#include <map>

namespace qst {

// Coefficient of z^k in ((1+z)/(1-z))^d: lattice points at L1-distance k in Z^d.
BigInt coordination(int d, int k);
// Sphere sizes around a vertex of T^d_m by breadth-first search; needs m > 2 kmax.
std::vector<long long> coordination_bfs(int d, int m, int kmax);

// Closed length-k walks at a vertex of Z^d: sum over compositions mu of k/2 of k!/prod(mu_j!)^2.
BigInt loop_count_lattice(int d, int k);

BigInt closed_walks_complete(int n, int l);
BigInt closed_walks_complete_self_looped(int n, int l);
// n vertices, lambda self-loops per vertex, nu edges between each pair.
BigInt closed_walks_uniform(int n, int lambda, int nu, int l);

// Symmetric multigraph adjacency of the underlying graph: entry (v, w) counts edges
// joining v and w in either direction, the diagonal counts self-loops.
std::vector<std::vector<long long>> underlying_adjacency(const Quiver& q);
BigInt adjacency_trace(const std::vector<std::vector<long long>>& A, int l);

struct WalkBounds {
    int n = 0;
    long long nu = 0;     // max entry of the underlying adjacency
    long long lambda = 0; // max number of self-loops at a vertex
    BigInt with_loops;    // n^l nu^l, bounds the graph with one extra self-loop per vertex
    BigInt uniform;       // [(n-1) nu + lambda]^l + (n-1)(lambda - nu)^l
};
WalkBounds closed_walk_bounds(const Quiver& q, int l);

struct LatticeTraceReport {
    int k = 0;
    double constant_term = 0.0;
    double plaquette_sum = 0.0;
    std::map<std::string, double> higgs_terms;
    double mixed_terms = 0.0;
    double total = 0.0;
};

// Sum over vertices and all 4d(d-1) based plaquettes of Re W(P).
double plaquette_wilson_sum(const Representation& rep);
// sum over lattice edges of Re Tr(phi_s L* phi_t L) with the given self-loop fields.
double mixed_higgs_sum(const Representation& rep, const std::map<VertexId, CMat>& phi);

// Tr(D^k) for k in 0..4 on T^d_m or O^d_m, m >= 5, d >= 2.
LatticeTraceReport lattice_trace_closed_form(const Representation& rep, int k);
// sum_k f_k Tr((a D)^k) grouped by field content; deg f <= 4, scale 1/a.
LatticeTraceReport spectral_action_closed_form(const Representation& rep, const ActionPolynomial& f, double a);

struct D6Theta {
    long long theta0 = 0, rect_h = 0, rect_v = 0, square = 0, door = 0, hex = 0;
};
// Coefficients of the length-6 loop expansion in the published table.
D6Theta d6_theta(int d);

// Classification of closed 6-step displacement sequences.
enum class D6Class { trivial, plaquette, rect_h, rect_v, rect_mid, door, door_rotated, hex };
std::string to_string(D6Class c);
D6Class classify_d6(const std::vector<int>& steps);
// Number of closed 6-step sequences per class at a single vertex of Z^d.
std::map<D6Class, long long> d6_census(int d);

struct D6Decomposition {
    int d = 0;
    int m = 0;
    int N = 0;
    D6Theta theta;
    std::map<std::string, long long> class_counts; // per vertex
    std::map<std::string, double> class_sums;      // sum over vertices of Re W per class
    std::map<std::string, double> canonical_sums;  // canonical representatives only
    std::map<std::string, double> census_multiplicity;
    double reconstruction_paper = 0.0;  // with the tabulated theta
    double reconstruction_census = 0.0; // with multiplicities counted from the census
    double class_total = 0.0;
};
D6Decomposition d6_decomposition(const Representation& rep);

// Hermitian N x N gauge potential A_axis(x) at a physical point x.
using GaugeField = std::function<CMat(const std::vector<double>& x, int axis)>;
// Sum of a few random Fourier modes with Hermitian coefficients.
GaugeField trigonometric_field(int N, int d, std::uint64_t seed, int modes = 3);

struct CurvatureResult {
    double a = 0.0;
    double max_residual = 0.0;
    int plaquettes = 0;
    int excluded = 0;
};
// Links L_j(v) = exp(i a A_j(a v)); compares log of the plaquette holonomy
// L_i(v) L_j(v+i) L_i(v+j)* L_j(v)* against i a^2 F_ij(v) on plaquettes away from the seam.
CurvatureResult plaquette_curvature_check(const GaugeField& A, int d, int m, double a);
// Same with lattice values A[v][axis] given directly.
CurvatureResult plaquette_curvature_check(const std::vector<std::vector<CMat>>& A, int d, int m, double a);

} // namespace qst
