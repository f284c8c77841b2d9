#pragma once

#include "qst/repcat.hpp"

#include <map>

namespace qst {

// Operator blocks b_e : H_{s(e)} -> H_{t(e)}, one per edge.
using WeightAssignment = std::vector<CMat>;

std::vector<int> vertex_offsets(const std::vector<int>& dims);
std::vector<int> vertex_dims(const Representation& rep);

// A_Q(b): block (t, s) += b_e. With symmetrize, also block (s, t) += b_e*.
CMat weight_matrix(const Quiver& q, const std::vector<int>& dims, const WeightAssignment& b, bool symmetrize);

struct DiracOperator {
    CMat D;
    std::vector<int> offsets; // vertex block offsets, size |Q0| + 1
    CMat block(VertexId row, VertexId col) const;
};

// b_e = L_e / rho(e)
WeightAssignment edge_weights(const Representation& rep);
DiracOperator dirac(const Representation& rep);

// Weights on Q* for the symmetrized path sum: original edges carry b_e,
// reversed copies carry b_e*, self-loops carry b_o + b_o*.
struct PathWeights {
    Quiver qstar;
    std::vector<int> dims;
    WeightAssignment w;
};
PathWeights path_weights(const Representation& rep);
PathWeights path_weights(const Quiver& q, const std::vector<int>& dims, const WeightAssignment& b);

// hol(p) = b_{e_k} ... b_{e_1} for p = [e_1, ..., e_k]; the zero matrix on E_v.
CMat holonomy(const Quiver& q, const std::vector<int>& dims, const WeightAssignment& b, const Path& p);
CMat holonomy(const PathWeights& pw, const Path& p);
// Trace of the holonomy of a loop over H_{s(p)}; 0 on E_v.
cd wilson_loop(const Quiver& q, const std::vector<int>& dims, const WeightAssignment& b, const Path& p);
cd wilson_loop(const PathWeights& pw, const Path& p);

// Re Tr(D^k) by repeated multiplication.
double trace_power_matrix(const DiracOperator& D, int k);
// Tr(D^k) as the sum of Wilson loops over all length-k loops of Q*.
cd trace_power_paths_complex(const Representation& rep, int k, int limit = kDefaultLoopLimit);
double trace_power_paths(const Representation& rep, int k, int limit = kDefaultLoopLimit);
// Tr(D^k) on a decorated quiver, regrouped as self-loop insertions into loops of
// the undecorated Q* plus sum_v Tr(phi_v^k).
double trace_power_insertion(const Representation& rep, int k, int limit = kDefaultLoopLimit);

inline constexpr int kMaxActionDegree = 8;

// f(x) = sum_k f[k] x^k, evaluated on D / scale.
struct ActionPolynomial {
    std::vector<double> f;
    double scale = 1.0;
    int degree() const;
};

// Parses "f0 + f1*x + ... + fK*x^K"; terms may repeat and appear in any order.
ActionPolynomial parse_polynomial(const std::string& text, int max_degree = kMaxActionDegree);
std::string to_string(const ActionPolynomial& f);

double spectral_action(const DiracOperator& D, const ActionPolynomial& f);
double spectral_action(const Representation& rep, const ActionPolynomial& f);
double spectral_action_paths(const Representation& rep, const ActionPolynomial& f, int limit = kDefaultLoopLimit);

// phi_v = sum over self-loops o at v of (L_o + L_o*) / rho(o).
std::map<VertexId, CMat> higgs_fields(const Representation& rep);

// Eigenvalues of D in ascending order.
Eigen::VectorXd spectrum(const DiracOperator& D);

} // namespace qst
