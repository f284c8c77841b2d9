#pragma once

#include "qst/core.hpp"

#include <random>

namespace qst {

using Rng = std::mt19937_64;

// Independent generator keyed by (seed, key...). The same key always gives the
// same stream, whatever thread draws from it.
Rng keyed_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> key);

// Haar-distributed U(n): QR of a complex Ginibre matrix, R diagonal made positive.
CMat haar_unitary(int n, Rng& rng);
CMat ginibre(int rows, int cols, Rng& rng);
// Hermitian matrix with Gaussian entries (GUE up to scale).
CMat random_hermitian(int n, Rng& rng);

double unitarity_residual(const CMat& U);
double hermiticity_residual(const CMat& A);

// Principal logarithm of a unitary matrix through its Schur form. Returns false
// when an eigenvalue lies within tol of -1.
bool unitary_log(const CMat& U, CMat& out, double tol = 1e-6);

// Tr(A^k) by repeated products.
cd trace_power(const CMat& A, int k);

} // namespace qst
