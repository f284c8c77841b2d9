#include "qst/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>

namespace qst {

Rng keyed_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> key) {
    std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                                     0x71756976u};
    for (auto k : key) {
        words.push_back(static_cast<std::uint32_t>(k));
        words.push_back(static_cast<std::uint32_t>(k >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

CMat ginibre(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    CMat Z(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) {
            double re = g(rng);
            double im = g(rng);
            Z(i, j) = cd(re, im);
        }
    return Z;
}

CMat haar_unitary(int n, Rng& rng) {
    if (n <= 0) return CMat(0, 0);
    CMat Z = ginibre(n, n, rng);
    Eigen::HouseholderQR<CMat> qr(Z);
    CMat Q = qr.householderQ();
    const CMat& R = qr.matrixQR();
    for (int j = 0; j < n; ++j) {
        cd d = R(j, j);
        double a = std::abs(d);
        Q.col(j) *= (a > 0.0 ? d / a : cd(1.0));
    }
    return Q;
}

CMat random_hermitian(int n, Rng& rng) {
    CMat Z = ginibre(n, n, rng);
    return 0.5 * (Z + Z.adjoint());
}

double unitarity_residual(const CMat& U) {
    if (U.rows() != U.cols()) return std::numeric_limits<double>::infinity();
    CMat I = CMat::Identity(U.rows(), U.cols());
    return std::max((U * U.adjoint() - I).norm(), (U.adjoint() * U - I).norm());
}

double hermiticity_residual(const CMat& A) { return (A - A.adjoint()).norm(); }

bool unitary_log(const CMat& U, CMat& out, double tol) {
    Eigen::ComplexSchur<CMat> schur(U);
    const CMat& T = schur.matrixT();
    const CMat& Z = schur.matrixU();
    const int n = static_cast<int>(U.rows());
    CMat D = CMat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        cd lam = T(i, i);
        if (std::abs(lam + cd(1.0)) < tol) return false;
        D(i, i) = std::log(lam);
    }
    out = Z * D * Z.adjoint();
    return true;
}

cd trace_power(const CMat& A, int k) {
    if (k < 0) throw ValidationError("negative power");
    if (k == 0) return cd(static_cast<double>(A.rows()));
    if (k == 1) return A.trace();
    // Tr(A^k) = sum_ij (A^a)_ij (A^b)_ji with a + b = k
    const int a = k / 2, b = k - a;
    CMat Pa = A;
    for (int i = 1; i < a; ++i) Pa = Pa * A;
    CMat Pb = (b == a) ? Pa : CMat(Pa * A);
    return (Pa.array() * Pb.transpose().array()).sum();
}

} // namespace qst
