#pragma once

#include "xxz/operator.hpp"
#include "xxz/states.hpp"

#include <Eigen/Eigenvalues>

#include <random>

namespace testutil {

using xxz::Complex;
using xxz::Matrix;
using xxz::Vector;

// Hand-rolled Kronecker product, kept independent of the library internals so
// oracle matrices are built through a different code path.
inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// 2x2 primitives in the project basis ordering: index 0 = down, index 1 = up.
inline Matrix pauli_x() { return (Matrix(2, 2) << 0, 1, 1, 0).finished(); }
inline Matrix pauli_y() {
    return (Matrix(2, 2) << 0, Complex(0, 1), Complex(0, -1), 0).finished();
}
inline Matrix pauli_z() { return (Matrix(2, 2) << -1, 0, 0, 1).finished(); }
inline Matrix pauli_plus() { return (Matrix(2, 2) << 0, 0, 1, 0).finished(); }
inline Matrix pauli_minus() { return (Matrix(2, 2) << 0, 1, 0, 0).finished(); }
inline Matrix id2() { return Matrix::Identity(2, 2); }

// Single-site 2x2 operator embedded at `site` of an L-site chain
// (site 0 = most significant factor).
inline Matrix embed(const Matrix& op, int site, int sites) {
    Matrix out = Matrix::Identity(1, 1);
    for (int k = 0; k < sites; ++k) out = kron(out, k == site ? op : id2());
    return out;
}

inline std::vector<double> sorted_real_eigenvalues(const Matrix& hermitian) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
    std::vector<double> out(es.eigenvalues().data(),
                            es.eigenvalues().data() + es.eigenvalues().size());
    return out;
}

inline Matrix random_matrix(Eigen::Index dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix m(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
        for (Eigen::Index i = 0; i < dim; ++i) m(i, j) = Complex(gauss(rng), gauss(rng));
    return m;
}

inline xxz::Operator random_operator(int sites, std::uint64_t seed) {
    return xxz::Operator(sites, random_matrix(Eigen::Index{1} << sites, seed));
}

inline xxz::DensityMatrix random_density(int sites, std::uint64_t seed) {
    const Matrix a = random_matrix(Eigen::Index{1} << sites, seed);
    Matrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint().eval());
    return xxz::DensityMatrix{xxz::Operator(sites, std::move(rho)), "random", "random test state"};
}

}  // namespace testutil
