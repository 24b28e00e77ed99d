#pragma once

#include <Eigen/Dense>

#include <bit>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace xxz {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Eigensolver failures, quality-check trips, violated structural invariants.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requests that would exceed the dense-representation limits.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Basis convention, used by every module:
//   * a basis state of the L-site chain is the integer n in [0, 2^L)
//   * bit (L-1-k) of n holds site k, so site 0 is the most significant bit
//   * bit value 1 means spin up; n = 0 is the all-down state
//   * magnetization of n = popcount(n) = number of up spins

inline std::uint32_t site_mask(int site, int sites) {
    return std::uint32_t{1} << (sites - 1 - site);
}

inline bool spin_up(std::uint32_t state, int site, int sites) {
    return (state & site_mask(site, sites)) != 0;
}

inline int magnetization(std::uint32_t state) {
    return std::popcount(state);
}

struct BasisState {
    std::uint32_t bits = 0;
    int magnetization = 0;
};

inline BasisState make_basis_state(std::uint32_t bits, int sites) {
    if (sites < 1 || sites > 30) throw std::invalid_argument("site count out of range");
    if (bits >> sites) throw std::invalid_argument("basis bits exceed site count");
    return BasisState{bits, ::xxz::magnetization(bits)};
}

/// States grouped by up-spin count; result[m] is ascending.
std::vector<std::vector<std::uint32_t>> states_by_magnetization(int sites);

/// Dense operator on the 2^L-dimensional Hilbert space of an L-site chain.
struct Operator {
    int sites = 0;
    Matrix mat;

    Operator() = default;
    Operator(int sites_, Matrix mat_);

    Eigen::Index dim() const { return mat.rows(); }
};

Operator identity_operator(int sites);
Operator zero_operator(int sites);

inline Operator adjoint(const Operator& a) { return Operator(a.sites, a.mat.adjoint()); }

/// ||A - A^dagger||_F
double hermiticity_residual(const Matrix& a);

}  // namespace xxz
