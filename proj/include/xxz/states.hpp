#pragma once

#include "xxz/operator.hpp"

#include <string>

namespace xxz {

/// Unit-trace Hermitian positive-semidefinite operator with provenance.
struct DensityMatrix {
    Operator op;
    std::string label;        // short machine name, e.g. "ground", "thermal_T10"
    std::string description;  // how the state was constructed

    Eigen::Index dim() const { return op.dim(); }
    const Matrix& mat() const { return op.mat; }
};

/// Throws numerical_error unless trace, Hermiticity and positivity hold
/// (|Tr-1| <= 1e-12, ||rho-rho^dag||_F <= 1e-12, min eig >= -1e-10).
void validate_density_matrix(const DensityMatrix& rho);

/// Projector onto the lowest eigenvector of H; a ground level degenerate
/// within 1e-10 yields the equal-weight mixture over the degenerate subspace.
DensityMatrix ground_state(const Operator& hamiltonian);

/// exp(-H/T)/Z at temperature T > 0 (units of J), stabilized by shifting the
/// spectrum to the ground energy before exponentiating.
DensityMatrix thermal_state(const Operator& hamiltonian, double temperature);

/// Pure product state with the first half of the chain up, |u...ud...d>.
DensityMatrix domain_wall_state(int sites);

/// Equal superposition of the two Neel patterns, (|udud...> + |dudu...>)/sqrt(2).
DensityMatrix z2_state(int sites);

DensityMatrix maximally_mixed(int sites);

}  // namespace xxz
