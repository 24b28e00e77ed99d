#pragma once

#include "xxz/operator.hpp"

#include <vector>

namespace xxz {

/// Couplings of the long-range XXZ chain
///   H = sum_{i<j} J/|i-j|^alpha (S_i^x S_j^x + S_i^y S_j^y + delta S_i^z S_j^z)
/// with S = sigma/2, open boundary conditions, |i-j| the integer site
/// separation. J sets the unit of time; alpha = 0 gives the same coupling J
/// for every pair.
struct ModelParams {
    int sites = 6;
    double coupling = 1.0;  // J
    double alpha = 1.0;     // interaction-range exponent, >= 0
    double delta = 1.0;     // anisotropy
};

void validate(const ModelParams& params);

Operator build_hamiltonian(const ModelParams& params);

/// One dephasing jump per site: L_l = (sigma_l^z + 1)/2, the projector onto up.
std::vector<Operator> build_jumps(int sites);

struct LindbladModel {
    int sites = 0;
    Operator hamiltonian;
    std::vector<Operator> jumps;
};

LindbladModel build_model(const ModelParams& params);

/// H = 0 with the standard per-site dephasing jumps.
LindbladModel dephasing_model(int sites);

struct AllToAllForm {
    double residual = 0;  // Frobenius residual of the closed form
    double constant = 0;  // fitted additive constant c
};

/// At alpha = 0 the chain is permutation symmetric and collapses onto total-spin
/// operators. Fits the additive constant c in
///   H = (J/2) (S^2 - (1-delta) (S^z)^2) + c * Id
/// against the directly built Hamiltonian and returns the Frobenius residual
/// together with c. Throws if alpha != 0.
AllToAllForm all_to_all_check(const ModelParams& params);

}  // namespace xxz
