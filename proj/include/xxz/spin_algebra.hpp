#pragma once

#include "xxz/operator.hpp"

namespace xxz {

enum class SiteOp { X, Y, Z, Plus, Minus, ProjectorUp };

/// Single-site Pauli (or up-projector) embedded in the L-site space,
/// identity on every other site.
Operator site_operator(SiteOp kind, int site, int sites);

struct TotalSpin {
    Operator plus;     // S^+ = sum_i sigma_i^+
    Operator minus;    // S^- = sum_i sigma_i^-
    Operator z;        // S^z = (1/2) sum_i sigma_i^z
    Operator squared;  // S^2 = (1/2)(S^+S^- + S^-S^+) + (S^z)^2
};

TotalSpin total_spin_operators(int sites);

/// sigma_i^+ sigma_j^- embedded in the L-site space, i != j.
Operator pair_hopping(int i, int j, int sites);

}  // namespace xxz
