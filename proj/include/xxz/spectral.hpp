#pragma once

#include "xxz/liouvillian.hpp"
#include "xxz/states.hpp"

#include <cstddef>
#include <vector>

namespace xxz {

/// |lambda| at or below this is treated as the stationary kernel.
inline constexpr double kKernelTol = 1e-10;
/// Eigenvalues closer than this count as one degenerate cluster.
inline constexpr double kClusterTol = 1e-8;

/// One degenerate eigenvalue family. Healthy (semisimple) clusters carry
/// proper eigenvectors; a defective cluster carries an orthonormal basis of
/// its generalized invariant subspace together with the small coupling matrix
/// W_c A V_c, whose nilpotent part encodes the Jordan structure. Evolution
/// through a defective cluster uses the exact small-matrix exponential.
struct ModeCluster {
    Eigen::Index start = 0;
    Eigen::Index size = 1;
    bool defective = false;
    Complex eigenvalue;  // cluster mean
    Matrix coupling;     // size x size, defective clusters only
};

/// Eigensystem of one sector block. Column k of `right` is the vectorized
/// right mode (column-major over the compact ket x bra support); row k of
/// `left` is the matching left functional, normalized so that
///   Tr(l_j r_k) = left.row(j) * right.col(k) = delta_jk.
/// Columns are grouped so every cluster occupies a contiguous range.
struct BlockModes {
    SectorLabel label;
    std::vector<std::uint32_t> ket_states;
    std::vector<std::uint32_t> bra_states;
    Vector eigenvalues;
    Matrix right;
    Matrix left;
    std::vector<ModeCluster> clusters;
    bool has_defective = false;

    const ModeCluster* cluster_of(Eigen::Index column) const;
};

struct ModeRef {
    int block = 0;
    int index = 0;
};

/// All eigenmodes of the decomposed blocks, globally ordered by descending
/// real part (ties broken deterministically).
struct SpectralDecomposition {
    int sites = 0;
    bool sorted = false;
    std::vector<BlockModes> blocks;
    std::vector<ModeRef> order;

    std::size_t size() const { return order.size(); }
    Complex eigenvalue(ModeRef m) const { return blocks[m.block].eigenvalues(m.index); }
    SectorLabel sector(ModeRef m) const { return blocks[m.block].label; }
    bool defective(ModeRef m) const;

    /// Right eigen-operator embedded in the full 2^L space. Members of a
    /// defective cluster are generalized vectors, not eigenmodes; requesting
    /// one raises numerical_error.
    Operator right_mode(ModeRef m) const;
    /// Left eigen-operator, embedded; pairing is Tr(l_j r_k) = delta_jk with
    /// no adjoint, so overlap coefficients read c_k = Tr(l_k rho).
    Operator left_mode(ModeRef m) const;
};

/// Full eigensystem of every block. Blocks are processed independently
/// (optionally in parallel). Degenerate eigenvalue families are re-extracted
/// from invariant subspaces; genuinely defective families are kept as
/// explicit clusters rather than silently mis-diagonalized.
SpectralDecomposition decompose(const LiouvillianBlocks& blocks, int threads = 1);

/// Compact ket x bra restriction of a full operator to a block's support.
Matrix block_restrict(const Matrix& full, const BlockModes& block);

/// Overlap coefficients c_k = Tr(l_k X) for every mode of one block.
Vector block_coefficients(const BlockModes& block, const Matrix& full);

/// Frobenius mass of `full` lying outside the decomposed sectors; used to
/// refuse reconstruction from a partial decomposition.
double uncovered_support(const SpectralDecomposition& decomp, const Matrix& full);

/// Projection of rho0 onto the stationary kernel: the steady state actually
/// reached from rho0. Symmetrized, renormalized, positivity-checked.
DensityMatrix steady_state(const SpectralDecomposition& decomp, const DensityMatrix& rho0);

/// tau_k = 1/|Re lambda_k| in global sorted order; kernel modes map to
/// +infinity explicitly.
std::vector<double> relaxation_times(const SpectralDecomposition& decomp);

}  // namespace xxz
