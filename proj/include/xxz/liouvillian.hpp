#pragma once

#include "xxz/model.hpp"
#include "xxz/operator.hpp"

#include <compare>
#include <cstdint>
#include <utility>
#include <vector>

namespace xxz {

// Vectorization convention (column stacking, Eigen's native layout):
//   vec(X)[j*d + i] = X(i, j), so vec(|i><j|) sits at flat index j*d + i
// and the Kronecker identity reads vec(A X B) = (B^T kron A) vec(X).
// All superoperator and block bookkeeping below follows this stacking.

/// Action of the Lindblad generator without materializing the superoperator:
///   L(X) = -i[H, X] + sum_l (2 L_l X L_l^dagger - {L_l^dagger L_l, X}).
/// For jumps diagonal in the computational basis (the dephasing projectors)
/// the dissipator reduces to entrywise damping and is applied as such.
Operator apply_liouvillian(const LindbladModel& model, const Operator& x);

/// Dense 4^L x 4^L superoperator matrix,
///   -i(I kron H - H^T kron I)
///   + sum_l [2 conj(L_l) kron L_l - I kron (L_l^dag L_l) - (L_l^dag L_l)^T kron I].
/// Refuses site counts above dense_site_cap; use sector_decompose beyond it.
Matrix build_superoperator(const LindbladModel& model, int dense_site_cap = 5);

/// Sector of operators |ket><bra| with fixed up-spin counts on both sides.
struct SectorLabel {
    int m_ket = 0;
    int m_bra = 0;
    friend auto operator<=>(const SectorLabel&, const SectorLabel&) = default;
};

/// One invariant block of the Liouvillian. Operators supported on the basis
/// pairs (ket_states[a], bra_states[b]) stay within the block; the pair is
/// flattened column-style as a positional index p = b * ket_states.size() + a,
/// so a block vector is the column-major vec of the compact ket x bra matrix.
struct SectorBlock {
    SectorLabel label;
    std::vector<std::uint32_t> ket_states;  // ascending
    std::vector<std::uint32_t> bra_states;  // ascending
    Matrix mat;
};

struct LiouvillianBlocks {
    int sites = 0;
    std::vector<SectorBlock> blocks;  // ordered by (m_ket, m_bra)

    const SectorBlock* find(SectorLabel label) const;
};

/// Per-sector flat dimensions binom(L, m_ket) * binom(L, m_bra); no matrices
/// are built, suitable for planning at any L.
std::vector<std::pair<SectorLabel, Eigen::Index>> sector_dimensions(int sites);

/// Block decomposition over (m_ket, m_bra) sectors. Requires a Hamiltonian
/// with no matrix elements between magnetization sectors and jumps diagonal in
/// the computational basis.
LiouvillianBlocks sector_decompose(const LindbladModel& model);
LiouvillianBlocks sector_decompose(const LindbladModel& model,
                                   const std::vector<SectorLabel>& sectors);

}  // namespace xxz
