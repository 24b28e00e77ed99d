#include "xxz/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>

namespace xxz {

namespace {

constexpr double kBiorthTol = 1e-6;

std::string sector_name(SectorLabel label) {
    return "(" + std::to_string(label.m_ket) + ", " + std::to_string(label.m_bra) + ")";
}

// One degenerate eigenvalue family found in the raw solver output.
struct Family {
    std::vector<Eigen::Index> members;  // positions into the solver arrays
    Complex mean;
    int power = 1;  // smallest p with null (A - mean)^p of full dimension
    bool defective = false;
};

Eigen::Index null_dimension(const Matrix& shifted, int power, double ceiling) {
    Matrix powered = shifted;
    for (int p = 1; p < power; ++p) powered = powered * shifted;
    Eigen::BDCSVD<Matrix> svd(powered);
    const auto& sv = svd.singularValues();  // descending
    const double gate = std::pow(ceiling, power);
    Eigen::Index dim = 0;
    while (dim < sv.size() && sv(sv.size() - 1 - dim) <= gate) ++dim;
    return dim;
}

// Chains the sorted eigenvalues, then grows every multi-member chain to the
// full dimension of the matching invariant subspace: the solver scatters a
// high-multiplicity eigenvalue well past any fixed tolerance, and two pieces
// of one true family must never be treated independently. A family whose
// geometric multiplicity falls short of its algebraic one is defective; its
// generalized subspace (null of the powered shift) is recorded instead.
std::vector<Family> degenerate_families(const Matrix& a, const Vector& eigenvalues,
                                        SectorLabel label) {
    const Eigen::Index n = eigenvalues.size();
    std::vector<Eigen::Index> order(n);
    for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        const Complex lx = eigenvalues(x), ly = eigenvalues(y);
        if (lx.real() != ly.real()) return lx.real() < ly.real();
        return lx.imag() < ly.imag();
    });

    const double chain_tol = 100.0 * kClusterTol;
    std::vector<std::pair<std::size_t, std::size_t>> chains;
    std::size_t start = 0;
    while (start < order.size()) {
        std::size_t stop = start + 1;
        while (stop < order.size() &&
               std::abs(eigenvalues(order[stop]) - eigenvalues(order[stop - 1])) <= chain_tol)
            ++stop;
        chains.emplace_back(start, stop);
        start = stop;
    }

    std::vector<bool> taken(n, false);
    std::vector<Family> families;
    for (const auto& [lo, hi] : chains) {
        std::vector<Eigen::Index> members;
        for (std::size_t i = lo; i < hi; ++i)
            if (!taken[order[i]]) members.push_back(order[i]);
        if (members.size() < 2) continue;

        Complex mean = 0.0;
        for (const Eigen::Index m : members) mean += eigenvalues(m);
        mean /= double(members.size());
        double spread = 0.0;
        for (const Eigen::Index m : members)
            spread = std::max(spread, std::abs(eigenvalues(m) - mean));
        const double ceiling = std::max(1e-6 * (1.0 + std::abs(mean)), 2.0 * spread);

        const Matrix shifted = a - mean * Matrix::Identity(n, n);
        Family family;
        family.mean = mean;
        const Eigen::Index geometric = null_dimension(shifted, 1, ceiling);
        Eigen::Index dim = geometric;
        if (geometric < Eigen::Index(members.size())) {
            // Jordan structure: enlarge to the full generalized subspace
            family.defective = true;
            for (int p = 2; p <= 4 && dim < Eigen::Index(members.size()); ++p) {
                family.power = p;
                dim = null_dimension(shifted, p, ceiling);
            }
            if (dim < Eigen::Index(members.size())) {
                std::ostringstream msg;
                msg << "sector " << sector_name(label)
                    << ": cannot resolve the invariant subspace of the defective eigenvalue "
                    << mean.real() << " + " << mean.imag() << "i (multiplicity "
                    << members.size() << ", generalized dimension " << dim << ")";
                throw numerical_error(msg.str());
            }
        }

        // absorb scattered copies of the same eigenvalue, nearest first
        if (dim > Eigen::Index(members.size())) {
            std::vector<Eigen::Index> rest;
            for (Eigen::Index i = 0; i < n; ++i)
                if (!taken[i] && std::find(members.begin(), members.end(), i) == members.end())
                    rest.push_back(i);
            std::sort(rest.begin(), rest.end(), [&](Eigen::Index x, Eigen::Index y) {
                return std::abs(eigenvalues(x) - mean) < std::abs(eigenvalues(y) - mean);
            });
            for (const Eigen::Index i : rest) {
                if (Eigen::Index(members.size()) >= dim) break;
                if (std::abs(eigenvalues(i) - mean) > 1e-2 * (1.0 + std::abs(mean))) break;
                members.push_back(i);
            }
            if (Eigen::Index(members.size()) != dim) {
                std::ostringstream msg;
                msg << "sector " << sector_name(label) << ": eigenvalue family near "
                    << mean.real() << " + " << mean.imag() << "i spans a " << dim
                    << "-dimensional subspace but only " << members.size()
                    << " eigenvalues lie nearby";
                throw numerical_error(msg.str());
            }
        }

        for (const Eigen::Index m : members) taken[m] = true;
        family.members = std::move(members);
        families.push_back(std::move(family));
    }
    return families;
}

// Orthonormal basis of null((A - mean)^power), dimension k.
Matrix invariant_basis(const Matrix& a, Complex mean, int power, Eigen::Index k) {
    const Eigen::Index n = a.rows();
    const Matrix shifted = a - mean * Matrix::Identity(n, n);
    Matrix powered = shifted;
    for (int p = 1; p < power; ++p) powered = powered * shifted;
    Eigen::BDCSVD<Matrix> svd(powered, Eigen::ComputeThinV);
    return svd.matrixV().rightCols(k);
}

BlockModes decompose_block(const SectorBlock& sector) {
    BlockModes out;
    out.label = sector.label;
    out.ket_states = sector.ket_states;
    out.bra_states = sector.bra_states;

    if (!sector.mat.allFinite())
        throw numerical_error("non-finite block matrix in sector " + sector_name(sector.label));

    Eigen::ComplexEigenSolver<Matrix> es(sector.mat, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success)
        throw numerical_error("eigensolver failed to converge in sector " +
                              sector_name(sector.label));

    const Eigen::Index n = sector.mat.rows();
    const std::vector<Family> families =
        degenerate_families(sector.mat, es.eigenvalues(), sector.label);

    std::vector<int> family_of(n, -1);
    for (std::size_t f = 0; f < families.size(); ++f)
        for (const Eigen::Index m : families[f].members) family_of[m] = int(f);

    // assemble columns, cluster-contiguous, in ascending eigenvalue order
    std::vector<Eigen::Index> order(n);
    for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        const Complex lx = es.eigenvalues()(x), ly = es.eigenvalues()(y);
        if (lx.real() != ly.real()) return lx.real() < ly.real();
        return lx.imag() < ly.imag();
    });

    out.right.resize(n, n);
    out.eigenvalues.resize(n);
    std::vector<bool> placed(n, false);
    Eigen::Index next_col = 0;

    for (const Eigen::Index idx : order) {
        if (placed[idx]) continue;
        if (family_of[idx] < 0) {
            out.right.col(next_col) = es.eigenvectors().col(idx).normalized();
            out.eigenvalues(next_col) = es.eigenvalues()(idx);
            out.clusters.push_back(
                ModeCluster{next_col, 1, false, es.eigenvalues()(idx), Matrix()});
            placed[idx] = true;
            ++next_col;
            continue;
        }

        const Family& family = families[family_of[idx]];
        const Eigen::Index k = Eigen::Index(family.members.size());
        const Matrix basis = invariant_basis(sector.mat, family.mean, family.power, k);

        ModeCluster cluster;
        cluster.start = next_col;
        cluster.size = k;
        cluster.defective = family.defective;
        cluster.eigenvalue = family.mean;

        if (family.defective) {
            for (Eigen::Index c = 0; c < k; ++c) {
                out.right.col(next_col + c) = basis.col(c);
                out.eigenvalues(next_col + c) = family.mean;
            }
            out.has_defective = true;
        } else {
            // the projected matrix is far more accurate than the scattered
            // individual eigenvalues: use it to tell exact degeneracy (noise
            // only) from a genuinely split family
            const Matrix projected = basis.adjoint() * (sector.mat * basis);
            const double splitting =
                (projected - family.mean * Matrix::Identity(k, k)).cwiseAbs().maxCoeff();
            if (splitting <= 1e-9 * (1.0 + std::abs(family.mean))) {
                for (Eigen::Index c = 0; c < k; ++c) {
                    out.right.col(next_col + c) = basis.col(c);
                    out.eigenvalues(next_col + c) = family.mean;
                }
            } else {
                Eigen::ComplexEigenSolver<Matrix> small(projected, /*computeEigenvectors=*/true);
                if (small.info() != Eigen::Success)
                    throw numerical_error("cluster eigenproblem failed to converge in sector " +
                                          sector_name(sector.label));
                const Matrix resolved = basis * small.eigenvectors();
                for (Eigen::Index c = 0; c < k; ++c) {
                    out.right.col(next_col + c) = resolved.col(c).normalized();
                    out.eigenvalues(next_col + c) = small.eigenvalues()(c);
                }
            }
        }
        for (const Eigen::Index m : family.members) placed[m] = true;
        out.clusters.push_back(std::move(cluster));
        next_col += k;
    }

    // biorthonormal left system via the (now well-conditioned) inverse,
    // polished by Newton steps
    const Matrix id = Matrix::Identity(n, n);
    Eigen::PartialPivLU<Matrix> lu(out.right);
    out.left = lu.inverse();
    double worst = (out.left * out.right - id).cwiseAbs().maxCoeff();
    for (int iter = 0; iter < 6 && worst > 1e-13; ++iter) {
        const Matrix refined = out.left * (2.0 * id - out.right * out.left);
        const double improved = (refined * out.right - id).cwiseAbs().maxCoeff();
        if (improved >= worst) break;
        out.left = refined;
        worst = improved;
    }
    if (!(worst <= kBiorthTol))
        throw numerical_error("sector " + sector_name(sector.label) +
                              ": biorthonormality residual " + std::to_string(worst) +
                              " persists after degenerate-family extraction");

    // the coupling form W A V must be block diagonal over the clusters:
    // diagonal on healthy ones, small dense blocks on defective ones
    const Matrix coupling = out.left * (sector.mat * out.right);
    double structure = 0.0;
    for (const ModeCluster& cluster : out.clusters) {
        for (Eigen::Index c = 0; c < cluster.size; ++c) {
            for (Eigen::Index r = 0; r < n; ++r) {
                const bool inside = r >= cluster.start && r < cluster.start + cluster.size;
                if (!inside)
                    structure = std::max(structure, std::abs(coupling(r, cluster.start + c)));
            }
        }
    }
    if (structure > kBiorthTol)
        throw numerical_error("sector " + sector_name(sector.label) +
                              ": cluster coupling residual " + std::to_string(structure));

    for (ModeCluster& cluster : out.clusters) {
        if (cluster.defective) {
            cluster.coupling =
                coupling.block(cluster.start, cluster.start, cluster.size, cluster.size);
        } else {
            // Rayleigh-quotient cleanup of the eigenvalues
            for (Eigen::Index c = 0; c < cluster.size; ++c)
                out.eigenvalues(cluster.start + c) = coupling(cluster.start + c, cluster.start + c);
            if (cluster.size == 1) cluster.eigenvalue = out.eigenvalues(cluster.start);
        }
    }
    return out;
}

Operator embed(int sites, const BlockModes& block, const Vector& compact, bool transpose) {
    const Eigen::Index nk = Eigen::Index(block.ket_states.size());
    const Eigen::Index nb = Eigen::Index(block.bra_states.size());
    Operator out = zero_operator(sites);
    for (Eigen::Index b = 0; b < nb; ++b) {
        for (Eigen::Index a = 0; a < nk; ++a) {
            const Complex v = compact(b * nk + a);
            if (transpose)
                out.mat(block.bra_states[b], block.ket_states[a]) = v;
            else
                out.mat(block.ket_states[a], block.bra_states[b]) = v;
        }
    }
    return out;
}

}  // namespace

const ModeCluster* BlockModes::cluster_of(Eigen::Index column) const {
    for (const ModeCluster& cluster : clusters)
        if (column >= cluster.start && column < cluster.start + cluster.size) return &cluster;
    return nullptr;
}

bool SpectralDecomposition::defective(ModeRef m) const {
    const ModeCluster* cluster = blocks[m.block].cluster_of(m.index);
    return cluster != nullptr && cluster->defective;
}

Operator SpectralDecomposition::right_mode(ModeRef m) const {
    const BlockModes& block = blocks[m.block];
    if (defective(m))
        throw numerical_error("sector " + std::to_string(block.label.m_ket) + "," +
                              std::to_string(block.label.m_bra) +
                              ": eigenvalue is defective; its generalized vectors are not "
                              "eigenmodes");
    return embed(sites, block, block.right.col(m.index), /*transpose=*/false);
}

Operator SpectralDecomposition::left_mode(ModeRef m) const {
    const BlockModes& block = blocks[m.block];
    if (defective(m))
        throw numerical_error("sector " + std::to_string(block.label.m_ket) + "," +
                              std::to_string(block.label.m_bra) +
                              ": eigenvalue is defective; its generalized vectors are not "
                              "eigenmodes");
    // Tr(l X) = sum_ab l(b,a) X(a,b): the left row vector, laid out over the
    // block support, transposed into operator form.
    return embed(sites, block, block.left.row(m.index).transpose(), /*transpose=*/true);
}

SpectralDecomposition decompose(const LiouvillianBlocks& blocks, int threads) {
    SpectralDecomposition out;
    out.sites = blocks.sites;
    out.blocks.resize(blocks.blocks.size());

    if (threads <= 0) threads = int(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, int(blocks.blocks.size())));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error_message;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= blocks.blocks.size() || failed.load()) return;
            try {
                out.blocks[idx] = decompose_block(blocks.blocks[idx]);
            } catch (const std::exception& e) {
                std::scoped_lock lock(error_mutex);
                failed.store(true);
                if (error_message.empty()) error_message = e.what();
                return;
            }
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (failed.load()) throw numerical_error(error_message);

    for (int b = 0; b < int(out.blocks.size()); ++b)
        for (int k = 0; k < int(out.blocks[b].eigenvalues.size()); ++k)
            out.order.push_back(ModeRef{b, k});

    std::sort(out.order.begin(), out.order.end(), [&](ModeRef x, ModeRef y) {
        const Complex lx = out.eigenvalue(x);
        const Complex ly = out.eigenvalue(y);
        if (lx.real() != ly.real()) return lx.real() > ly.real();
        if (lx.imag() != ly.imag()) return lx.imag() < ly.imag();
        if (x.block != y.block) return x.block < y.block;
        return x.index < y.index;
    });
    out.sorted = true;
    return out;
}

Matrix block_restrict(const Matrix& full, const BlockModes& block) {
    const Eigen::Index nk = Eigen::Index(block.ket_states.size());
    const Eigen::Index nb = Eigen::Index(block.bra_states.size());
    Matrix compact(nk, nb);
    for (Eigen::Index b = 0; b < nb; ++b)
        for (Eigen::Index a = 0; a < nk; ++a)
            compact(a, b) = full(block.ket_states[a], block.bra_states[b]);
    return compact;
}

Vector block_coefficients(const BlockModes& block, const Matrix& full) {
    const Matrix compact = block_restrict(full, block);
    return block.left * Eigen::Map<const Vector>(compact.data(), compact.size());
}

double uncovered_support(const SpectralDecomposition& decomp, const Matrix& full) {
    std::vector<std::vector<bool>> covered(decomp.sites + 1,
                                           std::vector<bool>(decomp.sites + 1, false));
    for (const BlockModes& block : decomp.blocks)
        covered[block.label.m_ket][block.label.m_bra] = true;

    double mass = 0.0;
    for (Eigen::Index j = 0; j < full.cols(); ++j)
        for (Eigen::Index i = 0; i < full.rows(); ++i)
            if (!covered[magnetization(std::uint32_t(i))][magnetization(std::uint32_t(j))])
                mass += std::norm(full(i, j));
    return std::sqrt(mass);
}

DensityMatrix steady_state(const SpectralDecomposition& decomp, const DensityMatrix& rho0) {
    validate_density_matrix(rho0);
    if (rho0.dim() != (Eigen::Index{1} << decomp.sites))
        throw std::invalid_argument("state dimension does not match the decomposition");
    if (uncovered_support(decomp, rho0.mat()) > 1e-12)
        throw std::invalid_argument(
            "initial state has support outside the decomposed sectors");

    Matrix ss = Matrix::Zero(rho0.dim(), rho0.dim());
    for (const BlockModes& block : decomp.blocks) {
        const Vector coeff = block_coefficients(block, rho0.mat());
        Vector compact = Vector::Zero(coeff.size());
        bool any = false;
        for (const ModeCluster& cluster : block.clusters) {
            if (std::abs(cluster.eigenvalue) > kKernelTol) continue;
            if (cluster.defective)
                throw numerical_error(
                    "stationary kernel appears defective, which violates the contraction "
                    "property of the dynamics");
            for (Eigen::Index c = 0; c < cluster.size; ++c) {
                compact += coeff(cluster.start + c) * block.right.col(cluster.start + c);
                any = true;
            }
        }
        if (!any) continue;
        const Eigen::Index nk = Eigen::Index(block.ket_states.size());
        const Eigen::Index nb = Eigen::Index(block.bra_states.size());
        for (Eigen::Index b = 0; b < nb; ++b)
            for (Eigen::Index a = 0; a < nk; ++a)
                ss(block.ket_states[a], block.bra_states[b]) += compact(b * nk + a);
    }

    const double asym = hermiticity_residual(ss);
    if (asym > 1e-10)
        throw numerical_error("steady-state projection asymmetry " + std::to_string(asym));
    ss = 0.5 * (ss + ss.adjoint().eval());

    Eigen::SelfAdjointEigenSolver<Matrix> es(ss, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8)
        throw numerical_error("steady-state projection violates positivity (min eigenvalue " +
                              std::to_string(es.eigenvalues().minCoeff()) + ")");
    ss /= ss.trace().real();

    DensityMatrix out{Operator(decomp.sites, std::move(ss)), "steady_" + rho0.label,
                      "kernel projection of " + rho0.label};
    validate_density_matrix(out);
    return out;
}

std::vector<double> relaxation_times(const SpectralDecomposition& decomp) {
    std::vector<double> out;
    out.reserve(decomp.size());
    for (const ModeRef m : decomp.order) {
        const Complex lambda = decomp.eigenvalue(m);
        if (std::abs(lambda) <= kKernelTol || std::abs(lambda.real()) <= kKernelTol)
            out.push_back(std::numeric_limits<double>::infinity());
        else
            out.push_back(1.0 / std::abs(lambda.real()));
    }
    return out;
}

}  // namespace xxz
