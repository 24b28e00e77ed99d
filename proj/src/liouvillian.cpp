#include "xxz/liouvillian.hpp"

#include <algorithm>
#include <string>

namespace xxz {

namespace {

constexpr double kStructureTol = 1e-14;

bool is_diagonal(const Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (i != j && std::abs(m(i, j)) > kStructureTol) return false;
    return true;
}

// Damping coefficient of the coherence |i><j| under diagonal jumps:
//   sum_l (2 d_l[i] conj(d_l[j]) - |d_l[i]|^2 - |d_l[j]|^2).
// For the per-site up-projectors this is minus the Hamming distance of i, j.
Complex diagonal_damping(const std::vector<Vector>& diags, std::uint32_t i, std::uint32_t j) {
    Complex c = 0.0;
    for (const Vector& d : diags) {
        c += 2.0 * d(i) * std::conj(d(j)) - std::norm(d(i)) - std::norm(d(j));
    }
    return c;
}

std::vector<Vector> jump_diagonals(const LindbladModel& model) {
    std::vector<Vector> diags;
    diags.reserve(model.jumps.size());
    for (const Operator& jump : model.jumps) {
        if (!is_diagonal(jump.mat)) return {};
        diags.push_back(jump.mat.diagonal());
    }
    return diags;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

void check_sector_structure(const LindbladModel& model) {
    const Matrix& h = model.hamiltonian.mat;
    for (Eigen::Index j = 0; j < h.cols(); ++j) {
        for (Eigen::Index i = 0; i < h.rows(); ++i) {
            if (std::abs(h(i, j)) > kStructureTol &&
                magnetization(std::uint32_t(i)) != magnetization(std::uint32_t(j))) {
                throw std::invalid_argument(
                    "Hamiltonian couples different magnetization sectors; "
                    "sector decomposition does not apply");
            }
        }
    }
    for (const Operator& jump : model.jumps) {
        if (!is_diagonal(jump.mat))
            throw std::invalid_argument("sector decomposition requires jumps diagonal "
                                        "in the computational basis");
    }
}

}  // namespace

Operator apply_liouvillian(const LindbladModel& model, const Operator& x) {
    if (x.dim() != model.hamiltonian.dim())
        throw std::invalid_argument("operator dimension does not match the model");

    const Matrix& h = model.hamiltonian.mat;
    Matrix out = Complex(0.0, -1.0) * (h * x.mat - x.mat * h);

    const std::vector<Vector> diags = jump_diagonals(model);
    if (!diags.empty() || model.jumps.empty()) {
        const auto d = static_cast<std::uint32_t>(x.dim());
        for (std::uint32_t j = 0; j < d; ++j)
            for (std::uint32_t i = 0; i < d; ++i)
                out(i, j) += diagonal_damping(diags, i, j) * x.mat(i, j);
    } else {
        for (const Operator& jump : model.jumps) {
            const Matrix& l = jump.mat;
            const Matrix ldl = l.adjoint() * l;
            out += 2.0 * l * x.mat * l.adjoint() - ldl * x.mat - x.mat * ldl;
        }
    }
    return Operator(x.sites, std::move(out));
}

Matrix build_superoperator(const LindbladModel& model, int dense_site_cap) {
    if (model.sites > dense_site_cap)
        throw resource_error("dense superoperator capped at " + std::to_string(dense_site_cap) +
                             " sites; use sector_decompose for larger systems");

    const Eigen::Index d = model.hamiltonian.dim();
    const Matrix id = Matrix::Identity(d, d);
    const Matrix& h = model.hamiltonian.mat;

    Matrix sop = Complex(0.0, -1.0) * (kron(id, h) - kron(h.transpose(), id));
    for (const Operator& jump : model.jumps) {
        const Matrix& l = jump.mat;
        const Matrix ldl = l.adjoint() * l;
        sop += 2.0 * kron(l.conjugate(), l) - kron(id, ldl) - kron(ldl.transpose(), id);
    }
    return sop;
}

const SectorBlock* LiouvillianBlocks::find(SectorLabel label) const {
    auto it = std::lower_bound(blocks.begin(), blocks.end(), label,
                               [](const SectorBlock& b, SectorLabel l) { return b.label < l; });
    if (it != blocks.end() && it->label == label) return &*it;
    return nullptr;
}

std::vector<std::pair<SectorLabel, Eigen::Index>> sector_dimensions(int sites) {
    const auto by_m = states_by_magnetization(sites);
    std::vector<std::pair<SectorLabel, Eigen::Index>> out;
    out.reserve((sites + 1) * (sites + 1));
    for (int mk = 0; mk <= sites; ++mk)
        for (int mb = 0; mb <= sites; ++mb)
            out.emplace_back(SectorLabel{mk, mb},
                             Eigen::Index(by_m[mk].size()) * Eigen::Index(by_m[mb].size()));
    return out;
}

LiouvillianBlocks sector_decompose(const LindbladModel& model) {
    std::vector<SectorLabel> all;
    all.reserve((model.sites + 1) * (model.sites + 1));
    for (int mk = 0; mk <= model.sites; ++mk)
        for (int mb = 0; mb <= model.sites; ++mb) all.push_back(SectorLabel{mk, mb});
    return sector_decompose(model, all);
}

LiouvillianBlocks sector_decompose(const LindbladModel& model,
                                   const std::vector<SectorLabel>& sectors) {
    check_sector_structure(model);

    const auto by_m = states_by_magnetization(model.sites);
    const std::vector<Vector> diags = jump_diagonals(model);
    const Matrix& h = model.hamiltonian.mat;

    std::vector<SectorLabel> wanted = sectors;
    std::sort(wanted.begin(), wanted.end());
    wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());

    LiouvillianBlocks out;
    out.sites = model.sites;
    out.blocks.reserve(wanted.size());

    for (const SectorLabel label : wanted) {
        if (label.m_ket < 0 || label.m_ket > model.sites || label.m_bra < 0 ||
            label.m_bra > model.sites)
            throw std::invalid_argument("sector label out of range");

        const std::vector<std::uint32_t>& kets = by_m[label.m_ket];
        const std::vector<std::uint32_t>& bras = by_m[label.m_bra];
        const Eigen::Index nk = Eigen::Index(kets.size());
        const Eigen::Index nb = Eigen::Index(bras.size());

        SectorBlock block;
        block.label = label;
        block.ket_states = kets;
        block.bra_states = bras;
        block.mat = Matrix::Zero(nk * nb, nk * nb);

        // column p = b*nk + a is the image of |kets[a]><bras[b]|:
        //   -i H|a><b| contributes -i H(a', a) at rows (a', b),
        //   +i |a><b|H contributes +i H(b, b') at rows (a, b'),
        //   the dissipator damps the diagonal.
        for (Eigen::Index b = 0; b < nb; ++b) {
            for (Eigen::Index a = 0; a < nk; ++a) {
                const Eigen::Index col = b * nk + a;
                for (Eigen::Index ap = 0; ap < nk; ++ap) {
                    const Complex v = h(kets[ap], kets[a]);
                    if (v != 0.0) block.mat(b * nk + ap, col) += Complex(0.0, -1.0) * v;
                }
                for (Eigen::Index bp = 0; bp < nb; ++bp) {
                    const Complex v = h(bras[b], bras[bp]);
                    if (v != 0.0) block.mat(bp * nk + a, col) += Complex(0.0, 1.0) * v;
                }
                block.mat(col, col) += diagonal_damping(diags, kets[a], bras[b]);
            }
        }
        out.blocks.push_back(std::move(block));
    }
    return out;
}

}  // namespace xxz
