#include "xxz/spin_algebra.hpp"

namespace xxz {

Operator site_operator(SiteOp kind, int site, int sites) {
    if (sites < 1 || sites > 30) throw std::invalid_argument("site count out of range");
    if (site < 0 || site >= sites) throw std::out_of_range("site index out of range");

    const Eigen::Index d = Eigen::Index{1} << sites;
    const std::uint32_t mask = site_mask(site, sites);
    Matrix m = Matrix::Zero(d, d);
    const Complex i_unit(0.0, 1.0);

    for (std::uint32_t n = 0; n < static_cast<std::uint32_t>(d); ++n) {
        const bool up = (n & mask) != 0;
        switch (kind) {
            case SiteOp::X:
                m(n ^ mask, n) = 1.0;
                break;
            case SiteOp::Y:
                // sigma^y = -i sigma^+ + i sigma^-
                m(n ^ mask, n) = up ? i_unit : -i_unit;
                break;
            case SiteOp::Z:
                m(n, n) = up ? 1.0 : -1.0;
                break;
            case SiteOp::Plus:
                if (!up) m(n | mask, n) = 1.0;
                break;
            case SiteOp::Minus:
                if (up) m(n & ~mask, n) = 1.0;
                break;
            case SiteOp::ProjectorUp:
                if (up) m(n, n) = 1.0;
                break;
        }
    }
    return Operator(sites, std::move(m));
}

TotalSpin total_spin_operators(int sites) {
    if (sites < 1) throw std::invalid_argument("site count must be positive");
    const Eigen::Index d = Eigen::Index{1} << sites;
    Matrix plus = Matrix::Zero(d, d);
    Matrix minus = Matrix::Zero(d, d);
    Matrix z = Matrix::Zero(d, d);
    for (int k = 0; k < sites; ++k) {
        plus += site_operator(SiteOp::Plus, k, sites).mat;
        minus += site_operator(SiteOp::Minus, k, sites).mat;
        z += 0.5 * site_operator(SiteOp::Z, k, sites).mat;
    }
    Matrix squared = 0.5 * (plus * minus + minus * plus) + z * z;
    return TotalSpin{Operator(sites, std::move(plus)), Operator(sites, std::move(minus)),
                     Operator(sites, std::move(z)), Operator(sites, std::move(squared))};
}

Operator pair_hopping(int i, int j, int sites) {
    if (sites < 1 || sites > 30) throw std::invalid_argument("site count out of range");
    if (i < 0 || i >= sites || j < 0 || j >= sites) throw std::out_of_range("site index out of range");
    if (i == j) throw std::invalid_argument("pair_hopping requires distinct sites");

    const Eigen::Index d = Eigen::Index{1} << sites;
    const std::uint32_t mi = site_mask(i, sites);
    const std::uint32_t mj = site_mask(j, sites);
    Matrix m = Matrix::Zero(d, d);
    // sigma_i^+ sigma_j^-: moves an up spin from site j to site i
    for (std::uint32_t n = 0; n < static_cast<std::uint32_t>(d); ++n) {
        if ((n & mj) != 0 && (n & mi) == 0) m((n & ~mj) | mi, n) = 1.0;
    }
    return Operator(sites, std::move(m));
}

}  // namespace xxz
