#include "xxz/operator.hpp"

namespace xxz {

std::vector<std::vector<std::uint32_t>> states_by_magnetization(int sites) {
    if (sites < 1 || sites > 30) throw std::invalid_argument("site count out of range");
    std::vector<std::vector<std::uint32_t>> out(sites + 1);
    const std::uint32_t dim = std::uint32_t{1} << sites;
    for (std::uint32_t n = 0; n < dim; ++n) out[magnetization(n)].push_back(n);
    return out;
}

Operator::Operator(int sites_, Matrix mat_) : sites(sites_), mat(std::move(mat_)) {
    if (sites < 1 || sites > 30) throw std::invalid_argument("site count out of range");
    const Eigen::Index expected = Eigen::Index{1} << sites;
    if (mat.rows() != expected || mat.cols() != expected)
        throw std::invalid_argument("operator dimension does not match 2^sites");
    if (!mat.allFinite()) throw numerical_error("operator has non-finite entries");
}

Operator identity_operator(int sites) {
    const Eigen::Index d = Eigen::Index{1} << sites;
    return Operator(sites, Matrix::Identity(d, d));
}

Operator zero_operator(int sites) {
    const Eigen::Index d = Eigen::Index{1} << sites;
    return Operator(sites, Matrix::Zero(d, d));
}

double hermiticity_residual(const Matrix& a) {
    return (a - a.adjoint()).norm();
}

}  // namespace xxz
