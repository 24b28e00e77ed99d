#include "xxz/model.hpp"

#include "xxz/spin_algebra.hpp"

#include <cmath>

namespace xxz {

void validate(const ModelParams& params) {
    if (params.sites < 2) throw std::invalid_argument("model requires at least 2 sites");
    if (params.sites > 30) throw std::invalid_argument("site count out of range");
    if (!(params.alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
    if (!std::isfinite(params.coupling) || params.coupling == 0.0)
        throw std::invalid_argument("coupling J must be finite and nonzero");
    if (!std::isfinite(params.delta)) throw std::invalid_argument("delta must be finite");
}

Operator build_hamiltonian(const ModelParams& params) {
    validate(params);
    const int L = params.sites;
    const Eigen::Index d = Eigen::Index{1} << L;
    Matrix h = Matrix::Zero(d, d);

    for (int i = 0; i < L; ++i) {
        for (int j = i + 1; j < L; ++j) {
            const double w = params.coupling / std::pow(double(j - i), params.alpha);
            const std::uint32_t mi = site_mask(i, L);
            const std::uint32_t mj = site_mask(j, L);
            for (std::uint32_t n = 0; n < static_cast<std::uint32_t>(d); ++n) {
                const double zi = (n & mi) ? 1.0 : -1.0;
                const double zj = (n & mj) ? 1.0 : -1.0;
                // delta S_i^z S_j^z
                h(n, n) += w * params.delta * 0.25 * zi * zj;
                // S^x S^x + S^y S^y = (sigma_i^+ sigma_j^- + h.c.)/2, flips antiparallel pairs
                if (zi * zj < 0) h(n ^ mi ^ mj, n) += w * 0.5;
            }
        }
    }
    return Operator(L, std::move(h));
}

std::vector<Operator> build_jumps(int sites) {
    if (sites < 1) throw std::invalid_argument("site count must be positive");
    std::vector<Operator> jumps;
    jumps.reserve(sites);
    for (int l = 0; l < sites; ++l) jumps.push_back(site_operator(SiteOp::ProjectorUp, l, sites));
    return jumps;
}

LindbladModel build_model(const ModelParams& params) {
    Operator h = build_hamiltonian(params);
    return LindbladModel{params.sites, std::move(h), build_jumps(params.sites)};
}

LindbladModel dephasing_model(int sites) {
    return LindbladModel{sites, zero_operator(sites), build_jumps(sites)};
}

AllToAllForm all_to_all_check(const ModelParams& params) {
    if (params.alpha != 0.0) throw std::invalid_argument("all_to_all_check requires alpha == 0");
    validate(params);

    const Operator h = build_hamiltonian(params);
    const TotalSpin spin = total_spin_operators(params.sites);
    const Eigen::Index d = h.dim();

    Matrix form = spin.squared.mat - (1.0 - params.delta) * (spin.z.mat * spin.z.mat);
    form *= 0.5 * params.coupling;

    // least-squares additive constant: c = Tr(H - form) / dim
    Matrix diff = h.mat - form;
    const double c = diff.trace().real() / double(d);
    diff -= c * Matrix::Identity(d, d);
    return AllToAllForm{diff.norm(), c};
}

}  // namespace xxz
