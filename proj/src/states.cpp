#include "xxz/states.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace xxz {

namespace {

constexpr double kDegeneracyTol = 1e-10;

Eigen::SelfAdjointEigenSolver<Matrix> solve_hermitian(const Operator& h) {
    if (hermiticity_residual(h.mat) > 1e-12)
        throw std::invalid_argument("expected a Hermitian operator");
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.mat);
    if (es.info() != Eigen::Success) throw numerical_error("Hermitian eigensolver failed");
    return es;
}

DensityMatrix pure_state(int sites, const Vector& psi, std::string label, std::string description) {
    Matrix rho = psi * psi.adjoint();
    DensityMatrix out{Operator(sites, std::move(rho)), std::move(label), std::move(description)};
    validate_density_matrix(out);
    return out;
}

}  // namespace

void validate_density_matrix(const DensityMatrix& rho) {
    if (std::abs(rho.mat().trace() - Complex(1.0)) > 1e-12)
        throw numerical_error("density matrix trace differs from 1: " + rho.label);
    if (hermiticity_residual(rho.mat()) > 1e-12)
        throw numerical_error("density matrix is not Hermitian: " + rho.label);
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.mat(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw numerical_error("eigensolver failed on density matrix");
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw numerical_error("density matrix has a negative eigenvalue: " + rho.label);
}

DensityMatrix ground_state(const Operator& hamiltonian) {
    const auto es = solve_hermitian(hamiltonian);
    const Eigen::VectorXd& energies = es.eigenvalues();
    const double e0 = energies(0);

    Eigen::Index count = 0;
    while (count < energies.size() && energies(count) <= e0 + kDegeneracyTol) ++count;

    Matrix rho = Matrix::Zero(hamiltonian.dim(), hamiltonian.dim());
    for (Eigen::Index k = 0; k < count; ++k) {
        const Vector psi = es.eigenvectors().col(k);
        rho += psi * psi.adjoint();
    }
    rho /= double(count);

    std::ostringstream desc;
    desc << "ground state projector, energy " << e0;
    if (count > 1) desc << ", equal mixture over a " << count << "-fold degenerate level";
    DensityMatrix out{Operator(hamiltonian.sites, std::move(rho)), "ground", desc.str()};
    validate_density_matrix(out);
    return out;
}

DensityMatrix thermal_state(const Operator& hamiltonian, double temperature) {
    if (!(temperature > 0.0))
        throw std::invalid_argument("thermal_state requires T > 0; T = 0 is ground_state");

    const auto es = solve_hermitian(hamiltonian);
    const Eigen::VectorXd& energies = es.eigenvalues();
    const double e0 = energies(0);

    Eigen::VectorXd weights(energies.size());
    for (Eigen::Index k = 0; k < energies.size(); ++k)
        weights(k) = std::exp(-(energies(k) - e0) / temperature);
    weights /= weights.sum();

    Matrix rho = es.eigenvectors() * weights.asDiagonal() * es.eigenvectors().adjoint();
    rho = 0.5 * (rho + rho.adjoint().eval());

    std::ostringstream desc;
    desc << "Gibbs state exp(-H/T)/Z at T = " << temperature;
    std::ostringstream label;
    label << "thermal_T" << temperature;
    DensityMatrix out{Operator(hamiltonian.sites, std::move(rho)), label.str(), desc.str()};
    validate_density_matrix(out);
    return out;
}

DensityMatrix domain_wall_state(int sites) {
    if (sites < 2 || sites % 2 != 0)
        throw std::invalid_argument("domain_wall_state requires an even site count");
    const Eigen::Index d = Eigen::Index{1} << sites;
    // first half up: sites 0..L/2-1 occupy the most significant bits
    const std::uint32_t idx = ((std::uint32_t{1} << (sites / 2)) - 1) << (sites / 2);
    Vector psi = Vector::Zero(d);
    psi(idx) = 1.0;
    return pure_state(sites, psi, "domain_wall",
                      "pure product state, first half up / second half down");
}

DensityMatrix z2_state(int sites) {
    if (sites < 2 || sites % 2 != 0)
        throw std::invalid_argument("z2_state requires an even site count");
    const Eigen::Index d = Eigen::Index{1} << sites;
    std::uint32_t neel_a = 0;
    for (int k = 0; k < sites; k += 2) neel_a |= site_mask(k, sites);
    const std::uint32_t neel_b = ~neel_a & (std::uint32_t(d) - 1);
    Vector psi = Vector::Zero(d);
    psi(neel_a) = 1.0 / std::sqrt(2.0);
    psi(neel_b) = 1.0 / std::sqrt(2.0);
    return pure_state(sites, psi, "z2",
                      "equal superposition of the two Neel product states");
}

DensityMatrix maximally_mixed(int sites) {
    if (sites < 1 || sites > 30) throw std::invalid_argument("site count out of range");
    const Eigen::Index d = Eigen::Index{1} << sites;
    DensityMatrix out{Operator(sites, Matrix::Identity(d, d) / double(d)), "maximally_mixed",
                      "identity / 2^L"};
    validate_density_matrix(out);
    return out;
}

}  // namespace xxz
