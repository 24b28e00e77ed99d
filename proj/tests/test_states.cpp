#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_helpers.hpp"
#include "xxz/model.hpp"
#include "xxz/spin_algebra.hpp"
#include "xxz/states.hpp"

#include <Eigen/Eigenvalues>

using namespace xxz;

TEST_CASE("two-site ground state is the singlet") {
    const Operator h = build_hamiltonian(ModelParams{2, 1.0, 1.0, 1.0});
    const DensityMatrix rho = ground_state(h);

    // oracle: (|ud> - |du>)/sqrt(2) = (e2 - e1)/sqrt(2)
    Vector singlet = Vector::Zero(4);
    singlet(1) = -1.0 / std::sqrt(2.0);
    singlet(2) = 1.0 / std::sqrt(2.0);
    const Matrix expected = singlet * singlet.adjoint();
    CHECK((rho.mat() - expected).norm() <= 1e-12);
    CHECK((rho.mat() * h.mat).trace().real() == doctest::Approx(-0.75).epsilon(1e-12));
    CHECK((rho.mat() * rho.mat()).trace().real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("four-site isotropic ground state is a global singlet") {
    const Operator h = build_hamiltonian(ModelParams{4, 1.0, 1.0, 1.0});

    // oracle: lowest eigenvector straight from the Hermitian solver
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.mat);
    const Vector psi = es.eigenvectors().col(0);
    CHECK(es.eigenvalues()(1) - es.eigenvalues()(0) > 1e-10);  // nondegenerate

    const DensityMatrix rho = ground_state(h);
    CHECK((rho.mat() - psi * psi.adjoint()).norm() <= 1e-10);

    const TotalSpin spin = total_spin_operators(4);
    CHECK(std::abs((rho.mat() * spin.squared.mat).trace()) <= 1e-10);

    // supported on a single magnetization sector (m = 2)
    for (Eigen::Index j = 0; j < rho.dim(); ++j)
        for (Eigen::Index i = 0; i < rho.dim(); ++i)
            if (magnetization(std::uint32_t(i)) != 2 || magnetization(std::uint32_t(j)) != 2)
                CHECK(std::abs(rho.mat()(i, j)) <= 1e-12);
}

TEST_CASE("degenerate ground levels become an equal mixture") {
    // alpha = 0, L = 4: two exactly degenerate global singlets
    const Operator h = build_hamiltonian(ModelParams{4, 1.0, 0.0, 1.0});
    const DensityMatrix rho = ground_state(h);
    validate_density_matrix(rho);
    const double purity = (rho.mat() * rho.mat()).trace().real();
    CHECK(purity == doctest::Approx(0.5).epsilon(1e-10));
    // the mixture keeps all Hamiltonian symmetry: it commutes with H
    CHECK((rho.mat() * h.mat - h.mat * rho.mat()).norm() <= 1e-10);
}

TEST_CASE("thermal state limits") {
    const Operator h = build_hamiltonian(ModelParams{3, 1.0, 1.0, 1.0});

    const DensityMatrix hot = thermal_state(h, 1e9);
    CHECK((hot.mat() - Matrix::Identity(8, 8) / 8.0).cwiseAbs().maxCoeff() <= 1e-6);

    const DensityMatrix cold = thermal_state(h, 1e-9);
    const DensityMatrix ground = ground_state(h);
    CHECK((cold.mat() - ground.mat()).cwiseAbs().maxCoeff() <= 1e-6);

    CHECK_THROWS_AS(thermal_state(h, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(thermal_state(h, -1.0), std::invalid_argument);
}

TEST_CASE("thermal state is normalized and commutes with H") {
    const Operator h = build_hamiltonian(ModelParams{6, 1.0, 2.0, 1.0});
    const DensityMatrix rho = thermal_state(h, 10.0);
    CHECK(std::abs(rho.mat().trace() - Complex(1.0)) <= 1e-14);
    CHECK((rho.mat() * h.mat - h.mat * rho.mat()).norm() <= 1e-12);
    CHECK(rho.label == "thermal_T10");
}

TEST_CASE("domain wall state") {
    const DensityMatrix rho = domain_wall_state(4);
    CHECK(rho.mat()(12, 12) == Complex(1.0));  // bits 1100
    CHECK(rho.mat().trace() == Complex(1.0));
    CHECK(rho.mat().norm() == doctest::Approx(1.0));
    CHECK_THROWS_AS(domain_wall_state(3), std::invalid_argument);
}

TEST_CASE("z2 state is the symmetric Neel superposition") {
    const DensityMatrix rho = z2_state(4);
    CHECK((rho.mat() * rho.mat()).trace().real() == doctest::Approx(1.0).epsilon(1e-12));

    // invariant under the global spin flip (eigenvalue +1)
    Matrix flip = Matrix::Identity(1, 1);
    for (int k = 0; k < 4; ++k) flip = testutil::kron(flip, testutil::pauli_x());
    CHECK((flip * rho.mat() * flip - rho.mat()).norm() <= 1e-12);

    // support on the two Neel patterns only: 1010 and 0101
    CHECK(std::abs(rho.mat()(10, 10) - Complex(0.5)) <= 1e-12);
    CHECK(std::abs(rho.mat()(5, 5) - Complex(0.5)) <= 1e-12);
    CHECK_THROWS_AS(z2_state(5), std::invalid_argument);
}

TEST_CASE("factory outputs satisfy the density-matrix invariants") {
    const Operator h = build_hamiltonian(ModelParams{4, 1.0, 2.0, 1.1});
    for (const DensityMatrix& rho :
         {ground_state(h), thermal_state(h, 10.0), domain_wall_state(4), z2_state(4),
          maximally_mixed(4)}) {
        CHECK_NOTHROW(validate_density_matrix(rho));
        CHECK(!rho.label.empty());
        CHECK(!rho.description.empty());
    }
}
