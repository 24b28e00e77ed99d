#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_helpers.hpp"
#include "xxz/analysis.hpp"
#include "xxz/dynamics.hpp"
#include "xxz/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <memory>

using namespace xxz;

namespace {

std::shared_ptr<const SpectralDecomposition> shared_decomposition(const LindbladModel& model,
                                                                  int threads = 2) {
    return std::make_shared<SpectralDecomposition>(decompose(sector_decompose(model), threads));
}

}  // namespace

TEST_CASE("time grids") {
    const auto hybrid = hybrid_time_grid(10.0, 200);
    REQUIRE(hybrid.size() == 200);
    CHECK(hybrid.front() == 0.0);
    CHECK(hybrid.back() == doctest::Approx(10.0));
    for (std::size_t i = 1; i < hybrid.size(); ++i) CHECK(hybrid[i] > hybrid[i - 1]);

    const auto linear = linear_time_grid(5.0, 11);
    CHECK(linear[4] == doctest::Approx(2.0));
    CHECK_THROWS_AS(hybrid_time_grid(-1.0, 100), std::invalid_argument);
}

TEST_CASE("trace distance basics") {
    const DensityMatrix a = testutil::random_density(2, 11);
    CHECK(trace_distance(a.op, a.op) == doctest::Approx(0.0));

    // orthogonal pure states
    Operator up = zero_operator(1), down = zero_operator(1);
    up.mat(1, 1) = 1.0;
    down.mat(0, 0) = 1.0;
    CHECK(trace_distance(up, down) == doctest::Approx(1.0));

    // pure state against the maximally mixed single spin
    CHECK(trace_distance(up, maximally_mixed(1).op) == doctest::Approx(0.5));

    CHECK_THROWS_AS(trace_distance(up, testutil::random_operator(1, 3)),
                    std::invalid_argument);
}

TEST_CASE("spectral evolution fixes t = 0 and stationary states") {
    const LindbladModel model = build_model(ModelParams{3, 1.0, 1.0, 1.0});
    const auto decomp = shared_decomposition(model);

    const DensityMatrix rho0 = testutil::random_density(3, 21);
    CHECK((evolve_spectral_at(*decomp, rho0, 0.0).mat() - rho0.mat()).norm() <= 1e-8);

    const DensityMatrix mixed = maximally_mixed(3);
    for (const double t : {0.5, 2.0, 9.0})
        CHECK((evolve_spectral_at(*decomp, mixed, t).mat() - mixed.mat()).norm() <= 1e-10);
}

TEST_CASE("ground-state distance decays at exactly twice the unit rate") {
    const LindbladModel model = build_model(ModelParams{4, 1.0, 1.0, 1.0});
    const auto decomp = shared_decomposition(model);
    const DensityMatrix rho0 = ground_state(model.hamiltonian);
    const DensityMatrix ss = steady_state(*decomp, rho0);

    // Frobenius norm of rho(t) - rho_ss falls as e^{-2t}: fit the log-slope
    std::vector<double> ts, logs;
    for (double t = 0.5; t <= 3.0; t += 0.125) {
        const DensityMatrix rho_t = evolve_spectral_at(*decomp, rho0, t);
        ts.push_back(t);
        logs.push_back(std::log((rho_t.mat() - ss.mat()).norm()));
    }
    double t_mean = 0, l_mean = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        t_mean += ts[i];
        l_mean += logs[i];
    }
    t_mean /= double(ts.size());
    l_mean /= double(ts.size());
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        sxx += (ts[i] - t_mean) * (ts[i] - t_mean);
        sxy += (ts[i] - t_mean) * (logs[i] - l_mean);
    }
    CHECK(sxy / sxx == doctest::Approx(-2.0).epsilon(1e-6));
}

TEST_CASE("integrator cross-validates the spectral path") {
    const LindbladModel model = build_model(ModelParams{3, 1.0, 1.0, 1.1});
    const auto decomp = shared_decomposition(model);
    const auto grid = linear_time_grid(5.0, 26);

    for (const std::uint64_t seed : {4ULL, 17ULL}) {
        const DensityMatrix rho0 = testutil::random_density(3, seed);
        const auto spectral = evolve_spectral(*decomp, rho0, grid);
        const auto integrated = evolve_integrate(model, rho0, grid);
        REQUIRE(spectral.size() == integrated.size());
        double worst = 0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            worst = std::max(worst, trace_distance(spectral[i].op, integrated[i].op));
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("integrator preserves trace, hermiticity and positivity") {
    const LindbladModel model = build_model(ModelParams{3, 1.0, 2.0, 1.0});
    const DensityMatrix rho0 = testutil::random_density(3, 8);
    const auto states = evolve_integrate(model, rho0, linear_time_grid(4.0, 17));
    for (const DensityMatrix& rho : states) {
        CHECK(std::abs(rho.mat().trace() - Complex(1.0)) <= 1e-10);
        CHECK(hermiticity_residual(rho.mat()) <= 1e-10);
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho.mat(), Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() >= -1e-8);
    }
}

TEST_CASE("semigroup property of the spectral propagator") {
    const LindbladModel model = build_model(ModelParams{3, 1.0, 1.0, 1.0});
    const auto decomp = shared_decomposition(model);
    const DensityMatrix rho0 = testutil::random_density(3, 31);

    const double t1 = 0.7, t2 = 1.9;
    const DensityMatrix mid = evolve_spectral_at(*decomp, rho0, t1);
    const DensityMatrix stepwise = evolve_spectral_at(*decomp, mid, t2);
    const DensityMatrix direct = evolve_spectral_at(*decomp, rho0, t1 + t2);
    CHECK((stepwise.mat() - direct.mat()).norm() <= 1e-8);
}

TEST_CASE("distance trajectory of the steady state vanishes identically") {
    const LindbladModel model = build_model(ModelParams{3, 1.0, 1.0, 1.0});
    const auto decomp = shared_decomposition(model);
    const DensityMatrix rho0 = testutil::random_density(3, 41);
    const DensityMatrix ss = steady_state(*decomp, rho0);

    const Trajectory traj =
        distance_trajectory(decomp, ss, hybrid_time_grid(5.0, 40), ModelParams{3, 1.0, 1.0, 1.0});
    for (const double d : traj.distances) CHECK(d <= 1e-9);
}

TEST_CASE("trajectories are bounded and contractive") {
    const LindbladModel model = build_model(ModelParams{4, 1.0, 2.0, 1.1});
    const auto decomp = shared_decomposition(model);
    const DensityMatrix rho0 = testutil::random_density(4, 51);
    const Trajectory traj = distance_trajectory(decomp, rho0, hybrid_time_grid(8.0, 80),
                                                ModelParams{4, 1.0, 2.0, 1.1});
    for (std::size_t i = 0; i < traj.distances.size(); ++i) {
        CHECK(traj.distances[i] >= 0.0);
        CHECK(traj.distances[i] <= 1.0 + 1e-12);
        if (i > 0) CHECK(traj.distances[i] <= traj.distances[i - 1] + 1e-9);
    }
    CHECK(traj.distance_at(traj.times[5]) == doctest::Approx(traj.distances[5]).epsilon(1e-10));
}

TEST_CASE("defaults relax to the steady state by t = 20") {
    const ModelParams params{4, 1.0, 2.0, 1.0};
    const LindbladModel model = build_model(params);
    const auto decomp = shared_decomposition(model);
    const auto grid = hybrid_time_grid(20.0, 60);
    for (const DensityMatrix& rho0 :
         {ground_state(model.hamiltonian), thermal_state(model.hamiltonian, 10.0)}) {
        const Trajectory traj = distance_trajectory(decomp, rho0, grid, params);
        CHECK(traj.distances.back() <= 1e-6);
    }
}

TEST_CASE("uncovered support is rejected") {
    const LindbladModel model = build_model(ModelParams{3, 1.0, 1.0, 1.0});
    const auto partial = std::make_shared<SpectralDecomposition>(
        decompose(sector_decompose(model, {SectorLabel{0, 0}, SectorLabel{1, 1}})));
    const DensityMatrix mixed = maximally_mixed(3);
    CHECK_THROWS_AS(evolve_spectral_at(*partial, mixed, 1.0), std::invalid_argument);
}
