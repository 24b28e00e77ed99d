#include "xxz/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <string>

namespace xxz {

namespace {

void check_time_grid(const std::vector<double>& times) {
    if (times.empty()) throw std::invalid_argument("empty time grid");
    if (times.front() < 0.0) throw std::invalid_argument("negative time");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] <= times[i - 1]) throw std::invalid_argument("time grid must be increasing");
}

DensityMatrix finish_state(int sites, Matrix rho, const std::string& label, double asym_tol) {
    const double asym = hermiticity_residual(rho);
    if (asym > asym_tol)
        throw numerical_error("evolved state asymmetry " + std::to_string(asym) + " for " + label);
    rho = 0.5 * (rho + rho.adjoint().eval());
    return DensityMatrix{Operator(sites, std::move(rho)), label, "evolved state"};
}

}  // namespace

std::vector<double> hybrid_time_grid(double t_max, int n_points) {
    if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
    if (n_points < 4) throw std::invalid_argument("need at least 4 grid points");

    const int n_log = n_points / 2;
    const int n_lin = n_points - n_log;
    const double t_switch = t_max / 5.0;

    std::vector<double> grid;
    grid.reserve(n_points);
    grid.push_back(0.0);
    for (int k = 1; k < n_log; ++k) {
        const double frac = double(k - 1) / double(n_log - 1);
        grid.push_back(t_switch * std::pow(10.0, -3.0 * (1.0 - frac)));
    }
    for (int k = 1; k <= n_lin; ++k)
        grid.push_back(t_switch + (t_max - t_switch) * double(k) / double(n_lin));
    check_time_grid(grid);
    return grid;
}

std::vector<double> linear_time_grid(double t_max, int n_points) {
    if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
    if (n_points < 2) throw std::invalid_argument("need at least 2 grid points");
    std::vector<double> grid(n_points);
    for (int k = 0; k < n_points; ++k) grid[k] = t_max * double(k) / double(n_points - 1);
    return grid;
}

double trace_distance(const Operator& rho, const Operator& sigma) {
    if (rho.dim() != sigma.dim()) throw std::invalid_argument("dimension mismatch");
    if (hermiticity_residual(rho.mat) > 1e-8 || hermiticity_residual(sigma.mat) > 1e-8)
        throw std::invalid_argument("trace_distance requires Hermitian inputs");
    Matrix diff = rho.mat - sigma.mat;
    diff = 0.5 * (diff + diff.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw numerical_error("eigensolver failed in trace_distance");
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

DensityMatrix evolve_spectral_at(const SpectralDecomposition& decomp, const DensityMatrix& rho0,
                                 double t) {
    if (rho0.dim() != (Eigen::Index{1} << decomp.sites))
        throw std::invalid_argument("state dimension does not match the decomposition");
    if (uncovered_support(decomp, rho0.mat()) > 1e-12)
        throw std::invalid_argument("initial state has support outside the decomposed sectors");

    Matrix rho = Matrix::Zero(rho0.dim(), rho0.dim());
    for (const BlockModes& block : decomp.blocks) {
        Vector coeff = block_coefficients(block, rho0.mat());
        if (coeff.size() == 0) continue;
        for (const ModeCluster& cluster : block.clusters) {
            if (cluster.defective) {
                // exact propagation through a Jordan cluster: the nilpotent
                // part is exponentiated as a small dense matrix
                const Matrix shifted =
                    cluster.coupling -
                    cluster.eigenvalue * Matrix::Identity(cluster.size, cluster.size);
                coeff.segment(cluster.start, cluster.size) =
                    (std::exp(cluster.eigenvalue * t) * (t * shifted).exp()) *
                    coeff.segment(cluster.start, cluster.size);
            } else {
                for (Eigen::Index c = 0; c < cluster.size; ++c)
                    coeff(cluster.start + c) *=
                        std::exp(block.eigenvalues(cluster.start + c) * t);
            }
        }
        const Vector compact = block.right * coeff;
        const Eigen::Index nk = Eigen::Index(block.ket_states.size());
        const Eigen::Index nb = Eigen::Index(block.bra_states.size());
        for (Eigen::Index b = 0; b < nb; ++b)
            for (Eigen::Index a = 0; a < nk; ++a)
                rho(block.ket_states[a], block.bra_states[b]) += compact(b * nk + a);
    }
    return finish_state(decomp.sites, std::move(rho), rho0.label, 1e-6);
}

std::vector<DensityMatrix> evolve_spectral(const SpectralDecomposition& decomp,
                                           const DensityMatrix& rho0,
                                           const std::vector<double>& times) {
    check_time_grid(times);
    std::vector<DensityMatrix> out;
    out.reserve(times.size());
    for (const double t : times) out.push_back(evolve_spectral_at(decomp, rho0, t));
    return out;
}

std::vector<DensityMatrix> evolve_integrate(const LindbladModel& model, const DensityMatrix& rho0,
                                            const std::vector<double>& times,
                                            const IntegratorOptions& options) {
    check_time_grid(times);
    if (rho0.dim() != model.hamiltonian.dim())
        throw std::invalid_argument("state dimension does not match the model");

    // Dormand-Prince 5(4) coefficients
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    auto rhs = [&](const Matrix& y) { return apply_liouvillian(model, Operator(rho0.op.sites, y)).mat; };

    std::vector<DensityMatrix> out;
    out.reserve(times.size());

    double t = 0.0;
    Matrix y = rho0.mat();
    Matrix k1 = rhs(y);
    double dt = options.initial_step;
    std::size_t next_sample = 0;

    while (next_sample < times.size() && times[next_sample] <= t) {
        out.push_back(finish_state(rho0.op.sites, y, rho0.label, 1e-8));
        ++next_sample;
    }

    while (next_sample < times.size()) {
        bool sampling = false;
        double step = dt;
        if (t + step >= times[next_sample]) {
            step = times[next_sample] - t;
            sampling = true;
        }

        const Matrix k2 = rhs(y + step * (a21 * k1));
        const Matrix k3 = rhs(y + step * (a31 * k1 + a32 * k2));
        const Matrix k4 = rhs(y + step * (a41 * k1 + a42 * k2 + a43 * k3));
        const Matrix k5 = rhs(y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Matrix k6 = rhs(y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Matrix y_new = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Matrix k7 = rhs(y_new);  // FSAL
        const Matrix err_mat =
            step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double scale =
            options.tolerance * std::max(1.0, std::max(y.cwiseAbs().maxCoeff(),
                                                       y_new.cwiseAbs().maxCoeff()));
        const double err = err_mat.cwiseAbs().maxCoeff();

        if (err <= scale) {
            t += step;
            y = y_new;
            k1 = k7;
            if (sampling) {
                out.push_back(finish_state(rho0.op.sites, y, rho0.label, 1e-8));
                ++next_sample;
            }
        }

        const double ratio = (err > 0.0) ? std::pow(scale / err, 0.2) : 5.0;
        const double grow = std::clamp(0.9 * ratio, 0.2, 5.0);
        dt = (sampling && err <= scale) ? std::max(dt, step) * grow : step * grow;
        if (dt < options.min_step * std::max(1.0, t))
            throw numerical_error("integrator step size underflow (stiffness) at t = " +
                                  std::to_string(t));
    }
    return out;
}

double Trajectory::distance_at(double t) const {
    if (!decomp) throw std::logic_error("trajectory carries no spectral decomposition");
    return trace_distance(evolve_spectral_at(*decomp, initial, t).op, steady.op);
}

Trajectory distance_trajectory(std::shared_ptr<const SpectralDecomposition> decomp,
                               const DensityMatrix& rho0, const std::vector<double>& times,
                               const ModelParams& params, std::optional<double> temperature) {
    if (!decomp) throw std::invalid_argument("null decomposition");
    check_time_grid(times);

    Trajectory traj;
    traj.times = times;
    traj.state_label = rho0.label;
    traj.params = params;
    traj.temperature = temperature;
    traj.initial = rho0;
    traj.steady = steady_state(*decomp, rho0);
    traj.decomp = std::move(decomp);

    traj.distances.reserve(times.size());
    for (const double t : times)
        traj.distances.push_back(
            trace_distance(evolve_spectral_at(*traj.decomp, rho0, t).op, traj.steady.op));
    return traj;
}

}  // namespace xxz
