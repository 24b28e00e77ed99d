#pragma once

#include "xxz/model.hpp"
#include "xxz/spectral.hpp"
#include "xxz/states.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace xxz {

/// Dense-early/uniform-late grid on [0, t_max]: the first half of the points
/// covers three decades of log spacing up to t_max/5, the second half is
/// uniform up to t_max.
std::vector<double> hybrid_time_grid(double t_max, int n_points);
std::vector<double> linear_time_grid(double t_max, int n_points);

/// Half the trace norm of the Hermitian difference, in [0, 1] for states.
/// Inputs must be Hermitian within 1e-8.
double trace_distance(const Operator& rho, const Operator& sigma);

/// rho(t) = sum_k exp(lambda_k t) Tr(l_k rho0) r_k, re-Hermitized; an
/// asymmetry above 1e-6 raises numerical_error.
DensityMatrix evolve_spectral_at(const SpectralDecomposition& decomp, const DensityMatrix& rho0,
                                 double t);
std::vector<DensityMatrix> evolve_spectral(const SpectralDecomposition& decomp,
                                           const DensityMatrix& rho0,
                                           const std::vector<double>& times);

struct IntegratorOptions {
    double tolerance = 1e-10;  // local error tolerance
    double initial_step = 1e-3;
    double min_step = 1e-13;
};

/// Matrix-free adaptive Dormand-Prince 5(4) integration of
/// d rho/dt = L(rho), sampled on the given time grid. Step-size underflow
/// raises numerical_error (stiffness).
std::vector<DensityMatrix> evolve_integrate(const LindbladModel& model, const DensityMatrix& rho0,
                                            const std::vector<double>& times,
                                            const IntegratorOptions& options = {});

/// Trace-distance-to-steady-state samples D(t) plus everything needed to
/// re-evaluate D at arbitrary t on the spectral representation.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> distances;
    std::string state_label;
    ModelParams params;
    std::optional<double> temperature;
    DensityMatrix initial;
    DensityMatrix steady;
    std::shared_ptr<const SpectralDecomposition> decomp;

    double distance_at(double t) const;
};

Trajectory distance_trajectory(std::shared_ptr<const SpectralDecomposition> decomp,
                               const DensityMatrix& rho0, const std::vector<double>& times,
                               const ModelParams& params,
                               std::optional<double> temperature = std::nullopt);

}  // namespace xxz
