#pragma once

#include "xxz/dynamics.hpp"
#include "xxz/model.hpp"
#include "xxz/spectral.hpp"

#include <optional>
#include <vector>

namespace xxz {

/// The spatially uniform pair-hopping operator sum_{i != j} sigma_i^+ sigma_j^-.
/// Identical to S^+ S^- - S^z - (L/2) Id.
Operator uniform_pair_hopping(int sites);

/// ||L(candidate) - lambda * candidate||_F / ||candidate||_F, matrix-free.
double eigenmode_residual(const LindbladModel& model, const Operator& candidate, Complex lambda);

/// ||AB - BA||_F
double commutator_norm(const Operator& a, const Operator& b);

/// |<a, b>_HS| / (||a|| ||b||) with <a,b>_HS = Tr(a^dag b).
double hs_cosine(const Operator& a, const Operator& b);

struct OverlapEntry {
    Complex eigenvalue;
    double weight = 0;  // |Tr(l_k rho0)| * trace norm of r_k (gauge invariant)
};

/// Per-mode spectral weights of rho0, kernel modes excluded, sorted by
/// descending Re(lambda).
struct OverlapSpectrum {
    std::vector<OverlapEntry> entries;
    double normalization = 0;  // sum of weights
};

OverlapSpectrum overlap_spectrum(const SpectralDecomposition& decomp, const DensityMatrix& rho0);

struct ModeSimilarity {
    double cosine = 0;             // against the best single matching mode
    double subspace_residual = 0;  // norm of the component outside the eigenspace
};

/// Compares a candidate operator with the eigenspace at `lambda` (modes within
/// kClusterTol). Throws if no matching mode exists.
ModeSimilarity mode_similarity(const SpectralDecomposition& decomp, const Operator& candidate,
                               Complex lambda = Complex(-2.0, 0.0));

/// Number of modes with |lambda - target| <= kClusterTol.
int degeneracy_count(const SpectralDecomposition& decomp, Complex target = Complex(-2.0, 0.0));

struct DecayFit {
    double rate = 0;       // negative log-slope of D(t)
    double std_error = 0;  // standard error of the slope
    int points = 0;
};

/// Least-squares fit of ln D(t) over [t_lo, t_hi]; samples at or below 1e-12
/// are dropped. Requires at least 10 usable samples.
DecayFit fit_decay_rate(const Trajectory& traj, double t_lo, double t_hi);

enum class MpembaVerdict { strong_mpemba, no_crossing, degenerate_collapse };

const char* to_string(MpembaVerdict v);

struct MpembaReport {
    std::optional<double> crossing_time;
    double d0_gap = 0;  // D_A(0) - D_B(0)
    MpembaVerdict verdict = MpembaVerdict::no_crossing;
};

/// Scans D_A - D_B for a sign change from + to -; the crossing is refined by
/// bisection on the spectral representation to 1e-6. Identical trajectories
/// report no_crossing; trajectories that differ early but agree within 1e-6
/// for all t >= 1 report degenerate_collapse.
MpembaReport detect_crossing(const Trajectory& a, const Trajectory& b);

}  // namespace xxz
