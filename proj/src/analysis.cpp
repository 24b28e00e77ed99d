#include "xxz/analysis.hpp"

#include "xxz/spin_algebra.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace xxz {

Operator uniform_pair_hopping(int sites) {
    if (sites < 2) throw std::invalid_argument("uniform_pair_hopping requires at least 2 sites");
    Operator out = zero_operator(sites);
    for (int i = 0; i < sites; ++i)
        for (int j = 0; j < sites; ++j)
            if (i != j) out.mat += pair_hopping(i, j, sites).mat;
    return out;
}

double eigenmode_residual(const LindbladModel& model, const Operator& candidate, Complex lambda) {
    const Operator image = apply_liouvillian(model, candidate);
    return (image.mat - lambda * candidate.mat).norm() / candidate.mat.norm();
}

double commutator_norm(const Operator& a, const Operator& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
    return (a.mat * b.mat - b.mat * a.mat).norm();
}

double hs_cosine(const Operator& a, const Operator& b) {
    const Complex inner = (a.mat.adjoint() * b.mat).trace();
    return std::abs(inner) / (a.mat.norm() * b.mat.norm());
}

namespace {

double trace_norm_compact(const BlockModes& block, const Vector& compact) {
    const Eigen::Index nk = Eigen::Index(block.ket_states.size());
    const Eigen::Index nb = Eigen::Index(block.bra_states.size());
    const Eigen::Map<const Matrix> m(compact.data(), nk, nb);
    // padding with zero rows/columns does not change singular values
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues().sum();
}

std::vector<ModeRef> modes_near(const SpectralDecomposition& decomp, Complex target,
                                bool proper_only = false) {
    std::vector<ModeRef> out;
    for (const ModeRef m : decomp.order) {
        if (proper_only && decomp.defective(m)) continue;
        if (std::abs(decomp.eigenvalue(m) - target) <= kClusterTol) out.push_back(m);
    }
    return out;
}

}  // namespace

OverlapSpectrum overlap_spectrum(const SpectralDecomposition& decomp, const DensityMatrix& rho0) {
    if (rho0.dim() != (Eigen::Index{1} << decomp.sites))
        throw std::invalid_argument("state dimension does not match the decomposition");
    if (uncovered_support(decomp, rho0.mat()) > 1e-12)
        throw std::invalid_argument("initial state has support outside the decomposed sectors");

    std::vector<Vector> coeffs;
    coeffs.reserve(decomp.blocks.size());
    for (const BlockModes& block : decomp.blocks) {
        coeffs.push_back(block_coefficients(block, rho0.mat()));
        // a state reaching into a Jordan cluster has no per-mode expansion
        for (const ModeCluster& cluster : block.clusters) {
            if (!cluster.defective) continue;
            if (coeffs.back().segment(cluster.start, cluster.size).norm() > 1e-10)
                throw numerical_error(
                    "state overlaps a defective eigenvalue cluster at " +
                    std::to_string(cluster.eigenvalue.real()) + " + " +
                    std::to_string(cluster.eigenvalue.imag()) +
                    "i; per-mode overlap weights are undefined there");
        }
    }

    OverlapSpectrum out;
    out.entries.reserve(decomp.size());
    for (const ModeRef m : decomp.order) {
        if (decomp.defective(m)) continue;  // zero component, checked above
        const Complex lambda = decomp.eigenvalue(m);
        if (std::abs(lambda) <= kKernelTol) continue;  // stationary kernel excluded
        const double c = std::abs(coeffs[m.block](m.index));
        const double weight =
            c * trace_norm_compact(decomp.blocks[m.block], decomp.blocks[m.block].right.col(m.index));
        out.entries.push_back(OverlapEntry{lambda, weight});
        out.normalization += weight;
    }
    return out;
}

ModeSimilarity mode_similarity(const SpectralDecomposition& decomp, const Operator& candidate,
                               Complex lambda) {
    const std::vector<ModeRef> near = modes_near(decomp, lambda, /*proper_only=*/true);
    if (near.empty()) {
        std::ostringstream msg;
        msg << "no Liouvillian mode found at " << lambda.real() << " + " << lambda.imag() << "i";
        throw numerical_error(msg.str());
    }

    const Eigen::Index d = candidate.dim();
    Vector target = Eigen::Map<const Vector>(candidate.mat.data(), d * d);

    ModeSimilarity out;
    Matrix span(d * d, Eigen::Index(near.size()));
    for (std::size_t k = 0; k < near.size(); ++k) {
        const Operator mode = decomp.right_mode(near[k]);
        span.col(Eigen::Index(k)) = Eigen::Map<const Vector>(mode.mat.data(), d * d);
        out.cosine = std::max(out.cosine, hs_cosine(candidate, mode));
    }

    const Vector fitted = span * span.colPivHouseholderQr().solve(target);
    out.subspace_residual = (target - fitted).norm();
    return out;
}

int degeneracy_count(const SpectralDecomposition& decomp, Complex target) {
    return int(modes_near(decomp, target).size());
}

DecayFit fit_decay_rate(const Trajectory& traj, double t_lo, double t_hi) {
    constexpr double kFloor = 1e-12;
    std::vector<double> ts, logs;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        const double dist = traj.distances[i];
        if (t < t_lo || t > t_hi || dist <= kFloor) continue;
        ts.push_back(t);
        logs.push_back(std::log(dist));
    }
    if (ts.size() < 10)
        throw numerical_error("fit window holds fewer than 10 usable samples");

    const double n = double(ts.size());
    double st = 0, sl = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sl += logs[i];
    }
    const double t_mean = st / n, l_mean = sl / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        sxx += (ts[i] - t_mean) * (ts[i] - t_mean);
        sxy += (ts[i] - t_mean) * (logs[i] - l_mean);
    }
    const double slope = sxy / sxx;

    double ss_res = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double fit = l_mean + slope * (ts[i] - t_mean);
        ss_res += (logs[i] - fit) * (logs[i] - fit);
    }
    const double var = (ts.size() > 2) ? ss_res / (n - 2.0) : 0.0;
    return DecayFit{-slope, std::sqrt(var / sxx), int(ts.size())};
}

const char* to_string(MpembaVerdict v) {
    switch (v) {
        case MpembaVerdict::strong_mpemba: return "strong-mpemba";
        case MpembaVerdict::no_crossing: return "no-crossing";
        case MpembaVerdict::degenerate_collapse: return "degenerate-collapse";
    }
    return "unknown";
}

MpembaReport detect_crossing(const Trajectory& a, const Trajectory& b) {
    if (a.times.size() != b.times.size() ||
        !std::equal(a.times.begin(), a.times.end(), b.times.begin()))
        throw std::invalid_argument("trajectories must share one time grid");
    if (a.params.sites != b.params.sites || a.params.alpha != b.params.alpha ||
        a.params.delta != b.params.delta || a.params.coupling != b.params.coupling)
        throw std::invalid_argument("trajectories must share model parameters");

    MpembaReport report;
    report.d0_gap = a.distances.front() - b.distances.front();

    double max_all = 0, max_late = 0;
    for (std::size_t i = 0; i < a.times.size(); ++i) {
        const double gap = std::abs(a.distances[i] - b.distances[i]);
        max_all = std::max(max_all, gap);
        if (a.times[i] >= 1.0) max_late = std::max(max_late, gap);
    }
    if (max_all <= 1e-12) {
        report.verdict = MpembaVerdict::no_crossing;  // identical trajectories
        return report;
    }
    if (max_late < 1e-6) {
        report.verdict = MpembaVerdict::degenerate_collapse;
        return report;
    }

    for (std::size_t i = 1; i < a.times.size(); ++i) {
        const double prev = a.distances[i - 1] - b.distances[i - 1];
        const double curr = a.distances[i] - b.distances[i];
        if (prev > 0.0 && curr <= 0.0) {
            double lo = a.times[i - 1], hi = a.times[i];
            while (hi - lo > 1e-6) {
                const double mid = 0.5 * (lo + hi);
                const double gap = a.distance_at(mid) - b.distance_at(mid);
                (gap > 0.0 ? lo : hi) = mid;
            }
            report.crossing_time = 0.5 * (lo + hi);
            break;
        }
    }

    if (report.crossing_time && report.d0_gap > 0.0)
        report.verdict = MpembaVerdict::strong_mpemba;
    else
        report.verdict = MpembaVerdict::no_crossing;
    return report;
}

}  // namespace xxz
