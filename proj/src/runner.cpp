#include "xxz/runner.hpp"

#include "xxz/analysis.hpp"
#include "xxz/dynamics.hpp"
#include "xxz/liouvillian.hpp"
#include "xxz/spectral.hpp"
#include "xxz/states.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <thread>
#include <utility>

namespace xxz {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void atomic_write(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

void write_json(const fs::path& path, const json& j) { atomic_write(path, j.dump(2) + "\n"); }

json complex_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

DensityMatrix build_state(const StateSpec& spec, const Operator& hamiltonian) {
    switch (spec.kind) {
        case StateKind::ground: return ground_state(hamiltonian);
        case StateKind::thermal: return thermal_state(hamiltonian, *spec.temperature);
        case StateKind::z2: return z2_state(hamiltonian.sites);
        case StateKind::domain_wall: return domain_wall_state(hamiltonian.sites);
        case StateKind::maximally_mixed: return maximally_mixed(hamiltonian.sites);
    }
    throw config_error("unhandled state kind");
}

std::set<SectorLabel> support_sectors(const DensityMatrix& rho, int sites) {
    std::set<SectorLabel> out;
    const Matrix& m = rho.mat();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (std::abs(m(i, j)) > 1e-14)
                out.insert(SectorLabel{magnetization(std::uint32_t(i)),
                                       magnetization(std::uint32_t(j))});
    (void)sites;
    return out;
}

bool has_task(const RunConfig& config, Task task) {
    return std::find(config.tasks.begin(), config.tasks.end(), task) != config.tasks.end();
}

json spectrum_json(const SpectralDecomposition& decomp) {
    json eigenvalues = json::array();
    for (const ModeRef m : decomp.order) {
        const Complex lambda = decomp.eigenvalue(m);
        const SectorLabel sector = decomp.sector(m);
        eigenvalues.push_back({{"re", lambda.real()},
                               {"im", lambda.imag()},
                               {"m_ket", sector.m_ket},
                               {"m_bra", sector.m_bra}});
    }

    // greedy clustering of the sorted list at the degeneracy tolerance
    json clusters = json::array();
    std::vector<bool> used(decomp.size(), false);
    for (std::size_t i = 0; i < decomp.size(); ++i) {
        if (used[i]) continue;
        const Complex center = decomp.eigenvalue(decomp.order[i]);
        int count = 0;
        for (std::size_t k = i; k < decomp.size(); ++k) {
            if (!used[k] && std::abs(decomp.eigenvalue(decomp.order[k]) - center) <= kClusterTol) {
                used[k] = true;
                ++count;
            }
        }
        clusters.push_back({{"re", center.real()}, {"im", center.imag()}, {"multiplicity", count}});
    }

    json sectors = json::array();
    for (const BlockModes& block : decomp.blocks)
        sectors.push_back({{"m_ket", block.label.m_ket},
                           {"m_bra", block.label.m_bra},
                           {"dimension", block.eigenvalues.size()}});

    return json{{"sites", decomp.sites},
                {"sectors", sectors},
                {"eigenvalues", eigenvalues},
                {"clusters", clusters}};
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,distance\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        out += format_double(traj.times[i]);
        out += ',';
        out += format_double(traj.distances[i]);
        out += '\n';
    }
    return out;
}

json overlaps_json(const DensityMatrix& rho, const OverlapSpectrum& overlaps) {
    json entries = json::array();
    for (const OverlapEntry& e : overlaps.entries) {
        if (e.weight == 0.0) continue;
        entries.push_back(
            {{"re", e.eigenvalue.real()}, {"im", e.eigenvalue.imag()}, {"weight", e.weight}});
    }
    return json{{"state", rho.label},
                {"definition", rho.description},
                {"normalization", overlaps.normalization},
                {"entries", entries}};
}

struct PipelineResult {
    std::map<std::string, double> timings;
};

PipelineResult run_pipeline(const RunConfig& config, const fs::path& out_dir, int threads,
                            bool quiet) {
    PipelineResult result;
    fs::create_directories(out_dir);

    const auto note = [&](const std::string& msg) {
        if (!quiet) std::cerr << "[" << kToolName << "] " << msg << "\n";
    };

    const LindbladModel model = build_model(config.model);

    std::vector<DensityMatrix> states;
    states.reserve(config.initial_states.size());
    for (const StateSpec& spec : config.initial_states)
        states.push_back(build_state(spec, model.hamiltonian));

    const bool want_spectrum = has_task(config, Task::spectrum);
    const bool want_evolve = has_task(config, Task::evolve);
    const bool want_mpemba = has_task(config, Task::mpemba);
    const bool want_verify = has_task(config, Task::verify_mode);

    // Sector scope: the full spectrum task needs every sector; otherwise the
    // union of the initial states' support (plus the magnetization-diagonal
    // sectors for the mode checks) is enough.
    std::set<SectorLabel> sectors;
    if (want_spectrum) {
        for (int mk = 0; mk <= config.model.sites; ++mk)
            for (int mb = 0; mb <= config.model.sites; ++mb)
                sectors.insert(SectorLabel{mk, mb});
    } else {
        if (want_evolve || want_mpemba)
            for (const DensityMatrix& rho : states) {
                const auto supp = support_sectors(rho, config.model.sites);
                sectors.insert(supp.begin(), supp.end());
            }
        if (want_verify)
            for (int m = 0; m <= config.model.sites; ++m) sectors.insert(SectorLabel{m, m});
    }

    std::shared_ptr<const SpectralDecomposition> decomp;
    if (!sectors.empty()) {
        const auto start = Clock::now();
        note("decomposing " + std::to_string(sectors.size()) + " sectors at L = " +
             std::to_string(config.model.sites));
        const LiouvillianBlocks blocks = sector_decompose(
            model, std::vector<SectorLabel>(sectors.begin(), sectors.end()));
        decomp = std::make_shared<SpectralDecomposition>(decompose(blocks, threads));
        result.timings["decompose"] = seconds_since(start);
    }

    if (want_spectrum) {
        const auto start = Clock::now();
        write_json(out_dir / "spectrum.json", spectrum_json(*decomp));
        result.timings["spectrum"] = seconds_since(start);
    }

    std::vector<Trajectory> trajectories;
    if (want_evolve || want_mpemba) {
        const auto start = Clock::now();
        const std::vector<double> grid =
            config.time_grid.spacing == GridSpacing::linear
                ? linear_time_grid(config.time_grid.t_max, config.time_grid.n_points)
                : hybrid_time_grid(config.time_grid.t_max, config.time_grid.n_points);
        for (std::size_t i = 0; i < states.size(); ++i) {
            note("evolving " + states[i].label);
            trajectories.push_back(distance_trajectory(decomp, states[i], grid, config.model,
                                                       config.initial_states[i].temperature));
        }
        result.timings["evolve"] = seconds_since(start);
    }

    if (want_evolve) {
        const auto start = Clock::now();
        for (std::size_t i = 0; i < states.size(); ++i) {
            atomic_write(out_dir / ("trajectory_" + states[i].label + ".csv"),
                         trajectory_csv(trajectories[i]));
            write_json(out_dir / ("overlaps_" + states[i].label + ".json"),
                       overlaps_json(states[i], overlap_spectrum(*decomp, states[i])));
        }
        result.timings["evolve"] += seconds_since(start);
    }

    if (want_mpemba) {
        const auto start = Clock::now();
        json pairs = json::array();
        for (std::size_t i = 0; i < trajectories.size(); ++i) {
            for (std::size_t k = i + 1; k < trajectories.size(); ++k) {
                // A is the initially farther trajectory
                const bool a_first =
                    trajectories[i].distances.front() >= trajectories[k].distances.front();
                const Trajectory& a = a_first ? trajectories[i] : trajectories[k];
                const Trajectory& b = a_first ? trajectories[k] : trajectories[i];
                const MpembaReport report = detect_crossing(a, b);
                json entry = {{"state_a", a.state_label},
                              {"state_b", b.state_label},
                              {"d0_gap", report.d0_gap},
                              {"verdict", to_string(report.verdict)}};
                entry["crossing_time"] =
                    report.crossing_time ? json(*report.crossing_time) : json(nullptr);
                pairs.push_back(entry);
            }
        }
        write_json(out_dir / "mpemba.json", json{{"pairs", pairs}});
        result.timings["mpemba"] = seconds_since(start);
    }

    if (want_verify) {
        const auto start = Clock::now();
        const Operator pair_mode = uniform_pair_hopping(config.model.sites);
        const Complex lambda(-2.0, 0.0);
        json verify = {
            {"lambda", complex_json(lambda)},
            {"eigenmode_residual", eigenmode_residual(model, pair_mode, lambda)},
            {"commutator_norm", commutator_norm(model.hamiltonian, pair_mode)},
            {"degeneracy_count", degeneracy_count(*decomp, lambda)},
            {"scope", "magnetization-diagonal sectors"},
        };
        try {
            const ModeSimilarity sim = mode_similarity(*decomp, pair_mode, lambda);
            verify["mode_similarity"] = {{"cosine", sim.cosine},
                                         {"subspace_residual", sim.subspace_residual}};
        } catch (const numerical_error& e) {
            verify["mode_similarity"] = nullptr;
            verify["mode_similarity_error"] = e.what();
        }
        write_json(out_dir / "verify.json", verify);
        result.timings["verify-mode"] = seconds_since(start);
    }

    return result;
}

RunConfig sweep_point_config(const RunConfig& base, double value) {
    RunConfig point = base;
    point.sweep.reset();
    point.tasks.clear();
    for (const Task t : base.tasks)
        if (t != Task::sweep) point.tasks.push_back(t);
    if (point.tasks.empty())
        throw config_error("sweep requires at least one other task to run per point");

    switch (base.sweep->param) {
        case SweepParam::alpha: point.model.alpha = value; break;
        case SweepParam::delta: point.model.delta = value; break;
        case SweepParam::temperature:
            for (StateSpec& s : point.initial_states)
                if (s.kind == StateKind::thermal) s.temperature = value;
            break;
        case SweepParam::sites:
            if (value != std::floor(value) || value < 2)
                throw config_error("sweep over L requires integer values >= 2");
            point.model.sites = int(value);
            break;
    }
    try {
        validate(point.model);
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("invalid sweep point: ") + e.what());
    }
    return point;
}

json version_info() {
    return json{{"tool", kToolName},
                {"version", kToolVersion},
                {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                              std::to_string(EIGEN_MAJOR_VERSION) + "." +
                              std::to_string(EIGEN_MINOR_VERSION)},
                {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                {"compiler", __VERSION__}};
}

json state_definitions(const RunConfig& config) {
    json defs = json::object();
    for (const StateSpec& spec : config.initial_states) {
        switch (spec.kind) {
            case StateKind::ground:
                defs["ground"] = "lowest eigenvector of H; degenerate levels (within 1e-10) "
                                 "become an equal-weight mixture";
                break;
            case StateKind::thermal:
                defs["thermal"] = "exp(-H/T)/Z";
                break;
            case StateKind::z2:
                defs["z2"] = "(|udud...> + |dudu...>)/sqrt(2), site 0 listed first";
                break;
            case StateKind::domain_wall:
                defs["domain_wall"] = "|u...ud...d>, first half of the chain up";
                break;
            case StateKind::maximally_mixed:
                defs["maximally_mixed"] = "identity / 2^L";
                break;
        }
    }
    return defs;
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw std::runtime_error("formatting failure");
    return std::string(buf, ptr);
}

int run_tasks(RunConfig config, const RunOptions& options) {
    fs::path out_dir = options.output_dir ? *options.output_dir : config.output_dir;

    const auto fail = [&](const std::string& kind, const std::string& message, int code) {
        if (!options.quiet) std::cerr << "[" << kToolName << "] error: " << message << "\n";
        try {
            fs::create_directories(out_dir);
            write_json(out_dir / "error.json",
                       json{{"error", kind}, {"message", message}, {"exit_code", code}});
        } catch (...) {
            // the error record is best effort; the exit code carries the result
        }
        return code;
    };

    try {
        if (!options.task_names.empty()) {
            config.tasks.clear();
            for (const std::string& name : options.task_names)
                config.tasks.push_back(parse_task(name));
        }
        config.output_dir = out_dir.string();

        int threads = options.threads;
        if (threads <= 0) threads = int(std::thread::hardware_concurrency());
        threads = std::max(1, threads);

        const auto started = Clock::now();
        json manifest;
        manifest["versions"] = version_info();
        manifest["config"] = to_json(config);
        manifest["state_definitions"] = state_definitions(config);

        if (config.sweep) {
            const SweepSpec& sweep = *config.sweep;
            std::vector<RunConfig> points;
            std::vector<std::string> dirs;
            for (const double value : sweep.values) {
                points.push_back(sweep_point_config(config, value));
                std::string name = "sweep_";
                name += (sweep.param == SweepParam::alpha    ? "alpha"
                         : sweep.param == SweepParam::delta  ? "delta"
                         : sweep.param == SweepParam::temperature ? "T"
                                                              : "L");
                name += "_" + format_double(value);
                dirs.push_back(name);
            }

            const int pool_size = std::min<int>(threads, int(points.size()));
            const int inner_threads = std::max(1, threads / pool_size);

            std::atomic<std::size_t> next{0};
            std::mutex merge_mutex;
            std::vector<std::pair<std::size_t, json>> point_reports;
            std::exception_ptr first_error;

            auto worker = [&] {
                for (;;) {
                    const std::size_t idx = next.fetch_add(1);
                    if (idx >= points.size()) return;
                    try {
                        const PipelineResult r =
                            run_pipeline(points[idx], out_dir / dirs[idx], inner_threads,
                                         options.quiet);
                        std::scoped_lock lock(merge_mutex);
                        point_reports.emplace_back(idx, json{{"directory", dirs[idx]},
                                                             {"value", sweep.values[idx]},
                                                             {"timings_seconds", r.timings}});
                    } catch (...) {
                        std::scoped_lock lock(merge_mutex);
                        if (!first_error) first_error = std::current_exception();
                        return;
                    }
                }
            };

            std::vector<std::thread> pool;
            for (int t = 0; t < pool_size; ++t) pool.emplace_back(worker);
            for (std::thread& t : pool) t.join();
            if (first_error) std::rethrow_exception(first_error);

            std::sort(point_reports.begin(), point_reports.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            json sweep_points = json::array();
            for (auto& [idx, report] : point_reports) sweep_points.push_back(std::move(report));
            manifest["sweep_points"] = sweep_points;
        } else {
            const PipelineResult r = run_pipeline(config, out_dir, threads, options.quiet);
            manifest["timings_seconds"] = r.timings;
        }

        manifest["wall_clock_seconds"] = seconds_since(started);
        fs::create_directories(out_dir);
        write_json(out_dir / "manifest.json", manifest);
        return 0;
    } catch (const config_error& e) {
        return fail("config", e.what(), 2);
    } catch (const std::invalid_argument& e) {
        return fail("config", e.what(), 2);
    } catch (const numerical_error& e) {
        return fail("numerical", e.what(), 3);
    } catch (const std::exception& e) {
        return fail("runtime", e.what(), 1);
    }
}

}  // namespace xxz
