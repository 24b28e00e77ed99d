#pragma once

#include "xxz/model.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace xxz {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class StateKind { ground, thermal, z2, domain_wall, maximally_mixed };

struct StateSpec {
    StateKind kind = StateKind::ground;
    std::optional<double> temperature;  // present iff kind == thermal
};

std::string to_string(StateKind kind);

enum class Task { spectrum, evolve, mpemba, verify_mode, sweep };

std::string to_string(Task task);
Task parse_task(const std::string& name);

enum class GridSpacing { linear, log_linear_hybrid };

struct TimeGridSpec {
    double t_max = 10.0;
    int n_points = 200;
    GridSpacing spacing = GridSpacing::log_linear_hybrid;
};

enum class SweepParam { alpha, delta, temperature, sites };

struct SweepSpec {
    SweepParam param = SweepParam::alpha;
    std::vector<double> values;
};

struct RunConfig {
    ModelParams model;
    std::vector<StateSpec> initial_states = {StateSpec{}};
    TimeGridSpec time_grid;
    std::vector<Task> tasks = {Task::spectrum, Task::evolve};
    std::optional<SweepSpec> sweep;
    std::string output_dir = "out";
    std::uint64_t seed = 0;
};

/// Strict schema parse; unknown keys, malformed values and inconsistent
/// state specs raise config_error.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config_file(const std::string& path);

/// Round-trips through parse_config (used for the manifest).
nlohmann::json to_json(const RunConfig& config);

}  // namespace xxz
