#include "xxz/run_config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace xxz {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw config_error(where + " must be a JSON object");
    for (const auto& item : j.items())
        if (!allowed.contains(item.key()))
            throw config_error("unknown key '" + item.key() + "' in " + where);
}

double get_number(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw config_error("'" + key + "' must be a number");
    return j.at(key).get<double>();
}

int get_int(const json& j, const std::string& key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer()) throw config_error("'" + key + "' must be an integer");
    return j.at(key).get<int>();
}

StateKind parse_state_kind(const std::string& name) {
    if (name == "ground") return StateKind::ground;
    if (name == "thermal") return StateKind::thermal;
    if (name == "z2") return StateKind::z2;
    if (name == "domain_wall") return StateKind::domain_wall;
    if (name == "maximally_mixed") return StateKind::maximally_mixed;
    throw config_error("unrecognized state kind '" + name + "'");
}

SweepParam parse_sweep_param(const std::string& name) {
    if (name == "alpha") return SweepParam::alpha;
    if (name == "delta") return SweepParam::delta;
    if (name == "T") return SweepParam::temperature;
    if (name == "L") return SweepParam::sites;
    throw config_error("unrecognized sweep parameter '" + name + "'");
}

std::string sweep_param_name(SweepParam p) {
    switch (p) {
        case SweepParam::alpha: return "alpha";
        case SweepParam::delta: return "delta";
        case SweepParam::temperature: return "T";
        case SweepParam::sites: return "L";
    }
    return "?";
}

}  // namespace

std::string to_string(StateKind kind) {
    switch (kind) {
        case StateKind::ground: return "ground";
        case StateKind::thermal: return "thermal";
        case StateKind::z2: return "z2";
        case StateKind::domain_wall: return "domain_wall";
        case StateKind::maximally_mixed: return "maximally_mixed";
    }
    return "?";
}

std::string to_string(Task task) {
    switch (task) {
        case Task::spectrum: return "spectrum";
        case Task::evolve: return "evolve";
        case Task::mpemba: return "mpemba";
        case Task::verify_mode: return "verify-mode";
        case Task::sweep: return "sweep";
    }
    return "?";
}

Task parse_task(const std::string& name) {
    if (name == "spectrum") return Task::spectrum;
    if (name == "evolve") return Task::evolve;
    if (name == "mpemba") return Task::mpemba;
    if (name == "verify-mode") return Task::verify_mode;
    if (name == "sweep") return Task::sweep;
    throw config_error("unrecognized task '" + name + "'");
}

RunConfig parse_config(const nlohmann::json& j) {
    require_keys(j, "config",
                 {"model", "initial_states", "time_grid", "tasks", "sweep", "output_dir", "seed"});

    RunConfig config;

    if (j.contains("model")) {
        const json& m = j.at("model");
        require_keys(m, "model", {"L", "J", "alpha", "delta"});
        config.model.sites = get_int(m, "L", config.model.sites);
        config.model.coupling = get_number(m, "J", config.model.coupling);
        config.model.alpha = get_number(m, "alpha", config.model.alpha);
        config.model.delta = get_number(m, "delta", config.model.delta);
        try {
            validate(config.model);
        } catch (const std::invalid_argument& e) {
            throw config_error(std::string("invalid model parameters: ") + e.what());
        }
    }

    if (j.contains("initial_states")) {
        const json& states = j.at("initial_states");
        if (!states.is_array() || states.empty())
            throw config_error("'initial_states' must be a non-empty array");
        config.initial_states.clear();
        for (const json& s : states) {
            require_keys(s, "initial_states entry", {"kind", "temperature"});
            if (!s.contains("kind")) throw config_error("state entry missing 'kind'");
            StateSpec spec;
            spec.kind = parse_state_kind(s.at("kind").get<std::string>());
            if (s.contains("temperature")) {
                if (spec.kind != StateKind::thermal)
                    throw config_error("'temperature' is only valid for thermal states");
                spec.temperature = s.at("temperature").get<double>();
                if (!(*spec.temperature > 0.0)) throw config_error("temperature must be positive");
            } else if (spec.kind == StateKind::thermal) {
                throw config_error("thermal state requires 'temperature'");
            }
            config.initial_states.push_back(spec);
        }
    }

    if (j.contains("time_grid")) {
        const json& g = j.at("time_grid");
        require_keys(g, "time_grid", {"t_max", "n_points", "spacing"});
        config.time_grid.t_max = get_number(g, "t_max", config.time_grid.t_max);
        config.time_grid.n_points = get_int(g, "n_points", config.time_grid.n_points);
        if (g.contains("spacing")) {
            const std::string spacing = g.at("spacing").get<std::string>();
            if (spacing == "linear")
                config.time_grid.spacing = GridSpacing::linear;
            else if (spacing == "log-linear-hybrid")
                config.time_grid.spacing = GridSpacing::log_linear_hybrid;
            else
                throw config_error("unrecognized spacing '" + spacing + "'");
        }
        if (!(config.time_grid.t_max > 0.0)) throw config_error("t_max must be positive");
        if (config.time_grid.n_points < 4) throw config_error("n_points must be at least 4");
    }

    if (j.contains("tasks")) {
        const json& tasks = j.at("tasks");
        if (!tasks.is_array() || tasks.empty())
            throw config_error("'tasks' must be a non-empty array");
        config.tasks.clear();
        for (const json& t : tasks) config.tasks.push_back(parse_task(t.get<std::string>()));
    }

    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        require_keys(s, "sweep", {"param", "values"});
        if (!s.contains("param") || !s.contains("values"))
            throw config_error("sweep requires 'param' and 'values'");
        SweepSpec sweep;
        sweep.param = parse_sweep_param(s.at("param").get<std::string>());
        for (const json& v : s.at("values")) {
            if (!v.is_number()) throw config_error("sweep values must be numbers");
            sweep.values.push_back(v.get<double>());
        }
        if (sweep.values.empty()) throw config_error("sweep values must be non-empty");
        config.sweep = sweep;
    }

    for (const Task t : config.tasks)
        if (t == Task::sweep && !config.sweep)
            throw config_error("task 'sweep' requires a 'sweep' specification");

    if (j.contains("output_dir")) config.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
    return config;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("config is not valid JSON: " + std::string(e.what()));
    }
    return parse_config(j);
}

nlohmann::json to_json(const RunConfig& config) {
    json j;
    j["model"] = {{"L", config.model.sites},
                  {"J", config.model.coupling},
                  {"alpha", config.model.alpha},
                  {"delta", config.model.delta}};
    json states = json::array();
    for (const StateSpec& s : config.initial_states) {
        json entry = {{"kind", to_string(s.kind)}};
        if (s.temperature) entry["temperature"] = *s.temperature;
        states.push_back(entry);
    }
    j["initial_states"] = states;
    j["time_grid"] = {
        {"t_max", config.time_grid.t_max},
        {"n_points", config.time_grid.n_points},
        {"spacing",
         config.time_grid.spacing == GridSpacing::linear ? "linear" : "log-linear-hybrid"}};
    json tasks = json::array();
    for (const Task t : config.tasks) tasks.push_back(to_string(t));
    j["tasks"] = tasks;
    if (config.sweep) {
        j["sweep"] = {{"param", sweep_param_name(config.sweep->param)},
                      {"values", config.sweep->values}};
    }
    j["output_dir"] = config.output_dir;
    j["seed"] = config.seed;
    return j;
}

}  // namespace xxz
