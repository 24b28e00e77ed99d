#include "xxz/run_config.hpp"
#include "xxz/runner.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    CLI::App app{"Lindblad spectral engine for the long-range XXZ chain under local dephasing"};
    app.set_version_flag("--version", std::string(xxz::kToolVersion));

    std::string config_path;
    xxz::RunOptions options;

    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--task", options.task_names,
                   "run only the named task(s), overriding the config");
    std::string output_dir;
    auto* output_opt = app.add_option("--output", output_dir, "output directory override");
    app.add_option("--threads", options.threads, "worker threads (default: all cores)");
    app.add_flag("--quiet", options.quiet, "suppress progress messages");

    CLI11_PARSE(app, argc, argv);

    if (options.threads <= 0) {
        if (const char* env = std::getenv("XXZ_THREADS")) options.threads = std::atoi(env);
    }
    if (*output_opt) options.output_dir = output_dir;

    try {
        return xxz::run_tasks(xxz::load_config_file(config_path), options);
    } catch (const xxz::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
}
