// Copyright 2026 The QSBM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qsbm/config.hpp"
#include "qsbm/experiments.hpp"

namespace {

/// QSBM_SEED, when set, replaces root_seed.
std::string apply_seed_override(qsbm::ExperimentConfig &config) {
    const char *env = std::getenv("QSBM_SEED");
    if (env == nullptr || *env == '\0') {
        return "config";
    }
    char *end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') {
        throw qsbm::ConfigError(std::string("QSBM_SEED is not an unsigned integer: ") + env, 0);
    }
    config.root_seed = v;
    return "QSBM_SEED";
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Scrambling Born machine experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    bool resume = false;
    bool dry_run = false;
    int workers = 1;
    auto *run = app.add_subcommand("run", "Run a sweep and write results.csv, summary.csv and manifest.json");
    run->add_option("config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
    run->add_flag("--resume", resume, "Keep complete (point, seed) jobs in the output directory, run the rest");
    run->add_flag("--dry-run", dry_run, "Print the resolved sweep and write nothing");
    run->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    run->add_option("--out", out_dir, "Output directory (default: output_dir from the config)");

    std::string results_dir;
    auto *summarize = app.add_subcommand("summarize", "Rebuild summary.csv from results.csv");
    summarize->add_option("dir", results_dir, "Results directory")->required()->check(CLI::ExistingDirectory);

    std::string validate_path;
    auto *validate = app.add_subcommand("validate", "Check a config and print its resolved form");
    validate->add_option("config", validate_path, "JSON config")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            auto config = qsbm::load_config(config_path);
            qsbm::RunOptions options;
            options.seed_source = apply_seed_override(config);
            options.out_dir = out_dir;
            options.resume = resume;
            options.dry_run = dry_run;
            options.workers = workers;
            options.log = dry_run ? &std::cout : &std::cerr;
            const auto report = qsbm::run_experiment(config, options);
            if (!dry_run) {
                std::cerr << "done: " << report.jobs_run << " jobs run, " << report.jobs_kept << " kept, "
                          << report.wall_seconds << " s\n";
            }
        } else if (*summarize) {
            const auto rows = qsbm::summarize(results_dir);
            qsbm::write_summary(std::cout, rows);
        } else if (*validate) {
            auto config = qsbm::load_config(validate_path);
            apply_seed_override(config);
            if (config.paper_scale) {
                std::cerr << "warning: paper_scale preset; expect runtimes of many hours\n";
            }
            std::cout << qsbm::to_json_text(config) << qsbm::sweep_table(config);
        }
    } catch (const qsbm::ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const qsbm::OutputError &e) {
        std::cerr << "output error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
