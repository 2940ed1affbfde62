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


#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsbm/config.hpp"
#include "qsbm/csv.hpp"

namespace qsbm {

/// Refused or inconsistent output directory, or results.csv from another schema.
class OutputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct RunOptions {
    std::string out_dir;  ///< empty: config.output_dir
    bool resume = false;
    bool dry_run = false;
    int workers = 1;
    std::string seed_source = "config";  ///< recorded in manifest.json
    std::ostream *log = nullptr;         ///< progress lines; null for silence
};

struct RunReport {
    std::size_t points = 0;
    std::size_t jobs_total = 0;
    std::size_t jobs_run = 0;
    std::size_t jobs_kept = 0;  ///< complete jobs found by --resume
    double wall_seconds = 0.0;
};

/// Header of results.csv.
const std::vector<std::string> &results_columns();
const std::vector<std::string> &summary_columns();

/// Resolved sweep as a printable table, one line per point.
std::string sweep_table(const ExperimentConfig &config);

/// Runs every (point, realization) job and writes results.csv,
/// distributions.csv, timings.csv, manifest.json and summary.csv under the
/// output directory. results.csv is rewritten in canonical order at the end,
/// so its bytes depend only on the config.
RunReport run_experiment(const ExperimentConfig &config, const RunOptions &options);

/// manifest.json contents for a config.
std::string manifest_json(const ExperimentConfig &config, const std::string &seed_source);

struct SummaryRow {
    std::vector<std::string> key;  ///< experiment_id then point_columns()
    int num_seeds = 0;
    int final_epoch = 0;
    double mean_kld_exact = 0.0;
    double std_kld_exact = 0.0;
    double median_kld_exact = 0.0;
    double mean_kld_empirical = 0.0;
    double std_kld_empirical = 0.0;
    double mean_nll = 0.0;
    std::optional<double> mean_half_chain_entropy;
    double mean_best_kld_exact = 0.0;  ///< per seed minimum over eval epochs, averaged
};

/// One row per sweep point, final-epoch statistics over seeds. Rows are
/// ordered by the axis columns, numerically where both values are numbers.
/// Throws OutputError on a schema mismatch.
std::vector<SummaryRow> summarize_table(const csv::Table &results);

/// Reads <dir>/results.csv and writes <dir>/summary.csv.
std::vector<SummaryRow> summarize(const std::string &results_dir);

void write_summary(std::ostream &out, const std::vector<SummaryRow> &rows);

/// Looks up the summary row of `point` in experiment `experiment_id`.
const SummaryRow *find_summary(const std::vector<SummaryRow> &rows, const SweepPoint &point);

} // namespace qsbm
