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


#include "qsbm/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qsbm/born_machine.hpp"
#include "qsbm/rbm.hpp"
#include "qsbm/training.hpp"

namespace qsbm {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char *kResults = "results.csv";
constexpr const char *kDistributions = "distributions.csv";
constexpr const char *kTimings = "timings.csv";
constexpr const char *kManifest = "manifest.json";
constexpr const char *kSummary = "summary.csv";

std::vector<std::string> with_prefix(std::initializer_list<std::string> tail) {
    std::vector<std::string> cols{"schema_version", "experiment_id"};
    cols.insert(cols.end(), point_columns().begin(), point_columns().end());
    cols.insert(cols.end(), tail);
    return cols;
}

const std::vector<std::string> &distribution_columns() {
    static const auto cols = with_prefix({"realization", "seed", "bin", "q_model", "p_target"});
    return cols;
}

const std::vector<std::string> &timing_columns() {
    static const auto cols = with_prefix({"realization", "seed", "wall_seconds"});
    return cols;
}

std::size_t key_width() { return 2 + point_columns().size(); }

int to_int(const std::string &s) { return static_cast<int>(std::strtol(s.c_str(), nullptr, 10)); }
double to_double(const std::string &s) { return std::strtod(s.c_str(), nullptr); }

bool is_number(const std::string &s) {
    if (s.empty()) {
        return false;
    }
    char *end = nullptr;
    std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

/// Axis order: empty first, numbers numerically, otherwise text.
bool field_less(const std::string &a, const std::string &b) {
    if (is_number(a) && is_number(b)) {
        return to_double(a) < to_double(b);
    }
    return a < b;
}

bool key_less(const std::vector<std::string> &a, const std::vector<std::string> &b) {
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        if (field_less(a[i], b[i])) {
            return true;
        }
        if (field_less(b[i], a[i])) {
            return false;
        }
    }
    return a.size() < b.size();
}

void write_atomic(const fs::path &path, const std::string &content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw OutputError("cannot write " + tmp.string());
        }
        out << content;
        if (!out.flush()) {
            throw OutputError("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

std::string render(const std::vector<std::string> &header, const std::vector<csv::Row> &rows) {
    std::ostringstream out;
    csv::write_row(out, header);
    for (const auto &r : rows) {
        csv::write_row(out, r);
    }
    return out.str();
}

/// Rows of a journal file; a torn final row (from an interrupted write) is
/// dropped, any other malformed content is an error.
std::vector<csv::Row> read_journal(const fs::path &path, const std::vector<std::string> &header) {
    std::vector<csv::Row> rows;
    if (!fs::exists(path)) {
        return rows;
    }
    std::ifstream in(path, std::ios::binary);
    std::vector<csv::Row> all;
    try {
        all = csv::read_all(in);
    } catch (const std::exception &e) {
        throw OutputError(path.string() + ": " + e.what());
    }
    if (all.empty()) {
        return rows;
    }
    if (all.front() != header) {
        throw OutputError(path.string() + ": header does not match schema version " +
                          std::to_string(kResultsSchemaVersion));
    }
    for (std::size_t i = 1; i < all.size(); ++i) {
        if (all[i].size() != header.size()) {
            if (i + 1 == all.size()) {
                break;
            }
            throw OutputError(path.string() + ": row " + std::to_string(i + 1) + " has " +
                              std::to_string(all[i].size()) + " fields, expected " + std::to_string(header.size()));
        }
        if (all[i][0] != std::to_string(kResultsSchemaVersion)) {
            throw OutputError(path.string() + ": row " + std::to_string(i + 1) + " has schema version " + all[i][0] +
                              ", expected " + std::to_string(kResultsSchemaVersion));
        }
        rows.push_back(std::move(all[i]));
    }
    return rows;
}

struct Job {
    std::size_t point = 0;
    int realization = 0;
};

struct JobOutput {
    std::vector<csv::Row> results;
    std::vector<csv::Row> distributions;
    csv::Row timing;
    double final_kld = 0.0;
};

std::string opt(const std::optional<double> &v) { return v ? csv::format_double(*v) : std::string(); }

JobOutput run_job(const ExperimentConfig &config, const SweepPoint &point, const TargetDistribution &target,
                  int realization) {
    const RandomStream stream = realization_stream(config.root_seed, static_cast<std::uint64_t>(realization));
    csv::Row prefix{std::to_string(kResultsSchemaVersion), config.experiment_id};
    for (auto &f : point.key_fields()) {
        prefix.push_back(std::move(f));
    }
    prefix.push_back(std::to_string(realization));
    prefix.push_back(std::to_string(stream.seed()));

    const auto row = [&](int epoch, double nll_v, double exact, double empirical, std::optional<double> entropy) {
        csv::Row r = prefix;
        r.push_back(std::to_string(epoch));
        r.push_back(csv::format_double(nll_v));
        r.push_back(csv::format_double(exact));
        r.push_back(csv::format_double(empirical));
        r.push_back(opt(entropy));
        return r;
    };

    JobOutput out;
    std::vector<double> q;
    double wall = 0.0;
    if (point.model == "rbm") {
        RbmConfig rc = config.rbm;
        rc.num_hidden = point.rbm_hidden.value_or(kRbmHiddenBudget);
        const RbmRecord rec = train_rbm(target, rc, stream);
        for (const auto &e : rec.trace) {
            out.results.push_back(row(e.epoch, e.nll, e.exact_kld, e.empirical_kld, std::nullopt));
        }
        out.final_kld = rec.trace.back().exact_kld;
        q = rec.final_distribution;
        wall = rec.wall_seconds;
    } else {
        TrainConfig tc = config.train;
        tc.root_seed = config.root_seed;
        const ModelSpec spec = point.model_spec();
        const BornMachine model(spec, compile_for_realization(spec, stream));
        const TrainingRecord rec = train(model, target, tc, stream);
        for (const auto &e : rec.trace) {
            out.results.push_back(row(e.epoch, e.nll, e.exact_kld, e.empirical_kld, e.half_chain_entropy));
        }
        out.final_kld = rec.final_point().exact_kld;
        q = rec.final_distribution;
        wall = rec.wall_seconds;
    }
    for (std::size_t b = 0; b < q.size(); ++b) {
        csv::Row r = prefix;
        r.push_back(std::to_string(b));
        r.push_back(csv::format_double(q[b]));
        r.push_back(csv::format_double(target.probs[b]));
        out.distributions.push_back(std::move(r));
    }
    out.timing = prefix;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", wall);
    out.timing.push_back(buf);
    return out;
}

int epochs_of(const ExperimentConfig &c, const SweepPoint &p) {
    return p.model == "rbm" ? c.rbm.epochs : c.train.epochs;
}

int eval_every_of(const ExperimentConfig &c, const SweepPoint &p) {
    return p.model == "rbm" ? c.rbm.eval_every : c.train.eval_every;
}

std::set<int> expected_epochs(const ExperimentConfig &c, const SweepPoint &p) {
    std::set<int> e;
    for (int k = 0; k <= epochs_of(c, p); k += eval_every_of(c, p)) {
        e.insert(k);
    }
    return e;
}

/// Identifies a row's job; nullopt for rows outside the sweep.
class JobIndex {
  public:
    explicit JobIndex(const ExperimentConfig &config, const std::vector<SweepPoint> &points) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            std::vector<std::string> key{std::to_string(kResultsSchemaVersion), config.experiment_id};
            for (auto &f : points[i].key_fields()) {
                key.push_back(std::move(f));
            }
            index_.emplace(std::move(key), i);
        }
        realizations_ = config.train.num_realizations;
    }

    [[nodiscard]] std::optional<Job> of(const csv::Row &row) const {
        const std::vector<std::string> key(row.begin(), row.begin() + static_cast<long>(key_width()));
        const auto it = index_.find(key);
        if (it == index_.end()) {
            return std::nullopt;
        }
        const int r = to_int(row[key_width()]);
        if (r < 0 || r >= realizations_) {
            return std::nullopt;
        }
        return Job{it->second, r};
    }

  private:
    std::map<std::vector<std::string>, std::size_t> index_;
    int realizations_ = 0;
};

/// Sort rows by (point, realization, trailing integer column `order_col`).
void canonical_sort(std::vector<csv::Row> &rows, const JobIndex &index, std::size_t order_col) {
    std::vector<std::pair<std::tuple<std::size_t, int, long>, std::size_t>> keys;
    keys.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto job = index.of(rows[i]);
        keys.push_back({{job->point, job->realization, order_col ? std::strtol(rows[i][order_col].c_str(), nullptr, 10) : 0L}, i});
    }
    std::sort(keys.begin(), keys.end());
    std::vector<csv::Row> sorted;
    sorted.reserve(rows.size());
    for (const auto &k : keys) {
        sorted.push_back(std::move(rows[k.second]));
    }
    rows = std::move(sorted);
}

ordered_json config_for_manifest(const ExperimentConfig &config) {
    auto j = ordered_json::parse(to_json_text(config));
    j.erase("output_dir");
    return j;
}

std::string point_label(const SweepPoint &p) {
    std::ostringstream s;
    s << p.model << '/' << p.scrambler_type;
    if (!p.hamiltonian_preset.empty()) {
        s << '/' << p.hamiltonian_preset;
    }
    s << " N=" << p.num_qubits;
    if (p.num_ancillas) {
        s << " N_A=" << *p.num_ancillas;
    }
    if (p.layers) {
        s << " L=" << *p.layers;
    }
    if (p.depth) {
        s << " K=" << *p.depth;
    }
    if (p.tau) {
        s << " tau=" << *p.tau;
    }
    if (p.rho) {
        s << " rho=" << *p.rho;
    }
    if (p.rbm_hidden) {
        s << " n_h=" << *p.rbm_hidden;
    }
    return s.str();
}

} // namespace

const std::vector<std::string> &results_columns() {
    static const auto cols = with_prefix({"realization", "seed", "epoch", "nll", "kld_exact", "kld_empirical",
                                          "half_chain_entropy"});
    return cols;
}

const std::vector<std::string> &summary_columns() {
    static const auto cols =
        with_prefix({"num_seeds", "final_epoch", "mean_kld_exact", "std_kld_exact", "median_kld_exact",
                     "mean_kld_empirical", "std_kld_empirical", "mean_nll", "mean_half_chain_entropy",
                     "mean_best_kld_exact"});
    return cols;
}

std::string sweep_table(const ExperimentConfig &config) {
    const auto points = expand_sweep(config);
    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> header{"#"};
    header.insert(header.end(), point_columns().begin(), point_columns().end());
    header.push_back("params");
    header.push_back("seeds");
    header.push_back("epochs");
    cells.push_back(header);
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::vector<std::string> row{std::to_string(i)};
        for (auto &f : points[i].key_fields()) {
            row.push_back(f.empty() ? "-" : f);
        }
        if (points[i].model == "rbm") {
            row.push_back(std::to_string(rbm_parameter_count(points[i].num_qubits, *points[i].rbm_hidden)));
        } else {
            row.push_back(std::to_string(points[i].model_spec().num_parameters()));
        }
        row.push_back(std::to_string(config.train.num_realizations));
        row.push_back(std::to_string(epochs_of(config, points[i])));
        cells.push_back(std::move(row));
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (const auto &r : cells) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            width[c] = std::max(width[c], r[c].size());
        }
    }
    std::ostringstream out;
    out << "experiment " << config.experiment_id << " (" << to_string(config.kind) << "): " << points.size()
        << " points x " << config.train.num_realizations << " seeds = "
        << points.size() * static_cast<std::size_t>(config.train.num_realizations) << " jobs\n";
    for (const auto &r : cells) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (c + 1 == r.size()) {
                out << r[c];
            } else {
                out << std::left << std::setw(static_cast<int>(width[c]) + 2) << r[c];
            }
        }
        out << '\n';
    }
    return out.str();
}

std::string manifest_json(const ExperimentConfig &config, const std::string &seed_source) {
    ordered_json m;
    m["schema_version"] = kResultsSchemaVersion;
    m["experiment_id"] = config.experiment_id;
    m["root_seed"] = config.root_seed;
    m["seed_source"] = seed_source;
    ordered_json seeds = ordered_json::array();
    for (int r = 0; r < config.train.num_realizations; ++r) {
        seeds.push_back({{"realization", r},
                         {"seed", realization_stream(config.root_seed, static_cast<std::uint64_t>(r)).seed()}});
    }
    m["realizations"] = seeds;
    m["config"] = config_for_manifest(config);

    ordered_json design;
    design["rotation_convention"] = "R_a(theta) = exp(-i theta sigma_a / 2)";
    design["qubit_order"] = "qubit 0 is the least significant bit of the basis index";
    design["ancilla_placement"] = "ancillas are the N_A highest-index qubits";
    design["layer_order"] = "R_x on all qubits, R_z on all qubits, scrambler, R_y on all qubits";
    design["trainable_hamiltonian_layer"] =
        "exp(-i tau H), H = -J sum_i X_i X_{i+1} - sum_i (hx_i X_i + hy_i Y_i + hz_i Z_i), open boundary";
    design["brickwork_pairing"] = "even layers (0,1),(2,3),...; odd layers (1,2),(3,4),...; fresh Haar gate per pair, "
                                  "drawn once per realization";
    design["haar_sampling"] = "QR of complex Ginibre matrix with R-diagonal phase correction";
    design["probability_floor"] = kProbabilityFloor;
    design["smoothing_alpha"] = config.train.smoothing_alpha;
    design["empirical_distribution"] = "(count + alpha) / (shots + alpha * bins)";
    design["entropy_units"] = "nats";
    design["kld_reported"] = "kld_exact from exact probabilities; kld_empirical from shots";
    design["degeneracy_gap"] = 1e-8;
    design["eigensolver"] = "Eigen SelfAdjointEigenSolver";
    design["target_weight_seed"] = config.target.weight_seed;
    {
        const auto w = multimodal_weights(config.target.weight_seed);
        design["multimodal_weights"] = std::vector<double>(w.begin(), w.end());
    }
    design["parameter_init"] = "angles and fields uniform in [-pi, pi); couplings J = 1";
    design["optimizer"] = {{"name", "adam"},           {"beta1", 0.9},
                           {"beta2", 0.999},           {"epsilon", 1e-8},
                           {"learning_rate", config.train.learning_rate}, {"clip_norm", config.train.clip_norm},
                           {"loss", "nll on exact probabilities"}};
    design["rbm"] = {{"training", "CD-1, hidden statistics from p(h|v), one minibatch per epoch"},
                     {"weights_init", "normal(0, init_std^2)"},
                     {"biases_init", 0.0},
                     {"init_std", config.rbm.init_std},
                     {"batch_size", config.rbm.batch_size},
                     {"learning_rate", config.rbm.learning_rate}};
    design["realization_streams"] = "realization r: substream r of root_seed; named substreams scrambler, init, "
                                    "shots (rbm: init, data, gibbs, shots)";
    m["design"] = design;

    ordered_json points = ordered_json::array();
    for (const auto &p : expand_sweep(config)) {
        ordered_json j;
        const auto keys = p.key_fields();
        for (std::size_t c = 0; c < keys.size(); ++c) {
            j[point_columns()[c]] = keys[c];
        }
        j["target"] = make_target(config, p).provenance;
        points.push_back(j);
    }
    m["points"] = points;
    return m.dump(2) + "\n";
}

RunReport run_experiment(const ExperimentConfig &config, const RunOptions &options) {
    const auto start = std::chrono::steady_clock::now();
    const fs::path dir = options.out_dir.empty() ? fs::path(config.output_dir) : fs::path(options.out_dir);
    const auto points = expand_sweep(config);
    RunReport report;
    report.points = points.size();
    report.jobs_total = points.size() * static_cast<std::size_t>(config.train.num_realizations);
    if (options.log && config.paper_scale) {
        *options.log << "warning: paper_scale preset; expect runtimes of many hours\n";
    }
    if (options.dry_run) {
        if (options.log) {
            *options.log << sweep_table(config);
        }
        return report;
    }

    const std::string manifest = manifest_json(config, options.seed_source);
    const JobIndex index(config, points);
    std::vector<std::vector<bool>> done(points.size(),
                                        std::vector<bool>(static_cast<std::size_t>(config.train.num_realizations)));
    std::vector<csv::Row> results, dists, timings;

    const bool has_output = fs::exists(dir / kResults) || fs::exists(dir / kManifest) ||
                            fs::exists(dir / kDistributions);
    if (has_output && !options.resume) {
        throw OutputError("output directory " + dir.string() + " already holds results; pass --resume to continue");
    }
    fs::create_directories(dir);
    if (has_output) {
        if (fs::exists(dir / kManifest)) {
            std::ifstream in(dir / kManifest);
            ordered_json old;
            try {
                old = ordered_json::parse(in);
            } catch (const std::exception &e) {
                throw OutputError("unreadable manifest.json: " + std::string(e.what()));
            }
            if (old.value("schema_version", -1) != kResultsSchemaVersion) {
                throw OutputError("manifest.json has schema version " + old.value("schema_version", ordered_json()).dump() +
                                  ", expected " + std::to_string(kResultsSchemaVersion));
            }
            if (old["config"] != config_for_manifest(config)) {
                throw OutputError("config differs from the one recorded in " + (dir / kManifest).string() +
                                  "; refusing to resume");
            }
        }
        results = read_journal(dir / kResults, results_columns());
        dists = read_journal(dir / kDistributions, distribution_columns());
        timings = read_journal(dir / kTimings, timing_columns());

        std::map<std::pair<std::size_t, int>, std::multiset<int>> epochs_seen;
        std::map<std::pair<std::size_t, int>, std::multiset<int>> bins_seen;
        for (const auto &r : results) {
            if (const auto j = index.of(r)) {
                epochs_seen[{j->point, j->realization}].insert(to_int(r[key_width() + 2]));
            }
        }
        for (const auto &r : dists) {
            if (const auto j = index.of(r)) {
                bins_seen[{j->point, j->realization}].insert(to_int(r[key_width() + 2]));
            }
        }
        for (std::size_t p = 0; p < points.size(); ++p) {
            const auto want_epochs = expected_epochs(config, points[p]);
            const std::size_t bins = make_target(config, points[p]).num_bins();
            for (int r = 0; r < config.train.num_realizations; ++r) {
                const auto &e = epochs_seen[{p, r}];
                const auto &b = bins_seen[{p, r}];
                const bool epochs_ok = std::set<int>(e.begin(), e.end()) == want_epochs && e.size() == want_epochs.size();
                const std::set<int> bin_set(b.begin(), b.end());
                const bool bins_ok = b.size() == bins && bin_set.size() == bins && *bin_set.begin() == 0 &&
                                     *bin_set.rbegin() == static_cast<int>(bins) - 1;
                done[p][static_cast<std::size_t>(r)] = epochs_ok && bins_ok;
            }
        }
        const auto keep = [&](std::vector<csv::Row> &rows) {
            std::erase_if(rows, [&](const csv::Row &r) {
                const auto j = index.of(r);
                return !j || !done[j->point][static_cast<std::size_t>(j->realization)];
            });
        };
        keep(results);
        keep(dists);
        keep(timings);
        // A timing row can outlive an interrupted job; keep one per job.
        canonical_sort(timings, index, 0);
        timings.erase(std::unique(timings.begin(), timings.end(),
                                  [&](const csv::Row &a, const csv::Row &b) {
                                      const auto ja = index.of(a), jb = index.of(b);
                                      return ja->point == jb->point && ja->realization == jb->realization;
                                  }),
                      timings.end());
    }
    write_atomic(dir / kManifest, manifest);
    canonical_sort(results, index, key_width() + 2);
    canonical_sort(dists, index, key_width() + 2);
    write_atomic(dir / kResults, render(results_columns(), results));
    write_atomic(dir / kDistributions, render(distribution_columns(), dists));
    write_atomic(dir / kTimings, render(timing_columns(), timings));

    std::vector<Job> jobs;
    for (std::size_t p = 0; p < points.size(); ++p) {
        for (int r = 0; r < config.train.num_realizations; ++r) {
            if (done[p][static_cast<std::size_t>(r)]) {
                ++report.jobs_kept;
            } else {
                jobs.push_back({p, r});
            }
        }
    }
    std::vector<TargetDistribution> targets;
    for (const auto &p : points) {
        targets.push_back(make_target(config, p));
    }

    // Single serializer: completed jobs append under one lock, in completion order.
    std::mutex io;
    std::ofstream results_out(dir / kResults, std::ios::binary | std::ios::app);
    std::ofstream dists_out(dir / kDistributions, std::ios::binary | std::ios::app);
    std::ofstream timings_out(dir / kTimings, std::ios::binary | std::ios::app);
    std::size_t finished = 0;
    parallel_for(jobs.size(), options.workers, [&](std::size_t i) {
        const Job job = jobs[i];
        JobOutput out = run_job(config, points[job.point], targets[job.point], job.realization);
        std::lock_guard lock(io);
        for (const auto &r : out.results) {
            csv::write_row(results_out, r);
        }
        for (const auto &r : out.distributions) {
            csv::write_row(dists_out, r);
        }
        csv::write_row(timings_out, out.timing);
        results_out.flush();
        dists_out.flush();
        timings_out.flush();
        ++finished;
        if (options.log) {
            *options.log << "[" << finished << "/" << jobs.size() << "] " << point_label(points[job.point])
                         << " seed " << job.realization << " kld " << out.final_kld << " (" << out.timing.back()
                         << " s)\n"
                         << std::flush;
        }
    });
    results_out.close();
    dists_out.close();
    timings_out.close();
    report.jobs_run = jobs.size();

    // Canonical order so the bytes do not depend on completion order.
    results = read_journal(dir / kResults, results_columns());
    dists = read_journal(dir / kDistributions, distribution_columns());
    timings = read_journal(dir / kTimings, timing_columns());
    canonical_sort(results, index, key_width() + 2);
    canonical_sort(dists, index, key_width() + 2);
    canonical_sort(timings, index, 0);
    write_atomic(dir / kResults, render(results_columns(), results));
    write_atomic(dir / kDistributions, render(distribution_columns(), dists));
    write_atomic(dir / kTimings, render(timing_columns(), timings));
    summarize(dir.string());
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::vector<SummaryRow> summarize_table(const csv::Table &results) {
    const auto &want = results_columns();
    const auto version_col = std::find(results.header.begin(), results.header.end(), "schema_version");
    if (version_col == results.header.end()) {
        throw OutputError("results.csv has no schema_version column; expected schema version " +
                          std::to_string(kResultsSchemaVersion));
    }
    for (const auto &row : results.rows) {
        const std::string &v = row[static_cast<std::size_t>(version_col - results.header.begin())];
        if (v != std::to_string(kResultsSchemaVersion)) {
            throw OutputError("results.csv has schema version " + v + ", this build reads version " +
                              std::to_string(kResultsSchemaVersion));
        }
    }
    if (results.header != want) {
        throw OutputError("results.csv header does not match schema version " + std::to_string(kResultsSchemaVersion));
    }

    const std::size_t kw = key_width();
    const std::size_t c_real = kw, c_epoch = kw + 2, c_nll = kw + 3, c_exact = kw + 4, c_emp = kw + 5,
                      c_ent = kw + 6;

    struct Seed {
        int last_epoch = -1;
        const csv::Row *last = nullptr;
        double best = INFINITY;
    };
    std::map<std::vector<std::string>, std::map<int, Seed>> groups;
    for (const auto &row : results.rows) {
        std::vector<std::string> key(row.begin() + 1, row.begin() + static_cast<long>(kw));
        Seed &s = groups[key][to_int(row[c_real])];
        const int epoch = to_int(row[c_epoch]);
        if (epoch > s.last_epoch) {
            s.last_epoch = epoch;
            s.last = &row;
        }
        s.best = std::min(s.best, to_double(row[c_exact]));
    }

    std::vector<SummaryRow> out;
    for (const auto &[key, seeds] : groups) {
        int final_epoch = -1;
        for (const auto &[r, s] : seeds) {
            final_epoch = std::max(final_epoch, s.last_epoch);
        }
        std::vector<double> exact, emp, nll_v, ent, best;
        for (const auto &[r, s] : seeds) {
            if (s.last_epoch != final_epoch) {
                continue;
            }
            exact.push_back(to_double((*s.last)[c_exact]));
            emp.push_back(to_double((*s.last)[c_emp]));
            nll_v.push_back(to_double((*s.last)[c_nll]));
            best.push_back(s.best);
            if (!(*s.last)[c_ent].empty()) {
                ent.push_back(to_double((*s.last)[c_ent]));
            }
        }
        SummaryRow row;
        row.key = key;
        row.num_seeds = static_cast<int>(exact.size());
        row.final_epoch = final_epoch;
        const auto e = mean_std(exact);
        const auto m = mean_std(emp);
        row.mean_kld_exact = e.mean;
        row.std_kld_exact = e.std;
        row.median_kld_exact = median(exact);
        row.mean_kld_empirical = m.mean;
        row.std_kld_empirical = m.std;
        row.mean_nll = mean_std(nll_v).mean;
        if (!ent.empty()) {
            row.mean_half_chain_entropy = mean_std(ent).mean;
        }
        row.mean_best_kld_exact = mean_std(best).mean;
        out.push_back(std::move(row));
    }
    std::sort(out.begin(), out.end(), [](const SummaryRow &a, const SummaryRow &b) { return key_less(a.key, b.key); });
    return out;
}

void write_summary(std::ostream &out, const std::vector<SummaryRow> &rows) {
    csv::write_row(out, summary_columns());
    for (const auto &s : rows) {
        csv::Row r{std::to_string(kResultsSchemaVersion)};
        r.insert(r.end(), s.key.begin(), s.key.end());
        r.push_back(std::to_string(s.num_seeds));
        r.push_back(std::to_string(s.final_epoch));
        for (double v : {s.mean_kld_exact, s.std_kld_exact, s.median_kld_exact, s.mean_kld_empirical,
                         s.std_kld_empirical, s.mean_nll}) {
            r.push_back(csv::format_double(v));
        }
        r.push_back(opt(s.mean_half_chain_entropy));
        r.push_back(csv::format_double(s.mean_best_kld_exact));
        csv::write_row(out, r);
    }
}

std::vector<SummaryRow> summarize(const std::string &results_dir) {
    const fs::path dir(results_dir);
    std::ifstream in(dir / kResults, std::ios::binary);
    if (!in) {
        throw OutputError("no results.csv in " + dir.string());
    }
    csv::Table table;
    try {
        table = csv::read_table(in);
    } catch (const std::exception &e) {
        throw OutputError((dir / kResults).string() + ": " + e.what());
    }
    auto rows = summarize_table(table);
    std::ostringstream out;
    write_summary(out, rows);
    write_atomic(dir / kSummary, out.str());
    return rows;
}

const SummaryRow *find_summary(const std::vector<SummaryRow> &rows, const SweepPoint &point) {
    const auto fields = point.key_fields();
    for (const auto &r : rows) {
        if (std::equal(fields.begin(), fields.end(), r.key.begin() + 1, r.key.end())) {
            return &r;
        }
    }
    return nullptr;
}

} // namespace qsbm
