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
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "qsbm/born_machine.hpp"
#include "qsbm/random.hpp"
#include "qsbm/targets.hpp"

namespace qsbm {

class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::int64_t step = 0;
    double learning_rate = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// One bias-corrected Adam update after rescaling `gradient` to Euclidean
/// norm <= clip_norm. Returns the norm of the gradient actually used.
/// Throws NumericError on a non-finite gradient.
double adam_step(AdamState &state, std::span<double> params, std::span<const double> gradient,
                 double clip_norm = 1.0);

struct TrainConfig {
    int epochs = 2000;
    int num_realizations = 20;
    std::int64_t num_shots = 5000;
    double learning_rate = 0.01;
    double clip_norm = 1.0;
    int eval_every = 50;
    std::uint64_t root_seed = 0;
    double smoothing_alpha = kDefaultSmoothing;

    void validate() const;
};

struct EvalPoint {
    int epoch = 0;
    double nll = 0.0;
    double exact_kld = 0.0;
    double empirical_kld = 0.0;
    double half_chain_entropy = 0.0;
};

struct TrainingRecord {
    std::vector<EvalPoint> trace;  ///< epochs 0, eval_every, ..., epochs
    std::vector<double> final_params;
    std::vector<double> final_distribution;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
    double best_exact_kld = 0.0;  ///< minimum over every epoch
    int best_epoch = 0;

    [[nodiscard]] const EvalPoint &final_point() const { return trace.back(); }
};

/// Randomness of realization `index` under `root_seed`. Sub-streams "scrambler",
/// "init" and "shots" of it feed the scrambler draw, the initial parameters and
/// the shot sampling.
RandomStream realization_stream(std::uint64_t root_seed, std::uint64_t index);

std::shared_ptr<const CompiledScrambler> compile_for_realization(const ModelSpec &spec,
                                                                 const RandomStream &realization);

/// Train one realization. The loss uses exact probabilities; shots only feed
/// the reported empirical KLD.
TrainingRecord train(const BornMachine &model, const TargetDistribution &target, const TrainConfig &config,
                     const RandomStream &realization);

struct AggregatePoint {
    int epoch = 0;
    double mean_nll = 0.0;
    double mean_exact_kld = 0.0;
    double std_exact_kld = 0.0;
    double mean_empirical_kld = 0.0;
    double std_empirical_kld = 0.0;
};

struct RealizationSet {
    std::vector<TrainingRecord> records;  ///< in realization order
    std::vector<AggregatePoint> aggregate;
};

/// Mean and population standard deviation per eval epoch, reduced in
/// realization order.
std::vector<AggregatePoint> aggregate_records(std::span<const TrainingRecord> records);

/// Realization r uses realization_stream(config.root_seed, r). `workers`
/// threads share the job list; the result does not depend on it.
RealizationSet run_realizations(const ModelSpec &spec, const TargetDistribution &target, const TrainConfig &config,
                                int workers = 1);

/// Runs jobs 0..count-1 on `workers` threads; rethrows the first failure.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)> &job);

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};
MeanStd mean_std(std::span<const double> values);
double median(std::vector<double> values);

} // namespace qsbm
