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

#include "qsbm/training.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

namespace qsbm {

double adam_step(AdamState &state, std::span<double> params, std::span<const double> gradient, double clip_norm) {
    if (params.size() != gradient.size()) {
        throw std::invalid_argument("parameter and gradient lengths differ");
    }
    if (state.m.empty()) {
        state.m.assign(params.size(), 0.0);
        state.v.assign(params.size(), 0.0);
    }
    if (state.m.size() != params.size()) {
        throw std::invalid_argument("Adam state was built for a different parameter count");
    }
    double norm2 = 0.0;
    for (std::size_t i = 0; i < gradient.size(); ++i) {
        if (!std::isfinite(gradient[i])) {
            throw NumericError("non-finite gradient component " + std::to_string(i) + " at Adam step " +
                               std::to_string(state.step + 1) + ": " + std::to_string(gradient[i]));
        }
        norm2 += gradient[i] * gradient[i];
    }
    const double norm = std::sqrt(norm2);
    const double scale = (clip_norm > 0.0 && norm > clip_norm) ? clip_norm / norm : 1.0;

    ++state.step;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = gradient[i] * scale;
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
        const double m_hat = state.m[i] / bc1;
        const double v_hat = state.v[i] / bc2;
        params[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
    return norm * scale;
}

void TrainConfig::validate() const {
    if (epochs < 0) {
        throw std::invalid_argument("epochs must be >= 0");
    }
    if (num_realizations < 1) {
        throw std::invalid_argument("num_realizations must be >= 1");
    }
    if (num_shots < 1) {
        throw std::invalid_argument("num_shots must be >= 1");
    }
    if (eval_every < 1) {
        throw std::invalid_argument("eval_every must be >= 1");
    }
    if (epochs % eval_every != 0) {
        throw std::invalid_argument("eval_every (" + std::to_string(eval_every) + ") must divide epochs (" +
                                    std::to_string(epochs) + ")");
    }
    if (!(learning_rate > 0.0) || !(clip_norm > 0.0)) {
        throw std::invalid_argument("learning_rate and clip_norm must be > 0");
    }
    if (smoothing_alpha < 0.0) {
        throw std::invalid_argument("smoothing_alpha must be >= 0");
    }
}

RandomStream realization_stream(std::uint64_t root_seed, std::uint64_t index) {
    return RandomStream(root_seed).substream(index);
}

std::shared_ptr<const CompiledScrambler> compile_for_realization(const ModelSpec &spec,
                                                                 const RandomStream &realization) {
    if (const auto *fixed = std::get_if<FixedScramblerModel>(&spec.variant)) {
        RandomStream rng = realization.substream("scrambler");
        return std::make_shared<const CompiledScrambler>(compile_scrambler(fixed->scrambler, spec.num_qubits, rng));
    }
    return nullptr;
}

namespace {

EvalPoint evaluate(const BornMachine &model, std::span<const double> params, const TargetDistribution &target,
                   const TrainConfig &config, RandomStream &shots, int epoch) {
    const StateVector psi = model.forward(params);
    const auto q = marginal_probabilities_high(psi, model.spec().num_ancillas);
    EvalPoint e;
    e.epoch = epoch;
    e.nll = nll(target.probs, q);
    e.exact_kld = kld(target.probs, q);
    const auto counts = sample_counts(q, config.num_shots, shots);
    e.empirical_kld = kld(target.probs, empirical_distribution(counts, config.smoothing_alpha));
    e.half_chain_entropy = half_chain_entropy(psi);
    return e;
}

} // namespace

TrainingRecord train(const BornMachine &model, const TargetDistribution &target, const TrainConfig &config,
                     const RandomStream &realization) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    RandomStream init = realization.substream("init");
    RandomStream shots = realization.substream("shots");

    TrainingRecord rec;
    rec.seed = realization.seed();
    std::vector<double> params = model.initial_parameters(init);
    AdamState adam;
    adam.learning_rate = config.learning_rate;
    rec.best_exact_kld = std::numeric_limits<double>::infinity();

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        if (epoch % config.eval_every == 0) {
            rec.trace.push_back(evaluate(model, params, target, config, shots, epoch));
        }
        const LossGradient lg = model.loss_and_gradient(params, target.probs);
        const double current = kld(target.probs, lg.probabilities);
        if (current < rec.best_exact_kld) {
            rec.best_exact_kld = current;
            rec.best_epoch = epoch;
        }
        adam_step(adam, params, lg.gradient, config.clip_norm);
    }
    rec.trace.push_back(evaluate(model, params, target, config, shots, config.epochs));
    if (rec.trace.back().exact_kld < rec.best_exact_kld) {
        rec.best_exact_kld = rec.trace.back().exact_kld;
        rec.best_epoch = config.epochs;
    }
    rec.final_distribution = model.output_distribution(params);
    rec.final_params = std::move(params);
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

MeanStd mean_std(std::span<const double> values) {
    MeanStd out;
    if (values.empty()) {
        return out;
    }
    double s = 0.0;
    for (double v : values) {
        s += v;
    }
    out.mean = s / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) {
        ss += (v - out.mean) * (v - out.mean);
    }
    out.std = std::sqrt(ss / static_cast<double>(values.size()));
    return out;
}

double median(std::vector<double> values) {
    if (values.empty()) {
        throw std::invalid_argument("median of an empty set");
    }
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<AggregatePoint> aggregate_records(std::span<const TrainingRecord> records) {
    std::vector<AggregatePoint> out;
    if (records.empty()) {
        return out;
    }
    const std::size_t points = records.front().trace.size();
    for (const auto &r : records) {
        if (r.trace.size() != points) {
            throw std::invalid_argument("records have different eval schedules");
        }
    }
    for (std::size_t k = 0; k < points; ++k) {
        std::vector<double> nll_v, exact, empirical;
        for (const auto &r : records) {
            nll_v.push_back(r.trace[k].nll);
            exact.push_back(r.trace[k].exact_kld);
            empirical.push_back(r.trace[k].empirical_kld);
        }
        AggregatePoint a;
        a.epoch = records.front().trace[k].epoch;
        a.mean_nll = mean_std(nll_v).mean;
        const auto e = mean_std(exact);
        const auto m = mean_std(empirical);
        a.mean_exact_kld = e.mean;
        a.std_exact_kld = e.std;
        a.mean_empirical_kld = m.mean;
        a.std_empirical_kld = m.std;
        out.push_back(a);
    }
    return out;
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)> &job) {
    const auto threads = static_cast<std::size_t>(std::max(1, workers));
    if (threads == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            job(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(threads, count); ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                    next = count;
                }
            }
        });
    }
    pool.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
}

RealizationSet run_realizations(const ModelSpec &spec, const TargetDistribution &target, const TrainConfig &config,
                                int workers) {
    config.validate();
    RealizationSet out;
    out.records.resize(static_cast<std::size_t>(config.num_realizations));
    parallel_for(out.records.size(), workers, [&](std::size_t r) {
        const RandomStream stream = realization_stream(config.root_seed, r);
        const BornMachine model(spec, compile_for_realization(spec, stream));
        out.records[r] = train(model, target, config, stream);
    });
    out.aggregate = aggregate_records(out.records);
    return out;
}

} // namespace qsbm
