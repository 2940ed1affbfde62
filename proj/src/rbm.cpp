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


#include "qsbm/rbm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qsbm/born_machine.hpp"
#include "qsbm/statevector.hpp"

namespace qsbm {

namespace {

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

Eigen::MatrixXd bernoulli(const Eigen::MatrixXd &probs, RandomStream &rng) {
    Eigen::MatrixXd out(probs.rows(), probs.cols());
    for (Eigen::Index r = 0; r < probs.rows(); ++r) {
        for (Eigen::Index c = 0; c < probs.cols(); ++c) {
            out(r, c) = rng.uniform() < probs(r, c) ? 1.0 : 0.0;
        }
    }
    return out;
}

Eigen::MatrixXd sigmoid_rows(Eigen::MatrixXd pre, const Eigen::VectorXd &bias) {
    pre.rowwise() += bias.transpose();
    return pre.unaryExpr([](double x) { return sigmoid(x); });
}

} // namespace

RbmParams::RbmParams(int num_visible, int num_hidden) {
    if (num_visible < 1 || num_visible > 20 || num_hidden < 1) {
        throw std::invalid_argument("RBM needs 1 <= n_v <= 20 and n_h >= 1");
    }
    weights = Eigen::MatrixXd::Zero(num_visible, num_hidden);
    visible_bias = Eigen::VectorXd::Zero(num_visible);
    hidden_bias = Eigen::VectorXd::Zero(num_hidden);
}

std::size_t rbm_parameter_count(int num_visible, int num_hidden) {
    const auto v = static_cast<std::size_t>(num_visible);
    const auto h = static_cast<std::size_t>(num_hidden);
    return v * h + v + h;
}

std::size_t RbmParams::num_parameters() const { return rbm_parameter_count(num_visible(), num_hidden()); }

static_assert(8 * kRbmHiddenBudget + 8 + kRbmHiddenBudget <= 310);

Eigen::VectorXd visible_from_index(std::size_t index, int num_visible) {
    Eigen::VectorXd v(num_visible);
    for (int i = 0; i < num_visible; ++i) {
        v[i] = static_cast<double>((index >> i) & 1U);
    }
    return v;
}

double free_energy(const RbmParams &params, const Eigen::VectorXd &visible) {
    if (visible.size() != params.num_visible()) {
        throw std::invalid_argument("visible vector has wrong length");
    }
    const Eigen::VectorXd act = params.hidden_bias + params.weights.transpose() * visible;
    double f = -params.visible_bias.dot(visible);
    for (Eigen::Index j = 0; j < act.size(); ++j) {
        f -= softplus(act[j]);
    }
    return f;
}

std::vector<double> exact_distribution(const RbmParams &params) {
    const std::size_t states = std::size_t{1} << params.num_visible();
    std::vector<double> logw(states);
    for (std::size_t s = 0; s < states; ++s) {
        logw[s] = -free_energy(params, visible_from_index(s, params.num_visible()));
    }
    const double top = *std::max_element(logw.begin(), logw.end());
    double z = 0.0;
    for (double &w : logw) {
        w = std::exp(w - top);
        z += w;
    }
    for (double &w : logw) {
        w /= z;
    }
    return logw;
}

RbmParams initial_rbm(int num_visible, int num_hidden, double init_std, RandomStream &rng) {
    RbmParams p(num_visible, num_hidden);
    if (init_std < 0.0) {
        throw std::invalid_argument("init_std must be >= 0");
    }
    for (Eigen::Index i = 0; i < p.weights.rows(); ++i) {
        for (Eigen::Index j = 0; j < p.weights.cols(); ++j) {
            p.weights(i, j) = init_std * rng.normal();
        }
    }
    return p;
}

void cd1_update(RbmParams &params, std::span<const std::size_t> batch, double learning_rate, RandomStream &rng) {
    if (batch.empty()) {
        throw std::invalid_argument("empty minibatch");
    }
    const int nv = params.num_visible();
    const auto b = static_cast<Eigen::Index>(batch.size());
    Eigen::MatrixXd v0(b, nv);
    for (Eigen::Index r = 0; r < b; ++r) {
        if (batch[static_cast<std::size_t>(r)] >> nv) {
            throw std::invalid_argument("sample index outside the visible space");
        }
        v0.row(r) = visible_from_index(batch[static_cast<std::size_t>(r)], nv).transpose();
    }
    const Eigen::MatrixXd ph0 = sigmoid_rows(v0 * params.weights, params.hidden_bias);
    const Eigen::MatrixXd h0 = bernoulli(ph0, rng);
    const Eigen::MatrixXd pv1 = sigmoid_rows(h0 * params.weights.transpose(), params.visible_bias);
    const Eigen::MatrixXd v1 = bernoulli(pv1, rng);
    const Eigen::MatrixXd ph1 = sigmoid_rows(v1 * params.weights, params.hidden_bias);

    const double scale = learning_rate / static_cast<double>(b);
    params.weights += scale * (v0.transpose() * ph0 - v1.transpose() * ph1);
    params.visible_bias += scale * (v0 - v1).colwise().sum().transpose();
    params.hidden_bias += scale * (ph0 - ph1).colwise().sum().transpose();
}

std::vector<std::size_t> sample_indices(std::span<const double> probs, std::size_t count, RandomStream &rng) {
    if (probs.empty()) {
        throw std::invalid_argument("empty distribution");
    }
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] < 0.0) {
            throw std::invalid_argument("negative probability");
        }
        acc += probs[i];
        cdf[i] = acc;
    }
    if (std::abs(acc - 1.0) > 1e-8) {
        throw std::invalid_argument("distribution does not sum to 1");
    }
    std::vector<std::size_t> out(count);
    for (auto &s : out) {
        const double u = rng.uniform() * acc;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        s = std::min(static_cast<std::size_t>(it - cdf.begin()), probs.size() - 1);
    }
    return out;
}

void RbmConfig::validate() const {
    if (num_hidden < 1 || epochs < 0 || batch_size < 1 || eval_every < 1 || num_shots < 1) {
        throw std::invalid_argument("RBM config: num_hidden, batch_size, eval_every, num_shots must be >= 1, "
                                    "epochs >= 0");
    }
    if (epochs % eval_every != 0) {
        throw std::invalid_argument("RBM config: eval_every (" + std::to_string(eval_every) +
                                    ") must divide epochs (" + std::to_string(epochs) + ")");
    }
    if (learning_rate < 0.0 || init_std < 0.0 || smoothing_alpha < 0.0) {
        throw std::invalid_argument("RBM config: learning_rate, init_std, smoothing_alpha must be >= 0");
    }
}

RbmRecord train_rbm(const TargetDistribution &target, const RbmConfig &config, const RandomStream &realization) {
    config.validate();
    const int nv = target.num_bits();
    if (target.num_bins() != std::size_t{1} << nv) {
        throw std::invalid_argument("target is not over 2^n_v bins");
    }
    const auto start = std::chrono::steady_clock::now();
    RandomStream init = realization.substream("init");
    RandomStream data = realization.substream("data");
    RandomStream gibbs = realization.substream("gibbs");
    RandomStream shots = realization.substream("shots");

    RbmRecord rec;
    rec.seed = realization.seed();
    RbmParams params = initial_rbm(nv, config.num_hidden, config.init_std, init);

    const auto evaluate = [&](int epoch) {
        const auto q = exact_distribution(params);
        RbmEvalPoint e;
        e.epoch = epoch;
        e.nll = nll(target.probs, q);
        e.exact_kld = kld(target.probs, q);
        const auto counts = sample_counts(q, config.num_shots, shots);
        e.empirical_kld = kld(target.probs, empirical_distribution(counts, config.smoothing_alpha));
        rec.trace.push_back(e);
    };

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        if (epoch % config.eval_every == 0) {
            evaluate(epoch);
        }
        const auto batch = sample_indices(target.probs, static_cast<std::size_t>(config.batch_size), data);
        cd1_update(params, batch, config.learning_rate, gibbs);
    }
    evaluate(config.epochs);
    rec.final_distribution = exact_distribution(params);
    rec.final_params = std::move(params);
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

} // namespace qsbm
