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
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsbm/born_machine.hpp"
#include "qsbm/rbm.hpp"
#include "qsbm/targets.hpp"
#include "qsbm/training.hpp"

namespace qsbm {

inline constexpr int kResultsSchemaVersion = 1;

enum class ExperimentKind {
    HaarLayers,
    BrickworkDepth,
    AnalogTau,
    TrainableHamiltonian2D,
    ClassicalComparison,
    SingleRun,
};

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string &name);

/// Invalid configuration; `line` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string &message, int line);
    [[nodiscard]] int line() const { return line_; }

  private:
    int line_;
};

struct SweepAxes {
    std::vector<int> layers{2};
    std::vector<int> ancillas{0};
    std::vector<int> depths;          ///< brickwork K
    std::vector<double> taus;         ///< analog evolution times
    std::vector<std::string> presets; ///< "tfim", "xx"
    std::vector<double> rhos;         ///< bivariate Gaussian correlation
    std::vector<int> rbm_hidden;
};

struct TargetSettings {
    std::string name = "multimodal_1d";  ///< or "bivariate_gaussian_2d", "four_mode_2d"
    std::uint64_t weight_seed = kDefaultWeightSeed;
    int rbm_visible_bits = 0;            ///< RBM visible units; 0 = size of the QSBM measured register
};

/// Model of a single_run experiment.
struct SingleModelSettings {
    std::string scrambler = "haar";  ///< identity | haar | brickwork | analog | trainable
    int depth = 1;
    double tau = 1.0;
    std::string preset = "tfim";
};

struct ExperimentConfig {
    std::string experiment_id = "experiment";
    ExperimentKind kind = ExperimentKind::SingleRun;
    std::uint64_t root_seed = 0;
    int num_qubits = 8;
    SweepAxes sweep;
    bool haar_reference = true;
    double hamiltonian_tau = 0.5;
    TargetSettings target;
    SingleModelSettings single;
    TrainConfig train;
    RbmConfig rbm;
    bool paper_scale = false;
    std::string output_dir = "results";
};

/// Parses and validates. Errors carry the line of the offending key.
ExperimentConfig parse_config(const std::string &json_text);
ExperimentConfig load_config(const std::string &path);
/// Canonical JSON of a resolved config; parse_config(to_json_text(c)) == c.
std::string to_json_text(const ExperimentConfig &config);
bool operator==(const ExperimentConfig &a, const ExperimentConfig &b);

/// One configuration of the sweep. Axes that do not apply are unset.
struct SweepPoint {
    std::string model = "qsbm";  ///< "qsbm" or "rbm"
    std::string scrambler_type;  ///< identity | haar | brickwork | analog | trainable | rbm
    std::string hamiltonian_preset;
    int num_qubits = 0;  ///< visible units for RBM points
    std::optional<int> num_ancillas;
    std::optional<int> layers;
    std::optional<int> depth;
    std::optional<double> tau;
    std::optional<double> rho;
    std::optional<int> rbm_hidden;

    [[nodiscard]] std::vector<std::string> key_fields() const;
    [[nodiscard]] ModelSpec model_spec() const;
};

bool operator<(const SweepPoint &a, const SweepPoint &b);
bool operator==(const SweepPoint &a, const SweepPoint &b);

/// Points in canonical (sorted) order.
std::vector<SweepPoint> expand_sweep(const ExperimentConfig &config);

/// Target of a point under the experiment's target settings.
TargetDistribution make_target(const ExperimentConfig &config, const SweepPoint &point);

/// Column names shared by results.csv, summary.csv and distributions.csv.
const std::vector<std::string> &point_columns();

} // namespace qsbm
