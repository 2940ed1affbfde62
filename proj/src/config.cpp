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


#include "qsbm/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "qsbm/csv.hpp"

namespace qsbm {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

using Path = std::vector<std::string>;

std::string join(const Path &path) {
    std::string s;
    for (const auto &p : path) {
        s += (s.empty() ? "" : ".") + p;
    }
    return s;
}

/// Line of the last key in `path`, searching each key after the previous one.
int locate(const std::string &text, const Path &path) {
    std::size_t pos = 0;
    std::size_t found = std::string::npos;
    for (const auto &key : path) {
        const std::string quoted = "\"" + key + "\"";
        std::size_t at = pos;
        found = std::string::npos;
        while ((at = text.find(quoted, at)) != std::string::npos) {
            std::size_t after = at + quoted.size();
            while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after]))) {
                ++after;
            }
            if (after < text.size() && text[after] == ':') {
                found = at;
                break;
            }
            at += quoted.size();
        }
        if (found == std::string::npos) {
            return 0;
        }
        pos = found + quoted.size();
    }
    return found == std::string::npos ? 0 : 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(found), '\n'));
}

class Reader {
  public:
    explicit Reader(const std::string &text) : text_(text) {}

    [[noreturn]] void fail(const Path &path, const std::string &message) const {
        // Missing keys: point at the nearest enclosing key, else at "kind".
        int line = 0;
        for (std::size_t n = path.size(); n > 0 && line == 0; --n) {
            line = locate(text_, Path(path.begin(), path.begin() + static_cast<long>(n)));
        }
        if (line == 0) {
            line = locate(text_, {"kind"});
        }
        throw ConfigError((line ? "line " + std::to_string(line) + ": " : std::string()) + join(path) + ": " + message,
                          line);
    }

    void only_keys(const json &obj, const Path &path, std::initializer_list<const char *> allowed) const {
        if (!obj.is_object()) {
            fail(path, "expected an object");
        }
        for (const auto &[key, value] : obj.items()) {
            if (std::none_of(allowed.begin(), allowed.end(), [&](const char *a) { return key == a; })) {
                Path p = path;
                p.push_back(key);
                fail(p, "unknown key");
            }
        }
    }

    template <class T> void read(const json &obj, const Path &path, const char *key, T &out) const {
        if (!obj.contains(key)) {
            return;
        }
        Path p = path;
        p.push_back(key);
        const json &v = obj.at(key);
        try {
            if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean()) {
                    fail(p, "expected true or false");
                }
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!v.is_string()) {
                    fail(p, "expected a string");
                }
            } else if constexpr (std::is_integral_v<T>) {
                if (!v.is_number_integer()) {
                    fail(p, "expected an integer");
                }
                if constexpr (std::is_unsigned_v<T>) {
                    if (v.is_number_integer() && !v.is_number_unsigned()) {
                        fail(p, "expected a non-negative integer");
                    }
                }
            } else if constexpr (std::is_floating_point_v<T>) {
                if (!v.is_number()) {
                    fail(p, "expected a number");
                }
            } else {
                if (!v.is_array()) {
                    fail(p, "expected a list");
                }
                using E = typename T::value_type;
                for (const auto &e : v) {
                    if constexpr (std::is_same_v<E, std::string>) {
                        if (!e.is_string()) {
                            fail(p, "expected a list of strings");
                        }
                    } else if constexpr (std::is_integral_v<E>) {
                        if (!e.is_number_integer()) {
                            fail(p, "expected a list of integers");
                        }
                    } else {
                        if (!e.is_number()) {
                            fail(p, "expected a list of numbers");
                        }
                    }
                }
            }
            out = v.get<T>();
        } catch (const json::exception &e) {
            fail(p, e.what());
        }
    }

    template <class T> void require(bool ok, const Path &path, const T &message) const {
        if (!ok) {
            fail(path, message);
        }
    }

  private:
    const std::string &text_;
};

const std::set<std::string> kTargets{"multimodal_1d", "bivariate_gaussian_2d", "four_mode_2d"};
const std::set<std::string> kPresets{"tfim", "xx"};
const std::set<std::string> kSingleScramblers{"identity", "haar", "brickwork", "analog", "trainable"};

bool is_2d(const std::string &target) { return target != "multimodal_1d"; }

int max_qubits_for(const std::string &scrambler) {
    return (scrambler == "identity" || scrambler == "brickwork") ? kMaxQubits : 12;
}

void validate(const ExperimentConfig &c, const Reader &r) {
    r.require(!c.experiment_id.empty(), {"experiment_id"}, "must not be empty");
    r.require(c.num_qubits >= 1 && c.num_qubits <= kMaxQubits, {"num_qubits"},
              "must be in [1, " + std::to_string(kMaxQubits) + "]");
    r.require(kTargets.count(c.target.name) == 1, {"target", "name"},
              "must be one of multimodal_1d, bivariate_gaussian_2d, four_mode_2d");
    const auto &s = c.sweep;
    r.require(!s.layers.empty(), {"sweep", "layers"}, "must not be empty");
    r.require(!s.ancillas.empty(), {"sweep", "ancillas"}, "must not be empty");
    for (int l : s.layers) {
        r.require(l >= 1 && l <= 200, {"sweep", "layers"}, "values must be in [1, 200]");
    }
    for (int a : s.ancillas) {
        r.require(a >= 0 && a < c.num_qubits, {"sweep", "ancillas"}, "values must be in [0, num_qubits - 1]");
        const int bits = c.num_qubits - a;
        {
            if (is_2d(c.target.name)) {
                r.require(bits % 2 == 0, {"sweep", "ancillas"},
                          "2D targets need an even number of measured qubits (num_qubits - ancillas)");
                r.require(bits / 2 >= (c.target.name == "four_mode_2d" ? 2 : 1), {"sweep", "ancillas"},
                          "measured register too small for the 2D target");
            } else {
                r.require(bits >= 3, {"sweep", "ancillas"}, "multimodal_1d needs at least 3 measured qubits");
            }
        }
    }
    for (int k : s.depths) {
        r.require(k >= 1 && k <= 200, {"sweep", "depths"}, "values must be in [1, 200]");
    }
    for (double t : s.taus) {
        r.require(t >= 0.0, {"sweep", "taus"}, "values must be >= 0");
    }
    for (const auto &p : s.presets) {
        r.require(kPresets.count(p) == 1, {"sweep", "presets"}, "values must be tfim or xx");
    }
    for (double rho : s.rhos) {
        r.require(std::abs(rho) < 1.0, {"sweep", "rhos"}, "values must satisfy |rho| < 1");
    }
    for (int h : s.rbm_hidden) {
        r.require(h >= 1 && h <= 4096, {"sweep", "rbm_hidden"}, "values must be in [1, 4096]");
    }
    if (c.target.name == "bivariate_gaussian_2d") {
        r.require(!s.rhos.empty(), {"sweep", "rhos"}, "bivariate_gaussian_2d needs at least one rho");
    }
    r.require(c.target.rbm_visible_bits >= 0 && c.target.rbm_visible_bits <= 20, {"target", "rbm_visible_bits"},
              "must be in [0, 20]");
    if (is_2d(c.target.name) && c.target.rbm_visible_bits > 0) {
        r.require(c.target.rbm_visible_bits % 2 == 0 &&
                      c.target.rbm_visible_bits / 2 >= (c.target.name == "four_mode_2d" ? 2 : 1),
                  {"target", "rbm_visible_bits"}, "2D targets need an even bit count with enough bits per axis");
    }
    r.require(c.hamiltonian_tau >= 0.0, {"hamiltonian_tau"}, "must be >= 0");

    std::string scrambler;
    switch (c.kind) {
    case ExperimentKind::HaarLayers:
        scrambler = "haar";
        break;
    case ExperimentKind::BrickworkDepth:
        r.require(!s.depths.empty(), {"sweep"}, "brickwork_depth needs sweep.depths");
        scrambler = "brickwork";
        break;
    case ExperimentKind::AnalogTau:
        r.require(!s.taus.empty(), {"sweep"}, "analog_tau needs sweep.taus");
        r.require(!s.presets.empty(), {"sweep"}, "analog_tau needs sweep.presets");
        scrambler = "analog";
        break;
    case ExperimentKind::TrainableHamiltonian2D:
        r.require(is_2d(c.target.name), {"target", "name"}, "trainable_hamiltonian_2d needs a 2D target");
        scrambler = "trainable";
        break;
    case ExperimentKind::ClassicalComparison:
        r.require(!s.rbm_hidden.empty(), {"sweep"}, "classical_comparison needs sweep.rbm_hidden");
        scrambler = "trainable";
        break;
    case ExperimentKind::SingleRun:
        r.require(kSingleScramblers.count(c.single.scrambler) == 1, {"model", "scrambler"},
                  "must be identity, haar, brickwork, analog or trainable");
        r.require(s.layers.size() == 1 && s.ancillas.size() == 1, {"sweep"},
                  "single_run takes exactly one layers value and one ancillas value");
        r.require(c.single.depth >= 1, {"model", "depth"}, "must be >= 1");
        r.require(c.single.tau >= 0.0, {"model", "tau"}, "must be >= 0");
        r.require(kPresets.count(c.single.preset) == 1, {"model", "preset"}, "must be tfim or xx");
        scrambler = c.single.scrambler;
        break;
    }
    r.require(c.num_qubits <= max_qubits_for(scrambler), {"num_qubits"},
              "dense " + scrambler + " models are limited to " + std::to_string(max_qubits_for(scrambler)) +
                  " qubits");
    try {
        c.train.validate();
    } catch (const std::invalid_argument &e) {
        r.fail({"train"}, e.what());
    }
    try {
        c.rbm.validate();
    } catch (const std::invalid_argument &e) {
        r.fail({"rbm"}, e.what());
    }
    r.require(!c.output_dir.empty(), {"output_dir"}, "must not be empty");
}

ordered_json to_json(const ExperimentConfig &c) {
    ordered_json j;
    j["experiment_id"] = c.experiment_id;
    j["kind"] = to_string(c.kind);
    j["root_seed"] = c.root_seed;
    j["num_qubits"] = c.num_qubits;
    j["sweep"] = {{"layers", c.sweep.layers},   {"ancillas", c.sweep.ancillas}, {"depths", c.sweep.depths},
                  {"taus", c.sweep.taus},       {"presets", c.sweep.presets},   {"rhos", c.sweep.rhos},
                  {"rbm_hidden", c.sweep.rbm_hidden}};
    j["haar_reference"] = c.haar_reference;
    j["hamiltonian_tau"] = c.hamiltonian_tau;
    j["target"] = {{"name", c.target.name},
                   {"weight_seed", c.target.weight_seed},
                   {"rbm_visible_bits", c.target.rbm_visible_bits}};
    j["model"] = {{"scrambler", c.single.scrambler},
                  {"depth", c.single.depth},
                  {"tau", c.single.tau},
                  {"preset", c.single.preset}};
    j["train"] = {{"epochs", c.train.epochs},
                  {"realizations", c.train.num_realizations},
                  {"shots", c.train.num_shots},
                  {"learning_rate", c.train.learning_rate},
                  {"clip_norm", c.train.clip_norm},
                  {"eval_every", c.train.eval_every},
                  {"smoothing_alpha", c.train.smoothing_alpha}};
    j["rbm"] = {{"epochs", c.rbm.epochs},
                {"batch_size", c.rbm.batch_size},
                {"learning_rate", c.rbm.learning_rate},
                {"init_std", c.rbm.init_std},
                {"eval_every", c.rbm.eval_every}};
    j["paper_scale"] = c.paper_scale;
    j["output_dir"] = c.output_dir;
    return j;
}

template <class T> std::optional<T> first_or_none(const std::vector<T> &v) {
    return v.empty() ? std::nullopt : std::optional<T>(v.front());
}

std::string opt_int(const std::optional<int> &v) { return v ? std::to_string(*v) : std::string(); }
std::string opt_double(const std::optional<double> &v) { return v ? csv::format_double(*v) : std::string(); }

} // namespace

ConfigError::ConfigError(const std::string &message, int line) : std::runtime_error(message), line_(line) {}

std::string to_string(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::HaarLayers:
        return "haar_layers";
    case ExperimentKind::BrickworkDepth:
        return "brickwork_depth";
    case ExperimentKind::AnalogTau:
        return "analog_tau";
    case ExperimentKind::TrainableHamiltonian2D:
        return "trainable_hamiltonian_2d";
    case ExperimentKind::ClassicalComparison:
        return "classical_comparison";
    case ExperimentKind::SingleRun:
        return "single_run";
    }
    return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string &name) {
    for (auto k : {ExperimentKind::HaarLayers, ExperimentKind::BrickworkDepth, ExperimentKind::AnalogTau,
                   ExperimentKind::TrainableHamiltonian2D, ExperimentKind::ClassicalComparison,
                   ExperimentKind::SingleRun}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw std::invalid_argument("unknown experiment kind '" + name + "'");
}

ExperimentConfig parse_config(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        // nlohmann reports "at line L, column C".
        const std::string what = e.what();
        int line = 0;
        const auto at = what.find("line ");
        if (at != std::string::npos) {
            line = std::atoi(what.c_str() + at + 5);
        }
        throw ConfigError("invalid JSON: " + what, line);
    }
    const Reader r(text);
    r.only_keys(j, {}, {"experiment_id", "kind", "root_seed", "num_qubits", "sweep", "haar_reference",
                        "hamiltonian_tau", "target", "model", "train", "rbm", "paper_scale", "output_dir"});
    ExperimentConfig c;
    r.read(j, {}, "experiment_id", c.experiment_id);
    std::string kind = to_string(c.kind);
    if (!j.contains("kind")) {
        r.fail({"kind"}, "missing (one of haar_layers, brickwork_depth, analog_tau, trainable_hamiltonian_2d, "
                         "classical_comparison, single_run)");
    }
    r.read(j, {}, "kind", kind);
    try {
        c.kind = parse_experiment_kind(kind);
    } catch (const std::invalid_argument &e) {
        r.fail({"kind"}, e.what());
    }
    r.read(j, {}, "root_seed", c.root_seed);
    r.read(j, {}, "num_qubits", c.num_qubits);
    r.read(j, {}, "haar_reference", c.haar_reference);
    r.read(j, {}, "hamiltonian_tau", c.hamiltonian_tau);
    r.read(j, {}, "paper_scale", c.paper_scale);
    r.read(j, {}, "output_dir", c.output_dir);
    if (j.contains("sweep")) {
        const auto &s = j["sweep"];
        const Path p{"sweep"};
        r.only_keys(s, p, {"layers", "ancillas", "depths", "taus", "presets", "rhos", "rbm_hidden"});
        r.read(s, p, "layers", c.sweep.layers);
        r.read(s, p, "ancillas", c.sweep.ancillas);
        r.read(s, p, "depths", c.sweep.depths);
        r.read(s, p, "taus", c.sweep.taus);
        r.read(s, p, "presets", c.sweep.presets);
        r.read(s, p, "rhos", c.sweep.rhos);
        r.read(s, p, "rbm_hidden", c.sweep.rbm_hidden);
    }
    if (j.contains("target")) {
        const auto &t = j["target"];
        const Path p{"target"};
        r.only_keys(t, p, {"name", "weight_seed", "rbm_visible_bits"});
        r.read(t, p, "name", c.target.name);
        r.read(t, p, "weight_seed", c.target.weight_seed);
        r.read(t, p, "rbm_visible_bits", c.target.rbm_visible_bits);
    }
    if (j.contains("model")) {
        const auto &m = j["model"];
        const Path p{"model"};
        r.only_keys(m, p, {"scrambler", "depth", "tau", "preset"});
        r.read(m, p, "scrambler", c.single.scrambler);
        r.read(m, p, "depth", c.single.depth);
        r.read(m, p, "tau", c.single.tau);
        r.read(m, p, "preset", c.single.preset);
    }
    if (j.contains("train")) {
        const auto &t = j["train"];
        const Path p{"train"};
        r.only_keys(t, p, {"epochs", "realizations", "shots", "learning_rate", "clip_norm", "eval_every",
                           "smoothing_alpha"});
        r.read(t, p, "epochs", c.train.epochs);
        r.read(t, p, "realizations", c.train.num_realizations);
        r.read(t, p, "shots", c.train.num_shots);
        r.read(t, p, "learning_rate", c.train.learning_rate);
        r.read(t, p, "clip_norm", c.train.clip_norm);
        r.read(t, p, "eval_every", c.train.eval_every);
        r.read(t, p, "smoothing_alpha", c.train.smoothing_alpha);
    }
    if (j.contains("rbm")) {
        const auto &b = j["rbm"];
        const Path p{"rbm"};
        r.only_keys(b, p, {"epochs", "batch_size", "learning_rate", "init_std", "eval_every"});
        r.read(b, p, "epochs", c.rbm.epochs);
        r.read(b, p, "batch_size", c.rbm.batch_size);
        r.read(b, p, "learning_rate", c.rbm.learning_rate);
        r.read(b, p, "init_std", c.rbm.init_std);
        r.read(b, p, "eval_every", c.rbm.eval_every);
    }
    // Shots and smoothing of the reported empirical KLD are shared.
    c.rbm.num_shots = c.train.num_shots;
    c.rbm.smoothing_alpha = c.train.smoothing_alpha;
    validate(c, r);
    return c;
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path, 0);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string to_json_text(const ExperimentConfig &config) { return to_json(config).dump(2) + "\n"; }

bool operator==(const ExperimentConfig &a, const ExperimentConfig &b) { return to_json(a) == to_json(b); }

std::vector<std::string> SweepPoint::key_fields() const {
    return {model,
            scrambler_type,
            hamiltonian_preset,
            std::to_string(num_qubits),
            opt_int(num_ancillas),
            opt_int(layers),
            opt_int(depth),
            opt_double(tau),
            opt_double(rho),
            opt_int(rbm_hidden)};
}

const std::vector<std::string> &point_columns() {
    static const std::vector<std::string> cols{"model", "scrambler_type", "hamiltonian_preset", "N", "N_A",
                                               "L",     "K",              "tau",                "rho", "rbm_hidden"};
    return cols;
}

ModelSpec SweepPoint::model_spec() const {
    if (model != "qsbm") {
        throw std::logic_error("RBM points have no Born-machine model");
    }
    ModelSpec spec;
    spec.num_qubits = num_qubits;
    spec.num_ancillas = num_ancillas.value_or(0);
    spec.num_layers = layers.value_or(1);
    if (scrambler_type == "trainable") {
        spec.variant = TrainableHamiltonianModel{tau.value_or(0.5)};
    } else if (scrambler_type == "haar") {
        spec.variant = FixedScramblerModel{HaarScrambler{}};
    } else if (scrambler_type == "brickwork") {
        spec.variant = FixedScramblerModel{BrickworkScrambler{depth.value_or(1)}};
    } else if (scrambler_type == "analog") {
        spec.variant =
            FixedScramblerModel{AnalogScrambler{HamiltonianSpec::preset(hamiltonian_preset, num_qubits), tau.value_or(0.0)}};
    } else if (scrambler_type == "identity") {
        spec.variant = FixedScramblerModel{IdentityScrambler{}};
    } else {
        throw std::invalid_argument("unknown scrambler type '" + scrambler_type + "'");
    }
    spec.validate();
    return spec;
}

namespace {
auto tie_point(const SweepPoint &p) {
    return std::tie(p.model, p.scrambler_type, p.hamiltonian_preset, p.num_qubits, p.num_ancillas, p.layers, p.depth,
                    p.tau, p.rho, p.rbm_hidden);
}
} // namespace

bool operator<(const SweepPoint &a, const SweepPoint &b) { return tie_point(a) < tie_point(b); }
bool operator==(const SweepPoint &a, const SweepPoint &b) { return tie_point(a) == tie_point(b); }

std::vector<SweepPoint> expand_sweep(const ExperimentConfig &c) {
    std::vector<SweepPoint> out;
    const auto &s = c.sweep;
    std::vector<std::optional<double>> rhos{std::nullopt};
    if (c.target.name == "bivariate_gaussian_2d") {
        rhos.assign(s.rhos.begin(), s.rhos.end());
    }
    const auto base = [&](const std::string &type, int a, int l, std::optional<double> rho) {
        SweepPoint p;
        p.scrambler_type = type;
        p.num_qubits = c.num_qubits;
        p.num_ancillas = a;
        p.layers = l;
        p.rho = rho;
        return p;
    };
    const auto haar_reference = [&] {
        for (int a : s.ancillas) {
            for (int l : s.layers) {
                for (const auto &rho : rhos) {
                    out.push_back(base("haar", a, l, rho));
                }
            }
        }
    };
    const auto trainable_points = [&] {
        for (int a : s.ancillas) {
            for (int l : s.layers) {
                for (const auto &rho : rhos) {
                    auto p = base("trainable", a, l, rho);
                    p.tau = c.hamiltonian_tau;
                    out.push_back(p);
                }
            }
        }
    };
    switch (c.kind) {
    case ExperimentKind::HaarLayers:
        haar_reference();
        break;
    case ExperimentKind::BrickworkDepth:
        for (int a : s.ancillas) {
            for (int k : s.depths) {
                for (int l : s.layers) {
                    for (const auto &rho : rhos) {
                        auto p = base("brickwork", a, l, rho);
                        p.depth = k;
                        out.push_back(p);
                    }
                }
            }
        }
        if (c.haar_reference) {
            haar_reference();
        }
        break;
    case ExperimentKind::AnalogTau:
        for (const auto &preset : s.presets) {
            for (int a : s.ancillas) {
                for (double tau : s.taus) {
                    for (int l : s.layers) {
                        for (const auto &rho : rhos) {
                            auto p = base("analog", a, l, rho);
                            p.hamiltonian_preset = preset;
                            p.tau = tau;
                            out.push_back(p);
                        }
                    }
                }
            }
        }
        if (c.haar_reference) {
            haar_reference();
        }
        break;
    case ExperimentKind::TrainableHamiltonian2D:
        trainable_points();
        break;
    case ExperimentKind::ClassicalComparison: {
        trainable_points();
        const int visible =
            c.target.rbm_visible_bits > 0 ? c.target.rbm_visible_bits : c.num_qubits - s.ancillas.front();
        for (int h : s.rbm_hidden) {
            for (const auto &rho : rhos) {
                SweepPoint p;
                p.model = "rbm";
                p.scrambler_type = "rbm";
                p.num_qubits = visible;
                p.rho = rho;
                p.rbm_hidden = h;
                out.push_back(p);
            }
        }
        break;
    }
    case ExperimentKind::SingleRun: {
        auto p = base(c.single.scrambler, s.ancillas.front(), s.layers.front(), rhos.front());
        if (c.single.scrambler == "brickwork") {
            p.depth = c.single.depth;
        } else if (c.single.scrambler == "analog") {
            p.tau = c.single.tau;
            p.hamiltonian_preset = c.single.preset;
        } else if (c.single.scrambler == "trainable") {
            p.tau = c.hamiltonian_tau;
        }
        out.push_back(p);
        break;
    }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

TargetDistribution make_target(const ExperimentConfig &config, const SweepPoint &point) {
    const int bits = point.model == "rbm" ? point.num_qubits : point.num_qubits - point.num_ancillas.value_or(0);
    const std::string &name = config.target.name;
    if (name == "multimodal_1d") {
        return multimodal_1d(bits, config.target.weight_seed);
    }
    if (bits % 2 != 0) {
        throw std::invalid_argument("2D targets need an even number of bits");
    }
    if (name == "bivariate_gaussian_2d") {
        return bivariate_gaussian_2d(bits / 2, bits / 2, point.rho.value_or(0.0));
    }
    return four_mode_mixture_2d(bits / 2, bits / 2);
}

} // namespace qsbm
