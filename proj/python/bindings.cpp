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


#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>
#include <vector>

#include "qsbm/born_machine.hpp"
#include "qsbm/config.hpp"
#include "qsbm/experiments.hpp"
#include "qsbm/rbm.hpp"
#include "qsbm/scramblers.hpp"
#include "qsbm/targets.hpp"
#include "qsbm/training.hpp"

namespace py = pybind11;
using namespace qsbm;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array &a) {
    if (a.ndim() != 1) {
        throw std::invalid_argument("expected a one-dimensional array");
    }
    return {a.data(), a.data() + a.size()};
}

py::array_t<double> to_array(const std::vector<double> &v) {
    return py::array_t<double>(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())}, v.data());
}

ModelSpec make_spec(int num_qubits, int num_ancillas, int num_layers, const std::string &scrambler, int depth,
                    double tau, const std::string &preset) {
    ModelSpec spec{num_qubits, num_ancillas, num_layers, FixedScramblerModel{}};
    if (scrambler == "trainable_hamiltonian") {
        spec.variant = TrainableHamiltonianModel{tau};
    } else if (scrambler == "haar") {
        spec.variant = FixedScramblerModel{HaarScrambler{}};
    } else if (scrambler == "brickwork") {
        spec.variant = FixedScramblerModel{BrickworkScrambler{depth}};
    } else if (scrambler == "analog") {
        spec.variant = FixedScramblerModel{AnalogScrambler{HamiltonianSpec::preset(preset, num_qubits), tau}};
    } else if (scrambler == "identity") {
        spec.variant = FixedScramblerModel{IdentityScrambler{}};
    } else {
        throw std::invalid_argument("unknown scrambler '" + scrambler + "'");
    }
    spec.validate();
    return spec;
}

/// Model bound to the scrambler draw of one realization.
struct PyBornMachine {
    ModelSpec spec;
    std::uint64_t root_seed;
    std::uint64_t realization;
    std::unique_ptr<BornMachine> model;

    PyBornMachine(ModelSpec s, std::uint64_t seed, std::uint64_t r)
        : spec(std::move(s)), root_seed(seed), realization(r),
          model(std::make_unique<BornMachine>(spec, compile_for_realization(spec, stream()))) {}

    [[nodiscard]] RandomStream stream() const { return realization_stream(root_seed, realization); }
};

py::dict trace_dict(const std::vector<int> &epochs, const std::vector<double> &nll, const std::vector<double> &exact,
                    const std::vector<double> &empirical) {
    py::dict d;
    d["epoch"] = epochs;
    d["nll"] = to_array(nll);
    d["kld_exact"] = to_array(exact);
    d["kld_empirical"] = to_array(empirical);
    return d;
}

py::dict target_dict(const TargetDistribution &t) {
    py::dict d;
    d["probs"] = to_array(t.probs);
    d["name"] = t.name;
    d["provenance"] = t.provenance;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Scrambling Born machine core";

    m.def("page_entropy", &page_entropy, py::arg("d_a"), py::arg("d_b"),
          "Mean entanglement entropy (nats) of a Haar-random pure state on C^d_a x C^d_b.");

    m.def("multimodal_1d", [](int n, std::uint64_t seed) { return target_dict(multimodal_1d(n, seed)); },
          py::arg("n"), py::arg("weight_seed") = kDefaultWeightSeed);
    m.def("bivariate_gaussian_2d",
          [](int n_x, int n_y, double rho) { return target_dict(bivariate_gaussian_2d(n_x, n_y, rho)); },
          py::arg("n_x"), py::arg("n_y"), py::arg("rho"));
    m.def("four_mode_mixture_2d", [](int n_x, int n_y) { return target_dict(four_mode_mixture_2d(n_x, n_y)); },
          py::arg("n_x"), py::arg("n_y"));

    m.def("kld", [](const Array &p, const Array &q) { return kld(to_vector(p), to_vector(q)); }, py::arg("p"),
          py::arg("q"));
    m.def("nll", [](const Array &p, const Array &q) { return nll(to_vector(p), to_vector(q)); }, py::arg("p"),
          py::arg("q"));
    m.def("shannon_entropy", [](const Array &p) { return shannon_entropy(to_vector(p)); }, py::arg("p"));

    py::class_<PyBornMachine>(m, "BornMachine")
        .def(py::init([](int n, int n_a, int layers, const std::string &scrambler, int depth, double tau,
                         const std::string &preset, std::uint64_t root_seed, std::uint64_t realization) {
                 return std::make_unique<PyBornMachine>(make_spec(n, n_a, layers, scrambler, depth, tau, preset),
                                                        root_seed, realization);
             }),
             py::arg("num_qubits"), py::arg("num_ancillas"), py::arg("num_layers"), py::arg("scrambler") = "haar",
             py::arg("depth") = 1, py::arg("tau") = 0.5, py::arg("preset") = "tfim", py::arg("root_seed") = 0,
             py::arg("realization") = 0)
        .def_property_readonly("num_parameters", [](const PyBornMachine &b) { return b.model->num_parameters(); })
        .def_property_readonly("num_bins", [](const PyBornMachine &b) { return b.spec.num_bins(); })
        .def("initial_parameters",
             [](const PyBornMachine &b) {
                 RandomStream init = b.stream().substream("init");
                 return to_array(b.model->initial_parameters(init));
             })
        .def("output_distribution",
             [](const PyBornMachine &b, const Array &params) {
                 return to_array(b.model->output_distribution(to_vector(params)));
             },
             py::arg("params"))
        .def("loss",
             [](const PyBornMachine &b, const Array &params, const Array &target) {
                 return b.model->loss(to_vector(params), to_vector(target));
             },
             py::arg("params"), py::arg("target"))
        .def("loss_and_gradient",
             [](const PyBornMachine &b, const Array &params, const Array &target) {
                 const auto lg = b.model->loss_and_gradient(to_vector(params), to_vector(target));
                 return py::make_tuple(lg.loss, to_array(lg.gradient));
             },
             py::arg("params"), py::arg("target"))
        .def(
            "train",
            [](const PyBornMachine &b, const Array &target, int epochs, int eval_every, std::int64_t shots,
               double learning_rate) {
                TrainConfig tc;
                tc.epochs = epochs;
                tc.eval_every = eval_every;
                tc.num_shots = shots;
                tc.learning_rate = learning_rate;
                tc.num_realizations = 1;
                tc.root_seed = b.root_seed;
                TargetDistribution t;
                t.probs = to_vector(target);
                t.grid = Grid1D{b.spec.num_system_qubits()};
                TrainingRecord rec;
                {
                    py::gil_scoped_release release;
                    rec = train(*b.model, t, tc, b.stream());
                }
                std::vector<int> ep;
                std::vector<double> nl, ex, em;
                for (const auto &e : rec.trace) {
                    ep.push_back(e.epoch);
                    nl.push_back(e.nll);
                    ex.push_back(e.exact_kld);
                    em.push_back(e.empirical_kld);
                }
                py::dict d = trace_dict(ep, nl, ex, em);
                d["params"] = to_array(rec.final_params);
                d["distribution"] = to_array(rec.final_distribution);
                d["best_kld_exact"] = rec.best_exact_kld;
                return d;
            },
            py::arg("target"), py::arg("epochs") = 2000, py::arg("eval_every") = 50, py::arg("shots") = 5000,
            py::arg("learning_rate") = 0.01);

    m.def(
        "train_rbm",
        [](const Array &target, int num_hidden, int epochs, int batch_size, double learning_rate, int eval_every,
           std::uint64_t root_seed, std::uint64_t realization) {
            RbmConfig rc;
            rc.num_hidden = num_hidden;
            rc.epochs = epochs;
            rc.batch_size = batch_size;
            rc.learning_rate = learning_rate;
            rc.eval_every = eval_every;
            TargetDistribution t;
            t.probs = to_vector(target);
            int bits = 0;
            while ((std::size_t{1} << bits) < t.probs.size()) {
                ++bits;
            }
            t.grid = Grid1D{bits};
            RbmRecord rec;
            {
                py::gil_scoped_release release;
                rec = train_rbm(t, rc, realization_stream(root_seed, realization));
            }
            std::vector<int> ep;
            std::vector<double> nl, ex, em;
            for (const auto &e : rec.trace) {
                ep.push_back(e.epoch);
                nl.push_back(e.nll);
                ex.push_back(e.exact_kld);
                em.push_back(e.empirical_kld);
            }
            py::dict d = trace_dict(ep, nl, ex, em);
            d["distribution"] = to_array(rec.final_distribution);
            return d;
        },
        py::arg("target"), py::arg("num_hidden") = kRbmHiddenBudget, py::arg("epochs") = 10000,
        py::arg("batch_size") = 64, py::arg("learning_rate") = 0.01, py::arg("eval_every") = 100,
        py::arg("root_seed") = 0, py::arg("realization") = 0);

    m.def("parse_config", [](const std::string &text) { return to_json_text(parse_config(text)); },
          py::arg("json_text"), "Validate a config and return its canonical JSON.");
    m.def("sweep_table", [](const std::string &text) { return sweep_table(parse_config(text)); },
          py::arg("json_text"));
    m.def(
        "run_experiment",
        [](const std::string &text, const std::string &out_dir, int workers, bool resume) {
            RunOptions ro;
            ro.out_dir = out_dir;
            ro.workers = workers;
            ro.resume = resume;
            const auto config = parse_config(text);
            py::gil_scoped_release release;
            const auto report = run_experiment(config, ro);
            return report.jobs_run;
        },
        py::arg("json_text"), py::arg("out_dir"), py::arg("workers") = 1, py::arg("resume") = false,
        "Run a sweep into out_dir; returns the number of jobs trained.");
    m.def(
        "summarize", [](const std::string &dir) { return summarize(dir).size(); }, py::arg("results_dir"),
        "Rewrite summary.csv from results.csv; returns the number of rows.");

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<OutputError>(m, "OutputError", PyExc_RuntimeError);
}
