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


#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "qsbm/config.hpp"
#include "qsbm/csv.hpp"
#include "qsbm/experiments.hpp"

namespace fs = std::filesystem;
using namespace qsbm;

namespace {

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string &name) : path(fs::temp_directory_path() / ("qsbm_test_" + name)) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

const char *kTinyConfig = R"({
  "experiment_id": "tiny",
  "kind": "haar_layers",
  "root_seed": 7,
  "num_qubits": 4,
  "sweep": {"layers": [1, 2], "ancillas": [0, 1]},
  "train": {"epochs": 20, "realizations": 3, "shots": 200, "eval_every": 10}
})";

int error_line(const std::string &text) {
    try {
        parse_config(text);
    } catch (const ConfigError &e) {
        return e.line();
    }
    return -1;
}

} // namespace

TEST_CASE("csv quoting and parsing") {
    CHECK(csv::escape("plain") == "plain");
    CHECK(csv::escape("a,b") == "\"a,b\"");
    CHECK(csv::escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv::escape("two\nlines") == "\"two\nlines\"");

    std::ostringstream out;
    const std::vector<csv::Row> rows{{"x", "y,z", ""}, {"q\"uote", "multi\nline", "3"}};
    for (const auto &r : rows) {
        csv::write_row(out, r);
    }
    std::istringstream in(out.str());
    CHECK(csv::read_all(in) == rows);

    std::istringstream stray("a,b\"c\r\n");
    CHECK_THROWS(csv::read_all(stray));
    std::istringstream open("\"abc\r\n");
    CHECK_THROWS(csv::read_all(open));
    std::istringstream ragged("a,b\r\n1\r\n");
    CHECK_THROWS(csv::read_table(ragged));

    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17}) {
        CHECK(std::strtod(csv::format_double(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("shipped configs parse and round-trip") {
    int count = 0;
    for (const auto &entry : fs::directory_iterator(QSBM_SOURCE_DIR "/configs")) {
        if (entry.path().extension() != ".json") {
            continue;
        }
        CAPTURE(entry.path().string());
        const ExperimentConfig c = load_config(entry.path().string());
        const std::string text = to_json_text(c);
        const ExperimentConfig again = parse_config(text);
        CHECK(again == c);
        CHECK(to_json_text(again) == text);
        CHECK(c.paper_scale == (entry.path().string().find("paper_scale") != std::string::npos));
        ++count;
    }
    CHECK(count >= 6);
}

TEST_CASE("every config field survives a round trip") {
    const std::string text = R"({
  "experiment_id": "all", "kind": "classical_comparison", "root_seed": 123456789012, "num_qubits": 6,
  "sweep": {"layers": [3], "ancillas": [2], "depths": [4], "taus": [0.25], "presets": ["xx"],
            "rhos": [-0.5], "rbm_hidden": [7, 9]},
  "haar_reference": false, "hamiltonian_tau": 0.75,
  "target": {"name": "bivariate_gaussian_2d", "weight_seed": 5, "rbm_visible_bits": 6},
  "model": {"scrambler": "analog", "depth": 3, "tau": 2.5, "preset": "xx"},
  "train": {"epochs": 30, "realizations": 2, "shots": 77, "learning_rate": 0.02, "clip_norm": 0.5,
            "eval_every": 15, "smoothing_alpha": 0.25},
  "rbm": {"epochs": 40, "batch_size": 8, "learning_rate": 0.03, "init_std": 0.1, "eval_every": 20},
  "paper_scale": true, "output_dir": "out/x"
})";
    const auto c = parse_config(text);
    CHECK(c.root_seed == 123456789012ULL);
    CHECK(c.num_qubits == 6);
    CHECK(c.sweep.taus == std::vector<double>{0.25});
    CHECK(c.sweep.presets == std::vector<std::string>{"xx"});
    CHECK(c.sweep.rbm_hidden == std::vector<int>{7, 9});
    CHECK_FALSE(c.haar_reference);
    CHECK(c.hamiltonian_tau == 0.75);
    CHECK(c.target.weight_seed == 5);
    CHECK(c.target.rbm_visible_bits == 6);
    CHECK(c.single.scrambler == "analog");
    CHECK(c.single.tau == 2.5);
    CHECK(c.train.num_shots == 77);
    CHECK(c.train.smoothing_alpha == 0.25);
    CHECK(c.rbm.batch_size == 8);
    CHECK(c.rbm.init_std == 0.1);
    CHECK(c.rbm.num_shots == 77);
    CHECK(c.paper_scale);
    CHECK(c.output_dir == "out/x");
    CHECK(parse_config(to_json_text(c)) == c);
}

TEST_CASE("config errors name the offending line") {
    CHECK(error_line("{\n  \"experiment_id\": \"x\",\n  \"kind\": \"haar_layers\",\n  \"colour\": 3\n}") == 4);
    CHECK(error_line("{\n  \"kind\": \"haar_layers\",\n  \"num_qubits\": \"eight\"\n}") == 3);
    CHECK(error_line("{\n  \"kind\": \"nope\"\n}") == 2);
    CHECK(error_line("{\n  \"kind\": \"haar_layers\",\n  \"sweep\": {\n    \"layers\": [2],\n    \"ancillas\": [9]\n  }\n}") == 5);
    CHECK(error_line("{\n  \"kind\": \"haar_layers\",\n  \"train\": {\"epochs\": 25, \"eval_every\": 10}\n}") == 3);
    CHECK(error_line("{\n  \"kind\": \"haar_layers\",\n  \"rbm\": {\n    \"eval\": 1\n  }\n}") == 4);
    CHECK(error_line("{\n  \"kind\": \"haar_layers\",\n  \"num_qubits\": 8,\n  ]\n}") == 4);
    CHECK(error_line("{\n  \"kind\": \"analog_tau\",\n  \"sweep\": {\"taus\": [1], \"presets\": [\"heisenberg\"]}\n}") == 3);
    CHECK(error_line("{\n  \"kind\": \"trainable_hamiltonian_2d\",\n  \"num_qubits\": 7\n}") > 0);
    CHECK(error_line("{\"kind\": \"haar_layers\", \"num_qubits\": 13}") == 1);
    CHECK(error_line(kTinyConfig) == -1);
}

TEST_CASE("sweep expansion") {
    const auto fig2 = load_config(QSBM_SOURCE_DIR "/configs/fig2.json");
    const auto points = expand_sweep(fig2);
    CHECK(points.size() == 12);
    CHECK(fig2.train.num_realizations == 20);
    CHECK(std::is_sorted(points.begin(), points.end()));

    const auto fig3 = load_config(QSBM_SOURCE_DIR "/configs/fig3.json");
    const auto p3 = expand_sweep(fig3);
    CHECK(std::count_if(p3.begin(), p3.end(), [](const SweepPoint &p) { return p.scrambler_type == "haar"; }) == 2);
    CHECK(std::count_if(p3.begin(), p3.end(), [](const SweepPoint &p) { return p.scrambler_type == "brickwork"; }) ==
          6);

    const auto fig7 = load_config(QSBM_SOURCE_DIR "/configs/fig7.json");
    const auto p7 = expand_sweep(fig7);
    REQUIRE(p7.size() == 2);
    const auto rbm = std::find_if(p7.begin(), p7.end(), [](const SweepPoint &p) { return p.model == "rbm"; });
    REQUIRE(rbm != p7.end());
    CHECK(rbm->num_qubits == 8);
    CHECK(make_target(fig7, *rbm).num_bins() == 256);
    const auto qsbm = std::find_if(p7.begin(), p7.end(), [](const SweepPoint &p) { return p.model == "qsbm"; });
    CHECK(qsbm->model_spec().num_parameters() == 8 * 25);
    CHECK(make_target(fig7, *qsbm).num_bins() == 64);

    auto single = parse_config(R"({"kind": "single_run", "sweep": {"layers": [3], "ancillas": [1]},
                                  "model": {"scrambler": "brickwork", "depth": 4}})");
    const auto ps = expand_sweep(single);
    REQUIRE(ps.size() == 1);
    CHECK(ps[0].depth == 4);
    CHECK_THROWS_AS(parse_config(R"({"kind": "single_run", "sweep": {"layers": [3, 4]}})"), ConfigError);
}

TEST_CASE("dry run writes nothing") {
    TempDir dir("dry");
    auto c = parse_config(kTinyConfig);
    RunOptions o;
    o.out_dir = dir.path.string();
    o.dry_run = true;
    std::ostringstream log;
    o.log = &log;
    const auto report = run_experiment(c, o);
    CHECK(report.jobs_total == 12);
    CHECK(report.jobs_run == 0);
    CHECK_FALSE(fs::exists(dir.path));
    CHECK(log.str().find("4 points x 3 seeds") != std::string::npos);
}

TEST_CASE("runs are reproducible, resumable and independent of worker count") {
    TempDir a("run_a"), b("run_b");
    const auto c = parse_config(kTinyConfig);
    RunOptions o;
    o.out_dir = a.path.string();
    const auto report = run_experiment(c, o);
    CHECK(report.jobs_run == 12);
    for (const char *f : {"results.csv", "summary.csv", "manifest.json", "distributions.csv", "timings.csv"}) {
        CHECK(fs::exists(a.path / f));
    }
    const std::string results = slurp(a.path / "results.csv");
    const std::string dists = slurp(a.path / "distributions.csv");
    const std::string summary = slurp(a.path / "summary.csv");
    const std::string manifest = slurp(a.path / "manifest.json");

    // 4 points x 3 seeds x 3 eval epochs, plus the header.
    std::istringstream in(results);
    const auto table = csv::read_table(in);
    CHECK(table.rows.size() == 36);
    CHECK(table.header == results_columns());

    o.workers = 3;
    o.out_dir = b.path.string();
    run_experiment(c, o);
    CHECK(slurp(b.path / "results.csv") == results);
    CHECK(slurp(b.path / "distributions.csv") == dists);
    CHECK(slurp(b.path / "manifest.json") == manifest);

    SUBCASE("existing output is refused without resume") {
        CHECK_THROWS_AS(run_experiment(c, o), OutputError);
    }
    SUBCASE("resume after deleting half the rows") {
        std::istringstream lines(results);
        std::string line, kept;
        int n = 0;
        while (std::getline(lines, line) && n <= 18) {
            kept += line + "\n";
            ++n;
        }
        std::ofstream(b.path / "results.csv", std::ios::binary | std::ios::trunc) << kept;
        o.resume = true;
        const auto r2 = run_experiment(c, o);
        CHECK(r2.jobs_kept == 6);
        CHECK(r2.jobs_run == 6);
        CHECK(slurp(b.path / "results.csv") == results);
        CHECK(slurp(b.path / "distributions.csv") == dists);
        CHECK(slurp(b.path / "summary.csv") == summary);
    }
    SUBCASE("resume of a complete run does nothing") {
        o.resume = true;
        const auto r2 = run_experiment(c, o);
        CHECK(r2.jobs_run == 0);
        CHECK(slurp(b.path / "results.csv") == results);
    }
    SUBCASE("resume with a different config is refused") {
        auto other = c;
        other.root_seed = 8;
        o.resume = true;
        CHECK_THROWS_AS(run_experiment(other, o), OutputError);
    }
    SUBCASE("summary matches a direct reduction of the rows") {
        const auto rows = summarize(b.path.string());
        REQUIRE(rows.size() == 4);
        const auto kw = 2 + point_columns().size();
        for (const auto &s : rows) {
            std::vector<double> finals;
            for (const auto &r : table.rows) {
                if (std::equal(s.key.begin(), s.key.end(), r.begin() + 1) && r[kw + 2] == "20") {
                    finals.push_back(std::strtod(r[kw + 4].c_str(), nullptr));
                }
            }
            REQUIRE(finals.size() == 3);
            const double mean = (finals[0] + finals[1] + finals[2]) / 3.0;
            CHECK(s.num_seeds == 3);
            CHECK(s.final_epoch == 20);
            CHECK(s.mean_kld_exact == doctest::Approx(mean).epsilon(1e-14));
            std::sort(finals.begin(), finals.end());
            CHECK(s.median_kld_exact == finals[1]);
            CHECK(s.mean_half_chain_entropy.has_value());
        }
    }
}

TEST_CASE("summary semantics") {
    const auto c = parse_config(kTinyConfig);
    TempDir dir("summary");
    RunOptions o;
    o.out_dir = dir.path.string();
    run_experiment(c, o);
    std::ifstream in(dir.path / "results.csv", std::ios::binary);
    auto table = csv::read_table(in);

    std::ostringstream expected;
    write_summary(expected, summarize_table(table));

    std::mt19937 gen(3);
    std::shuffle(table.rows.begin(), table.rows.end(), gen);
    std::ostringstream shuffled;
    write_summary(shuffled, summarize_table(table));
    CHECK(shuffled.str() == expected.str());

    const auto kw = 2 + point_columns().size();
    auto one_seed = table;
    std::erase_if(one_seed.rows, [&](const csv::Row &r) { return r[kw] != "1"; });
    for (const auto &s : summarize_table(one_seed)) {
        CHECK(s.num_seeds == 1);
        CHECK(s.std_kld_exact == 0.0);
        CHECK(s.std_kld_empirical == 0.0);
        CHECK(s.median_kld_exact == s.mean_kld_exact);
    }

    auto wrong = table;
    wrong.rows.front()[0] = "0";
    CHECK_THROWS_WITH_AS(summarize_table(wrong), doctest::Contains("schema version 0"), OutputError);
    auto renamed = table;
    renamed.header.back() = "entropy";
    CHECK_THROWS_AS(summarize_table(renamed), OutputError);
    CHECK_THROWS_AS(summarize((dir.path / "missing").string()), OutputError);
}

TEST_CASE("manifest records design stamps and seeds") {
    const auto c = parse_config(kTinyConfig);
    const std::string m = manifest_json(c, "QSBM_SEED");
    for (const char *needle : {"\"smoothing_alpha\": 0.5", "\"probability_floor\": 1e-12", "\"target_weight_seed\": 42",
                               "brickwork_pairing", "rotation_convention", "ancilla_placement", "\"seed_source\": \"QSBM_SEED\"",
                               "\"schema_version\": 1"}) {
        CAPTURE(needle);
        CHECK(m.find(needle) != std::string::npos);
    }
    CHECK(m.find("\"realization\": 2") != std::string::npos);
}
