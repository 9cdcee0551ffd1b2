#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qonn/rng.hpp"
#include "qonn/runconfig.hpp"

using namespace qonn;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json minimal_curvefit() {
    return json{{"task", "curvefit"},
                {"architecture",
                 {{"n_modes", 1}, {"n_layers", 1}, {"subtractions", {json::array()}},
                  {"outputs", {0}}}},
                {"training",
                 {{"seed", 5}, {"restarts", 1}, {"max_iters", 40}, {"deterministic", true}}},
                {"dataset", {{"function", "tanh"}, {"x_lo", -2.0}, {"x_hi", 2.0},
                             {"train_samples", 40}, {"noise", 0.05}}},
                {"output_dir", "cli_test_out"}};
}

}  // namespace

TEST_CASE("config schema accepts the documented shape") {
    RunConfig cfg = RunConfig::parse_json(minimal_curvefit());
    CHECK(cfg.task == "curvefit");
    CHECK(cfg.arch.n_modes == 1);
    CHECK(cfg.training.seed == 5);
    CHECK(cfg.output_dir == "cli_test_out");
}

TEST_CASE("unknown keys are rejected at every level") {
    json top = minimal_curvefit();
    top["surprise"] = 1;
    CHECK_THROWS_AS(RunConfig::parse_json(top), ConfigError);

    json arch = minimal_curvefit();
    arch["architecture"]["modes"] = 2;
    CHECK_THROWS_AS(RunConfig::parse_json(arch), ConfigError);

    json train = minimal_curvefit();
    train["training"]["step_size"] = 0.1;
    CHECK_THROWS_AS(RunConfig::parse_json(train), ConfigError);

    json ds = minimal_curvefit();
    ds["dataset"]["sigma"] = 0.1;
    CHECK_THROWS_AS(run_config(RunConfig::parse_json(ds), {}), ConfigError);
}

TEST_CASE("config validation errors") {
    json missing = minimal_curvefit();
    missing.erase("task");
    CHECK_THROWS_AS(RunConfig::parse_json(missing), ConfigError);

    json bad_task = minimal_curvefit();
    bad_task["task"] = "dance";
    CHECK_THROWS_AS(RunConfig::parse_json(bad_task), ConfigError);

    json bad_grad = minimal_curvefit();
    bad_grad["training"]["grad_mode"] = "sideways";
    CHECK_THROWS_AS(RunConfig::parse_json(bad_grad), ConfigError);

    json no_arch = json{{"task", "curvefit"}};
    CHECK_THROWS_AS(RunConfig::parse_json(no_arch), ConfigError);

    json bad_fn = minimal_curvefit();
    bad_fn["dataset"]["function"] = "mystery";
    CHECK_THROWS_AS(run_config(RunConfig::parse_json(bad_fn), {}), ConfigError);
}

TEST_CASE("curvefit run writes schema-valid artifacts and reproduces bit-for-bit") {
    std::filesystem::remove_all("cli_test_out");
    RunConfig cfg = RunConfig::parse_json(minimal_curvefit());
    REQUIRE(run_config(cfg, {}) == kExitOk);

    json metrics = json::parse(slurp("cli_test_out/metrics.json"));
    CHECK(metrics.contains("train_loss"));
    CHECK(metrics.contains("val_loss"));
    CHECK(metrics.contains("test_loss"));
    CHECK(metrics.contains("herald_norm_min"));
    CHECK(metrics["wall_time_s"].is_null());  // deterministic mode
    CHECK(metrics["param_count"] == 5);

    std::string trace = slurp("cli_test_out/trace.jsonl");
    size_t lines = 0;
    std::stringstream ss(trace);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty()) {
            json rec = json::parse(line);
            CHECK(rec.contains("iter"));
            CHECK(rec.contains("train_loss"));
            CHECK(rec.contains("val_loss"));
            ++lines;
        }
    CHECK(lines > 0);

    std::string preds = slurp("cli_test_out/predictions.csv");
    CHECK(std::count(preds.begin(), preds.end(), '\n') == 201);  // header + 200 test rows

    std::string metrics_first = slurp("cli_test_out/metrics.json");
    REQUIRE(run_config(cfg, {}) == kExitOk);
    CHECK(slurp("cli_test_out/metrics.json") == metrics_first);
    std::filesystem::remove_all("cli_test_out");
}

TEST_CASE("plan-stats task emits the trace-expression counts") {
    std::filesystem::remove_all("cli_stats_out");
    json doc = {{"task", "plan-stats"},
                {"architecture",
                 {{"n_modes", 2}, {"n_layers", 2}, {"subtractions", {{0}, {0}}},
                  {"outputs", {0}}}},
                {"output_dir", "cli_stats_out"}};
    REQUIRE(run_config(RunConfig::parse_json(doc), {}) == kExitOk);
    json stats = json::parse(slurp("cli_stats_out/plan_stats.json"));
    CHECK(stats["numerators"][0]["pre_prune_terms"] == 25);
    CHECK(stats["trace_expressions_formula"] == 25);
    std::filesystem::remove_all("cli_stats_out");
}

TEST_CASE("report-activation emits a CSV sweep") {
    std::filesystem::remove_all("cli_act_out");
    json doc = {{"task", "report-activation"},
                {"dataset",
                 {{"kind", "subtraction"}, {"r_values", {0.5, -0.5}}, {"alpha_lo", -1.0},
                  {"alpha_hi", 1.0}, {"points", 11}}},
                {"output_dir", "cli_act_out"}};
    REQUIRE(run_config(RunConfig::parse_json(doc), {}) == kExitOk);
    std::string csv = slurp("cli_act_out/activation.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);  // header + 11 points
    CHECK(csv.find("r=0.5") != std::string::npos);
    std::filesystem::remove_all("cli_act_out");
}

TEST_CASE("latent-vector CSV ingestion drives a multi-class run") {
    // Synthetic stand-in for compressed image latents: three separated
    // 3-dimensional clusters, one per class.
    std::filesystem::remove_all("cli_csv_out");
    Rng rng(21);
    std::string csv;
    for (int i = 0; i < 120; ++i) {
        int label = i % 3;
        double cx = label == 0 ? -2.0 : (label == 1 ? 0.0 : 2.0);
        csv += format_double(cx + 0.2 * rng.normal()) + "," +
               format_double(-cx + 0.2 * rng.normal()) + "," +
               format_double(0.5 * cx + 0.2 * rng.normal()) + "," + std::to_string(label) +
               "\n";
    }
    write_text_file("latents_test.csv", csv);

    json doc = {{"task", "classify"},
                {"architecture",
                 {{"n_modes", 3}, {"n_layers", 1}, {"subtractions", {{0}}},
                  {"outputs", {0, 1, 2}}}},
                {"training",
                 {{"seed", 2}, {"restarts", 2}, {"max_iters", 80}, {"deterministic", true}}},
                {"dataset", {{"kind", "csv"}, {"csv", "latents_test.csv"}, {"n_inputs", 3}}},
                {"output_dir", "cli_csv_out"}};
    REQUIRE(run_config(RunConfig::parse_json(doc), {}) == kExitOk);
    json metrics = json::parse(slurp("cli_csv_out/metrics.json"));
    CHECK(metrics["test_accuracy"].get<double>() > 0.9);
    std::filesystem::remove_all("cli_csv_out");
    std::filesystem::remove("latents_test.csv");
}

TEST_CASE("csv loader reports the offending row") {
    write_text_file("broken_test.csv", "1.0,2.0\n1.0,oops\n");
    try {
        load_csv_dataset("broken_test.csv", 1, false);
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }
    std::filesystem::remove("broken_test.csv");
    CHECK_THROWS_AS(load_csv_dataset("definitely_missing.csv", 1, false), IoError);
}
