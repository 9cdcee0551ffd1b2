#include "qonn/runconfig.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "qonn/activations.hpp"
#include "qonn/planstats.hpp"
#include "qonn/validate.hpp"

namespace qonn {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const auto& k : allowed) ok |= (it.key() == k);
        if (!ok) throw ConfigError(where + ": unknown key '" + it.key() + "'");
    }
}

template <class T>
T get_or(const json& obj, const std::string& key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("bad value for '" + key + "': " + e.what());
    }
}

QonnArchitecture parse_arch(const json& a) {
    check_keys(a, {"n_modes", "n_layers", "subtractions", "outputs"}, "architecture");
    QonnArchitecture arch;
    arch.n_modes = get_or(a, "n_modes", 0);
    arch.n_layers = get_or(a, "n_layers", 1);
    if (a.contains("subtractions"))
        arch.subtractions = a.at("subtractions").get<std::vector<std::vector<int>>>();
    else
        arch.subtractions.assign(arch.n_layers, {});
    arch.outputs = get_or(a, "outputs", std::vector<int>{0});
    arch.validate();
    return arch;
}

TrainConfig parse_training(const json& t) {
    check_keys(t,
               {"seed", "restarts", "max_iters", "fd_step", "tolerance", "grad_mode",
                "deterministic", "lbfgs_memory"},
               "training");
    TrainConfig cfg;
    cfg.seed = get_or<uint64_t>(t, "seed", 1);
    cfg.restarts = get_or(t, "restarts", 8);
    cfg.max_iters = get_or(t, "max_iters", 400);
    cfg.fd_step = get_or(t, "fd_step", 1e-5);
    cfg.tolerance = get_or(t, "tolerance", 1e-10);
    cfg.deterministic = get_or(t, "deterministic", true);
    cfg.lbfgs_memory = get_or(t, "lbfgs_memory", 10);
    std::string gm = get_or<std::string>(t, "grad_mode", "forward");
    if (gm == "forward")
        cfg.grad_mode = GradMode::Forward;
    else if (gm == "central")
        cfg.grad_mode = GradMode::Central;
    else
        throw ConfigError("training.grad_mode must be 'forward' or 'central'");
    cfg.validate();
    return cfg;
}

double curve_function(const std::string& name, double x) {
    if (name == "x5") return std::pow(x, 5);
    if (name == "cosh2") return 2.0 * std::cosh(x);
    if (name == "sin3cos5") return std::sin(3.0 * x) + std::cos(5.0 * x);
    if (name == "tanh") return std::tanh(x);
    if (name == "abs") return std::abs(x);
    if (name == "gauss") return std::exp(-x * x);
    throw ConfigError("unknown curve function '" + name +
                      "' (known: x5, cosh2, sin3cos5, tanh, abs, gauss)");
}

std::string csv_row(const std::vector<double>& row) {
    std::string line;
    for (size_t i = 0; i < row.size(); ++i) {
        if (i) line += ",";
        line += format_double(row[i]);
    }
    return line;
}

void write_benchmark_artifacts(const std::string& dir, const RunConfig& cfg,
                               const ExpectationPlan& plan, const Dataset& ds,
                               const BenchmarkOutcome& out, double wall_s) {
    json metrics;
    metrics["task"] = cfg.task;
    metrics["seed"] = cfg.training.seed;
    metrics["restarts"] = cfg.training.restarts;
    metrics["best_restart"] = out.fit.best_restart;
    metrics["train_loss"] = out.fit.best_train_loss;
    metrics["val_loss"] = out.fit.best_val_loss;
    metrics["test_loss"] = out.test_loss;
    if (out.test_accuracy >= 0.0) metrics["test_accuracy"] = out.test_accuracy;
    metrics["herald_norm_min"] = out.herald_min;
    metrics["herald_norm_mean"] = out.herald_mean;
    metrics["parameters"] = out.fit.best_params;
    metrics["param_count"] = param_count(plan.arch.n_modes, plan.arch.n_layers);
    if (cfg.training.deterministic)
        metrics["wall_time_s"] = nullptr;  // kept bit-reproducible
    else
        metrics["wall_time_s"] = wall_s;
    write_text_file(dir + "/metrics.json", metrics.dump(2) + "\n");

    std::string trace;
    for (const auto& rec : out.fit.trace) {
        json j = {{"restart", rec.restart},
                  {"iter", rec.iter},
                  {"train_loss", rec.train_loss},
                  {"val_loss", rec.val_loss},
                  {"wall_s", rec.wall_s}};
        trace += j.dump() + "\n";
    }
    write_text_file(dir + "/trace.jsonl", trace);

    std::string preds;
    switch (ds.kind) {
        case TaskKind::Regression:
            preds = "# input,target,prediction\n";
            break;
        case TaskKind::Classification:
            preds = "# inputs...,label,predicted_label,readouts...\n";
            break;
        case TaskKind::Moments:
            preds = "# alpha,target moments (re,im)x6,predicted moments (re,im)x6\n";
            break;
    }
    for (const auto& row : out.predictions) preds += csv_row(row) + "\n";
    write_text_file(dir + "/predictions.csv", preds);
}

int run_benchmark_task(const RunConfig& cfg) {
    Dataset ds;
    ExpectationPlan plan;
    if (cfg.task == "curvefit") {
        check_keys(cfg.dataset, {"function", "x_lo", "x_hi", "train_samples", "noise", "csv",
                                 "n_inputs", "seed"},
                   "dataset");
        uint64_t data_seed = get_or<uint64_t>(cfg.dataset, "seed", cfg.training.seed);
        if (cfg.dataset.contains("csv")) {
            ds = load_csv_dataset(cfg.dataset.at("csv").get<std::string>(),
                                  get_or(cfg.dataset, "n_inputs", 1), false);
        } else {
            std::string fn = get_or<std::string>(cfg.dataset, "function", "x5");
            ds = make_curve_dataset([fn](double x) { return curve_function(fn, x); },
                                    get_or(cfg.dataset, "x_lo", -3.0),
                                    get_or(cfg.dataset, "x_hi", 3.0),
                                    get_or(cfg.dataset, "train_samples", 100),
                                    get_or(cfg.dataset, "noise", 0.0), data_seed);
        }
        plan = compile_plan(cfg.arch);
    } else if (cfg.task == "classify") {
        check_keys(cfg.dataset, {"kind", "samples", "noise", "factor", "csv", "n_inputs",
                                 "seed"},
                   "dataset");
        uint64_t data_seed = get_or<uint64_t>(cfg.dataset, "seed", cfg.training.seed);
        std::string kind = get_or<std::string>(cfg.dataset, "kind", "moons");
        if (kind == "moons")
            ds = make_moons_dataset(get_or(cfg.dataset, "samples", 500),
                                    get_or(cfg.dataset, "noise", 0.1), data_seed);
        else if (kind == "circles")
            ds = make_circles_dataset(get_or(cfg.dataset, "samples", 500),
                                      get_or(cfg.dataset, "noise", 0.05),
                                      get_or(cfg.dataset, "factor", 0.5), data_seed);
        else if (kind == "csv")
            ds = load_csv_dataset(cfg.dataset.at("csv").get<std::string>(),
                                  get_or(cfg.dataset, "n_inputs", 2), true);
        else
            throw ConfigError("dataset.kind must be moons, circles or csv");
        if (static_cast<int>(cfg.arch.outputs.size()) < ds.n_classes)
            throw ConfigError("architecture needs one output mode per class (" +
                              std::to_string(ds.n_classes) + " classes)");
        plan = compile_plan(cfg.arch);
    } else {  // synth
        check_keys(cfg.dataset, {"gamma", "samples", "cutoff"}, "dataset");
        ds = make_synthesis_dataset(get_or(cfg.dataset, "gamma", 0.2),
                                    get_or(cfg.dataset, "samples", 20),
                                    get_or(cfg.dataset, "cutoff", 120));
        plan = compile_moment_plan(cfg.arch);
    }

    auto t0 = std::chrono::steady_clock::now();
    BenchmarkOutcome out;
    try {
        out = run_benchmark(plan, ds, cfg.training);
    } catch (const OptimizationFailure& e) {
        std::fprintf(stderr, "optimization failed: %s\n", e.what());
        return kExitOptimization;
    }
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_benchmark_artifacts(cfg.output_dir, cfg, plan, ds, out, wall);
    return kExitOk;
}

int run_validate_task(const RunConfig& cfg) {
    check_keys(cfg.dataset, {"trials", "cutoff"}, "dataset");
    ValidationReport rep = run_validation_suite(cfg.training.seed,
                                                get_or(cfg.dataset, "trials", 12),
                                                get_or(cfg.dataset, "cutoff", 40));
    write_text_file(cfg.output_dir + "/validate_report.json", rep.to_json().dump(2) + "\n");
    for (const auto& c : rep.checks)
        std::printf("[%s] %s (worst %.3e, tol %.1e)\n", c.passed ? "PASS" : "FAIL",
                    c.name.c_str(), c.worst, c.limit);
    return rep.all_passed() ? kExitOk : kExitOracleMismatch;
}

int run_plan_stats_task(const RunConfig& cfg) {
    ExpectationPlan plan = compile_plan(cfg.arch);
    json j = plan_stats_json(plan);
    write_text_file(cfg.output_dir + "/plan_stats.json", j.dump(2) + "\n");
    std::printf("%s\n", j.dump(2).c_str());
    return kExitOk;
}

int run_report_activation_task(const RunConfig& cfg) {
    check_keys(cfg.dataset,
               {"kind", "r_values", "n_values", "alpha_lo", "alpha_hi", "points"}, "dataset");
    std::string kind = get_or<std::string>(cfg.dataset, "kind", "subtraction");
    double lo = get_or(cfg.dataset, "alpha_lo", -2.0);
    double hi = get_or(cfg.dataset, "alpha_hi", 2.0);
    int points = get_or(cfg.dataset, "points", 201);
    if (points < 2) throw ConfigError("report-activation: points must be >= 2");
    std::string csv;
    if (kind == "subtraction" || kind == "addition_squeezed") {
        auto rvals = get_or(cfg.dataset, "r_values",
                            std::vector<double>{-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5});
        csv = "# alpha";
        for (double r : rvals) csv += ",r=" + format_double(r);
        csv += "\n";
        for (int i = 0; i < points; ++i) {
            double a = lo + (hi - lo) * i / (points - 1);
            csv += format_double(a);
            for (double r : rvals)
                csv += "," + format_double(kind == "subtraction" ? phi_subtraction(a, r)
                                                                 : phi_addition_squeezed(a, r));
            csv += "\n";
        }
    } else if (kind == "addition_n") {
        auto nvals = get_or(cfg.dataset, "n_values", std::vector<int>{1, 2, 3, 4});
        csv = "# alpha";
        for (int n : nvals) csv += ",n=" + std::to_string(n);
        csv += "\n";
        for (int i = 0; i < points; ++i) {
            double a = lo + (hi - lo) * i / (points - 1);
            csv += format_double(a);
            for (int n : nvals) csv += "," + format_double(phi_addition_n(a, n));
            csv += "\n";
        }
    } else {
        throw ConfigError("report-activation kind must be subtraction, addition_n or "
                          "addition_squeezed");
    }
    write_text_file(cfg.output_dir + "/activation.csv", csv);
    return kExitOk;
}

}  // namespace

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_json(doc);
}

RunConfig RunConfig::parse_json(const json& doc) {
    check_keys(doc, {"task", "architecture", "training", "dataset", "output_dir"}, "config");
    RunConfig cfg;
    if (!doc.contains("task")) throw ConfigError("config: missing 'task'");
    cfg.task = doc.at("task").get<std::string>();
    const std::vector<std::string> known = {"curvefit", "classify", "synth",
                                            "validate", "plan-stats", "report-activation"};
    bool ok = false;
    for (const auto& k : known) ok |= (cfg.task == k);
    if (!ok) throw ConfigError("config: unknown task '" + cfg.task + "'");

    bool needs_arch = cfg.task == "curvefit" || cfg.task == "classify" || cfg.task == "synth" ||
                      cfg.task == "plan-stats";
    if (doc.contains("architecture")) {
        cfg.arch = parse_arch(doc.at("architecture"));
        cfg.has_arch = true;
    } else if (needs_arch) {
        throw ConfigError("config: task '" + cfg.task + "' requires an architecture block");
    }
    if (doc.contains("training")) cfg.training = parse_training(doc.at("training"));
    cfg.dataset = doc.contains("dataset") ? doc.at("dataset") : json::object();
    cfg.output_dir = get_or<std::string>(doc, "output_dir", "out");
    return cfg;
}

int run_config(const RunConfig& cfg_in, const CliOverrides& overrides) {
    RunConfig cfg = cfg_in;
    if (overrides.seed) cfg.training.seed = *overrides.seed;
    if (overrides.deterministic) cfg.training.deterministic = *overrides.deterministic;
    if (overrides.threads) set_thread_count(*overrides.threads);
    if (overrides.out_dir) cfg.output_dir = *overrides.out_dir;
    ensure_directory(cfg.output_dir);

    if (cfg.task == "validate") return run_validate_task(cfg);
    if (cfg.task == "plan-stats") return run_plan_stats_task(cfg);
    if (cfg.task == "report-activation") return run_report_activation_task(cfg);
    return run_benchmark_task(cfg);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    out << content;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw IoError("cannot create output directory '" + path + "': " + ec.message());
}

}  // namespace qonn
