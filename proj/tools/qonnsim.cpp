#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "qonn/activations.hpp"
#include "qonn/planstats.hpp"
#include "qonn/runconfig.hpp"
#include "qonn/validate.hpp"

namespace {

struct GlobalFlags {
    uint64_t seed = 0;
    bool seed_set = false;
    bool deterministic = false;
    int threads = 0;
    std::string out_dir;
};

qonn::CliOverrides to_overrides(const GlobalFlags& g) {
    qonn::CliOverrides ov;
    if (g.seed_set) ov.seed = g.seed;
    if (g.deterministic) ov.deterministic = true;
    if (g.threads > 0) ov.threads = g.threads;
    if (!g.out_dir.empty()) ov.out_dir = g.out_dir;
    return ov;
}

void add_global_flags(CLI::App* cmd, GlobalFlags& g) {
    cmd->add_option("--seed", g.seed, "Random seed override")
        ->each([&g](const std::string&) { g.seed_set = true; });
    cmd->add_flag("--deterministic", g.deterministic,
                  "Bit-reproducible mode (fixed reductions, no wall times in metrics)");
    cmd->add_option("--threads", g.threads, "Worker thread count (env: QONNSIM_THREADS)");
    cmd->add_option("--out", g.out_dir, "Output directory");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qonnsim: exact simulator and trainer for photonic neural networks "
                 "built from Gaussian layers and photon subtractions"};
    app.require_subcommand(1);
    GlobalFlags g;

    std::string config_path;
    auto* run = app.add_subcommand("run", "Execute a benchmark described by a JSON config");
    run->add_option("--config", config_path, "Path to JSON run config")->required();
    add_global_flags(run, g);

    int v_trials = 12, v_cutoff = 40;
    auto* validate = app.add_subcommand("validate", "Engine-vs-oracle equivalence suite");
    validate->add_option("--trials", v_trials, "Random trials per check");
    validate->add_option("--cutoff", v_cutoff, "Fock cutoff for oracle comparisons");
    add_global_flags(validate, g);

    int ps_modes = 2, ps_layers = 1, ps_subs = 1, ps_outputs = 1;
    std::string ps_config;
    auto* stats = app.add_subcommand("plan-stats", "Report compiled plan statistics as JSON");
    stats->add_option("--config", ps_config, "JSON config with an architecture block");
    stats->add_option("--modes", ps_modes, "Mode count N");
    stats->add_option("--layers", ps_layers, "Layer count L");
    stats->add_option("--subtractions", ps_subs, "Subtractions per layer K");
    stats->add_option("--outputs", ps_outputs, "Readout count O");
    add_global_flags(stats, g);

    std::string act_kind = "subtraction";
    std::vector<double> act_r = {-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5};
    std::vector<int> act_n = {1, 2, 3, 4};
    double act_lo = -2.0, act_hi = 2.0;
    int act_points = 201;
    auto* act = app.add_subcommand("report-activation",
                                   "Emit (alpha, activation) CSV sweeps");
    act->add_option("--kind", act_kind, "subtraction | addition_n | addition_squeezed");
    act->add_option("--r", act_r, "Squeezing values for the sweep");
    act->add_option("--n", act_n, "Addition counts for the addition_n sweep");
    act->add_option("--alpha-lo", act_lo, "Sweep start");
    act->add_option("--alpha-hi", act_hi, "Sweep end");
    act->add_option("--points", act_points, "Sweep resolution");
    add_global_flags(act, g);

    double st_gamma = 0.2;
    int st_samples = 20, st_cutoff = 120;
    auto* synth = app.add_subcommand("synth-targets",
                                     "Write the cubic-phase moment dataset as CSV");
    synth->add_option("--gamma", st_gamma, "Cubic phase strength");
    synth->add_option("--samples", st_samples, "Grid size over alpha in (-2, 2)");
    synth->add_option("--cutoff", st_cutoff, "Fock cutoff");
    add_global_flags(synth, g);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            qonn::RunConfig cfg = qonn::RunConfig::parse_file(config_path);
            return qonn::run_config(cfg, to_overrides(g));
        }
        if (validate->parsed()) {
            qonn::RunConfig cfg;
            cfg.task = "validate";
            cfg.dataset = {{"trials", v_trials}, {"cutoff", v_cutoff}};
            if (g.seed_set) cfg.training.seed = g.seed;
            return qonn::run_config(cfg, to_overrides(g));
        }
        if (stats->parsed()) {
            qonn::RunConfig cfg;
            if (!ps_config.empty()) {
                cfg = qonn::RunConfig::parse_file(ps_config);
                cfg.task = "plan-stats";
            } else {
                cfg.task = "plan-stats";
                cfg.arch.n_modes = ps_modes;
                cfg.arch.n_layers = ps_layers;
                for (int l = 0; l < ps_layers; ++l) {
                    std::vector<int> k;
                    for (int s = 0; s < ps_subs; ++s) k.push_back(s % ps_modes);
                    cfg.arch.subtractions.push_back(k);
                }
                for (int o = 0; o < ps_outputs; ++o) cfg.arch.outputs.push_back(o % ps_modes);
            }
            return qonn::run_config(cfg, to_overrides(g));
        }
        if (act->parsed()) {
            qonn::RunConfig cfg;
            cfg.task = "report-activation";
            cfg.dataset = {{"kind", act_kind},     {"r_values", act_r},
                           {"n_values", act_n},    {"alpha_lo", act_lo},
                           {"alpha_hi", act_hi},   {"points", act_points}};
            return qonn::run_config(cfg, to_overrides(g));
        }
        if (synth->parsed()) {
            std::string dir = g.out_dir.empty() ? "out" : g.out_dir;
            qonn::ensure_directory(dir);
            std::vector<double> alphas(st_samples);
            for (int i = 0; i < st_samples; ++i)
                alphas[i] = -2.0 + 4.0 * i / (st_samples - 1);
            auto rows = qonn::cubic_phase_targets(st_gamma, alphas, st_cutoff);
            std::string csv =
                "# alpha,a_re,a_im,a2_re,a2_im,n_re,n_im,a3_re,a3_im,a2ad_re,a2ad_im,"
                "n2_re,n2_im\n";
            for (size_t i = 0; i < rows.size(); ++i) {
                csv += qonn::format_double(alphas[i]);
                for (const auto& m : rows[i])
                    csv += "," + qonn::format_double(m.re) + "," + qonn::format_double(m.im);
                csv += "\n";
            }
            qonn::write_text_file(dir + "/synth_targets.csv", csv);
            return qonn::kExitOk;
        }
    } catch (const qonn::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return qonn::kExitConfig;
    } catch (const qonn::OptimizationFailure& e) {
        std::fprintf(stderr, "optimization failure: %s\n", e.what());
        return qonn::kExitOptimization;
    } catch (const qonn::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return qonn::kExitConfig;
    } catch (const qonn::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return qonn::kExitError;
    }
    return qonn::kExitError;
}
