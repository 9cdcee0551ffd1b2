#ifndef QONN_RUNCONFIG_HPP
#define QONN_RUNCONFIG_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "qonn/protocols.hpp"

namespace qonn {

// Exit codes of the CLI front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitOptimization = 3;
inline constexpr int kExitOracleMismatch = 4;

struct CliOverrides {
    std::optional<uint64_t> seed;
    std::optional<bool> deterministic;
    std::optional<int> threads;
    std::optional<std::string> out_dir;
};

// Parsed and schema-checked run configuration. Unknown keys anywhere in the
// document are rejected.
struct RunConfig {
    std::string task;  // curvefit | classify | synth | validate | plan-stats | report-activation
    QonnArchitecture arch;
    bool has_arch = false;
    TrainConfig training;
    nlohmann::json dataset;  // task-specific block, validated per task
    std::string output_dir = "out";

    static RunConfig parse_file(const std::string& path);
    static RunConfig parse_json(const nlohmann::json& doc);
};

// Execute a config end to end, writing metrics.json / trace.jsonl /
// predictions.csv (plus task-specific artifacts) into the output directory.
// Returns a CLI exit code.
int run_config(const RunConfig& cfg, const CliOverrides& overrides);

// Shared artifact helpers.
void write_text_file(const std::string& path, const std::string& content);
std::string format_double(double v);
void ensure_directory(const std::string& path);

}  // namespace qonn

#endif
