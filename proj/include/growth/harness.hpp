#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "growth/models.hpp"
#include "growth/stats.hpp"

namespace growth::harness {

inline constexpr const char* kToolName = "granular";
inline constexpr const char* kToolVersion = "0.1.0";

enum class AnalysisKind { density, size_volatility, tail, herfindahl_scaling, qq_stable };

struct AnalysisRequest {
    AnalysisKind kind = AnalysisKind::density;
    stats::DispersionStat statistic = stats::DispersionStat::rms; // size_volatility
    std::string tail_side = "abs"; // tail: abs | upper | lower
};

struct ExperimentConfig {
    models::ModelConfig model;
    std::vector<AnalysisRequest> analyses;
    std::string output_dir;
    std::uint64_t seed = 0; // overrides the model seed
};

struct OutputDigest {
    std::string file;
    std::string fnv1a64;
};

struct RunManifest {
    std::string tool;
    std::string version;
    std::uint64_t seed = 0;
    std::string started_utc;
    std::string finished_utc;
    std::string config_json; // echo of the resolved model configuration
    std::vector<OutputDigest> outputs;
};

// Simulates, runs every requested analysis, writes one CSV per analysis and
// manifest.json. Identical config and seed give byte-identical CSVs.
RunManifest run_experiment(const ExperimentConfig& cfg);

enum class Figure { fig1_left, fig1_right };

// Canned experiment presets: the heavy-tailed fixed-structure panel
// (fig1_left) and the proportional-growth panel (fig1_right), each with
// density curves, scaling fits and a summary.json of measured exponents.
RunManifest reproduce(Figure figure, const std::string& output_dir,
                      std::uint64_t seed);

// Full command-line interface; returns the process exit code
// (0 success, 1 parameter/usage error, 2 I/O error).
int cli_main(const std::vector<std::string>& args);

// FNV-1a 64 digest of a file's bytes, hex-encoded.
std::string file_digest_hex(const std::string& path);

} // namespace growth::harness
