#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsw/io.hpp"
#include "qsw/pauli.hpp"

namespace qsw {

/// Chemical-accuracy target in milli-Hartree; batch reports flag energies
/// within this distance of the exact reference.
inline constexpr double kChemicalAccuracyMha = 1.6;

struct StageConfig {
    std::string name;  // freeze | taper | contextual | solve
    nlohmann::json params;
};

struct PipelineConfig {
    std::vector<std::filesystem::path> inputs;
    std::vector<StageConfig> stages;
    std::uint64_t seed = 1;
    double threshold_mha = kChemicalAccuracyMha;
    std::optional<std::filesystem::path> output_json;
    std::optional<std::filesystem::path> output_csv;

    static PipelineConfig from_json_file(const std::filesystem::path& path);
    static PipelineConfig from_json(const nlohmann::json& doc);

    /// Stage names unique and known; a solve stage, if present, is last.
    void validate() const;
};

struct StageReport {
    std::string stage;
    std::size_t qubits_after = 0;
    double elapsed_s = 0.0;
    nlohmann::json details;
};

struct PipelineReport {
    std::filesystem::path input;
    std::uint64_t seed = 0;
    std::vector<std::size_t> qubit_trail;  // width before and after each stage
    std::vector<StageReport> stages;
    std::optional<double> energy;        // final solved energy
    std::optional<double> exact_energy;  // reference for error columns
    std::optional<double> hf_energy;
    std::vector<std::string> warnings;

    nlohmann::json to_json() const;
};

/// Runs the configured stages on one input file. Any stage error aborts
/// with the stage name and cause.
PipelineReport run_pipeline_single(const PipelineConfig& config,
                                   const std::filesystem::path& input);

/// Batch entry point: independent pipelines per input, executed in parallel
/// worker threads, reports in input order. Writes the configured JSON/CSV
/// outputs.
std::vector<PipelineReport> run_pipeline(const PipelineConfig& config);

/// Batch CSV with per-geometry energies and mHa errors.
std::string batch_csv(const std::vector<PipelineReport>& reports,
                      double threshold_mha);

}  // namespace qsw
