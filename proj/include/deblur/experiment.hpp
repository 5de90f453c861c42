#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "deblur/analysis.hpp"
#include "deblur/model.hpp"
#include "deblur/solvers.hpp"

namespace deblur {

enum class Method { rl, rl_reg, lw, tsvd };

enum class OutputTarget { restored, trace, spectrum, coefficients, report };
enum class OutputFormat { csv, json };

struct OutputRequest {
    OutputTarget target = OutputTarget::restored;
    std::filesystem::path path;
    OutputFormat format = OutputFormat::csv;
};

/// Declarative description of one blur -> deblur experiment.
struct ExperimentSpec {
    std::string name;
    std::size_t n = 0;
    Kernel kernel;
    GeneratorDescriptor original;
    Method method = Method::rl;
    RlParams rl_params;       // rl-reg
    LwParams lw_params;       // lw
    std::size_t tsvd_m = 0;   // tsvd
    SolverConfig solver;
    std::vector<OutputRequest> outputs;
};

/// Parses and validates a JSON experiment spec. Violations raise config_error
/// whose message starts with the offending field path (e.g. "params.m: ...").
ExperimentSpec parse_experiment(const std::string& json_text);
ExperimentSpec load_experiment(const std::filesystem::path& path);

/// Everything a finished experiment knows, for emission or inspection.
struct ExperimentResult {
    Image original;
    Image blurred;
    SvdFactorization factorization;
    SolverRun run;            // tsvd runs leave a single-row trace
    QualityReport report;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Runs the experiment and writes every requested output file atomically.
void run_and_emit(const ExperimentSpec& spec);

std::string render_output(const ExperimentSpec& spec, const ExperimentResult& result,
                          const OutputRequest& request);

}  // namespace deblur
