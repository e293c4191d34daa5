#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "catnorm/emitters.hpp"
#include "catnorm/schema.hpp"

namespace catnorm {

enum class Target { Relational, Dtd, PropertyGraph, Hybrid };
enum class Check { Bcnf, ImprovedBcnf, FourthNf, XmlNf };

std::optional<Target> parse_target(std::string_view text);
std::optional<Check> parse_check(std::string_view text);

enum ExitCode : int {
    kExitOk = 0,
    kExitInvalid = 1,
    kExitInternal = 2,
    kExitViolation = 3,
    kExitUnknown = 4,
};

struct PipelineConfig {
    std::string input;
    int level = 1;  // 0 = emit the input as is
    std::set<Target> targets;
    std::set<Check> checks;
    bool trace = false;
    bool closure_only = false;  // write the closure document and stop
    bool write_reduced = false;
    std::string output_dir = ".";
    std::optional<std::string> assignment;
};

struct PipelineResult {
    int exit_code = kExitOk;
    std::map<std::string, std::string> artifacts;  // file name -> contents
    std::string summary;                           // human-readable, for stderr
};

/// Runs the pipeline in memory. Input errors are reported through the exit
/// code and the summary, never thrown.
PipelineResult run_pipeline(const PipelineConfig& config);

/// Writes artifacts under config.output_dir, or to `out` in file-name order
/// when `out` is given.
void write_artifacts(const PipelineResult& result, const PipelineConfig& config, std::ostream* out);

/// {"Object": "part"} or {"Object": ["part", ...]}.
HybridAssignment parse_assignment(std::string_view text);

}  // namespace catnorm
