#include <iostream>

#include "CLI11.hpp"
#include "catnorm/pipeline.hpp"

using namespace catnorm;

namespace {

struct Options {
    std::string input;
    int level = 1;
    int emit_level = 0;
    std::vector<std::string> emit;
    std::vector<std::string> check;
    bool trace = false;
    bool to_stdout = false;
    std::string out = ".";
    std::string assignment;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("input", o.input, "Schema file")->required();
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_flag("--stdout", o.to_stdout, "Write artifacts to standard output");
}

void add_level(CLI::App* cmd, Options& o) {
    cmd->add_option("--level", o.level, "Reduction level: 0 none, 1 (1RR), 2 (2RR)")->check(CLI::Range(0, 2));
}

void add_emit(CLI::App* cmd, Options& o) {
    cmd->add_option("--emit", o.emit, "Targets: relational, dtd, pg, hybrid")
        ->delimiter(',')
        ->allow_extra_args(false)
        ->check(CLI::IsMember({"relational", "dtd", "pg", "hybrid"}));
    cmd->add_option("--assignment", o.assignment, "Hybrid partition assignment (JSON)");
}

void add_check(CLI::App* cmd, Options& o) {
    cmd->add_option("--check", o.check, "Checks: bcnf, improved-bcnf, 4nf, xmlnf")
        ->delimiter(',')
        ->allow_extra_args(false)
        ->check(CLI::IsMember({"bcnf", "improved-bcnf", "4nf", "xmlnf"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Normalize a categorical schema and emit relational, XML and graph schemas"};
    app.require_subcommand(1);
    Options o;

    auto* validate = app.add_subcommand("validate", "Parse and validate a schema");
    validate->add_option("input", o.input, "Schema file")->required();

    auto* closure = app.add_subcommand("closure", "Write the FD/MVD closure with provenance");
    add_common(closure, o);

    auto* reduce = app.add_subcommand("reduce", "Reduce, optionally emit and check");
    add_common(reduce, o);
    add_level(reduce, o);
    add_emit(reduce, o);
    add_check(reduce, o);
    reduce->add_flag("--trace", o.trace, "Write the reduction trace");

    auto* emit = app.add_subcommand("emit", "Emit target schemas (no reduction unless --level is given)");
    add_common(emit, o);
    add_emit(emit, o);
    emit->add_option("--level", o.emit_level, "Reduction level")->check(CLI::Range(0, 2));

    auto* check = app.add_subcommand("check", "Run normal-form checks on the reduced schema");
    add_common(check, o);
    add_level(check, o);
    add_check(check, o);

    auto* hybrid = app.add_subcommand("hybrid", "Split the reduced graph by a partition assignment");
    add_common(hybrid, o);
    add_level(hybrid, o);
    hybrid->add_option("--assignment", o.assignment, "Partition assignment (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    PipelineConfig config;
    config.input = o.input;
    config.level = o.level;
    config.trace = o.trace;
    config.output_dir = o.out;
    if (!o.assignment.empty()) config.assignment = o.assignment;
    for (const auto& t : o.emit) config.targets.insert(*parse_target(t));
    for (const auto& c : o.check) config.checks.insert(*parse_check(c));

    if (validate->parsed()) {
        config.level = 0;
    } else if (closure->parsed()) {
        config.closure_only = true;
    } else if (emit->parsed()) {
        config.level = o.emit_level;
    } else if (reduce->parsed()) {
        config.write_reduced = config.targets.empty() && config.checks.empty();
    } else if (check->parsed()) {
        if (config.checks.empty())
            config.checks = {Check::Bcnf, Check::ImprovedBcnf, Check::FourthNf, Check::XmlNf};
    } else if (hybrid->parsed()) {
        config.targets.insert(Target::Hybrid);
    }

    auto result = run_pipeline(config);
    std::cerr << result.summary;
    try {
        write_artifacts(result, config, o.to_stdout ? &std::cout : nullptr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return result.exit_code;
}
