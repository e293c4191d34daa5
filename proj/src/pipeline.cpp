#include "catnorm/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "catnorm/fd_engine.hpp"
#include "catnorm/mvd_engine.hpp"
#include "catnorm/nf_verify.hpp"
#include "catnorm/reducer.hpp"
#include "catnorm/render.hpp"
#include "json.hpp"

namespace catnorm {

using json = nlohmann::ordered_json;

std::optional<Target> parse_target(std::string_view text) {
    if (text == "relational") return Target::Relational;
    if (text == "dtd") return Target::Dtd;
    if (text == "pg") return Target::PropertyGraph;
    if (text == "hybrid") return Target::Hybrid;
    return std::nullopt;
}

std::optional<Check> parse_check(std::string_view text) {
    if (text == "bcnf") return Check::Bcnf;
    if (text == "improved-bcnf") return Check::ImprovedBcnf;
    if (text == "4nf") return Check::FourthNf;
    if (text == "xmlnf") return Check::XmlNf;
    return std::nullopt;
}

HybridAssignment parse_assignment(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("assignment: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("assignment: expected an object");
    HybridAssignment out;
    for (const auto& [name, value] : doc.items()) {
        auto& parts = out[name];
        if (value.is_string()) {
            parts.push_back(value.get<std::string>());
        } else if (value.is_array()) {
            for (const auto& p : value) {
                if (!p.is_string()) throw ParseError("assignment: partition ids of " + name + " must be strings");
                parts.push_back(p.get<std::string>());
            }
        } else {
            throw ParseError("assignment: " + name + " must map to a string or an array");
        }
    }
    return out;
}

namespace {

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json closure_document(const MvdClosureResult& c, const DependencySet& deps) {
    auto doc = json::parse(serialize_schema(c.graph, deps));
    doc["mvd_objects"] = c.graph.mvd_objects();
    doc["provenance"] = json::array();
    for (const auto& p : c.provenance) {
        json e{{"kind", p.kind}, {"source", p.source}};
        if (!p.target.empty()) e["target"] = p.target;
        e["rule"] = p.rule;
        doc["provenance"].push_back(std::move(e));
    }
    return doc;
}

json trace_document(const ReductionTrace& t) {
    json out = json::array();
    for (const auto& r : t.removed_arrows)
        out.push_back({{"step", "remove-arrow"},
                       {"arrow", r.arrow.name},
                       {"source", r.arrow.source},
                       {"target", r.arrow.target},
                       {"path", r.path}});
    for (const auto& d : t.decomposed_objects)
        out.push_back({{"step", "decompose"},
                       {"object", d.object},
                       {"mvd", {{"lhs", d.mvd.lhs}, {"rhs", d.mvd.rhs}, {"context", d.mvd.context}}},
                       {"created", d.created}});
    for (const auto& o : t.removed_limit_objects) out.push_back({{"step", "remove-limit-object"}, {"object", o}});
    for (const auto& n : t.notes) out.push_back({{"step", "note"}, {"text", n}});
    return out;
}

std::string counts(const CategoryGraph& g) {
    return std::to_string(g.objects().size()) + " objects, " + std::to_string(g.arrows().size()) + " arrows";
}

// Runs a check, turning a size bound into an unknown verdict.
template <typename F>
NfReport guarded(const std::string& subject, F&& f) {
    try {
        return f();
    } catch (const BoundExceeded& e) {
        return {subject, Verdict::Unknown, {{"", e.what()}}};
    }
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
    PipelineResult result;
    std::ostringstream summary;
    const std::string stem = std::filesystem::path(config.input).stem().string();

    try {
        if (config.level < 0 || config.level > 2) throw InvalidInput("level must be 0, 1 or 2");
        if (config.targets.contains(Target::Hybrid) && !config.assignment)
            throw InvalidInput("the hybrid target needs an assignment file");

        Schema schema = parse_schema(read_text(config.input));
        auto report = validate(schema.graph, schema.deps);
        summary << config.input << ": " << counts(schema.graph) << ", " << schema.deps.fds.size() << " FDs, "
                << schema.deps.mvds.size() << " MVDs\n";
        for (const auto& w : report.warnings) summary << "warning: " << w.element << ": " << w.message << "\n";
        if (!report.valid()) {
            for (const auto& v : report.violations) summary << "error: " << v.element << ": " << v.message << "\n";
            result.exit_code = kExitInvalid;
            result.summary = summary.str();
            return result;
        }

        if (config.closure_only) {
            auto c = fd_mvd_closure(schema.graph, schema.deps.fds, schema.deps.mvds);
            summary << "closure: " << counts(c.graph) << ", " << c.provenance.size() << " additions\n";
            result.artifacts[stem + ".closure.json"] = closure_document(c, schema.deps).dump(2) + "\n";
            result.summary = summary.str();
            return result;
        }

        CategoryGraph graph = schema.graph;
        std::vector<MVD> mvds = schema.deps.mvds;
        if (config.level > 0) {
            auto r = config.level == 1 ? first_reduced(schema.graph, schema.deps.fds)
                                       : second_reduced(schema.graph, schema.deps.fds, schema.deps.mvds);
            graph = std::move(r.graph);
            if (config.level == 2) mvds = std::move(r.mvds);
            summary << "reduced (level " << config.level << "): " << counts(graph) << "\n";
            if (config.trace) result.artifacts[stem + ".trace.json"] = trace_document(r.trace).dump(2) + "\n";
            if (config.write_reduced)
                result.artifacts[stem + ".reduced.json"] = serialize_schema(graph, {schema.deps.fds, mvds});
        }
        if (config.checks.contains(Check::FourthNf) && config.level < 2)
            summary << "note: 4NF is only expected to hold after --level 2\n";

        auto needs = [&](Target t, Check c1, Check c2) {
            return config.targets.contains(t) || config.checks.contains(c1) || config.checks.contains(c2);
        };
        std::optional<RelationalSchema> rel;
        if (needs(Target::Relational, Check::Bcnf, Check::ImprovedBcnf) || config.checks.contains(Check::FourthNf)) {
            rel = emit_relational(graph);
            summary << "relations: " << rel->relations.size() << "\n";
            for (const auto& w : rel->warnings) summary << "warning: " << w << "\n";
            if (config.targets.contains(Target::Relational)) result.artifacts[stem + ".sql"] = render_sql(*rel, graph);
        }
        std::optional<DtdSchema> dtd;
        if (needs(Target::Dtd, Check::XmlNf, Check::XmlNf)) {
            dtd = emit_dtd(graph);
            if (config.targets.contains(Target::Dtd)) result.artifacts[stem + ".dtd"] = render_dtd(*dtd);
        }
        if (config.targets.contains(Target::PropertyGraph))
            result.artifacts[stem + ".pg.json"] = render_property_graph(emit_property_graph(graph));
        if (config.targets.contains(Target::Hybrid)) {
            auto parts = decompose_hybrid(graph, parse_assignment(read_text(*config.assignment)));
            summary << "partitions: " << parts.size() << "\n";
            result.artifacts[stem + ".hybrid.json"] = render_hybrid(parts);
        }

        if (!config.checks.empty()) {
            const auto deps = checking_dependencies(schema.graph, graph, schema.deps.fds, mvds);
            auto contexts = context_members(schema.graph);
            for (auto& [name, members] : context_members(graph)) contexts[name] = members;
            std::vector<std::pair<std::string, NfReport>> reports;
            if (config.checks.contains(Check::Bcnf))
                for (const auto& r : rel->relations)
                    reports.emplace_back("bcnf", guarded(r.name, [&] { return check_bcnf(r, deps); }));
            if (config.checks.contains(Check::ImprovedBcnf))
                reports.emplace_back("improved-bcnf",
                                     guarded("schema", [&] { return check_improved_bcnf(*rel, deps); }));
            if (config.checks.contains(Check::FourthNf)) {
                for (const auto& r : rel->relations)
                    reports.emplace_back("4nf", guarded(r.name, [&] { return check_4nf(r, deps, contexts); }));
                reports.emplace_back("graph", check_no_derivable_objects(graph));
            }
            if (config.checks.contains(Check::XmlNf))
                reports.emplace_back("xmlnf", check_xml_nf(*dtd, derive_xml_fds(graph, *dtd)));

            json doc = json::array();
            bool violated = false, unknown = false;
            for (const auto& [check, r] : reports) {
                json j{{"check", check}};
                j.update(r.to_json());
                doc.push_back(std::move(j));
                summary << check << " " << r.subject << ": " << to_string(r.verdict) << "\n";
                for (const auto& w : r.witnesses) summary << "  " << w.dependency << " (" << w.reason << ")\n";
                violated |= r.verdict == Verdict::Violated;
                unknown |= r.verdict == Verdict::Unknown;
            }
            result.artifacts[stem + ".nf.json"] = doc.dump(2) + "\n";
            if (violated) result.exit_code = kExitViolation;
            else if (unknown) result.exit_code = kExitUnknown;
        }
    } catch (const ParseError& e) {
        summary << "error: " << e.what() << "\n";
        result.exit_code = kExitInvalid;
    } catch (const InvalidInput& e) {
        summary << "error: " << e.what() << "\n";
        result.exit_code = kExitInvalid;
    } catch (const std::exception& e) {
        summary << "internal error: " << e.what() << "\n";
        result.exit_code = kExitInternal;
    }
    if (result.exit_code == kExitInvalid || result.exit_code == kExitInternal) result.artifacts.clear();
    result.summary = summary.str();
    return result;
}

void write_artifacts(const PipelineResult& result, const PipelineConfig& config, std::ostream* out) {
    if (out) {
        for (const auto& [name, text] : result.artifacts) *out << text;
        return;
    }
    std::filesystem::create_directories(config.output_dir);
    for (const auto& [name, text] : result.artifacts) {
        auto path = std::filesystem::path(config.output_dir) / name;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw Error("cannot write " + path.string());
        f << text;
    }
}

}  // namespace catnorm
