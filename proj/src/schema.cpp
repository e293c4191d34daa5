#include "catnorm/schema.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace catnorm {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string position_suffix(std::size_t line, std::size_t column) {
    if (line == 0) return {};
    return " at line " + std::to_string(line) + ", column " + std::to_string(column);
}

bool arrow_less(const Arrow& a, const Arrow& b) {
    return std::tie(a.source, a.target, a.name) < std::tie(b.source, b.target, b.name);
}

}  // namespace

ParseError::ParseError(const std::string& msg, std::size_t line, std::size_t column)
    : Error(msg + position_suffix(line, column)), line_(line), column_(column) {}

std::string_view to_string(ObjectKind kind) {
    switch (kind) {
        case ObjectKind::Entity: return "entity";
        case ObjectKind::Relationship: return "relationship";
        case ObjectKind::Attribute: return "attribute";
    }
    return "entity";
}

std::optional<ObjectKind> parse_kind(std::string_view text) {
    if (text == "entity") return ObjectKind::Entity;
    if (text == "relationship") return ObjectKind::Relationship;
    if (text == "attribute") return ObjectKind::Attribute;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// CategoryGraph

void CategoryGraph::add_object(ObjectDecl decl) {
    if (decl.name.empty()) throw InvalidInput("object name must be nonempty");
    auto name = decl.name;
    if (!objects_.emplace(name, std::move(decl)).second)
        throw InvalidInput("duplicate object " + name);
}

void CategoryGraph::add_arrow(Arrow arrow) {
    if (!has_object(arrow.source)) throw InvalidInput("undeclared object " + arrow.source);
    if (!has_object(arrow.target)) throw InvalidInput("undeclared object " + arrow.target);
    auto pos = std::upper_bound(arrows_.begin(), arrows_.end(), arrow, arrow_less);
    arrows_.insert(pos, std::move(arrow));
}

void CategoryGraph::add_arrows(std::vector<Arrow> batch) {
    for (const auto& a : batch) {
        if (!has_object(a.source)) throw InvalidInput("undeclared object " + a.source);
        if (!has_object(a.target)) throw InvalidInput("undeclared object " + a.target);
    }
    std::sort(batch.begin(), batch.end(), arrow_less);
    std::vector<Arrow> merged;
    merged.reserve(arrows_.size() + batch.size());
    std::merge(std::make_move_iterator(arrows_.begin()), std::make_move_iterator(arrows_.end()),
               std::make_move_iterator(batch.begin()), std::make_move_iterator(batch.end()),
               std::back_inserter(merged), arrow_less);
    arrows_ = std::move(merged);
}

bool CategoryGraph::remove_arrow(const std::string& source, const std::string& target) {
    auto it = std::find_if(arrows_.begin(), arrows_.end(), [&](const Arrow& a) {
        return a.source == source && a.target == target;
    });
    if (it == arrows_.end()) return false;
    arrows_.erase(it);
    return true;
}

void CategoryGraph::remove_object(const std::string& name) {
    objects_.erase(name);
    mvd_objects_.erase(name);
    std::erase_if(arrows_, [&](const Arrow& a) { return a.source == name || a.target == name; });
}

const ObjectDecl& CategoryGraph::object(const std::string& name) const {
    auto it = objects_.find(name);
    if (it == objects_.end()) throw InvalidInput("unknown object " + name);
    return it->second;
}

ObjectDecl& CategoryGraph::object_mut(const std::string& name) {
    auto it = objects_.find(name);
    if (it == objects_.end()) throw InvalidInput("unknown object " + name);
    return it->second;
}

const Arrow* CategoryGraph::find_arrow(const std::string& source, const std::string& target) const {
    Arrow probe{"", source, target, false};
    auto it = std::lower_bound(arrows_.begin(), arrows_.end(), probe, arrow_less);
    if (it != arrows_.end() && it->source == source && it->target == target) return &*it;
    return nullptr;
}

AttrSet CategoryGraph::out_neighbors(const std::string& name) const {
    AttrSet out;
    Arrow probe{"", name, "", false};
    for (auto it = std::lower_bound(arrows_.begin(), arrows_.end(), probe, arrow_less);
         it != arrows_.end() && it->source == name; ++it)
        out.insert(it->target);
    return out;
}

AttrSet CategoryGraph::in_neighbors(const std::string& name) const {
    AttrSet in;
    for (const auto& a : arrows_)
        if (a.target == name) in.insert(a.source);
    return in;
}

AttrSet CategoryGraph::projection_targets(const std::string& name) const {
    AttrSet out;
    Arrow probe{"", name, "", false};
    for (auto it = std::lower_bound(arrows_.begin(), arrows_.end(), probe, arrow_less);
         it != arrows_.end() && it->source == name; ++it)
        if (it->is_projection) out.insert(it->target);
    return out;
}

bool CategoryGraph::has_outgoing(const std::string& name) const {
    Arrow probe{"", name, "", false};
    auto it = std::lower_bound(arrows_.begin(), arrows_.end(), probe, arrow_less);
    return it != arrows_.end() && it->source == name;
}

bool CategoryGraph::has_incoming(const std::string& name) const {
    return std::any_of(arrows_.begin(), arrows_.end(),
                       [&](const Arrow& a) { return a.target == name; });
}

std::optional<std::string> CategoryGraph::find_by_members(const AttrSet& members) const {
    for (const auto& [name, decl] : objects_)
        if (decl.is_relationship() && !decl.members.empty() && decl.members == members)
            return name;
    return std::nullopt;
}

void CategoryGraph::sync_members_from_projections() {
    for (auto& [name, decl] : objects_)
        if (decl.is_relationship()) decl.members = projection_targets(name);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ParseError(path + ": " + msg);
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            fail(path, "unknown key \"" + key + "\"");
    }
}

std::string get_string(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing \"") + key + "\"");
    if (!it->is_string()) fail(path + "." + key, "expected a string");
    auto s = it->get<std::string>();
    if (s.empty()) fail(path + "." + key, "must be nonempty");
    return s;
}

bool get_bool(const json& obj, const std::string& path, const char* key, bool fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_boolean()) fail(path + "." + key, "expected a boolean");
    return it->get<bool>();
}

AttrSet get_name_set(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing \"") + key + "\"");
    if (!it->is_array()) fail(path + "." + key, "expected an array");
    AttrSet out;
    for (const auto& v : *it) {
        if (!v.is_string() || v.get<std::string>().empty())
            fail(path + "." + key, "expected nonempty strings");
        out.insert(v.get<std::string>());
    }
    if (out.empty()) fail(path + "." + key, "must be nonempty");
    return out;
}

const json& get_array(const json& doc, const char* key) {
    static const json empty = json::array();
    auto it = doc.find(key);
    if (it == doc.end()) return empty;
    if (!it->is_array()) fail(key, "expected an array");
    return *it;
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

Schema parse_schema(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // nlohmann reports the byte just past the offending token.
        auto byte = e.byte > 0 ? e.byte - 1 : 0;
        auto [line, col] = line_col(text, byte);
        throw ParseError("syntax error", line, col);
    }
    check_keys(doc, "document", {"objects", "arrows", "fds", "mvds"});

    Schema out;
    const auto& objects = get_array(doc, "objects");
    for (std::size_t i = 0; i < objects.size(); ++i) {
        std::string path = "objects[" + std::to_string(i) + "]";
        const auto& o = objects[i];
        check_keys(o, path, {"name", "kind", "limit", "domain"});
        ObjectDecl decl;
        decl.name = get_string(o, path, "name");
        auto kind = parse_kind(get_string(o, path, "kind"));
        if (!kind) fail(path + ".kind", "expected entity, relationship or attribute");
        decl.kind = *kind;
        decl.is_limit = get_bool(o, path, "limit", false);
        if (o.contains("domain")) decl.domain = get_string(o, path, "domain");
        if (out.graph.has_object(decl.name)) fail(path, "duplicate object name " + decl.name);
        out.graph.add_object(std::move(decl));
    }

    const auto& arrows = get_array(doc, "arrows");
    for (std::size_t i = 0; i < arrows.size(); ++i) {
        std::string path = "arrows[" + std::to_string(i) + "]";
        const auto& a = arrows[i];
        check_keys(a, path, {"name", "source", "target", "projection"});
        Arrow arrow{get_string(a, path, "name"), get_string(a, path, "source"),
                    get_string(a, path, "target"), get_bool(a, path, "projection", false)};
        for (const auto* end : {&arrow.source, &arrow.target})
            if (!out.graph.has_object(*end)) fail(path, "undeclared object " + *end);
        out.graph.add_arrow(std::move(arrow));
    }
    out.graph.sync_members_from_projections();

    const auto& fds = get_array(doc, "fds");
    for (std::size_t i = 0; i < fds.size(); ++i) {
        std::string path = "fds[" + std::to_string(i) + "]";
        check_keys(fds[i], path, {"lhs", "rhs"});
        out.deps.fds.push_back({get_name_set(fds[i], path, "lhs"), get_name_set(fds[i], path, "rhs")});
    }
    const auto& mvds = get_array(doc, "mvds");
    for (std::size_t i = 0; i < mvds.size(); ++i) {
        std::string path = "mvds[" + std::to_string(i) + "]";
        check_keys(mvds[i], path, {"lhs", "rhs", "context"});
        out.deps.mvds.push_back({get_name_set(mvds[i], path, "lhs"), get_name_set(mvds[i], path, "rhs"),
                                 get_string(mvds[i], path, "context")});
    }
    return out;
}

std::string serialize_schema(const CategoryGraph& graph, const DependencySet& deps) {
    ordered_json doc;
    doc["objects"] = ordered_json::array();
    for (const auto& [name, decl] : graph.objects()) {
        ordered_json o;
        o["name"] = name;
        o["kind"] = std::string(to_string(decl.kind));
        if (decl.is_limit) o["limit"] = true;
        if (decl.domain) o["domain"] = *decl.domain;
        doc["objects"].push_back(std::move(o));
    }
    doc["arrows"] = ordered_json::array();
    for (const auto& a : graph.arrows()) {
        doc["arrows"].push_back(
            {{"name", a.name}, {"source", a.source}, {"target", a.target}, {"projection", a.is_projection}});
    }
    doc["fds"] = ordered_json::array();
    for (const auto& fd : deps.fds) doc["fds"].push_back({{"lhs", fd.lhs}, {"rhs", fd.rhs}});
    doc["mvds"] = ordered_json::array();
    for (const auto& m : deps.mvds)
        doc["mvds"].push_back({{"lhs", m.lhs}, {"rhs", m.rhs}, {"context", m.context}});
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate(const CategoryGraph& graph, const DependencySet& deps) {
    ValidationReport report;
    auto violation = [&](std::string code, std::string element, std::string msg) {
        report.violations.push_back({std::move(code), std::move(element), std::move(msg)});
    };
    auto warning = [&](std::string code, std::string element, std::string msg) {
        report.warnings.push_back({std::move(code), std::move(element), std::move(msg)});
    };

    for (const auto& [name, decl] : graph.objects()) {
        if (decl.is_limit && !decl.is_relationship())
            violation("limit-kind", name, "limit flag on non-relationship object " + name);
    }

    const Arrow* prev = nullptr;
    for (const auto& a : graph.arrows()) {
        std::string element = a.name + ": " + a.source + " -> " + a.target;
        if (!graph.has_object(a.source) || !graph.has_object(a.target)) {
            violation("undeclared", element, "arrow endpoint is not a declared object");
            continue;
        }
        if (a.source == a.target) violation("identity", element, "explicit identity arrow");
        if (a.is_projection && !graph.object(a.source).is_relationship())
            violation("projection-source", element, "projection arrow from non-relationship " + a.source);
        if (prev && prev->source == a.source && prev->target == a.target)
            violation("thinness", "(" + a.source + "," + a.target + ")",
                      "arrows " + prev->name + " and " + a.name + " share endpoints");
        prev = &a;
    }

    for (const auto& name : graph.mvd_objects()) {
        if (!graph.has_object(name) || !graph.object(name).is_relationship())
            violation("mvd-object", name, "MVD object annotation on non-relationship " + name);
    }

    for (const auto& [name, decl] : graph.objects()) {
        if (decl.is_relationship() && graph.projection_targets(name).empty())
            warning("no-projections", name, "relationship object " + name + " has no projection arrows");
        if (decl.kind == ObjectKind::Entity) {
            bool has_attr = false;
            for (const auto& t : graph.out_neighbors(name))
                has_attr = has_attr || graph.object(t).kind == ObjectKind::Attribute;
            if (!has_attr) warning("no-attributes", name, "entity object " + name + " has no attribute objects");
        }
    }

    auto check_names = [&](const AttrSet& names, const std::string& element) {
        for (const auto& n : names)
            if (!graph.has_object(n)) violation("undeclared", element, "undeclared object " + n);
    };
    for (const auto& fd : deps.fds) {
        auto element = to_string(fd);
        if (fd.lhs.empty() || fd.rhs.empty()) violation("empty-side", element, "FD sides must be nonempty");
        check_names(fd.lhs, element);
        check_names(fd.rhs, element);
    }
    for (const auto& m : deps.mvds) {
        auto element = to_string(m);
        if (m.lhs.empty() || m.rhs.empty()) violation("empty-side", element, "MVD sides must be nonempty");
        if (!graph.has_object(m.context) || !graph.object(m.context).is_relationship()) {
            violation("context", element, "MVD context " + m.context + " is not a relationship object");
            continue;
        }
        const auto& members = graph.object(m.context).members;
        auto outside = set_minus(set_union(m.lhs, m.rhs), members);
        if (!outside.empty())
            violation("context", element, "{" + join(outside) + "} not projection targets of " + m.context);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Dependencies

std::vector<FD> graph_to_fds(const CategoryGraph& graph) {
    std::vector<FD> out;
    out.reserve(graph.arrows().size() + 2 * graph.objects().size());
    for (const auto& a : graph.arrows()) out.push_back({{a.source}, {a.target}});
    for (const auto& [name, decl] : graph.objects()) {
        if (!decl.is_relationship() || decl.members.empty()) continue;
        auto targets = graph.projection_targets(name);
        if (!targets.empty()) out.push_back({{name}, targets});
        out.push_back({decl.members, {name}});
    }
    return out;
}

std::vector<FD> canonicalize(const std::vector<FD>& fds) {
    std::set<FD> seen;
    std::vector<FD> out;
    for (const auto& fd : fds) {
        for (const auto& r : fd.rhs) {
            if (fd.lhs.contains(r)) continue;
            FD single{fd.lhs, {r}};
            if (seen.insert(single).second) out.push_back(std::move(single));
        }
    }
    return out;
}

std::string composite_name(const AttrSet& members) { return join(members, "_"); }

std::string join(const AttrSet& names, std::string_view sep) {
    std::string out;
    for (const auto& n : names) {
        if (!out.empty()) out += sep;
        out += n;
    }
    return out;
}

std::string to_string(const FD& fd) { return join(fd.lhs) + " -> " + join(fd.rhs); }

std::string to_string(const MVD& mvd) {
    return join(mvd.lhs) + " ->>_" + mvd.context + " " + join(mvd.rhs);
}

bool is_subset(const AttrSet& a, const AttrSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

AttrSet set_union(const AttrSet& a, const AttrSet& b) {
    AttrSet out = a;
    out.insert(b.begin(), b.end());
    return out;
}

AttrSet set_minus(const AttrSet& a, const AttrSet& b) {
    AttrSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

AttrSet set_intersect(const AttrSet& a, const AttrSet& b) {
    AttrSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

}  // namespace catnorm
