#include "catnorm/render.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace catnorm {

namespace {

using json = nlohmann::ordered_json;

std::string column_type(const RelationDecl& r, const std::string& column, const CategoryGraph& graph) {
    if (r.has_surrogate && column == r.origin) return "INTEGER";
    for (const auto& fk : r.foreign_keys)
        if (fk.column == column) return "INTEGER";
    if (graph.has_object(column)) {
        const auto& domain = graph.object(column).domain;
        if (domain) {
            std::string d = *domain;
            std::transform(d.begin(), d.end(), d.begin(), [](unsigned char c) { return std::tolower(c); });
            if (d == "integer" || d == "int") return "INTEGER";
            if (d == "boolean" || d == "bool") return "BOOLEAN";
        }
    }
    return "TEXT";
}

std::string column_list(const AttrSet& cols) { return join(cols, ", "); }

const char* root_name = "root";

std::string tag_name(const std::string& tag) { return tag.empty() ? root_name : tag; }

}  // namespace

std::string render_sql(const RelationalSchema& schema, const CategoryGraph& graph) {
    std::ostringstream out;
    for (const auto& w : schema.warnings) out << "-- warning: " << w << "\n";
    for (const auto& r : schema.relations) {
        out << "CREATE TABLE " << r.name << " (\n";
        std::vector<std::string> lines;
        for (const auto& c : r.sort) lines.push_back("  " + c + " " + column_type(r, c, graph) + " NOT NULL");
        if (!r.candidate_keys.empty()) {
            lines.push_back("  PRIMARY KEY (" + column_list(r.candidate_keys.front()) + ")");
            for (std::size_t i = 1; i < r.candidate_keys.size(); ++i)
                lines.push_back("  UNIQUE (" + column_list(r.candidate_keys[i]) + ")");
        }
        for (const auto& fk : r.foreign_keys) {
            lines.push_back("  FOREIGN KEY (" + fk.column + ") REFERENCES " + fk.relation + " (" + fk.column + ")");
        }
        for (std::size_t i = 0; i < lines.size(); ++i) out << lines[i] << (i + 1 < lines.size() ? ",\n" : "\n");
        out << ");\n\n";
    }
    return out.str();
}

std::string content_model(const DtdSchema& dtd, const std::string& tag) {
    auto it = dtd.P.find(tag);
    if (it == dtd.P.end()) return "";
    std::string s;
    for (const auto& f : it->second) s += f.tag + (f.plus ? "+" : "");
    return s;
}

std::string render_dtd(const DtdSchema& dtd) {
    std::ostringstream out;
    auto element = [&](const std::string& tag) {
        auto it = dtd.P.find(tag);
        out << "<!ELEMENT " << tag_name(tag) << " ";
        if (it != dtd.P.end()) {
            out << "(";
            for (std::size_t i = 0; i < it->second.size(); ++i)
                out << (i ? ", " : "") << it->second[i].tag << (it->second[i].plus ? "+" : "");
            out << ")";
        } else if (dtd.R.contains(tag) || tag.empty()) {
            out << "EMPTY";
        } else {
            out << "(#PCDATA)";
        }
        out << ">\n";
        auto r = dtd.R.find(tag);
        if (r == dtd.R.end()) return;
        for (const auto& attr : r->second) {
            auto name = attr.substr(1);
            out << "<!ATTLIST " << tag << " " << name << " " << (attr == "@ID" ? "ID" : "IDREF") << " #REQUIRED>\n";
        }
    };
    element(dtd.root);
    for (const auto& tag : dtd.L) element(tag);
    return out.str();
}

std::string render_property_graph(const PropertyGraphSchema& pg) {
    json doc;
    doc["vertices"] = json::array();
    for (const auto& v : pg.V) {
        json props = json::array();
        auto it = pg.P.find(v);
        if (it != pg.P.end())
            for (const auto& p : it->second) props.push_back(p);
        doc["vertices"].push_back({{"label", v}, {"properties", props}});
    }
    doc["edges"] = json::array();
    for (const auto& [a, b] : pg.E) doc["edges"].push_back({a, b});
    return doc.dump(2) + "\n";
}

std::string render_hybrid(const std::vector<HybridPart>& parts) {
    json doc;
    doc["partitions"] = json::array();
    for (const auto& part : parts) {
        json objects = json::array();
        for (const auto& [name, decl] : part.graph.objects()) objects.push_back(name);
        json arrows = json::array();
        for (const auto& a : part.graph.arrows())
            arrows.push_back({{"name", a.name}, {"source", a.source}, {"target", a.target}, {"projection", a.is_projection}});
        doc["partitions"].push_back({{"id", part.id}, {"objects", objects}, {"arrows", arrows}});
    }
    return doc.dump(2) + "\n";
}

}  // namespace catnorm
