#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "catnorm/schema.hpp"

namespace catnorm {

struct ForeignKey {
    std::string column;
    std::string relation;

    friend bool operator==(const ForeignKey&, const ForeignKey&) = default;
};

struct RelationDecl {
    std::string name;
    std::string origin;  // object the relation was created for
    std::vector<std::string> sort;
    bool has_surrogate = false;  // the column named after `origin` is an SK
    std::vector<AttrSet> candidate_keys;
    std::vector<ForeignKey> foreign_keys;

    AttrSet sort_set() const { return {sort.begin(), sort.end()}; }
};

struct RelationalSchema {
    std::vector<RelationDecl> relations;  // sorted by name
    std::vector<std::string> warnings;

    const RelationDecl* find(const std::string& name) const;
};

RelationalSchema emit_relational(const CategoryGraph& graph);

/// One factor of a content model: a tag, repeated one or more times when
/// `plus` is set.
struct DtdFactor {
    std::string tag;
    bool plus = false;

    friend bool operator==(const DtdFactor&, const DtdFactor&) = default;
    friend auto operator<=>(const DtdFactor&, const DtdFactor&) = default;
};

/// (L, T, P, R, r). The root is the empty string; `P` only holds non-empty
/// content models, so a tag of L without a P entry and without R is #PCDATA.
struct DtdSchema {
    AttrSet L;
    AttrSet T;
    std::map<std::string, std::vector<DtdFactor>> P;
    std::map<std::string, AttrSet> R;
    std::string root;

    bool is_leaf(const std::string& tag) const { return L.contains(tag) && !P.contains(tag) && !R.contains(tag); }
};

inline constexpr const char* kRootLabel = "\xCE\xB5";  // epsilon, for display

DtdSchema emit_dtd(const CategoryGraph& graph);

struct PropertyGraphSchema {
    AttrSet V;
    std::set<std::pair<std::string, std::string>> E;  // (source label, target label)
    AttrSet T;
    std::map<std::string, AttrSet> P;
};

PropertyGraphSchema emit_property_graph(const CategoryGraph& graph);

/// Object name -> partition ids.
using HybridAssignment = std::map<std::string, std::vector<std::string>>;

struct HybridPart {
    std::string id;
    CategoryGraph graph;
};

/// Splits `graph` into one subgraph per partition id. A projection arrow whose
/// target sits in another partition pulls the target in; any other arrow
/// without a partition holding both endpoints is an InvalidInput error.
std::vector<HybridPart> decompose_hybrid(const CategoryGraph& graph, const HybridAssignment& assignment);

}  // namespace catnorm
