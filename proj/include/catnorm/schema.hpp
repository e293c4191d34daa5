#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace catnorm {

/// Sorted set of object names. Iteration order is lexicographic everywhere.
using AttrSet = std::set<std::string>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed schema document. Line and column are 1-based; 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line = 0, std::size_t column = 0);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Precondition violation on an otherwise well-formed input.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A configured size or row cap was exceeded.
class BoundExceeded : public Error {
public:
    using Error::Error;
};

enum class ObjectKind { Entity, Relationship, Attribute };

std::string_view to_string(ObjectKind kind);
std::optional<ObjectKind> parse_kind(std::string_view text);

struct ObjectDecl {
    std::string name;
    ObjectKind kind = ObjectKind::Entity;
    bool is_limit = false;
    std::optional<std::string> domain;
    // Relationship objects only: the member set whose values identify an
    // element. Fixed when the object is declared or materialized; projection
    // arrows pruned later by reduction do not shrink it.
    AttrSet members;
    // Created by closure from a composite left-hand side.
    bool materialized = false;

    bool is_relationship() const { return kind == ObjectKind::Relationship; }
    friend bool operator==(const ObjectDecl&, const ObjectDecl&) = default;
};

struct Arrow {
    std::string name;
    std::string source;
    std::string target;
    bool is_projection = false;

    friend bool operator==(const Arrow&, const Arrow&) = default;
};

struct FD {
    AttrSet lhs;
    AttrSet rhs;

    friend bool operator==(const FD&, const FD&) = default;
    friend auto operator<=>(const FD&, const FD&) = default;
};

/// lhs ->>_context rhs
struct MVD {
    AttrSet lhs;
    AttrSet rhs;
    std::string context;

    friend bool operator==(const MVD&, const MVD&) = default;
    friend auto operator<=>(const MVD&, const MVD&) = default;
};

struct DependencySet {
    std::vector<FD> fds;
    std::vector<MVD> mvds;

    friend bool operator==(const DependencySet&, const DependencySet&) = default;
};

/// Graph representation of a schema category.
///
/// Arrows are kept sorted by (source, target, name). Thinness is not enforced
/// on insertion so that `validate` can report violations in parsed input;
/// every transformation in this library preserves it.
class CategoryGraph {
public:
    CategoryGraph() = default;

    /// Throws InvalidInput on a duplicate name.
    void add_object(ObjectDecl decl);
    /// Endpoints must already exist. Throws InvalidInput otherwise.
    void add_arrow(Arrow arrow);
    /// Bulk insertion; same checks as add_arrow.
    void add_arrows(std::vector<Arrow> batch);
    bool remove_arrow(const std::string& source, const std::string& target);
    /// Removes the object and every arrow touching it.
    void remove_object(const std::string& name);

    bool has_object(const std::string& name) const { return objects_.contains(name); }
    const ObjectDecl& object(const std::string& name) const;
    ObjectDecl& object_mut(const std::string& name);
    const std::map<std::string, ObjectDecl>& objects() const { return objects_; }
    const std::vector<Arrow>& arrows() const { return arrows_; }

    const Arrow* find_arrow(const std::string& source, const std::string& target) const;
    bool has_arrow(const std::string& source, const std::string& target) const {
        return find_arrow(source, target) != nullptr;
    }

    /// Targets of outgoing arrows, sorted.
    AttrSet out_neighbors(const std::string& name) const;
    /// Sources of incoming arrows, sorted.
    AttrSet in_neighbors(const std::string& name) const;
    /// Targets of outgoing projection arrows.
    AttrSet projection_targets(const std::string& name) const;
    bool has_outgoing(const std::string& name) const;
    bool has_incoming(const std::string& name) const;

    /// Relationship object whose member set equals `members`, if any
    /// (lexicographically first when several qualify).
    std::optional<std::string> find_by_members(const AttrSet& members) const;

    const AttrSet& mvd_objects() const { return mvd_objects_; }
    void set_mvd_objects(AttrSet names) { mvd_objects_ = std::move(names); }

    /// Refreshes every relationship's member set from its projection arrows.
    void sync_members_from_projections();

    friend bool operator==(const CategoryGraph&, const CategoryGraph&) = default;

private:
    std::map<std::string, ObjectDecl> objects_;
    std::vector<Arrow> arrows_;
    AttrSet mvd_objects_;
};

struct Schema {
    CategoryGraph graph;
    DependencySet deps;
};

/// Parses the JSON schema document. Throws ParseError.
Schema parse_schema(std::string_view text);
std::string serialize_schema(const CategoryGraph& graph, const DependencySet& deps);

struct Violation {
    std::string code;     // e.g. "thinness", "context"
    std::string element;  // offending element
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    std::vector<Violation> warnings;

    bool valid() const { return violations.empty(); }
};

ValidationReport validate(const CategoryGraph& graph, const DependencySet& deps);

/// FD(G): one FD per arrow plus, for every relationship object with members,
/// {X} -> {current projection targets} and {members} -> {X}.
std::vector<FD> graph_to_fds(const CategoryGraph& graph);

/// Splits right-hand sides into singletons and drops trivial parts.
std::vector<FD> canonicalize(const std::vector<FD>& fds);

/// Name of a materialized composite: members joined by "_".
std::string composite_name(const AttrSet& members);

std::string join(const AttrSet& names, std::string_view sep = ",");
std::string to_string(const FD& fd);
std::string to_string(const MVD& mvd);

bool is_subset(const AttrSet& a, const AttrSet& b);
AttrSet set_union(const AttrSet& a, const AttrSet& b);
AttrSet set_minus(const AttrSet& a, const AttrSet& b);
AttrSet set_intersect(const AttrSet& a, const AttrSet& b);

}  // namespace catnorm
