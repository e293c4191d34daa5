#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "catnorm/schema.hpp"

namespace catnorm {

struct AttributeClosureResult {
    AttrSet seed;
    AttrSet closure;
};

/// Interned FD system answering repeated closure queries in O(|D| + |attrs|)
/// each, using the counter-based linear fixpoint.
class FdIndex {
public:
    explicit FdIndex(const std::vector<FD>& fds);

    AttrSet closure(const AttrSet& seed) const;
    /// Closure as a membership mask over interned ids; names not mentioned by
    /// any FD are still reported through `closure`.
    std::vector<char> closure_mask(const std::vector<int>& seed) const;

    int id(const std::string& name) const;  // -1 when unknown
    const std::string& name(int id) const { return names_[static_cast<std::size_t>(id)]; }
    std::size_t size() const { return names_.size(); }

private:
    int intern(const std::string& name);

    std::vector<std::string> names_;
    std::unordered_map<std::string, int> ids_;
    std::vector<std::vector<int>> lhs_;
    std::vector<std::vector<int>> rhs_;
    std::vector<std::vector<int>> uses_;  // attribute -> FDs whose lhs mentions it
};

AttributeClosureResult attribute_closure(const AttrSet& seed, const std::vector<FD>& fds);

/// One entry per element added by a closure computation.
struct ProvenanceEntry {
    std::string kind;  // "arrow" or "object"
    std::string source;
    std::string target;  // empty for objects
    std::string rule;
};

struct ClosureResult {
    CategoryGraph graph;
    std::vector<ProvenanceEntry> provenance;
};

/// (G,F)+ with provenance of every added arrow and materialized object.
ClosureResult fd_closure(const CategoryGraph& graph, const std::vector<FD>& extra);
CategoryGraph fd_closure_graph(const CategoryGraph& graph, const std::vector<FD>& extra);

/// True iff every arrow of `g2` appears in (g1,F)+.
bool covers(const CategoryGraph& g1, const CategoryGraph& g2, const std::vector<FD>& extra);
bool equivalent(const CategoryGraph& g1, const CategoryGraph& g2, const std::vector<FD>& extra);

/// True iff removing `arrow` from `graph` leaves an equivalent graph under F.
/// Throws InvalidInput when the arrow is not in the graph.
bool is_redundant_arrow(const Arrow& arrow, const CategoryGraph& graph, const std::vector<FD>& extra);

namespace detail {

/// Adds a relationship-like object for every composite lhs that no existing
/// relationship already represents. Returns the provenance of each addition.
std::vector<ProvenanceEntry> materialize_composites(CategoryGraph& graph, const std::vector<AttrSet>& lhs_sets);

/// Object representing `lhs` in `graph`: the name itself for singletons, the
/// relationship with matching members for composites.
std::optional<std::string> lhs_object(const CategoryGraph& graph, const AttrSet& lhs);

/// Lines 3-9 of the closure procedure: for each lhs, add an arrow from its
/// object to every object in that object's closure under `index`. `rule_for` labels each added arrow.
template <typename RuleFn>
std::vector<ProvenanceEntry> add_closure_arrows(CategoryGraph& graph, const std::vector<AttrSet>& lhs_sets,
                                                const FdIndex& index, RuleFn&& rule_for);

std::string arrow_name(const std::string& source, const std::string& target);

}  // namespace detail

// ---------------------------------------------------------------------------

template <typename RuleFn>
std::vector<ProvenanceEntry> detail::add_closure_arrows(CategoryGraph& graph, const std::vector<AttrSet>& lhs_sets,
                                                        const FdIndex& index, RuleFn&& rule_for) {
    std::vector<ProvenanceEntry> added;
    std::vector<Arrow> batch;
    std::set<std::string> done;
    for (const auto& lhs : lhs_sets) {
        auto source = lhs_object(graph, lhs);
        if (!source || !done.insert(*source).second) continue;
        // Closing the object rather than the set keeps arrows out of a
        // relationship whose pruned projections are no longer derivable.
        for (const auto& y : index.closure({*source})) {
            if (y == *source || !graph.has_object(y) || graph.has_arrow(*source, y)) continue;
            batch.push_back({arrow_name(*source, y), *source, y, false});
            added.push_back({"arrow", *source, y, rule_for(lhs, y)});
        }
    }
    graph.add_arrows(std::move(batch));
    return added;
}

}  // namespace catnorm
