#pragma once

#include <string>
#include <vector>

#include "catnorm/schema.hpp"

namespace catnorm {

struct RemovedArrow {
    Arrow arrow;
    // Object path source..target through arrows that remained at removal
    // time; empty when the derivation needs a composite left-hand side.
    std::vector<std::string> path;
};

struct DecomposedObject {
    std::string object;
    MVD mvd;
    std::vector<std::string> created;
};

struct ReductionTrace {
    std::vector<RemovedArrow> removed_arrows;
    std::vector<DecomposedObject> decomposed_objects;
    std::vector<std::string> removed_limit_objects;
    std::vector<std::string> notes;
};

struct ReductionResult {
    CategoryGraph graph;
    ReductionTrace trace;
    std::vector<MVD> mvds;  // declared MVDs after re-contextualization
};

/// 1RR: the closure minus every redundant arrow.
ReductionResult first_reduced(const CategoryGraph& graph, const std::vector<FD>& fds);

/// Removes redundant arrows of an already closed graph, non-projection arrows
/// first, each group in (source, target) order.
void remove_redundant_arrows(CategoryGraph& graph, ReductionTrace& trace);

/// Throws InvalidInput when `name` is not an object of `graph`.
bool is_derivable(const std::string& name, const CategoryGraph& graph);

/// Replaces O by O_k (lhs u rhs) and O_k+1 (members - rhs) for the smallest
/// free k. Throws InvalidInput unless O is derivable and mvd has context O.
CategoryGraph decompose_mvd_object(const CategoryGraph& graph, const std::string& name, const MVD& mvd);

/// Same, with the two names chosen by the caller.
CategoryGraph decompose_mvd_object(const CategoryGraph& graph, const std::string& name, const MVD& mvd,
                                   const std::string& first, const std::string& second);

/// 2RR.
ReductionResult second_reduced(const CategoryGraph& graph, const std::vector<FD>& fds,
                               const std::vector<MVD>& mvds);

}  // namespace catnorm
