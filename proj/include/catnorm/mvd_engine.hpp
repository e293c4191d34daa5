#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "catnorm/fd_engine.hpp"
#include "catnorm/schema.hpp"

namespace catnorm {

/// Attribute universe of a reasoning question. MVDs take part only when their
/// context equals `name`; an empty name admits every MVD (free-standing use).
struct Universe {
    std::string name;
    AttrSet attrs;
};

struct DependencyBasis {
    AttrSet seed;
    AttrSet context;
    std::vector<AttrSet> blocks;  // sorted
};

/// Finest partition of U - X such that X ->>_U W for every union W of blocks.
/// FDs take part when their lhs lies inside U (rhs clipped to U).
DependencyBasis dependency_basis(const AttrSet& x, const DependencySet& deps, const Universe& u);

/// Closure of X under FDs and MVDs combined, restricted to U.
AttrSet mixed_closure(const AttrSet& x, const DependencySet& deps, const Universe& u);

/// q.lhs ->>_{q.context} q.rhs over `attrs`.
bool mvd_membership(const DependencySet& deps, const MVD& q, const AttrSet& attrs);

/// S -> (S+ n U) - S for every singleton of U and every FD lhs inside U.
std::vector<FD> project_fds(const std::vector<FD>& fds, const AttrSet& u);

using Dependency = std::variant<FD, MVD>;

/// Row cap of the chase: CATNORM_CHASE_LIMIT when set, otherwise 4096.
std::size_t chase_row_limit();

/// Two-row tableau chase. Throws BoundExceeded when the tableau outgrows the
/// row cap or U has more than 63 attributes.
bool chase_implies(const DependencySet& deps, const Dependency& target, const Universe& u);

struct MvdClosureResult {
    CategoryGraph graph;
    std::vector<ProvenanceEntry> provenance;
    std::vector<FD> derived_fds;  // FDs obtained only through MVD reasoning
};

/// (G,F,M)+. mvd_objects of the result is set by identify_mvd_objects.
MvdClosureResult fd_mvd_closure(const CategoryGraph& graph, const std::vector<FD>& fds, const std::vector<MVD>& mvds);
CategoryGraph fd_mvd_closure_graph(const CategoryGraph& graph, const std::vector<FD>& fds,
                                   const std::vector<MVD>& mvds);

/// Relationship objects O for which some declared lhs W with context O has a
/// dependency basis of at least two blocks, i.e. W ->>_O Y nontrivially with
/// W u Y strictly inside the members of O. `fds` should already contain FD(G).
AttrSet identify_mvd_objects(const CategoryGraph& graph, const std::vector<FD>& fds, const std::vector<MVD>& mvds);

}  // namespace catnorm
