#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "catnorm/emitters.hpp"
#include "catnorm/schema.hpp"

namespace catnorm {

enum class Verdict { Satisfied, Violated, Unknown };

std::string_view to_string(Verdict v);

struct NfWitness {
    std::string dependency;
    std::string reason;

    friend bool operator==(const NfWitness&, const NfWitness&) = default;
};

struct NfReport {
    std::string subject;
    Verdict verdict = Verdict::Satisfied;
    std::vector<NfWitness> witnesses;

    nlohmann::ordered_json to_json() const;
};

inline constexpr std::size_t kBcnfMaxAttributes = 12;
inline constexpr std::size_t k4nfMaxAttributes = 8;

/// X -> (X+ n U) - X for every nonempty X of U, dropping trivial ones.
/// Throws BoundExceeded above kBcnfMaxAttributes.
std::vector<FD> project_fds_exhaustive(const std::vector<FD>& fds, const AttrSet& u);

/// Witnesses are the minimal non-superkey left-hand sides, smallest first.
NfReport check_bcnf(const RelationDecl& r, const DependencySet& deps);

/// Reports each non-key attribute B of some relation that a key of that
/// relation determines through the other relations' projected FDs.
NfReport check_improved_bcnf(const RelationalSchema& s, const DependencySet& deps);

/// Members of each MVD context, so that MVDs declared on a relationship
/// object apply to relations whose sort lies inside it.
using ContextMembers = std::map<std::string, AttrSet>;

ContextMembers context_members(const CategoryGraph& graph);

/// Chase-backed: every nontrivial X ->> Y over sort(R) implied by the FDs
/// projected onto sort(R) and the applicable MVDs must have X a superkey.
NfReport check_4nf(const RelationDecl& r, const DependencySet& deps, const ContextMembers& contexts = {});

/// Dependencies a reduced graph is checked against: the FDs of the
/// original and reduced graphs, the declared FDs, and `mvds`.
DependencySet checking_dependencies(const CategoryGraph& original, const CategoryGraph& reduced,
                                    const std::vector<FD>& declared, const std::vector<MVD>& mvds);

/// Path-based FD over a DTD. Paths are dot-separated, start at the root
/// label and may end in "@attr" or "#P".
struct PathFD {
    std::vector<std::string> lhs;
    std::string rhs;

    friend bool operator==(const PathFD&, const PathFD&) = default;
    friend auto operator<=>(const PathFD&, const PathFD&) = default;
};

std::string to_string(const PathFD& fd);

/// One path FD per arrow of `graph`. Throws Error when an endpoint has no
/// place in the DTD.
std::vector<PathFD> derive_xml_fds(const CategoryGraph& graph, const DtdSchema& dtd);

NfReport check_xml_nf(const DtdSchema& dtd, const std::vector<PathFD>& fds);

/// Structural check on a graph: no relationship object is derivable.
NfReport check_no_derivable_objects(const CategoryGraph& graph);

}  // namespace catnorm
