#include "catnorm/fd_engine.hpp"

#include <algorithm>

namespace catnorm {

FdIndex::FdIndex(const std::vector<FD>& fds) {
    lhs_.reserve(fds.size());
    rhs_.reserve(fds.size());
    for (const auto& fd : fds) {
        std::vector<int> l, r;
        for (const auto& a : fd.lhs) l.push_back(intern(a));
        for (const auto& a : fd.rhs) r.push_back(intern(a));
        lhs_.push_back(std::move(l));
        rhs_.push_back(std::move(r));
    }
    uses_.assign(names_.size(), {});
    for (std::size_t i = 0; i < lhs_.size(); ++i)
        for (int a : lhs_[i]) uses_[static_cast<std::size_t>(a)].push_back(static_cast<int>(i));
}

int FdIndex::intern(const std::string& name) {
    auto [it, inserted] = ids_.emplace(name, static_cast<int>(names_.size()));
    if (inserted) names_.push_back(name);
    return it->second;
}

int FdIndex::id(const std::string& name) const {
    auto it = ids_.find(name);
    return it == ids_.end() ? -1 : it->second;
}

std::vector<char> FdIndex::closure_mask(const std::vector<int>& seed) const {
    std::vector<char> in(names_.size(), 0);
    std::vector<int> missing(lhs_.size());
    for (std::size_t i = 0; i < lhs_.size(); ++i) missing[i] = static_cast<int>(lhs_[i].size());

    std::vector<int> queue;
    auto push = [&](int a) {
        if (!in[static_cast<std::size_t>(a)]) {
            in[static_cast<std::size_t>(a)] = 1;
            queue.push_back(a);
        }
    };
    for (int a : seed) push(a);
    // FDs with an empty lhs cannot be built through the public types, but an
    // index over them would fire unconditionally.
    for (std::size_t i = 0; i < lhs_.size(); ++i)
        if (missing[i] == 0)
            for (int b : rhs_[i]) push(b);

    while (!queue.empty()) {
        int a = queue.back();
        queue.pop_back();
        for (int fd : uses_[static_cast<std::size_t>(a)]) {
            if (--missing[static_cast<std::size_t>(fd)] == 0)
                for (int b : rhs_[static_cast<std::size_t>(fd)]) push(b);
        }
    }
    return in;
}

AttrSet FdIndex::closure(const AttrSet& seed) const {
    std::vector<int> ids;
    AttrSet out;
    for (const auto& a : seed) {
        int i = id(a);
        if (i >= 0) ids.push_back(i);
        else out.insert(a);
    }
    auto mask = closure_mask(ids);
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) out.insert(names_[i]);
    return out;
}

AttributeClosureResult attribute_closure(const AttrSet& seed, const std::vector<FD>& fds) {
    return {seed, FdIndex(fds).closure(seed)};
}

// ---------------------------------------------------------------------------

std::string detail::arrow_name(const std::string& source, const std::string& target) {
    return source + "->" + target;
}

std::optional<std::string> detail::lhs_object(const CategoryGraph& graph, const AttrSet& lhs) {
    if (lhs.size() == 1) {
        const auto& name = *lhs.begin();
        if (graph.has_object(name)) return name;
        return std::nullopt;
    }
    return graph.find_by_members(lhs);
}

std::vector<ProvenanceEntry> detail::materialize_composites(CategoryGraph& graph,
                                                            const std::vector<AttrSet>& lhs_sets) {
    std::vector<ProvenanceEntry> added;
    for (const auto& lhs : lhs_sets) {
        if (lhs.size() < 2 || graph.find_by_members(lhs)) continue;
        if (!std::all_of(lhs.begin(), lhs.end(), [&](const auto& n) { return graph.has_object(n); }))
            throw InvalidInput("composite {" + join(lhs) + "} names an undeclared object");
        auto name = composite_name(lhs);
        while (graph.has_object(name)) name += "_";
        ObjectDecl decl;
        decl.name = name;
        decl.kind = ObjectKind::Relationship;
        decl.members = lhs;
        decl.materialized = true;
        graph.add_object(decl);
        added.push_back({"object", name, "", "materialized-composite"});
        for (const auto& m : lhs) {
            graph.add_arrow({arrow_name(name, m), name, m, true});
            added.push_back({"arrow", name, m, "projection"});
        }
    }
    return added;
}

namespace {

std::vector<AttrSet> lhs_sets_of(const std::vector<FD>& fds) {
    std::set<AttrSet> seen;
    std::vector<AttrSet> out;
    for (const auto& fd : fds)
        if (seen.insert(fd.lhs).second) out.push_back(fd.lhs);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

ClosureResult fd_closure(const CategoryGraph& graph, const std::vector<FD>& extra) {
    ClosureResult result{graph, {}};
    auto& g = result.graph;

    // Composite left-hand sides become objects before D is formed so that
    // their defining FDs participate in every closure.
    std::vector<FD> first = graph_to_fds(g);
    first.insert(first.end(), extra.begin(), extra.end());
    result.provenance = detail::materialize_composites(g, lhs_sets_of(first));

    std::vector<FD> d = graph_to_fds(g);
    d.insert(d.end(), extra.begin(), extra.end());
    FdIndex index(d);
    auto added = detail::add_closure_arrows(g, lhs_sets_of(d), index,
                                            [](const AttrSet&, const std::string&) { return "fd-closure"; });
    result.provenance.insert(result.provenance.end(), added.begin(), added.end());
    return result;
}

CategoryGraph fd_closure_graph(const CategoryGraph& graph, const std::vector<FD>& extra) {
    return fd_closure(graph, extra).graph;
}

bool covers(const CategoryGraph& g1, const CategoryGraph& g2, const std::vector<FD>& extra) {
    auto closed = fd_closure_graph(g1, extra);
    return std::all_of(g2.arrows().begin(), g2.arrows().end(),
                       [&](const Arrow& a) { return closed.has_arrow(a.source, a.target); });
}

bool equivalent(const CategoryGraph& g1, const CategoryGraph& g2, const std::vector<FD>& extra) {
    return covers(g1, g2, extra) && covers(g2, g1, extra);
}

bool is_redundant_arrow(const Arrow& arrow, const CategoryGraph& graph, const std::vector<FD>& extra) {
    if (!graph.has_arrow(arrow.source, arrow.target))
        throw InvalidInput("arrow " + arrow.source + " -> " + arrow.target + " is not in the graph");
    // G - f is covered by G trivially; G - f covers G iff f itself is implied.
    CategoryGraph without = graph;
    without.remove_arrow(arrow.source, arrow.target);
    auto d = graph_to_fds(without);
    d.insert(d.end(), extra.begin(), extra.end());
    return FdIndex(d).closure({arrow.source}).contains(arrow.target);
}

}  // namespace catnorm
