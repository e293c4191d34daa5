#include "catnorm/reducer.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <tuple>

#include "catnorm/fd_engine.hpp"
#include "catnorm/mvd_engine.hpp"

namespace catnorm {

namespace {

std::vector<std::string> find_path(const CategoryGraph& g, const std::string& from, const std::string& to) {
    std::map<std::string, std::string> parent;
    std::deque<std::string> queue{from};
    parent[from] = "";
    while (!queue.empty()) {
        auto cur = queue.front();
        queue.pop_front();
        if (cur == to) break;
        for (const auto& next : g.out_neighbors(cur))
            if (parent.emplace(next, cur).second) queue.push_back(next);
    }
    if (!parent.contains(to)) return {};
    std::vector<std::string> path;
    for (std::string cur = to; !cur.empty(); cur = parent[cur]) path.push_back(cur);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

void remove_redundant_arrows(CategoryGraph& graph, ReductionTrace& trace) {
    std::vector<Arrow> order;
    for (const auto& a : graph.arrows())
        if (!a.is_projection) order.push_back(a);
    for (const auto& a : graph.arrows())
        if (a.is_projection) order.push_back(a);
    // Arrows are stored in (source, target) order, so each group is sorted.
    // A single pass suffices: removals never make a kept arrow redundant.
    for (const auto& a : order) {
        if (!is_redundant_arrow(a, graph, {})) continue;
        graph.remove_arrow(a.source, a.target);
        trace.removed_arrows.push_back({a, find_path(graph, a.source, a.target)});
    }
}

ReductionResult first_reduced(const CategoryGraph& graph, const std::vector<FD>& fds) {
    ReductionResult result{fd_closure_graph(graph, fds), {}, {}};
    remove_redundant_arrows(result.graph, result.trace);
    return result;
}

bool is_derivable(const std::string& name, const CategoryGraph& graph) {
    if (!graph.has_object(name)) throw InvalidInput("unknown object " + name);
    const auto& o = graph.object(name);
    if (!o.is_relationship()) return false;
    if (!o.is_limit && !graph.mvd_objects().contains(name)) return false;
    if (graph.has_incoming(name)) return false;
    auto projections = graph.projection_targets(name);
    for (const auto& a : graph.arrows()) {
        if (a.source != name || a.is_projection) continue;
        bool factors = std::any_of(projections.begin(), projections.end(),
                                   [&](const std::string& y) { return graph.has_arrow(y, a.target); });
        if (!factors) return false;
    }
    return true;
}

CategoryGraph decompose_mvd_object(const CategoryGraph& graph, const std::string& name, const MVD& mvd,
                                   const std::string& first, const std::string& second) {
    if (!is_derivable(name, graph)) throw InvalidInput(name + " is not a derivable relationship object");
    if (mvd.context != name) throw InvalidInput("MVD " + to_string(mvd) + " is not in the context of " + name);
    const auto members = graph.object(name).members;
    if (!is_subset(mvd.lhs, members) || !is_subset(mvd.rhs, members))
        throw InvalidInput("MVD " + to_string(mvd) + " leaves the members of " + name);
    if (graph.has_object(first) || graph.has_object(second) || first == second)
        throw InvalidInput("decomposition names " + first + ", " + second + " are not free");

    AttrSet y = set_minus(mvd.rhs, mvd.lhs);
    CategoryGraph out = graph;
    out.remove_object(name);
    auto add = [&](const std::string& n, const AttrSet& m) {
        ObjectDecl d;
        d.name = n;
        d.kind = ObjectKind::Relationship;
        d.members = m;
        out.add_object(d);
        std::vector<Arrow> projections;
        for (const auto& t : m) projections.push_back({detail::arrow_name(n, t), n, t, true});
        out.add_arrows(std::move(projections));
    };
    add(first, set_union(mvd.lhs, y));
    add(second, set_minus(members, y));
    auto mvd_objects = out.mvd_objects();
    mvd_objects.erase(name);
    out.set_mvd_objects(mvd_objects);
    return out;
}

namespace {

std::pair<std::string, std::string> next_names(const CategoryGraph& g, const std::string& base, int& counter) {
    for (;;) {
        auto a = base + "_" + std::to_string(counter);
        auto b = base + "_" + std::to_string(counter + 1);
        counter += 2;
        if (!g.has_object(a) && !g.has_object(b)) return {a, b};
    }
}

}  // namespace

CategoryGraph decompose_mvd_object(const CategoryGraph& graph, const std::string& name, const MVD& mvd) {
    int counter = 1;
    auto [a, b] = next_names(graph, name, counter);
    return decompose_mvd_object(graph, name, mvd, a, b);
}

ReductionResult second_reduced(const CategoryGraph& graph, const std::vector<FD>& fds,
                               const std::vector<MVD>& mvds) {
    auto closure = fd_mvd_closure(graph, fds, mvds);
    ReductionResult result{std::move(closure.graph), {}, mvds};
    auto& g = result.graph;
    auto& trace = result.trace;

    std::vector<FD> extra = fds;
    extra.insert(extra.end(), closure.derived_fds.begin(), closure.derived_fds.end());

    std::map<std::string, std::string> root;  // decomposed object -> original name
    std::map<std::string, int> counters;

    // Sources of arrows into `o` that are composites made by the closure.
    // Such an arrow says S -> members(o), so it survives a split as arrows
    // into both halves.
    auto composite_sources = [&](const std::string& o) {
        AttrSet out;
        for (const auto& a : g.arrows())
            if (a.target == o && g.object(a.source).materialized) out.insert(a.source);
        return out;
    };
    auto splittable = [&](const std::string& o) {
        if (is_derivable(o, g)) return true;
        auto sources = composite_sources(o);
        if (sources.empty()) return false;
        CategoryGraph h = g;
        for (const auto& s : sources) h.remove_arrow(s, o);
        return is_derivable(o, h);
    };

    auto split_all = [&]() {
        bool decomposed = false;
        for (;;) {
            auto all_fds = graph_to_fds(g);
            all_fds.insert(all_fds.end(), extra.begin(), extra.end());

            std::optional<MVD> chosen;
            for (const auto& o : g.mvd_objects()) {
                if (!splittable(o)) continue;
                const auto& members = g.object(o).members;
                DependencySet d{project_fds(all_fds, members), {}};
                for (const auto& m : result.mvds)
                    if (m.context == o) d.mvds.push_back(m);
                for (const auto& m : d.mvds) {
                    if (!is_subset(m.lhs, members)) continue;
                    for (const auto& block : dependency_basis(m.lhs, d, {o, members}).blocks) {
                        if (set_union(m.lhs, block) == members) continue;  // trivial split
                        MVD c{m.lhs, block, o};
                        if (!chosen ||
                            std::tie(c.context, c.lhs, c.rhs) < std::tie(chosen->context, chosen->lhs, chosen->rhs))
                            chosen = c;
                    }
                }
            }
            if (!chosen) break;

            const std::string o = chosen->context;
            const std::string base = root.contains(o) ? root[o] : o;
            auto& counter = counters.try_emplace(base, 1).first->second;
            auto [n1, n2] = next_names(g, base, counter);
            const auto sources = composite_sources(o);
            for (const auto& s : sources) g.remove_arrow(s, o);
            g = decompose_mvd_object(g, o, *chosen, n1, n2);
            if (!sources.empty()) {
                std::vector<Arrow> redirected;
                for (const auto& s : sources)
                    for (const auto& n : {n1, n2}) redirected.push_back({detail::arrow_name(s, n), s, n, false});
                g.add_arrows(std::move(redirected));
                trace.notes.push_back("redirected arrows from {" + join(sources) + "} into " + o + " to " + n1 +
                                      " and " + n2);
            }
            root[n1] = base;
            root[n2] = base;
            trace.decomposed_objects.push_back({o, *chosen, {n1, n2}});
            decomposed = true;

            const AttrSet m1 = g.object(n1).members;
            const AttrSet m2 = g.object(n2).members;
            std::vector<MVD> kept;
            for (auto m : result.mvds) {
                if (m.context == o) {
                    auto span = set_union(m.lhs, m.rhs);
                    if (is_subset(span, m1)) m.context = n1;
                    else if (is_subset(span, m2)) m.context = n2;
                    else {
                        trace.notes.push_back("dropped " + to_string(m) + " straddling " + n1 + "/" + n2);
                        continue;
                    }
                }
                kept.push_back(m);
            }
            result.mvds = std::move(kept);

            all_fds = graph_to_fds(g);
            all_fds.insert(all_fds.end(), extra.begin(), extra.end());
            g.set_mvd_objects(identify_mvd_objects(g, all_fds, result.mvds));
            trace.notes.push_back("re-identified MVD objects after splitting " + o + ": {" + join(g.mvd_objects()) +
                                  "}");
        }
        if (decomposed) {
            auto mvd_objects = g.mvd_objects();
            g = fd_closure_graph(g, extra);
            g.set_mvd_objects(mvd_objects);
        }
        return decomposed;
    };

    auto drop_limits = [&]() {
        bool any = false;
        for (bool removed = true; removed;) {
            removed = false;
            for (const auto& [name, decl] : g.objects()) {
                if (!decl.is_limit || !is_derivable(name, g)) continue;
                g.remove_object(name);
                trace.removed_limit_objects.push_back(name);
                removed = any = true;
                break;
            }
        }
        return any;
    };

    auto derivable_left = [&]() {
        for (const auto& [name, decl] : g.objects())
            if (decl.is_relationship() && (is_derivable(name, g) || (g.mvd_objects().contains(name) && splittable(name))))
                return true;
        return false;
    };

    // Arrows into composites can block condition (iii) until the redundancy
    // pass removes them, so the three steps repeat until nothing derivable
    // is left.
    for (int round = 0;; ++round) {
        bool changed = split_all();
        changed |= drop_limits();
        remove_redundant_arrows(g, trace);
        if (!derivable_left()) break;
        if (!changed && round > 0) break;
        trace.notes.push_back("derivable object left after reduction; repeating");
    }
    return result;
}

}  // namespace catnorm
