#include "catnorm/emitters.hpp"

#include <algorithm>

#include "catnorm/fd_engine.hpp"

namespace catnorm {

const RelationDecl* RelationalSchema::find(const std::string& name) const {
    for (const auto& r : relations)
        if (r.name == name) return &r;
    return nullptr;
}

namespace {

bool is_keyed(const ObjectDecl& o) { return o.kind != ObjectKind::Attribute; }

bool bidirectional(const CategoryGraph& g, const std::string& a, const std::string& b) {
    return g.has_arrow(a, b) && g.has_arrow(b, a);
}

struct Builder {
    const CategoryGraph& g;
    std::set<std::string> processed;
    std::map<std::string, std::string> absorbed;  // object -> relation holding it

    void add_neighbours(RelationDecl& r, const std::string& o, std::set<std::string>& visited,
                        std::vector<AttrSet>& bin_keys) {
        for (const auto& n : g.out_neighbors(o)) {
            if (std::find(r.sort.begin(), r.sort.end(), n) == r.sort.end()) r.sort.push_back(n);
            if (is_keyed(g.object(n)) && n != r.origin) {
                ForeignKey fk{n, n};
                if (std::find(r.foreign_keys.begin(), r.foreign_keys.end(), fk) == r.foreign_keys.end())
                    r.foreign_keys.push_back(fk);
            }
            if (bidirectional(g, o, n) && visited.insert(n).second) {
                add_neighbours(r, n, visited, bin_keys);
                processed.insert(n);
                absorbed.emplace(n, r.name);
                bin_keys.push_back({n});
            }
        }
    }
};

}  // namespace

RelationalSchema emit_relational(const CategoryGraph& graph) {
    RelationalSchema out;
    Builder b{graph, {}, {}};
    std::map<std::string, std::vector<AttrSet>> bin_keys;

    for (const auto& [name, decl] : graph.objects()) {
        if (b.processed.contains(name) || !graph.has_outgoing(name)) continue;
        RelationDecl r;
        r.name = name;
        r.origin = name;
        r.sort = {name};
        r.has_surrogate = is_keyed(decl);
        std::set<std::string> visited{name};
        b.add_neighbours(r, name, visited, bin_keys[name]);
        b.processed.insert(name);
        out.relations.push_back(std::move(r));
    }

    // A neighbour absorbed into another relation is referenced there;
    // otherwise foreign keys only point at relations that exist.
    for (auto& r : out.relations) {
        for (auto& fk : r.foreign_keys)
            if (auto it = b.absorbed.find(fk.relation); it != b.absorbed.end() && !out.find(fk.relation))
                fk.relation = it->second;
        std::erase_if(r.foreign_keys, [&](const ForeignKey& fk) {
            return out.find(fk.relation) == nullptr || fk.relation == r.name;
        });
    }

    // Clean: unreferenced surrogate keys, then subsumed relations, until
    // neither applies.
    auto drop_surrogates = [&]() {
        bool any = false;
        for (auto& r : out.relations) {
            if (!r.has_surrogate) continue;
            bool referenced = std::any_of(out.relations.begin(), out.relations.end(), [&](const RelationDecl& other) {
                return std::any_of(other.foreign_keys.begin(), other.foreign_keys.end(), [&](const ForeignKey& fk) {
                    return fk.relation == r.name && fk.column == r.origin;
                });
            });
            if (referenced) continue;
            r.has_surrogate = false;
            std::erase(r.sort, r.origin);
            any = true;
        }
        return any;
    };
    drop_surrogates();
    for (bool removed = true; removed;) {
        removed = false;
        for (std::size_t i = 0; i < out.relations.size() && !removed; ++i) {
            auto si = out.relations[i].sort_set();
            for (std::size_t j = 0; j < out.relations.size(); ++j) {
                if (i == j) continue;
                auto sj = out.relations[j].sort_set();
                if (!is_subset(si, sj) || (si == sj && i < j)) continue;
                const std::string gone = out.relations[i].name;
                const std::string into = out.relations[j].name;
                out.warnings.push_back("relation " + gone + " subsumed by " + into);
                out.relations.erase(out.relations.begin() + static_cast<std::ptrdiff_t>(i));
                for (auto& r : out.relations)
                    for (auto& fk : r.foreign_keys)
                        if (fk.relation == gone) fk.relation = into;
                for (auto& r : out.relations)
                    std::erase_if(r.foreign_keys, [&](const ForeignKey& fk) { return fk.relation == r.name; });
                removed = true;
                break;
            }
        }
        if (!removed) removed = drop_surrogates();
    }

    for (auto& r : out.relations) {
        const auto& decl = graph.object(r.origin);
        const auto& extra = bin_keys[r.origin];
        if (r.has_surrogate || decl.kind == ObjectKind::Attribute) {
            r.candidate_keys.push_back({r.origin});
        } else if (decl.is_relationship()) {
            auto p = set_intersect(graph.projection_targets(r.origin), r.sort_set());
            r.candidate_keys.push_back(p.empty() ? r.sort_set() : p);
        } else if (extra.empty()) {
            r.candidate_keys.push_back(r.sort_set());
        }
        auto sort = r.sort_set();
        for (const auto& k : extra)
            if (is_subset(k, sort) && std::find(r.candidate_keys.begin(), r.candidate_keys.end(), k) == r.candidate_keys.end())
                r.candidate_keys.push_back(k);
        if (r.candidate_keys.empty()) r.candidate_keys.push_back(sort);
    }

    for (const auto& a : graph.arrows()) {
        if (graph.has_object(a.source) && is_redundant_arrow(a, graph, {})) {
            out.warnings.push_back("input is not reduced: arrow " + a.source + " -> " + a.target + " is redundant");
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

DtdSchema emit_dtd(const CategoryGraph& graph) {
    DtdSchema d;
    d.T.insert("@ID");
    for (const auto& [name, decl] : graph.objects()) {
        if (!graph.has_outgoing(name)) continue;
        d.L.insert(name);
        d.P[d.root].push_back({name, true});
        d.R[name].insert("@ID");
        for (const auto& n : graph.out_neighbors(name)) {
            if (graph.has_outgoing(n)) {
                auto attr = "@" + n + "_ID";
                d.T.insert(attr);
                d.R[name].insert(attr);
            } else {
                d.P[name].push_back({n, false});
                d.L.insert(n);
            }
        }
    }
    if (d.P.contains(d.root) && d.P[d.root].empty()) d.P.erase(d.root);
    return d;
}

// ---------------------------------------------------------------------------

PropertyGraphSchema emit_property_graph(const CategoryGraph& graph) {
    PropertyGraphSchema pg;
    for (const auto& [name, decl] : graph.objects()) {
        if (!graph.has_outgoing(name)) continue;
        pg.V.insert(name);
        pg.P[name].insert("SK");
        pg.T.insert("SK");
        for (const auto& n : graph.out_neighbors(name)) {
            if (graph.object(n).kind == ObjectKind::Attribute && !graph.has_outgoing(n)) {
                pg.P[name].insert(n);
                pg.T.insert(n);
            } else if (!pg.E.contains({n, name})) {
                pg.E.insert({name, n});
            }
        }
    }
    return pg;
}

// ---------------------------------------------------------------------------

std::vector<HybridPart> decompose_hybrid(const CategoryGraph& graph, const HybridAssignment& assignment) {
    std::map<std::string, AttrSet> members;  // partition -> objects
    for (const auto& [object, parts] : assignment) {
        if (!graph.has_object(object)) throw InvalidInput("assignment names unknown object " + object);
        for (const auto& p : parts) members[p].insert(object);
    }
    for (const auto& [name, decl] : graph.objects()) {
        auto it = assignment.find(name);
        if (it == assignment.end() || it->second.empty())
            throw InvalidInput("object " + name + " is not assigned to any partition");
    }

    auto shared = [&](const Arrow& a) {
        return std::any_of(members.begin(), members.end(), [&](const auto& entry) {
            return entry.second.contains(a.source) && entry.second.contains(a.target);
        });
    };
    // Crossing projections pull their targets into the source's partitions.
    for (const auto& a : graph.arrows()) {
        if (!a.is_projection || shared(a)) continue;
        for (auto& [p, objs] : members)
            if (objs.contains(a.source)) objs.insert(a.target);
    }
    std::map<std::string, std::vector<Arrow>> placed;
    for (const auto& a : graph.arrows()) {
        if (!shared(a))
            throw InvalidInput("arrow " + a.name + " (" + a.source + " -> " + a.target +
                               ") has no partition holding both endpoints");
        for (const auto& [p, objs] : members)
            if (objs.contains(a.source) && objs.contains(a.target)) placed[p].push_back(a);
    }

    std::vector<HybridPart> out;
    for (const auto& [p, objs] : members) {
        HybridPart part{p, {}};
        for (const auto& o : objs) part.graph.add_object(graph.object(o));
        part.graph.add_arrows(placed[p]);
        AttrSet mvd;
        for (const auto& o : graph.mvd_objects())
            if (objs.contains(o)) mvd.insert(o);
        part.graph.set_mvd_objects(mvd);
        out.push_back(std::move(part));
    }
    return out;
}

}  // namespace catnorm
