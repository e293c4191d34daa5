#include "catnorm/mvd_engine.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <unordered_set>

namespace catnorm {

namespace {

using Mask = std::uint64_t;

// Attribute positions inside one universe.
class Layout {
public:
    explicit Layout(const AttrSet& attrs) : names_(attrs.begin(), attrs.end()) {
        if (names_.size() > 63) throw BoundExceeded("universe has more than 63 attributes");
    }

    Mask all() const { return names_.empty() ? 0 : (Mask{1} << names_.size()) - 1; }

    // Bits of the names that belong to the universe; others are ignored.
    Mask mask(const AttrSet& names) const {
        Mask m = 0;
        for (const auto& n : names) {
            auto it = std::lower_bound(names_.begin(), names_.end(), n);
            if (it != names_.end() && *it == n) m |= Mask{1} << (it - names_.begin());
        }
        return m;
    }

    bool contains_all(const AttrSet& names) const {
        return std::all_of(names.begin(), names.end(),
                           [&](const auto& n) { return std::binary_search(names_.begin(), names_.end(), n); });
    }

    AttrSet names(Mask m) const {
        AttrSet out;
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (m >> i & 1) out.insert(names_[i]);
        return out;
    }

private:
    std::vector<std::string> names_;
};

struct MaskFd {
    Mask lhs;
    Mask rhs;
};

struct MaskMvd {
    Mask lhs;
    Mask rhs;
};

struct MaskDeps {
    std::vector<MaskFd> fds;
    std::vector<MaskMvd> mvds;
};

MaskDeps relativize(const DependencySet& deps, const Universe& u, const Layout& layout) {
    MaskDeps out;
    for (const auto& fd : deps.fds) {
        if (!layout.contains_all(fd.lhs)) continue;
        Mask r = layout.mask(fd.rhs);
        if (r) out.fds.push_back({layout.mask(fd.lhs), r});
    }
    for (const auto& m : deps.mvds) {
        if (!u.name.empty() && m.context != u.name) continue;
        if (!layout.contains_all(m.lhs) || !layout.contains_all(m.rhs)) continue;
        out.mvds.push_back({layout.mask(m.lhs), layout.mask(m.rhs)});
    }
    return out;
}

std::vector<Mask> basis_masks(Mask x, const MaskDeps& d, Mask all) {
    std::vector<MaskMvd> rules = d.mvds;
    // An FD W -> Z yields W ->> a for each a in Z.
    for (const auto& fd : d.fds)
        for (Mask r = fd.rhs; r; r &= r - 1) rules.push_back({fd.lhs, r & -r});

    std::vector<Mask> blocks;
    if (all & ~x) blocks.push_back(all & ~x);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& rule : rules) {
            for (std::size_t i = 0; i < blocks.size(); ++i) {
                Mask b = blocks[i];
                if (rule.lhs & b) continue;
                Mask in = b & rule.rhs;
                Mask out = b & ~rule.rhs;
                if (in && out) {
                    blocks[i] = in;
                    blocks.push_back(out);
                    changed = true;
                }
            }
        }
    }
    return blocks;
}

Mask closure_mask(Mask x, const MaskDeps& d, Mask all) {
    Mask result = x;
    for (;;) {
        Mask next = result;
        for (Mask b : basis_masks(result, d, all)) {
            if (std::popcount(b) != 1) continue;
            for (const auto& fd : d.fds)
                if ((fd.rhs & b) && !(fd.lhs & b)) {
                    next |= b;
                    break;
                }
        }
        if (next == result) return result;
        result = next;
    }
}

}  // namespace

DependencyBasis dependency_basis(const AttrSet& x, const DependencySet& deps, const Universe& u) {
    if (!is_subset(x, u.attrs)) throw InvalidInput("seed {" + join(x) + "} is not inside the universe");
    Layout layout(u.attrs);
    auto d = relativize(deps, u, layout);
    DependencyBasis out{x, u.attrs, {}};
    for (Mask b : basis_masks(layout.mask(x), d, layout.all())) out.blocks.push_back(layout.names(b));
    std::sort(out.blocks.begin(), out.blocks.end());
    return out;
}

AttrSet mixed_closure(const AttrSet& x, const DependencySet& deps, const Universe& u) {
    if (!is_subset(x, u.attrs)) throw InvalidInput("seed {" + join(x) + "} is not inside the universe");
    Layout layout(u.attrs);
    auto d = relativize(deps, u, layout);
    return layout.names(closure_mask(layout.mask(x), d, layout.all()));
}

bool mvd_membership(const DependencySet& deps, const MVD& q, const AttrSet& attrs) {
    if (q.lhs.empty() && q.rhs.empty()) throw InvalidInput("empty dependency");
    if (!is_subset(q.lhs, attrs) || !is_subset(q.rhs, attrs))
        throw InvalidInput("dependency " + to_string(q) + " leaves its universe");
    Universe u{q.context, attrs};
    Layout layout(attrs);
    auto d = relativize(deps, u, layout);
    Mask x = layout.mask(q.lhs);
    Mask y = layout.mask(q.rhs) & ~x;
    // Y - X must be a union of blocks of DEP(X).
    for (Mask b : basis_masks(x, d, layout.all()))
        if ((b & y) && (b & ~y)) return false;
    return true;
}

std::vector<FD> project_fds(const std::vector<FD>& fds, const AttrSet& u) {
    FdIndex index(fds);
    std::set<AttrSet> seeds;
    for (const auto& a : u) seeds.insert({a});
    for (const auto& fd : fds)
        if (is_subset(fd.lhs, u)) seeds.insert(fd.lhs);
    std::vector<FD> out;
    for (const auto& s : seeds) {
        auto rhs = set_minus(set_intersect(index.closure(s), u), s);
        if (!rhs.empty()) out.push_back({s, rhs});
    }
    return out;
}

// ---------------------------------------------------------------------------

std::size_t chase_row_limit() {
    if (const char* env = std::getenv("CATNORM_CHASE_LIMIT")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
    }
    return 4096;
}

namespace {

// Rows are masks: bit set = the second symbol of that column, clear = the
// distinguished one. Two symbols per column suffice for the two-row chase.
class Tableau {
public:
    Tableau(Mask all, std::size_t limit) : all_(all), limit_(limit) {}

    void insert(Mask row) {
        if (rows_.insert(row).second && rows_.size() > limit_)
            throw BoundExceeded("chase exceeded " + std::to_string(limit_) + " rows");
    }

    bool contains(Mask row) const { return rows_.contains(row); }

    Mask carried() const {
        Mask m = 0;
        for (Mask r : rows_) m |= r;
        return m;
    }

    void run(const MaskDeps& d) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& fd : d.fds) changed |= fire_fd(fd);
            for (const auto& m : d.mvds) changed |= fire_mvd(m);
        }
    }

private:
    bool fire_fd(const MaskFd& fd) {
        std::vector<Mask> rows(rows_.begin(), rows_.end());
        Mask merge = 0;
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = i + 1; j < rows.size(); ++j)
                if (!((rows[i] ^ rows[j]) & fd.lhs)) merge |= (rows[i] ^ rows[j]) & fd.rhs;
        if (!merge) return false;
        std::unordered_set<Mask> next;
        for (Mask r : rows) next.insert(r & ~merge);
        rows_ = std::move(next);
        return true;
    }

    bool fire_mvd(const MaskMvd& m) {
        Mask keep = m.lhs | m.rhs;
        std::vector<Mask> rows(rows_.begin(), rows_.end());
        bool added = false;
        for (Mask a : rows)
            for (Mask b : rows) {
                if ((a ^ b) & m.lhs) continue;
                Mask t = (a & keep) | (b & ~keep & all_);
                if (!rows_.contains(t)) {
                    insert(t);
                    added = true;
                }
            }
        return added;
    }

    Mask all_;
    std::size_t limit_;
    std::unordered_set<Mask> rows_;
};

}  // namespace

bool chase_implies(const DependencySet& deps, const Dependency& target, const Universe& u) {
    Layout layout(u.attrs);
    auto d = relativize(deps, u, layout);
    Mask all = layout.all();

    const AttrSet& lhs = std::visit([](const auto& t) -> const AttrSet& { return t.lhs; }, target);
    const AttrSet& rhs = std::visit([](const auto& t) -> const AttrSet& { return t.rhs; }, target);
    if (!is_subset(lhs, u.attrs) || !is_subset(rhs, u.attrs))
        throw InvalidInput("target leaves the universe");
    Mask x = layout.mask(lhs);
    Mask y = layout.mask(rhs);

    Tableau t(all, chase_row_limit());
    t.insert(0);
    t.insert(all & ~x);
    t.run(d);

    if (std::holds_alternative<FD>(target)) {
        // Columns merge as a whole, and only columns outside X ever carry the
        // second symbol, so a column is merged iff no row carries its bit.
        return !(t.carried() & y & ~x);
    }
    // Merged columns no longer carry the second symbol anywhere.
    Mask swapped = all & ~(x | y) & t.carried();
    return t.contains(swapped);
}

// ---------------------------------------------------------------------------

namespace {

std::map<std::string, std::vector<MVD>> by_context(const std::vector<MVD>& mvds) {
    std::map<std::string, std::vector<MVD>> out;
    for (const auto& m : mvds) out[m.context].push_back(m);
    return out;
}

}  // namespace

AttrSet identify_mvd_objects(const CategoryGraph& graph, const std::vector<FD>& fds, const std::vector<MVD>& mvds) {
    AttrSet out;
    for (const auto& [context, group] : by_context(mvds)) {
        if (!graph.has_object(context) || !graph.object(context).is_relationship()) continue;
        const auto& members = graph.object(context).members;
        DependencySet d{project_fds(fds, members), group};
        Universe u{context, members};
        std::set<AttrSet> seen;
        for (const auto& m : group) {
            if (!is_subset(m.lhs, members) || !seen.insert(m.lhs).second) continue;
            if (dependency_basis(m.lhs, d, u).blocks.size() >= 2) {
                out.insert(context);
                break;
            }
        }
    }
    return out;
}

MvdClosureResult fd_mvd_closure(const CategoryGraph& graph, const std::vector<FD>& fds, const std::vector<MVD>& mvds) {
    MvdClosureResult result{graph, {}, {}};
    auto& g = result.graph;

    std::vector<FD> first = graph_to_fds(g);
    first.insert(first.end(), fds.begin(), fds.end());
    std::set<AttrSet> lhs_set;
    for (const auto& fd : first) lhs_set.insert(fd.lhs);
    result.provenance = detail::materialize_composites(g, {lhs_set.begin(), lhs_set.end()});

    std::vector<FD> base = graph_to_fds(g);
    base.insert(base.end(), fds.begin(), fds.end());

    // Alternate MVD reasoning per context with the global FD fixpoint until
    // neither yields anything new.
    auto groups = by_context(mvds);
    std::set<FD> derived;
    for (;;) {
        std::vector<FD> all = base;
        all.insert(all.end(), derived.begin(), derived.end());
        FdIndex index(all);
        bool grew = false;
        for (const auto& [context, group] : groups) {
            if (!g.has_object(context) || !g.object(context).is_relationship()) continue;
            const auto& members = g.object(context).members;
            DependencySet d{project_fds(all, members), group};
            Universe u{context, members};
            std::set<AttrSet> seeds;
            for (const auto& m : group)
                if (is_subset(m.lhs, members)) seeds.insert(m.lhs);
            for (const auto& fd : d.fds) seeds.insert(fd.lhs);
            for (const auto& s : seeds) {
                auto by_fds = index.closure(s);
                for (const auto& a : mixed_closure(s, d, u)) {
                    if (by_fds.contains(a)) continue;
                    if (derived.insert(FD{s, {a}}).second) grew = true;
                }
            }
        }
        if (!grew) break;
    }
    result.derived_fds.assign(derived.begin(), derived.end());

    // Left-hand sides found by MVD reasoning are materialized like those of F.
    std::set<AttrSet> derived_lhs;
    for (const auto& fd : derived) derived_lhs.insert(fd.lhs);
    auto more = detail::materialize_composites(g, {derived_lhs.begin(), derived_lhs.end()});
    result.provenance.insert(result.provenance.end(), more.begin(), more.end());

    std::vector<FD> d = graph_to_fds(g);
    d.insert(d.end(), fds.begin(), fds.end());
    FdIndex fd_only(d);
    d.insert(d.end(), derived.begin(), derived.end());
    FdIndex index(d);
    std::set<AttrSet> lhs_sets;
    for (const auto& fd : d) lhs_sets.insert(fd.lhs);
    auto added = detail::add_closure_arrows(g, {lhs_sets.begin(), lhs_sets.end()}, index,
                                            [&](const AttrSet& lhs, const std::string& y) {
                                                return fd_only.closure(lhs).contains(y) ? "fd-closure" : "fd-mvd";
                                            });
    result.provenance.insert(result.provenance.end(), added.begin(), added.end());

    g.set_mvd_objects(identify_mvd_objects(g, d, mvds));
    return result;
}

CategoryGraph fd_mvd_closure_graph(const CategoryGraph& graph, const std::vector<FD>& fds,
                                   const std::vector<MVD>& mvds) {
    return fd_mvd_closure(graph, fds, mvds).graph;
}

}  // namespace catnorm
