#include "support.hpp"

#include <fstream>
#include <sstream>
#include <algorithm>
#include <set>
#include <stdexcept>

namespace catnorm::testing {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Schema load_data(const std::string& name) {
    return parse_schema(read_file(std::string(CATNORM_TEST_DATA) + "/" + name));
}

AttrSet naive_closure(const AttrSet& seed, const std::vector<FD>& fds) {
    AttrSet out = seed;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& fd : fds) {
            if (!is_subset(fd.lhs, out)) continue;
            for (const auto& a : fd.rhs)
                if (out.insert(a).second) changed = true;
        }
    }
    return out;
}

std::vector<std::string> arrow_pairs(const CategoryGraph& g) {
    std::vector<std::string> out;
    for (const auto& a : g.arrows()) out.push_back(a.source + "->" + a.target);
    return out;
}

AttrSet set_of(std::initializer_list<const char*> names) {
    AttrSet out;
    for (const char* n : names) out.insert(n);
    return out;
}

}  // namespace catnorm::testing

namespace catnorm::testing {

namespace {

int pick(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::string letter(int i) { return std::string(1, static_cast<char>('A' + i)); }

AttrSet random_subset(std::mt19937& rng, const std::vector<std::string>& pool, int lo, int hi) {
    AttrSet out;
    int n = pick(rng, lo, std::min<int>(hi, static_cast<int>(pool.size())));
    std::vector<std::string> shuffled = pool;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (int i = 0; i < n; ++i) out.insert(shuffled[static_cast<std::size_t>(i)]);
    return out;
}

void add_arrow_if_free(CategoryGraph& g, const std::string& s, const std::string& t, bool projection) {
    if (s == t || g.has_arrow(s, t)) return;
    g.add_arrow({s + t, s, t, projection});
}

}  // namespace

Schema random_schema(std::mt19937& rng, const RandomSpec& spec) {
    Schema out;
    auto& g = out.graph;
    int n = pick(rng, 2, spec.max_objects);
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) {
        ObjectDecl d;
        d.name = letter(i);
        int k = pick(rng, 0, 9);
        d.kind = k < 4 ? ObjectKind::Entity : k < 7 ? ObjectKind::Attribute : ObjectKind::Relationship;
        g.add_object(d);
        names.push_back(d.name);
    }
    for (const auto& name : names) {
        if (!g.object(name).is_relationship()) continue;
        std::vector<std::string> others;
        for (const auto& o : names)
            if (o != name) others.push_back(o);
        for (const auto& t : random_subset(rng, others, 1, 3)) add_arrow_if_free(g, name, t, true);
    }
    int arrows = pick(rng, 0, spec.max_arrows);
    for (int i = 0; i < arrows; ++i) {
        const auto& s = names[static_cast<std::size_t>(pick(rng, 0, n - 1))];
        const auto& t = names[static_cast<std::size_t>(pick(rng, 0, n - 1))];
        add_arrow_if_free(g, s, t, false);
    }
    g.sync_members_from_projections();
    int fds = pick(rng, 0, spec.max_fds);
    for (int i = 0; i < fds; ++i) {
        auto lhs = random_subset(rng, names, 1, 2);
        const auto& t = names[static_cast<std::size_t>(pick(rng, 0, n - 1))];
        if (lhs.contains(t)) continue;
        out.deps.fds.push_back({lhs, {t}});
    }
    return out;
}

Schema random_mvd_schema(std::mt19937& rng, int max_projections) {
    Schema out;
    auto& g = out.graph;
    int m = pick(rng, 2, max_projections);
    std::vector<std::string> members;
    for (int i = 0; i < m; ++i) {
        ObjectDecl d;
        d.name = letter(i);
        d.kind = pick(rng, 0, 1) ? ObjectKind::Entity : ObjectKind::Attribute;
        g.add_object(d);
        members.push_back(d.name);
    }
    // A few detached attribute objects give member-to-outside arrows.
    int extra = pick(rng, 0, 2);
    std::vector<std::string> all = members;
    for (int i = 0; i < extra; ++i) {
        ObjectDecl d;
        d.name = letter(m + i);
        d.kind = ObjectKind::Attribute;
        g.add_object(d);
        all.push_back(d.name);
    }
    ObjectDecl x;
    x.name = "X";
    x.kind = ObjectKind::Relationship;
    g.add_object(x);
    for (const auto& t : members) add_arrow_if_free(g, "X", t, true);
    int arrows = pick(rng, 0, 3);
    for (int i = 0; i < arrows; ++i) {
        const auto& s = members[static_cast<std::size_t>(pick(rng, 0, m - 1))];
        const auto& t = all[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(all.size()) - 1))];
        add_arrow_if_free(g, s, t, false);
    }
    g.sync_members_from_projections();
    int fds = pick(rng, 0, 2);
    for (int i = 0; i < fds; ++i) {
        auto lhs = random_subset(rng, members, 1, 2);
        const auto& t = members[static_cast<std::size_t>(pick(rng, 0, m - 1))];
        if (!lhs.contains(t)) out.deps.fds.push_back({lhs, {t}});
    }
    int mvds = pick(rng, 1, 3);
    for (int i = 0; i < mvds; ++i) {
        auto lhs = random_subset(rng, members, 1, std::max(1, m - 1));
        std::vector<std::string> rest;
        for (const auto& a : members)
            if (!lhs.contains(a)) rest.push_back(a);
        if (rest.empty()) continue;
        auto rhs = random_subset(rng, rest, 1, static_cast<int>(rest.size()));
        out.deps.mvds.push_back({lhs, rhs, "X"});
    }
    if (out.deps.mvds.empty()) out.deps.mvds.push_back({{members[0]}, {members[1]}, "X"});
    return out;
}

bool is_thin(const CategoryGraph& g) {
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& a : g.arrows())
        if (!seen.insert({a.source, a.target}).second) return false;
    return true;
}

}  // namespace catnorm::testing
