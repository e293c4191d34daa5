#include "catnorm/nf_verify.hpp"

#include <algorithm>

#include "catnorm/fd_engine.hpp"
#include "catnorm/mvd_engine.hpp"
#include "catnorm/reducer.hpp"

namespace catnorm {

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Satisfied: return "satisfied";
        case Verdict::Violated: return "violated";
        case Verdict::Unknown: return "unknown";
    }
    return "unknown";
}

nlohmann::ordered_json NfReport::to_json() const {
    nlohmann::ordered_json j;
    j["subject"] = subject;
    j["verdict"] = std::string(to_string(verdict));
    j["witnesses"] = nlohmann::ordered_json::array();
    for (const auto& w : witnesses) j["witnesses"].push_back({{"dependency", w.dependency}, {"reason", w.reason}});
    return j;
}

namespace {

// Nonempty subsets of `u` by size, then lexicographically.
std::vector<AttrSet> subsets(const AttrSet& u) {
    const std::vector<std::string> names(u.begin(), u.end());
    const std::size_t n = names.size();
    std::vector<AttrSet> out;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        AttrSet s;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) s.insert(names[i]);
        out.push_back(std::move(s));
    }
    std::stable_sort(out.begin(), out.end(), [](const AttrSet& a, const AttrSet& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

void check_bound(const RelationDecl& r, std::size_t bound, const char* what) {
    if (r.sort.size() > bound)
        throw BoundExceeded(std::string(what) + " check of " + r.name + " needs at most " + std::to_string(bound) +
                            " attributes, got " + std::to_string(r.sort.size()));
}

bool contains_key(const AttrSet& x, const RelationDecl& r) {
    return std::any_of(r.candidate_keys.begin(), r.candidate_keys.end(),
                       [&](const AttrSet& k) { return is_subset(k, x); });
}

void finish(NfReport& report) {
    if (!report.witnesses.empty()) report.verdict = Verdict::Violated;
}

}  // namespace

std::vector<FD> project_fds_exhaustive(const std::vector<FD>& fds, const AttrSet& u) {
    if (u.size() > kBcnfMaxAttributes)
        throw BoundExceeded("FD projection needs at most " + std::to_string(kBcnfMaxAttributes) + " attributes");
    FdIndex index(fds);
    std::vector<FD> out;
    for (const auto& x : subsets(u)) {
        auto rhs = set_minus(set_intersect(index.closure(x), u), x);
        if (!rhs.empty()) out.push_back({x, rhs});
    }
    return out;
}

NfReport check_bcnf(const RelationDecl& r, const DependencySet& deps) {
    check_bound(r, kBcnfMaxAttributes, "BCNF");
    NfReport report{r.name, Verdict::Satisfied, {}};
    const AttrSet sort = r.sort_set();
    FdIndex index(deps.fds);
    std::vector<AttrSet> found;
    for (const auto& x : subsets(sort)) {
        if (std::any_of(found.begin(), found.end(), [&](const AttrSet& w) { return is_subset(w, x); })) continue;
        const AttrSet plus = set_intersect(index.closure(x), sort);
        if (plus == sort || contains_key(x, r)) continue;
        const AttrSet rhs = set_minus(plus, x);
        if (rhs.empty()) continue;
        found.push_back(x);
        report.witnesses.push_back({to_string(FD{x, rhs}), "{" + join(x) + "} is not a superkey of " + r.name});
    }
    finish(report);
    return report;
}

NfReport check_improved_bcnf(const RelationalSchema& s, const DependencySet& deps) {
    NfReport report{"schema", Verdict::Satisfied, {}};
    for (const auto& r : s.relations) {
        std::vector<FD> others;
        for (const auto& o : s.relations) {
            if (&o == &r) continue;
            auto p = project_fds_exhaustive(deps.fds, o.sort_set());
            others.insert(others.end(), p.begin(), p.end());
        }
        AttrSet key_attrs;
        for (const auto& k : r.candidate_keys) key_attrs.insert(k.begin(), k.end());
        FdIndex index(others);
        for (const auto& b : r.sort) {
            if (key_attrs.contains(b)) continue;
            for (const auto& k : r.candidate_keys) {
                if (!index.closure(k).contains(b)) continue;
                report.witnesses.push_back({b + " in " + r.name, "restorable from {" + join(k) +
                                                                      "} through the other relations"});
                break;
            }
        }
    }
    finish(report);
    return report;
}

ContextMembers context_members(const CategoryGraph& graph) {
    ContextMembers out;
    for (const auto& [name, decl] : graph.objects())
        if (decl.is_relationship()) out[name] = graph.projection_targets(name);
    return out;
}

NfReport check_4nf(const RelationDecl& r, const DependencySet& deps, const ContextMembers& contexts) {
    check_bound(r, k4nfMaxAttributes, "4NF");
    NfReport report{r.name, Verdict::Satisfied, {}};
    const AttrSet sort = r.sort_set();
    const Universe u{"", sort};

    DependencySet local{project_fds_exhaustive(deps.fds, sort), {}};
    for (const auto& m : deps.mvds) {
        if (!is_subset(m.lhs, sort)) continue;
        if (!m.context.empty()) {
            auto it = contexts.find(m.context);
            if (it == contexts.end() || !is_subset(sort, it->second)) continue;
        }
        local.mvds.push_back({m.lhs, set_intersect(m.rhs, sort), ""});
    }

    const auto all = subsets(sort);
    std::vector<AttrSet> found;
    for (const auto& x : all) {
        if (contains_key(x, r) || mixed_closure(x, local, u) == sort) continue;
        if (std::any_of(found.begin(), found.end(), [&](const AttrSet& w) { return is_subset(w, x); })) continue;
        for (const auto& y : all) {
            if (!set_intersect(x, y).empty() || set_union(x, y) == sort) continue;
            MVD target{x, y, ""};
            if (!chase_implies(local, target, u)) continue;
            found.push_back(x);
            report.witnesses.push_back({join(x) + " ->> " + join(y), "{" + join(x) + "} is not a superkey of " +
                                                                         r.name});
            break;
        }
    }
    finish(report);
    return report;
}

DependencySet checking_dependencies(const CategoryGraph& original, const CategoryGraph& reduced,
                                    const std::vector<FD>& declared, const std::vector<MVD>& mvds) {
    DependencySet out{graph_to_fds(original), mvds};
    auto more = graph_to_fds(reduced);
    out.fds.insert(out.fds.end(), more.begin(), more.end());
    out.fds.insert(out.fds.end(), declared.begin(), declared.end());
    out.fds = canonicalize(out.fds);
    return out;
}

// ---------------------------------------------------------------------------

std::string to_string(const PathFD& fd) {
    std::string out;
    for (std::size_t i = 0; i < fd.lhs.size(); ++i) out += (i ? ", " : "") + fd.lhs[i];
    return out + " -> " + fd.rhs;
}

namespace {

const std::string kRoot = kRootLabel;

bool has_child(const DtdSchema& d, const std::string& tag, const std::string& child) {
    auto it = d.P.find(tag);
    return it != d.P.end() &&
           std::any_of(it->second.begin(), it->second.end(), [&](const DtdFactor& f) { return f.tag == child; });
}

// Element path of `o`: a child of the root, or else a leaf child of the
// first tag that nests it.
std::optional<std::vector<std::string>> locate(const DtdSchema& d, const std::string& o) {
    if (has_child(d, d.root, o)) return std::vector<std::string>{o};
    for (const auto& [tag, model] : d.P)
        if (!tag.empty() && has_child(d, tag, o) && has_child(d, d.root, tag))
            return std::vector<std::string>{tag, o};
    return std::nullopt;
}

std::string path(const std::vector<std::string>& steps, const std::string& last = "") {
    std::string out = kRoot;
    for (const auto& s : steps) out += "." + s;
    if (!last.empty()) out += "." + last;
    return out;
}

std::vector<std::string> split(const std::string& p) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto dot = p.find('.', start);
        out.push_back(p.substr(start, dot - start));
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    return out;
}

bool is_attribute_step(const std::string& s) { return !s.empty() && (s[0] == '@' || s == "#P"); }

// Element steps below the root, or nullopt when the path does not follow
// the DTD.
std::optional<std::vector<std::string>> elements(const DtdSchema& d, const std::vector<std::string>& steps) {
    if (steps.empty() || steps[0] != kRoot) return std::nullopt;
    std::vector<std::string> out;
    std::string parent = d.root;
    for (std::size_t i = 1; i < steps.size(); ++i) {
        const auto& s = steps[i];
        if (is_attribute_step(s)) {
            if (i + 1 != steps.size() || out.empty()) return std::nullopt;
            if (s[0] == '@' && !(d.R.contains(parent) && d.R.at(parent).contains(s))) return std::nullopt;
            break;
        }
        if (!has_child(d, parent, s)) return std::nullopt;
        out.push_back(s);
        parent = s;
    }
    return out;
}

bool once_child(const DtdSchema& d, const std::string& tag, const std::string& child) {
    auto it = d.P.find(tag);
    if (it == d.P.end()) return false;
    return std::count_if(it->second.begin(), it->second.end(),
                         [&](const DtdFactor& f) { return f.tag == child && !f.plus; }) == 1 &&
           std::none_of(it->second.begin(), it->second.end(),
                        [&](const DtdFactor& f) { return f.tag == child && f.plus; });
}

}  // namespace

std::vector<PathFD> derive_xml_fds(const CategoryGraph& graph, const DtdSchema& dtd) {
    std::vector<PathFD> out;
    for (const auto& a : graph.arrows()) {
        auto p = locate(dtd, a.source);
        if (!p) throw Error("arrow " + a.name + ": " + a.source + " has no element in the DTD");
        const bool value = graph.object(a.source).kind == ObjectKind::Attribute || dtd.is_leaf(a.source);
        const std::string lhs = path(*p, value ? "#P" : "@ID");
        std::string rhs;
        if (has_child(dtd, a.source, a.target)) {
            rhs = path(*p, a.target + ".#P");
        } else if (dtd.R.contains(a.source) && dtd.R.at(a.source).contains("@" + a.target + "_ID")) {
            rhs = path(*p, "@" + a.target + "_ID");
        } else if (p->size() == 2 && has_child(dtd, p->front(), a.target)) {
            rhs = path({p->front(), a.target}, "#P");
        } else {
            throw Error("arrow " + a.name + ": " + a.target + " is not reachable from " + a.source + " in the DTD");
        }
        out.push_back({{lhs}, rhs});
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

NfReport check_xml_nf(const DtdSchema& dtd, const std::vector<PathFD>& fds) {
    NfReport report{"dtd", Verdict::Satisfied, {}};
    bool unknown = false;
    for (const auto& fd : fds) {
        auto rsteps = split(fd.rhs);
        auto relems = elements(dtd, rsteps);
        if (!relems) {
            unknown = true;
            report.witnesses.push_back({to_string(fd), "right-hand side is not a path of the DTD"});
            continue;
        }
        const auto& last = rsteps.back();
        if (!is_attribute_step(last) || (last != "#P" && last != "@ID")) continue;
        const std::vector<std::string> p = *relems;

        if (fd.lhs.size() != 1) {
            unknown = true;
            report.witnesses.push_back({to_string(fd), "left-hand side outside the recognized fragment"});
            continue;
        }
        auto lsteps = split(fd.lhs[0]);
        auto lelems = elements(dtd, lsteps);
        if (!lelems) {
            unknown = true;
            report.witnesses.push_back({to_string(fd), "left-hand side is not a path of the DTD"});
            continue;
        }
        // The element whose node X determines, if any.
        std::optional<std::vector<std::string>> owner;
        const auto& ll = lsteps.back();
        if (ll == "@ID") owner = *lelems;
        else if (ll == "#P" && lelems->size() == 1) owner = *lelems;
        else if (!is_attribute_step(ll)) owner = *lelems;

        bool implied = false;
        if (owner) {
            if (p == *owner) implied = true;
            else if (p.size() == owner->size() + 1 && std::equal(owner->begin(), owner->end(), p.begin()))
                implied = once_child(dtd, owner->back(), p.back());
        }
        if (!implied)
            report.witnesses.push_back({to_string(fd), "it is not the case that " + fd.lhs[0] + " -> " + path(p)});
    }
    if (std::any_of(report.witnesses.begin(), report.witnesses.end(),
                    [](const NfWitness& w) { return w.reason.starts_with("it is not"); }))
        report.verdict = Verdict::Violated;
    else if (unknown)
        report.verdict = Verdict::Unknown;
    return report;
}

NfReport check_no_derivable_objects(const CategoryGraph& graph) {
    NfReport report{"graph", Verdict::Satisfied, {}};
    for (const auto& [name, decl] : graph.objects())
        if (decl.is_relationship() && is_derivable(name, graph))
            report.witnesses.push_back({name, "relationship object is derivable from its projections"});
    finish(report);
    return report;
}

}  // namespace catnorm
