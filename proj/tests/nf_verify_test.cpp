#include <gtest/gtest.h>

#include <random>

#include "catnorm/emitters.hpp"
#include "catnorm/fd_engine.hpp"
#include "catnorm/mvd_engine.hpp"
#include "catnorm/nf_verify.hpp"
#include "catnorm/reducer.hpp"
#include "support.hpp"

using namespace catnorm;
using namespace catnorm::testing;

namespace {

RelationDecl relation(const std::string& name, std::vector<std::string> sort, std::vector<AttrSet> keys) {
    RelationDecl r;
    r.name = name;
    r.origin = name;
    r.sort = std::move(sort);
    r.candidate_keys = std::move(keys);
    return r;
}

FD fd(std::initializer_list<const char*> l, std::initializer_list<const char*> r) { return {set_of(l), set_of(r)}; }

// Brute force over all subsets with the naive closure.
bool bcnf_oracle(const RelationDecl& r, const std::vector<FD>& fds) {
    const auto sort = r.sort_set();
    const std::vector<std::string> names(sort.begin(), sort.end());
    for (std::size_t m = 1; m < (1u << names.size()); ++m) {
        AttrSet x;
        for (std::size_t i = 0; i < names.size(); ++i)
            if (m & (1u << i)) x.insert(names[i]);
        auto plus = set_intersect(naive_closure(x, fds), sort);
        bool key = plus == sort;
        for (const auto& k : r.candidate_keys) key |= is_subset(k, x);
        if (!key && plus != x) return false;
    }
    return true;
}

// A violation exists iff some non-superkey X has a dependency basis with two
// or more blocks.
bool fourth_nf_oracle(const RelationDecl& r, const DependencySet& local) {
    const auto sort = r.sort_set();
    const Universe u{"", sort};
    const std::vector<std::string> names(sort.begin(), sort.end());
    for (std::size_t m = 1; m < (1u << names.size()); ++m) {
        AttrSet x;
        for (std::size_t i = 0; i < names.size(); ++i)
            if (m & (1u << i)) x.insert(names[i]);
        bool key = chase_implies(local, FD{x, sort}, u);
        for (const auto& k : r.candidate_keys) key |= is_subset(k, x);
        if (!key && dependency_basis(x, local, u).blocks.size() >= 2) return false;
    }
    return true;
}

}  // namespace

TEST(Bcnf, ReducedTransitiveSatisfied) {
    auto s = load_data("transitive.json");
    auto red = first_reduced(s.graph, s.deps.fds).graph;
    auto deps = checking_dependencies(s.graph, red, s.deps.fds, {});
    for (const auto& r : emit_relational(red).relations)
        EXPECT_EQ(check_bcnf(r, deps).verdict, Verdict::Satisfied) << r.name;
}

TEST(Bcnf, UnreducedTransitiveViolated) {
    auto s = load_data("transitive.json");
    auto rs = emit_relational(s.graph);
    auto deps = checking_dependencies(s.graph, s.graph, s.deps.fds, {});
    const auto* a = rs.find("A");
    ASSERT_NE(a, nullptr);
    EXPECT_EQ(a->sort_set(), set_of({"A", "B", "C"}));
    auto report = check_bcnf(*a, deps);
    EXPECT_EQ(report.verdict, Verdict::Violated);
    ASSERT_EQ(report.witnesses.size(), 1u);
    EXPECT_EQ(report.witnesses[0].dependency, "B -> C");
}

TEST(Bcnf, NoDependencies) {
    EXPECT_EQ(check_bcnf(relation("R", {"A", "B", "C"}, {set_of({"A", "B", "C"})}), {}).verdict,
              Verdict::Satisfied);
}

TEST(Bcnf, Bound) {
    std::vector<std::string> sort;
    for (int i = 0; i < 13; ++i) sort.push_back("A" + std::to_string(i));
    EXPECT_THROW(check_bcnf(relation("R", sort, {}), {}), BoundExceeded);
}

TEST(Bcnf, AgreesWithBruteForce) {
    std::mt19937 rng(7);
    const std::vector<std::string> pool{"A", "B", "C", "D", "E", "F"};
    int violated = 0;
    for (int trial = 0; trial < 400; ++trial) {
        std::vector<std::string> sort;
        for (const auto& a : pool)
            if (rng() % 3) sort.push_back(a);
        if (sort.empty()) continue;
        std::vector<FD> fds;
        for (int i = rng() % 6; i > 0; --i) {
            FD f;
            for (int k = 1 + rng() % 2; k > 0; --k) f.lhs.insert(pool[rng() % pool.size()]);
            f.rhs.insert(pool[rng() % pool.size()]);
            fds.push_back(f);
        }
        std::vector<AttrSet> keys;
        if (rng() % 2) keys.push_back({sort[rng() % sort.size()]});
        auto r = relation("R", sort, keys);
        auto report = check_bcnf(r, {fds, {}});
        EXPECT_EQ(report.verdict == Verdict::Satisfied, bcnf_oracle(r, fds)) << trial;
        EXPECT_EQ(report.verdict == Verdict::Violated, !report.witnesses.empty());
        violated += report.verdict == Verdict::Violated;
    }
    EXPECT_GT(violated, 20);
}

TEST(ImprovedBcnf, SuperfluousAttribute) {
    RelationalSchema s;
    s.relations = {relation("T1", {"A", "B", "C", "D"}, {set_of({"A", "B"})}),
                   relation("T2", {"A", "E"}, {set_of({"A"})}), relation("T3", {"B", "F"}, {set_of({"B"})}),
                   relation("T4", {"E", "F", "C"}, {set_of({"E", "F"})})};
    DependencySet deps{{fd({"A", "B"}, {"C", "D"}), fd({"A"}, {"E"}), fd({"B"}, {"F"}), fd({"E", "F"}, {"C"})}, {}};
    for (const auto& r : s.relations) EXPECT_EQ(check_bcnf(r, deps).verdict, Verdict::Satisfied) << r.name;
    auto report = check_improved_bcnf(s, deps);
    EXPECT_EQ(report.verdict, Verdict::Violated);
    ASSERT_EQ(report.witnesses.size(), 1u);
    EXPECT_EQ(report.witnesses[0].dependency, "C in T1");
}

TEST(ImprovedBcnf, ReducedTransitiveSatisfied) {
    auto s = load_data("transitive.json");
    auto red = first_reduced(s.graph, s.deps.fds).graph;
    auto deps = checking_dependencies(s.graph, red, s.deps.fds, {});
    EXPECT_EQ(check_improved_bcnf(emit_relational(red), deps).verdict, Verdict::Satisfied);
}

TEST(ImprovedBcnf, SingleRelation) {
    RelationalSchema s;
    s.relations = {relation("R", {"A", "B"}, {set_of({"A"})})};
    EXPECT_EQ(check_improved_bcnf(s, {{fd({"A"}, {"B"})}, {}}).verdict, Verdict::Satisfied);
}

TEST(ImprovedBcnf, ImpliesBcnfOnRandomSchemas) {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        auto s = random_schema(rng);
        auto red = first_reduced(s.graph, s.deps.fds).graph;
        auto deps = checking_dependencies(s.graph, red, s.deps.fds, {});
        auto rs = emit_relational(red);
        if (check_improved_bcnf(rs, deps).verdict != Verdict::Satisfied) continue;
        for (const auto& r : rs.relations) EXPECT_EQ(check_bcnf(r, deps).verdict, Verdict::Satisfied);
    }
}

TEST(FourthNf, UnreducedMultivaluedViolated) {
    auto s = load_data("multivalued.json");
    auto rs = emit_relational(s.graph);
    const auto* x = rs.find("X");
    ASSERT_NE(x, nullptr);
    EXPECT_EQ(x->sort_set(), set_of({"A", "B", "C", "D"}));
    auto deps = checking_dependencies(s.graph, s.graph, s.deps.fds, s.deps.mvds);
    auto report = check_4nf(*x, deps, context_members(s.graph));
    EXPECT_EQ(report.verdict, Verdict::Violated);
    ASSERT_FALSE(report.witnesses.empty());
    EXPECT_EQ(report.witnesses[0].dependency, "A ->> B");
}

TEST(FourthNf, ReducedMultivaluedSatisfied) {
    auto s = load_data("multivalued.json");
    auto result = second_reduced(s.graph, s.deps.fds, s.deps.mvds);
    auto deps = checking_dependencies(s.graph, result.graph, s.deps.fds, result.mvds);
    auto contexts = context_members(result.graph);
    for (const auto& r : emit_relational(result.graph).relations)
        EXPECT_EQ(check_4nf(r, deps, contexts).verdict, Verdict::Satisfied) << r.name;
}

TEST(FourthNf, TwoAttributes) {
    DependencySet deps{{}, {MVD{set_of({"A"}), set_of({"B"}), ""}}};
    EXPECT_EQ(check_4nf(relation("R", {"A", "B"}, {set_of({"A", "B"})}), deps).verdict, Verdict::Satisfied);
}

TEST(FourthNf, MvdOutsideContextIgnored) {
    DependencySet deps{{}, {MVD{set_of({"A"}), set_of({"B"}), "Y"}}};
    auto r = relation("R", {"A", "B", "C"}, {set_of({"A", "B", "C"})});
    EXPECT_EQ(check_4nf(r, deps, {{"Y", set_of({"A", "B", "D"})}}).verdict, Verdict::Satisfied);
    EXPECT_EQ(check_4nf(r, deps, {{"Y", set_of({"A", "B", "C"})}}).verdict, Verdict::Violated);
}

TEST(FourthNf, AgreesWithDirectEnumeration) {
    std::mt19937 rng(11);
    const std::vector<std::string> pool{"A", "B", "C", "D", "E"};
    int violated = 0;
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::string> sort;
        for (const auto& a : pool)
            if (rng() % 4) sort.push_back(a);
        if (sort.size() < 2) continue;
        auto pick = [&] { return sort[rng() % sort.size()]; };
        DependencySet local;
        for (int i = rng() % 3; i > 0; --i) local.fds.push_back({{pick()}, {pick()}});
        for (int i = 1 + rng() % 2; i > 0; --i) local.mvds.push_back({{pick()}, {pick(), pick()}, ""});
        auto r = relation("R", sort, {});
        r.candidate_keys.push_back(r.sort_set());
        DependencySet projected{project_fds_exhaustive(local.fds, r.sort_set()), local.mvds};
        auto report = check_4nf(r, local);
        EXPECT_EQ(report.verdict == Verdict::Satisfied, fourth_nf_oracle(r, projected)) << trial;
        violated += report.verdict == Verdict::Violated;
    }
    EXPECT_GT(violated, 20);
}

TEST(XmlFds, Transitive) {
    auto s = load_data("transitive.json");
    auto red = first_reduced(s.graph, s.deps.fds).graph;
    auto dtd = emit_dtd(red);
    auto fds = derive_xml_fds(red, dtd);
    EXPECT_EQ(fds.size(), red.arrows().size());
    const std::string e = kRootLabel;
    EXPECT_NE(std::find(fds.begin(), fds.end(), PathFD{{e + ".B.#P"}, e + ".B.C.#P"}), fds.end());
    EXPECT_NE(std::find(fds.begin(), fds.end(), PathFD{{e + ".D.@ID"}, e + ".D.@A_ID"}), fds.end());
    EXPECT_EQ(check_xml_nf(dtd, fds).verdict, Verdict::Satisfied);
}

TEST(XmlFds, NoArrows) {
    CategoryGraph g;
    g.add_object({"A", ObjectKind::Entity});
    auto dtd = emit_dtd(g);
    EXPECT_TRUE(derive_xml_fds(g, dtd).empty());
    EXPECT_EQ(check_xml_nf(dtd, {}).verdict, Verdict::Satisfied);
}

namespace {

// Student elements nest BirthYear and Age as leaves.
DtdSchema student_dtd() {
    DtdSchema d;
    d.L = set_of({"Student", "BirthYear", "Age"});
    d.T = set_of({"@ID"});
    d.P[""] = {{"Student", true}};
    d.P["Student"] = {{"BirthYear", false}, {"Age", false}};
    d.R["Student"] = set_of({"@ID"});
    return d;
}

}  // namespace

TEST(XmlNf, StudentViolated) {
    auto s = load_data("student.json");
    auto dtd = student_dtd();
    auto fds = derive_xml_fds(s.graph, dtd);
    const std::string e = kRootLabel;
    PathFD by_age{{e + ".Student.BirthYear.#P"}, e + ".Student.Age.#P"};
    EXPECT_NE(std::find(fds.begin(), fds.end(), by_age), fds.end());
    auto report = check_xml_nf(dtd, fds);
    EXPECT_EQ(report.verdict, Verdict::Violated);
    ASSERT_EQ(report.witnesses.size(), 1u);
    EXPECT_EQ(report.witnesses[0].dependency, to_string(by_age));
    EXPECT_EQ(report.witnesses[0].reason, "it is not the case that " + by_age.lhs[0] + " -> " + e + ".Student.Age");
}

TEST(XmlNf, OutsideFragmentIsUnknown) {
    auto dtd = student_dtd();
    const std::string e = kRootLabel;
    PathFD two{{e + ".Student.BirthYear.#P", e + ".Student.Age.#P"}, e + ".Student.@ID"};
    EXPECT_EQ(check_xml_nf(dtd, {two}).verdict, Verdict::Unknown);
    PathFD bad{{e + ".Nope.#P"}, e + ".Student.@ID"};
    EXPECT_EQ(check_xml_nf(dtd, {bad}).verdict, Verdict::Unknown);
}

TEST(XmlNf, RandomReducedSatisfied) {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 300; ++trial) {
        auto s = random_schema(rng);
        auto red = first_reduced(s.graph, s.deps.fds).graph;
        auto dtd = emit_dtd(red);
        auto report = check_xml_nf(dtd, derive_xml_fds(red, dtd));
        EXPECT_EQ(report.verdict, Verdict::Satisfied) << (report.witnesses.empty() ? "" : report.witnesses[0].reason);
    }
}

TEST(Structural, DerivableObjectFlagged) {
    auto s = load_data("multivalued.json");
    auto closed = fd_mvd_closure_graph(s.graph, s.deps.fds, s.deps.mvds);
    auto report = check_no_derivable_objects(closed);
    EXPECT_EQ(report.verdict, Verdict::Violated);
    ASSERT_EQ(report.witnesses.size(), 1u);
    EXPECT_EQ(report.witnesses[0].dependency, "X");
    auto reduced = second_reduced(s.graph, s.deps.fds, s.deps.mvds).graph;
    EXPECT_EQ(check_no_derivable_objects(reduced).verdict, Verdict::Satisfied);
}

TEST(Report, Json) {
    NfReport r{"R", Verdict::Violated, {{"B -> C", "why"}}};
    EXPECT_EQ(r.to_json().dump(),
              R"({"subject":"R","verdict":"violated","witnesses":[{"dependency":"B -> C","reason":"why"}]})");
}
