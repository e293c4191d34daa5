#include <gtest/gtest.h>

#include "catnorm/schema.hpp"
#include "support.hpp"

using namespace catnorm;
using catnorm::testing::load_data;
using catnorm::testing::set_of;

namespace {

bool has_code(const std::vector<Violation>& vs, const std::string& code) {
    for (const auto& v : vs)
        if (v.code == code) return true;
    return false;
}

}  // namespace

TEST(Parse, TransitiveDocument) {
    auto s = load_data("transitive.json");
    EXPECT_EQ(s.graph.objects().size(), 5u);
    EXPECT_EQ(s.graph.arrows().size(), 4u);
    ASSERT_EQ(s.deps.fds.size(), 1u);
    EXPECT_EQ(to_string(s.deps.fds[0]), "B -> C");
    EXPECT_EQ(s.graph.object("D").members, set_of({"A", "E"}));
}

TEST(Parse, EmptyDocument) {
    auto s = parse_schema("{}");
    EXPECT_TRUE(s.graph.objects().empty());
    EXPECT_TRUE(s.graph.arrows().empty());
    EXPECT_TRUE(s.deps.fds.empty());
    EXPECT_TRUE(s.deps.mvds.empty());
}

TEST(Parse, UndeclaredEndpoint) {
    const char* doc = R"({"objects":[{"name":"A","kind":"entity"}],
        "arrows":[{"name":"f","source":"A","target":"Z"}]})";
    try {
        parse_schema(doc);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("undeclared object Z"), std::string::npos) << e.what();
    }
}

TEST(Parse, DuplicateObject) {
    const char* doc = R"({"objects":[{"name":"A","kind":"entity"},{"name":"A","kind":"attribute"}]})";
    EXPECT_THROW(parse_schema(doc), ParseError);
}

TEST(Parse, UnknownKeyRejected) {
    EXPECT_THROW(parse_schema(R"({"objects":[], "extra": 1})"), ParseError);
    EXPECT_THROW(parse_schema(R"({"objects":[{"name":"A","kind":"entity","colour":"red"}]})"), ParseError);
}

TEST(Parse, SyntaxErrorPosition) {
    try {
        parse_schema("{\n  \"objects\": [\n    {\"name\": }\n  ]\n}");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_GT(e.column(), 0u);
    }
}

TEST(Parse, BadKind) {
    EXPECT_THROW(parse_schema(R"({"objects":[{"name":"A","kind":"table"}]})"), ParseError);
}

TEST(Parse, RoundTrip) {
    for (const char* name : {"transitive.json", "multivalued.json", "empty.json"}) {
        auto s = load_data(name);
        auto text = serialize_schema(s.graph, s.deps);
        auto again = parse_schema(text);
        EXPECT_EQ(again.graph, s.graph) << name;
        EXPECT_EQ(again.deps, s.deps) << name;
        EXPECT_EQ(serialize_schema(again.graph, again.deps), text) << name;
    }
}

TEST(Validate, MultivaluedIsClean) {
    auto s = load_data("multivalued.json");
    auto report = validate(s.graph, s.deps);
    EXPECT_TRUE(report.valid());
    EXPECT_TRUE(report.violations.empty());
}

TEST(Validate, Thinness) {
    auto s = parse_schema(R"({"objects":[{"name":"A","kind":"entity"},{"name":"B","kind":"attribute"}],
        "arrows":[{"name":"f","source":"A","target":"B"},{"name":"g","source":"A","target":"B"}]})");
    auto report = validate(s.graph, s.deps);
    ASSERT_FALSE(report.valid());
    EXPECT_TRUE(has_code(report.violations, "thinness"));
}

TEST(Validate, ContextViolation) {
    auto s = parse_schema(R"({"objects":[{"name":"A","kind":"entity"},{"name":"B","kind":"entity"},
        {"name":"C","kind":"entity"},{"name":"X","kind":"relationship"}],
        "arrows":[{"name":"p","source":"X","target":"A","projection":true},
                  {"name":"q","source":"X","target":"C","projection":true}],
        "mvds":[{"lhs":["A"],"rhs":["B"],"context":"X"}]})");
    auto report = validate(s.graph, s.deps);
    EXPECT_TRUE(has_code(report.violations, "context"));
}

TEST(Validate, ProjectionFromEntity) {
    auto s = parse_schema(R"({"objects":[{"name":"A","kind":"entity"},{"name":"B","kind":"attribute"}],
        "arrows":[{"name":"p","source":"A","target":"B","projection":true}]})");
    EXPECT_TRUE(has_code(validate(s.graph, s.deps).violations, "projection-source"));
}

TEST(Validate, EntityWithoutAttributesWarns) {
    auto s = parse_schema(R"({"objects":[{"name":"A","kind":"entity"}]})");
    auto report = validate(s.graph, s.deps);
    EXPECT_TRUE(report.valid());
    EXPECT_TRUE(has_code(report.warnings, "no-attributes"));
}

TEST(GraphToFds, Transitive) {
    auto s = load_data("transitive.json");
    auto fds = graph_to_fds(s.graph);
    std::set<std::string> got;
    for (const auto& fd : fds) got.insert(to_string(fd));
    std::set<std::string> want{"D -> E", "D -> A", "A -> B", "A -> C", "D -> A,E", "A,E -> D"};
    EXPECT_EQ(got, want);
}

TEST(GraphToFds, Multivalued) {
    auto s = load_data("multivalued.json");
    auto fds = graph_to_fds(s.graph);
    std::set<std::string> got;
    for (const auto& fd : fds) got.insert(to_string(fd));
    std::set<std::string> want{"X -> A", "X -> B", "X -> C", "X -> D", "B -> C", "X -> A,B,C,D", "A,B,C,D -> X"};
    EXPECT_EQ(got, want);
    EXPECT_EQ(fds.size(), s.graph.arrows().size() + 2);
}

TEST(GraphToFds, NoArrows) {
    auto s = parse_schema(R"({"objects":[{"name":"A","kind":"entity"}]})");
    EXPECT_TRUE(graph_to_fds(s.graph).empty());
}

TEST(Canonicalize, SplitsAndDropsTrivial) {
    auto out = canonicalize({{set_of({"A"}), set_of({"A", "B", "C"})}, {set_of({"A"}), set_of({"B"})}});
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(to_string(out[0]), "A -> B");
    EXPECT_EQ(to_string(out[1]), "A -> C");
}
