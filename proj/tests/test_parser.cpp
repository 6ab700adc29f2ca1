// Copyright 2026 The SPARQAL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "sparqal/procedure.hpp"
#include "sparqal/sparql_text.hpp"
#include "test_support.hpp"

namespace sparqal {
namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> site_names(std::string_view q) {
  std::vector<std::string> out;
  for (const auto& s : scan_qvalues(q)) out.push_back(s.variable);
  return out;
}

TEST(Parser, MetroHasThreeStatements) {
  auto ast = parse_procedure(slurp(test::fixture("procedures/metro.sparqal")));
  ASSERT_EQ(ast.statements.size(), 3u);
  EXPECT_EQ(ast.statements[0].kind, Statement::Kind::Let);
  const auto& loop = ast.statements[1];
  ASSERT_EQ(loop.kind, Statement::Kind::Loop);
  ASSERT_EQ(loop.body.size(), 2u);
  EXPECT_EQ(loop.body[0].target, "adjacent");
  EXPECT_EQ(loop.body[1].target, "reachable");
  EXPECT_EQ(loop.condition.kind, Condition::Kind::Fixpoint);
  EXPECT_EQ(loop.condition.variable, "reachable");
  EXPECT_EQ(ast.statements[2].kind, Statement::Kind::Return);
  EXPECT_TRUE(validate_procedure(ast).empty());
}

TEST(Parser, MinimalProcedure) {
  auto ast = parse_procedure("LET x = (SELECT ?s WHERE { ?s ?p ?o }); RETURN(x);");
  ASSERT_EQ(ast.statements.size(), 2u);
  EXPECT_EQ(ast.statements[0].kind, Statement::Kind::Let);
  EXPECT_EQ(ast.statements[0].query.text, "SELECT ?s WHERE { ?s ?p ?o }");
  EXPECT_EQ(ast.statements[1].kind, Statement::Kind::Return);
}

TEST(Parser, ZikaProcedureShape) {
  auto ast = parse_procedure(slurp(test::fixture("procedures/zika.sparqal")));
  ASSERT_EQ(ast.statements.size(), 8u);
  int lets = 0;
  for (const auto& s : ast.statements) lets += s.kind == Statement::Kind::Let;
  EXPECT_EQ(lets, 6);  // five before the loop, one after
  const auto& loop = ast.statements[5];
  ASSERT_EQ(loop.kind, Statement::Kind::Loop);
  EXPECT_EQ(loop.body.size(), 3u);
  EXPECT_EQ(loop.condition.kind, Condition::Kind::Times);
  EXPECT_EQ(loop.condition.times, 10u);
  EXPECT_EQ(site_names(loop.body[0].query.text), (std::vector<std::string>{"degree", "rank", "zika"}));
  EXPECT_TRUE(validate_procedure(ast).empty());
}

TEST(Parser, QvaluesSites) {
  EXPECT_TRUE(site_names(R"q(SELECT ?s WHERE { BIND("QVALUES(x)" AS ?s) })q").empty());
  EXPECT_TRUE(site_names("SELECT ?s WHERE { BIND('''QVALUES(x)''' AS ?s) }").empty());
  EXPECT_TRUE(site_names("SELECT ?s WHERE { ?s ?p ?o } # QVALUES(x)\n").empty());
  EXPECT_TRUE(site_names("SELECT ?s WHERE { ?s <http://x/QVALUES(x)> ?o }").empty());
  EXPECT_EQ(site_names("SELECT ?s WHERE { { QVALUES(a) } UNION { QVALUES(b) } }"),
            (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(site_names("SELECT * { qvalues( a ) }"), (std::vector<std::string>{"a"}));
  auto sites = scan_qvalues("{ QVALUES(r) }");
  ASSERT_EQ(sites.size(), 1u);
  EXPECT_EQ(sites[0].begin, 2u);
  EXPECT_EQ(sites[0].end, 12u);
  EXPECT_THROW(scan_qvalues("{ QVALUES r }"), ProcedureSyntaxError);
  EXPECT_THROW(scan_qvalues("{ QVALUES() }"), ProcedureSyntaxError);
  EXPECT_THROW(scan_qvalues("{ QVALUES(a }"), ProcedureSyntaxError);
}

TEST(Parser, ScanIsCompositional) {
  std::string a = "SELECT * { QVALUES(x) \"QVALUES(y)\" . ";
  std::string b = "# QVALUES(z)\n QVALUES(w) }";
  auto whole = site_names(a + b);
  auto left = site_names(a);
  auto right = site_names(b);
  left.insert(left.end(), right.begin(), right.end());
  EXPECT_EQ(whole, left);
}

TEST(Parser, SyntaxErrors) {
  auto line_of = [](const char* src) {
    try {
      parse_procedure(src);
    } catch (const ProcedureSyntaxError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  EXPECT_EQ(line_of("LET x = (SELECT ?s WHERE { ?s ?p ?o }\nRETURN(x);"), 1u);
  EXPECT_EQ(line_of("LET x = (SELECT ?s WHERE { ?s ?p ?o })\nRETURN(x);"), 2u);
  EXPECT_EQ(line_of("LET x = (SELECT * {});\nFOO(x);"), 2u);
  EXPECT_EQ(line_of("LET x = (SELECT * {});\nDO ( LET x = (SELECT * {}); ) WHILE (SOMETIMES);\nRETURN(x);"), 2u);
  EXPECT_EQ(line_of("LET x = (SELECT * {});\nDO ( LET x = (SELECT * {}); ) WHILE (TIMES 0);\nRETURN(x);"), 2u);
  EXPECT_EQ(line_of("LET x = (SELECT * {});\nDO ( ) WHILE (TIMES 1);\nRETURN(x);"), 2u);
  EXPECT_EQ(line_of("LET x = (SELECT * { FILTER(\"(\" = \"a\") });\nRETURN(x);"), 0u);
  EXPECT_EQ(line_of("LET x = (SELECT * {\n QVALUES x });\nRETURN(x);"), 2u);
}

TEST(Parser, ConditionsAndAnnotations) {
  auto ast = parse_procedure(R"(
    LET x = (SELECT ?v WHERE { VALUES ?v { 1 } });
    LET y = (SELECT ?v ?w WHERE { QVALUES(x) ?v ?p ?w }) MAP(?v, [SELECT ?n WHERE { ?n ?p ?v } | SELECT ?m WHERE { ?v (<a>|<b>) ?m }]) reduce(union);
    do ( LET x = (SELECT * { QVALUES(x) }); ) while (times(3));
    DO ( LET x = (SELECT * { QVALUES(x) }); ) WHILE (ASK { QVALUES(x) FILTER(?v > 2) });
    RETURN(y);
  )");
  ASSERT_EQ(ast.statements.size(), 5u);
  ASSERT_TRUE(ast.statements[1].batch.has_value());
  EXPECT_EQ(ast.statements[1].batch->map.split_var, "v");
  EXPECT_EQ(ast.statements[1].batch->map.selectors,
            (std::vector<std::string>{"SELECT ?n WHERE { ?n ?p ?v }", "SELECT ?m WHERE { ?v (<a>|<b>) ?m }"}));
  EXPECT_EQ(ast.statements[2].condition.times, 3u);
  EXPECT_EQ(ast.statements[3].condition.kind, Condition::Kind::Ask);
  EXPECT_EQ(ast.statements[3].condition.query.form, QueryForm::Ask);
  EXPECT_EQ(site_names(ast.statements[3].condition.query.text), std::vector<std::string>{"x"});
  EXPECT_TRUE(validate_procedure(ast).empty());
}

TEST(Parser, RoundTrip) {
  for (const char* name : {"procedures/metro.sparqal", "procedures/zika.sparqal"}) {
    auto ast = parse_procedure(slurp(test::fixture(name)));
    auto again = parse_procedure(print_procedure(ast));
    EXPECT_TRUE(same_structure(ast, again)) << name;
    EXPECT_EQ(print_procedure(again), print_procedure(ast));
  }
  auto ast = parse_procedure(
      "LET x = (SELECT ?v { VALUES ?v {1} }) MAP(?v, [SELECT ?v {}]) REDUCE(UNION);"
      "DO (LET x = (SELECT * {QVALUES(x)});) WHILE (ASK {QVALUES(x)}); RETURN(x);");
  EXPECT_TRUE(same_structure(ast, parse_procedure(print_procedure(ast))));
}

TEST(Validation, UnassignedReturn) {
  auto report = validate_procedure(parse_procedure("LET x = (SELECT * {}); RETURN(y);"));
  ASSERT_EQ(report.size(), 1u);
  EXPECT_EQ(report[0].kind, "unassigned variable");
}

TEST(Validation, ReturnNotLast) {
  auto report = validate_procedure(parse_procedure("LET x = (SELECT * {}); RETURN(x); LET y = (SELECT * {});"));
  ASSERT_EQ(report.size(), 1u);
  EXPECT_EQ(report[0].kind, "return not last");
}

TEST(Validation, OtherViolations) {
  auto kinds = [](const char* src) {
    std::vector<std::string> out;
    for (const auto& v : validate_procedure(parse_procedure(src))) out.push_back(v.kind);
    return out;
  };
  EXPECT_EQ(kinds("LET x = (SELECT * {});"), std::vector<std::string>{"missing return"});
  EXPECT_EQ(kinds("LET x = (SELECT * { QVALUES(x) }); RETURN(x);"), std::vector<std::string>{"unassigned variable"});
  EXPECT_EQ(kinds("LET x = (SELECT * {}); DO (RETURN(x);) WHILE (TIMES 1); RETURN(x);"),
            std::vector<std::string>{"return not last"});
  EXPECT_EQ(kinds("LET x = (ASK {}); RETURN(x);"), std::vector<std::string>{"query form"});
  EXPECT_EQ(kinds("LET x = (SELECT * {}); DO (LET x = (SELECT * {});) WHILE (FIXPOINT(z)); RETURN(x);"),
            std::vector<std::string>{"unassigned variable"});
  // variables assigned inside an earlier loop body count as assigned
  EXPECT_TRUE(kinds("LET x = (SELECT * {}); DO (LET y = (SELECT * {});) WHILE (TIMES 1); "
                    "DO (LET y = (SELECT * {QVALUES(y)});) WHILE (ASK {QVALUES(y)}); RETURN(y);")
                  .empty());
  EXPECT_TRUE(kinds("LET x = (PREFIX ex: <http://e/> SELECT * {}); RETURN(x);").empty());
}

TEST(Text, SubstituteVariable) {
  EXPECT_EQ(text::substitute_variable("SELECT ?n { ?n ?p ?cite . ?cite2 ?q $cite . FILTER(\"?cite\") }", "cite",
                                      "<http://x>"),
            "SELECT ?n { ?n ?p <http://x> . ?cite2 ?q <http://x> . FILTER(\"?cite\") }");
  EXPECT_TRUE(text::mentions_variable("{ ?a ?b ?v }", "v"));
  EXPECT_FALSE(text::mentions_variable("{ ?a ?b ?vv }", "v"));
}

}  // namespace
}  // namespace sparqal
