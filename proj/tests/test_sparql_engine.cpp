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

#include "sparqal/backend.hpp"
#include "sparqal/sparql/parser.hpp"
#include "test_support.hpp"

namespace sparqal {
namespace {

using test::ex;
using test::iri;

class EngineTest : public ::testing::Test {
 protected:
  void SetUp() override { ds_ = load_dataset(test::fixture("zika.nt")); }

  SolutionSequence select(const std::string& q) { return eval_select(ds_, q); }

  DatasetHandle ds_;
};

TEST_F(EngineTest, BasicPattern) {
  auto r = select("SELECT ?s WHERE { ?s wdt:P2860 :a1 }");
  EXPECT_EQ(r.variables(), std::vector<std::string>{"s"});
  EXPECT_TRUE(sequences_equal_as_sets(r, test::column("s", {ex("a2"), ex("a3"), ex("a4")})));
}

TEST_F(EngineTest, OutDegreeGroupBy) {
  auto r = select(
      "SELECT ?node (COUNT(?cite) AS ?degree) WHERE { ?node wdt:P2860 ?cite } GROUP BY ?node");
  std::vector<SolutionMapping> expected = {
      {{"node", ex("a2")}, {"degree", Term::integer(1)}},
      {{"node", ex("a3")}, {"degree", Term::integer(1)}},
      {{"node", ex("a4")}, {"degree", Term::integer(2)}},
      {{"node", ex("a1")}, {"degree", Term::integer(1)}},
  };
  EXPECT_TRUE(sequences_equal_as_multisets(r, SolutionSequence::from_mappings({"node", "degree"}, expected)));
}

TEST_F(EngineTest, CountOverEmptyValues) {
  auto r = select("SELECT (COUNT(*) AS ?n) WHERE { VALUES (?x) { } }");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r.rows()[0][0], Term::integer(0));
}

TEST_F(EngineTest, AskValues) {
  EXPECT_TRUE(eval_ask(ds_, "ASK { VALUES (?x) { (1) } }"));
  EXPECT_FALSE(eval_ask(ds_, "ASK { VALUES (?x) { } }"));
}

TEST_F(EngineTest, InitialRankIsOneFifth) {
  auto r = select(R"(
    SELECT ?node (1.0/?n AS ?rank) WHERE {
      { SELECT DISTINCT ?node WHERE { { ?node wdt:P2860 ?c } UNION { ?c wdt:P2860 ?node } } }
      { SELECT (COUNT(DISTINCT ?x) AS ?n) WHERE { { ?x wdt:P2860 ?y } UNION { ?y wdt:P2860 ?x } } }
    })");
  ASSERT_EQ(r.size(), 5u);
  for (const auto& row : r.rows()) EXPECT_EQ(row[1], Term::decimal(0.2));
}

TEST_F(EngineTest, OptionalMinusFilterBind) {
  auto r = select(R"(
    SELECT ?a ?b ?k WHERE {
      ?a wdt:P31 wd:Q13442814 .
      OPTIONAL { ?a wdt:P2860 ?b FILTER(?b != :a5) }
      MINUS { ?a wdt:P921 ?t . FILTER(?a = :a3) }
      BIND(IF(BOUND(?b), 1, 0) AS ?k)
    })");
  // a1 (no non-a5 citation), a2->a1, a4->a1, a5, b1 ; a3 removed by MINUS
  EXPECT_EQ(r.size(), 5u);
  int bound = 0;
  for (const auto& row : r.rows())
    if (row[1]) ++bound;
  EXPECT_EQ(bound, 2);
}

TEST_F(EngineTest, PropertyPaths) {
  auto r = select("SELECT ?x WHERE { :a2 wdt:P2860+ ?x }");
  EXPECT_TRUE(sequences_equal_as_sets(r, test::column("x", {ex("a1"), ex("a5")})));
  auto star = select("SELECT ?x WHERE { ?x wdt:P2860* :a1 }");
  EXPECT_TRUE(sequences_equal_as_sets(star, test::column("x", {ex("a1"), ex("a2"), ex("a3"), ex("a4")})));
  auto inv = select("SELECT ?x WHERE { :a5 ^wdt:P2860/^wdt:P2860 ?x }");
  EXPECT_TRUE(sequences_equal_as_sets(inv, test::column("x", {ex("a2"), ex("a3"), ex("a4")})));
}

TEST_F(EngineTest, OrderLimitAndAggregates) {
  auto r = select(R"(
    SELECT ?author (COUNT(?node) AS ?n) (GROUP_CONCAT(?l; SEPARATOR="|") AS ?labels) WHERE {
      ?node wdt:P50 ?author . ?author rdfs:label ?l
    } GROUP BY ?author ORDER BY DESC(?n) ?author LIMIT 2)");
  ASSERT_EQ(r.size(), 2u);
  auto rows = r.rows();
  EXPECT_EQ(rows[0][0], ex("ada"));
  EXPECT_EQ(rows[1][0], ex("ben"));
  EXPECT_EQ(rows[0][2], Term::literal("Ada Byron|Ada Byron"));
}

TEST_F(EngineTest, StringFunctions) {
  auto r = select(R"(SELECT ?v WHERE { BIND(CONCAT(UCASE("ab"), STR(:x), ENCODE_FOR_URI("a b")) AS ?v) })");
  EXPECT_EQ(r.rows()[0][0], Term::literal("ABhttp://example.org/xa%20b"));
  auto s = select(R"(SELECT ?v WHERE { BIND(SUBSTR("hello", 2, 3) AS ?v) })");
  EXPECT_EQ(s.rows()[0][0], Term::literal("ell"));
}

TEST_F(EngineTest, ArithmeticTypes) {
  auto r = select("SELECT ?a ?b ?c ?d WHERE { BIND(1+2 AS ?a) BIND(1/2 AS ?b) BIND(2*1.5 AS ?c) BIND(1e0+1 AS ?d) }");
  auto row = r.rows()[0];
  EXPECT_EQ(row[0], Term::integer(3));
  EXPECT_EQ(row[1], Term::decimal(0.5));
  EXPECT_EQ(row[2], Term::decimal(3.0));
  EXPECT_EQ(row[3], Term::double_value(2.0));
}

TEST_F(EngineTest, SyntaxErrorCarriesQuery) {
  try {
    select("SELECT ?x WHERE { ?x ?y }");
    FAIL();
  } catch (const QueryError& e) {
    EXPECT_NE(std::string(e.what()).find("SELECT ?x WHERE"), std::string::npos);
  }
}

TEST_F(EngineTest, AliasOverridesInScopeVariable) {
  auto r = select("SELECT (?cite AS ?node) WHERE { VALUES (?node ?cite) { (:a2 :a1) (:a4 :a5) } }");
  EXPECT_TRUE(sequences_equal_as_sets(r, test::column("node", {ex("a1"), ex("a5")})));
}

TEST_F(EngineTest, NegativeNumbersAndComparison) {
  auto r = select("SELECT ?p WHERE { VALUES (?p) { (-2) (-1) (0) } FILTER(?p<-1) }");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r.rows()[0][0], Term::integer(-2));
  auto s = select("SELECT (?p -1 AS ?q) WHERE { VALUES (?p) { (3) } }");
  EXPECT_EQ(s.rows()[0][0], Term::integer(2));
}

}  // namespace
}  // namespace sparqal
