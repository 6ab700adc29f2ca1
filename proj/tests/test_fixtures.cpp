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

#include "sparqal/bench.hpp"
#include "sparqal/fixtures.hpp"
#include "test_support.hpp"

namespace sparqal {
namespace {

TEST(Fixtures, ShippedFilesMatchGenerator) {
  auto manifest = load_bench_manifest(test::fixture("bench/manifest.json"));
  ASSERT_EQ(manifest.datasets.size(), 6u);
  ASSERT_EQ(manifest.algorithms.size(), 5u);
  for (const auto& ds : manifest.datasets) {
    ASSERT_TRUE(ds.seed);
    auto g = fixtures::generate_fixture(ds.name, *ds.seed);
    EXPECT_EQ(g.graph_pattern, ds.graph) << ds.name;
    EXPECT_EQ(g.source, ds.source) << ds.name;
    std::ostringstream generated;
    fixtures::write_ntriples(generated, g.triples);
    std::ifstream in(ds.file);
    std::ostringstream shipped;
    shipped << in.rdbuf();
    EXPECT_EQ(generated.str(), shipped.str()) << ds.name;
  }
}

TEST(Fixtures, ExtractedGraphsAreDeskScale) {
  for (const auto& name : fixtures::fixture_names()) {
    auto g = fixtures::generate_fixture(name);
    auto ds = DatasetHandle::from_triples(g.triples);
    auto edges = eval_select(ds, "SELECT ?src ?dst WHERE { " + g.graph_pattern + " }");
    std::set<Term> nodes;
    auto s = edges.column("src"), d = edges.column("dst");
    edges.for_each_row([&](const Row& r) {
      nodes.insert(*r[*s]);
      nodes.insert(*r[*d]);
    });
    EXPECT_GT(edges.size(), 50u) << name;
    EXPECT_LE(nodes.size(), 500u) << name;
    EXPECT_TRUE(nodes.count(Term::iri(g.source))) << name;
  }
}

TEST(Fixtures, Durations) {
  EXPECT_EQ(parse_duration("250ms").count(), 250);
  EXPECT_EQ(parse_duration("2").count(), 2000);
  EXPECT_EQ(parse_duration("1.5m").count(), 90000);
  EXPECT_THROW(parse_duration("5 parsecs"), std::invalid_argument);
}

}  // namespace
}  // namespace sparqal
