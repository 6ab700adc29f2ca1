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

#include <array>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sys/wait.h>

#include "sparqal/results_io.hpp"
#include "test_support.hpp"

namespace sparqal {
namespace {

namespace fs = std::filesystem;

struct Output {
  int code;
  std::string out;
};

Output cli(const std::string& args) {
  std::string cmd = std::string(SPARQAL_CLI) + " " + args + " 2>/dev/null";
  Output o{0, {}};
  FILE* p = popen(cmd.c_str(), "r");
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) o.out.append(buf.data(), n);
  int status = pclose(p);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string fixture(const std::string& name) { return test::fixture(name).string(); }

fs::path scratch(const std::string& name, const std::string& content) {
  auto path = fs::temp_directory_path() / ("sparqal_cli_" + name);
  std::ofstream(path) << content;
  return path;
}

TEST(Cli, RunZikaTsv) {
  auto o = cli("run --data " + fixture("zika.nt") + " --proc " + fixture("procedures/zika.sparqal") + " --out tsv");
  ASSERT_EQ(o.code, 0);
  EXPECT_EQ(o.out.substr(0, o.out.find('\n')), "?author\t?p_index");
  auto seq = read_tsv(o.out);
  ASSERT_EQ(seq.size(), 1u);
  EXPECT_EQ(seq.rows()[0][0]->value(), "http://example.org/cleo");
}

TEST(Cli, TsvAndJsonAgree) {
  std::string base = "run --data " + fixture("bench/horses.nt") +
                     " --stdlib PR --param graph='{ ?src wdt:P22 ?dst } UNION { ?src wdt:P25 ?dst }'";
  auto tsv = cli(base + " --out tsv");
  auto json = cli(base + " --out json");
  ASSERT_EQ(tsv.code, 0);
  ASSERT_EQ(json.code, 0);
  EXPECT_TRUE(sequences_equal_as_multisets(read_tsv(tsv.out), read_json(json.out)));
}

TEST(Cli, BatchedMatchesInMemory) {
  for (std::string name : {"BFS", "WCC", "LCC", "SSSP", "PR"}) {
    std::string base = "run --data " + fixture("bench/metro.nt") + " --stdlib " + name +
                       " --param 'graph=?src wdt:P197 ?dst'" +
                       (name == "BFS" || name == "SSSP" ? " --param source=http://www.wikidata.org/entity/Q3296629" : "");
    auto mem = cli(base + " --strategy in-memory");
    auto bat = cli(base + " --strategy batched --batch-width 1 --parallelism 2");
    ASSERT_EQ(mem.code, 0) << name;
    ASSERT_EQ(bat.code, 0) << name;
    EXPECT_TRUE(sequences_equal_as_multisets(read_tsv(mem.out), read_tsv(bat.out))) << name;
  }
}

TEST(Cli, ExitCodes) {
  auto data = " --data " + fixture("zika.nt");
  auto unassigned = scratch("unassigned.sparqal", "LET a = (SELECT ?x WHERE { ?x ?p ?o });\nRETURN(b);\n");
  auto syntax = scratch("syntax.sparqal", "LET a = (SELECT ?x WHERE { ?x ?p ?o }\nRETURN(a);\n");
  auto endless = scratch("endless.sparqal",
                         "LET a = (SELECT ?x WHERE { ?x ?p ?o });\nDO (\n  LET a = (SELECT ?x WHERE { QVALUES(a) });\n"
                         ") WHILE (TIMES 1000000000);\nRETURN(a);\n");
  auto bad_query = scratch("query.sparqal", "LET a = (SELECT ?x WHERE { FILTER(?x +) });\nRETURN(a);\n");
  auto bad_data = scratch("bad.nt", "<a> <b> .\n");
  EXPECT_EQ(cli("run" + data + " --proc " + unassigned.string()).code, 3);
  EXPECT_EQ(cli("validate " + unassigned.string()).code, 3);
  EXPECT_EQ(cli("validate " + fixture("procedures/metro.sparqal")).code, 0);
  EXPECT_EQ(cli("run" + data + " --proc " + syntax.string()).code, 2);
  EXPECT_EQ(cli("run" + data + " --proc " + endless.string() + " --max-iters 20").code, 6);
  EXPECT_EQ(cli("run" + data + " --proc " + endless.string() + " --max-iters 0 --timeout 100ms").code, 7);
  EXPECT_EQ(cli("run" + data + " --proc " + bad_query.string()).code, 5);
  EXPECT_EQ(cli("run --data " + bad_data.string() + " --stdlib WCC").code, 4);
  EXPECT_EQ(cli("run" + data + " --stdlib nothing").code, 1);
  EXPECT_EQ(cli("run" + data).code, 1);
  EXPECT_EQ(cli("frobnicate").code, 1);
}

TEST(Cli, BenchReport) {
  auto report = fs::temp_directory_path() / "sparqal_cli_bench.json";
  auto o = cli("bench " + fixture("bench/manifest.json") + " --report " + report.string());
  ASSERT_EQ(o.code, 0);
  std::ifstream in(report);
  auto doc = nlohmann::json::parse(in);
  ASSERT_EQ(doc["rows"].size(), 30u);
  double sum = 0;
  for (const auto& r : doc["rows"]) {
    EXPECT_EQ(r["outcome"], "ok") << r["task"];
    sum += r["seconds"].get<double>();
  }
  EXPECT_NEAR(doc["total_seconds"].get<double>(), sum, 1e-9);

  auto timed = cli("bench " + fixture("bench/manifest.json") + " --timeout 1ms --report " + report.string());
  ASSERT_EQ(timed.code, 0);
  std::ifstream again(report);
  doc = nlohmann::json::parse(again);
  ASSERT_EQ(doc["rows"].size(), 30u);
  for (const auto& r : doc["rows"]) EXPECT_EQ(r["outcome"], "timeout") << r["task"];
}

TEST(Cli, StdlibListing) {
  auto o = cli("stdlib list");
  ASSERT_EQ(o.code, 0);
  for (std::string name : {"metro-reachability", "zika-pindex", "BFS", "SSSP", "PR", "WCC", "LCC", "CDLP", "WL"})
    EXPECT_NE(o.out.find(name + "  "), std::string::npos) << name;
  auto tm = cli("stdlib tm even-ones --input 0110");
  ASSERT_EQ(tm.code, 0);
  EXPECT_NE(tm.out.find("RETURN"), std::string::npos);
}

}  // namespace
}  // namespace sparqal
