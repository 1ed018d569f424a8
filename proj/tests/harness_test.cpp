// Copyright 2026 The netcv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "netcv/harness.hpp"
#include "netcv/io.hpp"

namespace netcv {
namespace {

TEST(Scenario, AffiliationBlockValues) {
  for (Seed s = 0; s < 5; ++s) {
    const auto d = make_scenario("am-3", 60, s);
    const auto& am = std::get<AffiliationParams>(d.spec);
    EXPECT_NEAR(am.block_matrix()(0, 0), 0.10, 1e-15);
    EXPECT_NEAR(am.block_matrix()(0, 1), 0.04, 1e-15);
    EXPECT_EQ(d.expected, CandidateModel::affiliation(3));
  }
}

TEST(Scenario, SbmBlockRanges) {
  for (Seed s = 0; s < 20; ++s) {
    const auto d = make_scenario("sbm-3", 60, s);
    const Matrix& b = std::get<SbmParams>(d.spec).b;
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < 3; ++c) {
        EXPECT_EQ(b(a, c), b(c, a));
        if (a == c) {
          EXPECT_GE(b(a, c), 0.06);
          EXPECT_LE(b(a, c), 0.10);
        } else {
          EXPECT_GE(b(a, c), 0.01);
          EXPECT_LE(b(a, c), 0.03);
        }
      }
  }
}

TEST(Scenario, GraphonSpotCheck) {
  const double v = 0.3 * ns_graphon_shape(0.2, 0.2);
  EXPECT_NEAR(v, 0.3 * (-std::sin(1.0) / 2 + 0.5), 1e-15);
  EXPECT_NEAR(v, 0.02378, 1e-5);
  const auto d = make_scenario("graphon-ns", 50, 1);
  const auto& g = std::get<GraphonSpec>(d.spec);
  EXPECT_NEAR(g.f(0.2, 0.2), v, 1e-15);
  EXPECT_EQ(d.expected, CandidateModel::graphon());
}

TEST(Scenario, EveryDrawIsValid) {
  for (const auto& name : scenario_names())
    for (Seed s = 0; s < 3; ++s) {
      const auto d = make_scenario(name, 300, s);
      EXPECT_NO_THROW(build_prob(d.spec)) << name;
      if (d.theta) {
        const auto& p = std::get<DcbmParams>(d.spec);
        for (int c = 0; c < p.k; ++c) {
          double ss = 0, size = 0;
          for (int i = 0; i < 300; ++i)
            if (p.labels[i] == c) ss += p.theta[i] * p.theta[i], size += 1;
          EXPECT_NEAR(ss, size, 1e-9);
        }
      }
    }
}

TEST(Scenario, ImbalancedProportions) {
  const auto d = make_scenario("sbm-imbalanced-3", 6000, 3);
  std::vector<double> count(3, 0.0);
  for (int c : d.labels) count[c] += 1;
  EXPECT_NEAR(count[0] / 6000, 1.0 / 6, 0.02);
  EXPECT_NEAR(count[1] / 6000, 1.0 / 3, 0.02);
  EXPECT_NEAR(count[2] / 6000, 1.0 / 2, 0.02);
}

TEST(Scenario, UnknownName) { EXPECT_THROW(make_scenario("sbm-4", 50, 1), InvalidParameter); }

TEST(Scenario, Deterministic) {
  const auto a = make_scenario("dcbm-3", 100, 5), b = make_scenario("dcbm-3", 100, 5);
  EXPECT_EQ(build_prob(a.spec).matrix(), build_prob(b.spec).matrix());
}

MethodConfig quick_within() {
  MethodConfig m;
  m.procedure = Procedure::WithinSbm;
  m.cv = CvConfig::vfold(5, 0);
  m.opts.k_max = 6;
  return m;
}

TEST(MonteCarlo, SingleRepHasOneCount) {
  const auto t = monte_carlo("sbm-3", 60, quick_within(), 1, 3);
  int nonzero = 0;
  for (const auto& [m, c] : t.counts) nonzero += c > 0 ? 1 : 0;
  EXPECT_EQ(nonzero + t.failures, 1);
}

TEST(MonteCarlo, CountsSumToReps) {
  const auto t = monte_carlo("sbm-3", 60, quick_within(), 5, 4);
  int total = t.failures;
  for (const auto& [m, c] : t.counts) total += c;
  EXPECT_EQ(total, 5);
  EXPECT_EQ(t.reps, 5);
}

TEST(MonteCarlo, ReproducibleAcrossThreadCounts) {
  MethodConfig m;
  m.procedure = Procedure::SbmVsDcbm;
  m.cv = CvConfig::vfold(5, 0);
  const auto a = monte_carlo("dcbm-3", 90, m, 4, 8, 1);
  const auto b = monte_carlo("dcbm-3", 90, m, 4, 8, 3);
  EXPECT_EQ(a.to_csv(), b.to_csv());
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
}

TEST(MonteCarlo, SharedWorkspaceMatchesSeparateRuns) {
  MethodConfig pen = quick_within(), zero = quick_within();
  zero.pen = PenaltyConfig::explicit_value(0.0);
  const auto both = monte_carlo("sbm-3", 60, std::vector<MethodConfig>{pen, zero}, 3, 2);
  EXPECT_EQ(both[0].to_csv(), monte_carlo("sbm-3", 60, pen, 3, 2).to_csv());
  EXPECT_EQ(both[1].to_csv(), monte_carlo("sbm-3", 60, zero, 3, 2).to_csv());
}

TEST(MonteCarlo, CsvLayout) {
  const auto t = monte_carlo("sbm-3", 60, quick_within(), 2, 1);
  const std::string csv = t.to_csv();
  EXPECT_EQ(csv.rfind("scenario,n,method,model,count,reps\n", 0), 0u);
  EXPECT_NE(csv.find("sbm-3,60,within-sbm/vfold-5/auto,"), std::string::npos);
}

TEST(LoadGraph, EdgeListCompaction) {
  std::istringstream in("1 2\n2 3\n");
  const auto g = parse_edgelist(in);
  EXPECT_EQ(g.graph.n(), 3);
  EXPECT_EQ(g.graph.edge_count(), 2);
  EXPECT_EQ(g.node_ids, (std::vector<std::string>{"1", "2", "3"}));
}

TEST(LoadGraph, DuplicatesAndLoops) {
  std::istringstream in("# comment\n1 2\n2 1\n\n3 3\n");
  const auto g = parse_edgelist(in);
  EXPECT_EQ(g.graph.edge_count(), 1);
  EXPECT_FALSE(g.warnings.empty());
}

TEST(LoadGraph, FormatErrorCarriesLine) {
  std::istringstream in("1 2\n3\n");
  try {
    parse_edgelist(in);
    FAIL() << "expected a format error";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(LoadGraph, GmlAttributes) {
  std::istringstream in(R"(graph [
  directed 0
  node [ id 10 label "A" value "n" ]
  node [ id 11 label "B" value "c" ]
  node [ id 12 label "C" value "c" ]
  edge [ source 10 target 11 ]
  edge [ source 11 target 12 ]
  edge [ source 12 target 11 ]
])");
  const auto g = parse_gml(in);
  EXPECT_EQ(g.graph.n(), 3);
  EXPECT_EQ(g.graph.edge_count(), 2);
  ASSERT_TRUE(g.labels && g.values);
  EXPECT_EQ((*g.labels)[1], "B");
  EXPECT_EQ((*g.values)[0], "n");
}

TEST(LoadGraph, GmlErrors) {
  std::istringstream unbalanced("graph [ node [ id 1 ]\n");
  EXPECT_THROW(parse_gml(unbalanced), FormatError);
  std::istringstream undeclared("graph [\n node [ id 1 ]\n edge [ source 1 target 2 ]\n]");
  EXPECT_THROW(parse_gml(undeclared), FormatError);
}

TEST(LoadGraph, MissingFile) { EXPECT_THROW(load_graph("/nonexistent/x.edges"), InvalidInput); }

TEST(LoadGraph, RoundTrip) {
  const auto d = make_scenario("sbm-3", 80, 2);
  const Graph a = sample_adjacency(build_prob(d.spec), 3);
  const auto path = std::filesystem::temp_directory_path() / "netcv_roundtrip.edges";
  {
    std::ofstream out(path);
    write_edgelist(a, out);
  }
  const auto once = load_graph(path.string());
  {
    std::ofstream out(path);
    write_edgelist(once.graph, out, &once.node_ids);
  }
  const auto twice = load_graph(path.string());
  std::filesystem::remove(path);
  // Compare edge sets in terms of the original node ids.
  auto named = [](const LoadedGraph& g) {
    std::set<std::pair<std::string, std::string>> out;
    for (auto [u, v] : g.graph.edges())
      out.emplace(std::min(g.node_ids[u], g.node_ids[v]), std::max(g.node_ids[u], g.node_ids[v]));
    return out;
  };
  std::set<std::pair<std::string, std::string>> truth;
  for (auto [u, v] : a.edges())
    truth.emplace(std::min(std::to_string(u), std::to_string(v)), std::max(std::to_string(u), std::to_string(v)));
  EXPECT_EQ(named(once), truth);
  EXPECT_EQ(named(twice), truth);
}

}  // namespace
}  // namespace netcv
