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

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "netcv/completion.hpp"
#include "netcv/fitters.hpp"
#include "netcv/graph.hpp"
#include "netcv/split.hpp"

namespace netcv {
namespace {

EdgeSplit all_training(int n) { return EdgeSplit(Mask::Ones(n, n), 1.0); }

EdgeSplit from_pairs(int n, const std::vector<std::pair<int, int>>& pairs, double w) {
  Mask m = Mask::Zero(n, n);
  for (auto [i, j] : pairs) m(i, j) = m(j, i) = 1;
  return EdgeSplit(m, w);
}

Graph random_graph(int n, double p, Seed seed) {
  Matrix m = Matrix::Constant(n, n, p);
  m.diagonal().setZero();
  return sample_adjacency(ProbMatrix(m), seed);
}

void expect_prob_matrix(const Matrix& p) {
  EXPECT_EQ(p, p.transpose());
  EXPECT_EQ(p.diagonal().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GE(p.minCoeff(), 0.0);
  EXPECT_LE(p.maxCoeff(), 1.0);
}

TEST(FitSbm, SingleBlockAverage) {
  const Graph a = Graph::from_edges(3, {{0, 1}, {1, 2}});
  const FitResult f = fit_sbm(a, all_training(3), Labels{{0, 0, 0}, 1});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(f.phat(i, j), i == j ? 0.0 : 2.0 / 3.0, 1e-15);
  expect_prob_matrix(f.phat);
}

TEST(FitSbm, EmptyBlockFallsBackToTrainingDensity) {
  // Block 1 has one node, so block pair (1,1) has no pairs at all.
  const Graph a = Graph::from_edges(4, {{0, 1}, {0, 3}});
  const FitResult f = fit_sbm(a, all_training(4), Labels{{0, 0, 0, 1}, 2});
  const Matrix& b = std::get<SbmEstimate>(f.params).b;
  EXPECT_NEAR(b(1, 1), 2.0 / 6.0, 1e-15);
  EXPECT_NEAR(b(0, 0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(b(0, 1), 1.0 / 3.0, 1e-15);
}

TEST(FitSbm, HandListedSixNodeOracle) {
  const Graph a = Graph::from_edges(6, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {1, 5}});
  const std::vector<std::pair<int, int>> train = {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {2, 3}, {1, 4},
                                                  {3, 4}, {3, 5}, {1, 5}, {2, 5}};
  const LabelVector lab = {0, 0, 0, 1, 1, 1};
  const FitResult f = fit_sbm(a, from_pairs(6, train, 0.6), Labels{lab, 2});
  double s[2][2] = {{0, 0}, {0, 0}}, c[2][2] = {{0, 0}, {0, 0}};
  for (auto [i, j] : train) {
    const int x = std::min(lab[i], lab[j]), y = std::max(lab[i], lab[j]);
    s[x][y] += a.adj()(i, j);
    c[x][y] += 1;
  }
  const Matrix& b = std::get<SbmEstimate>(f.params).b;
  EXPECT_NEAR(b(0, 0), s[0][0] / c[0][0], 1e-15);
  EXPECT_NEAR(b(0, 1), s[0][1] / c[0][1], 1e-15);
  EXPECT_NEAR(b(1, 0), s[0][1] / c[0][1], 1e-15);
  EXPECT_NEAR(b(1, 1), s[1][1] / c[1][1], 1e-15);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (i != j) EXPECT_EQ(f.phat(i, j), b(lab[i], lab[j]));
}

TEST(FitSbm, FullTrainingEqualsBlockAveragingOfA) {
  const Graph a = random_graph(20, 0.3, 3);
  LabelVector lab(20);
  for (int i = 0; i < 20; ++i) lab[i] = i % 3;
  const FitResult f = fit_sbm(a, all_training(20), Labels{lab, 3});
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) {
      double s = 0, c = 0;
      for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j)
          if (i != j && lab[i] == x && lab[j] == y) s += a.adj()(i, j), c += 1;
      EXPECT_NEAR(std::get<SbmEstimate>(f.params).b(x, y), s / c, 1e-14);
    }
}

TEST(FitSbm, NoTrainingPairsIsDegenerate) {
  EXPECT_THROW(fit_sbm(Graph::empty(4), EdgeSplit(Mask::Zero(4, 4), 0.5), Labels{{0, 0, 0, 0}, 1}), DegenerateFit);
}

TEST(FitAffiliation, SingleCommunity) {
  const Graph a = Graph::from_edges(4, {{0, 1}, {2, 3}});
  const FitResult f = fit_affiliation(a, from_pairs(4, {{0, 1}, {2, 3}, {0, 2}, {1, 3}}, 0.6), Labels{{0, 0, 0, 0}, 1});
  const auto& e = std::get<AffiliationEstimate>(f.params);
  EXPECT_DOUBLE_EQ(e.p_wc, 0.5);
  EXPECT_DOUBLE_EQ(e.p_bc, 0.5);
  EXPECT_TRUE(f.degenerate);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_DOUBLE_EQ(f.phat(i, j), i == j ? 0.0 : 0.5);
}

TEST(FitAffiliation, PerfectlyAssortative) {
  const Graph a = Graph::from_edges(4, {{0, 1}, {2, 3}});
  const FitResult f = fit_affiliation(a, all_training(4), Labels{{0, 0, 1, 1}, 2});
  const auto& e = std::get<AffiliationEstimate>(f.params);
  EXPECT_EQ(e.p_wc, 1.0);
  EXPECT_EQ(e.p_bc, 0.0);
  EXPECT_FALSE(f.degenerate);
}

TEST(FitAffiliation, FiveNodeBruteForce) {
  const Graph a = Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 4}, {3, 4}, {0, 3}});
  const std::vector<std::pair<int, int>> train = {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {2, 4}, {3, 4}, {1, 4}};
  const LabelVector lab = {0, 0, 1, 1, 1};
  const FitResult f = fit_affiliation(a, from_pairs(5, train, 0.7), Labels{lab, 2});
  double ws = 0, wc = 0, bs = 0, bc = 0;
  for (auto [i, j] : train) {
    if (lab[i] == lab[j]) ws += a.adj()(i, j), wc += 1;
    else bs += a.adj()(i, j), bc += 1;
  }
  const auto& e = std::get<AffiliationEstimate>(f.params);
  EXPECT_DOUBLE_EQ(e.p_wc, ws / wc);
  EXPECT_DOUBLE_EQ(e.p_bc, bs / bc);
}

TEST(FitAffiliation, MatchesSbmWhenBlockEstimateIsAffiliation) {
  const Graph a = Graph::from_edges(4, {{0, 1}, {2, 3}, {0, 2}});
  const Labels lab{{0, 0, 1, 1}, 2};
  EXPECT_EQ(fit_affiliation(a, all_training(4), lab).phat, fit_sbm(a, all_training(4), lab).phat);
}

TEST(BlockFits, LabelPermutationInvariance) {
  const Graph a = random_graph(24, 0.3, 5);
  const EdgeSplit sp = sample_split(24, 0.8, 6);
  LabelVector lab(24);
  for (int i = 0; i < 24; ++i) lab[i] = (i * 7) % 3;
  const std::vector<int> perm = {2, 0, 1};
  LabelVector renamed(24);
  for (int i = 0; i < 24; ++i) renamed[i] = perm[lab[i]];
  EXPECT_EQ(fit_sbm(a, sp, Labels{lab, 3}).phat, fit_sbm(a, sp, Labels{renamed, 3}).phat);
  EXPECT_EQ(fit_affiliation(a, sp, Labels{lab, 3}).phat, fit_affiliation(a, sp, Labels{renamed, 3}).phat);
}

TEST(FitDcbm, RankOneReconstruction) {
  const int n = 12;
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = 0.2 + 0.05 * i;
  const Matrix full = v * v.transpose();
  Matrix p = full;
  p.diagonal().setZero();
  const CompletedMatrix ahat = complete_lowrank(full, 1, 1.0);
  const FitResult f = fit_dcbm(p, all_training(n), ahat, 1, Labels{LabelVector(n, 0), 1});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) EXPECT_NEAR(f.phat(i, j), p(i, j), 1e-6);
  const Vector& th = std::get<DcbmEstimate>(f.params).theta_scaled;
  EXPECT_LT((th - v / v.norm()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(FitDcbm, KnownUnitThetaMatchesSbm) {
  const Graph a = random_graph(30, 0.25, 7);
  const EdgeSplit sp = sample_split(30, 0.9, 8);
  LabelVector lab(30);
  for (int i = 0; i < 30; ++i) lab[i] = i % 3;
  const Labels l{lab, 3};
  const CompletedMatrix ahat = complete_lowrank(partial_matrix(a, sp), 3, 0.9);
  const FitResult d = fit_dcbm(a, sp, ahat, 3, l, Vector::Ones(30));
  const FitResult s = fit_sbm(a, sp, l);
  EXPECT_LT((d.phat - s.phat).cwiseAbs().maxCoeff(), 1e-12);
  const Vector& th = std::get<DcbmEstimate>(d.params).theta_scaled;
  EXPECT_NEAR(th[0], 1.0 / std::sqrt(10.0), 1e-15);
}

TEST(FitDcbm, ClampsAboveOne) {
  const Graph a = Graph::from_edges(3, {{0, 1}, {0, 2}, {1, 2}});
  Vector theta(3);
  theta << 10.0, 1.0, 1.0;
  const CompletedMatrix ahat = complete_lowrank(Matrix::Identity(3, 3), 1, 1.0);
  const FitResult f = fit_dcbm(a, all_training(3), ahat, 1, Labels{{0, 0, 0}, 1}, theta);
  // B' = 3 / 7, so theta'_0 theta'_1 B' = 10/7 before clamping.
  EXPECT_EQ(f.phat(0, 1), 1.0);
  EXPECT_NEAR(f.phat(1, 2), 1.0 / 7.0, 1e-15);
  expect_prob_matrix(f.phat);
}

TEST(FitDcbm, OutputIsProbabilityMatrix) {
  const Graph a = random_graph(40, 0.3, 9);
  const EdgeSplit sp = sample_split(40, 0.9, 10);
  LabelVector lab(40);
  for (int i = 0; i < 40; ++i) lab[i] = i % 2;
  const CompletedMatrix ahat = complete_lowrank(partial_matrix(a, sp), 2, 0.9);
  expect_prob_matrix(fit_dcbm(a, sp, ahat, 2, Labels{lab, 2}).phat);
}

// Independent neighborhood-smoothing implementation.
Matrix ns_oracle(const Matrix& y, double w, double h) {
  const int n = static_cast<int>(y.rows());
  Matrix d(n, n);
  for (int i = 0; i < n; ++i)
    for (int ip = 0; ip < n; ++ip) {
      double best = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == ip) continue;
        double dot = 0.0;
        for (int l = 0; l < n; ++l) dot += (y(i, l) - y(ip, l)) * y(k, l);
        best = std::max(best, std::abs(dot));
      }
      d(i, ip) = best / n;
    }
  Matrix pt = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> ds;
    for (int ip = 0; ip < n; ++ip)
      if (ip != i) ds.push_back(d(i, ip));
    std::sort(ds.begin(), ds.end());
    const int r = std::max(1, static_cast<int>(std::ceil(h * (n - 1) - 1e-9)));
    const double q = ds[r - 1];
    for (int j = 0; j < n; ++j) {
      double s = 0.0, c = 0.0;
      for (int ip = 0; ip < n; ++ip)
        if (ip != i && d(i, ip) <= q) s += y(ip, j), c += 1;
      pt(i, j) = s / c;
    }
  }
  Matrix p = (pt + pt.transpose()) / 2.0 / w;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p(i, j) = i == j ? 0.0 : std::clamp(p(i, j), 0.0, 1.0);
  return p;
}

TEST(FitGraphonNs, CompleteGraph) {
  const int n = 7;
  Matrix y = Matrix::Ones(n, n);
  y.diagonal().setZero();
  const FitResult f = fit_graphon_ns(PartialMatrix(y, 1.0), 1.0, 0.5);
  // Every node is a neighbour; column j of the neighbourhood contains Y_jj = 0.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) EXPECT_NEAR(f.phat(i, j), i == j ? 0.0 : (n - 2.0) / (n - 1.0), 1e-15);
  EXPECT_LT((f.phat - ns_oracle(y, 1.0, 0.5)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(FitGraphonNs, MatchesBruteForceOracle) {
  for (Seed s = 0; s < 20; ++s) {
    const Graph a = random_graph(8, 0.5, 100 + s);
    const EdgeSplit sp = sample_split(8, 0.7, 200 + s);
    const PartialMatrix y = partial_matrix(a, sp);
    for (double h : {default_bandwidth(8), 0.3, 0.6}) {
      const FitResult f = fit_graphon_ns(y, 0.7, h);
      EXPECT_EQ(f.phat, f.phat.transpose());
      EXPECT_LT((f.phat - ns_oracle(y.matrix(), 0.7, h)).cwiseAbs().maxCoeff(), 1e-12) << "seed " << s << " h " << h;
      expect_prob_matrix(f.phat);
    }
  }
}

TEST(FitGraphonNs, DistancesMatchDefinition) {
  const Graph a = random_graph(10, 0.4, 3);
  const Matrix& y = a.adj();
  const Matrix d2 = ns_squared_distances(y);
  for (int i = 0; i < 10; ++i)
    for (int ip = 0; ip < 10; ++ip) {
      if (i == ip) continue;
      double best = 0.0;
      for (int k = 0; k < 10; ++k)
        if (k != i && k != ip) best = std::max(best, std::abs((y.row(i) - y.row(ip)).dot(y.row(k))));
      EXPECT_NEAR(d2(i, ip), best / 10, 1e-15);
    }
}

TEST(FitGraphonNs, InputValidation) {
  EXPECT_THROW(fit_graphon_ns(PartialMatrix(Matrix::Zero(2, 2), 1.0), 1.0, 0.5), InvalidInput);
  EXPECT_THROW(fit_graphon_ns(PartialMatrix(Matrix::Zero(5, 5), 1.0), 1.0, 0.0), InvalidParameter);
  EXPECT_THROW(fit_graphon_ns(PartialMatrix(Matrix::Zero(5, 5), 1.0), 0.0, 0.5), InvalidParameter);
}

TEST(QuantileRank, LowerOrderStatistic) {
  EXPECT_EQ(quantile_rank(0.5, 7), 4);
  EXPECT_EQ(quantile_rank(0.3, 10), 3);
  EXPECT_EQ(quantile_rank(0.01, 10), 1);
  EXPECT_EQ(quantile_rank(0.999, 10), 10);
}

}  // namespace
}  // namespace netcv
