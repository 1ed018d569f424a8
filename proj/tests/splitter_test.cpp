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
#include <set>

#include "netcv/graph.hpp"
#include "netcv/split.hpp"

namespace netcv {
namespace {

Graph random_graph(int n, double p, Seed seed) {
  Matrix m = Matrix::Constant(n, n, p);
  m.diagonal().setZero();
  return sample_adjacency(ProbMatrix(m), seed);
}

TEST(SampleSplit, DeterministicAndSymmetric) {
  const EdgeSplit a = sample_split(30, 0.7, 5), b = sample_split(30, 0.7, 5);
  EXPECT_EQ(a.training_mask(), b.training_mask());
  const Mask& m = a.training_mask();
  EXPECT_EQ(m, m.transpose());
  for (int i = 0; i < 30; ++i) {
    EXPECT_FALSE(a.in_training(i, i));
    EXPECT_FALSE(a.in_evaluation(i, i));
  }
}

TEST(SampleSplit, HoeffdingBound) {
  const double bound = std::sqrt(19900.0 * std::log(200.0));
  for (Seed s = 0; s < 5; ++s) {
    const EdgeSplit sp = sample_split(200, 0.9, s);
    EXPECT_LE(std::abs(static_cast<double>(sp.training_pairs()) - 0.9 * 19900), bound);
  }
}

TEST(SampleSplit, RejectsBadProportion) {
  EXPECT_THROW(sample_split(10, 0.0, 1), InvalidParameter);
  EXPECT_THROW(sample_split(10, 1.0, 1), InvalidParameter);
}

TEST(SampleSplit, EvaluationFractionAcrossSeeds) {
  // Mean over 100 seeds of |E^c| / N, within 3 sigma of 1 - w.
  const int n = 40;
  const double w = 0.8, pairs = n * (n - 1) / 2.0;
  double mean = 0.0;
  for (Seed s = 0; s < 100; ++s) mean += sample_split(n, w, s).evaluation_pairs() / pairs;
  mean /= 100;
  const double sigma = std::sqrt(w * (1 - w) / pairs / 100);
  EXPECT_LE(std::abs(mean - (1 - w)), 3 * sigma);
}

TEST(VFold, ThreePairsTwoFolds) {
  const auto folds = v_fold_splits(3, 2, 1);
  ASSERT_EQ(folds.size(), 2u);
  std::multiset<long long> sizes = {folds[0].evaluation_pairs(), folds[1].evaluation_pairs()};
  EXPECT_EQ(sizes, (std::multiset<long long>{1, 2}));
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      EXPECT_NE(folds[0].in_evaluation(i, j), folds[1].in_evaluation(i, j));
}

TEST(VFold, PartitionAndSizes) {
  const int n = 23, v = 10;
  const auto folds = v_fold_splits(n, v, 7);
  ASSERT_EQ(folds.size(), static_cast<std::size_t>(v));
  long long lo = 1LL << 40, hi = 0;
  for (const auto& f : folds) {
    lo = std::min(lo, f.evaluation_pairs());
    hi = std::max(hi, f.evaluation_pairs());
    EXPECT_DOUBLE_EQ(f.w(), 0.9);
    EXPECT_EQ(f.training_mask(), f.training_mask().transpose());
  }
  EXPECT_LE(hi - lo, 1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int held = 0;
      for (const auto& f : folds) held += f.in_evaluation(i, j) ? 1 : 0;
      EXPECT_EQ(held, 1);
    }
  // Training set of a split is the union of the other folds.
  for (int f = 0; f < v; ++f)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        bool elsewhere = false;
        for (int g = 0; g < v; ++g)
          if (g != f && folds[g].in_evaluation(i, j)) elsewhere = true;
        EXPECT_EQ(folds[f].in_training(i, j), elsewhere);
      }
}

TEST(VFold, TrainingFractionNearNine) {
  for (const auto& f : v_fold_splits(60, 10, 3))
    EXPECT_NEAR(static_cast<double>(f.training_pairs()) / f.pair_count(), 0.9, 1e-3);
}

TEST(VFold, RejectsTooManyFolds) {
  EXPECT_THROW(v_fold_splits(3, 4, 1), InvalidParameter);
  EXPECT_THROW(v_fold_splits(10, 1, 1), InvalidParameter);
}

TEST(PartialMatrix, AllTrainingGivesA) {
  const Graph a = random_graph(12, 0.4, 1);
  Mask m = Mask::Ones(12, 12);
  EXPECT_EQ(partial_matrix(a, EdgeSplit(m, 1.0)).matrix(), a.adj());
}

TEST(PartialMatrix, NoTrainingGivesZero) {
  const Graph a = random_graph(12, 0.4, 1);
  const PartialMatrix y = partial_matrix(a, EdgeSplit(Mask::Zero(12, 12), 0.5));
  EXPECT_EQ(y.matrix(), Matrix::Zero(12, 12));
}

TEST(PartialMatrix, MixedMaskEntrywise) {
  const Graph a = random_graph(15, 0.5, 2);
  const EdgeSplit sp = sample_split(15, 0.6, 3);
  const Matrix y = partial_matrix(a, sp).matrix();
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 15; ++j) EXPECT_EQ(y(i, j), sp.in_training(i, j) ? a.adj()(i, j) : 0.0);
  EXPECT_EQ(y, y.transpose());
}

TEST(PartialMatrix, ComplementSumsToA) {
  const Graph a = random_graph(20, 0.3, 4);
  for (Seed s = 0; s < 5; ++s) {
    const EdgeSplit sp = sample_split(20, 0.7, s);
    EXPECT_EQ(partial_matrix(a, sp).matrix() + partial_matrix(a, sp.complement()).matrix(), a.adj());
  }
}

TEST(PartialMatrix, DimensionMismatch) {
  EXPECT_THROW(partial_matrix(Graph::empty(4), sample_split(5, 0.5, 1)), InvalidInput);
}

}  // namespace
}  // namespace netcv
