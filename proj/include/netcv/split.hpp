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

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "netcv/error.hpp"
#include "netcv/graph.hpp"
#include "netcv/rng.hpp"

namespace netcv {

using Mask = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

// Partition of the unordered off-diagonal node pairs into a training set and
// an evaluation set. The diagonal belongs to neither.
class EdgeSplit {
 public:
  EdgeSplit() = default;

  // `training` must be symmetric; its diagonal is ignored and cleared.
  EdgeSplit(Mask training, double w) : training_(std::move(training)), w_(w) {
    if (training_.rows() != training_.cols()) throw InvalidInput("split mask must be square");
    if (!(w_ > 0.0 && w_ <= 1.0)) throw InvalidParameter("training proportion must lie in (0,1]");
    const int n = this->n();
    training_pairs_ = 0;
    for (int j = 0; j < n; ++j) {
      training_(j, j) = 0;
      for (int i = 0; i < j; ++i) {
        if (training_(i, j) != training_(j, i)) throw InvalidInput("split mask must be symmetric");
        if (training_(i, j)) ++training_pairs_;
      }
    }
  }

  int n() const { return static_cast<int>(training_.rows()); }
  double w() const { return w_; }
  const Mask& training_mask() const { return training_; }
  bool in_training(int i, int j) const { return i != j && training_(i, j) != 0; }
  bool in_evaluation(int i, int j) const { return i != j && training_(i, j) == 0; }

  long long pair_count() const { return static_cast<long long>(n()) * (n() - 1) / 2; }
  long long training_pairs() const { return training_pairs_; }
  long long evaluation_pairs() const { return pair_count() - training_pairs_; }

  // Same pairs with the two sets swapped.
  EdgeSplit complement() const {
    Mask m = training_;
    for (int j = 0; j < n(); ++j)
      for (int i = 0; i < n(); ++i) m(i, j) = (i == j) ? 0 : static_cast<std::uint8_t>(!training_(i, j));
    return EdgeSplit(std::move(m), w_ >= 1.0 ? 1.0 : 1.0 - w_);
  }

 private:
  Mask training_;
  double w_ = 1.0;
  long long training_pairs_ = 0;
};

// Y: the adjacency restricted to training pairs, zero elsewhere.
class PartialMatrix {
 public:
  PartialMatrix() = default;
  PartialMatrix(Matrix y, double w) : y_(std::move(y)), w_(w) {}

  int n() const { return static_cast<int>(y_.rows()); }
  const Matrix& matrix() const { return y_; }
  double w() const { return w_; }

 private:
  Matrix y_;
  double w_ = 1.0;
};

// Each unordered pair joins the training set independently with probability w.
// Throws DegenerateSplit when no evaluation pair remains.
inline EdgeSplit sample_split(int n, double w, Seed seed) {
  if (!(w > 0.0 && w < 1.0)) throw InvalidParameter("training proportion w must lie in (0,1)");
  if (n < 2) throw InvalidInput("splitting needs at least two nodes");
  Engine eng = make_engine(seed);
  std::bernoulli_distribution coin(w);
  Mask m = Mask::Zero(n, n);
  long long eval = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      const bool train = coin(eng);
      m(i, j) = m(j, i) = train ? 1 : 0;
      eval += train ? 0 : 1;
    }
  if (eval == 0) throw DegenerateSplit("Bernoulli split produced an empty evaluation set");
  return EdgeSplit(std::move(m), w);
}

// V-fold partition of the unordered pairs: shuffle the pair list and cut it
// into v contiguous chunks whose sizes differ by at most one. Split f holds
// out chunk f and trains on the rest.
inline std::vector<EdgeSplit> v_fold_splits(int n, int v, Seed seed) {
  if (v < 2) throw InvalidParameter("fold count must be at least 2");
  if (n < 2) throw InvalidInput("splitting needs at least two nodes");
  const long long pairs = static_cast<long long>(n) * (n - 1) / 2;
  if (v > pairs) throw InvalidParameter("more folds than node pairs");

  std::vector<std::pair<int, int>> list;
  list.reserve(static_cast<std::size_t>(pairs));
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) list.emplace_back(i, j);
  Engine eng = make_engine(seed);
  std::shuffle(list.begin(), list.end(), eng);

  // fold[i, j] = index of the fold holding out (i, j).
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> fold;
  std::vector<std::int32_t> fold_wide;
  const bool narrow = v < 255;
  if (narrow) fold = decltype(fold)::Zero(n, n);
  else fold_wide.assign(static_cast<std::size_t>(n) * n, 0);

  const long long base = pairs / v;
  const long long extra = pairs % v;
  long long pos = 0;
  for (int f = 0; f < v; ++f) {
    const long long size = base + (f < extra ? 1 : 0);
    for (long long t = 0; t < size; ++t, ++pos) {
      const auto [i, j] = list[static_cast<std::size_t>(pos)];
      if (narrow) {
        fold(i, j) = fold(j, i) = static_cast<std::uint8_t>(f);
      } else {
        fold_wide[static_cast<std::size_t>(j) * n + i] = f;
        fold_wide[static_cast<std::size_t>(i) * n + j] = f;
      }
    }
  }
  list.clear();
  list.shrink_to_fit();

  std::vector<EdgeSplit> out;
  out.reserve(v);
  const double w = 1.0 - 1.0 / v;
  for (int f = 0; f < v; ++f) {
    Mask m = Mask::Zero(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        if (i == j) continue;
        const int fij = narrow ? fold(i, j) : fold_wide[static_cast<std::size_t>(j) * n + i];
        m(i, j) = fij == f ? 0 : 1;
      }
    out.emplace_back(std::move(m), w);
  }
  return out;
}

inline PartialMatrix partial_matrix(const Graph& a, const EdgeSplit& split) {
  if (a.n() != split.n()) throw InvalidInput("graph and split sizes differ");
  const int n = a.n();
  Matrix y = Matrix::Zero(n, n);
  const auto& adj = a.adj();
  const auto& m = split.training_mask();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (m(i, j)) y(i, j) = adj(i, j);
  return PartialMatrix(std::move(y), split.w());
}

}  // namespace netcv
