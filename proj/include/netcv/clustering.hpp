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
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "netcv/completion.hpp"
#include "netcv/error.hpp"
#include "netcv/graph.hpp"
#include "netcv/rng.hpp"

namespace netcv {

struct Labels {
  LabelVector assignments;
  int k = 1;

  int n() const { return static_cast<int>(assignments.size()); }
  int operator[](int i) const { return assignments[i]; }

  std::vector<int> sizes() const {
    std::vector<int> s(k, 0);
    for (int c : assignments) ++s[c];
    return s;
  }
};

struct KmeansConfig {
  int restarts = 10;
  int max_iter = 100;
  Seed seed = 0;
};

struct KmeansResult {
  Labels labels;
  Matrix centroids;  // k x d
  double wcss = 0.0;
};

namespace detail {

inline double sq_dist(const Matrix& x, Eigen::Index i, const Matrix& c, Eigen::Index j) {
  return (x.row(i) - c.row(j)).squaredNorm();
}

// Lloyd iterations from the given centroids. Returns the within-cluster sum
// of squares; leaves empty clusters' centroids untouched.
inline double lloyd(const Matrix& x, Matrix& centroids, std::vector<int>& assign, int max_iter) {
  const Eigen::Index n = x.rows();
  const Eigen::Index k = centroids.rows();
  assign.assign(n, -1);
  double wcss = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    bool changed = false;
    wcss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (Eigen::Index c = 0; c < k; ++c) {
        const double dd = sq_dist(x, i, centroids, c);
        if (dd < best_d) {
          best_d = dd;
          best = static_cast<int>(c);
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
      wcss += best_d;
    }
    if (!changed && it > 0) break;
    Matrix sum = Matrix::Zero(k, x.cols());
    std::vector<int> count(k, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sum.row(assign[i]) += x.row(i);
      ++count[assign[i]];
    }
    for (Eigen::Index c = 0; c < k; ++c)
      if (count[c] > 0) centroids.row(c) = sum.row(c) / count[c];
  }
  return wcss;
}

}  // namespace detail

// k-means on the rows of x. Each restart seeds the first centroid at a random
// row and every further centroid at the row farthest from those already
// chosen; the run with the smallest within-cluster sum of squares wins.
// Clusters left empty get one repair pass: the centroid moves to the row
// farthest from its own centroid and Lloyd iterations resume.
inline KmeansResult kmeans(const Matrix& x, int k, const KmeansConfig& cfg) {
  const Eigen::Index n = x.rows();
  if (k < 1 || k > n) throw InvalidParameter("cluster count k must lie in [1, n]");
  if (cfg.restarts < 1 || cfg.max_iter < 1) throw InvalidParameter("k-means needs restarts >= 1 and max_iter >= 1");

  Engine eng = make_engine(cfg.seed);
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  KmeansResult best;
  best.wcss = std::numeric_limits<double>::infinity();

  for (int r = 0; r < cfg.restarts; ++r) {
    Matrix centroids(k, x.cols());
    centroids.row(0) = x.row(pick(eng));
    std::vector<double> mind(n, std::numeric_limits<double>::infinity());
    for (int c = 1; c < k; ++c) {
      Eigen::Index far = 0;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        mind[i] = std::min(mind[i], detail::sq_dist(x, i, centroids, c - 1));
        if (mind[i] > far_d) {
          far_d = mind[i];
          far = i;
        }
      }
      centroids.row(c) = x.row(far);
    }

    std::vector<int> assign;
    double wcss = detail::lloyd(x, centroids, assign, cfg.max_iter);

    std::vector<int> count(k, 0);
    for (int a : assign) ++count[a];
    if (std::find(count.begin(), count.end(), 0) != count.end()) {
      std::vector<char> taken(n, 0);
      for (int c = 0; c < k; ++c) {
        if (count[c] > 0) continue;
        Eigen::Index far = -1;
        double far_d = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (taken[i] || count[assign[i]] <= 1) continue;
          const double dd = detail::sq_dist(x, i, centroids, assign[i]);
          if (dd > far_d) {
            far_d = dd;
            far = i;
          }
        }
        if (far < 0) break;
        taken[far] = 1;
        --count[assign[far]];
        ++count[c];
        centroids.row(c) = x.row(far);
      }
      wcss = detail::lloyd(x, centroids, assign, cfg.max_iter);
    }

    if (wcss < best.wcss) {
      best.wcss = wcss;
      best.centroids = centroids;
      best.labels = Labels{assign, k};
    }
  }
  return best;
}

// Spectral clustering on the completed matrix: k-means over the rows of its
// top-k eigenvector matrix. With `spherical`, nonzero rows are scaled to unit
// length first; all-zero rows carry no direction and are assigned to the
// cluster whose centroid in the unnormalized embedding is nearest.
inline Labels spectral_cluster(const CompletedMatrix& ahat, int k, const KmeansConfig& cfg, bool spherical) {
  const int n = ahat.n();
  if (k < 1 || k > n) throw InvalidParameter("cluster count k must lie in [1, n]");
  if (k == 1) return Labels{LabelVector(n, 0), 1};
  if (k > ahat.rank_used()) throw InvalidParameter("completed matrix has fewer than k eigenvectors");

  const Matrix u = ahat.eigen().vectors.leftCols(k);
  if (!spherical) return kmeans(u, k, cfg).labels;

  constexpr double kZeroRow = 1e-12;
  std::vector<int> nonzero;
  nonzero.reserve(n);
  for (int i = 0; i < n; ++i)
    if (u.row(i).norm() > kZeroRow) nonzero.push_back(i);
  if (nonzero.empty()) throw DegenerateFit("all eigenvector rows are zero");

  const int m = static_cast<int>(nonzero.size());
  if (m < k) {
    // Too few directions: fall back to the raw embedding.
    return kmeans(u, k, cfg).labels;
  }
  Matrix x(m, k);
  for (int r = 0; r < m; ++r) x.row(r) = u.row(nonzero[r]).normalized();
  const KmeansResult fit = kmeans(x, k, cfg);

  LabelVector out(n, -1);
  for (int r = 0; r < m; ++r) out[nonzero[r]] = fit.labels[r];
  if (m < n) {
    Matrix raw_centroids = Matrix::Zero(k, k);
    std::vector<int> count(k, 0);
    for (int r = 0; r < m; ++r) {
      raw_centroids.row(fit.labels[r]) += u.row(nonzero[r]);
      ++count[fit.labels[r]];
    }
    for (int c = 0; c < k; ++c)
      if (count[c] > 0) raw_centroids.row(c) /= count[c];
    for (int i = 0; i < n; ++i) {
      if (out[i] >= 0) continue;
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        if (count[c] == 0) continue;
        const double dd = (u.row(i) - raw_centroids.row(c)).squaredNorm();
        if (dd < best_d) {
          best_d = dd;
          best = c;
        }
      }
      out[i] = best;
    }
  }
  return Labels{std::move(out), k};
}

struct Alignment {
  // permutation[e] = truth label matched to estimated label e, or -1.
  std::vector<int> permutation;
  double error_rate = 0.0;
};

// Minimal misclassification rate over label matchings. Exhaustive search when
// max(k_est, k_truth) <= 8, greedy on the confusion matrix above that.
inline Alignment align_labels(const Labels& est, const Labels& truth) {
  if (est.n() != truth.n()) throw InvalidInput("label vectors differ in length");
  const int n = est.n();
  const int m = std::max(est.k, truth.k);
  std::vector<std::vector<int>> conf(m, std::vector<int>(m, 0));
  for (int i = 0; i < n; ++i) ++conf[est[i]][truth[i]];

  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best_perm = perm;
  int best_match = -1;
  if (m <= 8) {
    do {
      int match = 0;
      for (int e = 0; e < m; ++e) match += conf[e][perm[e]];
      if (match > best_match) {
        best_match = match;
        best_perm = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    std::vector<char> used_e(m, 0), used_t(m, 0);
    best_match = 0;
    for (int step = 0; step < m; ++step) {
      int be = -1, bt = -1, bv = -1;
      for (int e = 0; e < m; ++e)
        for (int t = 0; t < m; ++t)
          if (!used_e[e] && !used_t[t] && conf[e][t] > bv) {
            bv = conf[e][t];
            be = e;
            bt = t;
          }
      used_e[be] = used_t[bt] = 1;
      best_perm[be] = bt;
      best_match += bv;
    }
  }

  Alignment out;
  out.permutation.assign(est.k, -1);
  for (int e = 0; e < est.k; ++e)
    if (best_perm[e] < truth.k) out.permutation[e] = best_perm[e];
  out.error_rate = n == 0 ? 0.0 : 1.0 - static_cast<double>(best_match) / n;
  return out;
}

}  // namespace netcv
