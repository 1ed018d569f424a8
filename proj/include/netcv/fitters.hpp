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

// Estimators of the probability matrix from the training pairs of one split.
//
// Every fit accepts the observation as a dense symmetric matrix so the same
// code runs on sampled graphs and on noiseless probability matrices. Sums
// run over unordered training pairs; the ordered-pair convention doubles
// numerator and denominator alike. The returned matrix is clamped to [0, 1]
// once, at the end, and has a zero diagonal.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "netcv/clustering.hpp"
#include "netcv/completion.hpp"
#include "netcv/error.hpp"
#include "netcv/graph.hpp"
#include "netcv/split.hpp"

namespace netcv {

enum class Family { Affiliation = 0, Sbm = 1, Dcbm = 2, Graphon = 3 };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::Affiliation: return "AM";
    case Family::Sbm: return "SBM";
    case Family::Dcbm: return "DCBM";
    case Family::Graphon: return "graphon";
  }
  return "?";
}

struct SbmEstimate {
  Matrix b;
};

struct AffiliationEstimate {
  double p_wc = 0.0;
  double p_bc = 0.0;
};

struct DcbmEstimate {
  Vector theta_scaled;  // theta'
  Matrix b_scaled;      // B'
};

struct FitResult {
  Matrix phat;
  std::optional<Labels> labels;
  Family family = Family::Sbm;
  std::variant<std::monostate, SbmEstimate, AffiliationEstimate, DcbmEstimate> params;
  bool degenerate = false;
  std::string warning;
};

namespace detail {

inline void finish_prob(Matrix& p) {
  p = p.cwiseMax(0.0).cwiseMin(1.0);
  p.diagonal().setZero();
}

inline void check_fit_inputs(const Matrix& obs, const EdgeSplit& split, const Labels& labels) {
  if (obs.rows() != obs.cols()) throw InvalidInput("observation matrix must be square");
  if (obs.rows() != split.n()) throw InvalidInput("observation and split sizes differ");
  if (labels.n() != obs.rows()) throw InvalidInput("labels and observation sizes differ");
  for (int c : labels.assignments)
    if (c < 0 || c >= labels.k) throw InvalidParameter("label out of range [0, k)");
}

struct TrainingTotals {
  double sum = 0.0;
  long long count = 0;
  double density() const { return count > 0 ? sum / count : 0.0; }
};

inline TrainingTotals training_totals(const Matrix& obs, const EdgeSplit& split) {
  TrainingTotals t;
  const auto& m = split.training_mask();
  const int n = split.n();
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i)
      if (m(i, j)) {
        t.sum += obs(i, j);
        ++t.count;
      }
  if (t.count == 0) throw DegenerateFit("split has no training pairs");
  return t;
}

}  // namespace detail

// Block averages over training pairs. A block pair with no training pairs
// falls back to the overall training density.
inline FitResult fit_sbm(const Matrix& obs, const EdgeSplit& split, const Labels& labels) {
  detail::check_fit_inputs(obs, split, labels);
  const auto totals = detail::training_totals(obs, split);
  const int n = split.n();
  const int k = labels.k;
  Matrix sum = Matrix::Zero(k, k);
  Matrix count = Matrix::Zero(k, k);
  const auto& m = split.training_mask();
  for (int j = 1; j < n; ++j) {
    const int cj = labels[j];
    for (int i = 0; i < j; ++i) {
      if (!m(i, j)) continue;
      const int ci = labels[i];
      sum(ci, cj) += obs(i, j);
      count(ci, cj) += 1.0;
      if (ci != cj) {
        sum(cj, ci) += obs(i, j);
        count(cj, ci) += 1.0;
      }
    }
  }
  Matrix b(k, k);
  for (int a = 0; a < k; ++a)
    for (int c = 0; c < k; ++c) b(a, c) = count(a, c) > 0 ? sum(a, c) / count(a, c) : totals.density();

  Matrix p(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) p(i, j) = b(labels[i], labels[j]);
  detail::finish_prob(p);

  FitResult out;
  out.phat = std::move(p);
  out.labels = labels;
  out.family = Family::Sbm;
  out.params = SbmEstimate{std::move(b)};
  return out;
}

// Two-parameter fit: one probability within communities, one between.
inline FitResult fit_affiliation(const Matrix& obs, const EdgeSplit& split, const Labels& labels) {
  detail::check_fit_inputs(obs, split, labels);
  const int n = split.n();
  double within_sum = 0.0, between_sum = 0.0;
  long long within_count = 0, between_count = 0;
  const auto& m = split.training_mask();
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      if (!m(i, j)) continue;
      if (labels[i] == labels[j]) {
        within_sum += obs(i, j);
        ++within_count;
      } else {
        between_sum += obs(i, j);
        ++between_count;
      }
    }
  if (within_count == 0 && between_count == 0) throw DegenerateFit("split has no training pairs");

  FitResult out;
  double p_wc = within_count > 0 ? within_sum / within_count : 0.0;
  double p_bc = between_count > 0 ? between_sum / between_count : 0.0;
  if (between_count == 0) {
    p_bc = p_wc;
    out.degenerate = true;
    out.warning = "no between-community training pairs; p_bc set to p_wc";
  } else if (within_count == 0) {
    p_wc = p_bc;
    out.degenerate = true;
    out.warning = "no within-community training pairs; p_wc set to p_bc";
  }

  Matrix p(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) p(i, j) = labels[i] == labels[j] ? p_wc : p_bc;
  detail::finish_prob(p);

  out.phat = std::move(p);
  out.labels = labels;
  out.family = Family::Affiliation;
  out.params = AffiliationEstimate{p_wc, p_bc};
  return out;
}

// Degree-corrected fit. theta' is the row norm of the top-k eigenvector
// matrix of the completed matrix, or theta_i / sqrt(n_{c_i}) when theta is
// known. B'_{ab} = (training edge sum in block pair ab) / (training sum of
// theta'_i theta'_j in ab); a block pair whose theta-product sum vanishes
// gets the training density divided by the mean training theta-product.
inline FitResult fit_dcbm(const Matrix& obs, const EdgeSplit& split, const CompletedMatrix& ahat, int k,
                          const Labels& labels, const std::optional<Vector>& known_theta = std::nullopt) {
  detail::check_fit_inputs(obs, split, labels);
  if (k < 1) throw InvalidParameter("rank k must be at least 1");
  const int n = split.n();
  const auto totals = detail::training_totals(obs, split);

  Vector theta(n);
  if (known_theta) {
    if (known_theta->size() != n) throw InvalidParameter("known theta has the wrong length");
    const auto sizes = labels.sizes();
    for (int i = 0; i < n; ++i) {
      if (!((*known_theta)[i] > 0.0)) throw InvalidParameter("known theta must be strictly positive");
      theta[i] = (*known_theta)[i] / std::sqrt(static_cast<double>(sizes[labels[i]]));
    }
  } else {
    if (k > ahat.rank_used()) throw InvalidParameter("completed matrix has fewer than k eigenvectors");
    theta = ahat.eigen().vectors.leftCols(k).rowwise().norm();
  }
  if (theta.maxCoeff() <= 0.0) throw DegenerateFit("all degree estimates are zero");

  const int kb = labels.k;
  Matrix sum = Matrix::Zero(kb, kb);
  Matrix weight = Matrix::Zero(kb, kb);
  double weight_total = 0.0;
  const auto& m = split.training_mask();
  for (int j = 1; j < n; ++j) {
    const int cj = labels[j];
    for (int i = 0; i < j; ++i) {
      if (!m(i, j)) continue;
      const int ci = labels[i];
      const double tt = theta[i] * theta[j];
      weight_total += tt;
      sum(ci, cj) += obs(i, j);
      weight(ci, cj) += tt;
      if (ci != cj) {
        sum(cj, ci) += obs(i, j);
        weight(cj, ci) += tt;
      }
    }
  }
  if (weight_total <= 0.0) throw DegenerateFit("degree estimates vanish on every training pair");
  const double fallback = totals.density() / (weight_total / static_cast<double>(totals.count));

  Matrix b(kb, kb);
  for (int a = 0; a < kb; ++a)
    for (int c = 0; c < kb; ++c) b(a, c) = weight(a, c) > 0.0 ? sum(a, c) / weight(a, c) : fallback;

  Matrix p(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) p(i, j) = theta[i] * theta[j] * b(labels[i], labels[j]);
  detail::finish_prob(p);

  FitResult out;
  out.phat = std::move(p);
  out.labels = labels;
  out.family = Family::Dcbm;
  out.params = DcbmEstimate{std::move(theta), std::move(b)};
  return out;
}

inline double default_bandwidth(int n) { return std::sqrt(std::log(static_cast<double>(n)) / n); }

// Position (1-based) of the lower h-quantile among m sorted values.
inline int quantile_rank(double h, int m) {
  const int r = static_cast<int>(std::ceil(h * m - 1e-9));
  return std::clamp(r, 1, m);
}

// Squared neighborhood-smoothing distances
//   d2(i, i') = max_{k != i, i'} |<Y_i - Y_i', Y_k>| / n.
inline Matrix ns_squared_distances(const Matrix& y) {
  const int n = static_cast<int>(y.rows());
  const Matrix g = y * y;  // g(k, i) = <Y_k, Y_i>
  Matrix d2 = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double* gi = g.col(i).data();
    for (int ip = i + 1; ip < n; ++ip) {
      const double* gp = g.col(ip).data();
      double best = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == ip) continue;
        best = std::max(best, std::abs(gi[k] - gp[k]));
      }
      d2(i, ip) = d2(ip, i) = best / n;
    }
  }
  return d2;
}

// Neighborhood smoothing on the partially observed matrix. Node i's
// neighborhood is every i' != i whose distance is at most the lower
// h-quantile of i's distances (ties included); P~_ij averages Y_{i'j} over
// that neighborhood. The result is symmetrized and divided by w.
inline FitResult fit_graphon_ns(const PartialMatrix& y, double w, double h) {
  const int n = y.n();
  if (n < 3) throw InvalidInput("neighborhood smoothing needs at least three nodes");
  if (!(h > 0.0 && h < 1.0)) throw InvalidParameter("bandwidth h must lie in (0,1)");
  if (!(w > 0.0 && w <= 1.0)) throw InvalidParameter("training proportion w must lie in (0,1]");

  const Matrix d2 = ns_squared_distances(y.matrix());
  const int rank = quantile_rank(h, n - 1);
  Matrix weights = Matrix::Zero(n, n);  // row i: 1/|N_i| on N_i
  std::vector<double> row;
  row.reserve(n - 1);
  for (int i = 0; i < n; ++i) {
    row.clear();
    for (int ip = 0; ip < n; ++ip)
      if (ip != i) row.push_back(d2(i, ip));
    std::nth_element(row.begin(), row.begin() + (rank - 1), row.end());
    const double q = row[rank - 1];
    int size = 0;
    for (int ip = 0; ip < n; ++ip)
      if (ip != i && d2(i, ip) <= q) ++size;
    for (int ip = 0; ip < n; ++ip)
      if (ip != i && d2(i, ip) <= q) weights(i, ip) = 1.0 / size;
  }
  const Matrix smooth = weights * y.matrix();
  Matrix p = (smooth + smooth.transpose()) / (2.0 * w);
  detail::finish_prob(p);

  FitResult out;
  out.phat = std::move(p);
  out.family = Family::Graphon;
  return out;
}

inline FitResult fit_graphon_ns(const PartialMatrix& y, double w) {
  return fit_graphon_ns(y, w, default_bandwidth(y.n()));
}

inline FitResult fit_sbm(const Graph& a, const EdgeSplit& split, const Labels& labels) {
  return fit_sbm(a.adj(), split, labels);
}

inline FitResult fit_affiliation(const Graph& a, const EdgeSplit& split, const Labels& labels) {
  return fit_affiliation(a.adj(), split, labels);
}

inline FitResult fit_dcbm(const Graph& a, const EdgeSplit& split, const CompletedMatrix& ahat, int k,
                          const Labels& labels, const std::optional<Vector>& known_theta = std::nullopt) {
  return fit_dcbm(a.adj(), split, ahat, k, labels, known_theta);
}

}  // namespace netcv
