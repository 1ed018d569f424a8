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

// Graph and probability-matrix types, the four generative model families
// (affiliation SBM, SBM, DCBM, graphon), Bernoulli sampling and the edge
// density plug-in.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "netcv/error.hpp"
#include "netcv/rng.hpp"

namespace netcv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class ProbMatrix;

// Symmetric 0/1 adjacency matrix with zero diagonal.
class Graph {
 public:
  Graph() = default;

  explicit Graph(Matrix adj) : adj_(std::move(adj)) {
    if (adj_.rows() != adj_.cols()) throw InvalidInput("adjacency matrix must be square");
    const Eigen::Index n = adj_.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (adj_(j, j) != 0.0) throw InvalidInput("adjacency matrix must have zero diagonal");
      for (Eigen::Index i = 0; i < j; ++i) {
        const double v = adj_(i, j);
        if (v != 0.0 && v != 1.0) throw InvalidInput("adjacency entries must be 0 or 1");
        if (v != adj_(j, i)) throw InvalidInput("adjacency matrix must be symmetric");
      }
    }
  }

  static Graph empty(int n) { return Graph(Matrix::Zero(n, n), Trusted{}); }

  // Builds from an undirected edge list over nodes 0..n-1. Duplicates collapse;
  // self-loops are ignored.
  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    Matrix adj = Matrix::Zero(n, n);
    for (const auto& [u, v] : edges) {
      if (u < 0 || v < 0 || u >= n || v >= n) throw InvalidInput("edge endpoint out of range");
      if (u == v) continue;
      adj(u, v) = 1.0;
      adj(v, u) = 1.0;
    }
    return Graph(std::move(adj), Trusted{});
  }

  int n() const { return static_cast<int>(adj_.rows()); }
  const Matrix& adj() const { return adj_; }
  bool has_edge(int i, int j) const { return adj_(i, j) != 0.0; }

  long long edge_count() const {
    return static_cast<long long>(std::llround(adj_.sum() / 2.0));
  }

  Vector degrees() const { return adj_.rowwise().sum(); }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n(); ++i)
      for (int j = i + 1; j < n(); ++j)
        if (adj_(i, j) != 0.0) out.emplace_back(i, j);
    return out;
  }

  friend bool operator==(const Graph& a, const Graph& b) { return a.adj_ == b.adj_; }

 private:
  struct Trusted {};
  Graph(Matrix adj, Trusted) : adj_(std::move(adj)) {}

  Matrix adj_;

  friend Graph sample_adjacency(const ProbMatrix& p, Seed seed);
};

// Symmetric matrix of edge probabilities in [0, 1] with zero diagonal.
class ProbMatrix {
 public:
  ProbMatrix() = default;

  explicit ProbMatrix(Matrix p, double tol = 1e-12) : p_(std::move(p)) {
    if (p_.rows() != p_.cols()) throw InvalidInput("probability matrix must be square");
    const Eigen::Index n = p_.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (p_(j, j) != 0.0) throw InvalidInput("probability matrix must have zero diagonal");
      for (Eigen::Index i = 0; i < n; ++i) {
        const double v = p_(i, j);
        if (!(v >= 0.0 && v <= 1.0)) throw InvalidInput("probability entries must lie in [0,1]");
        if (std::abs(v - p_(j, i)) > tol) throw InvalidInput("probability matrix must be symmetric");
      }
    }
  }

  int n() const { return static_cast<int>(p_.rows()); }
  const Matrix& matrix() const { return p_; }
  double operator()(int i, int j) const { return p_(i, j); }

 private:
  Matrix p_;
};

// Community labels are 0-based: entries lie in {0, ..., k-1}.
using LabelVector = std::vector<int>;

namespace detail {

inline void check_labels(const LabelVector& labels, int k, bool require_cover) {
  if (k < 1) throw InvalidParameter("community count must be at least 1");
  std::vector<char> seen(k, 0);
  for (int c : labels) {
    if (c < 0 || c >= k) throw InvalidParameter("label out of range [0, k)");
    seen[c] = 1;
  }
  if (require_cover && std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw InvalidParameter("labels must cover every community");
}

inline void check_block_matrix(const Matrix& b, int k) {
  if (b.rows() != k || b.cols() != k) throw InvalidParameter("block matrix must be k x k");
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (!(b(i, j) >= 0.0 && b(i, j) <= 1.0)) throw InvalidParameter("block probabilities must lie in [0,1]");
      if (b(i, j) != b(j, i)) throw InvalidParameter("block matrix must be symmetric");
    }
}

}  // namespace detail

struct SbmParams {
  int k = 1;
  Matrix b;
  LabelVector labels;
};

struct AffiliationParams {
  int k = 1;
  double p_wc = 0.0;
  double p_bc = 0.0;
  LabelVector labels;

  // The equivalent general-SBM block matrix.
  Matrix block_matrix() const {
    Matrix b = Matrix::Constant(k, k, p_bc);
    b.diagonal().setConstant(p_wc);
    return b;
  }
};

struct DcbmParams {
  int k = 1;
  Matrix b;
  LabelVector labels;
  Vector theta;
};

struct GraphonSpec {
  std::function<double(double, double)> f;
  Vector xi;
};

using ModelSpec = std::variant<SbmParams, AffiliationParams, DcbmParams, GraphonSpec>;

// Rescales theta within each community so that the squared entries of
// community g sum to its size n_g.
inline Vector normalize_theta(const Vector& theta_raw, const LabelVector& labels) {
  if (theta_raw.size() != static_cast<Eigen::Index>(labels.size()))
    throw InvalidInput("theta and labels differ in length");
  int k = 0;
  for (int c : labels) {
    if (c < 0) throw InvalidParameter("negative label");
    k = std::max(k, c + 1);
  }
  std::vector<double> sumsq(k, 0.0);
  std::vector<double> size(k, 0.0);
  for (Eigen::Index i = 0; i < theta_raw.size(); ++i) {
    if (!(theta_raw[i] > 0.0)) throw InvalidParameter("theta entries must be strictly positive");
    sumsq[labels[i]] += theta_raw[i] * theta_raw[i];
    size[labels[i]] += 1.0;
  }
  Vector theta(theta_raw.size());
  for (Eigen::Index i = 0; i < theta_raw.size(); ++i) {
    const int c = labels[i];
    theta[i] = theta_raw[i] * std::sqrt(size[c] / sumsq[c]);
  }
  return theta;
}

namespace detail {

inline Matrix block_prob(const Matrix& b, const LabelVector& labels) {
  const int n = static_cast<int>(labels.size());
  Matrix p(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) p(i, j) = (i == j) ? 0.0 : b(labels[i], labels[j]);
  return p;
}

}  // namespace detail

inline ProbMatrix build_prob(const SbmParams& s) {
  detail::check_labels(s.labels, s.k, true);
  detail::check_block_matrix(s.b, s.k);
  return ProbMatrix(detail::block_prob(s.b, s.labels));
}

inline ProbMatrix build_prob(const AffiliationParams& s) {
  if (!(s.p_wc >= 0.0 && s.p_wc <= 1.0 && s.p_bc >= 0.0 && s.p_bc <= 1.0))
    throw InvalidParameter("affiliation probabilities must lie in [0,1]");
  detail::check_labels(s.labels, s.k, true);
  return ProbMatrix(detail::block_prob(s.block_matrix(), s.labels));
}

inline ProbMatrix build_prob(const DcbmParams& s) {
  detail::check_labels(s.labels, s.k, true);
  detail::check_block_matrix(s.b, s.k);
  const int n = static_cast<int>(s.labels.size());
  if (s.theta.size() != n) throw InvalidParameter("theta must have one entry per node");
  for (int i = 0; i < n; ++i)
    if (!(s.theta[i] > 0.0)) throw InvalidParameter("theta entries must be strictly positive");
  Matrix p(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (i == j) {
        p(i, j) = 0.0;
        continue;
      }
      const double v = s.theta[i] * s.theta[j] * s.b(s.labels[i], s.labels[j]);
      if (v > 1.0) throw InvalidParameter("DCBM product theta_i theta_j B exceeds 1");
      p(i, j) = v;
    }
  return ProbMatrix(std::move(p));
}

inline ProbMatrix build_prob(const GraphonSpec& s) {
  if (!s.f) throw InvalidParameter("graphon function is empty");
  const int n = static_cast<int>(s.xi.size());
  for (int i = 0; i < n; ++i)
    if (!(s.xi[i] >= 0.0 && s.xi[i] <= 1.0)) throw InvalidParameter("latent positions must lie in [0,1]");
  Matrix p = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      const double v = s.f(s.xi[i], s.xi[j]);
      if (std::abs(v - s.f(s.xi[j], s.xi[i])) > 1e-12) throw InvalidParameter("graphon is not symmetric");
      if (!(v >= 0.0 && v <= 1.0)) throw InvalidParameter("graphon values must lie in [0,1]");
      p(i, j) = v;
      p(j, i) = v;
    }
  return ProbMatrix(std::move(p));
}

inline ProbMatrix build_prob(const ModelSpec& spec) {
  return std::visit([](const auto& s) { return build_prob(s); }, spec);
}

// Independent Bernoulli draws on the upper triangle, mirrored below.
inline Graph sample_adjacency(const ProbMatrix& p, Seed seed) {
  Engine eng = make_engine(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n = p.n();
  Matrix adj = Matrix::Zero(n, n);
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      if (unif(eng) < p(i, j)) {
        adj(i, j) = 1.0;
        adj(j, i) = 1.0;
      }
    }
  return Graph(std::move(adj), Graph::Trusted{});
}

// Plug-in sparsity estimate: sum_ij A_ij / (n (n - 1)).
inline double edge_density(const Graph& a) {
  const int n = a.n();
  if (n < 2) throw InvalidInput("edge density needs at least two nodes");
  return a.adj().sum() / (static_cast<double>(n) * (n - 1));
}

}  // namespace netcv
