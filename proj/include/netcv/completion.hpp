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

// Rank-k completion of a partially observed symmetric matrix.
//
// For symmetric Y the singular values are |lambda_i| and the singular vectors
// are the eigenvectors (up to sign), so the rank-k truncated SVD equals
// sum over the k largest-|lambda| eigenpairs of lambda_i u_i u_i^T. The
// eigenpairs come from one Householder tridiagonalization (dsytrd), all
// eigenvalues of the tridiagonal factor (dsterf), MRRR eigenvectors for the
// selected index ranges only (dstemr), and a back-transformation (dormtr).

#pragma once

#include <Eigen/Dense>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "netcv/error.hpp"
#include "netcv/graph.hpp"
#include "netcv/split.hpp"

namespace netcv {

// Eigenpairs ordered by descending |value|. Columns of `vectors` are
// orthonormal; the first component above 1e-10 in magnitude is positive.
struct EigenPack {
  Vector values;
  Matrix vectors;

  int size() const { return static_cast<int>(values.size()); }

  // The leading k pairs.
  EigenPack head(int k) const {
    return EigenPack{values.head(k), vectors.leftCols(k)};
  }
};

namespace detail {

inline void check_lapack(lapack_int info, const char* routine) {
  if (info != 0)
    throw NumericalError(std::string(routine) + " failed with info=" + std::to_string(info));
}

inline void fix_signs(Matrix& v) {
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      if (std::abs(v(r, c)) > 1e-10) {
        if (v(r, c) < 0.0) v.col(c) = -v.col(c);
        break;
      }
    }
  }
}

inline void check_symmetric(const Matrix& m) {
  if (m.rows() != m.cols()) throw InvalidInput("matrix must be square");
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * scale) throw InvalidInput("matrix is not symmetric");
}

}  // namespace detail

// The k eigenpairs of symmetric m with largest |eigenvalue|. Ties in |value|
// prefer the larger algebraic eigenvalue.
inline EigenPack top_k_eigen(const Matrix& m, int k) {
  detail::check_symmetric(m);
  const lapack_int n = static_cast<lapack_int>(m.rows());
  if (k < 1 || k > n) throw InvalidParameter("eigenpair count k must lie in [1, n]");

  Matrix a = m;
  Vector d(n), e(std::max<lapack_int>(n, 1)), tau(std::max<lapack_int>(n - 1, 1));
  e.setZero();
  detail::check_lapack(
      LAPACKE_dsytrd(LAPACK_COL_MAJOR, 'U', n, a.data(), n, d.data(), e.data(), tau.data()),
      "dsytrd");

  // Ascending eigenvalues of the tridiagonal factor.
  Vector all_d = d;
  Vector all_e = e;
  detail::check_lapack(LAPACKE_dsterf(n, all_d.data(), all_e.data()), "dsterf");

  // Merge inward from both ends of the spectrum.
  lapack_int lo = 0, hi = n - 1;
  std::vector<lapack_int> order;  // ascending-index positions, by |value| desc
  order.reserve(k);
  while (static_cast<int>(order.size()) < k) {
    if (std::abs(all_d[hi]) >= std::abs(all_d[lo])) order.push_back(hi--);
    else order.push_back(lo++);
  }
  const lapack_int bottom = lo;         // indices [0, bottom)
  const lapack_int top = n - 1 - hi;    // indices [n - top, n)

  Matrix z(n, k);
  Vector w(n);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
  auto tridiag_vectors = [&](lapack_int il, lapack_int iu, double* out_values, double* out_vectors) {
    Vector dd = d, ee = e, ww(n);  // dstemr uses all n entries of W
    lapack_int found = 0;
    lapack_logical tryrac = 1;
    detail::check_lapack(
        LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'I', n, dd.data(), ee.data(), 0.0, 0.0, il, iu,
                       &found, ww.data(), out_vectors, n, iu - il + 1, isuppz.data(), &tryrac),
        "dstemr");
    if (found != iu - il + 1) throw NumericalError("dstemr returned too few eigenpairs");
    std::copy(ww.data(), ww.data() + found, out_values);
  };

  // z columns: bottom block first, then top block, both ascending.
  if (bottom > 0) tridiag_vectors(1, bottom, w.data(), z.data());
  if (top > 0) tridiag_vectors(n - top + 1, n, w.data() + bottom, z.data() + static_cast<std::size_t>(bottom) * n);

  detail::check_lapack(LAPACKE_dormtr(LAPACK_COL_MAJOR, 'L', 'U', 'N', n, k, a.data(), n,
                                      tau.data(), z.data(), n),
                       "dormtr");

  EigenPack pack;
  pack.values.resize(k);
  pack.vectors.resize(n, k);
  for (int c = 0; c < k; ++c) {
    const lapack_int idx = order[c];
    const lapack_int col = idx < bottom ? idx : bottom + (idx - (n - top));
    pack.values[c] = w[col];
    pack.vectors.col(c) = z.col(col);
  }
  detail::fix_signs(pack.vectors);
  return pack;
}

// A^(k) = S_H(Y, k) / w, held in factored form.
class CompletedMatrix {
 public:
  CompletedMatrix() = default;
  CompletedMatrix(EigenPack retained, double w) : pack_(std::move(retained)), w_(w) {}

  int n() const { return static_cast<int>(pack_.vectors.rows()); }
  int rank_used() const { return pack_.size(); }
  double w() const { return w_; }

  // Eigenpairs of the completed matrix itself (eigenvalues already divided by w).
  EigenPack eigen() const { return EigenPack{pack_.values / w_, pack_.vectors}; }

  // Dense n x n completed matrix.
  Matrix matrix() const {
    return pack_.vectors * (pack_.values / w_).asDiagonal() * pack_.vectors.transpose();
  }

 private:
  EigenPack pack_;
  double w_ = 1.0;
};

// Leading eigenpairs of one Y, reused for every rank k <= capacity().
class SpectralCache {
 public:
  SpectralCache() = default;
  SpectralCache(const Matrix& y, double w, int capacity)
      : pack_(top_k_eigen(y, capacity)), w_(w) {}

  int capacity() const { return pack_.size(); }

  CompletedMatrix complete(int k) const {
    if (k < 1 || k > capacity()) throw InvalidParameter("rank exceeds cached eigenpairs");
    return CompletedMatrix(pack_.head(k), w_);
  }

 private:
  EigenPack pack_;
  double w_ = 1.0;
};

inline CompletedMatrix complete_lowrank(const Matrix& y, int k, double w) {
  if (!(w > 0.0 && w <= 1.0)) throw InvalidParameter("training proportion w must lie in (0,1]");
  if (k < 1 || k > y.rows()) throw InvalidParameter("rank k must lie in [1, n]");
  return CompletedMatrix(top_k_eigen(y, k), w);
}

inline CompletedMatrix complete_lowrank(const PartialMatrix& y, int k, double w) {
  return complete_lowrank(y.matrix(), k, w);
}

}  // namespace netcv
