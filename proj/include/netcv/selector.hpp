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

// Penalized network cross-validation: candidate scoring, aggregation across
// splits, the adaptive search over K, the Bethe-Hessian estimate of K, and
// the two-step comparisons between model classes.

#pragma once

#include <Eigen/Dense>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netcv/error.hpp"
#include "netcv/graph.hpp"
#include "netcv/penalty.hpp"
#include "netcv/workspace.hpp"

namespace netcv {

struct CandidateScore {
  CandidateModel model;
  double complexity = 0.0;
  double mean_loss = 0.0;       // unpenalized
  double mean_penalized = 0.0;
};

struct TracePoint {
  int replication = -1;  // -1: pooled over all replications
  int k = 0;
  double loss = 0.0;     // mean penalized loss
};

struct SelectionResult {
  CandidateModel chosen;
  std::optional<int> k_hat;
  Comparison context = Comparison::WithinSbm;
  double lambda = 0.0;
  std::vector<CandidateScore> table;
  Matrix per_replicate;            // usable splits x candidates, penalized
  std::vector<int> replicate_ids;  // replication index of each row
  std::vector<CandidateModel> replication_winners;
  std::vector<TracePoint> trace;
  std::vector<std::string> warnings;
};

// True when (la, a) should be preferred over (lb, b): smaller loss, then
// smaller complexity, then smaller k (block models only), then family order.
inline bool preferred(double la, double da, const CandidateModel& a, double lb, double db, const CandidateModel& b) {
  if (la != lb) return la < lb;
  if (da != db) return da < db;
  const bool blocks = a.family != Family::Graphon && b.family != Family::Graphon;
  if (blocks && a.k != b.k) return a.k < b.k;
  return static_cast<int>(a.family) < static_cast<int>(b.family);
}

// Aggregates an unpenalized loss matrix (splits x candidates). Rows holding
// any NaN are dropped. Vote takes the mode of per-replication winners; every
// other scheme takes the argmin of the pooled mean.
inline SelectionResult aggregate_selection(const Matrix& unpenalized, const std::vector<int>& replication_of,
                                           const std::vector<CandidateModel>& candidates,
                                           const std::vector<double>& complexity, double lambda, Scheme scheme) {
  const int m = static_cast<int>(candidates.size());
  if (m < 1) throw InvalidParameter("at least one candidate is required");
  if (unpenalized.cols() != m || static_cast<int>(complexity.size()) != m ||
      static_cast<Eigen::Index>(replication_of.size()) != unpenalized.rows())
    throw InvalidInput("loss table dimensions disagree");

  SelectionResult out;
  out.lambda = lambda;
  std::vector<int> rows;
  for (Eigen::Index r = 0; r < unpenalized.rows(); ++r)
    if (unpenalized.row(r).allFinite()) rows.push_back(static_cast<int>(r));
  if (rows.empty()) throw SelectionError("no split produced a usable loss for every candidate");
  const int dropped = static_cast<int>(unpenalized.rows()) - static_cast<int>(rows.size());
  if (dropped > 0) out.warnings.push_back(std::to_string(dropped) + " split(s) skipped after degenerate fits");

  out.per_replicate.resize(static_cast<Eigen::Index>(rows.size()), m);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int c = 0; c < m; ++c)
      out.per_replicate(static_cast<Eigen::Index>(i), c) = unpenalized(rows[i], c) + complexity[c] * lambda;
    out.replicate_ids.push_back(replication_of[rows[i]]);
  }

  auto argmin = [&](const std::vector<double>& mean) {
    int best = 0;
    for (int c = 1; c < m; ++c)
      if (preferred(mean[c], complexity[c], candidates[c], mean[best], complexity[best], candidates[best])) best = c;
    return best;
  };

  std::vector<double> pooled(m, 0.0), raw(m, 0.0);
  for (int row : rows)
    for (int c = 0; c < m; ++c) raw[c] += unpenalized(row, c);
  for (int c = 0; c < m; ++c) {
    raw[c] /= static_cast<double>(rows.size());
    pooled[c] = raw[c] + complexity[c] * lambda;
    out.table.push_back(CandidateScore{candidates[c], complexity[c], raw[c], pooled[c]});
  }

  if (scheme != Scheme::Vote) {
    out.chosen = candidates[argmin(pooled)];
    return out;
  }

  std::map<int, std::vector<int>> by_rep;
  for (int row : rows) by_rep[replication_of[row]].push_back(row);
  std::vector<int> votes(m, 0);
  for (const auto& [rep, members] : by_rep) {
    std::vector<double> mean(m, 0.0);
    for (int row : members)
      for (int c = 0; c < m; ++c) mean[c] += unpenalized(row, c);
    for (int c = 0; c < m; ++c) mean[c] = mean[c] / static_cast<double>(members.size()) + complexity[c] * lambda;
    const int w = argmin(mean);
    ++votes[w];
    out.replication_winners.push_back(candidates[w]);
  }
  int best = 0;
  for (int c = 1; c < m; ++c) {
    if (votes[c] > votes[best] ||
        (votes[c] == votes[best] && preferred(0.0, complexity[c], candidates[c], 0.0, complexity[best], candidates[best])))
      best = c;
  }
  out.chosen = candidates[best];
  return out;
}

// Scores every candidate on the workspace's splits.
inline SelectionResult run_selection(CvWorkspace& ws, const std::vector<CandidateModel>& candidates, double lambda,
                                     Comparison context) {
  if (candidates.empty()) throw InvalidParameter("at least one candidate is required");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidParameter("penalty lambda must be finite and >= 0");
  const int n = ws.graph().n();
  std::vector<double> d;
  for (const auto& c : candidates) d.push_back(model_complexity(c, context, n));

  Matrix table(ws.size(), static_cast<Eigen::Index>(candidates.size()));
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const auto col = ws.losses(candidates[c]);
    for (int s = 0; s < ws.size(); ++s) table(s, static_cast<Eigen::Index>(c)) = col[s];
  }
  std::vector<int> reps(ws.size());
  for (int s = 0; s < ws.size(); ++s) reps[s] = ws.replication_of(s);

  SelectionResult out = aggregate_selection(table, reps, candidates, d, lambda, ws.config().scheme);
  out.context = context;
  std::vector<std::string> w = ws.warnings();
  const auto notes = ws.fit_notes();
  w.insert(w.end(), notes.begin(), notes.end());
  w.insert(w.end(), out.warnings.begin(), out.warnings.end());
  out.warnings = std::move(w);
  return out;
}

inline SelectionResult run_selection(const Graph& a, const std::vector<CandidateModel>& candidates, const CvConfig& cv,
                                     const PenaltyConfig& pen, FitOptions opts = {}) {
  CvWorkspace ws(a, cv, std::move(opts));
  return run_selection(ws, candidates, resolve_lambda(a, pen), pen.context);
}

struct SearchOutcome {
  int k_hat = 1;
  std::vector<std::pair<int, double>> trace;
};

// Evaluates K = 1, 2, ... up to k_max and keeps the best loss; stops once
// `patience` consecutive K fail to improve it strictly. Non-finite losses
// count as failures.
inline SearchOutcome adaptive_search(const std::function<double(int)>& loss_of_k, int k_max, int patience = 5) {
  if (k_max < 1) throw InvalidParameter("k_max must be at least 1");
  if (patience < 1) throw InvalidParameter("patience must be at least 1");
  SearchOutcome out;
  double best = std::numeric_limits<double>::infinity();
  int strikes = 0;
  for (int k = 1; k <= k_max; ++k) {
    const double l = loss_of_k(k);
    out.trace.emplace_back(k, l);
    if (std::isfinite(l) && l < best) {
      best = l;
      out.k_hat = k;
      strikes = 0;
    } else if (++strikes >= patience) {
      break;
    }
  }
  return out;
}

struct KSearchResult {
  int k_hat = 1;
  std::vector<TracePoint> trace;
  std::vector<int> replication_k;  // vote scheme only
  std::vector<std::string> warnings;
};

// Adaptive search over the SBM community count. Vote runs one search per
// replication and returns the most frequent K (smaller K on ties); other
// schemes search on the pooled mean.
inline KSearchResult adaptive_k(CvWorkspace& ws, double lambda, int k_max = 0, int patience = 5) {
  const int n = ws.graph().n();
  if (k_max <= 0 || k_max > n) k_max = n;
  KSearchResult out;
  std::map<int, std::vector<double>> cache;
  auto losses_for = [&](int k) -> const std::vector<double>& {
    auto it = cache.find(k);
    if (it == cache.end()) it = cache.emplace(k, ws.losses(CandidateModel::sbm(k))).first;
    return it->second;
  };
  auto mean_over = [&](int k, int rep) {
    const auto& l = losses_for(k);
    double sum = 0.0;
    int count = 0;
    for (int s = 0; s < ws.size(); ++s) {
      if ((rep >= 0 && ws.replication_of(s) != rep) || !std::isfinite(l[s])) continue;
      sum += l[s];
      ++count;
    }
    if (count == 0) return std::numeric_limits<double>::quiet_NaN();
    return sum / count + model_complexity(CandidateModel::sbm(k), Comparison::WithinSbm, n) * lambda;
  };

  if (ws.config().scheme != Scheme::Vote) {
    const auto s = adaptive_search([&](int k) { return mean_over(k, -1); }, k_max, patience);
    out.k_hat = s.k_hat;
    for (auto [k, l] : s.trace) out.trace.push_back(TracePoint{-1, k, l});
  } else {
    std::map<int, int> votes;
    for (int r = 0; r < ws.replications(); ++r) {
      const auto s = adaptive_search([&](int k) { return mean_over(k, r); }, k_max, patience);
      out.replication_k.push_back(s.k_hat);
      ++votes[s.k_hat];
      for (auto [k, l] : s.trace) out.trace.push_back(TracePoint{r, k, l});
    }
    int best_k = 1, best_votes = -1;
    for (auto [k, v] : votes)
      if (v > best_votes) {
        best_votes = v;
        best_k = k;
      }
    out.k_hat = best_k;
  }
  out.warnings = ws.warnings();
  const auto notes = ws.fit_notes();
  out.warnings.insert(out.warnings.end(), notes.begin(), notes.end());
  return out;
}

inline KSearchResult adaptive_k(const Graph& a, const CvConfig& cv, const PenaltyConfig& pen, int k_max = 0,
                                FitOptions opts = {}) {
  CvWorkspace ws(a, cv, std::move(opts));
  return adaptive_k(ws, resolve_lambda(a, pen.in_context(Comparison::WithinSbm)), k_max);
}

// Number of negative eigenvalues of a symmetric matrix, from the inertia of
// its Bunch-Kaufman LDL^T factorization.
inline int negative_inertia(const Matrix& h) {
  detail::check_symmetric(h);
  const lapack_int n = static_cast<lapack_int>(h.rows());
  if (n == 0) return 0;
  Matrix f = h;
  std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', n, f.data(), n, ipiv.data());
  if (info < 0) detail::check_lapack(info, "dsytrf");
  int negative = 0;
  for (lapack_int i = 0; i < n; ++i) {
    if (ipiv[i] > 0) {
      if (f(i, i) < 0.0) ++negative;
      continue;
    }
    const double a = f(i, i), b = f(i + 1, i), c = f(i + 1, i + 1);
    const double det = a * c - b * b;
    if (det < 0.0) negative += 1;
    else if (det > 0.0 && a + c < 0.0) negative += 2;
    else if (det == 0.0 && a + c < 0.0) negative += 1;
    ++i;
  }
  return negative;
}

// Bethe-Hessian estimate of K: the number of negative eigenvalues of
// H(r) = (r^2 - 1) I - r A + D with r = sqrt(mean degree), clamped to [1, k_max].
inline int bhmc_k(const Graph& a, int k_max) {
  if (k_max < 1) throw InvalidParameter("k_max must be at least 1");
  const int n = a.n();
  if (n == 0) throw EstimationError("graph has no nodes");
  const Vector deg = a.adj().rowwise().sum();
  const double mean_degree = deg.sum() / n;
  if (mean_degree <= 0.0) throw EstimationError("graph has no edges");
  const double r = std::sqrt(mean_degree);
  Matrix h = -r * a.adj();
  h.diagonal() = deg.array() + (r * r - 1.0);
  return std::clamp(negative_inertia(h), 1, k_max);
}

enum class ComparisonPair { AffiliationVsSbm, SbmVsDcbm, SbmVsGraphon, DcbmVsGraphon };

inline const char* to_string(ComparisonPair p) {
  switch (p) {
    case ComparisonPair::AffiliationVsSbm: return "am-sbm";
    case ComparisonPair::SbmVsDcbm: return "sbm-dcbm";
    case ComparisonPair::SbmVsGraphon: return "sbm-graphon";
    case ComparisonPair::DcbmVsGraphon: return "dcbm-graphon";
  }
  return "?";
}

inline ComparisonPair parse_pair(const std::string& s) {
  if (s == "am-sbm" || s == "affiliation-sbm") return ComparisonPair::AffiliationVsSbm;
  if (s == "sbm-dcbm") return ComparisonPair::SbmVsDcbm;
  if (s == "sbm-graphon") return ComparisonPair::SbmVsGraphon;
  if (s == "dcbm-graphon") return ComparisonPair::DcbmVsGraphon;
  throw InvalidParameter("unknown comparison pair: " + s);
}

inline Comparison pair_context(ComparisonPair p) {
  switch (p) {
    case ComparisonPair::AffiliationVsSbm: return Comparison::AffiliationVsSbm;
    case ComparisonPair::SbmVsDcbm: return Comparison::SbmVsDcbm;
    case ComparisonPair::SbmVsGraphon:
    case ComparisonPair::DcbmVsGraphon: return Comparison::BlockVsGraphon;
  }
  return Comparison::WithinSbm;
}

struct ClassOptions {
  int k_max = 0;               // 0 means n
  std::optional<int> fixed_k;  // skips the K step
  double bandwidth = 0.0;
  KmeansConfig kmeans;
};

// Penalty for the K step: the explicit value when one is given, otherwise
// the block rule.
inline double k_step_lambda(const Graph& a, const PenaltyConfig& pen) {
  PenaltyConfig p = pen.in_context(Comparison::WithinSbm);
  if (p.rule != LambdaRule::Explicit) p.rule = LambdaRule::Auto;
  return resolve_lambda(a, p);
}

// Two-step comparison between model classes on an existing workspace.
// Step 1 estimates K (adaptive search for am-sbm and sbm-graphon,
// Bethe-Hessian for sbm-dcbm and dcbm-graphon); step 2 scores the two
// candidates at that K on the same splits. In sbm-dcbm both candidates use
// spherical labels.
inline SelectionResult class_selection(CvWorkspace& ws, ComparisonPair pair, const PenaltyConfig& pen,
                                       const std::optional<Vector>& known_theta = std::nullopt,
                                       const ClassOptions& opts = {}) {
  const Graph& a = ws.graph();
  const int n = a.n();
  const int k_max = (opts.k_max <= 0 || opts.k_max > n) ? n : opts.k_max;
  if (pair == ComparisonPair::DcbmVsGraphon && !known_theta)
    throw InvalidParameter("dcbm-graphon needs known degree parameters");
  ws.set_known_theta(pair == ComparisonPair::DcbmVsGraphon ? known_theta : std::nullopt);
  ws.set_spherical_sbm(false);

  int k_hat = 0;
  std::vector<TracePoint> trace;
  if (opts.fixed_k) {
    k_hat = *opts.fixed_k;
    if (k_hat < 1 || k_hat > n) throw InvalidParameter("fixed K must lie in [1, n]");
  } else if (pair == ComparisonPair::AffiliationVsSbm || pair == ComparisonPair::SbmVsGraphon) {
    auto ks = adaptive_k(ws, k_step_lambda(a, pen), k_max);
    k_hat = ks.k_hat;
    trace = std::move(ks.trace);
  } else {
    k_hat = bhmc_k(a, k_max);
  }

  std::vector<CandidateModel> cands;
  switch (pair) {
    case ComparisonPair::AffiliationVsSbm:
      cands = {CandidateModel::affiliation(k_hat), CandidateModel::sbm(k_hat)};
      break;
    case ComparisonPair::SbmVsDcbm:
      ws.set_spherical_sbm(true);
      cands = {CandidateModel::sbm(k_hat), CandidateModel::dcbm(k_hat)};
      break;
    case ComparisonPair::SbmVsGraphon:
      cands = {CandidateModel::sbm(k_hat), CandidateModel::graphon()};
      break;
    case ComparisonPair::DcbmVsGraphon:
      cands = {CandidateModel::dcbm(k_hat), CandidateModel::graphon()};
      break;
  }
  const PenaltyConfig step2 = pen.in_context(pair_context(pair));
  SelectionResult out = run_selection(ws, cands, resolve_lambda(a, step2), step2.context);
  ws.set_spherical_sbm(false);
  out.k_hat = k_hat;
  out.trace = std::move(trace);
  return out;
}

inline SelectionResult class_selection(const Graph& a, ComparisonPair pair, const CvConfig& cv,
                                       const PenaltyConfig& pen, const std::optional<Vector>& known_theta = std::nullopt,
                                       const ClassOptions& opts = {}) {
  FitOptions fo;
  fo.kmeans = opts.kmeans;
  fo.bandwidth = opts.bandwidth;
  CvWorkspace ws(a, cv, fo);
  return class_selection(ws, pair, pen, known_theta, opts);
}

}  // namespace netcv
