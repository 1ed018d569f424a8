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

// Candidate models, complexity terms, penalty schedules and the penalized
// held-out loss.

#pragma once

#include <Eigen/Dense>

#include <cctype>
#include <cmath>
#include <compare>
#include <string>
#include <tuple>

#include "netcv/error.hpp"
#include "netcv/fitters.hpp"
#include "netcv/graph.hpp"
#include "netcv/split.hpp"

namespace netcv {

struct CandidateModel {
  Family family = Family::Sbm;
  int k = 1;  // 0 for the graphon

  static CandidateModel affiliation(int k) { return {Family::Affiliation, k}; }
  static CandidateModel sbm(int k) { return {Family::Sbm, k}; }
  static CandidateModel dcbm(int k) { return {Family::Dcbm, k}; }
  static CandidateModel graphon() { return {Family::Graphon, 0}; }

  friend auto operator<=>(const CandidateModel&, const CandidateModel&) = default;
};

inline std::string to_string(const CandidateModel& m) {
  if (m.family == Family::Graphon) return "graphon";
  return std::string(family_name(m.family)) + "-" + std::to_string(m.k);
}

// Parses "sbm-3", "SBM-3", "am-2", "affiliation-2", "dcbm-4", "graphon".
inline CandidateModel parse_candidate(const std::string& text) {
  std::string s;
  for (char c : text) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "graphon" || s == "ns" || s == "graphon-ns") return CandidateModel::graphon();
  const auto dash = s.rfind('-');
  if (dash == std::string::npos) throw InvalidParameter("candidate must look like family-k: " + text);
  const std::string fam = s.substr(0, dash);
  int k = 0;
  try {
    std::size_t used = 0;
    k = std::stoi(s.substr(dash + 1), &used);
    if (used != s.size() - dash - 1) throw InvalidParameter("bad community count in " + text);
  } catch (const std::logic_error&) {
    throw InvalidParameter("bad community count in " + text);
  }
  if (k < 1) throw InvalidParameter("community count must be at least 1: " + text);
  if (fam == "am" || fam == "affiliation") return CandidateModel::affiliation(k);
  if (fam == "sbm") return CandidateModel::sbm(k);
  if (fam == "dcbm") return CandidateModel::dcbm(k);
  throw InvalidParameter("unknown model family: " + text);
}

// Which pair of model classes is being compared; fixes the complexity terms
// and the default penalty schedule.
enum class Comparison { WithinSbm, AffiliationVsSbm, SbmVsDcbm, BlockVsGraphon };

inline const char* to_string(Comparison c) {
  switch (c) {
    case Comparison::WithinSbm: return "within-sbm";
    case Comparison::AffiliationVsSbm: return "affiliation-vs-sbm";
    case Comparison::SbmVsDcbm: return "sbm-vs-dcbm";
    case Comparison::BlockVsGraphon: return "block-vs-graphon";
  }
  return "?";
}

inline Comparison parse_comparison(const std::string& s) {
  if (s == "within-sbm") return Comparison::WithinSbm;
  if (s == "affiliation-vs-sbm") return Comparison::AffiliationVsSbm;
  if (s == "sbm-vs-dcbm") return Comparison::SbmVsDcbm;
  if (s == "block-vs-graphon") return Comparison::BlockVsGraphon;
  throw InvalidParameter("unknown comparison context: " + s);
}

inline double graphon_complexity(int n) {
  const double nn = static_cast<double>(n);
  return std::pow(nn, 0.75) / std::sqrt(std::log(nn));
}

// Complexity d of a candidate. Affiliation: 2. SBM: k(k+1)/2. DCBM: k(k+3)/2.
// Graphon (block-vs-graphon only): n^{3/4} / sqrt(log n).
inline double model_complexity(const CandidateModel& m, Comparison context, int n) {
  switch (m.family) {
    case Family::Affiliation:
      return 2.0;
    case Family::Sbm:
      return m.k * (m.k + 1) / 2.0;
    case Family::Dcbm:
      if (context == Comparison::WithinSbm || context == Comparison::AffiliationVsSbm)
        throw InvalidParameter("DCBM candidate outside a DCBM comparison");
      return m.k * (m.k + 3) / 2.0;
    case Family::Graphon:
      if (context != Comparison::BlockVsGraphon)
        throw InvalidParameter("graphon candidate needs the block-vs-graphon context");
      if (n < 2) throw InvalidParameter("graphon complexity needs n >= 2");
      return graphon_complexity(n);
  }
  throw InvalidParameter("unknown model family");
}

inline constexpr double kBlockLambdaCoefficient = 0.001;
inline constexpr double kGraphonLambdaCoefficient = 0.1;
// Coefficient used by the supplementary DCBM-vs-graphon simulations.
inline constexpr double kGraphonLambdaCoefficientSupp = 0.3;

inline double block_lambda(double rho, int n, double coefficient = kBlockLambdaCoefficient) {
  return coefficient * rho * rho / std::sqrt(std::log(static_cast<double>(n)));
}

inline double graphon_lambda(double rho, int n, double coefficient = kGraphonLambdaCoefficient) {
  return coefficient * rho * rho / std::pow(static_cast<double>(n), 0.75);
}

// Recommended penalty: 0.001 rho^2 / sqrt(log n) between block models and
// 0.1 rho^2 / n^{3/4} against the graphon, with rho the edge density.
inline double default_lambda(const Graph& a, Comparison context) {
  const double rho = edge_density(a);
  return context == Comparison::BlockVsGraphon ? graphon_lambda(rho, a.n()) : block_lambda(rho, a.n());
}

enum class LambdaRule { Auto, Block, Graphon, Explicit };

inline const char* to_string(LambdaRule r) {
  switch (r) {
    case LambdaRule::Auto: return "auto";
    case LambdaRule::Block: return "block";
    case LambdaRule::Graphon: return "graphon";
    case LambdaRule::Explicit: return "explicit";
  }
  return "?";
}

struct PenaltyConfig {
  LambdaRule rule = LambdaRule::Auto;
  double value = 0.0;  // used by LambdaRule::Explicit
  double block_coefficient = kBlockLambdaCoefficient;
  double graphon_coefficient = kGraphonLambdaCoefficient;
  Comparison context = Comparison::WithinSbm;

  static PenaltyConfig explicit_value(double lambda, Comparison ctx = Comparison::WithinSbm) {
    PenaltyConfig p;
    p.rule = LambdaRule::Explicit;
    p.value = lambda;
    p.context = ctx;
    return p;
  }

  // Graphon coefficient 0.3 instead of 0.1.
  static PenaltyConfig supplementary_graphon(Comparison ctx = Comparison::BlockVsGraphon) {
    PenaltyConfig p;
    p.graphon_coefficient = kGraphonLambdaCoefficientSupp;
    p.context = ctx;
    return p;
  }

  PenaltyConfig in_context(Comparison ctx) const {
    PenaltyConfig p = *this;
    p.context = ctx;
    return p;
  }
};

inline double resolve_lambda(const Graph& a, const PenaltyConfig& pen) {
  const double rho = edge_density(a);
  double lambda = 0.0;
  switch (pen.rule) {
    case LambdaRule::Explicit: lambda = pen.value; break;
    case LambdaRule::Block: lambda = block_lambda(rho, a.n(), pen.block_coefficient); break;
    case LambdaRule::Graphon: lambda = graphon_lambda(rho, a.n(), pen.graphon_coefficient); break;
    case LambdaRule::Auto:
      lambda = pen.context == Comparison::BlockVsGraphon ? graphon_lambda(rho, a.n(), pen.graphon_coefficient)
                                                         : block_lambda(rho, a.n(), pen.block_coefficient);
      break;
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidParameter("penalty lambda must be finite and >= 0");
  return lambda;
}

// Mean squared error over the evaluation pairs (unordered).
inline double evaluation_mse(const Matrix& obs, const EdgeSplit& split, const Matrix& phat) {
  const int n = split.n();
  if (obs.rows() != n || phat.rows() != n || phat.cols() != n)
    throw InvalidInput("loss inputs differ in size");
  const auto& m = split.training_mask();
  double sum = 0.0;
  long long count = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      if (m(i, j)) continue;
      const double r = obs(i, j) - phat(i, j);
      sum += r * r;
      ++count;
    }
  if (count == 0) throw DegenerateSplit("evaluation set is empty");
  return sum / static_cast<double>(count);
}

// L = |E^c|^{-1} sum_{E^c} (A_ij - P_ij)^2 + d * lambda.
inline double penalized_loss(const Graph& a, const EdgeSplit& split, const Matrix& phat, double d, double lambda) {
  return evaluation_mse(a.adj(), split, phat) + d * lambda;
}

}  // namespace netcv
