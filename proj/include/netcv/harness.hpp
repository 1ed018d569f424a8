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

// Simulation scenarios and Monte-Carlo frequency tables.

#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "netcv/error.hpp"
#include "netcv/graph.hpp"
#include "netcv/parallel.hpp"
#include "netcv/rng.hpp"
#include "netcv/selector.hpp"

namespace netcv {

struct ScenarioDraw {
  ModelSpec spec;
  CandidateModel expected;
  LabelVector labels;            // empty for the graphon
  std::optional<Vector> theta;   // DCBM truths only
};

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"am-3",  "sbm-3",  "sbm-5",  "sbm-imbalanced-3", "sbm-imbalanced-5",
                                                 "dcbm-3", "dcbm-5", "dcbm-e2", "graphon-ns"};
  return names;
}

// sin[5 pi (u + v - 1) + 1] / 2 + 1/2.
inline double ns_graphon_shape(double u, double v) {
  return std::sin(5.0 * std::numbers::pi * (u + v - 1.0) + 1.0) / 2.0 + 0.5;
}

namespace detail {

inline const std::vector<double>& imbalanced_pi(int k) {
  static const std::vector<double> three = {1.0 / 6, 1.0 / 3, 1.0 / 2};
  static const std::vector<double> five = {0.1, 0.1, 0.2, 0.3, 0.3};
  return k == 3 ? three : five;
}

// Multinomial labels; draws that leave a community empty are redrawn.
inline LabelVector draw_labels(int n, const std::vector<double>& pi, Engine& eng) {
  const int k = static_cast<int>(pi.size());
  if (n < k) throw InvalidParameter("scenario needs n >= K");
  std::discrete_distribution<int> pick(pi.begin(), pi.end());
  for (int attempt = 0; attempt < 1000; ++attempt) {
    LabelVector labels(n);
    std::vector<int> count(k, 0);
    for (int i = 0; i < n; ++i) ++count[labels[i] = pick(eng)];
    if (std::find(count.begin(), count.end(), 0) == count.end()) return labels;
  }
  throw InvalidParameter("could not draw labels covering every community");
}

// Symmetric k x k matrix: r * U(diag_lo, diag_hi) on the diagonal,
// r * U(off_lo, off_hi) off it.
inline Matrix draw_block_matrix(int k, double r, double diag_lo, double diag_hi, double off_lo, double off_hi,
                                Engine& eng) {
  std::uniform_real_distribution<double> diag(diag_lo, diag_hi), off(off_lo, off_hi);
  Matrix b(k, k);
  for (int a = 0; a < k; ++a) {
    b(a, a) = r * diag(eng);
    for (int c = a + 1; c < k; ++c) b(a, c) = b(c, a) = r * off(eng);
  }
  return b;
}

inline ScenarioDraw draw_dcbm(int n, int k, double r, Engine& eng) {
  const LabelVector labels = draw_labels(n, imbalanced_pi(k), eng);
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  for (int attempt = 0; attempt < 100; ++attempt) {
    const Matrix b = draw_block_matrix(k, r, 0.8, 1.0, 0.2, 0.4, eng);
    Vector raw(n);
    for (int i = 0; i < n; ++i) raw[i] = unif(eng);
    Vector theta = normalize_theta(raw, labels);
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = i + 1; j < n && ok; ++j) ok = theta[i] * theta[j] * b(labels[i], labels[j]) <= 1.0;
    if (!ok) continue;
    ScenarioDraw d;
    d.spec = DcbmParams{k, b, labels, theta};
    d.expected = CandidateModel::dcbm(k);
    d.labels = labels;
    d.theta = std::move(theta);
    return d;
  }
  throw InvalidParameter("could not draw degree parameters with probabilities <= 1");
}

}  // namespace detail

// Draws the generating parameters of a named scenario.
//   am-3: affiliation, B = 0.1 [(1 - 0.4) I + 0.4 11^T], balanced.
//   sbm-K: B = 0.1 B0, B0 diag ~ U(0.6,1), off ~ U(0.1,0.3), balanced.
//   sbm-imbalanced-K: as sbm-K with Pi {1/6,1/3,1/2} or {.1,.1,.2,.3,.3}.
//   dcbm-K: B = 0.1 B0, B0 diag ~ U(0.8,1), off ~ U(0.2,0.4), imbalanced Pi,
//           theta ~ U(0.1,1) normalized per community.
//   dcbm-e2: dcbm-3 with r = 0.3.
//   graphon-ns: P = 0.3 f(u_i, u_j), u ~ U(0,1).
inline ScenarioDraw make_scenario(const std::string& name, int n, Seed seed) {
  if (n < 2) throw InvalidParameter("scenario needs n >= 2");
  Engine eng = make_engine(derive_seed(seed, {stream::kScenario}));
  ScenarioDraw d;
  if (name == "am-3") {
    const int k = 3;
    const double r = 0.1, beta = 0.4;
    d.labels = detail::draw_labels(n, std::vector<double>(k, 1.0 / k), eng);
    d.spec = AffiliationParams{k, r, r * beta, d.labels};
    d.expected = CandidateModel::affiliation(k);
  } else if (name == "sbm-3" || name == "sbm-5") {
    const int k = name == "sbm-3" ? 3 : 5;
    d.labels = detail::draw_labels(n, std::vector<double>(k, 1.0 / k), eng);
    d.spec = SbmParams{k, detail::draw_block_matrix(k, 0.1, 0.6, 1.0, 0.1, 0.3, eng), d.labels};
    d.expected = CandidateModel::sbm(k);
  } else if (name == "sbm-imbalanced-3" || name == "sbm-imbalanced-5") {
    const int k = name == "sbm-imbalanced-3" ? 3 : 5;
    d.labels = detail::draw_labels(n, detail::imbalanced_pi(k), eng);
    d.spec = SbmParams{k, detail::draw_block_matrix(k, 0.1, 0.6, 1.0, 0.1, 0.3, eng), d.labels};
    d.expected = CandidateModel::sbm(k);
  } else if (name == "dcbm-3" || name == "dcbm-5") {
    d = detail::draw_dcbm(n, name == "dcbm-3" ? 3 : 5, 0.1, eng);
  } else if (name == "dcbm-e2") {
    d = detail::draw_dcbm(n, 3, 0.3, eng);
  } else if (name == "graphon-ns") {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Vector xi(n);
    for (int i = 0; i < n; ++i) xi[i] = unif(eng);
    d.spec = GraphonSpec{[](double u, double v) { return 0.3 * ns_graphon_shape(u, v); }, xi};
    d.expected = CandidateModel::graphon();
  } else {
    throw InvalidParameter("unknown scenario: " + name);
  }
  return d;
}

enum class Procedure { WithinSbm, AffiliationVsSbm, SbmVsDcbm, SbmVsGraphon, DcbmVsGraphon };

inline const char* to_string(Procedure p) {
  switch (p) {
    case Procedure::WithinSbm: return "within-sbm";
    case Procedure::AffiliationVsSbm: return "am-sbm";
    case Procedure::SbmVsDcbm: return "sbm-dcbm";
    case Procedure::SbmVsGraphon: return "sbm-graphon";
    case Procedure::DcbmVsGraphon: return "dcbm-graphon";
  }
  return "?";
}

inline Procedure parse_procedure(const std::string& s) {
  if (s == "within-sbm") return Procedure::WithinSbm;
  switch (parse_pair(s)) {
    case ComparisonPair::AffiliationVsSbm: return Procedure::AffiliationVsSbm;
    case ComparisonPair::SbmVsDcbm: return Procedure::SbmVsDcbm;
    case ComparisonPair::SbmVsGraphon: return Procedure::SbmVsGraphon;
    case ComparisonPair::DcbmVsGraphon: return Procedure::DcbmVsGraphon;
  }
  return Procedure::WithinSbm;
}

// The comparison each scenario is reported under by default.
inline Procedure default_procedure(const std::string& scenario) {
  if (scenario == "am-3") return Procedure::AffiliationVsSbm;
  if (scenario == "sbm-3" || scenario == "sbm-5") return Procedure::WithinSbm;
  if (scenario == "dcbm-e2" || scenario == "graphon-ns") return Procedure::DcbmVsGraphon;
  for (const auto& s : scenario_names())
    if (s == scenario) return Procedure::SbmVsDcbm;
  throw InvalidParameter("unknown scenario: " + scenario);
}

struct MethodConfig {
  Procedure procedure = Procedure::SbmVsDcbm;
  CvConfig cv;
  PenaltyConfig pen;
  ClassOptions opts;

  // e.g. "sbm-dcbm/vfold-10/auto".
  std::string name() const {
    std::ostringstream os;
    os << to_string(procedure) << '/' << to_string(cv.scheme);
    if (cv.scheme == Scheme::Bernoulli) os << "-w" << cv.w << "-s" << cv.splits;
    else os << '-' << cv.folds;
    if (cv.scheme == Scheme::Vote || cv.scheme == Scheme::Average) os << 'x' << cv.reps;
    os << '/' << to_string(pen.rule);
    if (pen.rule == LambdaRule::Explicit) os << '-' << pen.value;
    return os.str();
  }
};

// Runs one configured selection on an existing workspace. `theta` is the
// known degree vector passed to dcbm-graphon; ones are used when it is absent.
inline SelectionResult run_method(CvWorkspace& ws, const MethodConfig& m,
                                  const std::optional<Vector>& theta = std::nullopt) {
  const Graph& a = ws.graph();
  switch (m.procedure) {
    case Procedure::WithinSbm: {
      ws.set_spherical_sbm(false);
      const double lambda = resolve_lambda(a, m.pen.in_context(Comparison::WithinSbm));
      SelectionResult out;
      if (m.opts.fixed_k) {
        out = run_selection(ws, {CandidateModel::sbm(*m.opts.fixed_k)}, lambda, Comparison::WithinSbm);
        out.k_hat = *m.opts.fixed_k;
        return out;
      }
      auto ks = adaptive_k(ws, lambda, m.opts.k_max);
      out = run_selection(ws, {CandidateModel::sbm(ks.k_hat)}, lambda, Comparison::WithinSbm);
      out.k_hat = ks.k_hat;
      out.trace = std::move(ks.trace);
      return out;
    }
    case Procedure::AffiliationVsSbm:
      return class_selection(ws, ComparisonPair::AffiliationVsSbm, m.pen, std::nullopt, m.opts);
    case Procedure::SbmVsDcbm:
      return class_selection(ws, ComparisonPair::SbmVsDcbm, m.pen, std::nullopt, m.opts);
    case Procedure::SbmVsGraphon:
      return class_selection(ws, ComparisonPair::SbmVsGraphon, m.pen, std::nullopt, m.opts);
    case Procedure::DcbmVsGraphon: {
      const Vector t = theta ? *theta : Vector::Ones(a.n());
      return class_selection(ws, ComparisonPair::DcbmVsGraphon, m.pen, t, m.opts);
    }
  }
  throw InvalidParameter("unknown procedure");
}

inline SelectionResult run_method(const Graph& a, const MethodConfig& m,
                                  const std::optional<Vector>& theta = std::nullopt) {
  FitOptions fo;
  fo.kmeans = m.opts.kmeans;
  fo.bandwidth = m.opts.bandwidth;
  CvWorkspace ws(a, m.cv, fo);
  return run_method(ws, m, theta);
}

struct FrequencyTable {
  std::string scenario;
  int n = 0;
  std::string method;
  int reps = 0;
  CandidateModel expected;
  std::map<CandidateModel, int> counts;
  int failures = 0;
  std::vector<std::string> warnings;

  int count(const CandidateModel& m) const {
    const auto it = counts.find(m);
    return it == counts.end() ? 0 : it->second;
  }
  double frequency(const CandidateModel& m) const { return reps > 0 ? static_cast<double>(count(m)) / reps : 0.0; }

  // Columns: scenario,n,method,model,count,reps. Failures appear as model "failed".
  std::string to_csv() const {
    std::ostringstream os;
    os << "scenario,n,method,model,count,reps\n";
    for (const auto& [m, c] : counts)
      os << scenario << ',' << n << ',' << method << ',' << to_string(m) << ',' << c << ',' << reps << '\n';
    if (failures > 0) os << scenario << ',' << n << ',' << method << ",failed," << failures << ',' << reps << '\n';
    return os.str();
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["scenario"] = scenario;
    j["n"] = n;
    j["method"] = method;
    j["reps"] = reps;
    j["expected"] = to_string(expected);
    j["counts"] = nlohmann::ordered_json::object();
    for (const auto& [m, c] : counts) j["counts"][to_string(m)] = c;
    j["failures"] = failures;
    j["warnings"] = warnings;
    return j;
  }
};

namespace detail {

inline bool same_cv(const CvConfig& a, const CvConfig& b) {
  return a.scheme == b.scheme && a.folds == b.folds && a.w == b.w && a.splits == b.splits && a.reps == b.reps;
}

inline bool same_fit_options(const ClassOptions& a, const ClassOptions& b) {
  return a.bandwidth == b.bandwidth && a.kmeans.restarts == b.kmeans.restarts &&
         a.kmeans.max_iter == b.kmeans.max_iter;
}

}  // namespace detail

// reps independent trials of: draw parameters, build P, sample A, select.
// Every method sees the same graphs; methods with the same CV layout share
// one workspace per trial, which changes nothing but the running time.
// Trial r uses seeds derived from (seed, r) only, so the tables do not
// depend on the thread count.
inline std::vector<FrequencyTable> monte_carlo(const std::string& scenario, int n,
                                               const std::vector<MethodConfig>& methods, int reps, Seed seed,
                                               int threads = 1) {
  if (reps < 1) throw InvalidParameter("reps must be at least 1");
  if (methods.empty()) throw InvalidParameter("at least one method is required");
  const CandidateModel expected = make_scenario(scenario, n, seed).expected;
  const std::size_t nm = methods.size();

  struct Outcome {
    std::optional<CandidateModel> chosen;
    std::vector<std::string> warnings;
  };
  std::vector<std::vector<Outcome>> outcomes(static_cast<std::size_t>(reps), std::vector<Outcome>(nm));
  parallel_for(static_cast<std::size_t>(reps), threads, [&](std::size_t r) {
    const auto ru = static_cast<std::uint64_t>(r);
    const std::string tag = "rep " + std::to_string(r);
    std::optional<ScenarioDraw> draw;
    std::optional<Graph> a;
    try {
      draw = make_scenario(scenario, n, derive_seed(seed, {stream::kScenario, ru}));
      a = sample_adjacency(build_prob(draw->spec), derive_seed(seed, {stream::kAdjacency, ru}));
    } catch (const Error& e) {
      for (auto& o : outcomes[r]) o.warnings.push_back(tag + " failed: " + e.what());
      return;
    }
    std::vector<char> done(nm, 0);
    for (std::size_t i = 0; i < nm; ++i) {
      if (done[i]) continue;
      MethodConfig lead = methods[i];
      lead.cv.seed = derive_seed(seed, {stream::kSelection, ru});
      lead.cv.threads = 1;
      std::optional<CvWorkspace> ws;
      try {
        FitOptions fo;
        fo.kmeans = lead.opts.kmeans;
        fo.bandwidth = lead.opts.bandwidth;
        ws.emplace(*a, lead.cv, fo);
      } catch (const Error& e) {
        ws.reset();
        outcomes[r][i].warnings.push_back(tag + " failed: " + e.what());
        done[i] = 1;
        continue;
      }
      for (std::size_t j = i; j < nm; ++j) {
        if (done[j] || !detail::same_cv(methods[j].cv, methods[i].cv) ||
            !detail::same_fit_options(methods[j].opts, methods[i].opts))
          continue;
        done[j] = 1;
        MethodConfig m = methods[j];
        m.cv = lead.cv;
        Outcome& o = outcomes[r][j];
        try {
          const SelectionResult res = run_method(*ws, m, draw->theta);
          o.chosen = res.chosen;
          for (const auto& w : res.warnings) o.warnings.push_back(tag + ": " + w);
        } catch (const Error& e) {
          o.warnings.push_back(tag + " failed: " + e.what());
        }
      }
    }
  });

  std::vector<FrequencyTable> tables(nm);
  for (std::size_t j = 0; j < nm; ++j) {
    FrequencyTable& t = tables[j];
    t.scenario = scenario;
    t.n = n;
    t.method = methods[j].name();
    t.reps = reps;
    t.expected = expected;
    for (int r = 0; r < reps; ++r) {
      Outcome& o = outcomes[static_cast<std::size_t>(r)][j];
      if (o.chosen) ++t.counts[*o.chosen];
      else ++t.failures;
      t.warnings.insert(t.warnings.end(), o.warnings.begin(), o.warnings.end());
    }
  }
  return tables;
}

inline FrequencyTable monte_carlo(const std::string& scenario, int n, const MethodConfig& method, int reps, Seed seed,
                                  int threads = 1) {
  return monte_carlo(scenario, n, std::vector<MethodConfig>{method}, reps, seed, threads).front();
}

}  // namespace netcv
