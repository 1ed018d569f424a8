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

// Command-line front end: select, estimate-k, simulate.

#pragma once

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "netcv/netcv.hpp"

namespace netcv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;

struct CommonOptions {
  std::string variant = "single";
  std::optional<int> folds;
  std::optional<double> w;
  int splits = 10;
  std::optional<int> reps;
  std::optional<double> lambda;
  std::string lambda_rule = "auto";
  int kmax = 0;
  std::optional<Seed> seed;
  int threads = 1;
  std::string output;
  std::string output_format;
};

inline void add_common(CLI::App& app, CommonOptions& o) {
  app.add_option("--variant", o.variant, "CV aggregation")->check(CLI::IsMember({"single", "vote", "average"}));
  app.add_option("--folds", o.folds, "Number of folds V")->check(CLI::Range(2, 1000000));
  app.add_option("--w", o.w, "Training proportion for Bernoulli splitting")->check(CLI::Range(0.0, 1.0));
  app.add_option("--splits", o.splits, "Number of Bernoulli splits S")->check(CLI::PositiveNumber);
  app.add_option("--reps", o.reps, "Replications for vote/average (trials for simulate)")->check(CLI::PositiveNumber);
  app.add_option("--lambda", o.lambda, "Explicit penalty lambda")->check(CLI::NonNegativeNumber);
  app.add_option("--lambda-rule", o.lambda_rule, "Penalty rule")
      ->check(CLI::IsMember({"auto", "block", "graphon", "graphon-e2"}));
  app.add_option("--kmax", o.kmax, "Largest K considered (0: n)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", o.seed, "Master seed (default: NETCV_SEED or 0)");
  app.add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--output", o.output, "Output file (default: stdout)");
  app.add_option("--output-format", o.output_format, "Report format")->check(CLI::IsMember({"json", "csv"}));
}

inline Seed resolve_seed(const CommonOptions& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("NETCV_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw InvalidParameter("");
      return static_cast<Seed>(v);
    } catch (const std::exception&) {
      throw InvalidParameter(std::string("NETCV_SEED is not an unsigned integer: ") + env);
    }
  }
  return 0;
}

// Single: V-fold, or Bernoulli when --w is given. Vote and average default
// to 5 replications of 5-fold.
inline CvConfig resolve_cv(const CommonOptions& o, Seed seed) {
  CvConfig cv;
  cv.seed = seed;
  cv.threads = o.threads;
  if (o.variant == "single") {
    if (o.reps && *o.reps != 1) throw InvalidParameter("--reps needs --variant vote or average");
    if (o.w) {
      if (o.folds) throw InvalidParameter("--w and --folds are mutually exclusive");
      cv = CvConfig::bernoulli(*o.w, o.splits, seed);
    } else {
      cv = CvConfig::vfold(o.folds.value_or(10), seed);
    }
  } else {
    if (o.w) throw InvalidParameter("--w applies to single Bernoulli splitting only");
    const int reps = o.reps.value_or(5);
    const int folds = o.folds.value_or(5);
    cv = o.variant == "vote" ? CvConfig::vote(reps, folds, seed) : CvConfig::average(reps, folds, seed);
  }
  cv.threads = o.threads;
  cv.validate();
  return cv;
}

inline PenaltyConfig resolve_penalty(const CommonOptions& o) {
  PenaltyConfig p;
  if (o.lambda) {
    if (o.lambda_rule != "auto") throw InvalidParameter("--lambda and --lambda-rule are mutually exclusive");
    return PenaltyConfig::explicit_value(*o.lambda);
  }
  if (o.lambda_rule == "block") p.rule = LambdaRule::Block;
  else if (o.lambda_rule == "graphon") p.rule = LambdaRule::Graphon;
  else if (o.lambda_rule == "graphon-e2") p.graphon_coefficient = kGraphonLambdaCoefficientSupp;
  return p;
}

inline Comparison infer_context(const std::vector<CandidateModel>& cands) {
  bool am = false, dcbm = false, graphon = false;
  for (const auto& c : cands) {
    am = am || c.family == Family::Affiliation;
    dcbm = dcbm || c.family == Family::Dcbm;
    graphon = graphon || c.family == Family::Graphon;
  }
  if (graphon) return Comparison::BlockVsGraphon;
  if (dcbm) return Comparison::SbmVsDcbm;
  if (am) return Comparison::AffiliationVsSbm;
  return Comparison::WithinSbm;
}

inline std::vector<double> read_theta(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw InvalidInput("");
    } catch (const std::exception&) {
      throw InvalidInput("theta file holds a non-numeric entry: " + tok);
    }
  }
  if (static_cast<int>(out.size()) != n)
    throw InvalidInput("theta file has " + std::to_string(out.size()) + " entries for " + std::to_string(n) + " nodes");
  return out;
}

inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot write " + path);
  f << text;
}

inline LoadedGraph read_input(const std::string& input, const std::string& format) {
  const GraphFormat fmt = format == "auto" ? guess_format(input) : parse_format(format);
  return load_graph(input, fmt);
}

inline Json input_json(const std::string& input, const std::string& format, const LoadedGraph& g) {
  Json j;
  j["path"] = input;
  j["format"] = format == "auto" ? (guess_format(input) == GraphFormat::Gml ? "gml" : "edgelist") : format;
  j["n"] = g.graph.n();
  j["edges"] = g.graph.edge_count();
  j["edge_density"] = g.graph.n() >= 2 ? edge_density(g.graph) : 0.0;
  j["warnings"] = g.warnings;
  return j;
}

inline Json common_json(const CvConfig& cv, const PenaltyConfig& pen, int kmax) {
  Json j;
  j["cv"] = to_json(cv);
  j["penalty"] = to_json(pen);
  j["kmax"] = kmax;
  return j;
}

// Parses argv and runs one command. Returns the process exit code.
inline int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Penalized network cross-validation for model selection"};
  app.require_subcommand(1);

  CommonOptions sel_o, est_o, sim_o;
  std::string sel_input, sel_format = "auto", sel_pair, sel_theta;
  std::vector<std::string> sel_candidates;
  std::optional<int> sel_k;
  double sel_h = 0.0;
  std::string sel_context;
  auto* sel = app.add_subcommand("select", "Select a network model for a graph");
  sel->add_option("--input", sel_input, "Graph file")->required();
  sel->add_option("--format", sel_format, "Input format")->check(CLI::IsMember({"auto", "edgelist", "gml"}));
  sel->add_option("--pair", sel_pair, "Class comparison")
      ->check(CLI::IsMember({"am-sbm", "sbm-dcbm", "sbm-graphon", "dcbm-graphon"}));
  sel->add_option("--candidates", sel_candidates, "Explicit candidates, e.g. sbm-3,dcbm-3")->delimiter(',');
  sel->add_option("--context", sel_context, "Complexity context for --candidates")
      ->check(CLI::IsMember({"within-sbm", "affiliation-vs-sbm", "sbm-vs-dcbm", "block-vs-graphon"}));
  sel->add_option("--k", sel_k, "Fix K and skip its estimation")->check(CLI::PositiveNumber);
  sel->add_option("--theta", sel_theta, "Known degree parameters, one per node (dcbm-graphon)");
  sel->add_option("--bandwidth", sel_h, "Neighborhood-smoothing bandwidth (0: sqrt(log n / n))")->check(CLI::Range(0.0, 1.0));
  add_common(*sel, sel_o);

  std::string est_input, est_format = "auto", est_family = "sbm";
  auto* est = app.add_subcommand("estimate-k", "Estimate the number of communities");
  est->add_option("--input", est_input, "Graph file")->required();
  est->add_option("--format", est_format, "Input format")->check(CLI::IsMember({"auto", "edgelist", "gml"}));
  est->add_option("--family", est_family, "sbm: adaptive CV search; dcbm: Bethe-Hessian")
      ->check(CLI::IsMember({"sbm", "dcbm"}));
  add_common(*est, est_o);

  std::string sim_scenario, sim_method;
  int sim_n = 0;
  auto* sim = app.add_subcommand("simulate", "Monte-Carlo frequency table for a scenario");
  sim->add_option("--scenario", sim_scenario, "Scenario name")->required()->check(CLI::IsMember(scenario_names()));
  sim->add_option("--n", sim_n, "Number of nodes")->required()->check(CLI::Range(2, 1000000));
  sim->add_option("--method", sim_method, "Procedure (default depends on the scenario)")
      ->check(CLI::IsMember({"within-sbm", "am-sbm", "sbm-dcbm", "sbm-graphon", "dcbm-graphon"}));
  add_common(*sim, sim_o);

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::Success&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  try {
    if (*sel) {
      if (sel_pair.empty() == sel_candidates.empty())
        throw InvalidParameter("select needs exactly one of --pair or --candidates");
      const Seed seed = resolve_seed(sel_o);
      const CvConfig cv = resolve_cv(sel_o, seed);
      PenaltyConfig pen = resolve_penalty(sel_o);
      const std::string fmt = sel_o.output_format.empty() ? "json" : sel_o.output_format;
      const LoadedGraph g = read_input(sel_input, sel_format);
      const int n = g.graph.n();
      if (n < 3) throw InvalidInput("graph needs at least three nodes");

      Json report;
      report["command"] = "select";
      report["input"] = input_json(sel_input, sel_format, g);
      Json config = common_json(cv, pen, sel_o.kmax);
      SelectionResult result;
      if (!sel_pair.empty()) {
        if (!sel_context.empty()) throw InvalidParameter("--context applies to --candidates only");
        const ComparisonPair pair = parse_pair(sel_pair);
        std::optional<Vector> theta;
        if (pair == ComparisonPair::DcbmVsGraphon) {
          if (sel_theta.empty()) throw InvalidParameter("dcbm-graphon needs --theta");
          const auto t = read_theta(sel_theta, n);
          theta = Eigen::Map<const Vector>(t.data(), n);
        } else if (!sel_theta.empty()) {
          throw InvalidParameter("--theta applies to dcbm-graphon only");
        }
        ClassOptions opts;
        opts.k_max = sel_o.kmax;
        opts.fixed_k = sel_k;
        opts.bandwidth = sel_h;
        pen.context = pair_context(pair);
        config["penalty"] = to_json(pen);
        config["pair"] = sel_pair;
        if (sel_k) config["fixed_k"] = *sel_k;
        if (!sel_theta.empty()) config["theta"] = sel_theta;
        config["bandwidth"] = sel_h > 0.0 ? sel_h : default_bandwidth(n);
        result = class_selection(g.graph, pair, cv, pen, theta, opts);
        if (!sel_k && (pair == ComparisonPair::AffiliationVsSbm || pair == ComparisonPair::SbmVsGraphon))
          config["k_step_lambda"] = k_step_lambda(g.graph, pen);
      } else {
        if (sel_k) throw InvalidParameter("--k applies to --pair only");
        std::vector<CandidateModel> cands;
        for (const auto& c : sel_candidates) cands.push_back(parse_candidate(c));
        pen.context = sel_context.empty() ? infer_context(cands) : parse_comparison(sel_context);
        FitOptions fo;
        fo.bandwidth = sel_h;
        if (!sel_theta.empty()) {
          const auto t = read_theta(sel_theta, n);
          fo.known_theta = Eigen::Map<const Vector>(t.data(), n);
        }
        config["penalty"] = to_json(pen);
        Json cj = Json::array();
        for (const auto& c : cands) cj.push_back(to_string(c));
        config["candidates"] = std::move(cj);
        if (!sel_theta.empty()) config["theta"] = sel_theta;
        config["bandwidth"] = sel_h > 0.0 ? sel_h : default_bandwidth(n);
        result = run_selection(g.graph, cands, cv, pen, fo);
      }
      report["config"] = std::move(config);
      report["seed"] = seed;
      report["result"] = to_json(result);
      emit(fmt == "json" ? report.dump(2) + "\n" : to_csv(result), sel_o.output, out);
      return kExitOk;
    }

    if (*est) {
      const Seed seed = resolve_seed(est_o);
      const CvConfig cv = resolve_cv(est_o, seed);
      PenaltyConfig pen = resolve_penalty(est_o);
      pen.context = Comparison::WithinSbm;
      const std::string fmt = est_o.output_format.empty() ? "json" : est_o.output_format;
      const LoadedGraph g = read_input(est_input, est_format);
      const int n = g.graph.n();
      if (n < 3) throw InvalidInput("graph needs at least three nodes");
      const int k_max = (est_o.kmax <= 0 || est_o.kmax > n) ? n : est_o.kmax;

      Json report;
      report["command"] = "estimate-k";
      report["input"] = input_json(est_input, est_format, g);
      Json config;
      config["family"] = est_family;
      config["method"] = est_family == "sbm" ? "adaptive-cv" : "bethe-hessian";
      config["kmax"] = k_max;
      int k_hat = 0;
      Json result;
      if (est_family == "sbm") {
        config["cv"] = to_json(cv);
        config["penalty"] = to_json(pen);
        CvWorkspace ws(g.graph, cv);
        const double lambda = k_step_lambda(g.graph, pen);
        const auto ks = adaptive_k(ws, lambda, k_max);
        k_hat = ks.k_hat;
        result["lambda"] = lambda;
        result["k_trace"] = trace_json(ks.trace);
        if (!ks.replication_k.empty()) result["replication_k"] = ks.replication_k;
        result["warnings"] = ks.warnings;
      } else {
        k_hat = bhmc_k(g.graph, k_max);
      }
      result["k_hat"] = k_hat;
      report["config"] = std::move(config);
      report["seed"] = seed;
      report["result"] = std::move(result);
      if (fmt == "json") {
        emit(report.dump(2) + "\n", est_o.output, out);
      } else {
        emit("family,method,k_hat\n" + est_family + "," + report["config"]["method"].get<std::string>() + "," +
                 std::to_string(k_hat) + "\n",
             est_o.output, out);
      }
      return kExitOk;
    }

    if (*sim) {
      const Seed seed = resolve_seed(sim_o);
      const int reps = sim_o.reps.value_or(100);
      CommonOptions cv_o = sim_o;
      if (cv_o.variant == "single") cv_o.reps.reset();
      const CvConfig cv = resolve_cv(cv_o, seed);
      MethodConfig m;
      m.procedure = sim_method.empty() ? default_procedure(sim_scenario) : parse_procedure(sim_method);
      m.cv = cv;
      m.pen = resolve_penalty(sim_o);
      m.opts.k_max = sim_o.kmax;
      const std::string fmt = sim_o.output_format.empty() ? "csv" : sim_o.output_format;
      const FrequencyTable t = monte_carlo(sim_scenario, sim_n, m, reps, seed, sim_o.threads);
      if (fmt == "csv") {
        emit(t.to_csv(), sim_o.output, out);
      } else {
        Json report;
        report["command"] = "simulate";
        Json config;
        config["scenario"] = sim_scenario;
        config["n"] = sim_n;
        config["method"] = to_string(m.procedure);
        config["cv"] = to_json(cv);
        config["cv"].erase("seed");
        config["penalty"] = to_json(m.pen);
        config["kmax"] = sim_o.kmax;
        config["reps"] = reps;
        report["config"] = std::move(config);
        report["seed"] = seed;
        report["result"] = t.to_json();
        emit(report.dump(2) + "\n", sim_o.output, out);
      }
      return kExitOk;
    }
  } catch (const InvalidParameter& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitConfig;
}

}  // namespace netcv::cli
