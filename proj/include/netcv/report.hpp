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

#include <json.hpp>

#include <sstream>
#include <string>

#include "netcv/selector.hpp"

namespace netcv {

using Json = nlohmann::ordered_json;

inline Json to_json(const CvConfig& cv) {
  Json j;
  j["scheme"] = to_string(cv.scheme);
  if (cv.scheme == Scheme::Bernoulli) {
    j["w"] = cv.w;
    j["splits"] = cv.splits;
  } else {
    j["folds"] = cv.folds;
    j["w"] = 1.0 - 1.0 / cv.folds;
  }
  j["reps"] = cv.replications();
  j["seed"] = cv.seed;
  return j;
}

inline Json to_json(const PenaltyConfig& p) {
  Json j;
  j["rule"] = to_string(p.rule);
  if (p.rule == LambdaRule::Explicit) j["value"] = p.value;
  j["block_coefficient"] = p.block_coefficient;
  j["graphon_coefficient"] = p.graphon_coefficient;
  j["context"] = to_string(p.context);
  return j;
}

inline Json trace_json(const std::vector<TracePoint>& trace) {
  Json arr = Json::array();
  for (const auto& t : trace) {
    Json e;
    if (t.replication >= 0) e["replication"] = t.replication;
    e["k"] = t.k;
    e["loss"] = t.loss;
    arr.push_back(std::move(e));
  }
  return arr;
}

inline Json to_json(const SelectionResult& r) {
  Json j;
  j["chosen"] = to_string(r.chosen);
  j["family"] = family_name(r.chosen.family);
  if (r.chosen.family != Family::Graphon) j["k"] = r.chosen.k;
  if (r.k_hat) j["k_hat"] = *r.k_hat;
  j["context"] = to_string(r.context);
  j["lambda"] = r.lambda;
  Json table = Json::array();
  for (const auto& s : r.table) {
    Json e;
    e["model"] = to_string(s.model);
    e["complexity"] = s.complexity;
    e["mean_loss"] = s.mean_loss;
    e["mean_penalized_loss"] = s.mean_penalized;
    table.push_back(std::move(e));
  }
  j["table"] = std::move(table);
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < r.per_replicate.rows(); ++i) {
    Json row;
    row["replication"] = r.replicate_ids[static_cast<std::size_t>(i)];
    Json vals = Json::array();
    for (Eigen::Index c = 0; c < r.per_replicate.cols(); ++c) vals.push_back(r.per_replicate(i, c));
    row["penalized_loss"] = std::move(vals);
    rows.push_back(std::move(row));
  }
  j["per_split"] = std::move(rows);
  if (!r.replication_winners.empty()) {
    Json w = Json::array();
    for (const auto& m : r.replication_winners) w.push_back(to_string(m));
    j["replication_winners"] = std::move(w);
  }
  if (!r.trace.empty()) j["k_trace"] = trace_json(r.trace);
  j["warnings"] = r.warnings;
  return j;
}

// Columns: model,complexity,mean_loss,mean_penalized_loss,chosen.
inline std::string to_csv(const SelectionResult& r) {
  std::ostringstream os;
  os.precision(17);
  os << "model,complexity,mean_loss,mean_penalized_loss,chosen\n";
  for (const auto& s : r.table)
    os << to_string(s.model) << ',' << s.complexity << ',' << s.mean_loss << ',' << s.mean_penalized << ','
       << (s.model == r.chosen ? 1 : 0) << '\n';
  return os.str();
}

}  // namespace netcv
