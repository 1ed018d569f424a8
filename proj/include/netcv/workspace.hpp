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
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "netcv/clustering.hpp"
#include "netcv/completion.hpp"
#include "netcv/error.hpp"
#include "netcv/fitters.hpp"
#include "netcv/graph.hpp"
#include "netcv/parallel.hpp"
#include "netcv/penalty.hpp"
#include "netcv/rng.hpp"
#include "netcv/split.hpp"

namespace netcv {

enum class Scheme { Bernoulli, VFold, Vote, Average };

inline const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::Bernoulli: return "bernoulli";
    case Scheme::VFold: return "vfold";
    case Scheme::Vote: return "vote";
    case Scheme::Average: return "average";
  }
  return "?";
}

struct CvConfig {
  Scheme scheme = Scheme::VFold;
  int folds = 10;     // V for vfold, vote and average
  double w = 0.9;     // Bernoulli training proportion
  int splits = 10;    // S for Bernoulli
  int reps = 1;       // replications for vote and average
  Seed seed = 0;
  int threads = 1;

  static CvConfig vfold(int v, Seed seed) {
    CvConfig c;
    c.folds = v;
    c.seed = seed;
    return c;
  }
  static CvConfig bernoulli(double w, int s, Seed seed) {
    CvConfig c;
    c.scheme = Scheme::Bernoulli;
    c.w = w;
    c.splits = s;
    c.seed = seed;
    return c;
  }
  static CvConfig vote(int reps, int v, Seed seed) {
    CvConfig c;
    c.scheme = Scheme::Vote;
    c.reps = reps;
    c.folds = v;
    c.seed = seed;
    return c;
  }
  static CvConfig average(int reps, int v, Seed seed) {
    CvConfig c = vote(reps, v, seed);
    c.scheme = Scheme::Average;
    return c;
  }

  int replications() const { return (scheme == Scheme::Vote || scheme == Scheme::Average) ? reps : 1; }

  void validate() const {
    if (scheme == Scheme::Bernoulli) {
      if (!(w > 0.0 && w < 1.0)) throw InvalidParameter("training proportion w must lie in (0,1)");
      if (splits < 1) throw InvalidParameter("split count S must be at least 1");
    } else {
      if (folds < 2) throw InvalidParameter("fold count V must be at least 2");
    }
    if ((scheme == Scheme::Vote || scheme == Scheme::Average) && reps < 1)
      throw InvalidParameter("replication count must be at least 1");
    if (threads < 1) throw InvalidParameter("thread count must be at least 1");
  }
};

struct FitOptions {
  KmeansConfig kmeans;             // seed is replaced per split
  double bandwidth = 0.0;          // 0 selects sqrt(log n / n)
  std::optional<Vector> known_theta;
  bool spherical_sbm = false;      // SBM and affiliation labels from spherical clustering
};

// The splits of one cross-validation run plus per-split caches (leading
// eigenpairs, cluster labels, unpenalized losses). Candidates evaluated on
// the same workspace see identical splits.
class CvWorkspace {
 public:
  CvWorkspace(const Graph& a, CvConfig cv, FitOptions opts = {})
      : a_(a), cv_(std::move(cv)), opts_(std::move(opts)) {
    cv_.validate();
    const int n = a_.n();
    if (n < 2) throw InvalidInput("cross-validation needs at least two nodes");
    if (opts_.known_theta && opts_.known_theta->size() != n)
      throw InvalidParameter("known theta has the wrong length");
    if (cv_.scheme == Scheme::Bernoulli) {
      for (int s = 0; s < cv_.splits; ++s) {
        const Seed seed = derive_seed(cv_.seed, {stream::kSplit, 0, static_cast<std::uint64_t>(s)});
        try {
          add_slot(sample_split(n, cv_.w, seed), 0);
        } catch (const DegenerateSplit& e) {
          warnings_.push_back("split " + std::to_string(s) + " skipped: " + e.what());
        }
      }
    } else {
      for (int r = 0; r < cv_.replications(); ++r) {
        const Seed seed = derive_seed(cv_.seed, {stream::kSplit, 1, static_cast<std::uint64_t>(r)});
        for (auto& split : v_fold_splits(n, cv_.folds, seed)) add_slot(std::move(split), r);
      }
    }
    if (slots_.empty()) throw SelectionError("every split is degenerate");
  }

  CvWorkspace(const CvWorkspace&) = delete;
  CvWorkspace& operator=(const CvWorkspace&) = delete;

  const Graph& graph() const { return a_; }
  const CvConfig& config() const { return cv_; }
  const FitOptions& options() const { return opts_; }
  void set_spherical_sbm(bool on) { opts_.spherical_sbm = on; }
  void set_known_theta(std::optional<Vector> theta) {
    if (theta && theta->size() != a_.n()) throw InvalidParameter("known theta has the wrong length");
    const bool same = theta.has_value() == opts_.known_theta.has_value() && (!theta || *theta == *opts_.known_theta);
    if (same) return;
    opts_.known_theta = std::move(theta);
    for (auto& s : slots_) s.dcbm_losses.clear();
  }

  int size() const { return static_cast<int>(slots_.size()); }
  int replications() const { return cv_.replications(); }
  int replication_of(int s) const { return slots_[s].rep; }
  const EdgeSplit& split(int s) const { return slots_[s].split; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  // Unpenalized held-out loss of candidate m on split s; NaN when the fit is
  // degenerate on that split.
  double loss(int s, const CandidateModel& m) {
    Slot& slot = slots_[s];
    const bool sph = opts_.spherical_sbm;
    auto& cache = m.family == Family::Dcbm ? slot.dcbm_losses : slot.losses;
    const auto key = std::make_tuple(static_cast<int>(m.family), m.k, sph);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    double value = std::numeric_limits<double>::quiet_NaN();
    try {
      value = compute_loss(s, m);
    } catch (const DegenerateFit& e) {
      slot.notes.push_back(to_string(m) + " degenerate on split " + std::to_string(s) + ": " + e.what());
    }
    cache.emplace(key, value);
    return value;
  }

  // Losses of m on every split, evaluated in parallel.
  std::vector<double> losses(const CandidateModel& m) {
    if (m.family != Family::Graphon && (m.k < 1 || m.k > a_.n()))
      throw InvalidParameter("candidate " + to_string(m) + " needs 1 <= k <= n");
    std::vector<double> out(slots_.size());
    parallel_for(slots_.size(), cv_.threads, [&](std::size_t s) { out[s] = loss(static_cast<int>(s), m); });
    return out;
  }

  // Degenerate-fit notes accumulated so far, in split order.
  std::vector<std::string> fit_notes() const {
    std::vector<std::string> out;
    for (const auto& s : slots_) out.insert(out.end(), s.notes.begin(), s.notes.end());
    return out;
  }

  const Labels& labels(int s, int k, bool spherical) {
    Slot& slot = slots_[s];
    const auto key = std::make_pair(k, spherical);
    if (auto it = slot.labels.find(key); it != slot.labels.end()) return it->second;
    Labels lab;
    if (k == 1) {
      lab = Labels{LabelVector(a_.n(), 0), 1};
    } else {
      KmeansConfig km = opts_.kmeans;
      km.seed = derive_seed(cv_.seed, {stream::kKmeans, static_cast<std::uint64_t>(s),
                                       static_cast<std::uint64_t>(k), spherical ? 1u : 0u});
      lab = spectral_cluster(completed(s, k), k, km, spherical);
    }
    return slot.labels.emplace(key, std::move(lab)).first->second;
  }

  CompletedMatrix completed(int s, int k) {
    Slot& slot = slots_[s];
    const int n = a_.n();
    if (k < 1 || k > n) throw InvalidParameter("rank k must lie in [1, n]");
    if (!slot.spectral || slot.spectral->capacity() < k) {
      const int prev = slot.spectral ? slot.spectral->capacity() : 0;
      const int cap = std::min(n, std::max({k, 2 * prev, kInitialRank}));
      const PartialMatrix y = partial_matrix(a_, slot.split);
      slot.spectral.emplace(y.matrix(), slot.split.w(), cap);
    }
    return slot.spectral->complete(k);
  }

 private:
  static constexpr int kInitialRank = 12;

  struct Slot {
    EdgeSplit split;
    int rep = 0;
    std::optional<SpectralCache> spectral;
    std::map<std::pair<int, bool>, Labels> labels;
    std::map<std::tuple<int, int, bool>, double> losses;
    std::map<std::tuple<int, int, bool>, double> dcbm_losses;
    std::vector<std::string> notes;
  };

  void add_slot(EdgeSplit split, int rep) {
    Slot s;
    s.split = std::move(split);
    s.rep = rep;
    slots_.push_back(std::move(s));
  }

  double compute_loss(int s, const CandidateModel& m) {
    const EdgeSplit& sp = slots_[s].split;
    const Matrix& obs = a_.adj();
    FitResult fit;
    switch (m.family) {
      case Family::Graphon: {
        const double h = opts_.bandwidth > 0.0 ? opts_.bandwidth : default_bandwidth(a_.n());
        fit = fit_graphon_ns(partial_matrix(a_, sp), sp.w(), h);
        break;
      }
      case Family::Sbm:
        fit = fit_sbm(obs, sp, labels(s, m.k, opts_.spherical_sbm));
        break;
      case Family::Affiliation:
        fit = fit_affiliation(obs, sp, labels(s, m.k, opts_.spherical_sbm));
        break;
      case Family::Dcbm:
        fit = fit_dcbm(obs, sp, completed(s, m.k), m.k, labels(s, m.k, true), opts_.known_theta);
        break;
    }
    return evaluation_mse(obs, sp, fit.phat);
  }

  const Graph& a_;
  CvConfig cv_;
  FitOptions opts_;
  std::vector<Slot> slots_;
  std::vector<std::string> warnings_;
};

}  // namespace netcv
