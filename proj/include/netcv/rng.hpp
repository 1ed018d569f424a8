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

#include <cstdint>
#include <initializer_list>
#include <random>

namespace netcv {

using Seed = std::uint64_t;

// All stochastic code draws from this engine.
using Engine = std::mt19937_64;

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

// Child seed for a named sub-stream. Identical (parent, path) always yields
// the same seed, so work split across threads reproduces serial runs.
inline Seed derive_seed(Seed parent, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = detail::splitmix64(parent);
  for (std::uint64_t p : path) s = detail::splitmix64(s ^ detail::splitmix64(p + 0x632be59bd9b4e019ULL));
  return s;
}

inline Engine make_engine(Seed seed) { return Engine(seed); }

// Stream tags used with derive_seed.
namespace stream {
inline constexpr std::uint64_t kSplit = 1;
inline constexpr std::uint64_t kKmeans = 2;
inline constexpr std::uint64_t kScenario = 3;
inline constexpr std::uint64_t kAdjacency = 4;
inline constexpr std::uint64_t kSelection = 5;
inline constexpr std::uint64_t kLabels = 6;
}  // namespace stream

}  // namespace netcv
