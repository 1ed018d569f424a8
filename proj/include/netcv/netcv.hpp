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

#include "netcv/clustering.hpp"
#include "netcv/completion.hpp"
#include "netcv/error.hpp"
#include "netcv/fitters.hpp"
#include "netcv/graph.hpp"
#include "netcv/harness.hpp"
#include "netcv/io.hpp"
#include "netcv/parallel.hpp"
#include "netcv/penalty.hpp"
#include "netcv/report.hpp"
#include "netcv/rng.hpp"
#include "netcv/selector.hpp"
#include "netcv/split.hpp"
#include "netcv/workspace.hpp"
