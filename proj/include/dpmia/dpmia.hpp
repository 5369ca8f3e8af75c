// Copyright 2026 The dpmia Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Umbrella header.

#ifndef DPMIA_DPMIA_HPP_
#define DPMIA_DPMIA_HPP_

#include "dpmia/accountant.hpp"
#include "dpmia/config.hpp"
#include "dpmia/ecdf.hpp"
#include "dpmia/evaluation.hpp"
#include "dpmia/mechanism.hpp"
#include "dpmia/mechanism_spec.hpp"
#include "dpmia/meta_classifier.hpp"
#include "dpmia/metric_attack.hpp"
#include "dpmia/metrics.hpp"
#include "dpmia/mlp.hpp"
#include "dpmia/rng.hpp"
#include "dpmia/score_model.hpp"
#include "dpmia/stats.hpp"
#include "dpmia/trace.hpp"
#include "dpmia/trace_csv.hpp"

#endif  // DPMIA_DPMIA_HPP_
