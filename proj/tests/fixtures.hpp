// Copyright 2026 The q422 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <random>
#include <string>

#include "q422/experiments.hpp"

// Random but valid records for persistence round-trips.
namespace fixtures {

inline double awkward_double(std::mt19937_64& rng) {
  switch (rng() % 6) {
    case 0: return 0.0;
    case 1: return 1.0;
    case 2: return std::ldexp(std::uniform_real_distribution<double>(0.5, 1.0)(rng), -static_cast<int>(rng() % 1000));
    case 3: return 0.1;
    default: return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  }
}

inline q422::ExperimentRecord random_record(std::mt19937_64& rng) {
  using namespace q422;
  ExperimentRecord r;
  r.gate_set = static_cast<GateSetId>(rng() % 3);
  r.length = 1 + rng() % kMaxSequenceLength;
  r.seed = rng();
  r.scheme = static_cast<Scheme>(rng() % 3);
  r.shots = 1 + rng() % 100000;
  r.gamma = rng() % (r.shots + 1);
  r.r = static_cast<double>(r.gamma) / static_cast<double>(r.shots);
  r.d = awkward_double(rng);
  r.d_decoded = awkward_double(rng);
  r.output_dimension = 1 + rng() % 16;
  r.params.eps1 = awkward_double(rng);
  r.params.eps2 = awkward_double(rng);
  r.params.p_meas = awkward_double(rng);
  r.params.p_prep = awkward_double(rng);
  r.params.theta = std::uniform_real_distribution<double>(-10.0, 10.0)(rng);
  r.experiment_id = std::string(to_string(r.gate_set)) + "-L" + std::to_string(r.length) + "-s" + std::to_string(rng() % 100);
  r.timestamp = "2026-01-02T03:04:05Z";
  return r;
}

}  // namespace fixtures
