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

#include "q422/analytics.hpp"
#include "q422/circuit_io.hpp"
#include "q422/code422.hpp"
#include "q422/experiments.hpp"
#include "q422/ftcheck.hpp"
#include "q422/noise.hpp"
#include "q422/report_io.hpp"
#include "q422/run_config.hpp"
#include "q422/sim.hpp"
