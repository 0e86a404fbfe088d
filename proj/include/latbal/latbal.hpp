// Copyright 2026 The latbal authors
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

// Umbrella header: the whole latbal library.

#pragma once

#include "latbal/analyzer.hpp"
#include "latbal/errors.hpp"
#include "latbal/fixtures.hpp"
#include "latbal/marker.hpp"
#include "latbal/netlist.hpp"
#include "latbal/netlist_json.hpp"
#include "latbal/ops.hpp"
#include "latbal/oracle.hpp"
#include "latbal/report.hpp"
#include "latbal/simulator.hpp"
#include "latbal/vhdlgen.hpp"
#include "latbal/workflow.hpp"
