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

#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "latbal/analyzer.hpp"
#include "latbal/errors.hpp"
#include "latbal/netlist.hpp"
#include "latbal/oracle.hpp"
#include "latbal/simulator.hpp"

namespace latbal {

// ---------------------------------------------------------------------------
// The balancing workflow, mirroring the hardware flow:
//
//   initial   all-zero latency configuration (the empty assignment),
//   synchro   analysis run -> marker report -> measured per-path delays,
//   final     delays applied on top of the current configuration, then a
//             final-test run that aborts on any remaining inequality.
//
// The assignment synchro hands to final is *additional* delay relative to
// the netlist's current LCEQ configuration -- exactly what the analyzer
// measures, and what makes re-running synchro on a balanced design yield
// all zeros.
// ---------------------------------------------------------------------------

struct RunOptions {
    std::uint64_t cycles = 200;
    MarkerWindow window;
    std::uint64_t seed = 1;
    bool allow_wrap = false;
    // Where synchro keeps the marker report; in-memory when unset.
    std::optional<std::filesystem::path> report_path;
    // Cross-check the measured delays against the static-analysis oracle.
    bool oracle_check = false;
    // Payload generator; seeded pseudo-random data when unset (payload
    // values never influence marker flow).
    Stimulus stimulus;
};

inline SimOptions sim_options(const RunOptions& opt, SimMode mode) {
    SimOptions s;
    s.mode = mode;
    s.cycles = opt.cycles;
    s.window = opt.window;
    s.allow_wrap = opt.allow_wrap;
    return s;
}

inline Stimulus effective_stimulus(const RunOptions& opt) {
    return opt.stimulus ? opt.stimulus : seeded_stimulus(opt.seed);
}

struct SynchroResult {
    DelayAssignment additional;  // measured on top of the current config
    DelayAssignment total;       // current config + additional
    bool oracle_agrees = true;   // meaningful when oracle_check was set
};

// Analysis simulation followed by report analysis.
inline SynchroResult run_synchro(const Netlist& n, const RunOptions& opt) {
    SynchroResult r;
    if (opt.report_path) {
        {
            std::ofstream out(*opt.report_path, std::ios::binary);
            if (!out)
                throw Error("cannot write marker report to " + opt.report_path->string());
            simulate(n, sim_options(opt, SimMode::Analysis), effective_stimulus(opt), &out);
        }
        std::ifstream in(*opt.report_path, std::ios::binary);
        if (!in)
            throw Error("cannot reread marker report from " + opt.report_path->string());
        r.additional = compute_delays(in, opt.window);
    } else {
        std::stringstream report;
        simulate(n, sim_options(opt, SimMode::Analysis), effective_stimulus(opt), &report);
        r.additional = compute_delays(report, opt.window);
    }
    r.total = current_delays(n) + r.additional;
    if (opt.oracle_check) r.oracle_agrees = (static_delays(n) == r.additional);
    return r;
}

struct FinalResult {
    SimOutcome outcome;
    bool passed = false;
};

// Final test: stack `additional` on the current configuration and verify
// no LCEQ ever sees unequal markers.
inline FinalResult run_final(const Netlist& n, const DelayAssignment& additional,
                             const RunOptions& opt) {
    Netlist configured = apply_delays(n, current_delays(n) + additional);
    FinalResult r;
    r.outcome = simulate(configured, sim_options(opt, SimMode::FinalTest),
                         effective_stimulus(opt));
    r.passed = !r.outcome.aborted();
    return r;
}

}  // namespace latbal
