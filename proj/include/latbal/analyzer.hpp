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

#include <cctype>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "latbal/errors.hpp"
#include "latbal/marker.hpp"
#include "latbal/netlist.hpp"
#include "latbal/report.hpp"

namespace latbal {

// ---------------------------------------------------------------------------
// Report analysis (the latreadgen step).
//
// For every LCEQ block: drop cycle groups containing any uninitialized
// marker (the pipeline was still filling), and in each retained group
// measure every path against the group's oldest marker.  A static pipeline
// gives the same per-path difference in every retained group; that
// difference is the delay the path needs.  Anything else is an error, not
// something to average away.
// ---------------------------------------------------------------------------

inline DelayAssignment compute_delays(std::istream& report, MarkerWindow w = MarkerWindow()) {
    struct BlockState {
        bool measured = false;
        std::vector<std::int64_t> deltas;
    };
    std::map<std::string, BlockState> blocks;

    parse_report(report, [&](CycleGroup&& g) {
        BlockState& st = blocks[g.leq_id];  // registers the block even if skipped
        for (const TimeMarker& m : g.markers)
            if (!m.valid()) return;  // warm-up group: skip

        TimeMarker oldest = marker_min(g.markers, w);
        for (std::size_t p = 0; p < g.markers.size(); ++p) {
            std::int64_t delta = marker_diff(g.markers[p], oldest, w);
            if (delta < 0)
                throw WindowExceededError("block \"" + g.leq_id +
                                          "\" marker spread exceeds half the window; raise the "
                                          "window size");
            if (!st.measured) {
                st.deltas.push_back(delta);
            } else if (st.deltas[p] != delta) {
                throw InconsistentLatencyError(
                    "block \"" + g.leq_id + "\" path " + std::to_string(p) +
                        " measured delay " + std::to_string(st.deltas[p]) + " then " +
                        std::to_string(delta) + "; latency is not static",
                    g.leq_id, static_cast<std::uint32_t>(p), st.deltas[p], delta);
            }
        }
        st.measured = true;
    });

    DelayAssignment out;
    for (const auto& [id, st] : blocks) {
        if (!st.measured)
            throw NoValidSamplesError("block \"" + id +
                                          "\" never produced a fully-initialized cycle group; "
                                          "simulate more cycles",
                                      id);
        for (std::size_t p = 0; p < st.deltas.size(); ++p)
            out.set(id, static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(st.deltas[p]));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Assignment artifacts: JSON for tooling, a VHDL package for the design.
// Both orderings are pinned (sorted by leq_id, then path) so reruns are
// byte-identical.
// ---------------------------------------------------------------------------

inline void emit_assignment_json(const DelayAssignment& d, std::ostream& os) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [id, delays] : d.entries()) j[id] = delays;
    os << j.dump(2) << '\n';
}

// VHDL basic identifier: letter start, letters/digits/underscores, no
// doubled or trailing underscore.
inline bool is_vhdl_identifier(std::string_view s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s.front()))) return false;
    char prev = 0;
    for (char c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
        if (c == '_' && prev == '_') return false;
        prev = c;
    }
    return s.back() != '_';
}

// The latency configuration package: a pure function mapping
// (LEQ_ID, path) to the delay that path's LCEQ delay line takes at
// elaboration.  Unlisted pairs fall through to 0, which also makes the
// empty assignment the "initial" all-zero configuration.
inline void emit_latency_package(const DelayAssignment& d, std::string_view package_name,
                                 std::string_view function_name, std::ostream& os) {
    if (!is_vhdl_identifier(package_name))
        throw BadIdentifierError("\"" + std::string(package_name) +
                                 "\" is not a VHDL basic identifier");
    if (!is_vhdl_identifier(function_name))
        throw BadIdentifierError("\"" + std::string(function_name) +
                                 "\" is not a VHDL basic identifier");

    os << "-- Latency configuration package. Generated; do not edit.\n"
       << "\n"
       << "package " << package_name << " is\n"
       << "\n"
       << "  function " << function_name << " (\n"
       << "    constant LEQ_ID : string;\n"
       << "    constant NUM    : integer)\n"
       << "    return integer;\n"
       << "\n"
       << "end package " << package_name << ";\n"
       << "\n"
       << "package body " << package_name << " is\n"
       << "\n"
       << "  function " << function_name << " (\n"
       << "    constant LEQ_ID : string;\n"
       << "    constant NUM    : integer)\n"
       << "    return integer is\n"
       << "  begin\n";
    bool first = true;
    for (const auto& [id, delays] : d.entries()) {
        for (std::size_t p = 0; p < delays.size(); ++p) {
            os << "    " << (first ? "if" : "elsif") << " LEQ_ID = \"" << id << "\" and NUM = "
               << p << " then\n"
               << "      return " << delays[p] << ";\n";
            first = false;
        }
    }
    if (!first) os << "    end if;\n";
    os << "    return 0;\n"
       << "  end function " << function_name << ";\n"
       << "\n"
       << "end package body " << package_name << ";\n";
}

}  // namespace latbal
