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

#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "latbal/analyzer.hpp"  // is_vhdl_identifier
#include "latbal/errors.hpp"

namespace latbal {

// ---------------------------------------------------------------------------
// LCEQ entity generation (the lateqgen step).
//
// Emits one VHDL entity per LCEQ block: n synchronous delay lines whose
// depths come from the latency configuration function at elaboration, plus
// the simulation-only marker machinery fenced between translate_off /
// translate_on metacomments.  After a synthesis tool drops the fenced
// regions, nothing marker-related remains -- the block is pure delay
// lines.
//
// Path data types are the user's record types.  Each must be named
// T_<NAME>, carry a field `mrk : T_LATEQ_MRK` alongside the data fields,
// and come with a C_<NAME>_INIT constant whose mrk is C_LATEQ_MRK_INIT.
// ---------------------------------------------------------------------------

// One LCEQ block to generate: entity name plus per-path record types
// (one per path; repeat a type for same-typed paths).
struct LceqSpec {
    std::string entity_name;
    std::vector<std::string> type_names;
};

// T_<NAME> -> C_<NAME>_INIT.
inline std::string init_constant_name(std::string_view type_name) {
    if (type_name.size() < 3 || type_name.substr(0, 2) != "T_" ||
        !is_vhdl_identifier(type_name))
        throw BadTypeNameError("\"" + std::string(type_name) +
                               "\" is not a T_<NAME> record type name");
    return "C_" + std::string(type_name.substr(2)) + "_INIT";
}

inline std::string generate_lceq(const LceqSpec& spec,
                                 const std::vector<std::string>& use_packages = {}) {
    if (!is_vhdl_identifier(spec.entity_name))
        throw BadIdentifierError("entity name \"" + spec.entity_name +
                                 "\" is not a VHDL basic identifier");
    if (spec.type_names.size() < 2)
        throw LceqSpecError("LCEQ block \"" + spec.entity_name + "\" needs at least 2 paths, got " +
                            std::to_string(spec.type_names.size()));
    std::size_t n = spec.type_names.size();
    std::vector<std::string> inits(n);
    for (std::size_t i = 0; i < n; ++i) inits[i] = init_constant_name(spec.type_names[i]);

    std::ostringstream os;
    os << "-- " << spec.entity_name << " : latency checking and equalizing block, " << n
       << " paths. Generated; do not edit.\n"
          "--\n"
          "-- Expects in library work: lateq_read_pkg (latency configuration;\n"
          "-- regenerate per analysis run) and the path record types with their\n"
          "-- C_<NAME>_INIT constants.\n";
    os << "library ieee;\n"
          "use ieee.std_logic_1164.all;\n"
          "use work.lateq_read_pkg.all;\n";
    for (const std::string& pkg : use_packages) {
        if (!is_vhdl_identifier(pkg))
            throw BadIdentifierError("use package \"" + pkg + "\" is not a VHDL basic identifier");
        os << "use work." << pkg << ".all;\n";
    }
    os << "--pragma translate_off\n"
          "-- Simulation only: lateq_pkg supplies the marker machinery, and every\n"
          "-- path record carries a `mrk : T_LATEQ_MRK` field initialized to\n"
          "-- C_LATEQ_MRK_INIT.\n"
          "use work.lateq_pkg.all;\n"
          "--pragma translate_on\n"
          "\n";

    // Ports, names padded so the colons line up.
    std::size_t w = 3;  // "clk"
    for (std::size_t i = 0; i < n; ++i) {
        std::string longest = "dout" + std::to_string(i);
        if (longest.size() > w) w = longest.size();
    }
    auto pad = [&](std::string name) {
        name.resize(w, ' ');
        return name;
    };

    os << "entity " << spec.entity_name << " is\n"
          "  generic (\n"
          "    LEQ_ID : string\n"
          "  );\n"
          "  port (\n";
    os << "    " << pad("clk") << " : in  std_logic;\n";
    for (std::size_t i = 0; i < n; ++i)
        os << "    " << pad("din" + std::to_string(i)) << " : in  " << spec.type_names[i] << ";\n";
    for (std::size_t i = 0; i < n; ++i)
        os << "    " << pad("dout" + std::to_string(i)) << " : out " << spec.type_names[i]
           << (i + 1 < n ? ";" : "") << "\n";
    os << "  );\n"
          "end entity "
       << spec.entity_name << ";\n\n";

    os << "architecture lateq of " << spec.entity_name << " is\n\n";
    for (std::size_t i = 0; i < n; ++i) {
        os << "  -- path " << i << " : " << spec.type_names[i] << "\n"
           << "  constant LAT" << i << " : integer := lateq_read_delays(LEQ_ID, " << i << ");\n"
           << "  type T_DL" << i << " is array (0 to LAT" << i << ") of " << spec.type_names[i]
           << ";\n"
           << "  signal dl" << i << " : T_DL" << i << " := (others => " << inits[i] << ");\n\n";
    }
    os << "begin\n\n";

    for (std::size_t i = 0; i < n; ++i) {
        os << "  dl" << i << "(0) <= din" << i << ";\n"
           << "  dl" << i << "_sr : if LAT" << i << " > 0 generate\n"
           << "    process (clk)\n"
           << "    begin\n"
           << "      if rising_edge(clk) then\n"
           << "        dl" << i << "(1 to LAT" << i << ") <= dl" << i << "(0 to LAT" << i
           << " - 1);\n"
           << "      end if;\n"
           << "    end process;\n"
           << "  end generate dl" << i << "_sr;\n\n";
    }

    // Output stage.  In simulation the oldest marker is copied to every
    // output so downstream markers stay consistent; stripped of the fenced
    // region this is a plain per-path pass-through.
    os << "  outputs : process (";
    for (std::size_t i = 0; i < n; ++i) os << (i ? ", " : "") << "dl" << i;
    os << ")\n";
    for (std::size_t i = 0; i < n; ++i)
        os << "    variable v" << i << " : " << spec.type_names[i] << ";\n";
    os << "    --pragma translate_off\n"
          "    variable v_mrk : T_LATEQ_MRK;\n"
          "    --pragma translate_on\n"
          "  begin\n";
    for (std::size_t i = 0; i < n; ++i)
        os << "    v" << i << " := dl" << i << "(LAT" << i << ");\n";
    os << "    --pragma translate_off\n"
          "    v_mrk := v0.mrk;\n";
    for (std::size_t i = 1; i < n; ++i)
        os << "    if lateq_mrk_cmp(v" << i << ".mrk, v_mrk) < 0 then\n"
           << "      v_mrk := v" << i << ".mrk;\n"
           << "    end if;\n";
    for (std::size_t i = 0; i < n; ++i) os << "    v" << i << ".mrk := v_mrk;\n";
    os << "    --pragma translate_on\n";
    for (std::size_t i = 0; i < n; ++i)
        os << "    dout" << i << " <= v" << i << ";\n";
    os << "  end process outputs;\n\n";

    // Simulation monitor: report markers every clock in analysis runs,
    // abort on the first discrepancy in the final test.
    os << "  --pragma translate_off\n"
          "  monitor : process (clk)\n"
          "  begin\n"
          "    if rising_edge(clk) then\n"
          "      if lateq_final_test then\n"
          "        if ";
    for (std::size_t i = 1; i < n; ++i) {
        if (i > 1) os << "\n           or ";
        os << "lateq_mrk_cmp(dl" << i << "(LAT" << i << ").mrk, dl0(LAT0).mrk) /= 0";
    }
    os << " then\n"
          "          assert false\n"
          "            report LEQ_ID & \" inequal latencies:\"\n";
    for (std::size_t i = 0; i < n; ++i)
        os << "              & \"" << (i ? ", " : " ") << "out" << i << "=\" & integer'image(dl"
           << i << "(LAT" << i << ").mrk)\n";
    os << "            severity failure;\n"
          "        end if;\n"
          "      else\n";
    for (std::size_t i = 0; i < n; ++i)
        os << "        lateq_report_delay(LEQ_ID, " << i << ", dl" << i << "(LAT" << i
           << ").mrk);\n";
    os << "        lateq_report_end(LEQ_ID);\n"
          "      end if;\n"
          "    end if;\n"
          "  end process monitor;\n"
          "  --pragma translate_on\n\n";

    os << "end architecture lateq;\n";
    return os.str();
}

// Synthesis view: drop every region fenced by translate_off/translate_on
// metacomments (fence lines included), exactly as synthesis tools do.
inline std::string strip_translate_off(std::string_view vhdl) {
    std::string out;
    bool skipping = false;
    std::size_t pos = 0;
    while (pos <= vhdl.size()) {
        std::size_t eol = vhdl.find('\n', pos);
        std::string_view line = vhdl.substr(
            pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        std::string_view trimmed = line;
        while (!trimmed.empty() && (trimmed.front() == ' ' || trimmed.front() == '\t'))
            trimmed.remove_prefix(1);
        if (trimmed == "--pragma translate_off") {
            skipping = true;
        } else if (trimmed == "--pragma translate_on") {
            skipping = false;
        } else if (!skipping && !(line.empty() && eol == std::string_view::npos)) {
            out += line;
            out += '\n';
        }
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    return out;
}

}  // namespace latbal
