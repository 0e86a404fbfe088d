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

#include <charconv>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "latbal/errors.hpp"
#include "latbal/marker.hpp"

namespace latbal {

// ---------------------------------------------------------------------------
// Marker report format
//
// The analysis run writes one line per LCEQ input per cycle,
//
//   <LEQ_ID> <input> <marker>\n
//
// closed off by one end line per block per cycle,
//
//   <LEQ_ID> end\n
//
// ASCII decimal fields, single spaces, LF line ends, marker -1 for
// uninitialized.  The lines of one block's cycle group are contiguous, but
// groups of different blocks may interleave arbitrarily (in hardware
// simulation each block appends on its own).  This file format is a
// compatibility surface shared with the VHDL side; keep it byte-stable.
// ---------------------------------------------------------------------------

// One line of a report.
struct ReportRecord {
    std::string leq_id;
    bool is_end = false;
    std::uint32_t input = 0;     // valid when !is_end
    TimeMarker marker;           // valid when !is_end

    bool operator==(const ReportRecord&) const = default;
};

inline ReportRecord marker_line(std::string leq_id, std::uint32_t input, TimeMarker m) {
    return ReportRecord{std::move(leq_id), false, input, m};
}

inline ReportRecord end_line(std::string leq_id) {
    return ReportRecord{std::move(leq_id), true, 0, TimeMarker()};
}

inline void write_record(std::ostream& os, const ReportRecord& r) {
    if (r.is_end)
        os << r.leq_id << " end\n";
    else
        os << r.leq_id << ' ' << r.input << ' ' << report_value(r.marker) << '\n';
}

// One completed cycle group: every input's marker for one block, one cycle.
struct CycleGroup {
    std::string leq_id;
    std::vector<TimeMarker> markers;  // indexed by input

    bool operator==(const CycleGroup&) const = default;
};

using GroupCallback = std::function<void(CycleGroup&&)>;

namespace detail {

inline bool valid_block_id(std::string_view id) {
    if (id.empty()) return false;
    // Same alphabet InstanceId enforces, plus ':' as the separator; a bare
    // ':' edge (empty segment) is rejected.
    if (id.front() == ':' || id.back() == ':') return false;
    for (std::size_t i = 0; i < id.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(id[i]);
        if (c <= ' ' || c == 0x7f) return false;
        if (id[i] == ':' && i + 1 < id.size() && id[i + 1] == ':') return false;
    }
    return true;
}

inline std::int64_t parse_int(std::string_view tok, std::size_t line_no, const char* what) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw ParseError("line " + std::to_string(line_no) + ": bad " + what + " \"" +
                             std::string(tok) + "\"",
                         line_no);
    return v;
}

}  // namespace detail

// Streaming parse: reads the whole report, assembling cycle groups and
// handing each to the callback in file order (the order of end lines).
// Memory stays proportional to the number of concurrently open blocks, not
// to report length.  Throws ParseError on malformed lines, DuplicateInput
// when an input repeats within a group, TruncatedReportError when the
// stream ends with a group still open.  A block's input count is pinned by
// its first group; later groups must cover exactly the same inputs.
inline void parse_report(std::istream& in, const GroupCallback& on_group) {
    struct OpenGroup {
        std::map<std::uint32_t, TimeMarker> markers;
    };
    std::map<std::string, OpenGroup> open;          // blocks mid-group
    std::map<std::string, std::uint32_t> n_inputs;  // pinned by first group

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            throw ParseError("line " + std::to_string(line_no) + ": CR line ending", line_no);

        // Split on single spaces; empty tokens mean doubled/leading space.
        std::vector<std::string_view> tok;
        std::string_view rest = line;
        while (true) {
            std::size_t sp = rest.find(' ');
            tok.push_back(rest.substr(0, sp));
            if (sp == std::string_view::npos) break;
            rest = rest.substr(sp + 1);
        }
        for (std::string_view t : tok)
            if (t.empty())
                throw ParseError("line " + std::to_string(line_no) + ": empty field", line_no);

        if (tok.size() < 2 || !detail::valid_block_id(tok[0]))
            throw ParseError("line " + std::to_string(line_no) + ": malformed record \"" + line +
                                 "\"",
                             line_no);
        std::string id(tok[0]);

        if (tok[1] == "end") {
            if (tok.size() != 2)
                throw ParseError("line " + std::to_string(line_no) + ": trailing fields after end",
                                 line_no);
            auto it = open.find(id);
            if (it == open.end() || it->second.markers.empty())
                throw ParseError("line " + std::to_string(line_no) + ": end for block \"" + id +
                                     "\" with no recorded markers",
                                 line_no);
            // Inputs must be exactly 0..n-1 and agree with earlier groups.
            std::uint32_t n = static_cast<std::uint32_t>(it->second.markers.size());
            if (it->second.markers.rbegin()->first != n - 1)
                throw ParseError("line " + std::to_string(line_no) + ": block \"" + id +
                                     "\" group skips an input index",
                                 line_no);
            auto [pin, fresh] = n_inputs.emplace(id, n);
            if (!fresh && pin->second != n)
                throw ParseError("line " + std::to_string(line_no) + ": block \"" + id +
                                     "\" changed input count from " + std::to_string(pin->second) +
                                     " to " + std::to_string(n),
                                 line_no);
            CycleGroup g;
            g.leq_id = id;
            g.markers.reserve(n);
            for (const auto& [input, m] : it->second.markers) g.markers.push_back(m);
            open.erase(it);
            on_group(std::move(g));
            continue;
        }

        if (tok.size() != 3)
            throw ParseError("line " + std::to_string(line_no) + ": malformed record \"" + line +
                                 "\"",
                             line_no);
        std::int64_t input = detail::parse_int(tok[1], line_no, "input index");
        if (input < 0 || input > UINT32_MAX)
            throw ParseError("line " + std::to_string(line_no) + ": input index out of range",
                             line_no);
        TimeMarker m = marker_from_report_value(detail::parse_int(tok[2], line_no, "marker"));
        auto [it, fresh] =
            open[id].markers.emplace(static_cast<std::uint32_t>(input), m);
        if (!fresh)
            throw DuplicateInputError("line " + std::to_string(line_no) + ": block \"" + id +
                                          "\" repeats input " + std::to_string(input),
                                      id, static_cast<std::uint32_t>(input), line_no);
    }
    if (in.bad())
        throw ParseError("I/O error while reading marker report", line_no);
    if (!open.empty()) {
        std::string blocks;
        for (const auto& [id, g] : open) {
            if (!blocks.empty()) blocks += ", ";
            blocks += '"' + id + '"';
        }
        throw TruncatedReportError("marker report ends inside an open cycle group for " + blocks);
    }
}

// Convenience: whole report to a group list (tests, small inputs).
inline std::vector<CycleGroup> parse_report_all(std::istream& in) {
    std::vector<CycleGroup> out;
    parse_report(in, [&](CycleGroup&& g) { out.push_back(std::move(g)); });
    return out;
}

}  // namespace latbal
