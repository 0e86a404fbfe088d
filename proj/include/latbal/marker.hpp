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

#include <bit>
#include <cstdint>
#include <span>
#include <string>

#include "latbal/errors.hpp"

namespace latbal {

// Wraparound window for time-marker arithmetic.  Markers live in
// [0, size), advance wraps size-1 -> 0, and differences are resolved to
// the unique representative in [-size/2, size/2).  That resolution is only
// meaningful while real latency differences stay below size/2; the window
// must therefore exceed twice the deepest pipeline being measured.  Kept a
// power of two so hardware counters can wrap for free.
class MarkerWindow {
public:
    static constexpr std::uint32_t kDefaultSize = 1u << 16;

    MarkerWindow() = default;

    explicit MarkerWindow(std::uint32_t size) : size_(size) {
        if (size < 2 || !std::has_single_bit(size))
            throw WindowExceededError("marker window must be a power of two >= 2, got " +
                                      std::to_string(size));
    }

    std::uint32_t size() const { return size_; }
    std::uint32_t half() const { return size_ / 2; }

    bool operator==(const MarkerWindow&) const = default;

private:
    std::uint32_t size_ = kDefaultSize;
};

// Simulation-only tag carried next to every data word: the wrapped cycle
// number at which the word entered the pipeline.  Distinct Uninitialized
// state models registers that no input has reached yet; it is rendered as
// -1 in reports but is not a numeric value (no arithmetic on it).
class TimeMarker {
public:
    // Uninitialized marker; what every delay element starts with.
    constexpr TimeMarker() = default;

    // Valid marker carrying wrapped cycle value v.
    static constexpr TimeMarker at(std::uint32_t v) { return TimeMarker(v, true); }
    static constexpr TimeMarker uninitialized() { return TimeMarker(); }

    constexpr bool valid() const { return valid_; }

    // Wrapped cycle value; only meaningful on a valid marker.
    std::uint32_t value() const {
        if (!valid_)
            throw UninitializedMarkerError("value() on an uninitialized time marker");
        return value_;
    }

    constexpr bool operator==(const TimeMarker&) const = default;

private:
    constexpr TimeMarker(std::uint32_t v, bool ok) : value_(v), valid_(ok) {}

    std::uint32_t value_ = 0;
    bool valid_ = false;
};

namespace detail {
inline std::uint32_t checked_value(TimeMarker m, MarkerWindow w, const char* who) {
    if (!m.valid())
        throw UninitializedMarkerError(std::string(who) + " on an uninitialized time marker");
    std::uint32_t v = m.value();
    if (v >= w.size())
        throw WindowExceededError(std::string(who) + ": marker value " + std::to_string(v) +
                                  " outside window " + std::to_string(w.size()));
    return v;
}
}  // namespace detail

// Next cycle's marker: value+1 wrapped into the window.
inline TimeMarker advance(TimeMarker m, MarkerWindow w = MarkerWindow()) {
    std::uint32_t v = detail::checked_value(m, w, "advance");
    return TimeMarker::at((v + 1) & (w.size() - 1));
}

// Shortest-wrap signed difference a-b: the unique d with
// -size/2 <= d < size/2 and (b + d) == a (mod size).  Positive means a is
// newer (entered later) than b.
inline std::int64_t marker_diff(TimeMarker a, TimeMarker b, MarkerWindow w = MarkerWindow()) {
    std::uint32_t va = detail::checked_value(a, w, "marker_diff");
    std::uint32_t vb = detail::checked_value(b, w, "marker_diff");
    std::int64_t d = (static_cast<std::int64_t>(va) - static_cast<std::int64_t>(vb)) &
                     (static_cast<std::int64_t>(w.size()) - 1);
    if (d >= static_cast<std::int64_t>(w.half())) d -= static_cast<std::int64_t>(w.size());
    return d;
}

// Oldest marker of a group under shortest-wrap ordering.  Any
// uninitialized member dominates: a group is only as old as its least
// initialized path.  Empty groups are a caller bug.
inline TimeMarker marker_min(std::span<const TimeMarker> ms, MarkerWindow w = MarkerWindow()) {
    if (ms.empty())
        throw UnreachableError("marker_min on an empty marker group");
    TimeMarker oldest = ms.front();
    for (const TimeMarker& m : ms.subspan(1)) {
        if (!oldest.valid()) return TimeMarker::uninitialized();
        if (!m.valid()) return TimeMarker::uninitialized();
        if (marker_diff(m, oldest, w) < 0) oldest = m;
    }
    return oldest;
}

// Report rendering: valid markers print their value, uninitialized prints
// -1 (the on-wire convention of the marker report format).
inline std::int64_t report_value(TimeMarker m) {
    return m.valid() ? static_cast<std::int64_t>(m.value()) : -1;
}

inline std::string to_string(TimeMarker m) {
    return std::to_string(report_value(m));
}

// Inverse of report_value; rejects anything below -1 or beyond 32 bits.
inline TimeMarker marker_from_report_value(std::int64_t v) {
    if (v == -1) return TimeMarker::uninitialized();
    if (v < -1 || v > static_cast<std::int64_t>(UINT32_MAX))
        throw ParseError("marker value " + std::to_string(v) + " is neither -1 nor a cycle count");
    return TimeMarker::at(static_cast<std::uint32_t>(v));
}

}  // namespace latbal
