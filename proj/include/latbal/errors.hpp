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

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace latbal {

// Base class for everything latbal throws.  Catching latbal::Error at a
// command boundary is always sufficient to turn a failure into a message.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Arithmetic on a marker that is still in the Uninitialized state.
struct UninitializedMarkerError : Error {
    using Error::Error;
};

// A marker value or a requested cycle count does not fit the wraparound
// window the caller selected.
struct WindowExceededError : Error {
    using Error::Error;
};

// An instance-id segment is empty or contains a forbidden character.
struct InstanceIdError : Error {
    using Error::Error;
};

// A netlist failed structural validation where a valid one was required.
struct InvalidNetlistError : Error {
    using Error::Error;
};

// A delay assignment names an LCEQ block or path the netlist does not have.
struct UnknownTargetError : Error {
    using Error::Error;
};

// An op node references a combinational function the registry does not
// provide, or provides with a different input/output shape.
struct UnknownOpError : Error {
    using Error::Error;
};

// Malformed input while reading a marker report or a netlist file.
struct ParseError : Error {
    ParseError(const std::string& what, std::size_t line_no = 0)
        : Error(what), line(line_no) {}
    std::size_t line;  // 1-based; 0 when no line applies
};

// A marker report ended in the middle of a cycle group (markers recorded,
// no closing "end" line).
struct TruncatedReportError : Error {
    using Error::Error;
};

// The same input index appeared twice within one cycle group.
struct DuplicateInputError : Error {
    DuplicateInputError(const std::string& what, std::string block_id,
                        std::uint32_t input_no, std::size_t line_no)
        : Error(what), block(std::move(block_id)), input(input_no), line(line_no) {}
    std::string block;
    std::uint32_t input;
    std::size_t line;
};

// A block's observed latency difference changed between cycle groups: the
// design is not a static pipeline (or the report mixes incompatible runs).
struct InconsistentLatencyError : Error {
    InconsistentLatencyError(const std::string& what, std::string block_id,
                             std::uint32_t path_no, std::int64_t first_delta,
                             std::int64_t second_delta)
        : Error(what), block(std::move(block_id)), path(path_no),
          first(first_delta), second(second_delta) {}
    std::string block;
    std::uint32_t path;
    std::int64_t first;
    std::int64_t second;
};

// Every cycle group of a block contained an uninitialized marker, so no
// latency could be measured for it.
struct NoValidSamplesError : Error {
    NoValidSamplesError(const std::string& what, std::string block_id)
        : Error(what), block(std::move(block_id)) {}
    std::string block;
};

// A requested VHDL package/function name is not a basic identifier.
struct BadIdentifierError : Error {
    using Error::Error;
};

// A record type name handed to the LCEQ generator does not follow the
// T_<NAME> convention the init-constant derivation needs.
struct BadTypeNameError : Error {
    using Error::Error;
};

// An LCEQ generation spec is unusable (fewer than two paths, bad entity
// name, ...).
struct LceqSpecError : Error {
    using Error::Error;
};

// Internal invariant broke; indicates a latbal bug, not bad input.
struct UnreachableError : Error {
    using Error::Error;
};

}  // namespace latbal
