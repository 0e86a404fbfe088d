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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "latbal/errors.hpp"
#include "latbal/netlist.hpp"

namespace latbal {

// Data traveling on one port for one cycle: a flat bus of words.  Scalars
// are 1-element buses; structured values (argmax pairs) are packed flat.
using Payload = std::vector<std::int64_t>;

// Resolved combinational behavior of an op node: input payloads (one per
// input port) to output payloads (one per output port).
using OpCallable = std::function<std::vector<Payload>(std::span<const Payload>)>;

namespace detail {

// Builtins must be total: while the pipeline warms up they run on the
// empty payloads delay registers start with, so out-of-range reads yield 0
// instead of tripping.  Warm-up outputs carry uninitialized markers and
// are never checked for value.
inline std::int64_t at_or_zero(const Payload& p, std::size_t i) {
    return i < p.size() ? p[i] : 0;
}

inline std::int64_t param_at(const OpFunction& fn, std::size_t i, std::int64_t fallback) {
    return i < fn.params.size() ? fn.params[i] : fallback;
}

}  // namespace detail

// Resolve an op's registry name + params against the wired shape.  The
// registry is the serialization boundary: netlist files name behaviors,
// this function turns them into code.
//
//   sum                    any->1   sum of every word of every input
//   id                     k->k     forward each input unchanged
//   concat                 any->1   inputs joined in port order
//   scale(f)               1->1     each word multiplied by f
//   chunk_sum(m)           1->1     bus of ceil(len/m) sums of m-chunks
//   argmax_leaf(m)         1->1     scalar bus -> interleaved (value,index)
//                                   pairs per m-chunk, index absolute
//   argmax_merge(m)        1->1     pair bus -> pair bus, m-chunks reduced;
//                                   ties keep the lower index
//   pair_index             1->1     (value,index) pair -> [index]
//   pair_value             1->1     (value,index) pair -> [value]
//   window_select(k)       2->2     (bus, [center]) -> (bus[c-k..c+k], [c]),
//                                   zero-padded where the window leaves the bus
//   window_weight(k)       2->1     (window, [center]) -> word j scaled by
//                                   absolute channel index c-k+j
inline OpCallable resolve_op(const OpFunction& fn, std::uint32_t arity, std::uint32_t outputs) {
    using detail::at_or_zero;
    auto shape = [&](bool ok, const char* want) {
        if (!ok)
            throw UnknownOpError("op \"" + fn.name + "\" wired as " + std::to_string(arity) +
                                 "->" + std::to_string(outputs) + ", needs " + want);
    };

    if (fn.name == "sum") {
        shape(outputs == 1, "any->1");
        return [](std::span<const Payload> in) {
            std::int64_t acc = 0;
            for (const Payload& p : in)
                for (std::int64_t v : p) acc += v;
            return std::vector<Payload>{Payload{acc}};
        };
    }
    if (fn.name == "id") {
        shape(outputs == arity, "k->k");
        return [](std::span<const Payload> in) {
            return std::vector<Payload>(in.begin(), in.end());
        };
    }
    if (fn.name == "concat") {
        shape(outputs == 1, "any->1");
        return [](std::span<const Payload> in) {
            Payload out;
            for (const Payload& p : in) out.insert(out.end(), p.begin(), p.end());
            return std::vector<Payload>{std::move(out)};
        };
    }
    if (fn.name == "scale") {
        shape(arity == 1 && outputs == 1, "1->1");
        std::int64_t f = detail::param_at(fn, 0, 1);
        return [f](std::span<const Payload> in) {
            Payload out = in[0];
            for (std::int64_t& v : out) v *= f;
            return std::vector<Payload>{std::move(out)};
        };
    }
    if (fn.name == "chunk_sum") {
        shape(arity == 1 && outputs == 1, "1->1");
        std::int64_t m = detail::param_at(fn, 0, 2);
        if (m < 2) throw UnknownOpError("chunk_sum needs a chunk size >= 2");
        return [m](std::span<const Payload> in) {
            const Payload& bus = in[0];
            Payload out;
            for (std::size_t base = 0; base < bus.size(); base += m) {
                std::int64_t acc = 0;
                for (std::size_t j = base; j < bus.size() && j < base + m; ++j) acc += bus[j];
                out.push_back(acc);
            }
            return std::vector<Payload>{std::move(out)};
        };
    }
    if (fn.name == "argmax_leaf") {
        shape(arity == 1 && outputs == 1, "1->1");
        std::int64_t m = detail::param_at(fn, 0, 2);
        if (m < 2) throw UnknownOpError("argmax_leaf needs a chunk size >= 2");
        return [m](std::span<const Payload> in) {
            const Payload& bus = in[0];
            Payload out;
            for (std::size_t base = 0; base < bus.size(); base += m) {
                std::int64_t best = bus[base];
                std::int64_t best_i = static_cast<std::int64_t>(base);
                for (std::size_t j = base + 1; j < bus.size() && j < base + m; ++j) {
                    if (bus[j] > best) {  // strict: ties keep the lower index
                        best = bus[j];
                        best_i = static_cast<std::int64_t>(j);
                    }
                }
                out.push_back(best);
                out.push_back(best_i);
            }
            return std::vector<Payload>{std::move(out)};
        };
    }
    if (fn.name == "argmax_merge") {
        shape(arity == 1 && outputs == 1, "1->1");
        std::int64_t m = detail::param_at(fn, 0, 2);
        if (m < 2) throw UnknownOpError("argmax_merge needs a chunk size >= 2");
        return [m](std::span<const Payload> in) {
            const Payload& bus = in[0];  // interleaved (value, index) pairs
            std::size_t pairs = bus.size() / 2;
            Payload out;
            for (std::size_t base = 0; base < pairs; base += m) {
                std::int64_t best = bus[2 * base];
                std::int64_t best_i = bus[2 * base + 1];
                for (std::size_t j = base + 1; j < pairs && j < base + m; ++j) {
                    if (bus[2 * j] > best) {
                        best = bus[2 * j];
                        best_i = bus[2 * j + 1];
                    }
                }
                out.push_back(best);
                out.push_back(best_i);
            }
            return std::vector<Payload>{std::move(out)};
        };
    }
    if (fn.name == "pair_index") {
        shape(arity == 1 && outputs == 1, "1->1");
        return [](std::span<const Payload> in) {
            return std::vector<Payload>{Payload{at_or_zero(in[0], 1)}};
        };
    }
    if (fn.name == "pair_value") {
        shape(arity == 1 && outputs == 1, "1->1");
        return [](std::span<const Payload> in) {
            return std::vector<Payload>{Payload{at_or_zero(in[0], 0)}};
        };
    }
    if (fn.name == "window_select") {
        shape(arity == 2 && outputs == 2, "2->2");
        std::int64_t k = detail::param_at(fn, 0, 0);
        if (k < 0) throw UnknownOpError("window_select needs k >= 0");
        return [k](std::span<const Payload> in) {
            const Payload& bus = in[0];
            std::int64_t c = at_or_zero(in[1], 0);
            // Window word j always maps to absolute channel c-k+j; channels
            // off either end of the bus read as charge 0.  That keeps the
            // downstream index weighting honest for edge windows (and makes
            // the empty warm-up bus a non-event).
            Payload window;
            for (std::int64_t j = -k; j <= k; ++j)
                window.push_back(c + j >= 0 ? at_or_zero(bus, static_cast<std::size_t>(c + j)) : 0);
            return std::vector<Payload>{std::move(window), Payload{c}};
        };
    }
    if (fn.name == "window_weight") {
        shape(arity == 2 && outputs == 1, "2->1");
        std::int64_t k = detail::param_at(fn, 0, 0);
        if (k < 0) throw UnknownOpError("window_weight needs k >= 0");
        return [k](std::span<const Payload> in) {
            const Payload& window = in[0];
            std::int64_t c = at_or_zero(in[1], 0);
            Payload out;
            for (std::size_t j = 0; j < window.size(); ++j)
                out.push_back((c - k + static_cast<std::int64_t>(j)) * window[j]);
            return std::vector<Payload>{std::move(out)};
        };
    }
    throw UnknownOpError("unknown op function \"" + fn.name + "\"");
}

}  // namespace latbal
