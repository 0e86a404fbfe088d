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
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "latbal/errors.hpp"
#include "latbal/marker.hpp"
#include "latbal/netlist.hpp"
#include "latbal/ops.hpp"
#include "latbal/report.hpp"

namespace latbal {

// ---------------------------------------------------------------------------
// Cycle-accurate netlist simulation with time markers.
//
// Every data word carries a TimeMarker: the wrapped cycle number at which
// it entered the design.  Registers start Uninitialized; sources stamp the
// current cycle.  An LCEQ block watches the markers arriving at the far
// end of its per-path delay lines:
//
//   Analysis   record every path's marker in the report each cycle, then
//              copy the oldest marker to all outputs so downstream blocks
//              see consistent tags.  Never aborts.
//   FinalTest  require all paths equal once; the first discrepancy (a
//              valid/uninitialized mix counts) aborts the run.
// ---------------------------------------------------------------------------

enum class SimMode { Analysis, FinalTest };

// One word on one port for one cycle.
struct Token {
    Payload payload;
    TimeMarker marker;

    bool operator==(const Token&) const = default;
};

// Per-source payload generator.  Markers are the simulator's business;
// stimuli only provide data.
using Stimulus = std::function<Payload(const Netlist&, NodeId, std::uint64_t)>;

inline Stimulus constant_stimulus(std::int64_t value) {
    return [value](const Netlist&, NodeId, std::uint64_t) { return Payload{value}; };
}

namespace detail {
// splitmix64: stable across platforms, unlike <random> distributions.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}
}  // namespace detail

// Deterministic pseudo-random scalar per (source, cycle); identical seeds
// give byte-identical runs.
inline Stimulus seeded_stimulus(std::uint64_t seed, std::int64_t lo = 0, std::int64_t hi = 999) {
    return [=](const Netlist&, NodeId node, std::uint64_t cycle) {
        std::uint64_t h = detail::splitmix64(seed ^ detail::splitmix64(
                                                        (std::uint64_t(node) << 32) ^ cycle));
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return Payload{lo + static_cast<std::int64_t>(h % span)};
    };
}

struct SimOptions {
    SimMode mode = SimMode::Analysis;
    std::uint64_t cycles = 200;
    MarkerWindow window;
    // Simulating past window/2 makes marker differences ambiguous in
    // general; runs that long are refused unless the caller opts in (sound
    // whenever the design's real latency spread stays below window/2).
    bool allow_wrap = false;
    // First cycle at which sources emit; before it they are uninitialized.
    std::uint64_t stimulus_start = 0;
};

// A FinalTest discrepancy: the post-delay markers of one LCEQ block at one
// cycle, not all equal.
struct InequalityEvent {
    std::string leq_id;
    std::uint64_t cycle = 0;
    std::vector<TimeMarker> markers;  // per path

    bool operator==(const InequalityEvent&) const = default;
};

// Diagnostic rendering, e.g. "EQ inequal latencies: out0=0, out1=-1".
inline std::string format_inequality(const InequalityEvent& ev) {
    std::string out = ev.leq_id + " inequal latencies:";
    for (std::size_t i = 0; i < ev.markers.size(); ++i) {
        out += i ? ", " : " ";
        out += "out" + std::to_string(i) + "=" + to_string(ev.markers[i]);
    }
    return out;
}

struct SinkTrace {
    NodeId node = 0;
    std::string name;
    std::vector<Token> tokens;  // indexed by cycle
};

struct SimOutcome {
    std::uint64_t cycles_run = 0;  // completed cycles; < requested iff aborted
    std::vector<InequalityEvent> inequality_events;
    std::vector<SinkTrace> sink_traces;  // in node-id order

    bool aborted() const { return !inequality_events.empty(); }

    const SinkTrace& sink(std::string_view name) const {
        for (const SinkTrace& t : sink_traces)
            if (t.name == name) return t;
        throw UnreachableError("no sink named \"" + std::string(name) + "\"");
    }
};

namespace detail {

// Fixed-depth shift register of tokens; depth 0 is a wire.
class TokenRing {
public:
    explicit TokenRing(std::uint32_t depth) : slots_(depth) {}

    // Push this cycle's token, receive the one from `depth` cycles ago.
    Token step(Token in) {
        if (slots_.empty()) return in;
        Token out = std::move(slots_[idx_]);
        slots_[idx_] = std::move(in);
        idx_ = (idx_ + 1) % slots_.size();
        return out;
    }

private:
    std::vector<Token> slots_;  // default tokens: empty payload, uninit marker
    std::size_t idx_ = 0;
};

// Same, for multi-output ops: all outputs delayed together, one marker.
struct OpEntry {
    std::vector<Payload> outs;
    TimeMarker marker;
};

class OpRing {
public:
    OpRing(std::uint32_t depth, std::uint32_t outputs) : outputs_(outputs), slots_(depth) {
        for (OpEntry& e : slots_) e.outs.resize(outputs);
    }

    OpEntry step(OpEntry in) {
        if (slots_.empty()) return in;
        OpEntry out = std::move(slots_[idx_]);
        slots_[idx_] = std::move(in);
        idx_ = (idx_ + 1) % slots_.size();
        return out;
    }

private:
    std::uint32_t outputs_;
    std::vector<OpEntry> slots_;
    std::size_t idx_ = 0;
};

}  // namespace detail

// Run the netlist for opt.cycles cycles.  In Analysis mode, marker report
// lines stream to `report` (if given) for every LCEQ in deterministic
// (topological) order each cycle.  In FinalTest mode the first marker
// discrepancy at any LCEQ aborts the run and is returned in
// inequality_events (the partial cycle's sink samples are dropped).
inline SimOutcome simulate(const Netlist& n, const SimOptions& opt, const Stimulus& stimulus,
                           std::ostream* report = nullptr) {
    require_valid(n, "simulate");
    const MarkerWindow w = opt.window;
    if (!opt.allow_wrap && opt.cycles >= w.half())
        throw WindowExceededError(
            "simulating " + std::to_string(opt.cycles) + " cycles would pass half the marker "
            "window (" + std::to_string(w.size()) + "); raise --window or split the run");

    std::vector<NodeId> order = *n.topological_order();  // validated acyclic
    auto drivers = n.driver_table();

    // Per-node prepared state.
    std::vector<std::optional<detail::OpRing>> op_rings(n.size());
    std::vector<OpCallable> op_fns(n.size());
    std::vector<std::vector<detail::TokenRing>> lceq_rings(n.size());
    std::vector<detail::TokenRing> line_rings;
    std::vector<std::optional<std::size_t>> line_index(n.size());
    for (NodeId id = 0; id < n.size(); ++id) {
        const Node& node = n.node(id);
        if (const auto* op = std::get_if<OpNode>(&node.kind)) {
            op_fns[id] = resolve_op(op->fn, op->arity, op->outputs);
            if (op->latency > 0) op_rings[id].emplace(op->latency, op->outputs);
        } else if (const auto* line = std::get_if<DelayLineNode>(&node.kind)) {
            line_index[id] = line_rings.size();
            line_rings.emplace_back(line->depth);
        } else if (const auto* lceq = std::get_if<LceqNode>(&node.kind)) {
            for (std::uint32_t p = 0; p < lceq->n_paths; ++p)
                lceq_rings[id].emplace_back(lceq->path_delays[p]);
        }
    }

    SimOutcome outcome;
    for (NodeId id = 0; id < n.size(); ++id)
        if (std::holds_alternative<SinkNode>(n.node(id).kind))
            outcome.sink_traces.push_back(SinkTrace{id, n.node(id).name, {}});

    // Output tokens of the current cycle, [node][port].
    std::vector<std::vector<Token>> out(n.size());
    for (NodeId id = 0; id < n.size(); ++id) out[id].resize(output_count(n.node(id)));

    auto input_token = [&](NodeId id, std::uint32_t port) -> const Token& {
        // validate() guarantees a driver; topo order guarantees it ran.
        const PortRef& d = *drivers[id][port];
        return out[d.node][d.port];
    };

    const std::uint32_t mask = w.size() - 1;
    for (std::uint64_t t = 0; t < opt.cycles; ++t) {
        for (NodeId id : order) {
            const Node& node = n.node(id);
            if (std::holds_alternative<SourceNode>(node.kind)) {
                if (t < opt.stimulus_start) {
                    out[id][0] = Token{Payload{}, TimeMarker::uninitialized()};
                } else {
                    out[id][0] = Token{stimulus(n, id, t),
                                       TimeMarker::at(static_cast<std::uint32_t>(
                                           (t - opt.stimulus_start) & mask))};
                }
            } else if (const auto* op = std::get_if<OpNode>(&node.kind)) {
                std::vector<Payload> ins(op->arity);
                std::vector<TimeMarker> ms(op->arity);
                for (std::uint32_t p = 0; p < op->arity; ++p) {
                    const Token& tok = input_token(id, p);
                    ins[p] = tok.payload;
                    ms[p] = tok.marker;
                }
                detail::OpEntry e;
                e.outs = op_fns[id](ins);
                if (e.outs.size() != op->outputs)
                    throw UnreachableError("op \"" + node.name + "\" produced " +
                                           std::to_string(e.outs.size()) + " outputs, wired for " +
                                           std::to_string(op->outputs));
                e.marker = marker_min(ms, w);
                if (op_rings[id]) e = op_rings[id]->step(std::move(e));
                for (std::uint32_t p = 0; p < op->outputs; ++p)
                    out[id][p] = Token{std::move(e.outs[p]), e.marker};
            } else if (std::holds_alternative<DelayLineNode>(node.kind)) {
                out[id][0] = line_rings[*line_index[id]].step(input_token(id, 0));
            } else if (const auto* lceq = std::get_if<LceqNode>(&node.kind)) {
                std::vector<Token> post(lceq->n_paths);
                for (std::uint32_t p = 0; p < lceq->n_paths; ++p)
                    post[p] = lceq_rings[id][p].step(input_token(id, p));

                std::vector<TimeMarker> ms(lceq->n_paths);
                for (std::uint32_t p = 0; p < lceq->n_paths; ++p) ms[p] = post[p].marker;

                if (opt.mode == SimMode::Analysis) {
                    if (report) {
                        std::string rid = lceq->leq_id.str();
                        for (std::uint32_t p = 0; p < lceq->n_paths; ++p)
                            write_record(*report, marker_line(rid, p, ms[p]));
                        write_record(*report, end_line(rid));
                    }
                    TimeMarker oldest = marker_min(ms, w);
                    for (std::uint32_t p = 0; p < lceq->n_paths; ++p)
                        out[id][p] = Token{std::move(post[p].payload), oldest};
                } else {
                    bool equal = true;
                    for (std::uint32_t p = 1; p < lceq->n_paths; ++p)
                        if (ms[p] != ms[0]) equal = false;
                    if (!equal) {
                        outcome.inequality_events.push_back(
                            InequalityEvent{lceq->leq_id.str(), t, std::move(ms)});
                        // Abort: drop this cycle's partial sink samples.
                        for (SinkTrace& s : outcome.sink_traces)
                            if (s.tokens.size() > t) s.tokens.resize(t);
                        outcome.cycles_run = t;
                        return outcome;
                    }
                    for (std::uint32_t p = 0; p < lceq->n_paths; ++p)
                        out[id][p] = std::move(post[p]);
                }
            } else {  // sink
                for (SinkTrace& s : outcome.sink_traces) {
                    if (s.node == id) {
                        s.tokens.push_back(input_token(id, 0));
                        break;
                    }
                }
            }
        }
    }
    outcome.cycles_run = opt.cycles;
    return outcome;
}

}  // namespace latbal
