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
#include <map>
#include <utility>
#include <variant>
#include <vector>

#include "latbal/errors.hpp"
#include "latbal/netlist.hpp"

namespace latbal {

// ---------------------------------------------------------------------------
// Static latency analysis.
//
// Independent of the simulator: walks the DAG once and propagates
// worst-case (longest-path) latencies from the sources.  Sources are
// latency 0; an op adds its pipeline depth on top of its slowest input; a
// delay line adds its depth; an LCEQ emits the maximum of its post-delay
// input latencies on every output (that is exactly what marker min-copy
// converges to).  Used as the ground-truth oracle for the measurement
// pipeline and as the cheap cross-check behind --oracle.
// ---------------------------------------------------------------------------

struct StaticLatencies {
    // Latency of the token arriving at each (node, input port).
    std::map<std::pair<NodeId, std::uint32_t>, std::uint64_t> at_input;
    // Latency at each node's outputs (all outputs of a node agree).
    std::vector<std::uint64_t> at_output;
};

inline StaticLatencies static_latencies(const Netlist& n) {
    require_valid(n, "static_latencies");
    StaticLatencies r;
    r.at_output.assign(n.size(), 0);
    auto drivers = n.driver_table();

    std::vector<NodeId> order = *n.topological_order();  // validated acyclic
    for (NodeId id : order) {
        const Node& node = n.node(id);
        std::uint32_t ins = input_count(node);
        std::uint64_t worst = 0;
        for (std::uint32_t p = 0; p < ins; ++p) {
            std::uint64_t lat = r.at_output[drivers[id][p]->node];
            r.at_input[{id, p}] = lat;
            if (lat > worst) worst = lat;
        }
        if (const auto* op = std::get_if<OpNode>(&node.kind)) {
            r.at_output[id] = worst + op->latency;
        } else if (const auto* line = std::get_if<DelayLineNode>(&node.kind)) {
            r.at_output[id] = worst + line->depth;
        } else if (const auto* lceq = std::get_if<LceqNode>(&node.kind)) {
            std::uint64_t post_worst = 0;
            for (std::uint32_t p = 0; p < lceq->n_paths; ++p) {
                std::uint64_t post = r.at_input[{id, p}] + lceq->path_delays[p];
                if (post > post_worst) post_worst = post;
            }
            r.at_output[id] = post_worst;
        } else {
            r.at_output[id] = worst;  // source (0), sink (pass)
        }
    }
    return r;
}

// The delay each LCEQ path needs on top of its current configuration so
// that all paths of the block align at the slowest one.  All-zero exactly
// when the netlist is already balanced.
inline DelayAssignment static_delays(const Netlist& n) {
    StaticLatencies lats = static_latencies(n);
    DelayAssignment out;
    for (NodeId id = 0; id < n.size(); ++id) {
        const auto* lceq = std::get_if<LceqNode>(&n.node(id).kind);
        if (!lceq) continue;
        std::uint64_t worst = 0;
        std::vector<std::uint64_t> post(lceq->n_paths);
        for (std::uint32_t p = 0; p < lceq->n_paths; ++p) {
            post[p] = lats.at_input.at({id, p}) + lceq->path_delays[p];
            if (post[p] > worst) worst = post[p];
        }
        for (std::uint32_t p = 0; p < lceq->n_paths; ++p)
            out.set(lceq->leq_id.str(), p, static_cast<std::uint32_t>(worst - post[p]));
    }
    return out;
}

}  // namespace latbal
