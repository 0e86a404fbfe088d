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

#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <random>

#include "latbal/fixtures.hpp"
#include "latbal/oracle.hpp"
#include "latbal/simulator.hpp"
#include "testutil.hpp"

using namespace latbal;

TEST_CASE("static delays for the reference two-branch pipeline") {
    Netlist n = build_two_branch();
    DelayAssignment d = static_delays(n);
    // Slow branch: latency 6; fast branch: latency 2; pad the fast one.
    REQUIRE(d.get("EQ", 0) == 4);
    REQUIRE(d.get("EQ", 1) == 0);

    DelayAssignment m = static_delays(build_two_branch_mirrored());
    REQUIRE(m.get("EQ", 0) == 0);
    REQUIRE(m.get("EQ", 1) == 4);
}

TEST_CASE("static latencies accumulate along chains") {
    Netlist n;
    NodeId src = n.add_source("in");
    NodeId a = n.add_op("a", 3, 1, OpFunction{"sum", {}});
    NodeId dl = n.add_delay_line("dl", 2);
    NodeId b = n.add_op("b", 5, 1, OpFunction{"sum", {}});
    NodeId sink = n.add_sink("out");
    n.connect(src, a);
    n.connect(a, dl);
    n.connect(dl, b);
    n.connect(b, sink);

    StaticLatencies lat = static_latencies(n);
    REQUIRE(lat.at_input.at({a, 0}) == 0);
    REQUIRE(lat.at_input.at({dl, 0}) == 3);
    REQUIRE(lat.at_input.at({b, 0}) == 5);
    REQUIRE(lat.at_input.at({sink, 0}) == 10);
    REQUIRE(lat.at_output[b] == 10);
}

TEST_CASE("a balanced diamond needs no extra delay") {
    Netlist n;
    NodeId src = n.add_source("in");
    NodeId a = n.add_op("a", 4, 1, OpFunction{"sum", {}});
    NodeId b = n.add_op("b", 4, 1, OpFunction{"sum", {}});
    NodeId eq = n.add_lceq("eq", InstanceId("EQ"), 2);
    NodeId join = n.add_op("join", 0, 2, OpFunction{"sum", {}});
    NodeId sink = n.add_sink("out");
    n.connect(src, a);
    n.connect(src, b);
    n.connect(a, 0, eq, 0);
    n.connect(b, 0, eq, 1);
    n.connect(eq, 0, join, 0);
    n.connect(eq, 1, join, 1);
    n.connect(join, sink);
    REQUIRE(static_delays(n).all_zero());
}

TEST_CASE("existing path delays count toward the static latency") {
    // Preconfigured delays shrink the extra padding the oracle asks for.
    DelayAssignment pre;
    pre.set("EQ", 0, 3);
    Netlist n = apply_delays(build_two_branch(), pre);
    DelayAssignment d = static_delays(n);
    REQUIRE(d.get("EQ", 0) == 1);
    REQUIRE(d.get("EQ", 1) == 0);
}

TEST_CASE("LCEQ outputs propagate the worst input latency") {
    // Nested blocks: the inner LCEQ equalizes to its slowest path, and the
    // outer one sees that equalized latency on one input.
    Netlist n = build_deep_chain(4);
    StaticLatencies lat = static_latencies(n);
    DelayAssignment d = static_delays(n);
    Netlist balanced = apply_delays(n, d);
    // After balancing, re-running the oracle finds nothing to add.
    REQUIRE(static_delays(balanced).all_zero());
    // And every sink sees at least the latency it saw before padding.
    StaticLatencies bal = static_latencies(balanced);
    for (NodeId id = 0; id < balanced.size(); ++id) {
        if (!std::holds_alternative<SinkNode>(balanced.node(id).kind)) continue;
        REQUIRE(bal.at_input.at({id, 0}) >= lat.at_input.at({id, 0}));
    }
}

TEST_CASE("simulated markers equal cycle minus static latency") {
    // The dynamic semantics and the static oracle describe the same thing:
    // once warm, a sink at static latency L sees marker t - L.
    std::mt19937_64 rng(2026);
    for (int iter = 0; iter < 25; ++iter) {
        testutil::RandomDagOptions opt;
        opt.max_nodes = 24;
        Netlist n = testutil::random_netlist(rng, opt);
        Netlist balanced = apply_delays(n, static_delays(n) + current_delays(n));
        StaticLatencies lat = static_latencies(balanced);
        std::uint64_t warm = testutil::total_latency(balanced) + 2;
        SimOptions so;
        so.mode = SimMode::Analysis;
        so.cycles = warm + 10;
        SimOutcome out = simulate(balanced, so, seeded_stimulus(7));
        for (NodeId id = 0; id < balanced.size(); ++id) {
            if (!std::holds_alternative<SinkNode>(balanced.node(id).kind)) continue;
            std::uint64_t L = lat.at_input.at({id, 0});
            const SinkTrace& tr = out.sink(balanced.node(id).name);
            for (std::uint64_t t = warm; t < so.cycles; ++t) {
                REQUIRE(tr.tokens[t].marker == TimeMarker::at((t - L) & 0xffff));
            }
        }
    }
}

TEST_CASE("detector fixture matches the published first column") {
    Ex1Params p;
    p.n_channels = 64;
    p.n_side_chans = 3;
    p.ins_in_cmp = 3;
    p.ins_in_add = 3;
    DelayAssignment d = static_delays(build_ex1(p));
    REQUIRE(d.get("EQ1", 0) == 4);
    REQUIRE(d.get("EQ1", 1) == 0);
    REQUIRE(d.get("EQ2", 0) == 4);
    REQUIRE(d.get("EQ2", 1) == 1);
    REQUIRE(d.get("EQ2", 2) == 0);
}
