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

// Cross-module properties over randomly generated DAGs: measurement,
// static analysis, and an independent unbounded-integer reference must
// agree, and the measured delays must actually balance the design.

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "latbal/oracle.hpp"
#include "latbal/workflow.hpp"
#include "testutil.hpp"

using namespace latbal;

namespace {

RunOptions options_for(const Netlist& n, std::uint64_t seed) {
    RunOptions opt;
    opt.cycles = testutil::total_latency(n) + 30;
    opt.seed = seed;
    return opt;
}

}  // namespace

TEST_CASE("measured, static, and reference delays agree") {
    std::mt19937_64 rng(101);
    for (int iter = 0; iter < 60; ++iter) {
        testutil::RandomDagOptions dag;
        dag.max_nodes = 40;
        dag.random_initial_delays = (iter % 2 == 1);
        Netlist n = testutil::random_netlist(rng, dag);
        CAPTURE(iter);

        RunOptions opt = options_for(n, iter);
        SynchroResult syn = run_synchro(n, opt);
        REQUIRE(syn.additional == static_delays(n));
        REQUIRE(syn.additional == testutil::reference_delays(n, opt.cycles));
        REQUIRE(syn.total == current_delays(n) + syn.additional);
    }
}

TEST_CASE("synchro then final always passes") {
    std::mt19937_64 rng(202);
    for (int iter = 0; iter < 40; ++iter) {
        testutil::RandomDagOptions dag;
        dag.max_nodes = 40;
        dag.random_initial_delays = (iter % 3 == 0);
        Netlist n = testutil::random_netlist(rng, dag);
        CAPTURE(iter);

        RunOptions opt = options_for(n, 1000 + iter);
        SynchroResult syn = run_synchro(n, opt);
        FinalResult fin = run_final(n, syn.additional, opt);
        REQUIRE(fin.passed);
        REQUIRE(fin.outcome.inequality_events.empty());
        REQUIRE(fin.outcome.cycles_run == opt.cycles);
    }
}

TEST_CASE("balancing is a fixed point") {
    std::mt19937_64 rng(303);
    for (int iter = 0; iter < 25; ++iter) {
        testutil::RandomDagOptions dag;
        dag.max_nodes = 36;
        Netlist n = testutil::random_netlist(rng, dag);
        CAPTURE(iter);

        RunOptions opt = options_for(n, 2000 + iter);
        SynchroResult first = run_synchro(n, opt);
        Netlist balanced = apply_delays(n, first.total);
        REQUIRE(current_delays(balanced) == first.total);

        SynchroResult again = run_synchro(balanced, opt);
        REQUIRE(again.additional.all_zero());
        REQUIRE(again.total == first.total);
        REQUIRE(static_delays(balanced).all_zero());
    }
}

TEST_CASE("an unbalanced design fails its final test") {
    std::mt19937_64 rng(404);
    int unbalanced_seen = 0;
    for (int iter = 0; iter < 40 || unbalanced_seen < 10; ++iter) {
        REQUIRE(iter < 200);  // the generator produces plenty of imbalance
        testutil::RandomDagOptions dag;
        dag.max_nodes = 36;
        Netlist n = testutil::random_netlist(rng, dag);
        if (static_delays(n).all_zero()) continue;  // accidentally balanced
        ++unbalanced_seen;
        CAPTURE(iter);

        FinalResult fin = run_final(n, DelayAssignment{}, options_for(n, 3000 + iter));
        REQUIRE(!fin.passed);
        REQUIRE(fin.outcome.aborted());
        REQUIRE(fin.outcome.inequality_events.size() == 1);
    }
}

TEST_CASE("the oracle cross-check agrees on random designs") {
    std::mt19937_64 rng(505);
    for (int iter = 0; iter < 15; ++iter) {
        testutil::RandomDagOptions dag;
        dag.max_nodes = 30;
        dag.random_initial_delays = true;
        Netlist n = testutil::random_netlist(rng, dag);
        RunOptions opt = options_for(n, 4000 + iter);
        opt.oracle_check = true;
        REQUIRE(run_synchro(n, opt).oracle_agrees);
    }
}
