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

#include <algorithm>
#include <random>

#include "latbal/fixtures.hpp"
#include "latbal/netlist.hpp"
#include "testutil.hpp"

using namespace latbal;

namespace {
bool has_violation(const std::vector<Violation>& vs, ViolationKind kind) {
    return std::any_of(vs.begin(), vs.end(),
                       [&](const Violation& v) { return v.kind == kind; });
}
}  // namespace

TEST_CASE("instance ids join segments with colons") {
    REQUIRE(InstanceId("TOP").child("EQ1").str() == "TOP:EQ1");
    REQUIRE(InstanceId("TOP").child("CMP", 3).str() == "TOP:CMP3");
    REQUIRE(InstanceId::parse("A:B").child("C").str() == "A:B:C");
    REQUIRE(InstanceId("EQ").str() == "EQ");
}

TEST_CASE("instance ids reject separators and whitespace in segments") {
    REQUIRE_THROWS_AS(InstanceId("A:B"), InstanceIdError);
    REQUIRE_THROWS_AS(InstanceId("A B"), InstanceIdError);
    REQUIRE_THROWS_AS(InstanceId(""), InstanceIdError);
    REQUIRE_THROWS_AS(InstanceId("TOP").child(""), InstanceIdError);
    REQUIRE_THROWS_AS(InstanceId::parse("A::B"), InstanceIdError);
    REQUIRE_THROWS_AS(InstanceId::parse(":A"), InstanceIdError);
    REQUIRE_THROWS_AS(InstanceId::parse("A:"), InstanceIdError);
}

TEST_CASE("instance id parse/render round-trips") {
    std::mt19937_64 rng(10);
    for (int i = 0; i < 200; ++i) {
        InstanceId id("R" + std::to_string(rng() % 100));
        std::size_t depth = rng() % 3;
        for (std::size_t d = 0; d < depth; ++d) {
            if (rng() % 2)
                id = id.child("B" + std::to_string(rng() % 10));
            else
                id = id.child("C", static_cast<std::int64_t>(rng() % 10));
        }
        REQUIRE(InstanceId::parse(id.str()) == id);
    }
}

TEST_CASE("a well-formed chain passes validation") {
    Netlist n;
    NodeId src = n.add_source("in");
    NodeId op = n.add_op("op", 3, 1, OpFunction{"sum", {}});
    NodeId sink = n.add_sink("out");
    n.connect(src, op);
    n.connect(op, sink);
    REQUIRE(validate(n).empty());
}

TEST_CASE("fixtures validate cleanly") {
    REQUIRE(validate(build_two_branch()).empty());
    REQUIRE(validate(build_two_branch_mirrored()).empty());
    REQUIRE(validate(build_deep_chain(25)).empty());
    Netlist lr = build_longrun20();
    REQUIRE(validate(lr).empty());
    REQUIRE(lr.size() == 20);
}

TEST_CASE("validation flags duplicate leq_ids") {
    Netlist n;
    NodeId s0 = n.add_source("a");
    NodeId s1 = n.add_source("b");
    NodeId eq1 = n.add_lceq("eq1", InstanceId("TOP").child("EQ1"), 2);
    NodeId eq2 = n.add_lceq("eq2", InstanceId("TOP").child("EQ1"), 2);
    n.connect(s0, 0, eq1, 0);
    n.connect(s1, 0, eq1, 1);
    n.connect(s0, 0, eq2, 0);
    n.connect(s1, 0, eq2, 1);
    auto vs = validate(n);
    REQUIRE(has_violation(vs, ViolationKind::DuplicateLeqId));
}

TEST_CASE("validation flags cycles") {
    Netlist n;
    NodeId a = n.add_op("a", 1, 1, OpFunction{"sum", {}});
    NodeId b = n.add_op("b", 1, 1, OpFunction{"sum", {}});
    n.connect(a, b);
    n.connect(b, a);  // back edge
    auto vs = validate(n);
    REQUIRE(has_violation(vs, ViolationKind::CycleDetected));
    REQUIRE(!n.topological_order());
}

TEST_CASE("validation flags missing and duplicate drivers and bad ports") {
    Netlist n;
    NodeId src = n.add_source("in");
    NodeId op = n.add_op("op", 1, 3, OpFunction{"sum", {}});
    NodeId sink = n.add_sink("out");
    n.connect(src, 0, op, 0);
    n.connect(src, 7, op, 1);   // no such output port
    // op input 2 left floating entirely
    n.connect(op, 0, sink, 0);
    n.connect(op, 0, sink, 0);  // doubled driver
    auto vs = validate(n);
    REQUIRE(has_violation(vs, ViolationKind::MissingDriver));
    REQUIRE(has_violation(vs, ViolationKind::MultipleDrivers));
    REQUIRE(has_violation(vs, ViolationKind::BadPortIndex));
}

TEST_CASE("validation flags degenerate LCEQs and duplicate names") {
    Netlist n;
    NodeId src = n.add_source("x");
    NodeId eq = n.add_lceq("x", InstanceId("EQ"), 2);  // name collides with source
    n.connect(src, 0, eq, 0);
    n.connect(src, 0, eq, 1);
    auto vs = validate(n);
    REQUIRE(has_violation(vs, ViolationKind::DuplicateNodeName));

    Netlist m;
    NodeId s = m.add_source("in");
    NodeId single = m.add_lceq("eq1", InstanceId("EQ1"), 1);  // an LCEQ needs >= 2 paths
    m.connect(s, 0, single, 0);
    NodeId unnamed = m.add_lceq("eq2", InstanceId(), 2);  // empty leq_id
    m.connect(s, 0, unnamed, 0);
    m.connect(s, 0, unnamed, 1);
    auto ws = validate(m);
    REQUIRE(has_violation(ws, ViolationKind::BadLceq));
}

TEST_CASE("apply_delays with the empty assignment zeroes every LCEQ") {
    Netlist n = build_two_branch();
    n.set_lceq_delays(*n.find("eq"), {3, 1});
    Netlist zeroed = apply_delays(n, DelayAssignment());
    const auto& lceq = std::get<LceqNode>(zeroed.node(*zeroed.find("eq")).kind);
    REQUIRE(lceq.path_delays == std::vector<std::uint32_t>{0, 0});
}

TEST_CASE("apply_delays sets the named path and defaults the rest to zero") {
    Netlist n = build_two_branch();
    DelayAssignment d;
    d.set("EQ", 1, 4);
    Netlist out = apply_delays(n, d);
    const auto& lceq = std::get<LceqNode>(out.node(*out.find("eq")).kind);
    REQUIRE(lceq.path_delays == std::vector<std::uint32_t>{0, 4});
    // The input netlist is untouched (value semantics).
    const auto& orig = std::get<LceqNode>(n.node(*n.find("eq")).kind);
    REQUIRE(orig.path_delays == std::vector<std::uint32_t>{0, 0});
}

TEST_CASE("apply_delays rejects unknown blocks and out-of-range paths") {
    Netlist n = build_two_branch();
    DelayAssignment unknown;
    unknown.set("NOPE", 0, 1);
    REQUIRE_THROWS_AS(apply_delays(n, unknown), UnknownTargetError);
    DelayAssignment extra_path;
    extra_path.set("EQ", 2, 1);  // block has paths 0 and 1 only
    REQUIRE_THROWS_AS(apply_delays(n, extra_path), UnknownTargetError);
}

TEST_CASE("apply_delays is idempotent and last-write-wins") {
    Netlist n = build_longrun20();
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        DelayAssignment d1, d2;
        d1.set("TOP:EQ1", rng() % 2, rng() % 9);
        d2.set("TOP:EQ2", rng() % 3, rng() % 9);
        Netlist once = apply_delays(n, d1);
        Netlist twice = apply_delays(once, d1);
        REQUIRE(current_delays(once) == current_delays(twice));
        // Full-replacement semantics: a second assignment overrides the
        // first completely (unlisted paths return to zero).
        Netlist chained = apply_delays(once, d2);
        REQUIRE(current_delays(chained) == current_delays(apply_delays(n, d2)));
    }
}

TEST_CASE("validation is invariant under apply_delays") {
    Netlist n = build_longrun20();
    DelayAssignment d;
    d.set("TOP:EQ1", 0, 6);
    d.set("TOP:EQ3", 1, 2);
    REQUIRE(validate(apply_delays(n, d)).empty());
}

TEST_CASE("delay assignments sum per path") {
    DelayAssignment a, b;
    a.set("EQ1", 0, 3);
    a.set("EQ2", 1, 2);
    b.set("EQ1", 0, 1);
    b.set("EQ1", 1, 7);
    DelayAssignment c = a + b;
    REQUIRE(c.get("EQ1", 0) == 4);
    REQUIRE(c.get("EQ1", 1) == 7);
    REQUIRE(c.get("EQ2", 1) == 2);
    REQUIRE(c.get("EQ2", 0) == 0);  // missing entries read as zero
    REQUIRE(!c.all_zero());
    REQUIRE(DelayAssignment().all_zero());
}
