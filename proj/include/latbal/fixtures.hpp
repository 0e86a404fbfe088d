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

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "latbal/errors.hpp"
#include "latbal/netlist.hpp"
#include "latbal/ops.hpp"
#include "latbal/simulator.hpp"

namespace latbal {

// ---------------------------------------------------------------------------
// The minimal two-branch pipeline.  One source fans out to a fast op
// (latency 2) and a slow op (latency 6); an LCEQ re-aligns them before a
// combining op.  Path 0 is the fast branch, so with zero delays the final
// test trips with "out0=0, out1=-1" on the first mixed cycle; balancing it
// takes delay 4 on path 0.
// ---------------------------------------------------------------------------

inline Netlist build_two_branch() {
    Netlist n;
    NodeId src = n.add_source("in");
    NodeId a = n.add_op("op_a", 6, 1, OpFunction{"scale", {3}});
    NodeId b = n.add_op("op_b", 2, 1, OpFunction{"scale", {5}});
    NodeId eq = n.add_lceq("eq", InstanceId("EQ"), 2);
    NodeId c = n.add_op("op_c", 1, 2, OpFunction{"sum", {}});
    NodeId sink = n.add_sink("out");
    n.connect(src, a);
    n.connect(src, b);
    n.connect(b, 0, eq, 0);  // fast branch on path 0
    n.connect(a, 0, eq, 1);
    n.connect(eq, 0, c, 0);
    n.connect(eq, 1, c, 1);
    n.connect(c, sink);
    return n;
}

// Same pipeline with the LCEQ paths swapped (slow branch on path 0); the
// balancing assignment becomes {(EQ,1): 4}.
inline Netlist build_two_branch_mirrored() {
    Netlist n;
    NodeId src = n.add_source("in");
    NodeId a = n.add_op("op_a", 6, 1, OpFunction{"scale", {3}});
    NodeId b = n.add_op("op_b", 2, 1, OpFunction{"scale", {5}});
    NodeId eq = n.add_lceq("eq", InstanceId("EQ"), 2);
    NodeId c = n.add_op("op_c", 1, 2, OpFunction{"sum", {}});
    NodeId sink = n.add_sink("out");
    n.connect(src, a);
    n.connect(src, b);
    n.connect(a, 0, eq, 0);  // slow branch on path 0
    n.connect(b, 0, eq, 1);
    n.connect(eq, 0, c, 0);
    n.connect(eq, 1, c, 1);
    n.connect(c, sink);
    return n;
}

// ---------------------------------------------------------------------------
// Wraparound rigs.
// ---------------------------------------------------------------------------

// Source split into a direct path and an op chain `depth` cycles deep,
// re-aligned by one LCEQ.  Used to exercise small marker windows.
inline Netlist build_deep_chain(std::uint32_t depth) {
    Netlist n;
    NodeId src = n.add_source("in");
    NodeId prev = src;
    std::uint32_t left = depth;
    std::uint32_t i = 0;
    while (left > 0) {
        std::uint32_t step = left < 5 ? left : 5;
        NodeId op = n.add_op("stage" + std::to_string(i++), step, 1, OpFunction{"sum", {}});
        n.connect(prev, op);
        prev = op;
        left -= step;
    }
    NodeId eq = n.add_lceq("eq", InstanceId("DEEP").child("EQ"), 2);
    n.connect(src, 0, eq, 0);
    n.connect(prev, 0, eq, 1);
    NodeId s0 = n.add_sink("out0");
    NodeId s1 = n.add_sink("out1");
    n.connect(eq, 0, s0, 0);
    n.connect(eq, 1, s1, 0);
    return n;
}

// Fixed 20-node netlist with three LCEQ blocks and mixed op/delay-line
// reconvergence; latency spread stays far below 32 so it is safe for long
// wrapping runs at window 64.
inline Netlist build_longrun20() {
    Netlist n;
    NodeId src = n.add_source("in");                                     // 1
    NodeId a = n.add_op("op_a", 3, 1, OpFunction{"scale", {2}});         // 2
    NodeId b = n.add_op("op_b", 7, 1, OpFunction{"scale", {3}});         // 3
    NodeId c = n.add_op("op_c", 2, 1, OpFunction{"sum", {}});            // 4
    NodeId dl1 = n.add_delay_line("dl1", 4);                             // 5
    NodeId eq1 = n.add_lceq("eq1", InstanceId("TOP").child("EQ", 1), 2); // 6
    NodeId d = n.add_op("op_d", 1, 2, OpFunction{"sum", {}});            // 7
    NodeId e = n.add_op("op_e", 6, 1, OpFunction{"scale", {5}});         // 8
    NodeId f = n.add_op("op_f", 0, 2, OpFunction{"sum", {}});            // 9
    NodeId dl2 = n.add_delay_line("dl2", 2);                             // 10
    NodeId eq2 = n.add_lceq("eq2", InstanceId("TOP").child("EQ", 2), 3); // 11
    NodeId g = n.add_op("op_g", 2, 1, OpFunction{"scale", {7}});         // 12
    NodeId h = n.add_op("op_h", 4, 1, OpFunction{"sum", {}});            // 13
    NodeId eq3 = n.add_lceq("eq3", InstanceId("TOP").child("EQ", 3), 2); // 14
    NodeId s1 = n.add_sink("out1");                                      // 15
    NodeId s2 = n.add_sink("out2");                                      // 16
    NodeId s3 = n.add_sink("out3");                                      // 17
    NodeId s4 = n.add_sink("out4");                                      // 18
    NodeId s5 = n.add_sink("out5");                                      // 19
    NodeId s6 = n.add_sink("out6");                                      // 20

    n.connect(src, a);
    n.connect(src, b);
    n.connect(a, c);
    n.connect(b, dl1);
    n.connect(c, 0, eq1, 0);   // latency 5
    n.connect(dl1, 0, eq1, 1); // latency 11
    n.connect(eq1, 0, d, 0);
    n.connect(eq1, 1, d, 1);
    n.connect(eq1, 1, e, 0);
    n.connect(d, 0, f, 0);
    n.connect(e, 0, f, 1);
    n.connect(d, dl2);
    n.connect(f, 0, eq2, 0);   // latency 18
    n.connect(dl2, 0, eq2, 1); // latency 14
    n.connect(a, 0, eq2, 2);   // latency 3
    n.connect(eq2, 2, g, 0);
    n.connect(src, h);
    n.connect(h, 0, eq3, 0);   // latency 4
    n.connect(g, 0, eq3, 1);   // latency 19
    n.connect(eq2, 0, s1, 0);
    n.connect(eq2, 1, s2, 0);
    n.connect(eq1, 0, s3, 0);
    n.connect(eq3, 0, s4, 0);
    n.connect(eq3, 1, s5, 0);
    n.connect(f, s6);
    return n;
}

// ---------------------------------------------------------------------------
// ex1: particle-detector hit measurement.
//
// n_channels charge inputs.  A comparator tree (branching ins_in_cmp, one
// register per level) finds the channel with the highest charge; LCEQ
// "EQ1" re-aligns the raw channel bus with that result.  A window selector
// (1 cycle) extracts the 2*n_side_chans+1 channels around the maximum and
// forwards the position.  Two adder trees (branching ins_in_add, one
// register per level, one output register each) compute the window's
// charge sum S and its index-weighted sum S_W; the weighting multiplier
// costs the S_W branch one extra cycle, mirrored by a latency-0
// pass-through on the S branch.  LCEQ "EQ2" re-aligns position, S and S_W
// for the sinks.  The hit coordinate X = N_max + S_W/S is left to the
// consumer: division never enters the pipeline.
// ---------------------------------------------------------------------------

struct Ex1Params {
    std::uint32_t n_channels = 64;
    std::uint32_t n_side_chans = 3;  // window reaches this far each side
    std::uint32_t ins_in_cmp = 3;    // comparator tree branching
    std::uint32_t ins_in_add = 3;    // adder tree branching

    std::uint32_t window_width() const { return 2 * n_side_chans + 1; }
};

inline void check_params(const Ex1Params& p) {
    if (p.n_channels < 2)
        throw LceqSpecError("ex1 needs at least 2 channels");
    if (p.window_width() > p.n_channels)
        throw LceqSpecError("ex1 window 2*" + std::to_string(p.n_side_chans) +
                            "+1 exceeds n_channels=" + std::to_string(p.n_channels));
    if (p.ins_in_cmp < 2 || p.ins_in_add < 2)
        throw LceqSpecError("ex1 tree branching factors must be >= 2");
}

// Tree depth: ceil-divide steps from `leaves` down to 1.
inline std::uint32_t tree_depth(std::uint32_t leaves, std::uint32_t branching) {
    std::uint32_t d = 0;
    while (leaves > 1) {
        leaves = (leaves + branching - 1) / branching;
        ++d;
    }
    return d;
}

inline Netlist build_ex1(const Ex1Params& p) {
    check_params(p);
    Netlist n;
    std::int64_t m_cmp = p.ins_in_cmp;
    std::int64_t m_add = p.ins_in_add;

    std::vector<NodeId> channels;
    for (std::uint32_t i = 0; i < p.n_channels; ++i)
        channels.push_back(n.add_source("ch" + std::to_string(i)));
    NodeId bus = n.add_op("bus", 0, p.n_channels, OpFunction{"concat", {}});
    for (std::uint32_t i = 0; i < p.n_channels; ++i) n.connect(channels[i], 0, bus, i);

    // Comparator tree: one argmax reduction per level, one register each.
    std::uint32_t d_cmp = tree_depth(p.n_channels, p.ins_in_cmp);
    NodeId cmp = bus;
    for (std::uint32_t lvl = 0; lvl < d_cmp; ++lvl) {
        OpFunction fn = lvl == 0 ? OpFunction{"argmax_leaf", {m_cmp}}
                                 : OpFunction{"argmax_merge", {m_cmp}};
        NodeId op = n.add_op("cmp" + std::to_string(lvl), 1, 1, std::move(fn));
        n.connect(cmp, op);
        cmp = op;
    }
    NodeId nmax = n.add_op("nmax", 0, 1, OpFunction{"pair_index", {}});
    n.connect(cmp, nmax);

    NodeId eq1 = n.add_lceq("eq1", InstanceId("EQ1"), 2);
    n.connect(bus, 0, eq1, 0);
    n.connect(nmax, 0, eq1, 1);

    // Window selector: registers the window and the position together.
    NodeId sel = n.add_op("sel", 1, 2, OpFunction{"window_select", {(std::int64_t)p.n_side_chans}},
                          2);
    n.connect(eq1, 0, sel, 0);
    n.connect(eq1, 1, sel, 1);

    // S branch: pass-through in the multiplier slot, then the adder tree.
    std::uint32_t d_add = tree_depth(p.window_width(), p.ins_in_add);
    NodeId s_head = n.add_op("s_pass", 0, 1, OpFunction{"id", {}});
    n.connect(sel, 0, s_head, 0);
    NodeId s = s_head;
    for (std::uint32_t lvl = 0; lvl < d_add; ++lvl) {
        NodeId op = n.add_op("s_add" + std::to_string(lvl), 1, 1, OpFunction{"chunk_sum", {m_add}});
        n.connect(s, op);
        s = op;
    }
    NodeId s_reg = n.add_op("s_reg", 1, 1, OpFunction{"id", {}});
    n.connect(s, s_reg);

    // S_W branch: weighting multiplier, then the same tree shape.
    NodeId w_mul = n.add_op("w_mul", 1, 2, OpFunction{"window_weight",
                                                      {(std::int64_t)p.n_side_chans}});
    n.connect(sel, 0, w_mul, 0);
    n.connect(sel, 1, w_mul, 1);
    NodeId sw = w_mul;
    for (std::uint32_t lvl = 0; lvl < d_add; ++lvl) {
        NodeId op =
            n.add_op("sw_add" + std::to_string(lvl), 1, 1, OpFunction{"chunk_sum", {m_add}});
        n.connect(sw, op);
        sw = op;
    }
    NodeId sw_reg = n.add_op("sw_reg", 1, 1, OpFunction{"id", {}});
    n.connect(sw, sw_reg);

    NodeId eq2 = n.add_lceq("eq2", InstanceId("EQ2"), 3);
    n.connect(sel, 1, eq2, 0);
    n.connect(s_reg, 0, eq2, 1);
    n.connect(sw_reg, 0, eq2, 2);

    NodeId sink_n = n.add_sink("n_max");
    NodeId sink_s = n.add_sink("s");
    NodeId sink_sw = n.add_sink("s_w");
    n.connect(eq2, 0, sink_n, 0);
    n.connect(eq2, 1, sink_s, 0);
    n.connect(eq2, 2, sink_sw, 0);
    return n;
}

// ---------------------------------------------------------------------------
// Hit generation and the functional reference.
// ---------------------------------------------------------------------------

// One particle hit: total charge `charge` spread over channels around
// `center` with a gaussian profile, truncated n_side_chans away.
struct Ex1Hit {
    double center = 0;
    double charge = 0;
    double sigma = 1.0;
};

// Integer per-channel charges for one hit; this is the shared
// "digitization" both the pipeline stimulus and the reference use.
inline std::vector<std::int64_t> ex1_channel_charges(const Ex1Params& p, const Ex1Hit& h) {
    std::vector<std::int64_t> v(p.n_channels, 0);
    std::int64_t c = std::llround(h.center);
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(p.n_channels); ++i) {
        if (i < c - static_cast<std::int64_t>(p.n_side_chans) ||
            i > c + static_cast<std::int64_t>(p.n_side_chans))
            continue;
        double z = (static_cast<double>(i) - h.center) / h.sigma;
        v[i] = std::llround(h.charge * std::exp(-0.5 * z * z));
    }
    return v;
}

struct Ex1Reference {
    std::int64_t n_max = 0;
    std::int64_t s = 0;
    std::int64_t s_w = 0;
    double x = 0;           // N_max + S_W/S, the printed formula
    double x_centroid = 0;  // S_W/S: the charge centroid itself
};

// Direct (non-pipelined) computation of what the ex1 sinks must show for
// one hit's channel charges.
inline Ex1Reference reference_hit(const Ex1Params& p, const std::vector<std::int64_t>& charges) {
    if (charges.size() != p.n_channels)
        throw LceqSpecError("reference_hit: charge vector size mismatch");
    Ex1Reference r;
    for (std::size_t i = 1; i < charges.size(); ++i)
        if (charges[i] > charges[r.n_max]) r.n_max = static_cast<std::int64_t>(i);
    std::int64_t k = p.n_side_chans;
    for (std::int64_t i = r.n_max - k; i <= r.n_max + k; ++i) {
        std::int64_t v = (i >= 0 && i < static_cast<std::int64_t>(p.n_channels)) ? charges[i] : 0;
        r.s += v;
        r.s_w += i * v;
    }
    if (r.s != 0) {
        r.x_centroid = static_cast<double>(r.s_w) / static_cast<double>(r.s);
        r.x = static_cast<double>(r.n_max) + r.x_centroid;
    }
    return r;
}

// Stimulus injecting scheduled hits: each channel source emits its charge
// at the hit's cycle and 0 elsewhere.  Channel index comes from the
// source's "ch<i>" name.
inline Stimulus ex1_hit_stimulus(std::map<std::uint64_t, std::vector<std::int64_t>> hits) {
    return [hits = std::move(hits)](const Netlist& n, NodeId id, std::uint64_t cycle) {
        auto it = hits.find(cycle);
        if (it == hits.end()) return Payload{0};
        const std::string& name = n.node(id).name;
        std::size_t ch = std::stoul(name.substr(2));  // "ch<i>"
        return Payload{ch < it->second.size() ? it->second[ch] : 0};
    };
}

}  // namespace latbal
