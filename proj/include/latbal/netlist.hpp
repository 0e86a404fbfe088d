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
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "latbal/errors.hpp"

namespace latbal {

// ---------------------------------------------------------------------------
// Instance identifiers
//
// Every LCEQ block is addressed by a hierarchical instance id: the path of
// block names from the design top down to the block, joined with ':',
// e.g. "TOP:CMP3".  Child ids are built by appending the child block name
// plus an optional decimal index (for blocks instantiated in generate
// loops).  Segments must be non-empty and free of ':' and whitespace so
// the rendered id survives the space-delimited marker report unambiguously.
// ---------------------------------------------------------------------------

class InstanceId {
public:
    InstanceId() = default;

    // Root id with a single segment.
    explicit InstanceId(std::string_view root) { segments_.push_back(checked(root)); }

    // Parse a rendered id ("A:B:C") back into segments.
    static InstanceId parse(std::string_view rendered) {
        InstanceId id;
        std::size_t start = 0;
        while (true) {
            std::size_t colon = rendered.find(':', start);
            std::string_view seg = rendered.substr(
                start, colon == std::string_view::npos ? std::string_view::npos : colon - start);
            id.segments_.push_back(checked(seg));
            if (colon == std::string_view::npos) break;
            start = colon + 1;
        }
        return id;
    }

    // Child id: this id extended by block_name (plus a decimal index for
    // blocks stamped out in a loop: child("CMP", 3) appends "CMP3").
    InstanceId child(std::string_view block_name) const {
        InstanceId id = *this;
        id.segments_.push_back(checked(block_name));
        return id;
    }

    InstanceId child(std::string_view block_name, std::int64_t index) const {
        return child(std::string(block_name) + std::to_string(index));
    }

    const std::vector<std::string>& segments() const { return segments_; }
    bool empty() const { return segments_.empty(); }

    std::string str() const {
        std::string out;
        for (std::size_t i = 0; i < segments_.size(); ++i) {
            if (i) out += ':';
            out += segments_[i];
        }
        return out;
    }

    bool operator==(const InstanceId&) const = default;
    auto operator<=>(const InstanceId&) const = default;

private:
    static std::string checked(std::string_view seg) {
        if (seg.empty())
            throw InstanceIdError("instance-id segment must not be empty");
        for (char c : seg) {
            if (c == ':' || static_cast<unsigned char>(c) <= ' ' ||
                static_cast<unsigned char>(c) == 0x7f)
                throw InstanceIdError("instance-id segment \"" + std::string(seg) +
                                      "\" contains ':' or whitespace");
        }
        return std::string(seg);
    }

    std::vector<std::string> segments_;
};

// ---------------------------------------------------------------------------
// Nodes and edges
// ---------------------------------------------------------------------------

using NodeId = std::uint32_t;

// One output or input port of a node.
struct PortRef {
    NodeId node = 0;
    std::uint32_t port = 0;

    bool operator==(const PortRef&) const = default;
    auto operator<=>(const PortRef&) const = default;
};

// Combinational behavior of an op node, by registry name plus integer
// parameters, so netlists stay serializable.  See ops.hpp for the registry.
struct OpFunction {
    std::string name = "sum";
    std::vector<std::int64_t> params;

    bool operator==(const OpFunction&) const = default;
};

struct SourceNode {
    bool operator==(const SourceNode&) const = default;
};

// Pipelined combinational block: `arity` inputs, `outputs` outputs, all
// outputs registered `latency` times (latency 0 = purely combinational).
struct OpNode {
    std::uint32_t latency = 0;
    std::uint32_t arity = 1;
    std::uint32_t outputs = 1;
    OpFunction fn;

    bool operator==(const OpNode&) const = default;
};

// Plain shift register of fixed depth (depth 0 = wire).
struct DelayLineNode {
    std::uint32_t depth = 0;

    bool operator==(const DelayLineNode&) const = default;
};

// Latency checking and equalizing block: n_paths parallel data paths, each
// with a configurable delay line (path_delays), plus the simulation-side
// marker recording/compare machinery.
struct LceqNode {
    std::uint32_t n_paths = 2;
    InstanceId leq_id;
    std::vector<std::uint32_t> path_delays;  // size n_paths

    bool operator==(const LceqNode&) const = default;
};

struct SinkNode {
    bool operator==(const SinkNode&) const = default;
};

using NodeKind = std::variant<SourceNode, OpNode, DelayLineNode, LceqNode, SinkNode>;

struct Node {
    std::string name;  // unique within the netlist; the serialized node id
    NodeKind kind;
};

// Directed connection from an output port to an input port.
struct Edge {
    PortRef from;
    PortRef to;

    bool operator==(const Edge&) const = default;
};

inline std::uint32_t input_count(const Node& n) {
    return std::visit(
        [](const auto& k) -> std::uint32_t {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, SourceNode>) return 0;
            else if constexpr (std::is_same_v<T, OpNode>) return k.arity;
            else if constexpr (std::is_same_v<T, LceqNode>) return k.n_paths;
            else return 1;  // delay line, sink
        },
        n.kind);
}

inline std::uint32_t output_count(const Node& n) {
    return std::visit(
        [](const auto& k) -> std::uint32_t {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, SinkNode>) return 0;
            else if constexpr (std::is_same_v<T, OpNode>) return k.outputs;
            else if constexpr (std::is_same_v<T, LceqNode>) return k.n_paths;
            else return 1;  // source, delay line
        },
        n.kind);
}

// ---------------------------------------------------------------------------
// Netlist
//
// A DAG of the node kinds above.  Build it with the add_* helpers and
// connect(); after construction it is treated as an immutable value
// everywhere (reconfiguration goes through apply_delays, which returns a
// new netlist).
// ---------------------------------------------------------------------------

class DelayAssignment;
class Netlist;
Netlist apply_delays(const Netlist& n, const DelayAssignment& d);

class Netlist {
public:
    NodeId add_source(std::string name) { return add(std::move(name), SourceNode{}); }

    NodeId add_op(std::string name, std::uint32_t latency, std::uint32_t arity, OpFunction fn,
                  std::uint32_t outputs = 1) {
        return add(std::move(name), OpNode{latency, arity, outputs, std::move(fn)});
    }

    NodeId add_delay_line(std::string name, std::uint32_t depth) {
        return add(std::move(name), DelayLineNode{depth});
    }

    NodeId add_lceq(std::string name, InstanceId leq_id, std::uint32_t n_paths) {
        return add(std::move(name),
                   LceqNode{n_paths, std::move(leq_id), std::vector<std::uint32_t>(n_paths, 0)});
    }

    NodeId add_sink(std::string name) { return add(std::move(name), SinkNode{}); }

    // Set an LCEQ node's configured path delays (construction/reconfig
    // path; apply_delays is the value-semantics front end).
    void set_lceq_delays(NodeId id, std::vector<std::uint32_t> delays) {
        auto* lceq = std::get_if<LceqNode>(&nodes_.at(id).kind);
        if (!lceq)
            throw UnknownTargetError("node \"" + nodes_.at(id).name + "\" is not an LCEQ block");
        if (delays.size() != lceq->n_paths)
            throw UnknownTargetError("LCEQ \"" + nodes_.at(id).name + "\" has " +
                                     std::to_string(lceq->n_paths) + " paths, got " +
                                     std::to_string(delays.size()) + " delays");
        lceq->path_delays = std::move(delays);
    }

    void connect(NodeId from, std::uint32_t from_port, NodeId to, std::uint32_t to_port) {
        edges_.push_back(Edge{{from, from_port}, {to, to_port}});
    }

    void connect(NodeId from, NodeId to, std::uint32_t to_port = 0) {
        connect(from, 0, to, to_port);
    }

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Node& node(NodeId id) const { return nodes_.at(id); }
    std::size_t size() const { return nodes_.size(); }

    std::optional<NodeId> find(std::string_view name) const {
        for (NodeId i = 0; i < nodes_.size(); ++i)
            if (nodes_[i].name == name) return i;
        return std::nullopt;
    }

    // Driver of each input port, indexed [node][port]; unset where no edge
    // lands.  Multiple drivers keep the last edge; validate() reports them.
    std::vector<std::vector<std::optional<PortRef>>> driver_table() const {
        std::vector<std::vector<std::optional<PortRef>>> t(nodes_.size());
        for (NodeId i = 0; i < nodes_.size(); ++i)
            t[i].resize(input_count(nodes_[i]));
        for (const Edge& e : edges_) {
            if (e.to.node < nodes_.size() && e.to.port < t[e.to.node].size())
                t[e.to.node][e.to.port] = e.from;
        }
        return t;
    }

    // Kahn topological order over nodes.  Returns nullopt on a cycle.
    std::optional<std::vector<NodeId>> topological_order() const {
        std::vector<std::uint32_t> indeg(nodes_.size(), 0);
        std::vector<std::vector<NodeId>> succ(nodes_.size());
        for (const Edge& e : edges_) {
            if (e.from.node >= nodes_.size() || e.to.node >= nodes_.size()) continue;
            succ[e.from.node].push_back(e.to.node);
            ++indeg[e.to.node];
        }
        // Min-heap keeps the order deterministic: among simultaneously
        // ready nodes the lowest id (construction order) goes first.
        std::priority_queue<NodeId, std::vector<NodeId>, std::greater<NodeId>> ready;
        for (NodeId i = 0; i < nodes_.size(); ++i)
            if (indeg[i] == 0) ready.push(i);
        std::vector<NodeId> order;
        order.reserve(nodes_.size());
        while (!ready.empty()) {
            NodeId n = ready.top();
            ready.pop();
            order.push_back(n);
            for (NodeId s : succ[n])
                if (--indeg[s] == 0) ready.push(s);
        }
        if (order.size() != nodes_.size()) return std::nullopt;
        return order;
    }

private:
    friend Netlist apply_delays(const Netlist& n, const DelayAssignment& d);

    NodeId add(std::string name, NodeKind kind) {
        nodes_.push_back(Node{std::move(name), std::move(kind)});
        return static_cast<NodeId>(nodes_.size() - 1);
    }

    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class ViolationKind {
    EmptyName,
    DuplicateNodeName,
    BadPortIndex,
    MissingDriver,
    MultipleDrivers,
    CycleDetected,
    BadLceq,
    DuplicateLeqId,
    BadOpShape,
};

struct Violation {
    ViolationKind kind;
    std::string detail;
};

inline const char* to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::EmptyName: return "EmptyName";
        case ViolationKind::DuplicateNodeName: return "DuplicateNodeName";
        case ViolationKind::BadPortIndex: return "BadPortIndex";
        case ViolationKind::MissingDriver: return "MissingDriver";
        case ViolationKind::MultipleDrivers: return "MultipleDrivers";
        case ViolationKind::CycleDetected: return "CycleDetected";
        case ViolationKind::BadLceq: return "BadLceq";
        case ViolationKind::DuplicateLeqId: return "DuplicateLeqId";
        case ViolationKind::BadOpShape: return "BadOpShape";
    }
    throw UnreachableError("unknown ViolationKind");
}

// Structural checks every consumer of a netlist relies on.  Empty result
// means: unique names, every input has exactly one driver, all port
// indices in range, acyclic, every LCEQ has >= 2 paths and a unique
// non-empty leq_id, op shapes are sane.
inline std::vector<Violation> validate(const Netlist& n) {
    std::vector<Violation> out;
    auto flag = [&](ViolationKind k, std::string detail) {
        out.push_back(Violation{k, std::move(detail)});
    };

    std::map<std::string_view, NodeId> names;
    for (NodeId i = 0; i < n.nodes().size(); ++i) {
        const Node& node = n.nodes()[i];
        if (node.name.empty()) flag(ViolationKind::EmptyName, "node #" + std::to_string(i));
        auto [it, fresh] = names.emplace(node.name, i);
        if (!fresh)
            flag(ViolationKind::DuplicateNodeName, "\"" + node.name + "\"");
    }

    for (const Edge& e : n.edges()) {
        if (e.from.node >= n.size() || e.to.node >= n.size()) {
            flag(ViolationKind::BadPortIndex, "edge references nonexistent node");
            continue;
        }
        if (e.from.port >= output_count(n.node(e.from.node)))
            flag(ViolationKind::BadPortIndex,
                 n.node(e.from.node).name + " has no output " + std::to_string(e.from.port));
        if (e.to.port >= input_count(n.node(e.to.node)))
            flag(ViolationKind::BadPortIndex,
                 n.node(e.to.node).name + " has no input " + std::to_string(e.to.port));
    }

    // Driver multiplicity, counted directly from the edge list.
    std::map<std::pair<NodeId, std::uint32_t>, int> drivers;
    for (const Edge& e : n.edges())
        if (e.to.node < n.size() && e.to.port < input_count(n.node(e.to.node)))
            ++drivers[{e.to.node, e.to.port}];
    for (NodeId i = 0; i < n.nodes().size(); ++i) {
        for (std::uint32_t p = 0; p < input_count(n.nodes()[i]); ++p) {
            auto it = drivers.find({i, p});
            if (it == drivers.end())
                flag(ViolationKind::MissingDriver,
                     n.nodes()[i].name + " input " + std::to_string(p));
            else if (it->second > 1)
                flag(ViolationKind::MultipleDrivers,
                     n.nodes()[i].name + " input " + std::to_string(p));
        }
    }

    if (!n.topological_order())
        flag(ViolationKind::CycleDetected, "netlist contains a combinational-graph cycle");

    std::map<std::string, std::string> leq_ids;  // rendered id -> node name
    for (const Node& node : n.nodes()) {
        const auto* lceq = std::get_if<LceqNode>(&node.kind);
        if (!lceq) continue;
        if (lceq->n_paths < 2)
            flag(ViolationKind::BadLceq, node.name + " has fewer than 2 paths");
        if (lceq->path_delays.size() != lceq->n_paths)
            flag(ViolationKind::BadLceq, node.name + " path_delays size mismatch");
        if (lceq->leq_id.empty()) {
            flag(ViolationKind::BadLceq, node.name + " has an empty leq_id");
            continue;
        }
        auto [it, fresh] = leq_ids.emplace(lceq->leq_id.str(), node.name);
        if (!fresh)
            flag(ViolationKind::DuplicateLeqId,
                 "\"" + lceq->leq_id.str() + "\" used by " + it->second + " and " + node.name);
    }

    for (const Node& node : n.nodes()) {
        const auto* op = std::get_if<OpNode>(&node.kind);
        if (!op) continue;
        if (op->arity < 1 || op->outputs < 1)
            flag(ViolationKind::BadOpShape, node.name + " needs >= 1 input and >= 1 output");
    }

    return out;
}

inline void require_valid(const Netlist& n, const char* who) {
    std::vector<Violation> vs = validate(n);
    if (vs.empty()) return;
    std::string msg = std::string(who) + ": netlist is invalid:";
    for (const Violation& v : vs) {
        msg += "\n  ";
        msg += to_string(v.kind);
        msg += ": ";
        msg += v.detail;
    }
    throw InvalidNetlistError(msg);
}

// ---------------------------------------------------------------------------
// Delay assignments
//
// Map from rendered leq_id to per-path delays.  Conceptually total over
// every (block, path) of the target netlist: missing entries mean 0.
// ---------------------------------------------------------------------------

class DelayAssignment {
public:
    using Map = std::map<std::string, std::vector<std::uint32_t>>;

    DelayAssignment() = default;
    explicit DelayAssignment(Map entries) : entries_(std::move(entries)) {}

    void set(const std::string& leq_id, std::uint32_t path, std::uint32_t delay) {
        auto& v = entries_[leq_id];
        if (v.size() <= path) v.resize(path + 1, 0);
        v[path] = delay;
    }

    std::uint32_t get(const std::string& leq_id, std::uint32_t path) const {
        auto it = entries_.find(leq_id);
        if (it == entries_.end() || path >= it->second.size()) return 0;
        return it->second[path];
    }

    const Map& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    bool all_zero() const {
        for (const auto& [id, delays] : entries_)
            for (std::uint32_t d : delays)
                if (d != 0) return false;
        return true;
    }

    // Per-path sum of two assignments (used to stack analyzer output on an
    // already-configured netlist).
    friend DelayAssignment operator+(const DelayAssignment& a, const DelayAssignment& b) {
        DelayAssignment out = a;
        for (const auto& [id, delays] : b.entries_) {
            auto& v = out.entries_[id];
            if (v.size() < delays.size()) v.resize(delays.size(), 0);
            for (std::size_t i = 0; i < delays.size(); ++i) v[i] += delays[i];
        }
        return out;
    }

    bool operator==(const DelayAssignment&) const = default;

private:
    Map entries_;
};

// Current configuration of every LCEQ in the netlist.
inline DelayAssignment current_delays(const Netlist& n) {
    DelayAssignment out;
    for (const Node& node : n.nodes()) {
        if (const auto* lceq = std::get_if<LceqNode>(&node.kind)) {
            for (std::uint32_t p = 0; p < lceq->n_paths; ++p)
                out.set(lceq->leq_id.str(), p, lceq->path_delays[p]);
        }
    }
    return out;
}

// New netlist with every LCEQ path delay set to the assignment's value
// (missing entries mean 0, so the empty assignment zeroes everything).
// Assignment keys that match no LCEQ, or paths beyond a block's n_paths,
// raise UnknownTargetError.
inline Netlist apply_delays(const Netlist& n, const DelayAssignment& d) {
    std::map<std::string, bool> used;
    for (const auto& [id, delays] : d.entries()) used.emplace(id, false);

    Netlist out = n;
    for (Node& node : out.nodes_) {
        auto* lceq = std::get_if<LceqNode>(&node.kind);
        if (!lceq) continue;
        std::string id = lceq->leq_id.str();
        auto it = d.entries().find(id);
        if (it != d.entries().end()) {
            used[id] = true;
            if (it->second.size() > lceq->n_paths)
                throw UnknownTargetError("delay assignment for \"" + id + "\" names path " +
                                         std::to_string(it->second.size() - 1) + " but block has " +
                                         std::to_string(lceq->n_paths) + " paths");
        }
        lceq->path_delays.assign(lceq->n_paths, 0);
        for (std::uint32_t p = 0; p < lceq->n_paths; ++p)
            lceq->path_delays[p] = d.get(id, p);
    }
    for (const auto& [id, was_used] : used)
        if (!was_used)
            throw UnknownTargetError("delay assignment names unknown LCEQ block \"" + id + "\"");
    return out;
}

}  // namespace latbal
