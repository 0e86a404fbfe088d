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
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "latbal/errors.hpp"
#include "latbal/netlist.hpp"

namespace latbal {

// ---------------------------------------------------------------------------
// Netlist file format "latbal-netlist-1": one JSON object with a version
// tag, a node array (array order defines node ids), and an edge array.
// Ports default to 0 when omitted.  See docs/netlist-format.md.
// ---------------------------------------------------------------------------

inline constexpr const char* kNetlistFormatVersion = "latbal-netlist-1";

namespace detail {

inline const nlohmann::json& field(const nlohmann::json& j, const char* key, const char* ctx) {
    auto it = j.find(key);
    if (it == j.end())
        throw ParseError(std::string(ctx) + ": missing field \"" + key + "\"");
    return *it;
}

template <typename T>
T num_field(const nlohmann::json& j, const char* key, const char* ctx) {
    const nlohmann::json& v = field(j, key, ctx);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0 ||
        v.get<std::int64_t>() > static_cast<std::int64_t>(UINT32_MAX))
        throw ParseError(std::string(ctx) + ": field \"" + key +
                         "\" must be a non-negative 32-bit integer");
    return v.get<T>();
}

Netlist load_netlist_tree(const nlohmann::json& j);

}  // namespace detail

inline Netlist load_netlist(std::istream& in) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("netlist JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ParseError("netlist JSON: top level must be an object");
    // Wrong-typed fields surface as nlohmann type errors; map them to
    // ParseError so callers see one failure mode.
    try {
        return detail::load_netlist_tree(j);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("netlist JSON: ") + e.what());
    }
}

inline Netlist detail::load_netlist_tree(const nlohmann::json& j) {
    auto version = j.find("version");
    if (version == j.end() || !version->is_string() ||
        version->get<std::string>() != kNetlistFormatVersion)
        throw ParseError(std::string("netlist JSON: expected version \"") +
                         kNetlistFormatVersion + "\"");
    auto nodes = j.find("nodes");
    auto edges = j.find("edges");
    if (nodes == j.end() || !nodes->is_array() || edges == j.end() || !edges->is_array())
        throw ParseError("netlist JSON: \"nodes\" and \"edges\" arrays are required");

    Netlist n;
    std::map<std::string, NodeId> by_id;
    for (const nlohmann::json& jn : *nodes) {
        if (!jn.is_object())
            throw ParseError("netlist JSON: node entries must be objects");
        std::string id = detail::field(jn, "id", "node").get<std::string>();
        std::string ctx = "node \"" + id + "\"";
        std::string kind = detail::field(jn, "kind", ctx.c_str()).get<std::string>();
        NodeId nid;
        if (kind == "source") {
            nid = n.add_source(id);
        } else if (kind == "sink") {
            nid = n.add_sink(id);
        } else if (kind == "delay") {
            nid = n.add_delay_line(id, detail::num_field<std::uint32_t>(jn, "depth", ctx.c_str()));
        } else if (kind == "op") {
            OpFunction fn;
            if (auto it = jn.find("fn"); it != jn.end()) fn.name = it->get<std::string>();
            if (auto it = jn.find("params"); it != jn.end())
                fn.params = it->get<std::vector<std::int64_t>>();
            std::uint32_t outputs = 1;
            if (jn.contains("outputs"))
                outputs = detail::num_field<std::uint32_t>(jn, "outputs", ctx.c_str());
            nid = n.add_op(id, detail::num_field<std::uint32_t>(jn, "latency", ctx.c_str()),
                           detail::num_field<std::uint32_t>(jn, "arity", ctx.c_str()),
                           std::move(fn), outputs);
        } else if (kind == "lceq") {
            std::uint32_t paths = detail::num_field<std::uint32_t>(jn, "paths", ctx.c_str());
            InstanceId leq_id;
            try {
                leq_id = InstanceId::parse(
                    detail::field(jn, "leq_id", ctx.c_str()).get<std::string>());
            } catch (const InstanceIdError& e) {
                throw ParseError(ctx + ": " + e.what());
            }
            nid = n.add_lceq(id, leq_id, paths);
            if (auto it = jn.find("delays"); it != jn.end()) {
                auto delays = it->get<std::vector<std::uint32_t>>();
                if (delays.size() != paths)
                    throw ParseError(ctx + ": \"delays\" must list one delay per path");
                n.set_lceq_delays(nid, std::move(delays));
            }
        } else {
            throw ParseError(ctx + ": unknown node kind \"" + kind + "\"");
        }
        auto [it, fresh] = by_id.emplace(id, nid);
        if (!fresh)
            throw ParseError("netlist JSON: duplicate node id \"" + id + "\"");
    }

    for (const nlohmann::json& je : *edges) {
        if (!je.is_object())
            throw ParseError("netlist JSON: edge entries must be objects");
        auto resolve = [&](const char* key) -> NodeId {
            std::string id = detail::field(je, key, "edge").get<std::string>();
            auto it = by_id.find(id);
            if (it == by_id.end())
                throw ParseError("edge references unknown node \"" + id + "\"");
            return it->second;
        };
        NodeId from = resolve("from");
        NodeId to = resolve("to");
        std::uint32_t from_port =
            je.contains("from_port") ? detail::num_field<std::uint32_t>(je, "from_port", "edge")
                                     : 0;
        std::uint32_t to_port =
            je.contains("to_port") ? detail::num_field<std::uint32_t>(je, "to_port", "edge") : 0;
        n.connect(from, from_port, to, to_port);
    }
    return n;
}

inline void save_netlist(const Netlist& n, std::ostream& out) {
    nlohmann::json j;
    j["version"] = kNetlistFormatVersion;
    j["nodes"] = nlohmann::json::array();
    for (const Node& node : n.nodes()) {
        nlohmann::json jn;
        jn["id"] = node.name;
        if (std::holds_alternative<SourceNode>(node.kind)) {
            jn["kind"] = "source";
        } else if (std::holds_alternative<SinkNode>(node.kind)) {
            jn["kind"] = "sink";
        } else if (const auto* line = std::get_if<DelayLineNode>(&node.kind)) {
            jn["kind"] = "delay";
            jn["depth"] = line->depth;
        } else if (const auto* op = std::get_if<OpNode>(&node.kind)) {
            jn["kind"] = "op";
            jn["latency"] = op->latency;
            jn["arity"] = op->arity;
            jn["outputs"] = op->outputs;
            jn["fn"] = op->fn.name;
            if (!op->fn.params.empty()) jn["params"] = op->fn.params;
        } else if (const auto* lceq = std::get_if<LceqNode>(&node.kind)) {
            jn["kind"] = "lceq";
            jn["paths"] = lceq->n_paths;
            jn["leq_id"] = lceq->leq_id.str();
            jn["delays"] = lceq->path_delays;
        }
        j["nodes"].push_back(std::move(jn));
    }
    j["edges"] = nlohmann::json::array();
    for (const Edge& e : n.edges()) {
        nlohmann::json je;
        je["from"] = n.node(e.from.node).name;
        if (e.from.port != 0) je["from_port"] = e.from.port;
        je["to"] = n.node(e.to.node).name;
        if (e.to.port != 0) je["to_port"] = e.to.port;
        j["edges"].push_back(std::move(je));
    }
    out << j.dump(2) << '\n';
}

}  // namespace latbal
