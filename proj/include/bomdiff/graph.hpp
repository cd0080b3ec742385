#pragma once

// Attributed directed graph built from a bill of materials. Edges keep the
// direction of the BOM relationship; neighborhood queries ignore it.

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bomdiff/error.hpp"

namespace bomdiff {

class NodeId {
public:
    explicit NodeId(std::string value) : value_(std::move(value))
    {
        if (value_.empty())
            throw BomError(ErrorCode::EmptyNodeId, "node id must be non-empty");
    }

    const std::string& str() const noexcept { return value_; }

    friend auto operator<=>(const NodeId&, const NodeId&) = default;
    friend bool operator==(const NodeId&, const NodeId&) = default;

private:
    std::string value_;
};

namespace literals {
inline NodeId operator""_id(const char* s, std::size_t n) { return NodeId(std::string(s, n)); }
} // namespace literals

/// Attribute key -> value; std::map keeps keys in lexicographic order.
using AttrMap = std::map<std::string, std::string>;

struct Edge {
    NodeId source;
    NodeId target;

    friend auto operator<=>(const Edge&, const Edge&) = default;
    friend bool operator==(const Edge&, const Edge&) = default;
};

class BomGraph {
public:
    explicit BomGraph(std::string label = {}) : label_(std::move(label)) {}

    BomGraph& add_node(NodeId id, AttrMap attrs)
    {
        for (const auto& [key, value] : attrs)
            if (key.empty())
                throw BomError(ErrorCode::EmptyAttributeKey, "node '" + id.str() + "' has an empty attribute key");
        if (nodes_.contains(id))
            throw BomError(ErrorCode::DuplicateNodeId, "node '" + id.str() + "' already exists");
        adjacency_.emplace(id, std::set<NodeId>{});
        nodes_.emplace(std::move(id), std::move(attrs));
        return *this;
    }

    /// Re-adding an existing directed edge is a no-op.
    BomGraph& add_edge(const NodeId& source, const NodeId& target)
    {
        if (!contains(source))
            throw BomError(ErrorCode::UnknownEndpoint, "edge source '" + source.str() + "' is not a node");
        if (!contains(target))
            throw BomError(ErrorCode::UnknownEndpoint, "edge target '" + target.str() + "' is not a node");
        if (source == target)
            throw BomError(ErrorCode::SelfLoop, "self-loop on '" + source.str() + "'");
        if (edges_.insert(Edge{source, target}).second) {
            adjacency_.at(source).insert(target);
            adjacency_.at(target).insert(source);
        }
        return *this;
    }

    bool contains(const NodeId& id) const { return nodes_.contains(id); }
    bool has_edge(const NodeId& source, const NodeId& target) const
    {
        return edges_.contains(Edge{source, target});
    }

    const AttrMap& attrs(const NodeId& id) const
    {
        auto it = nodes_.find(id);
        if (it == nodes_.end())
            throw BomError(ErrorCode::UnknownNode, "no node '" + id.str() + "'");
        return it->second;
    }

    /// Neighbors through an edge in either direction, ascending.
    const std::set<NodeId>& neighbor_set(const NodeId& id) const
    {
        auto it = adjacency_.find(id);
        if (it == adjacency_.end())
            throw BomError(ErrorCode::UnknownNode, "no node '" + id.str() + "'");
        return it->second;
    }

    std::vector<NodeId> undirected_neighbors(const NodeId& id) const
    {
        const auto& adjacent = neighbor_set(id);
        return {adjacent.begin(), adjacent.end()};
    }

    std::size_t degree(const NodeId& id) const { return neighbor_set(id).size(); }

    const std::map<NodeId, AttrMap>& nodes() const noexcept { return nodes_; }
    const std::set<Edge>& edges() const noexcept { return edges_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }

    const std::string& label() const noexcept { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }

    // The label is presentation only and does not take part in equality.
    friend bool operator==(const BomGraph& lhs, const BomGraph& rhs)
    {
        return lhs.nodes_ == rhs.nodes_ && lhs.edges_ == rhs.edges_;
    }

private:
    std::string label_;
    std::map<NodeId, AttrMap> nodes_;
    std::set<Edge> edges_;
    std::map<NodeId, std::set<NodeId>> adjacency_;
};

} // namespace bomdiff

template <>
struct std::hash<bomdiff::NodeId> {
    std::size_t operator()(const bomdiff::NodeId& id) const noexcept { return std::hash<std::string>{}(id.str()); }
};
