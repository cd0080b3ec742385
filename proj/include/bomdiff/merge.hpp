#pragma once

// Merged diff graph. A mapped pair u -> v becomes one BOTH node "u≡v";
// unmapped nodes become "A:u" (ONLY_A) and "B:v" (ONLY_B). Source edges are
// translated through the mapping and an edge present on both sides (either
// direction) is kept once as BOTH, in graph A's direction.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bomdiff/error.hpp"
#include "bomdiff/graph.hpp"
#include "bomdiff/mapping.hpp"
#include "bomdiff/similarity.hpp"

namespace bomdiff {

enum class Origin { Both, OnlyA, OnlyB };

constexpr std::string_view to_string(Origin origin) noexcept
{
    switch (origin) {
    case Origin::Both: return "BOTH";
    case Origin::OnlyA: return "ONLY_A";
    case Origin::OnlyB: return "ONLY_B";
    }
    return "BOTH";
}

inline constexpr std::string_view kMergedIdJoiner = "\u2261";

inline std::string both_id(const NodeId& a, const NodeId& b) { return a.str() + std::string(kMergedIdJoiner) + b.str(); }
inline std::string only_a_id(const NodeId& a) { return "A:" + a.str(); }
inline std::string only_b_id(const NodeId& b) { return "B:" + b.str(); }

struct MergedNode {
    std::string id;
    Origin origin = Origin::Both;
    /// Ids in the source graphs; a supernode has neither.
    std::optional<NodeId> source_a;
    std::optional<NodeId> source_b;
    std::optional<AttrMap> attrs_a;
    std::optional<AttrMap> attrs_b;
    /// Supernodes only: collapsed member ids, sorted.
    std::optional<std::vector<std::string>> members;
    /// Supernodes only: (A id, B id) of each member, in member order.
    std::vector<std::pair<NodeId, NodeId>> member_sources;

    bool is_supernode() const noexcept { return members.has_value(); }
    std::size_t member_count() const noexcept { return members ? members->size() : 0; }

    friend bool operator==(const MergedNode&, const MergedNode&) = default;
};

struct MergedEdge {
    std::string source;
    std::string target;
    Origin origin = Origin::Both;

    friend bool operator==(const MergedEdge&, const MergedEdge&) = default;
};

struct MergedSuggestion {
    std::string a;
    std::string b;
    double score = 0.0;
    std::size_t shared_anchor_count = 0;

    friend bool operator==(const MergedSuggestion&, const MergedSuggestion&) = default;
};

struct Provenance {
    std::string label_a;
    std::string label_b;
    MatchConfig config;
    std::optional<std::pair<NodeId, NodeId>> seed;
};

struct MergedGraph {
    /// Keyed by merged id.
    std::map<std::string, MergedNode> nodes;
    /// Keyed by (source, target).
    std::map<std::pair<std::string, std::string>, MergedEdge> edges;
    std::vector<MergedSuggestion> suggestions;
    Provenance provenance;

    std::size_t count_nodes(Origin origin) const
    {
        return static_cast<std::size_t>(
            std::count_if(nodes.begin(), nodes.end(), [&](const auto& kv) { return kv.second.origin == origin; }));
    }

    std::size_t count_edges(Origin origin) const
    {
        return static_cast<std::size_t>(
            std::count_if(edges.begin(), edges.end(), [&](const auto& kv) { return kv.second.origin == origin; }));
    }

    std::size_t supernode_count() const
    {
        return static_cast<std::size_t>(
            std::count_if(nodes.begin(), nodes.end(), [](const auto& kv) { return kv.second.is_supernode(); }));
    }

    /// Distinct neighbors through edges in either direction; suggestions excluded.
    std::map<std::string, std::set<std::string>> adjacency() const
    {
        std::map<std::string, std::set<std::string>> adj;
        for (const auto& [id, node] : nodes)
            adj[id];
        for (const auto& [key, edge] : edges) {
            adj[edge.source].insert(edge.target);
            adj[edge.target].insert(edge.source);
        }
        return adj;
    }
};

inline MergedGraph merge_graphs(const BomGraph& ga, const BomGraph& gb, const NodeMapping& mapping,
                                const std::vector<SuggestionEdge>& suggestions)
{
    std::map<NodeId, std::string> a_ids, b_ids;
    MergedGraph merged;
    merged.provenance = {ga.label(), gb.label(), mapping.config, mapping.seed};

    for (const auto& [a, matched] : mapping.pairs) {
        if (!ga.contains(a))
            throw BomError(ErrorCode::InconsistentMapping, "mapped node '" + a.str() + "' is not in graph A");
        if (!gb.contains(matched.target))
            throw BomError(ErrorCode::InconsistentMapping, "mapping target '" + matched.target.str() + "' is not in graph B");
        if (b_ids.contains(matched.target))
            throw BomError(ErrorCode::InconsistentMapping, "two nodes map to '" + matched.target.str() + "'");
        const auto id = both_id(a, matched.target);
        a_ids.emplace(a, id);
        b_ids.emplace(matched.target, id);
        merged.nodes.emplace(id, MergedNode{id, Origin::Both, a, matched.target, ga.attrs(a), gb.attrs(matched.target), std::nullopt, {}});
    }
    for (const auto& [a, attrs] : ga.nodes()) {
        if (a_ids.contains(a))
            continue;
        const auto id = only_a_id(a);
        a_ids.emplace(a, id);
        merged.nodes.emplace(id, MergedNode{id, Origin::OnlyA, a, std::nullopt, attrs, std::nullopt, std::nullopt, {}});
    }
    for (const auto& [b, attrs] : gb.nodes()) {
        if (b_ids.contains(b))
            continue;
        const auto id = only_b_id(b);
        b_ids.emplace(b, id);
        merged.nodes.emplace(id, MergedNode{id, Origin::OnlyB, std::nullopt, b, std::nullopt, attrs, std::nullopt, {}});
    }

    for (const auto& edge : ga.edges()) {
        MergedEdge merged_edge{a_ids.at(edge.source), a_ids.at(edge.target), Origin::OnlyA};
        merged.edges.emplace(std::pair{merged_edge.source, merged_edge.target}, std::move(merged_edge));
    }
    // An A edge absorbs at most one B edge: first the same direction, then the reverse.
    std::set<std::pair<std::string, std::string>> absorbed;
    auto absorb = [&](const std::pair<std::string, std::string>& key) {
        auto it = merged.edges.find(key);
        if (it == merged.edges.end() || it->second.origin != Origin::OnlyA || absorbed.contains(key))
            return false;
        it->second.origin = Origin::Both;
        absorbed.insert(key);
        return true;
    };
    std::vector<Edge> reverse_pending;
    for (const auto& edge : gb.edges()) {
        const auto& s = b_ids.at(edge.source);
        const auto& t = b_ids.at(edge.target);
        if (!absorb({s, t}))
            reverse_pending.push_back(edge);
    }
    for (const auto& edge : reverse_pending) {
        const auto& s = b_ids.at(edge.source);
        const auto& t = b_ids.at(edge.target);
        if (absorb({t, s}))
            continue;
        merged.edges.emplace(std::pair{s, t}, MergedEdge{s, t, Origin::OnlyB});
    }

    const auto targets = mapping.targets();
    for (const auto& s : suggestions) {
        if (!ga.contains(s.a) || !gb.contains(s.b) || mapping.pairs.contains(s.a) || targets.contains(s.b))
            throw BomError(ErrorCode::InconsistentMapping,
                           "suggestion '" + s.a.str() + "' - '" + s.b.str() + "' must join two unmapped nodes");
        merged.suggestions.push_back({a_ids.at(s.a), b_ids.at(s.b), s.score, s.shared_anchor_count});
    }
    return merged;
}

/// Replaces every group of two or more BOTH leaves hanging off the same node
/// with one supernode "super:<parent>:<count>". Leaves touched by a suggestion
/// and existing supernodes are never grouped, so the operation is idempotent.
inline MergedGraph collapse_leaves(const MergedGraph& merged)
{
    std::set<std::string> in_suggestion;
    for (const auto& s : merged.suggestions) {
        in_suggestion.insert(s.a);
        in_suggestion.insert(s.b);
    }
    const auto adj = merged.adjacency();

    std::map<std::string, std::vector<std::string>> groups;
    for (const auto& [id, node] : merged.nodes) {
        const auto& neighbors = adj.at(id);
        if (node.origin != Origin::Both || node.is_supernode() || neighbors.size() != 1 || in_suggestion.contains(id))
            continue;
        groups[*neighbors.begin()].push_back(id);
    }

    MergedGraph out = merged;
    for (auto& [parent, leaves] : groups) {
        if (leaves.size() < 2)
            continue;
        std::sort(leaves.begin(), leaves.end());
        const std::set<std::string> leaf_set(leaves.begin(), leaves.end());
        std::vector<std::pair<NodeId, NodeId>> sources;
        for (const auto& leaf : leaves)
            sources.emplace_back(*merged.nodes.at(leaf).source_a, *merged.nodes.at(leaf).source_b);
        for (const auto& leaf : leaves)
            out.nodes.erase(leaf);
        std::erase_if(out.edges, [&](const auto& kv) {
            return leaf_set.contains(kv.second.source) || leaf_set.contains(kv.second.target);
        });
        const std::string super_id = "super:" + parent + ":" + std::to_string(leaves.size());
        out.nodes.emplace(super_id, MergedNode{super_id, Origin::Both, std::nullopt, std::nullopt, AttrMap{}, AttrMap{}, leaves, std::move(sources)});
        out.edges.emplace(std::pair{parent, super_id}, MergedEdge{parent, super_id, Origin::Both});
    }
    return out;
}

} // namespace bomdiff
