#pragma once

// Node correspondence between two BOM graphs.
//
// The mapper starts from a seed pair and walks graph A depth-first. An
// unmapped node u is matched only against counterparts of its already-mapped
// neighbors (anchors): the candidates are the unmapped neighbors, in B, of
// every anchor's image. The best candidate at or above the accept threshold
// wins; ties prefer a candidate whose degree equals deg(u), then the smallest
// B id. Traversal passes repeat until one adds no pair. Matching is greedy and
// never revisits an accepted pair.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "bomdiff/error.hpp"
#include "bomdiff/graph.hpp"
#include "bomdiff/similarity.hpp"

namespace bomdiff {

struct MatchedNode {
    NodeId target;
    double score = 0.0;

    friend bool operator==(const MatchedNode&, const MatchedNode&) = default;
};

struct NodeMapping {
    std::map<NodeId, MatchedNode> pairs;
    std::pair<NodeId, NodeId> seed;
    MatchConfig config;
    /// Traversal passes run, including the final one that added nothing.
    std::size_t passes = 0;

    const MatchedNode* find(const NodeId& a) const
    {
        auto it = pairs.find(a);
        return it == pairs.end() ? nullptr : &it->second;
    }

    std::set<NodeId> targets() const
    {
        std::set<NodeId> out;
        for (const auto& [a, matched] : pairs)
            out.insert(matched.target);
        return out;
    }
};

struct SuggestionEdge {
    NodeId a;
    NodeId b;
    double score = 0.0;
    std::size_t shared_anchor_count = 0;

    friend bool operator==(const SuggestionEdge&, const SuggestionEdge&) = default;
};

namespace detail {

using AttrTuple = std::vector<std::optional<std::string>>;

inline AttrTuple attr_tuple(const AttrMap& attrs, const MatchConfig& config)
{
    AttrTuple tuple;
    tuple.reserve(config.attr_keys.size());
    for (const auto& key : config.attr_keys)
        tuple.push_back(scored_value(attrs, key, config.normalize));
    return tuple;
}

// Tuples that occur exactly once in the graph, with their node. Tuples with
// every key missing carry no identity and are left out.
inline std::map<AttrTuple, NodeId> unique_tuples(const BomGraph& graph, const MatchConfig& config)
{
    std::map<AttrTuple, std::optional<NodeId>> seen;
    for (const auto& [id, attrs] : graph.nodes()) {
        auto tuple = attr_tuple(attrs, config);
        if (std::none_of(tuple.begin(), tuple.end(), [](const auto& v) { return v.has_value(); }))
            continue;
        auto [it, inserted] = seen.try_emplace(std::move(tuple), id);
        if (!inserted)
            it->second.reset();
    }
    std::map<AttrTuple, NodeId> out;
    for (auto& [tuple, id] : seen)
        if (id)
            out.emplace(tuple, *id);
    return out;
}

} // namespace detail

inline std::pair<NodeId, NodeId> find_seed(const BomGraph& ga, const BomGraph& gb, const MatchConfig& config)
{
    if (ga.empty() || gb.empty())
        throw BomError(ErrorCode::NoSeedFound, "both graphs need at least one node");
    if (config.seed_override) {
        const auto& [a, b] = *config.seed_override;
        if (!ga.contains(a))
            throw BomError(ErrorCode::UnknownNode, "seed '" + a.str() + "' is not a node of graph A");
        if (!gb.contains(b))
            throw BomError(ErrorCode::UnknownNode, "seed '" + b.str() + "' is not a node of graph B");
        return *config.seed_override;
    }

    const auto in_a = detail::unique_tuples(ga, config);
    const auto in_b = detail::unique_tuples(gb, config);
    std::optional<std::pair<NodeId, NodeId>> best;
    std::size_t best_degree = 0;
    for (const auto& [tuple, u] : in_a) {
        auto match = in_b.find(tuple);
        if (match == in_b.end())
            continue;
        const std::size_t degree = ga.degree(u);
        // Each u appears once, and its v is fixed by the tuple, so ties only need the u order.
        if (!best || degree > best_degree || (degree == best_degree && u < best->first)) {
            best.emplace(u, match->second);
            best_degree = degree;
        }
    }
    if (!best)
        throw BomError(ErrorCode::NoSeedFound,
                       "no node has a unique attribute tuple shared by both graphs; supply a seed override");
    return *best;
}

inline NodeMapping map_nodes(const BomGraph& ga, const BomGraph& gb, const MatchConfig& input_config)
{
    const MatchConfig config = input_config.validated();
    auto seed = find_seed(ga, gb, config);

    NodeMapping mapping{{}, seed, config, 0};
    std::set<NodeId> taken;
    mapping.pairs.emplace(seed.first, MatchedNode{seed.second, node_score(ga.attrs(seed.first), gb.attrs(seed.second), config)});
    taken.insert(seed.second);

    // Tries to map u through all of its currently mapped neighbors.
    auto try_map = [&](const NodeId& u) -> bool {
        std::set<NodeId> candidates;
        for (const auto& neighbor : ga.neighbor_set(u)) {
            const auto* anchor = mapping.find(neighbor);
            if (anchor == nullptr)
                continue;
            for (const auto& c : gb.neighbor_set(anchor->target))
                if (!taken.contains(c))
                    candidates.insert(c);
        }
        const auto& u_attrs = ga.attrs(u);
        const std::size_t u_degree = ga.degree(u);
        const NodeId* best = nullptr;
        double best_score = 0.0;
        bool best_degree_match = false;
        for (const auto& c : candidates) {
            const double score = node_score(u_attrs, gb.attrs(c), config);
            if (score < config.accept_threshold)
                continue;
            const bool degree_match = gb.degree(c) == u_degree;
            // Candidates arrive in ascending id order, so a strict improvement keeps the smallest id on ties.
            if (best == nullptr || score > best_score || (score == best_score && degree_match && !best_degree_match)) {
                best = &c;
                best_score = score;
                best_degree_match = degree_match;
            }
        }
        if (best == nullptr)
            return false;
        mapping.pairs.emplace(u, MatchedNode{*best, best_score});
        taken.insert(*best);
        return true;
    };

    std::vector<NodeId> roots{seed.first};
    for (const auto& [id, attrs] : ga.nodes())
        roots.push_back(id);

    for (;;) {
        ++mapping.passes;
        bool added = false;
        std::set<NodeId> visited;
        for (const auto& root : roots) {
            if (visited.contains(root))
                continue;
            // Iterative DFS; children are pushed in reverse so the smallest id is expanded first.
            std::vector<NodeId> stack{root};
            while (!stack.empty()) {
                NodeId u = std::move(stack.back());
                stack.pop_back();
                if (!visited.insert(u).second)
                    continue;
                if (!mapping.pairs.contains(u) && try_map(u))
                    added = true;
                const auto& adjacent = ga.neighbor_set(u);
                for (auto it = adjacent.rbegin(); it != adjacent.rend(); ++it)
                    if (!visited.contains(*it))
                        stack.push_back(*it);
            }
        }
        if (!added)
            break;
    }
    return mapping;
}

/// Fuzzy candidates between nodes the mapping left behind. Many-to-many;
/// sorted by descending score, then by (a, b).
inline std::vector<SuggestionEdge> suggest_matches(const BomGraph& ga, const BomGraph& gb, const NodeMapping& mapping,
                                                   const MatchConfig& input_config)
{
    const MatchConfig config = input_config.validated();
    const auto targets = mapping.targets();
    std::vector<SuggestionEdge> out;
    for (const auto& [u, u_attrs] : ga.nodes()) {
        if (mapping.pairs.contains(u))
            continue;
        // Images of u's mapped neighbors, and per B node how many of them it touches.
        std::map<NodeId, std::size_t> anchor_hits;
        for (const auto& neighbor : ga.neighbor_set(u)) {
            const auto* anchor = mapping.find(neighbor);
            if (anchor == nullptr || !gb.contains(anchor->target))
                continue;
            for (const auto& v : gb.neighbor_set(anchor->target))
                if (!targets.contains(v))
                    ++anchor_hits[v];
        }
        for (const auto& [v, shared] : anchor_hits) {
            const double score = node_score(u_attrs, gb.attrs(v), config, config.suggest_metric);
            if (score >= config.suggest_threshold)
                out.push_back({u, v, score, shared});
        }
    }
    std::sort(out.begin(), out.end(), [](const SuggestionEdge& l, const SuggestionEdge& r) {
        if (l.score != r.score)
            return l.score > r.score;
        return std::tie(l.a, l.b) < std::tie(r.a, r.b);
    });
    return out;
}

} // namespace bomdiff
