#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "bomdiff/graph.hpp"
#include "generators.hpp"

using namespace bomdiff;
using namespace bomdiff::literals;

namespace {

ErrorCode code_of(auto&& f)
{
    try {
        f();
    } catch (const BomError& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected BomError";
    return ErrorCode::InvalidConfig;
}

} // namespace

TEST(NodeId, RejectsEmpty)
{
    EXPECT_EQ(code_of([] { NodeId(""); }), ErrorCode::EmptyNodeId);
    EXPECT_EQ("C"_id.str(), "C");
}

TEST(BomGraph, AddNode)
{
    BomGraph g;
    g.add_node("C"_id, {{"name", "C"}});
    EXPECT_EQ(g.node_count(), 1u);
    EXPECT_EQ(g.edge_count(), 0u);
    EXPECT_EQ(g.attrs("C"_id).at("name"), "C");

    EXPECT_EQ(code_of([&] { g.add_node("C"_id, {}); }), ErrorCode::DuplicateNodeId);

    g.add_node("A"_id, {{"name", "A"}});
    EXPECT_EQ(g.node_count(), 2u);
}

TEST(BomGraph, RejectsEmptyAttributeKey)
{
    BomGraph g;
    EXPECT_EQ(code_of([&] { g.add_node("C"_id, {{"", "x"}}); }), ErrorCode::EmptyAttributeKey);
    EXPECT_TRUE(g.empty());
}

TEST(BomGraph, AddEdge)
{
    BomGraph g;
    g.add_node("C"_id, {}).add_node("A"_id, {});
    g.add_edge("C"_id, "A"_id);
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_EQ(code_of([&] { g.add_edge("C"_id, "C"_id); }), ErrorCode::SelfLoop);
    g.add_edge("C"_id, "A"_id);
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_EQ(code_of([&] { g.add_edge("C"_id, "Z"_id); }), ErrorCode::UnknownEndpoint);
    EXPECT_EQ(code_of([&] { g.add_edge("Z"_id, "C"_id); }), ErrorCode::UnknownEndpoint);
}

TEST(BomGraph, UndirectedNeighbors)
{
    BomGraph g;
    g.add_node("A"_id, {}).add_node("B"_id, {}).add_node("C"_id, {}).add_node("X"_id, {});
    g.add_edge("C"_id, "A"_id).add_edge("B"_id, "C"_id).add_edge("C"_id, "A"_id);
    EXPECT_EQ(g.undirected_neighbors("C"_id), (std::vector<NodeId>{"A"_id, "B"_id}));
    EXPECT_TRUE(g.undirected_neighbors("X"_id).empty());
    EXPECT_EQ(g.undirected_neighbors("A"_id), (std::vector<NodeId>{"C"_id}));
    EXPECT_EQ(code_of([&] { g.undirected_neighbors("Q"_id); }), ErrorCode::UnknownNode);
}

TEST(BomGraph, BothDirectionsCountAsOneNeighbor)
{
    BomGraph g;
    g.add_node("A"_id, {}).add_node("B"_id, {});
    g.add_edge("A"_id, "B"_id).add_edge("B"_id, "A"_id);
    EXPECT_EQ(g.edge_count(), 2u);
    EXPECT_EQ(g.degree("A"_id), 1u);
}

TEST(BomGraphProperties, NeighborhoodsAreSymmetricAndBounded)
{
    std::mt19937_64 rng(7);
    for (int round = 0; round < 200; ++round) {
        auto g = gen::random_graph(rng, {1, 10, 0.4, 3, round % 3 != 0});
        for (const auto& [id, attrs] : g.nodes()) {
            const auto neighbors = g.undirected_neighbors(id);
            EXPECT_LE(neighbors.size(), g.node_count() - 1);
            EXPECT_TRUE(std::is_sorted(neighbors.begin(), neighbors.end()));
            for (const auto& n : neighbors) {
                const auto back = g.undirected_neighbors(n);
                EXPECT_TRUE(std::binary_search(back.begin(), back.end(), id));
            }
        }
    }
}

TEST(BomGraphProperties, ConstructionIsOrderIndependent)
{
    std::mt19937_64 rng(11);
    for (int round = 0; round < 200; ++round) {
        auto g = gen::random_graph(rng, {1, 10, 0.3, 4, true});
        std::map<std::string, std::string> identity;
        for (const auto& [id, attrs] : g.nodes())
            identity[id.str()] = id.str();
        auto shuffled = gen::relabel(rng, g, identity);
        EXPECT_EQ(shuffled, g);
    }
}
