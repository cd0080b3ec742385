#include <gtest/gtest.h>

#include <set>

#include "bomdiff/export.hpp"
#include "bomdiff_viewer_bundle.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "scenarios.hpp"

using namespace bomdiff;
using namespace bomdiff::literals;
using nlohmann::json;

namespace {

// Extracts the single data island and undoes nothing: its JSON is valid as is.
json data_island(const std::string& html, std::size_t* count = nullptr)
{
    const std::string open = "<script type=\"application/json\" id=\"" + std::string(kDataIslandId) + "\">";
    std::size_t found = 0;
    for (std::size_t pos = 0; (pos = html.find(open, pos)) != std::string::npos; pos += open.size())
        ++found;
    if (count)
        *count = found;
    const auto start = html.find(open) + open.size();
    const auto end = html.find("</script>", start);
    return json::parse(html.substr(start, end - start));
}

MergedGraph tiny(const std::string& a_name, const std::string& b_name)
{
    BomGraph ga("left"), gb("right");
    ga.add_node("r"_id, {{"name", "root"}}).add_node("x"_id, {{"name", a_name}}).add_edge("r"_id, "x"_id);
    gb.add_node("r"_id, {{"name", "root"}}).add_node("x"_id, {{"name", b_name}}).add_edge("r"_id, "x"_id);
    return scenario::diff(ga, gb, scenario::names_only());
}

std::size_t count_records(const oracle::GmlDocument& doc, const std::string& origin, bool edges)
{
    std::size_t n = 0;
    for (const auto& rec : edges ? doc.edges : doc.nodes)
        if (oracle::gml_string(rec.fields.at("origin")) == origin)
            ++n;
    return n;
}

} // namespace

TEST(WriteGml, MinimalGraph)
{
    const auto m = tiny("same", "same");
    const auto doc = oracle::parse_gml(write_gml(m));
    EXPECT_EQ(doc.graph_fields.at("directed"), "1");
    ASSERT_EQ(doc.nodes.size(), 2u);
    ASSERT_EQ(doc.edges.size(), 1u);
    EXPECT_EQ(oracle::gml_string(doc.nodes[0].fields.at("a_name")), "root");
    EXPECT_EQ(oracle::gml_string(doc.nodes[0].fields.at("origin")), "BOTH");
    // Ids are compact and follow sorted merged-id order.
    EXPECT_EQ(doc.nodes[0].fields.at("id"), "0");
    EXPECT_EQ(doc.nodes[1].fields.at("id"), "1");
    EXPECT_EQ(oracle::gml_string(doc.nodes[0].fields.at("label")), "r&#8801;r");
}

TEST(WriteGml, EscapesQuotesAmpersandsAndNonAscii)
{
    const auto m = tiny("12\" rack & \xC3\xA9tag\xC3\xA8re", "other");
    const auto text = write_gml(m);
    for (unsigned char c : text)
        EXPECT_LT(c, 0x80u);
    const auto doc = oracle::parse_gml(text);
    std::set<std::string> names;
    for (const auto& rec : doc.nodes)
        if (rec.fields.contains("a_name"))
            names.insert(oracle::gml_string(rec.fields.at("a_name")));
    EXPECT_TRUE(names.contains("12\" rack &amp; &#233;tag&#232;re"));
}

TEST(WriteGml, SanitizesAndDisambiguatesKeys)
{
    BomGraph g;
    g.add_node("n"_id, {{"hash:SHA-256", "aa"}, {"hash_SHA_256", "bb"}, {"name", "n"}});
    const auto m = scenario::diff(g, g, scenario::names_only());
    const auto doc = oracle::parse_gml(write_gml(m));
    const auto& f = doc.nodes.at(0).fields;
    EXPECT_EQ(oracle::gml_string(f.at("a_hash_SHA_256")), "aa");
    EXPECT_EQ(oracle::gml_string(f.at("a_hash_SHA_256_2")), "bb");
}

TEST(WriteGml, CountsAgreeWithReport)
{
    for (bool collapse : {false, true}) {
        auto m = scenario::pipeline();
        if (collapse)
            m = collapse_leaves(m);
        const auto doc = oracle::parse_gml(write_gml(m));
        const auto report = report_json(m);
        for (const char* origin : {"BOTH", "ONLY_A", "ONLY_B"}) {
            EXPECT_EQ(count_records(doc, origin, false), report["counts"]["nodes"][origin].get<std::size_t>());
            EXPECT_EQ(count_records(doc, origin, true), report["counts"]["edges"][origin].get<std::size_t>());
        }
        EXPECT_EQ(count_records(doc, "SUGGESTED", true), report["counts"]["suggestions"].get<std::size_t>());
        EXPECT_EQ(doc.nodes.size(), m.nodes.size());
    }
}

TEST(WriteGml, SuggestionAndSupernodeFields)
{
    const auto m = collapse_leaves(scenario::pipeline());
    const auto doc = oracle::parse_gml(write_gml(m));
    bool saw_super = false;
    for (const auto& rec : doc.nodes)
        if (rec.fields.contains("member_count")) {
            saw_super = true;
            EXPECT_EQ(rec.fields.at("member_count"), "2");
            EXPECT_EQ(oracle::gml_string(rec.fields.at("members")), "A&#8801;A,B&#8801;B");
        }
    EXPECT_TRUE(saw_super);
    std::size_t suggested = 0;
    for (const auto& rec : doc.edges)
        if (oracle::gml_string(rec.fields.at("origin")) == "SUGGESTED") {
            ++suggested;
            EXPECT_EQ(rec.fields.at("shared_anchor_count"), "1");
            EXPECT_NEAR(std::stod(rec.fields.at("score")), m.suggestions[0].score, 1e-6);
        }
    EXPECT_EQ(suggested, 1u);
}

TEST(ReportJson, IdenticalGraphs)
{
    const auto g = gen::load_fixture("saas_bom.cdx.json");
    const auto report = report_json(scenario::diff(g, g, scenario::names_only()));
    EXPECT_EQ(report["counts"]["nodes"]["BOTH"], 7);
    EXPECT_EQ(report["counts"]["nodes"]["ONLY_A"], 0);
    EXPECT_EQ(report["counts"]["nodes"]["ONLY_B"], 0);
    EXPECT_TRUE(report["only_a"].empty());
    EXPECT_TRUE(report["only_b"].empty());
    EXPECT_EQ(report["mapped"].size(), 7u);
    EXPECT_TRUE(report["suggestions"].is_array());
    EXPECT_TRUE(report["suggestions"].empty());
    EXPECT_EQ(report["tool"]["name"], "bomdiff");
}

TEST(ReportJson, PipelineDifferences)
{
    const auto report = report_json(scenario::pipeline());
    EXPECT_EQ(report["only_a"], json({"D", "F", "G"}));
    EXPECT_EQ(report["only_b"], json({"H", "I"}));
    EXPECT_EQ(report["seed"], json({"C", "C"}));
    ASSERT_EQ(report["suggestions"].size(), 1u);
    EXPECT_EQ(report["suggestions"][0]["a"], "A:D");
    EXPECT_EQ(report["suggestions"][0]["b"], "B:H");
    EXPECT_EQ(report["config"]["attr_keys"], json({"name"}));
    EXPECT_EQ(report["config"]["metric"]["kind"], "exact");
}

TEST(ReportJson, CollapsedMembersStayMapped)
{
    const auto report = report_json(collapse_leaves(scenario::pipeline()));
    EXPECT_EQ(report["counts"]["supernodes"], 1);
    EXPECT_EQ(report["mapped"].size(), 4u);
    EXPECT_EQ(report["mapped"][0], json({{"a", "A"}, {"b", "A"}}));
}

TEST(ReportJson, Deterministic)
{
    EXPECT_EQ(write_report(scenario::pipeline()), write_report(scenario::pipeline()));
    EXPECT_EQ(write_gml(scenario::pipeline()), write_gml(scenario::pipeline()));
    EXPECT_EQ(write_html(scenario::pipeline(), kViewerBundle), write_html(scenario::pipeline(), kViewerBundle));
}

TEST(WriteHtml, SingleDataIslandRoundTrips)
{
    const auto m = scenario::pipeline();
    const auto html = write_html(m, kViewerBundle);
    std::size_t islands = 0;
    const auto payload = data_island(html, &islands);
    EXPECT_EQ(islands, 1u);
    EXPECT_EQ(payload["schema"], "bomdiff-viewer/1");
    EXPECT_EQ(payload["initial_view"], "expanded");
    EXPECT_EQ(payload["report"], report_json(m));
    EXPECT_EQ(payload["graph"]["nodes"].size(), 9u);
    EXPECT_EQ(payload["graph"]["edges"].size(), 8u);
    EXPECT_EQ(payload["graph"]["suggestions"].size(), 1u);
    EXPECT_EQ(payload["collapsed"]["nodes"].size(), 8u);
    EXPECT_EQ(payload["colors"]["ONLY_A"], "#f28cb1");
    EXPECT_EQ(payload["colors"]["ONLY_B"], "#f5d142");
}

TEST(WriteHtml, InitialViewCollapsed)
{
    const auto payload = data_island(write_html(scenario::pipeline(), kViewerBundle, InitialView::Collapsed));
    EXPECT_EQ(payload["initial_view"], "collapsed");
}

TEST(WriteHtml, EmptySuggestionsAreAnArray)
{
    const auto payload = data_island(write_html(tiny("same", "same"), kViewerBundle));
    EXPECT_TRUE(payload["graph"]["suggestions"].is_array());
    EXPECT_TRUE(payload["graph"]["suggestions"].empty());
}

TEST(WriteHtml, ScriptBreakoutIsNeutralized)
{
    const auto m = tiny("</script><script>alert(1)</script>", "x");
    const auto html = write_html(m, kViewerBundle);
    std::size_t islands = 0;
    const auto payload = data_island(html, &islands);
    EXPECT_EQ(islands, 1u);
    EXPECT_EQ(html.find("alert(1)</script>"), std::string::npos);
    EXPECT_EQ(payload["graph"]["nodes"][0]["attrs_a"]["name"], "</script><script>alert(1)</script>");
}

TEST(WriteHtml, SelfContained)
{
    const auto html = write_html(collapse_leaves(scenario::pipeline()), kViewerBundle);
    EXPECT_EQ(html.find("http://"), std::string::npos);
    EXPECT_EQ(html.find("https://"), std::string::npos);
    EXPECT_EQ(html.find("src=\"//"), std::string::npos);
    EXPECT_EQ(html.find("<link"), std::string::npos);
    EXPECT_LT(html.size(), 5u * 1024 * 1024);
    EXPECT_NE(html.find("bomdiff-viewer"), std::string::npos);
}
