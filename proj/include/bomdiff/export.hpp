#pragma once

// Serializers for the merged graph: GML, the JSON diff report, and the
// single-file HTML viewer. All three are deterministic: the same MergedGraph
// always produces the same bytes.

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>

#include "json.hpp"

#include "bomdiff/graph.hpp"
#include "bomdiff/merge.hpp"
#include "bomdiff/similarity.hpp"
#include "bomdiff/version.hpp"

namespace bomdiff {

namespace detail {

// GML strings: '"' is doubled, '&' and every non-ASCII code point become
// numeric character references so the file stays 7-bit clean.
inline std::string gml_quote(std::string_view text)
{
    std::string out = "\"";
    const auto decoded = decode_utf8(text);
    for (char32_t cp : decoded) {
        if (cp == U'"')
            out += "\"\"";
        else if (cp == U'&')
            out += "&amp;";
        else if (cp < 0x80)
            out += static_cast<char>(cp);
        else if (cp < 0x110000)
            out += "&#" + std::to_string(static_cast<unsigned long>(cp)) + ";";
        else
            out += "&#65533;";
    }
    out += '"';
    return out;
}

// GML keys must match [A-Za-z][A-Za-z0-9_]*.
inline std::string gml_key(std::string_view prefix, std::string_view key)
{
    std::string out(prefix);
    for (char c : key) {
        const bool alnum = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
        out += alnum ? c : '_';
    }
    return out;
}

inline std::string format_score(double score)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", score);
    return buf;
}

inline void write_gml_attrs(std::string& out, std::string_view prefix, const AttrMap& attrs)
{
    std::set<std::string> used;
    for (const auto& [key, value] : attrs) {
        auto name = gml_key(prefix, key);
        // Sanitizing can collide ("a:b" vs "a_b"); later keys get a numeric suffix.
        if (used.contains(name)) {
            std::size_t n = 2;
            while (used.contains(name + "_" + std::to_string(n)))
                ++n;
            name += "_" + std::to_string(n);
        }
        used.insert(name);
        out += "    " + name + " " + gml_quote(value) + "\n";
    }
}

inline nlohmann::json config_json(const MatchConfig& config)
{
    auto metric_json = [](const Metric& m) {
        nlohmann::json j{{"kind", std::string(to_string(m.kind))}};
        if (m.kind == MetricKind::JaroWinkler)
            j["prefix_scale"] = m.prefix_scale;
        return j;
    };
    nlohmann::json j{
        {"attr_keys", config.attr_keys},
        {"metric", metric_json(config.metric)},
        {"suggest_metric", metric_json(config.suggest_metric)},
        {"accept_threshold", config.accept_threshold},
        {"suggest_threshold", config.suggest_threshold},
        {"missing_attr_policy", config.missing_attr_policy == MissingAttrPolicy::ScoreZero ? "score_zero" : "skip_key"},
        {"normalize", config.normalize},
    };
    j["seed_override"] = config.seed_override
                             ? nlohmann::json{config.seed_override->first.str(), config.seed_override->second.str()}
                             : nlohmann::json(nullptr);
    return j;
}

inline nlohmann::json origin_counts_nodes(const MergedGraph& merged)
{
    nlohmann::json j;
    for (auto origin : {Origin::Both, Origin::OnlyA, Origin::OnlyB})
        j[std::string(to_string(origin))] = merged.count_nodes(origin);
    return j;
}

inline nlohmann::json origin_counts_edges(const MergedGraph& merged)
{
    nlohmann::json j;
    for (auto origin : {Origin::Both, Origin::OnlyA, Origin::OnlyB})
        j[std::string(to_string(origin))] = merged.count_edges(origin);
    return j;
}

inline nlohmann::json suggestions_json(const MergedGraph& merged)
{
    auto out = nlohmann::json::array();
    for (const auto& s : merged.suggestions)
        out.push_back({{"a", s.a}, {"b", s.b}, {"score", s.score}, {"shared_anchor_count", s.shared_anchor_count}});
    return out;
}

// Graph payload for the viewer: no layout coordinates, only structure and attributes.
inline nlohmann::json graph_payload(const MergedGraph& merged)
{
    auto nodes = nlohmann::json::array();
    for (const auto& [id, node] : merged.nodes) {
        nlohmann::json n{{"id", id}, {"origin", std::string(to_string(node.origin))}};
        n["attrs_a"] = node.attrs_a ? nlohmann::json(*node.attrs_a) : nlohmann::json(nullptr);
        n["attrs_b"] = node.attrs_b ? nlohmann::json(*node.attrs_b) : nlohmann::json(nullptr);
        if (node.is_supernode()) {
            n["members"] = *node.members;
            n["member_count"] = node.member_count();
        }
        nodes.push_back(std::move(n));
    }
    auto edges = nlohmann::json::array();
    for (const auto& [key, edge] : merged.edges)
        edges.push_back({{"source", edge.source}, {"target", edge.target}, {"origin", std::string(to_string(edge.origin))}});
    return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}, {"suggestions", suggestions_json(merged)}};
}

} // namespace detail

inline std::string write_gml(const MergedGraph& merged)
{
    std::map<std::string, std::size_t> index;
    for (const auto& [id, node] : merged.nodes)
        index.emplace(id, index.size());

    std::string out = "graph [\n  directed 1\n";
    for (const auto& [id, node] : merged.nodes) {
        out += "  node [\n";
        out += "    id " + std::to_string(index.at(id)) + "\n";
        out += "    label " + detail::gml_quote(id) + "\n";
        out += "    origin " + detail::gml_quote(to_string(node.origin)) + "\n";
        if (node.is_supernode()) {
            out += "    member_count " + std::to_string(node.member_count()) + "\n";
            std::string members;
            for (const auto& m : *node.members)
                members += (members.empty() ? "" : ",") + m;
            out += "    members " + detail::gml_quote(members) + "\n";
        }
        if (node.attrs_a)
            detail::write_gml_attrs(out, "a_", *node.attrs_a);
        if (node.attrs_b)
            detail::write_gml_attrs(out, "b_", *node.attrs_b);
        out += "  ]\n";
    }
    for (const auto& [key, edge] : merged.edges) {
        out += "  edge [\n";
        out += "    source " + std::to_string(index.at(edge.source)) + "\n";
        out += "    target " + std::to_string(index.at(edge.target)) + "\n";
        out += "    origin " + detail::gml_quote(to_string(edge.origin)) + "\n";
        out += "  ]\n";
    }
    auto suggestions = merged.suggestions;
    std::sort(suggestions.begin(), suggestions.end(),
              [](const auto& l, const auto& r) { return std::tie(l.a, l.b) < std::tie(r.a, r.b); });
    for (const auto& s : suggestions) {
        out += "  edge [\n";
        out += "    source " + std::to_string(index.at(s.a)) + "\n";
        out += "    target " + std::to_string(index.at(s.b)) + "\n";
        out += "    origin \"SUGGESTED\"\n";
        out += "    score " + detail::format_score(s.score) + "\n";
        out += "    shared_anchor_count " + std::to_string(s.shared_anchor_count) + "\n";
        out += "  ]\n";
    }
    out += "]\n";
    return out;
}

/// Report document. Keys are emitted in sorted order; see docs/report-schema.md.
inline nlohmann::json report_json(const MergedGraph& merged)
{
    nlohmann::json report;
    report["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    report["inputs"] = {{"a", merged.provenance.label_a}, {"b", merged.provenance.label_b}};
    report["config"] = detail::config_json(merged.provenance.config);
    report["seed"] = merged.provenance.seed
                         ? nlohmann::json{merged.provenance.seed->first.str(), merged.provenance.seed->second.str()}
                         : nlohmann::json(nullptr);
    report["counts"] = {
        {"nodes", detail::origin_counts_nodes(merged)},
        {"edges", detail::origin_counts_edges(merged)},
        {"suggestions", merged.suggestions.size()},
        {"supernodes", merged.supernode_count()},
    };

    auto only_a = nlohmann::json::array();
    auto only_b = nlohmann::json::array();
    auto mapped = nlohmann::json::array();
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& [id, node] : merged.nodes) {
        if (node.origin == Origin::OnlyA)
            only_a.push_back(node.source_a->str());
        else if (node.origin == Origin::OnlyB)
            only_b.push_back(node.source_b->str());
        else if (!node.is_supernode())
            pairs.emplace_back(node.source_a->str(), node.source_b->str());
        for (const auto& [a, b] : node.member_sources)
            pairs.emplace_back(a.str(), b.str());
    }
    // Collapsed members still count as mapped.
    std::sort(pairs.begin(), pairs.end());
    for (const auto& [a, b] : pairs)
        mapped.push_back({{"a", a}, {"b", b}});
    report["only_a"] = std::move(only_a);
    report["only_b"] = std::move(only_b);
    report["mapped"] = std::move(mapped);
    report["suggestions"] = detail::suggestions_json(merged);
    return report;
}

inline std::string write_report(const MergedGraph& merged) { return report_json(merged).dump(2) + "\n"; }

/// Default class colors: BOTH blue, ONLY_A (first input) pink, ONLY_B (second input) yellow.
inline nlohmann::json default_colors()
{
    return {{"BOTH", "#4a90d9"}, {"ONLY_A", "#f28cb1"}, {"ONLY_B", "#f5d142"}, {"SUGGESTED", "#2ca02c"}, {"HOVER", "#00c2c7"}};
}

enum class InitialView { Expanded, Collapsed };

/// The data-island document: report, expanded graph, and its collapsed variant.
inline nlohmann::json viewer_payload(const MergedGraph& merged, InitialView view = InitialView::Expanded)
{
    const auto collapsed = collapse_leaves(merged);
    return {
        {"schema", "bomdiff-viewer/1"},
        {"initial_view", view == InitialView::Collapsed ? "collapsed" : "expanded"},
        {"report", report_json(merged)},
        {"graph", detail::graph_payload(merged)},
        {"collapsed", detail::graph_payload(collapsed)},
        {"colors", default_colors()},
        {"provenance", {{"a", merged.provenance.label_a}, {"b", merged.provenance.label_b}}},
    };
}

namespace detail {

// JSON that is safe inside <script>: '<', '>' and '&' only occur in strings,
// where their \u escapes are equivalent.
inline std::string script_safe_json(const nlohmann::json& j)
{
    const auto text = j.dump();
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == '<')
            out += "\\u003c";
        else if (c == '>')
            out += "\\u003e";
        else if (c == '&')
            out += "\\u0026";
        else
            out += c;
    }
    return out;
}

inline std::string html_escape(std::string_view text)
{
    std::string out;
    for (char c : text) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

inline std::string inline_script(std::string_view code)
{
    std::string out(code);
    for (std::size_t pos = 0; (pos = out.find("</", pos)) != std::string::npos; pos += 3)
        out.replace(pos, 2, "<\\/");
    return out;
}

} // namespace detail

inline constexpr std::string_view kDataIslandId = "bomgraph-data";

inline std::string write_html(const MergedGraph& merged, std::string_view viewer_bundle,
                              InitialView view = InitialView::Expanded)
{
    const auto title = "bomdiff: " + merged.provenance.label_a + " vs " + merged.provenance.label_b;
    std::string out;
    out += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
    out += "<title>" + detail::html_escape(title) + "</title>\n";
    out += "</head>\n<body>\n<div id=\"bomdiff-root\"></div>\n";
    out += "<script type=\"application/json\" id=\"" + std::string(kDataIslandId) + "\">";
    out += detail::script_safe_json(viewer_payload(merged, view));
    out += "</script>\n<script>\n";
    out += detail::inline_script(viewer_bundle);
    out += "\n</script>\n</body>\n</html>\n";
    return out;
}

} // namespace bomdiff
