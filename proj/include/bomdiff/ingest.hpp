#pragma once

// BOM documents -> BomGraph.
//
// CycloneDX JSON: every component and service (including nested ones and
// metadata.component) becomes a node keyed by its bom-ref. Attributes are
// name, version, type and purl when present, plus one "hash:<ALG>" entry per
// hash. Each dependencies[].dependsOn entry becomes an edge ref -> target.
// References that name no parsed node are reported, never fatal.
//
// Node-link JSON is the tool's own carrier for graphs with no standard BOM
// format (hardware BOMs in particular):
//
//   {"label": "...", "nodes": [{"id": "C", "attrs": {"name": "C"}}],
//    "edges": [["C", "A"]]}

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bomdiff/error.hpp"
#include "bomdiff/graph.hpp"

namespace bomdiff {

struct DanglingRef {
    std::string ref;
    std::string reason;

    friend bool operator==(const DanglingRef&, const DanglingRef&) = default;
};

struct IngestReport {
    BomGraph graph;
    /// Components or services dropped for lacking a bom-ref.
    std::size_t skipped_components = 0;
    std::vector<DanglingRef> dangling_refs;

    friend bool operator==(const IngestReport& lhs, const IngestReport& rhs)
    {
        return lhs.graph == rhs.graph && lhs.graph.label() == rhs.graph.label() &&
               lhs.skipped_components == rhs.skipped_components && lhs.dangling_refs == rhs.dangling_refs;
    }
};

enum class BomFormat { CycloneDx, NodeLink };

namespace detail {

inline nlohmann::json parse_json_document(std::string_view document)
{
    auto doc = nlohmann::json::parse(document, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) {
        std::string hint;
        const auto first = document.find_first_not_of(" \t\r\n");
        if (first != std::string_view::npos && document[first] == '<')
            hint = " (looks like XML; XML CycloneDX and SWID tags are not supported)";
        else if (document.find("SPDXVersion:") != std::string_view::npos)
            hint = " (looks like SPDX tag-value; SPDX is not supported)";
        throw BomError(ErrorCode::MalformedDocument, "document is not valid JSON" + hint);
    }
    if (!doc.is_object())
        throw BomError(ErrorCode::MalformedDocument, "top-level JSON value must be an object");
    return doc;
}

inline const std::string* string_field(const nlohmann::json& obj, const char* key)
{
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string())
        return nullptr;
    return it->get_ptr<const std::string*>();
}

inline AttrMap cyclonedx_attrs(const nlohmann::json& entry)
{
    AttrMap attrs;
    for (const char* key : {"name", "version", "type", "purl"})
        if (const auto* value = string_field(entry, key))
            attrs.emplace(key, *value);
    auto hashes = entry.find("hashes");
    if (hashes != entry.end() && hashes->is_array()) {
        for (const auto& hash : *hashes) {
            if (!hash.is_object())
                continue;
            const auto* alg = string_field(hash, "alg");
            const auto* content = string_field(hash, "content");
            if (alg && content && !alg->empty())
                attrs.emplace("hash:" + *alg, *content);
        }
    }
    return attrs;
}

// Adds `entry` and its nested components/services to the graph.
inline void add_cyclonedx_entry(IngestReport& report, const nlohmann::json& entry)
{
    if (!entry.is_object())
        throw BomError(ErrorCode::MalformedDocument, "component entries must be objects");
    const auto* ref = string_field(entry, "bom-ref");
    if (ref == nullptr || ref->empty())
        ++report.skipped_components;
    else
        report.graph.add_node(NodeId(*ref), cyclonedx_attrs(entry));
    for (const char* nested : {"components", "services"}) {
        auto it = entry.find(nested);
        if (it == entry.end())
            continue;
        if (!it->is_array())
            throw BomError(ErrorCode::MalformedDocument, std::string("nested '") + nested + "' must be an array");
        for (const auto& child : *it)
            add_cyclonedx_entry(report, child);
    }
}

} // namespace detail

inline IngestReport parse_cyclonedx(std::string_view document)
{
    const auto doc = detail::parse_json_document(document);
    if (doc.contains("spdxVersion"))
        throw BomError(ErrorCode::MalformedDocument, "document is SPDX JSON; only CycloneDX and node-link are supported");
    const auto* format = detail::string_field(doc, "bomFormat");
    if (format != nullptr && *format != "CycloneDX")
        throw BomError(ErrorCode::MalformedDocument, "bomFormat is '" + *format + "', expected 'CycloneDX'");

    auto components = doc.find("components");
    auto services = doc.find("services");
    if (components == doc.end() && services == doc.end())
        throw BomError(ErrorCode::MalformedDocument, "document has neither 'components' nor 'services'");

    IngestReport report;
    std::string label = "cyclonedx";
    auto metadata = doc.find("metadata");
    if (metadata != doc.end() && metadata->is_object()) {
        auto root = metadata->find("component");
        if (root != metadata->end() && root->is_object()) {
            if (const auto* name = detail::string_field(*root, "name")) {
                label = *name;
                if (const auto* version = detail::string_field(*root, "version"))
                    label += " " + *version;
            }
            detail::add_cyclonedx_entry(report, *root);
        }
    }
    report.graph.set_label(label);

    for (auto list : {components, services}) {
        if (list == doc.end())
            continue;
        if (!list->is_array())
            throw BomError(ErrorCode::MalformedDocument, "'components' and 'services' must be arrays");
        for (const auto& entry : *list)
            detail::add_cyclonedx_entry(report, entry);
    }

    auto dependencies = doc.find("dependencies");
    if (dependencies == doc.end())
        return report;
    if (!dependencies->is_array())
        throw BomError(ErrorCode::MalformedDocument, "'dependencies' must be an array");
    auto& graph = report.graph;
    for (const auto& dep : *dependencies) {
        const auto* ref = dep.is_object() ? detail::string_field(dep, "ref") : nullptr;
        if (ref == nullptr)
            throw BomError(ErrorCode::MalformedDocument, "dependency entry without a string 'ref'");
        const bool known_ref = !ref->empty() && graph.contains(NodeId(*ref));
        if (!known_ref)
            report.dangling_refs.push_back({*ref, "unknown ref"});
        auto targets = dep.find("dependsOn");
        if (targets == dep.end())
            continue;
        if (!targets->is_array())
            throw BomError(ErrorCode::MalformedDocument, "'dependsOn' of '" + *ref + "' must be an array");
        for (const auto& target : *targets) {
            if (!target.is_string())
                throw BomError(ErrorCode::MalformedDocument, "'dependsOn' of '" + *ref + "' must hold strings");
            const auto& name = target.get_ref<const std::string&>();
            if (name.empty() || !graph.contains(NodeId(name))) {
                report.dangling_refs.push_back({name, "unknown target"});
                continue;
            }
            if (!known_ref)
                continue;
            if (name == *ref) {
                report.dangling_refs.push_back({name, "self dependency"});
                continue;
            }
            graph.add_edge(NodeId(*ref), NodeId(name));
        }
    }
    return report;
}

inline IngestReport parse_nodelink(std::string_view document)
{
    const auto doc = detail::parse_json_document(document);
    auto nodes = doc.find("nodes");
    if (nodes == doc.end() || !nodes->is_array())
        throw BomError(ErrorCode::MalformedDocument, "node-link document needs a 'nodes' array");

    IngestReport report;
    if (const auto* label = detail::string_field(doc, "label"))
        report.graph.set_label(*label);
    else if (doc.contains("label"))
        throw BomError(ErrorCode::MalformedDocument, "'label' must be a string");

    for (const auto& node : *nodes) {
        const auto* id = node.is_object() ? detail::string_field(node, "id") : nullptr;
        if (id == nullptr || id->empty())
            throw BomError(ErrorCode::MalformedDocument, "every node needs a non-empty string 'id'");
        AttrMap attrs;
        auto raw = node.find("attrs");
        if (raw != node.end()) {
            if (!raw->is_object())
                throw BomError(ErrorCode::MalformedDocument, "'attrs' of '" + *id + "' must be an object");
            for (const auto& [key, value] : raw->items()) {
                if (value.is_string())
                    attrs.emplace(key, value.get<std::string>());
                else if (value.is_number() || value.is_boolean())
                    attrs.emplace(key, value.dump());
                else
                    throw BomError(ErrorCode::MalformedDocument,
                                   "attribute '" + key + "' of '" + *id + "' must be a scalar");
            }
        }
        report.graph.add_node(NodeId(*id), std::move(attrs));
    }

    auto edges = doc.find("edges");
    if (edges == doc.end())
        return report;
    if (!edges->is_array())
        throw BomError(ErrorCode::MalformedDocument, "'edges' must be an array");
    for (const auto& edge : *edges) {
        if (!edge.is_array() || edge.size() != 2 || !edge[0].is_string() || !edge[1].is_string())
            throw BomError(ErrorCode::MalformedDocument, "each edge must be a [source, target] string pair");
        const auto& source = edge[0].get_ref<const std::string&>();
        const auto& target = edge[1].get_ref<const std::string&>();
        if (source.empty() || target.empty())
            throw BomError(ErrorCode::UnknownEndpoint, "edge with an empty endpoint");
        report.graph.add_edge(NodeId(source), NodeId(target));
    }
    return report;
}

/// Serializes a graph in node-link form; parse_nodelink reads it back unchanged.
inline std::string write_nodelink(const BomGraph& graph)
{
    nlohmann::ordered_json doc;
    doc["label"] = graph.label();
    auto& nodes = doc["nodes"] = nlohmann::ordered_json::array();
    for (const auto& [id, attrs] : graph.nodes())
        nodes.push_back({{"id", id.str()}, {"attrs", attrs}});
    auto& edges = doc["edges"] = nlohmann::ordered_json::array();
    for (const auto& edge : graph.edges())
        edges.push_back({edge.source.str(), edge.target.str()});
    return doc.dump(2) + "\n";
}

/// CycloneDX iff the top-level "bomFormat" equals "CycloneDX"; node-link otherwise.
inline BomFormat detect_format(std::string_view document)
{
    auto doc = nlohmann::json::parse(document, nullptr, false);
    if (doc.is_object()) {
        auto it = doc.find("bomFormat");
        if (it != doc.end() && it->is_string() && it->get<std::string>() == "CycloneDX")
            return BomFormat::CycloneDx;
    }
    return BomFormat::NodeLink;
}

inline IngestReport parse_document(std::string_view document, BomFormat format)
{
    return format == BomFormat::CycloneDx ? parse_cyclonedx(document) : parse_nodelink(document);
}

} // namespace bomdiff
