#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "CLI11.hpp"

#include "bomdiff/bomdiff.hpp"

namespace bomdiff::cli {

namespace {

namespace fs = std::filesystem;

class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& message)
        : std::runtime_error(message), stage_(std::move(stage))
    {
    }
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

template <typename F>
auto in_stage(const std::string& stage, F&& f)
{
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(stage, e.what());
    }
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw std::runtime_error("error reading '" + path.string() + "'");
    return buf.str();
}

IngestReport load(const fs::path& path, const std::string& format)
{
    const auto bytes = read_file(path);
    BomFormat kind = format == "cyclonedx"  ? BomFormat::CycloneDx
                     : format == "nodelink" ? BomFormat::NodeLink
                                            : detect_format(bytes);
    auto report = parse_document(bytes, kind);
    if (kind == BomFormat::NodeLink && report.graph.label().empty())
        report.graph.set_label(path.filename().string());
    return report;
}

// Stages every output next to its destination, then renames them all, so a
// failure leaves no partial files behind.
class AtomicOutputs {
public:
    ~AtomicOutputs()
    {
        std::error_code ec;
        for (const auto& [tmp, dest] : staged_)
            fs::remove(tmp, ec);
    }

    void stage(const fs::path& dest, const std::string& contents)
    {
        fs::path tmp = dest;
        tmp += ".tmp-bomdiff";
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write '" + tmp.string() + "'");
        staged_.emplace_back(tmp, dest);
        out << contents;
        out.close();
        if (!out)
            throw std::runtime_error("error writing '" + tmp.string() + "'");
    }

    void commit()
    {
        for (const auto& [tmp, dest] : staged_)
            fs::rename(tmp, dest);
        staged_.clear();
    }

private:
    std::vector<std::pair<fs::path, fs::path>> staged_;
};

std::pair<NodeId, NodeId> parse_seed(const std::string& text)
{
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == text.size())
        throw CLI::ValidationError("--seed", "expected <idA>=<idB>, got '" + text + "'");
    return {NodeId(text.substr(0, eq)), NodeId(text.substr(eq + 1))};
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::string_view viewer_bundle)
{
    CLI::App app{"Diff two bills of materials as attributed graphs.", "bomdiff"};
    app.set_version_flag("--version", kToolVersion);

    std::string input_a, input_b;
    std::string format_a = "auto", format_b = "auto";
    std::vector<std::string> attr_keys;
    std::string metric_name = "exact", suggest_metric_name = "jaro-winkler", missing_policy = "zero";
    double accept_threshold = 1.0, suggest_threshold = 0.85, prefix_scale = 0.1;
    std::string seed_text, gml_path, report_path, html_path, viewer_path;
    bool suggest = false, collapse = false, normalize = false;

    const std::vector<std::string> formats{"auto", "cyclonedx", "nodelink"};
    const std::vector<std::string> metrics{"exact", "jaro", "jaro-winkler", "levenshtein"};

    app.add_option("input_a", input_a, "First BOM (CycloneDX JSON or node-link JSON)")->required()->check(CLI::ExistingFile);
    app.add_option("input_b", input_b, "Second BOM")->required()->check(CLI::ExistingFile);
    app.add_option("--format-a", format_a, "Format of the first input")->check(CLI::IsMember(formats))->capture_default_str();
    app.add_option("--format-b", format_b, "Format of the second input")->check(CLI::IsMember(formats))->capture_default_str();
    app.add_option("--attr", attr_keys, "Attribute key to match on (repeatable; default: name)");
    app.add_option("--metric", metric_name, "Metric for the mapping pass")->check(CLI::IsMember(metrics))->capture_default_str();
    app.add_option("--suggest-metric", suggest_metric_name, "Metric for the suggestion pass")
        ->check(CLI::IsMember(metrics))
        ->capture_default_str();
    app.add_option("--prefix-scale", prefix_scale, "Jaro-Winkler prefix scale")->check(CLI::Range(0.0, 0.25))->capture_default_str();
    app.add_option("--accept-threshold", accept_threshold, "Minimum score to accept a mapping (forced to 1 for exact)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app.add_option("--suggest-threshold", suggest_threshold, "Minimum score for a suggestion edge")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app.add_option("--missing-attr", missing_policy, "Missing attribute policy: zero scores 0, skip drops the key")
        ->check(CLI::IsMember({"zero", "skip"}))
        ->capture_default_str();
    app.add_option("--seed", seed_text, "Start the traversal at <idA>=<idB>");
    app.add_flag("--suggest", suggest, "Emit fuzzy suggestion edges between unmapped nodes");
    app.add_flag("--collapse", collapse, "Collapse matched leaf siblings into supernodes in the outputs");
    app.add_flag("--normalize", normalize, "Lowercase and trim attribute values before scoring");
    app.add_option("--gml", gml_path, "Write the merged graph as GML");
    app.add_option("--report", report_path, "Write the JSON diff report");
    app.add_option("--html", html_path, "Write the interactive HTML viewer");
    app.add_option("--viewer", viewer_path, "Viewer bundle to inline instead of the built-in one")->check(CLI::ExistingFile);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kIdentical;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return kIdentical;
    } catch (const CLI::ParseError& e) {
        err << "bomdiff: usage: " << e.what() << "\n";
        return kFailure;
    }

    try {
        MatchConfig config;
        if (!attr_keys.empty())
            config.attr_keys = attr_keys;
        config.metric = {*parse_metric_kind(metric_name), prefix_scale};
        config.suggest_metric = {*parse_metric_kind(suggest_metric_name), prefix_scale};
        config.accept_threshold = accept_threshold;
        config.suggest_threshold = suggest_threshold;
        config.missing_attr_policy = missing_policy == "skip" ? MissingAttrPolicy::SkipKey : MissingAttrPolicy::ScoreZero;
        config.normalize = normalize;
        config = in_stage("config", [&] {
            if (!seed_text.empty())
                config.seed_override = parse_seed(seed_text);
            return config.validated();
        });

        std::string bundle(viewer_bundle);
        if (!viewer_path.empty())
            bundle = in_stage("viewer", [&] { return read_file(viewer_path); });

        auto future_b = std::async(std::launch::async, [&] { return load(input_b, format_b); });
        auto report_a = in_stage("parse " + input_a, [&] { return load(input_a, format_a); });
        auto report_b = in_stage("parse " + input_b, [&] { return future_b.get(); });
        for (const auto* report : {&report_a, &report_b}) {
            if (report->skipped_components > 0)
                err << "bomdiff: warning: " << report->graph.label() << ": skipped " << report->skipped_components
                    << " component(s) without bom-ref\n";
            for (const auto& dangling : report->dangling_refs)
                err << "bomdiff: warning: " << report->graph.label() << ": " << dangling.reason << " '" << dangling.ref
                    << "'\n";
        }
        const auto& ga = report_a.graph;
        const auto& gb = report_b.graph;

        const auto mapping = in_stage("map", [&] { return map_nodes(ga, gb, config); });
        const auto suggestions = in_stage("suggest", [&] {
            return suggest ? suggest_matches(ga, gb, mapping, config) : std::vector<SuggestionEdge>{};
        });
        const auto merged = in_stage("merge", [&] { return merge_graphs(ga, gb, mapping, suggestions); });
        const auto& exported = collapse ? collapse_leaves(merged) : merged;

        in_stage("write", [&] {
            AtomicOutputs outputs;
            if (!gml_path.empty())
                outputs.stage(gml_path, write_gml(exported));
            if (!report_path.empty())
                outputs.stage(report_path, write_report(exported));
            if (!html_path.empty())
                outputs.stage(html_path,
                              write_html(merged, bundle, collapse ? InitialView::Collapsed : InitialView::Expanded));
            outputs.commit();
            return 0;
        });

        const auto only_a = merged.count_nodes(Origin::OnlyA);
        const auto only_b = merged.count_nodes(Origin::OnlyB);
        out << "seed " << mapping.seed.first.str() << " = " << mapping.seed.second.str() << "\n"
            << "both " << merged.count_nodes(Origin::Both) << ", only_a " << only_a << ", only_b " << only_b
            << ", suggestions " << merged.suggestions.size() << "\n";
        return only_a + only_b == 0 ? kIdentical : kDifferent;
    } catch (const StageError& e) {
        err << "bomdiff: " << e.stage() << ": " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "bomdiff: " << e.what() << "\n";
    }
    return kFailure;
}

} // namespace bomdiff::cli
