#pragma once

// String metrics and attribute-map scoring. Strings are treated as UTF-8 and
// compared code point by code point; malformed bytes count as one unit each.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bomdiff/error.hpp"
#include "bomdiff/graph.hpp"

namespace bomdiff {

enum class MetricKind { Exact, Jaro, JaroWinkler, LevenshteinNorm };

struct Metric {
    MetricKind kind = MetricKind::Exact;
    /// Winkler prefix scale; only read for JaroWinkler. Valid range (0, 0.25].
    double prefix_scale = 0.1;

    static constexpr Metric exact() { return {MetricKind::Exact, 0.1}; }
    static constexpr Metric jaro() { return {MetricKind::Jaro, 0.1}; }
    static constexpr Metric jaro_winkler(double prefix_scale = 0.1) { return {MetricKind::JaroWinkler, prefix_scale}; }
    static constexpr Metric levenshtein() { return {MetricKind::LevenshteinNorm, 0.1}; }

    friend bool operator==(const Metric&, const Metric&) = default;
};

constexpr std::string_view to_string(MetricKind kind) noexcept
{
    switch (kind) {
    case MetricKind::Exact: return "exact";
    case MetricKind::Jaro: return "jaro";
    case MetricKind::JaroWinkler: return "jaro-winkler";
    case MetricKind::LevenshteinNorm: return "levenshtein";
    }
    return "exact";
}

inline std::optional<MetricKind> parse_metric_kind(std::string_view name)
{
    for (auto kind : {MetricKind::Exact, MetricKind::Jaro, MetricKind::JaroWinkler, MetricKind::LevenshteinNorm})
        if (to_string(kind) == name)
            return kind;
    return std::nullopt;
}

enum class MissingAttrPolicy { ScoreZero, SkipKey };

struct MatchConfig {
    std::vector<std::string> attr_keys{"name"};
    /// Metric for the traversal (mapping) pass.
    Metric metric = Metric::exact();
    /// Metric for the suggestion pass over nodes the mapping left behind.
    Metric suggest_metric = Metric::jaro_winkler();
    double accept_threshold = 1.0;
    double suggest_threshold = 0.85;
    MissingAttrPolicy missing_attr_policy = MissingAttrPolicy::ScoreZero;
    /// Lowercase and trim values before scoring.
    bool normalize = false;
    std::optional<std::pair<NodeId, NodeId>> seed_override;

    /// Checks every field and returns the effective config (EXACT pins the
    /// accept threshold to 1).
    MatchConfig validated() const
    {
        if (attr_keys.empty())
            throw BomError(ErrorCode::InvalidConfig, "at least one attribute key is required");
        for (const auto& key : attr_keys)
            if (key.empty())
                throw BomError(ErrorCode::InvalidConfig, "attribute keys must be non-empty");
        for (const auto& m : {metric, suggest_metric})
            if (m.kind == MetricKind::JaroWinkler && !(m.prefix_scale > 0.0 && m.prefix_scale <= 0.25))
                throw BomError(ErrorCode::InvalidConfig, "Jaro-Winkler prefix scale must lie in (0, 0.25]");
        auto in_unit = [](double t) { return t > 0.0 && t <= 1.0; };
        if (!in_unit(accept_threshold))
            throw BomError(ErrorCode::InvalidConfig, "accept threshold must lie in (0, 1]");
        if (!in_unit(suggest_threshold))
            throw BomError(ErrorCode::InvalidConfig, "suggest threshold must lie in (0, 1]");
        MatchConfig out = *this;
        if (out.metric.kind == MetricKind::Exact)
            out.accept_threshold = 1.0;
        return out;
    }
};

namespace detail {

inline std::u32string decode_utf8(std::string_view s)
{
    std::u32string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        const auto lead = static_cast<unsigned char>(s[i]);
        std::size_t len = lead < 0x80 ? 1 : (lead >> 5) == 0x6 ? 2 : (lead >> 4) == 0xE ? 3 : (lead >> 3) == 0x1E ? 4 : 0;
        bool ok = len != 0 && i + len <= s.size();
        char32_t cp = len == 1 ? lead : len == 2 ? (lead & 0x1F) : len == 3 ? (lead & 0x0F) : (lead & 0x07);
        for (std::size_t k = 1; ok && k < len; ++k) {
            const auto cont = static_cast<unsigned char>(s[i + k]);
            ok = (cont >> 6) == 0x2;
            cp = (cp << 6) | (cont & 0x3F);
        }
        if (!ok) {
            // Map stray bytes into a private range so they never equal a real code point.
            out.push_back(0x110000 + lead);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

inline double jaro(const std::u32string& a, const std::u32string& b)
{
    if (a.empty() && b.empty())
        return 1.0;
    if (a.empty() || b.empty())
        return 0.0;
    const std::size_t longer = std::max(a.size(), b.size());
    const std::size_t window = longer / 2 > 0 ? longer / 2 - 1 : 0;

    std::vector<bool> a_matched(a.size(), false), b_matched(b.size(), false);
    std::size_t matches = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::size_t lo = i > window ? i - window : 0;
        const std::size_t hi = std::min(i + window + 1, b.size());
        for (std::size_t j = lo; j < hi; ++j) {
            if (!b_matched[j] && a[i] == b[j]) {
                a_matched[i] = b_matched[j] = true;
                ++matches;
                break;
            }
        }
    }
    if (matches == 0)
        return 0.0;

    std::size_t half_transpositions = 0;
    for (std::size_t i = 0, j = 0; i < a.size(); ++i) {
        if (!a_matched[i])
            continue;
        while (!b_matched[j])
            ++j;
        if (a[i] != b[j])
            ++half_transpositions;
        ++j;
    }
    const double m = static_cast<double>(matches);
    const double t = static_cast<double>(half_transpositions / 2);
    return (m / static_cast<double>(a.size()) + m / static_cast<double>(b.size()) + (m - t) / m) / 3.0;
}

inline double jaro_winkler(const std::u32string& a, const std::u32string& b, double prefix_scale)
{
    const double j = jaro(a, b);
    std::size_t prefix = 0;
    const std::size_t max_prefix = std::min<std::size_t>({a.size(), b.size(), 4});
    while (prefix < max_prefix && a[prefix] == b[prefix])
        ++prefix;
    return j + prefix_scale * static_cast<double>(prefix) * (1.0 - j);
}

inline std::size_t levenshtein_distance(const std::u32string& a, const std::u32string& b)
{
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j)
        row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diagonal = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t above = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diagonal + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diagonal = above;
        }
    }
    return row[b.size()];
}

} // namespace detail

/// Similarity in [0, 1]; symmetric, and 1 whenever a == b.
inline double string_score(const Metric& metric, std::string_view a, std::string_view b)
{
    if (a == b)
        return 1.0;
    if (metric.kind == MetricKind::Exact)
        return 0.0;
    const auto ua = detail::decode_utf8(a);
    const auto ub = detail::decode_utf8(b);
    switch (metric.kind) {
    case MetricKind::Jaro:
        return detail::jaro(ua, ub);
    case MetricKind::JaroWinkler:
        return detail::jaro_winkler(ua, ub, metric.prefix_scale);
    case MetricKind::LevenshteinNorm: {
        const std::size_t longer = std::max(ua.size(), ub.size());
        if (longer == 0)
            return 1.0;
        return 1.0 - static_cast<double>(detail::levenshtein_distance(ua, ub)) / static_cast<double>(longer);
    }
    case MetricKind::Exact:
        break;
    }
    return 0.0;
}

/// ASCII lowercase plus surrounding-whitespace trim.
inline std::string normalize_value(std::string_view value)
{
    auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    while (!value.empty() && is_space(value.front()))
        value.remove_prefix(1);
    while (!value.empty() && is_space(value.back()))
        value.remove_suffix(1);
    std::string out(value);
    for (auto& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

/// Value of `key` as the scorer sees it, or nullopt when absent.
inline std::optional<std::string> scored_value(const AttrMap& attrs, const std::string& key, bool normalize)
{
    auto it = attrs.find(key);
    if (it == attrs.end())
        return std::nullopt;
    return normalize ? normalize_value(it->second) : it->second;
}

/// Unweighted mean of per-key scores over config.attr_keys under `metric`.
inline double node_score(const AttrMap& a, const AttrMap& b, const MatchConfig& config, const Metric& metric)
{
    double total = 0.0;
    std::size_t counted = 0;
    for (const auto& key : config.attr_keys) {
        const auto va = scored_value(a, key, config.normalize);
        const auto vb = scored_value(b, key, config.normalize);
        if (!va || !vb) {
            if (config.missing_attr_policy == MissingAttrPolicy::ScoreZero)
                ++counted;
            continue;
        }
        total += string_score(metric, *va, *vb);
        ++counted;
    }
    return counted == 0 ? 0.0 : total / static_cast<double>(counted);
}

inline double node_score(const AttrMap& a, const AttrMap& b, const MatchConfig& config)
{
    return node_score(a, b, config, config.metric);
}

} // namespace bomdiff
