#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dissect/record.hpp"

namespace dissect {

inline constexpr std::array<double, 7> kTableColumns = {0.0, 0.25, 0.5, 0.75, 0.90, 0.95, 1.0};
inline constexpr std::array<const char*, 7> kTableHeaders = {"min", "25%", "50%", "75%", "90%", "95%", "max"};

/// Linear interpolation between closest ranks (R type 7, numpy default).
inline double percentile(std::vector<double> v, double p) {
    if (v.empty()) throw std::invalid_argument("percentile of an empty sample");
    std::sort(v.begin(), v.end());
    const double h = (static_cast<double>(v.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

struct SummaryRow {
    std::string metric;
    std::array<double, 7> values{};
};

struct SummaryTable {
    std::vector<SummaryRow> rows;
    const SummaryRow* find(std::string_view metric) const {
        for (const auto& r : rows)
            if (r.metric == metric) return &r;
        return nullptr;
    }
};

inline SummaryRow summary_row(std::string metric, const std::vector<double>& sample) {
    SummaryRow r{std::move(metric), {}};
    for (std::size_t i = 0; i < kTableColumns.size(); ++i) r.values[i] = percentile(sample, kTableColumns[i]);
    return r;
}

/// Per-metric percentile rows. Classes and methods only use records that
/// carry them.
inline SummaryTable percentile_table(const std::vector<PatchRecord>& records) {
    if (records.empty()) throw std::invalid_argument("percentile table of an empty corpus");
    auto col = [&](auto get) {
        std::vector<double> v;
        for (const auto& r : records) get(r, v);
        return v;
    };
    SummaryTable t;
    t.rows.push_back(summary_row("patchSize", col([](const PatchRecord& r, auto& v) { v.push_back(r.metrics.patch_size); })));
    t.rows.push_back(summary_row("added", col([](const PatchRecord& r, auto& v) { v.push_back(r.metrics.added); })));
    t.rows.push_back(summary_row("removed", col([](const PatchRecord& r, auto& v) { v.push_back(r.metrics.removed); })));
    t.rows.push_back(summary_row("modified", col([](const PatchRecord& r, auto& v) { v.push_back(r.metrics.modified); })));
    t.rows.push_back(summary_row("chunks", col([](const PatchRecord& r, auto& v) { v.push_back(r.metrics.chunks); })));
    t.rows.push_back(summary_row("spreading", col([](const PatchRecord& r, auto& v) { v.push_back(r.metrics.spreading); })));
    t.rows.push_back(summary_row("files", col([](const PatchRecord& r, auto& v) { v.push_back(r.metrics.files); })));
    auto cls = col([](const PatchRecord& r, auto& v) {
        if (r.metrics.classes) v.push_back(*r.metrics.classes);
    });
    if (!cls.empty()) t.rows.push_back(summary_row("classes", cls));
    auto mth = col([](const PatchRecord& r, auto& v) {
        if (r.metrics.methods) v.push_back(*r.metrics.methods);
    });
    if (!mth.empty()) t.rows.push_back(summary_row("methods", mth));
    return t;
}

inline constexpr std::array<const char*, 7> kVennRegions = {"A", "R", "M", "AR", "AM", "RM", "ARM"};

struct VennSummary {
    std::map<std::string, int> regions;  // all seven present
    int total = 0;
    int at(const std::string& k) const {
        auto it = regions.find(k);
        return it == regions.end() ? 0 : it->second;
    }
};

inline VennSummary venn_summary(const std::vector<PatchRecord>& records) {
    VennSummary v;
    for (auto k : kVennRegions) v.regions[k] = 0;
    for (const auto& r : records) {
        const auto p = change_profile(r.metrics);
        if (p.empty()) continue;  // empty patch
        ++v.regions[p];
        ++v.total;
    }
    return v;
}

struct BoxStats {
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
    double whisker_low = 0, whisker_high = 0;
    std::vector<double> outliers;  // sorted
};

/// Tukey box: whiskers reach the furthest points within 1.5 IQR of the box.
inline BoxStats distribution_summary(const std::vector<double>& sample) {
    if (sample.empty()) throw std::invalid_argument("distribution of an empty sample");
    BoxStats b;
    auto v = sample;
    std::sort(v.begin(), v.end());
    b.min = v.front();
    b.max = v.back();
    b.q1 = percentile(v, 0.25);
    b.median = percentile(v, 0.5);
    b.q3 = percentile(v, 0.75);
    const double iqr = b.q3 - b.q1;
    const double lo = b.q1 - 1.5 * iqr, hi = b.q3 + 1.5 * iqr;
    b.whisker_low = b.q1;
    b.whisker_high = b.q3;
    for (double x : v) {
        if (x < lo || x > hi) {
            b.outliers.push_back(x);
            continue;
        }
        b.whisker_low = std::min(b.whisker_low, x);
        b.whisker_high = std::max(b.whisker_high, x);
    }
    return b;
}

/// Distinct actions per patch.
inline std::vector<double> action_counts(const std::vector<PatchRecord>& records) {
    std::vector<double> v;
    for (const auto& r : records) v.push_back(static_cast<double>(r.action_set().size()));
    return v;
}

/// Distinct patterns (not variants) per patch.
inline std::vector<double> pattern_counts(const std::vector<PatchRecord>& records) {
    std::vector<double> v;
    for (const auto& r : records) v.push_back(static_cast<double>(r.pattern_set().size()));
    return v;
}

inline std::vector<std::pair<std::string, int>> action_rank(const std::vector<PatchRecord>& records) {
    std::vector<std::set<std::string>> sets;
    for (const auto& r : records) sets.push_back(r.action_set());
    return action_rank(sets);
}

inline std::vector<std::pair<std::string, int>> pattern_rank(const std::vector<PatchRecord>& records) {
    std::vector<std::set<Pattern>> sets;
    for (const auto& r : records) sets.push_back(r.pattern_set());
    return pattern_rank(sets);
}

inline std::map<std::string, std::map<std::string, int>> pattern_action_composition(const std::vector<PatchRecord>& records) {
    std::vector<std::pair<std::set<std::string>, std::set<Pattern>>> rows;
    for (const auto& r : records) rows.emplace_back(r.action_set(), r.pattern_set());
    return pattern_action_composition(rows);
}

/// Bugs that Defects4J lists twice with the same fix; the later id is dropped.
inline const std::vector<std::string>& duplicate_bugs() {
    static const std::vector<std::string> d = {"Closure-63", "Closure-93"};
    return d;
}

inline std::vector<PatchRecord> dedup_records(std::vector<PatchRecord> records) {
    const auto& d = duplicate_bugs();
    std::erase_if(records, [&](const PatchRecord& r) { return std::find(d.begin(), d.end(), r.id()) != d.end(); });
    return records;
}

// ---- output ------------------------------------------------------------------

inline Json to_json(const SummaryTable& t) {
    Json j = Json::object();
    for (const auto& r : t.rows) {
        Json row = Json::object();
        for (std::size_t i = 0; i < r.values.size(); ++i) row[kTableHeaders[i]] = r.values[i];
        j[r.metric] = std::move(row);
    }
    return j;
}

inline Json to_json(const VennSummary& v) {
    Json j = Json::object();
    for (auto k : kVennRegions) j[k] = v.at(k);
    j["total"] = v.total;
    return j;
}

inline Json to_json(const BoxStats& b) {
    return Json{{"min", b.min},
                {"q1", b.q1},
                {"median", b.median},
                {"q3", b.q3},
                {"max", b.max},
                {"whiskerLow", b.whisker_low},
                {"whiskerHigh", b.whisker_high},
                {"outliers", b.outliers}};
}

inline Json rank_to_json(const std::vector<std::pair<std::string, int>>& rank) {
    Json arr = Json::array();
    for (const auto& [k, n] : rank) arr.push_back(Json{{"name", k}, {"patches", n}});
    return arr;
}

/// Corpus aggregates; null for an empty corpus.
inline Json aggregates_to_json(const std::vector<PatchRecord>& records) {
    if (records.empty()) return nullptr;
    Json j;
    j["patches"] = records.size();
    j["table"] = to_json(percentile_table(records));
    j["venn"] = to_json(venn_summary(records));
    j["actionRank"] = rank_to_json(action_rank(records));
    j["patternRank"] = rank_to_json(pattern_rank(records));
    j["actionsPerPatch"] = to_json(distribution_summary(action_counts(records)));
    j["patternsPerPatch"] = to_json(distribution_summary(pattern_counts(records)));
    Json comp = Json::object();
    for (const auto& [p, row] : pattern_action_composition(records)) comp[p] = row;
    j["composition"] = std::move(comp);
    return j;
}

inline std::string format_number(double x) {
    char buf[32];
    if (std::abs(x - std::round(x)) < 1e-9) std::snprintf(buf, sizeof buf, "%.0f", x);
    else std::snprintf(buf, sizeof buf, "%.2f", x);
    std::string s = buf;
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
    }
    return s;
}

inline std::string pad(std::string s, std::size_t w, bool left = false) {
    if (s.size() >= w) return s;
    return left ? s + std::string(w - s.size(), ' ') : std::string(w - s.size(), ' ') + s;
}

inline std::string render_table(const SummaryTable& t) {
    std::string out = pad("", 10, true);
    for (auto h : kTableHeaders) out += pad(h, 8);
    out += "\n";
    for (const auto& r : t.rows) {
        out += pad(r.metric, 10, true);
        for (double v : r.values) out += pad(format_number(v), 8);
        out += "\n";
    }
    return out;
}

inline std::string render_venn(const VennSummary& v) {
    std::string out;
    for (auto k : kVennRegions) out += pad(k, 4, true) + pad(std::to_string(v.at(k)), 6) + "\n";
    out += pad("all", 4, true) + pad(std::to_string(v.total), 6) + "\n";
    return out;
}

inline std::string render_rank(const std::vector<std::pair<std::string, int>>& rank) {
    std::string out;
    for (const auto& [k, n] : rank) out += pad(k, 18, true) + pad(std::to_string(n), 6) + "\n";
    return out;
}

inline std::string render_box(const std::string& name, const BoxStats& b) {
    std::string out = name + ": min " + format_number(b.min) + "  whisker " + format_number(b.whisker_low) + "  q1 " +
                      format_number(b.q1) + "  median " + format_number(b.median) + "  q3 " + format_number(b.q3) +
                      "  whisker " + format_number(b.whisker_high) + "  max " + format_number(b.max) + "  outliers " +
                      std::to_string(b.outliers.size()) + "\n";
    return out;
}

}  // namespace dissect
