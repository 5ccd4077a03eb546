#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dissect/diff.hpp"
#include "dissect/sources.hpp"

namespace dissect {

struct SizeMetrics {
    int added = 0;
    int removed = 0;
    int modified = 0;
    int patch_size = 0;
    friend bool operator==(const SizeMetrics&, const SizeMetrics&) = default;
};

struct PatchMetrics {
    int added = 0;
    int removed = 0;
    int modified = 0;
    int patch_size = 0;
    int chunks = 0;
    int spreading = 0;
    int files = 0;
    std::optional<int> classes;  // unknown without source text
    std::optional<int> methods;
    friend bool operator==(const PatchMetrics&, const PatchMetrics&) = default;
};

inline SizeMetrics size_metrics(const PatchDiff& patch) {
    SizeMetrics m;
    for (const auto& f : patch.files) {
        for (const auto& l : f.lines) {
            switch (l.kind) {
                case ChangeKind::Added: ++m.added; break;
                case ChangeKind::Removed: ++m.removed; break;
                case ChangeKind::Modified: ++m.modified; break;
            }
        }
    }
    m.patch_size = m.added + m.removed + m.modified;
    return m;
}

/// Venn region of a patch: which of added / removed / modified are present.
inline std::string change_profile(int added, int removed, int modified) {
    std::string s;
    if (added > 0) s += 'A';
    if (removed > 0) s += 'R';
    if (modified > 0) s += 'M';
    return s;
}

inline std::string change_profile(const SizeMetrics& m) { return change_profile(m.added, m.removed, m.modified); }
inline std::string change_profile(const PatchMetrics& m) { return change_profile(m.added, m.removed, m.modified); }

inline int chunk_count(const PatchDiff& patch) {
    int n = 0;
    for (const auto& f : patch.files) n += static_cast<int>(detect_chunks(f).size());
    return n;
}

struct SpreadingResult {
    int value = 0;
    bool fallback = false;  // some gap was counted without a noise mask
};

/// Unchanged CODE lines strictly between consecutive chunks of each file,
/// summed over files. Gaps are measured in the fixed version; a deleted
/// file has only its buggy version, so that one is used instead.
inline SpreadingResult chunk_spreading(const PatchDiff& patch, const SourceMap& sources) {
    SpreadingResult r;
    for (const auto& f : patch.files) {
        const auto chunks = detect_chunks(f);
        if (chunks.size() < 2) continue;
        const FileSources* src = find_sources(sources, f.path);
        const bool use_old = f.deleted;
        const SourceContext* ctx = nullptr;
        if (src) ctx = use_old ? (src->old_ctx ? &*src->old_ctx : nullptr) : (src->new_ctx ? &*src->new_ctx : nullptr);
        for (std::size_t i = 0; i + 1 < chunks.size(); ++i) {
            const int from = use_old ? chunks[i].old_after : chunks[i].new_after;
            const int to = use_old ? chunks[i + 1].old_before : chunks[i + 1].new_before;
            for (int line = from; line <= to; ++line) {
                if (!ctx) {
                    ++r.value;
                    r.fallback = true;
                } else if (ctx->noise_mask.at(line) == LineClass::Code) {
                    ++r.value;
                }
            }
        }
    }
    return r;
}

struct LocationCounts {
    int files = 0;
    std::optional<int> classes;
    std::optional<int> methods;
    std::vector<std::string> class_keys;
    std::vector<std::string> method_keys;
};

inline bool is_source_file(const std::string& path, const LanguageConfig& cfg = java_config()) {
    return ends_with(path, cfg.source_extension);
}

/// Files, classes and methods touched by the patch. A removed line is
/// located in the buggy version, added and modified lines in the fixed one;
/// each line is charged to its innermost class and method.
inline LocationCounts location_counts(const PatchDiff& patch, const SourceMap& sources,
                                      const LanguageConfig& cfg = java_config()) {
    LocationCounts out;
    std::set<std::string> classes, methods;
    bool known = true;
    for (const auto& f : patch.files) {
        if (!is_source_file(f.path, cfg)) continue;
        ++out.files;
        const FileSources* src = find_sources(sources, f.path);
        for (const auto& l : f.lines) {
            const bool old_side = l.kind == ChangeKind::Removed;
            const SourceContext* ctx = nullptr;
            if (src) ctx = old_side ? (src->old_ctx ? &*src->old_ctx : nullptr) : (src->new_ctx ? &*src->new_ctx : nullptr);
            if (!ctx) {
                known = false;
                continue;
            }
            const int line = old_side ? *l.old_line : *l.new_line;
            if (ctx->noise_mask.at(line) != LineClass::Code) continue;
            if (int c = ctx->class_at(line); c >= 0) classes.insert(f.path + ":" + ctx->class_spans[static_cast<std::size_t>(c)].key);
            if (int m = ctx->method_at(line); m >= 0) methods.insert(f.path + ":" + ctx->method_spans[static_cast<std::size_t>(m)].key);
        }
    }
    out.class_keys.assign(classes.begin(), classes.end());
    out.method_keys.assign(methods.begin(), methods.end());
    if (known) {
        out.classes = static_cast<int>(classes.size());
        out.methods = static_cast<int>(methods.size());
    }
    return out;
}

struct MetricsResult {
    PatchMetrics metrics;
    std::vector<std::string> diagnostics;
};

inline MetricsResult compute_metrics(const PatchDiff& patch, const SourceMap& sources,
                                     const LanguageConfig& cfg = java_config()) {
    MetricsResult r;
    const auto size = size_metrics(patch);
    r.metrics.added = size.added;
    r.metrics.removed = size.removed;
    r.metrics.modified = size.modified;
    r.metrics.patch_size = size.patch_size;
    r.metrics.chunks = chunk_count(patch);
    const auto spread = chunk_spreading(patch, sources);
    r.metrics.spreading = spread.value;
    if (spread.fallback) r.diagnostics.push_back("spreadingFallback: no source mask, all gap lines counted");
    const auto loc = location_counts(patch, sources, cfg);
    r.metrics.files = loc.files;
    r.metrics.classes = loc.classes;
    r.metrics.methods = loc.methods;
    if (!loc.classes) r.diagnostics.push_back("missingSources: classes and methods not computed");
    return r;
}

}  // namespace dissect
