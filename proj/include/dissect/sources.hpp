#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dissect/source_scan.hpp"

namespace dissect {

/// Buggy and fixed versions of one file, when available. A file created by
/// the patch has no old text; a deleted one has no new text.
struct FileSources {
    std::optional<std::string> old_text;
    std::optional<std::string> new_text;
    std::optional<SourceContext> old_ctx;
    std::optional<SourceContext> new_ctx;
};

/// Keyed by the path used in the FileDiff.
using SourceMap = std::map<std::string, FileSources>;

inline FileSources make_sources(const std::string& path, std::optional<std::string> old_text,
                                std::optional<std::string> new_text, const LanguageConfig& cfg = java_config()) {
    FileSources s;
    if (old_text) s.old_ctx = scan_source(path, *old_text, cfg);
    if (new_text) s.new_ctx = scan_source(path, *new_text, cfg);
    s.old_text = std::move(old_text);
    s.new_text = std::move(new_text);
    return s;
}

inline const FileSources* find_sources(const SourceMap& m, const std::string& path) {
    auto it = m.find(path);
    return it == m.end() ? nullptr : &it->second;
}

}  // namespace dissect
