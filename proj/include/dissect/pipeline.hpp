#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "dissect/analysis.hpp"
#include "dissect/record.hpp"
#include "dissect/stats.hpp"

namespace dissect {

namespace fs = std::filesystem;

/// One patch to dissect: a diff file, a pair of trees, or both (the trees
/// then only supply source text for masks and declarations).
struct ManifestEntry {
    std::string project;
    std::string bug_id;
    std::optional<fs::path> diff;
    std::optional<fs::path> buggy;
    std::optional<fs::path> fixed;

    std::string id() const { return project + "-" + bug_id; }
};

struct Manifest {
    std::vector<ManifestEntry> entries;
    LanguageConfig language = java_config();
};

class ManifestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Entry-level failure; the corpus run records it and moves on.
class EntryFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Accepts a JSON list of entries, or {"sourceExtension": ..., "entries": [...]}.
/// Relative paths resolve against `base`.
inline Manifest parse_manifest(const Json& doc, const fs::path& base = {}) {
    Manifest m;
    const Json* list = &doc;
    if (doc.is_object()) {
        for (const auto& [k, v] : doc.items())
            if (k != "entries" && k != "sourceExtension") throw ManifestError("unrecognized manifest field '" + k + "'");
        if (!doc.contains("entries")) throw ManifestError("manifest object without 'entries'");
        list = &doc.at("entries");
        if (doc.contains("sourceExtension")) m.language.source_extension = doc.at("sourceExtension").get<std::string>();
    }
    if (!list->is_array()) throw ManifestError("manifest must be a list of entries");
    auto resolve = [&](const Json& e, const char* key) -> std::optional<fs::path> {
        if (!e.contains(key)) return std::nullopt;
        fs::path p = e.at(key).get<std::string>();
        return p.is_absolute() || base.empty() ? p : base / p;
    };
    std::set<std::string> ids;
    for (const auto& e : *list) {
        if (!e.is_object()) throw ManifestError("manifest entry must be an object");
        for (const auto& [k, v] : e.items())
            if (k != "id" && k != "project" && k != "bugId" && k != "diff" && k != "buggy" && k != "fixed")
                throw ManifestError("unrecognized entry field '" + k + "'");
        ManifestEntry me;
        try {
            if (e.contains("project")) {
                me.project = e.at("project").get<std::string>();
                me.bug_id = detail::json_scalar_string(e.at("bugId"));
            } else if (e.contains("id")) {
                std::tie(me.project, me.bug_id) = split_patch_id(e.at("id").get<std::string>());
            } else {
                throw ManifestError("entry needs 'id' or 'project' + 'bugId'");
            }
            me.diff = resolve(e, "diff");
            me.buggy = resolve(e, "buggy");
            me.fixed = resolve(e, "fixed");
        } catch (const nlohmann::json::exception& ex) {
            throw ManifestError(std::string("bad manifest entry: ") + ex.what());
        }
        if (!me.diff && !(me.buggy && me.fixed)) throw ManifestError(me.id() + ": needs 'diff' or 'buggy' + 'fixed'");
        if (me.buggy.has_value() != me.fixed.has_value()) throw ManifestError(me.id() + ": 'buggy' and 'fixed' go together");
        if (!ids.insert(me.id()).second) throw ManifestError("duplicate entry " + me.id());
        m.entries.push_back(std::move(me));
    }
    return m;
}

inline Manifest load_manifest(const fs::path& path) {
    std::string text;
    try {
        text = read_file(path.string());
    } catch (const std::exception& e) {
        throw ManifestError(e.what());
    }
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ManifestError(path.string() + ": " + e.what());
    }
    return parse_manifest(doc, path.parent_path());
}

namespace detail {

inline std::optional<std::string> read_optional(const fs::path& p) {
    std::error_code ec;
    if (!fs::is_regular_file(p, ec)) return std::nullopt;
    return read_file(p.string());
}

inline std::set<std::string> source_files_under(const fs::path& root, const LanguageConfig& cfg) {
    std::set<std::string> out;
    std::error_code ec;
    if (!fs::is_directory(root, ec)) throw EntryFailure("not a directory: " + root.string());
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (!e.is_regular_file()) continue;
        auto rel = fs::relative(e.path(), root).generic_string();
        if (is_source_file(rel, cfg)) out.insert(rel);
    }
    return out;
}

}  // namespace detail

/// Diff and sources of a buggy/fixed tree pair; only source files are read.
inline std::pair<PatchDiff, SourceMap> diff_trees(const fs::path& buggy, const fs::path& fixed, const std::string& id,
                                                  const LanguageConfig& cfg = java_config()) {
    auto files = detail::source_files_under(buggy, cfg);
    files.merge(detail::source_files_under(fixed, cfg));
    PatchDiff patch;
    patch.patch_id = id;
    SourceMap sources;
    for (const auto& rel : files) {
        auto old_text = detail::read_optional(buggy / rel);
        auto new_text = detail::read_optional(fixed / rel);
        auto fd = diff_file_pair(old_text.value_or(""), new_text.value_or(""), rel);
        if (fd.hunks.empty()) continue;
        fd.created = !old_text;
        fd.deleted = !new_text;
        patch.files.push_back(std::move(fd));
        sources.emplace(rel, make_sources(rel, std::move(old_text), std::move(new_text), cfg));
    }
    return {std::move(patch), std::move(sources)};
}

/// Runs the whole pipeline on an already-parsed patch.
inline PatchRecord dissect(const std::string& project, const std::string& bug_id, PatchDiff patch, const SourceMap& sources,
                           const LanguageConfig& cfg = java_config()) {
    PatchRecord r;
    r.project = project;
    r.bug_id = bug_id;
    for (const auto& w : patch.warnings) r.diagnostics.push_back(w);
    std::erase_if(patch.files, [&](const FileDiff& f) {
        if (is_source_file(f.path, cfg)) return false;
        r.diagnostics.push_back("nonSourceFile: " + f.path);
        return true;
    });
    if (std::none_of(patch.files.begin(), patch.files.end(), [](const FileDiff& f) { return !f.lines.empty(); }))
        throw EntryFailure("empty diff");
    auto m = compute_metrics(patch, sources, cfg);
    r.metrics = m.metrics;
    r.change_profile = change_profile(r.metrics);
    for (auto& d : m.diagnostics) r.diagnostics.push_back(std::move(d));
    for (const auto& f : patch.files) {
        const auto* src = find_sources(sources, f.path);
        if (!src) continue;
        if (src->old_ctx)
            for (const auto& d : src->old_ctx->diagnostics) r.diagnostics.push_back("buggy: " + d);
        if (src->new_ctx)
            for (const auto& d : src->new_ctx->diagnostics) r.diagnostics.push_back("fixed: " + d);
    }
    const auto pa = analyze_patch(patch, sources, cfg);
    auto actions = detect_actions(pa);
    auto patterns = detect_patterns(pa, actions, r.metrics.patch_size);
    r.actions = std::move(actions.tags);
    r.patterns = std::move(patterns.tags);
    r.diff = render_unified_diff(patch);
    return r;
}

inline PatchRecord dissect_patch(const ManifestEntry& e, const LanguageConfig& cfg = java_config()) {
    try {
        if (e.diff) {
            const auto text = read_file(e.diff->string());
            PatchDiff patch = parse_unified_diff(text, e.id());
            SourceMap sources;
            if (e.buggy && e.fixed) {
                for (const auto& f : patch.files) {
                    if (!is_source_file(f.path, cfg)) continue;
                    auto old_text = f.created ? std::nullopt
                                              : detail::read_optional(*e.buggy / (f.old_path.empty() ? f.path : f.old_path));
                    auto new_text = f.deleted ? std::nullopt : detail::read_optional(*e.fixed / f.path);
                    sources.emplace(f.path, make_sources(f.path, std::move(old_text), std::move(new_text), cfg));
                }
            }
            return dissect(e.project, e.bug_id, std::move(patch), sources, cfg);
        }
        auto [patch, sources] = diff_trees(*e.buggy, *e.fixed, e.id(), cfg);
        return dissect(e.project, e.bug_id, std::move(patch), sources, cfg);
    } catch (const EntryFailure&) {
        throw;
    } catch (const std::exception& ex) {
        throw EntryFailure(ex.what());
    }
}

struct CorpusResult {
    std::vector<PatchRecord> records;
    std::vector<EntryError> errors;
};

/// Dissects every entry on `jobs` threads. Output order depends only on
/// the entries, never on scheduling.
inline CorpusResult dissect_corpus(const Manifest& m, unsigned jobs = 0) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n = m.entries.size();
    std::vector<std::optional<PatchRecord>> slots(n);
    std::vector<std::optional<std::string>> failures(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                slots[i] = dissect_patch(m.entries[i], m.language);
            } catch (const std::exception& ex) {
                failures[i] = ex.what();
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned k = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(n, 1)));
    for (unsigned t = 1; t < k; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    CorpusResult out;
    for (std::size_t i = 0; i < n; ++i) {
        if (slots[i]) out.records.push_back(std::move(*slots[i]));
        else out.errors.push_back({m.entries[i].id(), failures[i].value_or("unknown error")});
    }
    std::stable_sort(out.records.begin(), out.records.end(),
                     [](const PatchRecord& a, const PatchRecord& b) { return record_less(a, b); });
    std::stable_sort(out.errors.begin(), out.errors.end(), [](const EntryError& a, const EntryError& b) {
        auto [pa, ba] = split_patch_id(a.id);
        auto [pb, bb] = split_patch_id(b.id);
        return record_less(pa, ba, pb, bb);
    });
    return out;
}

inline Json corpus_to_json(const std::vector<PatchRecord>& records, const std::vector<EntryError>& errors) {
    Json doc;
    doc["schemaVersion"] = kSchemaVersion;
    Json recs = Json::array();
    for (const auto& r : records) recs.push_back(to_json(r));
    doc["records"] = std::move(recs);
    Json errs = Json::array();
    for (const auto& e : errors) errs.push_back(Json{{"id", e.id}, {"message", e.message}});
    doc["errors"] = std::move(errs);
    doc["aggregates"] = aggregates_to_json(records);
    return doc;
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace dissect
