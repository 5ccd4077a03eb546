#pragma once

#include <filesystem>
#include <string>

#include "dissect/dissect.hpp"

namespace testing_support {

inline std::filesystem::path fixtures() { return DISSECT_FIXTURES; }

inline std::string fixture_text(const std::string& rel) { return dissect::read_file((fixtures() / rel).string()); }

inline dissect::PatchDiff fixture_patch(const std::string& name) {
    return dissect::parse_unified_diff(fixture_text("patches/" + name + ".diff"), name);
}

/// Record for a fixture diff, with no source text.
inline dissect::PatchRecord dissect_fixture(const std::string& name) {
    auto [project, bug] = dissect::split_patch_id(name);
    return dissect::dissect(project, bug, fixture_patch(name), {});
}

/// Closure-40 with its buggy and fixed trees.
inline dissect::ManifestEntry closure40_entry() {
    dissect::ManifestEntry e;
    e.project = "Closure";
    e.bug_id = "40";
    e.diff = fixtures() / "patches/closure-40.diff";
    e.buggy = fixtures() / "trees/closure-40/buggy";
    e.fixed = fixtures() / "trees/closure-40/fixed";
    return e;
}

}  // namespace testing_support

namespace testing_support {

/// Hand-built record; tags carry no sites.
inline dissect::PatchRecord make_record(const std::string& id, int added, int removed, int modified,
                                        std::vector<std::string> actions = {}, std::vector<std::string> variants = {}) {
    dissect::PatchRecord r;
    std::tie(r.project, r.bug_id) = dissect::split_patch_id(id);
    r.metrics.added = added;
    r.metrics.removed = removed;
    r.metrics.modified = modified;
    r.metrics.patch_size = added + removed + modified;
    r.metrics.chunks = 1;
    r.metrics.files = 1;
    r.change_profile = dissect::change_profile(r.metrics);
    for (const auto& a : actions) {
        auto info = dissect::find_action(a);
        r.actions.push_back({a, info->group, info->type, {}});
    }
    for (const auto& v : variants) r.patterns.push_back({*dissect::pattern_of_variant(v), v, {}});
    return r;
}

}  // namespace testing_support
