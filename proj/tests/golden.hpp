#pragma once

// Hand-derived expectations for the fixture diffs (expected.json) and the
// checked-in corpus output (golden/records.json).

#include <optional>
#include <string>
#include <vector>

#include "support.hpp"

namespace golden {

using namespace dissect;

struct Expectation {
    std::string id;
    std::string diff;  // relative to the fixture root
    std::vector<std::string> actions;
    std::vector<std::string> patterns;  // variants
    int added = 0, removed = 0, modified = 0, chunks = 0;
};

inline std::vector<Expectation> expectations() {
    std::vector<Expectation> out;
    for (const auto& e : Json::parse(testing_support::fixture_text("expected.json"))) {
        Expectation x;
        x.id = e.at("id").get<std::string>();
        x.diff = e.at("diff").get<std::string>();
        x.actions = e.at("actions").get<std::vector<std::string>>();
        x.patterns = e.at("patterns").get<std::vector<std::string>>();
        x.added = e.at("added").get<int>();
        x.removed = e.at("removed").get<int>();
        x.modified = e.at("modified").get<int>();
        x.chunks = e.at("chunks").get<int>();
        out.push_back(std::move(x));
    }
    return out;
}

inline std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
    return "{" + s + "}";
}

/// Empty when the record matches, else what differs.
inline std::string mismatch(const Expectation& x) {
    auto [project, bug] = split_patch_id(x.id);
    const auto text = testing_support::fixture_text(x.diff);
    const auto r = dissect::dissect(project, bug, parse_unified_diff(text, x.id), {});
    std::vector<std::string> acts, pats;
    for (const auto& a : r.action_set()) acts.push_back(a);
    for (const auto& p : r.variant_set()) pats.push_back(p);
    std::string why;
    if (acts != x.actions) why += " actions " + join(acts) + " want " + join(x.actions);
    if (pats != x.patterns) why += " patterns " + join(pats) + " want " + join(x.patterns);
    const auto& m = r.metrics;
    if (m.added != x.added || m.removed != x.removed || m.modified != x.modified || m.chunks != x.chunks)
        why += " counts " + std::to_string(m.added) + "/" + std::to_string(m.removed) + "/" + std::to_string(m.modified) + "/" +
               std::to_string(m.chunks);
    return why;
}

/// The manifest run must print exactly the checked-in document.
inline bool corpus_matches_golden() {
    const auto m = load_manifest(testing_support::fixtures() / "manifest.json");
    const auto r = dissect_corpus(m);
    return dump_json(corpus_to_json(r.records, r.errors)) == testing_support::fixture_text("golden/records.json");
}

}  // namespace golden
