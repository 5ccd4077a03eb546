#include <gtest/gtest.h>

#include <map>
#include <set>

#include "support.hpp"

using namespace dissect;
using testing_support::fixture_patch;
using testing_support::fixture_text;

namespace {

struct Tagged {
    ActionReport actions;
    PatternReport patterns;
};

Tagged tag(const PatchDiff& p, const PatternOptions& opt = {}) {
    auto pa = analyze_patch(p, {});
    auto a = detect_actions(pa);
    auto pt = detect_patterns(pa, a, size_metrics(p).patch_size, opt);
    return {std::move(a), std::move(pt)};
}

std::vector<std::string> fixture_names() {
    std::vector<std::string> out;
    auto doc = Json::parse(fixture_text("expected.json"));
    for (const auto& e : doc) {
        auto d = e.at("diff").get<std::string>();
        out.push_back(d.substr(8, d.size() - 8 - 5));  // patches/<name>.diff
    }
    return out;
}

std::vector<PatchRecord> fixture_records() {
    std::vector<PatchRecord> out;
    for (const auto& n : fixture_names()) out.push_back(testing_support::dissect_fixture(n));
    return out;
}

}  // namespace

TEST(Actions, EmptyPatchHasNoTags) {
    auto t = tag(parse_unified_diff(""));
    EXPECT_TRUE(t.actions.tags.empty());
    EXPECT_TRUE(t.patterns.tags.empty());
    EXPECT_FALSE(t.patterns.classified);
}

TEST(Actions, Chart1ConditionFlip) {
    auto t = tag(fixture_patch("chart-1"));
    EXPECT_EQ(t.actions.acronyms(), (std::set<std::string>{"cndM"}));
    ASSERT_EQ(t.actions.tags[0].sites.size(), 1u);
    EXPECT_EQ(t.actions.tags[0].sites[0].line, 1797);
    EXPECT_EQ(t.actions.tags[0].sites[0].side, Side::New);
    EXPECT_EQ(t.actions.tags[0].group, ActionGroup::Conditional);
    EXPECT_EQ(t.actions.tags[0].action, ActionType::Modification);
}

TEST(Actions, Closure40) {
    auto t = tag(fixture_patch("closure-40"));
    EXPECT_TRUE(t.actions.has("mcM"));
    EXPECT_TRUE(t.actions.has("cndR"));
    EXPECT_TRUE(t.patterns.has(Pattern::ConstantChange));
    EXPECT_TRUE(t.patterns.has_variant("unwrapIf"));
}

TEST(Actions, TagsComeFromTheTaxonomy) {
    for (const auto& n : fixture_names()) {
        SCOPED_TRACE(n);
        auto t = tag(fixture_patch(n));
        std::size_t last = 0;
        for (const auto& a : t.actions.tags) {
            auto info = find_action(a.acronym);
            ASSERT_TRUE(info);
            EXPECT_EQ(info->group, a.group);
            EXPECT_EQ(info->type, a.action);
            EXPECT_FALSE(a.sites.empty());
            std::size_t pos = 0;
            while (kActions[pos].acronym != a.acronym) ++pos;
            EXPECT_GE(pos + 1, last);
            last = pos + 1;
        }
        for (const auto& p : t.patterns.tags) {
            auto pat = pattern_of_variant(p.variant);
            ASSERT_TRUE(pat);
            EXPECT_EQ(*pat, p.pattern);
        }
        EXPECT_EQ(t.patterns.classified, !t.patterns.tags.empty());
    }
}

TEST(Actions, DirectionFollowsLineKinds) {
    // no removed or modified line -> no removal; no added or modified line -> no addition
    for (const auto& n : fixture_names()) {
        SCOPED_TRACE(n);
        auto p = fixture_patch(n);
        auto m = size_metrics(p);
        auto t = tag(p);
        for (const auto& a : t.actions.tags) {
            if (m.removed == 0 && m.modified == 0) EXPECT_NE(a.action, ActionType::Removal) << a.acronym;
            if (m.added == 0 && m.modified == 0) EXPECT_NE(a.action, ActionType::Addition) << a.acronym;
        }
    }
}

TEST(Actions, AllAddedBlockHasNoRemovals) {
    const std::string text =
        "--- a/X.java\n+++ b/X.java\n@@ -1,3 +1,6 @@\n class X {\n   int f(int a) {\n"
        "+    if (a < 0) {\n+      throw new IllegalArgumentException();\n+    }\n     return a;\n";
    auto t = tag(parse_unified_diff(text));
    for (const auto& a : t.actions.tags) EXPECT_NE(a.action, ActionType::Removal) << a.acronym;
    EXPECT_TRUE(t.actions.has("cndA"));
    EXPECT_TRUE(t.actions.has("exA"));
    EXPECT_TRUE(t.patterns.has_variant("condBlockExcAdd"));
}

TEST(Actions, ReversedDiffSwapsAdditionAndRemoval) {
    for (const char* n : {"lang-45", "closure-5", "time-15", "closure-11"}) {
        SCOPED_TRACE(n);
        auto fwd = tag(fixture_patch(n)).actions.acronyms();
        auto rev = tag(reverse_diff(fixture_patch(n))).actions.acronyms();
        std::set<std::string> flipped;
        for (auto a : fwd) {
            const char last = a.back();
            if (last == 'A') a.back() = 'R';
            else if (last == 'R') a.back() = 'A';
            flipped.insert(a);
        }
        EXPECT_EQ(rev, flipped);
    }
}

TEST(Actions, RankMatchesBruteForceTally) {
    auto recs = fixture_records();
    std::map<std::string, int> tally;
    for (const auto& r : recs)
        for (const auto& a : r.action_set()) ++tally[a];
    auto rank = action_rank(recs);
    ASSERT_EQ(rank.size(), tally.size());
    for (std::size_t i = 0; i < rank.size(); ++i) {
        EXPECT_EQ(rank[i].second, tally[rank[i].first]);
        if (i) EXPECT_GE(rank[i - 1].second, rank[i].second);
    }
}

TEST(Patterns, ReversedDiffInvertsWrapping) {
    for (const char* n : {"time-3", "try-wrap", "closure-40", "closure-9", "math-105"}) {
        SCOPED_TRACE(n);
        auto fwd = tag(fixture_patch(n)).patterns;
        auto rev = tag(reverse_diff(fixture_patch(n))).patterns;
        int checked = 0;
        for (const auto& t : fwd.tags) {
            if (t.pattern != Pattern::WrapsWith) continue;
            EXPECT_TRUE(rev.has_variant(inverse_variant(t.variant))) << t.variant;
            EXPECT_FALSE(rev.has_variant(t.variant)) << t.variant;
            ++checked;
        }
        EXPECT_GT(checked, 0);
    }
}

TEST(Patterns, InverseVariantNames) {
    EXPECT_EQ(inverse_variant("wrapsIfElse"), "unwrapIfElse");
    EXPECT_EQ(inverse_variant("unwrapMethod"), "wrapsMethod");
    EXPECT_EQ(inverse_variant("singleLine"), "singleLine");
    for (const auto& v : kVariants)
        if (v.pattern == Pattern::WrapsWith) EXPECT_TRUE(pattern_of_variant(inverse_variant(v.name)));
}

TEST(Patterns, Implications) {
    for (const auto& n : fixture_names()) {
        SCOPED_TRACE(n);
        auto t = tag(fixture_patch(n));
        const auto& a = t.actions;
        for (const char* v : {"condBlockExcAdd", "condBlockRetAdd", "condBlockOthersAdd", "wrapsIf", "wrapsIfElse"})
            if (t.patterns.has_variant(v)) EXPECT_TRUE(a.has("cndA")) << v;
        if (t.patterns.has_variant("condBlockRem") || t.patterns.has_variant("unwrapIf")) EXPECT_TRUE(a.has("cndR"));
        if (t.patterns.has_variant("condBlockExcAdd")) EXPECT_TRUE(a.has("exA"));
        if (t.patterns.has_variant("condBlockRetAdd")) EXPECT_TRUE(a.has("retA"));
        if (t.patterns.has_variant("wrapsTryCatch")) EXPECT_TRUE(a.has("exA"));
        if (t.patterns.has(Pattern::MissingNullCheck)) EXPECT_TRUE(a.has("cndA") || a.has("cndM"));
        if (t.patterns.has_variant("wrongMethodRef")) EXPECT_TRUE(a.has("mcM"));
        if (t.patterns.has_variant("wrongVarRef")) EXPECT_TRUE(a.has("varM"));
        if (t.patterns.has_variant("singleLine")) EXPECT_LE(size_metrics(fixture_patch(n)).patch_size, 2);
    }
}

TEST(Patterns, CopyPasteGrowsAsThresholdDrops) {
    PatternOptions loose;
    loose.copy_paste_jaccard = 0.5;
    int strict_hits = 0;
    for (const auto& n : fixture_names()) {
        SCOPED_TRACE(n);
        auto p = fixture_patch(n);
        const bool strict = tag(p).patterns.has(Pattern::CopyPaste);
        const bool lax = tag(p, loose).patterns.has(Pattern::CopyPaste);
        if (strict) EXPECT_TRUE(lax);
        strict_hits += strict;
    }
    EXPECT_GE(strict_hits, 1);
}

TEST(Patterns, UnclassifiedPatches) {
    for (const char* n : {"loop-add", "method-add"}) {
        auto t = tag(fixture_patch(n));
        EXPECT_FALSE(t.patterns.classified) << n;
        EXPECT_FALSE(t.actions.tags.empty()) << n;
    }
}

TEST(Patterns, RankAndCompositionMatchBruteForce) {
    auto recs = fixture_records();
    std::map<std::string, int> tally;
    std::map<std::string, std::map<std::string, int>> comp;
    for (const auto& r : recs) {
        auto pats = r.pattern_set();
        std::vector<std::string> rows;
        for (auto p : pats) {
            ++tally[std::string(to_string(p))];
            rows.emplace_back(to_string(p));
        }
        if (rows.empty()) rows.push_back("NotClassified");
        for (const auto& row : rows)
            for (const auto& a : r.action_set()) ++comp[row][a];
    }
    auto rank = pattern_rank(recs);
    ASSERT_EQ(rank.size(), tally.size());
    for (std::size_t i = 0; i < rank.size(); ++i) {
        EXPECT_EQ(rank[i].second, tally[rank[i].first]);
        if (i) EXPECT_GE(rank[i - 1].second, rank[i].second);
    }
    EXPECT_EQ(pattern_action_composition(recs), comp);
    EXPECT_TRUE(comp.count("NotClassified"));
}
