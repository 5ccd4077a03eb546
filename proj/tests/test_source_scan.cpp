#include <gtest/gtest.h>

#include <algorithm>

#include "support.hpp"

using namespace dissect;
using testing_support::fixture_text;

namespace {

constexpr LineClass C = LineClass::Code, B = LineClass::Blank, K = LineClass::Comment;

const ClassSpan* class_named(const SourceContext& ctx, const std::string& key) {
    for (const auto& c : ctx.class_spans)
        if (c.key == key) return &c;
    return nullptr;
}

const MethodSpan* method_keyed(const SourceContext& ctx, const std::string& key) {
    for (const auto& m : ctx.method_spans)
        if (m.key == key) return &m;
    return nullptr;
}

bool has(const std::vector<std::string>& v, const std::string& s) { return std::find(v.begin(), v.end(), s) != v.end(); }

}  // namespace

TEST(StripNoise, Trivial) {
    EXPECT_EQ(strip_noise("   ").at(1), LineClass::Blank);
    EXPECT_EQ(strip_noise("// note").at(1), LineClass::Comment);
    auto m = strip_noise("/* a\n   b\n*/\nint x;\n");
    EXPECT_EQ(m.lines, (std::vector<LineClass>{K, K, K, C}));
}

TEST(StripNoise, HandLabelledFixture) {
    auto m = strip_noise(fixture_text("sources/Masked.java"));
    EXPECT_EQ(m.lines, (std::vector<LineClass>{C, B, K, K, K, C, C, B, K, C, K, K, C, C, C}));
    EXPECT_FALSE(m.unterminated_comment);
}

TEST(StripNoise, CommentMarkersInsideStrings) {
    auto m = strip_noise("String s = \"/* not a comment\";\nint y;\n");
    EXPECT_EQ(m.lines, (std::vector<LineClass>{C, C}));
}

TEST(StripNoise, UnterminatedBlockCommentWarns) {
    auto ctx = scan_source("U.java", "int a;\n/* open\nint b;\n");
    EXPECT_EQ(ctx.noise_mask.lines, (std::vector<LineClass>{C, K, K}));
    EXPECT_TRUE(ctx.noise_mask.unterminated_comment);
    ASSERT_FALSE(ctx.diagnostics.empty());
    EXPECT_NE(ctx.diagnostics[0].find("unterminated"), std::string::npos);
}

TEST(StripNoise, MaskIsTotal) {
    const auto text = fixture_text("sources/Nested.java");
    EXPECT_EQ(strip_noise(text).lines.size(), split_lines(text).size());
}

TEST(LocateDeclarations, OneClassTwoMethods) {
    auto d = locate_declarations("class A {\n  int f() { return 1; }\n  void g() {\n  }\n}\n");
    ASSERT_EQ(d.class_spans.size(), 1u);
    ASSERT_EQ(d.method_spans.size(), 2u);
    EXPECT_EQ(d.class_spans[0].range, (LineRange{1, 5}));
    EXPECT_EQ(d.method_spans[0].range, (LineRange{2, 2}));
    EXPECT_EQ(d.method_spans[1].range, (LineRange{3, 4}));
    EXPECT_FALSE(d.unbalanced_braces);
}

TEST(LocateDeclarations, NestedFixtureHandLabelled) {
    auto ctx = scan_source("Nested.java", fixture_text("sources/Nested.java"));
    struct Want {
        std::string key;
        LineRange range;
        int depth;
    };
    const std::vector<Want> classes = {
        {"Outer", {3, 32}, 0}, {"Outer.Inner", {10, 14}, 1}, {"Outer.Callback", {16, 18}, 1}, {"Outer$1", {21, 25}, 1},
        {"Color", {34, 40}, 0},
    };
    EXPECT_EQ(ctx.class_spans.size(), classes.size());
    for (const auto& w : classes) {
        const auto* c = class_named(ctx, w.key);
        ASSERT_NE(c, nullptr) << w.key;
        EXPECT_EQ(c->range, w.range) << w.key;
        EXPECT_EQ(c->depth, w.depth) << w.key;
    }
    EXPECT_TRUE(class_named(ctx, "Outer$1")->anonymous);

    const std::vector<std::pair<std::string, LineRange>> methods = {
        {"Outer#Outer/0", {6, 8}},         {"Outer.Inner#twice/0", {11, 13}}, {"Outer#run/0", {20, 27}},
        {"Outer$1#done/0", {22, 24}},      {"Outer#<clinit>/0", {29, 31}},    {"Color#next/0", {37, 39}},
    };
    EXPECT_EQ(ctx.method_spans.size(), methods.size());
    for (const auto& [key, range] : methods) {
        const auto* m = method_keyed(ctx, key);
        ASSERT_NE(m, nullptr) << key;
        EXPECT_EQ(m->range, range) << key;
    }
    // innermost lookups
    EXPECT_EQ(ctx.class_spans[static_cast<std::size_t>(ctx.class_at(12))].key, "Outer.Inner");
    EXPECT_EQ(ctx.method_spans[static_cast<std::size_t>(ctx.method_at(23))].key, "Outer$1#done/0");
    EXPECT_EQ(ctx.method_at(4), -1);  // field
}

TEST(LocateDeclarations, SpansNestOrAreDisjoint) {
    auto ctx = scan_source("Nested.java", fixture_text("sources/Nested.java"));
    for (const auto& a : ctx.class_spans)
        for (const auto& b : ctx.class_spans) {
            const bool disjoint = a.range.last < b.range.first || b.range.last < a.range.first;
            const bool a_in_b = b.range.first <= a.range.first && a.range.last <= b.range.last;
            const bool b_in_a = a.range.first <= b.range.first && b.range.last <= a.range.last;
            EXPECT_TRUE(disjoint || a_in_b || b_in_a);
        }
    for (const auto& m : ctx.method_spans) {
        ASSERT_GE(m.enclosing_class, 0);
        const auto& c = ctx.class_spans[static_cast<std::size_t>(m.enclosing_class)];
        EXPECT_LE(c.range.first, m.range.first);
        EXPECT_GE(c.range.last, m.range.last);
    }
}

TEST(LocateDeclarations, CommentsDoNotShiftSpans) {
    const auto text = fixture_text("sources/Nested.java");
    // blank out comments in place so line numbers stay put
    std::string stripped;
    const auto mask = strip_noise(text);
    int no = 0;
    for (const auto& line : split_lines(text)) {
        ++no;
        stripped += mask.at(no) == LineClass::Comment ? std::string() : line;
        stripped += "\n";
    }
    std::string commented;
    no = 0;
    for (const auto& line : split_lines(text)) {
        commented += line + (++no % 3 == 0 ? " // class Fake { void f() {" : "") + "\n";
    }
    auto a = locate_declarations(text), b = locate_declarations(stripped), c = locate_declarations(commented);
    ASSERT_EQ(a.class_spans.size(), c.class_spans.size());
    ASSERT_EQ(a.method_spans.size(), c.method_spans.size());
    for (std::size_t i = 0; i < a.class_spans.size(); ++i) {
        EXPECT_EQ(a.class_spans[i].range, b.class_spans[i].range);
        EXPECT_EQ(a.class_spans[i].range, c.class_spans[i].range);
    }
    for (std::size_t i = 0; i < a.method_spans.size(); ++i) EXPECT_EQ(a.method_spans[i].range, c.method_spans[i].range);
}

TEST(LocateDeclarations, UnbalancedBracesFlagged) {
    auto ctx = scan_source("Bad.java", "class A {\n  void f() {\n    x();\n");
    EXPECT_TRUE(ctx.unbalanced_braces);
    ASSERT_EQ(ctx.class_spans.size(), 1u);
    EXPECT_EQ(ctx.class_spans[0].range.last, 3);
    EXPECT_FALSE(ctx.diagnostics.empty());
}

TEST(ExtractFeatures, ConditionalWithNull) {
    auto f = extract_features("if (name != null) {");
    EXPECT_TRUE(f.conditional());
    EXPECT_TRUE(f.null_literal);
    EXPECT_TRUE(f.relational_operator);
    EXPECT_FALSE(f.assignment());
}

TEST(ExtractFeatures, Closure40Line635) {
    auto f = extract_features("JsName name = getName(ns.name, true);");
    ASSERT_TRUE(f.var_decl);
    EXPECT_EQ(f.var_decl->type, "JsName");
    EXPECT_EQ(f.var_decl->names, std::vector<std::string>{"name"});
    ASSERT_EQ(f.calls.size(), 1u);
    EXPECT_EQ(f.calls[0].callee, "getName");
    EXPECT_EQ(f.calls[0].arg_count, 2);
    EXPECT_TRUE(f.boolean_literal);
    EXPECT_FALSE(f.assignment());  // an initializer, not an assignment
}

TEST(ExtractFeatures, ContinuationLinesJoined) {
    auto f = extract_features("refNodes.add(new ClassDefiningFunctionNode(", {"    name, n, parent, parent.getParent()));"});
    ASSERT_EQ(f.instantiations.size(), 1u);
    EXPECT_EQ(f.instantiations[0].type, "ClassDefiningFunctionNode");
    ASSERT_EQ(f.calls.size(), 2u);
    EXPECT_EQ(f.calls[0].callee, "add");
    EXPECT_EQ(f.calls[0].arg_count, 1);
    EXPECT_EQ(f.calls[1].callee, "getParent");
}

TEST(ExtractFeatures, HandLabelledTable) {
    struct Row {
        const char* line;
        bool assign, unary, compound, cond, loop, call, mdecl, inst, trycatch, thr, ret, vdecl;
        bool str, chr, boolean, integer, floating, null, logic, rel, arith;
    };
    // clang-format off
    const Row rows[] = {
        //                                              as  un  cp  cn  lp  mc  md  ob  tc  th  rt  vd  s  c  b  i  f  n  lg rl ar
        {"x = y + 1;",                                   1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0, 0, 0, 0, 1, 0, 0, 0, 0, 1},
        {"count++;",                                     1,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
        {"total += values[i];",                          1,  0,  1,  0,  0,  0,  0,  0,  0,  0,  0,  0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
        {"if (a && b) {",                                0,  0,  0,  1,  0,  0,  0,  0,  0,  0,  0,  0, 0, 0, 0, 0, 0, 0, 1, 0, 0},
        {"} else {",                                     0,  0,  0,  1,  0,  0,  0,  0,  0,  0,  0,  0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
        {"case 'a':",                                    0,  0,  0,  1,  0,  0,  0,  0,  0,  0,  0,  0, 0, 1, 0, 0, 0, 0, 0, 0, 0},
        {"return x == null ? 0.5 : x;",                  0,  0,  0,  1,  0,  0,  0,  0,  0,  0,  1,  0, 0, 0, 0, 0, 1, 1, 0, 1, 0},
        {"for (int i = 0; i < n; i++) {",                1,  1,  0,  0,  1,  0,  0,  0,  0,  0,  0,  1, 0, 0, 0, 1, 0, 0, 0, 1, 0},
        {"while (!done) {",                              0,  0,  0,  0,  1,  0,  0,  0,  0,  0,  0,  0, 0, 0, 0, 0, 0, 0, 1, 0, 0},
        {"do {",                                         0,  0,  0,  0,  1,  0,  0,  0,  0,  0,  0,  0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
        {"log.info(\"start\");",                         0,  0,  0,  0,  0,  1,  0,  0,  0,  0,  0,  0, 1, 0, 0, 0, 0, 0, 0, 0, 0},
        {"public static int size(List<String> l) {",     0,  0,  0,  0,  0,  0,  1,  0,  0,  0,  0,  0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
        {"Foo f = new Foo(3);",                          0,  0,  0,  0,  0,  0,  0,  1,  0,  0,  0,  1, 0, 0, 0, 1, 0, 0, 0, 0, 0},
        {"try {",                                        0,  0,  0,  0,  0,  0,  0,  0,  1,  0,  0,  0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
        {"} catch (IOException e) {",                    0,  0,  0,  0,  0,  0,  0,  0,  1,  0,  0,  0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
        {"throw new IllegalStateException(\"x\");",     0,  0,  0,  0,  0,  0,  0,  1,  0,  1,  0,  0, 1, 0, 0, 0, 0, 0, 0, 0, 0},
        {"return;",                                      0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  1,  0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
        {"final boolean ok = false;",                    0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  1, 0, 0, 1, 0, 0, 0, 0, 0, 0},
        {"double r = a * 2.0 - b % 3;",                  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  1, 0, 0, 0, 1, 1, 0, 0, 0, 1},
        {"ok = a >= b || c < d;",                        1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0, 0, 0, 0, 0, 0, 0, 1, 1, 0},
    };
    // clang-format on
    for (const auto& r : rows) {
        auto f = extract_features(r.line);
        SCOPED_TRACE(r.line);
        EXPECT_EQ(f.assignment(), r.assign);
        EXPECT_EQ(f.unary_update, r.unary);
        EXPECT_EQ(f.compound_assignment, r.compound);
        EXPECT_EQ(f.conditional(), r.cond);
        EXPECT_EQ(f.loop(), r.loop);
        EXPECT_EQ(!f.calls.empty(), r.call);
        EXPECT_EQ(f.method_decl.has_value(), r.mdecl);
        EXPECT_EQ(!f.instantiations.empty(), r.inst);
        EXPECT_EQ(f.try_catch, r.trycatch);
        EXPECT_EQ(f.throw_stmt, r.thr);
        EXPECT_EQ(f.returns, r.ret);
        EXPECT_EQ(f.var_decl.has_value(), r.vdecl);
        EXPECT_EQ(f.string_literal, r.str);
        EXPECT_EQ(f.char_literal, r.chr);
        EXPECT_EQ(f.boolean_literal, r.boolean);
        EXPECT_EQ(f.integer_literal, r.integer);
        EXPECT_EQ(f.floating_literal, r.floating);
        EXPECT_EQ(f.null_literal, r.null);
        EXPECT_EQ(f.logic_operator, r.logic);
        EXPECT_EQ(f.relational_operator, r.rel);
        EXPECT_EQ(f.arithmetic_operator, r.arith);
    }
}

TEST(ExtractFeatures, MethodDeclarationParts) {
    auto f = extract_features("protected static String join(String[] parts, char sep) throws IOException {");
    ASSERT_TRUE(f.method_decl);
    EXPECT_EQ(f.method_decl->name, "join");
    EXPECT_EQ(f.method_decl->return_type, "String");
    EXPECT_TRUE(has(f.method_decl->modifiers, "static"));
    EXPECT_EQ(f.method_decl->param_types, (std::vector<std::string>{"String[]", "char"}));
    EXPECT_EQ(f.method_decl->param_names, (std::vector<std::string>{"parts", "sep"}));
}

TEST(ExtractFeatures, ImportsProduceNothing) {
    auto f = extract_features("import java.util.List;");
    EXPECT_FALSE(f.assignment() || f.conditional() || f.loop() || !f.calls.empty() || f.var_decl || f.method_decl);
}

TEST(ExtractFeatures, PureAndIdempotent) {
    const std::string line = "result = compute(a, b) ? x : y;";
    auto a = extract_features(line), b = extract_features(line);
    EXPECT_EQ(a.identifiers, b.identifiers);
    EXPECT_EQ(a.calls.size(), b.calls.size());
    EXPECT_EQ(a.ternaries, 1);
    EXPECT_EQ(b.ternaries, 1);
}
