#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dissect/diff.hpp"
#include "dissect/lexer.hpp"
#include "dissect/text.hpp"

namespace dissect {

// ---------------------------------------------------------------------------
// Noise mask
// ---------------------------------------------------------------------------

enum class LineClass { Code, Blank, Comment };

struct NoiseMask {
    std::vector<LineClass> lines;  // index 0 is line 1
    bool unterminated_comment = false;

    LineClass at(int line_no) const {
        if (line_no < 1 || static_cast<std::size_t>(line_no) > lines.size()) return LineClass::Blank;
        return lines[static_cast<std::size_t>(line_no - 1)];
    }
};

/// Labels each line CODE, BLANK or COMMENT. A line holding any code token
/// is CODE even if it also carries a comment.
inline NoiseMask strip_noise(std::string_view file_text, const LanguageConfig& cfg = java_config()) {
    NoiseMask mask;
    bool in_block = false;
    int no = 0;
    for (const auto& line : split_lines(file_text)) {
        ++no;
        const bool was_in_block = in_block;
        auto lexed = lex_line(line, no, in_block, cfg);
        if (!lexed.tokens.empty()) mask.lines.push_back(LineClass::Code);
        else if (lexed.has_comment || was_in_block) mask.lines.push_back(LineClass::Comment);
        else mask.lines.push_back(LineClass::Blank);
    }
    mask.unterminated_comment = in_block;
    return mask;
}

// ---------------------------------------------------------------------------
// Statement units
// ---------------------------------------------------------------------------

/// A statement-sized slice of the token stream: ends at `;` (outside
/// parentheses), after `{`, at `case ...:`, or is a lone `}`. Multi-line
/// statements are one unit.
struct StatementUnit {
    int first_line = 0;
    int last_line = 0;
    std::vector<Token> tokens;

    std::string text() const { return join_tokens(tokens); }
    bool trivial() const {
        return std::none_of(tokens.begin(), tokens.end(), [](const Token& t) {
            return t.kind != TokenKind::Punct && t.kind != TokenKind::Operator;
        });
    }
    bool opens_block() const { return !tokens.empty() && tokens.back().is("{"); }
    bool closes_block() const { return tokens.size() == 1 && tokens.front().is("}"); }
};

inline std::vector<StatementUnit> split_units(const std::vector<Token>& tokens) {
    std::vector<StatementUnit> units;
    StatementUnit cur;
    int depth = 0;
    auto flush = [&] {
        if (cur.tokens.empty()) return;
        cur.first_line = cur.tokens.front().line;
        cur.last_line = cur.tokens.back().line;
        units.push_back(std::move(cur));
        cur = StatementUnit{};
        depth = 0;
    };
    for (const auto& t : tokens) {
        if (t.is("}")) {
            flush();
            cur.tokens.push_back(t);
            flush();
            continue;
        }
        cur.tokens.push_back(t);
        if (t.is("(") || t.is("[")) ++depth;
        else if (t.is(")") || t.is("]")) depth = std::max(0, depth - 1);
        else if (t.is("{")) flush();
        else if (t.is(";") && depth == 0) flush();
        else if (t.is(":") && depth == 0 && (cur.tokens.front().is("case") || cur.tokens.front().is("default"))) {
            const bool ternary = std::any_of(cur.tokens.begin(), cur.tokens.end(), [](const Token& x) { return x.is("?"); });
            if (!ternary) flush();
        }
    }
    flush();
    return units;
}

/// Tokenizes a block of consecutive lines starting at `first_line` and
/// splits it into units. Comments never produce tokens.
inline std::vector<StatementUnit> units_of_lines(const std::vector<std::string>& lines, int first_line,
                                                 const LanguageConfig& cfg = java_config()) {
    std::vector<Token> tokens;
    bool in_block = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto lexed = lex_line(lines[i], first_line + static_cast<int>(i), in_block, cfg);
        tokens.insert(tokens.end(), lexed.tokens.begin(), lexed.tokens.end());
    }
    return split_units(tokens);
}

// ---------------------------------------------------------------------------
// Line features
// ---------------------------------------------------------------------------

struct CallSite {
    std::string callee;
    std::size_t name_index = 0;   // token index of the callee name
    std::size_t open_index = 0;   // token index of '('
    std::size_t close_index = 0;  // token index of the matching ')'
    int arg_count = 0;
};

struct Instantiation {
    std::string type;
    std::size_t new_index = 0;
    bool thrown = false;  // operand of a throw statement
};

struct MethodDecl {
    std::string name;
    std::string return_type;  // empty for constructors
    std::vector<std::string> modifiers;
    std::vector<std::string> param_types;
    std::vector<std::string> param_names;
    std::string throws_clause;
    std::size_t name_index = 0;
    friend bool operator==(const MethodDecl&, const MethodDecl&) = default;
};

struct VarDecl {
    std::string type;
    std::vector<std::string> names;
    std::vector<std::string> modifiers;
    std::optional<std::size_t> init_index;  // token index of '=' when initialized
};

struct TypeDecl {
    std::string kind;  // class / interface / enum
    std::string name;
    std::vector<std::string> modifiers;
    std::string extends_clause;
    std::string implements_clause;
};

struct Assignment {
    std::string target;
    std::size_t op_index = 0;
    std::string op;
};

/// Token-level statement features used by the action and pattern detectors.
struct LineFeatures {
    std::vector<Assignment> assignments;
    bool unary_update = false;
    bool compound_assignment = false;

    std::vector<std::string> conditional_keywords;  // if / else / case / default / switch
    int ternaries = 0;
    std::vector<std::string> loop_keywords;
    std::vector<CallSite> calls;
    std::optional<MethodDecl> method_decl;
    std::vector<Instantiation> instantiations;
    bool try_catch = false;  // try / catch / finally
    bool throw_stmt = false;
    bool returns = false;
    std::string return_expr;
    std::optional<VarDecl> var_decl;
    std::optional<TypeDecl> type_decl;

    bool string_literal = false;
    bool char_literal = false;
    bool boolean_literal = false;
    bool integer_literal = false;
    bool floating_literal = false;
    bool null_literal = false;
    std::vector<std::string> identifiers;
    bool logic_operator = false;
    bool relational_operator = false;
    bool arithmetic_operator = false;

    bool assignment() const { return !assignments.empty(); }
    bool conditional() const { return !conditional_keywords.empty() || ternaries > 0; }
    bool loop() const { return !loop_keywords.empty(); }
};

namespace detail {

inline std::size_t match_forward(const std::vector<Token>& t, std::size_t open) {
    const std::string& o = t[open].text;
    const std::string c = o == "(" ? ")" : (o == "[" ? "]" : (o == "{" ? "}" : ">"));
    int depth = 0;
    for (std::size_t i = open; i < t.size(); ++i) {
        if (t[i].text == o) ++depth;
        else if (t[i].text == c && --depth == 0) return i;
    }
    return t.size();
}

inline int count_args(const std::vector<Token>& t, std::size_t open, std::size_t close) {
    if (close <= open + 1) return 0;
    int depth = 0;
    int commas = 0;
    for (std::size_t i = open + 1; i < close && i < t.size(); ++i) {
        const auto& x = t[i].text;
        if (x == "(" || x == "[" || x == "{") ++depth;
        else if (x == ")" || x == "]" || x == "}") --depth;
        else if (x == "<" && i > 0 && t[i - 1].kind == TokenKind::Identifier && i + 1 < t.size() &&
                 (t[i + 1].kind == TokenKind::Identifier || t[i + 1].is("?")) && std::isupper(static_cast<unsigned char>(t[i - 1].text[0])))
            ++depth;  // generic argument list such as Map<K, V>
        else if (x == ">" && depth > 0) --depth;
        else if (x == "," && depth == 0) ++commas;
    }
    return commas + 1;
}

/// Skips a type starting at i (qualified name, generic arguments, array
/// brackets, varargs). Returns the index after the type, or i when no type.
inline std::size_t skip_type(const std::vector<Token>& t, std::size_t i, const LanguageConfig& cfg) {
    if (i >= t.size()) return i;
    if (t[i].kind == TokenKind::Keyword && cfg.primitives.count(t[i].text)) {
        ++i;
    } else if (t[i].kind == TokenKind::Identifier) {
        ++i;
        while (i + 1 < t.size() && t[i].is(".") && t[i + 1].kind == TokenKind::Identifier) i += 2;
    } else {
        return i;
    }
    if (i < t.size() && t[i].is("<")) {
        int depth = 0;
        std::size_t j = i;
        for (; j < t.size(); ++j) {
            if (t[j].is("<")) ++depth;
            else if (t[j].is(">")) {
                if (--depth == 0) break;
            } else if (t[j].is(">>")) {
                depth -= 2;
                if (depth <= 0) break;
            } else if (!(t[j].kind == TokenKind::Identifier || t[j].is(",") || t[j].is(".") || t[j].is("?") ||
                         t[j].is("extends") || t[j].is("super") || t[j].is("[") || t[j].is("]") ||
                         (t[j].kind == TokenKind::Keyword && cfg.primitives.count(t[j].text)))) {
                return i;  // not a generic argument list
            }
        }
        if (j >= t.size()) return i;
        i = j + 1;
    }
    while (i + 1 < t.size() && t[i].is("[") && t[i + 1].is("]")) i += 2;
    if (i < t.size() && t[i].is("...")) ++i;
    return i;
}

inline std::size_t skip_annotations(const std::vector<Token>& t, std::size_t i) {
    while (i + 1 < t.size() && t[i].is("@") && t[i + 1].kind == TokenKind::Identifier) {
        i += 2;
        while (i + 1 < t.size() && t[i].is(".") && t[i + 1].kind == TokenKind::Identifier) i += 2;
        if (i < t.size() && t[i].is("(")) i = match_forward(t, i) + 1;
    }
    return i;
}

inline std::string type_text(const std::vector<Token>& t, std::size_t b, std::size_t e) {
    std::string s;
    for (std::size_t i = b; i < e && i < t.size(); ++i) s += t[i].text;
    return s;
}

inline std::optional<MethodDecl> parse_method_decl(const std::vector<Token>& t, const LanguageConfig& cfg) {
    std::size_t i = skip_annotations(t, 0);
    MethodDecl md;
    while (i < t.size() && t[i].kind == TokenKind::Keyword && cfg.modifiers.count(t[i].text)) md.modifiers.push_back(t[i++].text);
    if (i < t.size() && t[i].is("<")) {  // type parameters
        std::size_t close = match_forward(t, i);
        if (close >= t.size()) return std::nullopt;
        i = close + 1;
    }
    std::size_t name_at;
    std::size_t after_type = skip_type(t, i, cfg);
    if (after_type > i && after_type < t.size() && t[after_type].kind == TokenKind::Identifier &&
        after_type + 1 < t.size() && t[after_type + 1].is("(")) {
        md.return_type = type_text(t, i, after_type);
        name_at = after_type;
    } else if (!md.modifiers.empty() && i + 1 < t.size() && t[i].kind == TokenKind::Identifier && t[i + 1].is("(")) {
        name_at = i;  // constructor
    } else {
        return std::nullopt;
    }
    md.name = t[name_at].text;
    md.name_index = name_at;
    std::size_t open = name_at + 1;
    std::size_t close = match_forward(t, open);
    if (close >= t.size()) return std::nullopt;
    // Parameters: split on top-level commas, last identifier is the name.
    std::size_t p = open + 1;
    while (p < close) {
        std::size_t q = p;
        int depth = 0;
        while (q < close) {
            if (t[q].is("<") || t[q].is("(")) ++depth;
            else if (t[q].is(">") || t[q].is(")")) --depth;
            else if (t[q].is(",") && depth == 0) break;
            ++q;
        }
        std::size_t b = skip_annotations(t, p);
        while (b < q && t[b].is("final")) ++b;
        if (q > b) {
            md.param_names.push_back(t[q - 1].text);
            md.param_types.push_back(type_text(t, b, q - 1));
        }
        p = q + 1;
    }
    std::size_t rest = close + 1;
    if (rest < t.size() && t[rest].is("throws")) {
        std::size_t e = rest + 1;
        while (e < t.size() && !t[e].is("{") && !t[e].is(";")) ++e;
        md.throws_clause = join_tokens(t, rest + 1, e);
        rest = e;
    }
    if (rest == t.size() || ((t[rest].is("{") || t[rest].is(";")) && rest + 1 == t.size())) return md;
    return std::nullopt;
}

inline std::optional<VarDecl> parse_var_decl(const std::vector<Token>& t, std::size_t start, const LanguageConfig& cfg) {
    std::size_t i = skip_annotations(t, start);
    VarDecl vd;
    while (i < t.size() && t[i].kind == TokenKind::Keyword && cfg.modifiers.count(t[i].text)) vd.modifiers.push_back(t[i++].text);
    std::size_t after = skip_type(t, i, cfg);
    if (after == i || after >= t.size() || t[after].kind != TokenKind::Identifier) return std::nullopt;
    if (after + 1 >= t.size()) return std::nullopt;
    const auto& next = t[after + 1];
    if (!(next.is("=") || next.is(";") || next.is(",") || next.is(":") || next.is(")"))) return std::nullopt;
    vd.type = type_text(t, i, after);
    vd.names.push_back(t[after].text);
    if (next.is("=")) vd.init_index = after + 1;
    // Further declarators: ", name [= ...]" at depth 0.
    int depth = 0;
    for (std::size_t k = after + 1; k + 1 < t.size(); ++k) {
        if (t[k].is("(") || t[k].is("{") || t[k].is("[")) ++depth;
        else if (t[k].is(")") || t[k].is("}") || t[k].is("]")) --depth;
        else if (t[k].is(",") && depth == 0 && t[k + 1].kind == TokenKind::Identifier &&
                 k + 2 < t.size() && (t[k + 2].is("=") || t[k + 2].is(";") || t[k + 2].is(",")))
            vd.names.push_back(t[k + 1].text);
    }
    return vd;
}

inline std::optional<TypeDecl> parse_type_decl(const std::vector<Token>& t, const LanguageConfig& cfg) {
    std::size_t i = skip_annotations(t, 0);
    TypeDecl td;
    while (i < t.size() && t[i].kind == TokenKind::Keyword && cfg.modifiers.count(t[i].text)) td.modifiers.push_back(t[i++].text);
    if (i < t.size() && t[i].is("@")) ++i;  // @interface
    if (i + 1 >= t.size() || !cfg.type_decls.count(t[i].text) || t[i + 1].kind != TokenKind::Identifier) return std::nullopt;
    td.kind = t[i].text;
    td.name = t[i + 1].text;
    std::size_t k = i + 2;
    std::string* clause = nullptr;
    for (; k < t.size() && !t[k].is("{"); ++k) {
        if (t[k].is("extends")) clause = &td.extends_clause;
        else if (t[k].is("implements")) clause = &td.implements_clause;
        else if (clause) *clause += (clause->empty() ? "" : " ") + t[k].text;
    }
    return td;
}

/// Walks back from an assignment operator to the assigned path
/// (`a`, `this.a`, `a.b`, `a[i]` -> `a`).
inline std::string lvalue_before(const std::vector<Token>& t, std::size_t op) {
    std::size_t e = op;
    if (e > 0 && t[e - 1].is("]")) {
        int depth = 0;
        while (e > 0) {
            --e;
            if (t[e].is("]")) ++depth;
            else if (t[e].is("[") && --depth == 0) break;
        }
    }
    if (e == 0) return {};
    std::size_t b = e - 1;
    if (t[b].kind != TokenKind::Identifier && !t[b].is("this")) return {};
    while (b >= 2 && t[b - 1].is(".") && (t[b - 2].kind == TokenKind::Identifier || t[b - 2].is("this"))) b -= 2;
    std::string s;
    for (std::size_t i = b; i < e; ++i) s += t[i].text;
    return s;
}

inline std::string lvalue_after(const std::vector<Token>& t, std::size_t op) {
    std::size_t b = op + 1;
    if (b >= t.size() || (t[b].kind != TokenKind::Identifier && !t[b].is("this"))) return {};
    std::size_t e = b + 1;
    while (e + 1 < t.size() && t[e].is(".") && t[e + 1].kind == TokenKind::Identifier) e += 2;
    std::string s;
    for (std::size_t i = b; i < e; ++i) s += t[i].text;
    return s;
}

/// Token indices of `<` / `>` that delimit type arguments (`List<String>`,
/// `Map<K, List<V>>`) rather than compare.
inline std::set<std::size_t> type_argument_brackets(const std::vector<Token>& t) {
    std::set<std::size_t> out;
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (!t[i].is("<") || out.count(i)) continue;
        const Token& prev = t[i - 1];
        const bool after_type = prev.kind == TokenKind::Identifier && std::isupper(static_cast<unsigned char>(prev.text[0]));
        if (!after_type && !prev.is(".")) continue;
        int depth = 0;
        std::vector<std::size_t> marks;
        std::size_t j = i;
        for (; j < t.size(); ++j) {
            const Token& x = t[j];
            if (x.is("<")) ++depth;
            else if (x.is(">")) --depth;
            else if (x.is(">>")) depth -= 2;
            else if (x.is(">>>")) depth -= 3;
            else if (!(x.kind == TokenKind::Identifier || x.kind == TokenKind::Keyword || x.is(",") || x.is(".") ||
                       x.is("?") || x.is("[") || x.is("]") || x.is("&")))
                break;
            if (x.is("<") || x.is(">") || x.is(">>") || x.is(">>>")) marks.push_back(j);
            if (depth <= 0) break;
        }
        if (j < t.size() && depth == 0) out.insert(marks.begin(), marks.end());
    }
    return out;
}

inline bool is_assignment_op(const std::string& s) {
    return s == "=" || s == "+=" || s == "-=" || s == "*=" || s == "/=" || s == "%=" || s == "&=" || s == "|=" ||
           s == "^=" || s == "<<=" || s == ">>=" || s == ">>>=";
}

}  // namespace detail

/// Extracts statement features from the tokens of one (joined) statement.
inline LineFeatures extract_features(const std::vector<Token>& t, const LanguageConfig& cfg = java_config()) {
    LineFeatures f;
    if (t.empty()) return f;
    // Annotations alone, imports and package lines carry no features.
    const std::size_t lead = detail::skip_annotations(t, 0);
    if (lead >= t.size()) return f;
    if (cfg.ignored_statements.count(t[lead].text)) return f;

    f.type_decl = detail::parse_type_decl(t, cfg);
    if (!f.type_decl) f.method_decl = detail::parse_method_decl(t, cfg);
    if (!f.type_decl && !f.method_decl) f.var_decl = detail::parse_var_decl(t, 0, cfg);

    // Declarations inside a for header are loop machinery, not variables.
    std::optional<std::size_t> for_decl_eq;
    if (!t.empty() && t[lead].is("for") && lead + 1 < t.size() && t[lead + 1].is("(")) {
        if (auto vd = detail::parse_var_decl(t, lead + 2, cfg)) {
            if (vd->init_index) for_decl_eq = vd->init_index;
            if (!f.var_decl) f.var_decl = std::move(vd);
        }
    }
    const auto generic = detail::type_argument_brackets(t);

    for (std::size_t i = 0; i < t.size(); ++i) {
        const Token& tok = t[i];
        switch (tok.kind) {
            case TokenKind::String: f.string_literal = true; break;
            case TokenKind::Char: f.char_literal = true; break;
            case TokenKind::Boolean: f.boolean_literal = true; break;
            case TokenKind::Integer: f.integer_literal = true; break;
            case TokenKind::Floating: f.floating_literal = true; break;
            case TokenKind::Null: f.null_literal = true; break;
            case TokenKind::Identifier: f.identifiers.push_back(tok.text); break;
            default: break;
        }
        if (tok.kind == TokenKind::Keyword) {
            if (cfg.conditional.count(tok.text) && !(tok.is("default") && f.method_decl)) f.conditional_keywords.push_back(tok.text);
            if (cfg.loops.count(tok.text)) f.loop_keywords.push_back(tok.text);
            if (tok.is("try") || tok.is("catch") || tok.is("finally")) f.try_catch = true;
            if (tok.is("throw")) f.throw_stmt = true;
            if (tok.is("return")) {
                f.returns = true;
                std::size_t e = i + 1;
                while (e < t.size() && !t[e].is(";")) ++e;
                f.return_expr = join_tokens(t, i + 1, e);
            }
            if (tok.is("new")) {
                std::size_t b = i + 1;
                std::size_t e = detail::skip_type(t, b, cfg);
                if (e > b) {
                    Instantiation inst;
                    inst.new_index = i;
                    std::string ty;
                    for (std::size_t k = b; k < e; ++k) {
                        if (t[k].is("<")) break;
                        ty += t[k].text;
                    }
                    inst.type = ty;
                    inst.thrown = i > 0 && t[i - 1].is("throw");
                    f.instantiations.push_back(std::move(inst));
                }
            }
            if (tok.is("instanceof")) f.relational_operator = true;
            if ((tok.is("this") || tok.is("super")) && i + 1 < t.size() && t[i + 1].is("(") && (i == 0 || !t[i - 1].is("."))) {
                CallSite c;
                c.callee = tok.text;
                c.name_index = i;
                c.open_index = i + 1;
                c.close_index = detail::match_forward(t, i + 1);
                c.arg_count = detail::count_args(t, c.open_index, c.close_index);
                f.calls.push_back(c);
            }
        }
        if (tok.kind == TokenKind::Identifier && i + 1 < t.size() && t[i + 1].is("(")) {
            const bool is_decl_name = f.method_decl && f.method_decl->name_index == i;
            // Walk back over a qualified name to see whether this is `new a.b.C(`.
            std::size_t b = i;
            while (b >= 2 && t[b - 1].is(".") && t[b - 2].kind == TokenKind::Identifier) b -= 2;
            const bool constructed = b >= 1 && t[b - 1].is("new");
            if (!is_decl_name && !constructed) {
                CallSite c;
                c.callee = tok.text;
                c.name_index = i;
                c.open_index = i + 1;
                c.close_index = detail::match_forward(t, i + 1);
                c.arg_count = detail::count_args(t, c.open_index, c.close_index);
                f.calls.push_back(c);
            }
        }
        if (tok.is("?")) {
            const bool wildcard = (i > 0 && (t[i - 1].is("<") || t[i - 1].is(","))) ||
                                  (i + 1 < t.size() && (t[i + 1].is(">") || t[i + 1].is(",") || t[i + 1].is("extends") ||
                                                        t[i + 1].is("super")));
            if (!wildcard) ++f.ternaries;
        }
        if (tok.kind == TokenKind::Operator) {
            const auto& s = tok.text;
            if (s == "&&" || s == "||" || s == "!") f.logic_operator = true;
            if (s == "==" || s == "!=" || s == "<=" || s == ">=" || ((s == "<" || s == ">") && !generic.count(i)))
                f.relational_operator = true;
            if (s == "+" || s == "-" || s == "*" || s == "/" || s == "%") f.arithmetic_operator = true;
            if (detail::is_assignment_op(s)) {
                const bool decl_init = f.var_decl && f.var_decl->init_index && *f.var_decl->init_index == i;
                const bool for_init = for_decl_eq && *for_decl_eq == i;
                // Further declarators of a declaration (`int a = 1, b = 2`).
                const bool extra_declarator = f.var_decl && s == "=" && i > 0 &&
                                              std::find(f.var_decl->names.begin(), f.var_decl->names.end(),
                                                        t[i - 1].text) != f.var_decl->names.end() &&
                                              i >= 2 && t[i - 2].is(",");
                if (!decl_init && !for_init && !extra_declarator) {
                    std::string target = detail::lvalue_before(t, i);
                    if (!target.empty()) {
                        f.assignments.push_back({target, i, s});
                        if (s != "=") f.compound_assignment = true;
                    }
                }
            }
            if (s == "++" || s == "--") {
                std::string target;
                if (i > 0 && (t[i - 1].kind == TokenKind::Identifier || t[i - 1].is("]"))) target = detail::lvalue_before(t, i);
                if (target.empty()) target = detail::lvalue_after(t, i);
                if (!target.empty()) {
                    f.assignments.push_back({target, i, s});
                    f.unary_update = true;
                }
            }
        }
    }
    return f;
}

/// Extracts features of a source line, joined with its continuation lines
/// when the statement spans several lines.
inline LineFeatures extract_features(std::string_view line_text, const std::vector<std::string>& continuation = {},
                                     const LanguageConfig& cfg = java_config()) {
    std::string joined(line_text);
    for (const auto& c : continuation) {
        joined += '\n';
        joined += c;
    }
    return extract_features(tokenize(joined, cfg), cfg);
}

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

struct ClassSpan {
    std::string name;
    std::string key;  // qualified, e.g. Outer.Inner or Outer$1
    LineRange range;
    int depth = 0;
    bool anonymous = false;
    int parent = -1;
};

struct MethodSpan {
    std::string name;
    std::string signature;
    std::string key;  // class key + '#' + name + '/' + overload ordinal
    LineRange range;
    int enclosing_class = -1;
};

struct SourceContext {
    std::string path;
    NoiseMask noise_mask;
    std::vector<ClassSpan> class_spans;
    std::vector<MethodSpan> method_spans;
    bool unbalanced_braces = false;
    std::vector<std::string> diagnostics;

    /// Innermost class span containing the line, or -1.
    int class_at(int line) const {
        int best = -1;
        for (std::size_t i = 0; i < class_spans.size(); ++i) {
            const auto& r = class_spans[i].range;
            if (r.first <= line && line <= r.last && (best < 0 || class_spans[i].depth > class_spans[static_cast<std::size_t>(best)].depth))
                best = static_cast<int>(i);
        }
        return best;
    }
    /// Innermost method span containing the line, or -1.
    int method_at(int line) const {
        int best = -1;
        for (std::size_t i = 0; i < method_spans.size(); ++i) {
            const auto& r = method_spans[i].range;
            if (r.first <= line && line <= r.last &&
                (best < 0 || r.first >= method_spans[static_cast<std::size_t>(best)].range.first))
                best = static_cast<int>(i);
        }
        return best;
    }
};

struct Declarations {
    std::vector<ClassSpan> class_spans;
    std::vector<MethodSpan> method_spans;
    bool unbalanced_braces = false;
};

/// Finds class/interface/enum spans and method spans by brace tracking.
/// Constructors and initializer blocks count as methods; anonymous class
/// bodies are class spans flagged `anonymous`.
inline Declarations locate_declarations(std::string_view file_text, const LanguageConfig& cfg = java_config()) {
    enum class Scope { Class, Method, Block };
    struct Open {
        Scope kind;
        int index;  // into class_spans / method_spans, -1 for blocks
        int start_line;
    };

    Declarations d;
    const auto lines = split_lines(file_text);
    const auto units = units_of_lines(lines, 1, cfg);
    std::vector<Open> stack;
    std::map<std::string, int> ordinals;  // per qualified method name
    std::map<std::string, int> anon_counts;

    auto enclosing_class = [&]() -> int {
        for (auto it = stack.rbegin(); it != stack.rend(); ++it)
            if (it->kind == Scope::Class) return it->index;
        return -1;
    };
    auto class_key = [&](int idx) { return idx < 0 ? std::string() : d.class_spans[static_cast<std::size_t>(idx)].key; };

    for (const auto& u : units) {
        if (u.closes_block()) {
            if (stack.empty()) {
                d.unbalanced_braces = true;
                continue;
            }
            Open o = stack.back();
            stack.pop_back();
            if (o.kind == Scope::Class) d.class_spans[static_cast<std::size_t>(o.index)].range.last = u.first_line;
            if (o.kind == Scope::Method) d.method_spans[static_cast<std::size_t>(o.index)].range.last = u.first_line;
            continue;
        }
        if (!u.opens_block()) continue;

        std::vector<Token> header(u.tokens.begin(), u.tokens.end() - 1);
        const bool in_class_body = !stack.empty() && stack.back().kind == Scope::Class;
        const bool top_level = stack.empty();
        const int start_line = u.first_line;

        auto td = detail::parse_type_decl(header, cfg);
        if (td) {
            ClassSpan cs;
            cs.name = td->name;
            int parent = enclosing_class();
            cs.parent = parent;
            cs.key = parent < 0 ? td->name : class_key(parent) + "." + td->name;
            cs.depth = parent < 0 ? 0 : d.class_spans[static_cast<std::size_t>(parent)].depth + 1;
            cs.range = {start_line, start_line};
            d.class_spans.push_back(cs);
            stack.push_back({Scope::Class, static_cast<int>(d.class_spans.size() - 1), start_line});
            continue;
        }
        // Anonymous class body: `... new Type(args) {` (or an enum constant body).
        bool anonymous = header.size() >= 2 && header.back().is(")") && [&] {
            int depth = 0;
            for (std::size_t i = header.size(); i-- > 0;) {
                if (header[i].is(")")) ++depth;
                else if (header[i].is("(") && --depth == 0) {
                    std::size_t b = i;
                    if (b == 0) return false;
                    --b;
                    while (b >= 2 && header[b - 1].is(".")) b -= 2;
                    return b >= 1 && header[b - 1].is("new");
                }
            }
            return false;
        }();
        if (anonymous) {
            int parent = enclosing_class();
            std::string pk = class_key(parent);
            ClassSpan cs;
            cs.name = "";
            cs.anonymous = true;
            cs.parent = parent;
            cs.key = pk + "$" + std::to_string(++anon_counts[pk]);
            cs.depth = parent < 0 ? 0 : d.class_spans[static_cast<std::size_t>(parent)].depth + 1;
            cs.range = {start_line, start_line};
            d.class_spans.push_back(cs);
            stack.push_back({Scope::Class, static_cast<int>(d.class_spans.size() - 1), start_line});
            continue;
        }
        if (in_class_body) {
            auto md = detail::parse_method_decl(header, cfg);
            bool initializer = false;
            if (!md) {
                std::size_t k = detail::skip_annotations(header, 0);
                initializer = k == header.size() || (k + 1 == header.size() && header[k].is("static"));
            }
            // Constructors without modifiers: `Name(...) {` where Name is the class name.
            if (!md && header.size() >= 3 && header[0].kind == TokenKind::Identifier && header[1].is("(")) {
                int cls = enclosing_class();
                if (cls >= 0 && d.class_spans[static_cast<std::size_t>(cls)].name == header[0].text) {
                    MethodDecl ctor;
                    ctor.name = header[0].text;
                    md = ctor;
                }
            }
            if (md || initializer) {
                MethodSpan ms;
                int cls = enclosing_class();
                ms.enclosing_class = cls;
                ms.name = md ? md->name : (header.empty() ? "<init>" : "<clinit>");
                ms.signature = join_tokens(header);
                std::string qualified = class_key(cls) + "#" + ms.name;
                ms.key = qualified + "/" + std::to_string(ordinals[qualified]++);
                ms.range = {start_line, start_line};
                d.method_spans.push_back(ms);
                stack.push_back({Scope::Method, static_cast<int>(d.method_spans.size() - 1), start_line});
                continue;
            }
        }
        (void)top_level;
        stack.push_back({Scope::Block, -1, start_line});
    }
    if (!stack.empty()) {
        d.unbalanced_braces = true;
        const int last = static_cast<int>(lines.size());
        for (const auto& o : stack) {
            if (o.kind == Scope::Class) d.class_spans[static_cast<std::size_t>(o.index)].range.last = last;
            if (o.kind == Scope::Method) d.method_spans[static_cast<std::size_t>(o.index)].range.last = last;
        }
    }
    return d;
}

inline SourceContext scan_source(std::string path, std::string_view file_text, const LanguageConfig& cfg = java_config()) {
    SourceContext ctx;
    ctx.path = std::move(path);
    ctx.noise_mask = strip_noise(file_text, cfg);
    auto decls = locate_declarations(file_text, cfg);
    ctx.class_spans = std::move(decls.class_spans);
    ctx.method_spans = std::move(decls.method_spans);
    ctx.unbalanced_braces = decls.unbalanced_braces;
    if (ctx.noise_mask.unterminated_comment) ctx.diagnostics.push_back("unterminated block comment in " + ctx.path);
    if (ctx.unbalanced_braces) ctx.diagnostics.push_back("unbalanced braces in " + ctx.path);
    return ctx;
}

}  // namespace dissect
