#pragma once

#include <array>
#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace dissect {

/// Keyword and comment tables for a C-family language. The defaults describe
/// Java; other languages are configured by editing the tables.
struct LanguageConfig {
    std::string source_extension = ".java";
    std::string line_comment = "//";
    std::string block_open = "/*";
    std::string block_close = "*/";

    std::set<std::string, std::less<>> conditional = {"if", "else", "case", "default", "switch"};
    std::set<std::string, std::less<>> loops = {"for", "while", "do"};
    std::set<std::string, std::less<>> exceptions = {"try", "catch", "finally", "throw"};
    std::set<std::string, std::less<>> type_decls = {"class", "interface", "enum"};
    std::set<std::string, std::less<>> modifiers = {"public",   "private",  "protected", "static",    "final",
                                                    "abstract", "native",   "synchronized", "transient", "volatile",
                                                    "strictfp", "default"};
    std::set<std::string, std::less<>> primitives = {"void", "boolean", "byte", "char", "short",
                                                     "int",  "long",    "float", "double"};
    std::set<std::string, std::less<>> other_keywords = {
        "return", "new",   "this",    "super",   "instanceof", "import",  "package", "assert", "break",
        "continue", "throws", "extends", "implements", "true", "false", "null", "goto", "const"};
    std::set<std::string, std::less<>> ignored_statements = {"import", "package"};

    bool is_keyword(std::string_view w) const {
        return conditional.count(w) || loops.count(w) || exceptions.count(w) || type_decls.count(w) ||
               modifiers.count(w) || primitives.count(w) || other_keywords.count(w);
    }
};

inline const LanguageConfig& java_config() {
    static const LanguageConfig cfg;
    return cfg;
}

enum class TokenKind { Identifier, Keyword, Integer, Floating, String, Char, Boolean, Null, Operator, Punct };

struct Token {
    TokenKind kind = TokenKind::Punct;
    std::string text;
    int line = 0;

    bool is(std::string_view t) const { return text == t; }
    bool is_literal() const {
        return kind == TokenKind::Integer || kind == TokenKind::Floating || kind == TokenKind::String ||
               kind == TokenKind::Char || kind == TokenKind::Boolean || kind == TokenKind::Null;
    }
};

/// Per-line lexer result. `state_block` carries an open block comment
/// across lines.
struct LexedLine {
    std::vector<Token> tokens;
    bool has_comment = false;
};

namespace detail {

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
inline bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }

inline constexpr std::array<std::string_view, 37> kOperators = {
    ">>>=", "<<=", ">>=", ">>>", "...", "==", "!=", "<=", ">=", "&&", "||", "++", "--",
    "+=",   "-=",  "*=",  "/=",  "%=",  "&=", "|=", "^=", "->", "::", "<<", "+",  "-",
    "*",    "/",   "%",   "=",   "<",   ">",  "!",  "~",  "&",  "|",  "^"};

}  // namespace detail

/// Tokenizes one line. `in_block` is the block-comment state on entry and is
/// updated for the next line. `>>` is deliberately not an operator token so
/// that nested generic closers stay two tokens.
inline LexedLine lex_line(std::string_view s, int line_no, bool& in_block, const LanguageConfig& cfg = java_config()) {
    LexedLine out;
    std::size_t i = 0;
    while (i < s.size()) {
        if (in_block) {
            out.has_comment = true;
            auto end = s.find(cfg.block_close, i);
            if (end == std::string_view::npos) return out;
            i = end + cfg.block_close.size();
            in_block = false;
            continue;
        }
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (s.substr(i, cfg.line_comment.size()) == cfg.line_comment) {
            out.has_comment = true;
            return out;
        }
        if (s.substr(i, cfg.block_open.size()) == cfg.block_open) {
            out.has_comment = true;
            in_block = true;
            i += cfg.block_open.size();
            continue;
        }
        Token t;
        t.line = line_no;
        if (c == '"' || c == '\'') {
            std::size_t j = i + 1;
            while (j < s.size() && s[j] != c) j += (s[j] == '\\') ? 2 : 1;
            j = std::min(j + 1, s.size());
            t.kind = c == '"' ? TokenKind::String : TokenKind::Char;
            t.text = std::string(s.substr(i, j - i));
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                   (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
            std::size_t j = i;
            const bool hex = c == '0' && i + 1 < s.size() && (s[i + 1] == 'x' || s[i + 1] == 'X');
            bool floating = false;
            while (j < s.size()) {
                char d = s[j];
                if (detail::ident_char(d) || d == '.') {
                    if (d == '.') floating = true;
                    if (!hex && (d == 'e' || d == 'E') && j + 1 < s.size() && (s[j + 1] == '+' || s[j + 1] == '-')) {
                        floating = true;
                        j += 2;
                        continue;
                    }
                    ++j;
                } else {
                    break;
                }
            }
            t.text = std::string(s.substr(i, j - i));
            if (!hex) {
                char last = t.text.back();
                if (last == 'f' || last == 'F' || last == 'd' || last == 'D' ||
                    t.text.find_first_of("eE") != std::string::npos)
                    floating = true;
            }
            t.kind = floating ? TokenKind::Floating : TokenKind::Integer;
            i = j;
        } else if (detail::ident_start(c)) {
            std::size_t j = i;
            while (j < s.size() && detail::ident_char(s[j])) ++j;
            t.text = std::string(s.substr(i, j - i));
            if (t.text == "true" || t.text == "false") t.kind = TokenKind::Boolean;
            else if (t.text == "null") t.kind = TokenKind::Null;
            else if (cfg.is_keyword(t.text)) t.kind = TokenKind::Keyword;
            else t.kind = TokenKind::Identifier;
            i = j;
        } else {
            t.kind = TokenKind::Punct;
            t.text = std::string(1, c);
            for (auto op : detail::kOperators) {
                if (s.substr(i, op.size()) == op) {
                    t.kind = TokenKind::Operator;
                    t.text = std::string(op);
                    break;
                }
            }
            i += t.text.size();
        }
        out.tokens.push_back(std::move(t));
    }
    return out;
}

/// Tokenizes a standalone snippet (no block comment open on entry).
inline std::vector<Token> tokenize(std::string_view text, const LanguageConfig& cfg = java_config()) {
    std::vector<Token> out;
    bool in_block = false;
    std::size_t start = 0;
    int line = 1;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto lexed = lex_line(text.substr(start, end - start), line, in_block, cfg);
        out.insert(out.end(), lexed.tokens.begin(), lexed.tokens.end());
        if (end == text.size()) break;
        start = end + 1;
        ++line;
    }
    return out;
}

inline std::string join_tokens(const std::vector<Token>& tokens, std::size_t begin, std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end && i < tokens.size(); ++i) {
        if (!out.empty()) out += ' ';
        out += tokens[i].text;
    }
    return out;
}

inline std::string join_tokens(const std::vector<Token>& tokens) { return join_tokens(tokens, 0, tokens.size()); }

}  // namespace dissect
