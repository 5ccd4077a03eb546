#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dissect/actions.hpp"
#include "dissect/analysis.hpp"
#include "dissect/metrics.hpp"

namespace dissect {

enum class Pattern {
    ConditionalBlock,
    ExpressionFix,
    WrapsWith,
    SingleLine,
    WrongReference,
    MissingNullCheck,
    CopyPaste,
    ConstantChange,
    CodeMoving
};

inline constexpr std::array<Pattern, 9> kPatterns = {
    Pattern::ConditionalBlock, Pattern::ExpressionFix,    Pattern::WrapsWith,
    Pattern::SingleLine,       Pattern::WrongReference,   Pattern::MissingNullCheck,
    Pattern::CopyPaste,        Pattern::ConstantChange,   Pattern::CodeMoving};

inline std::string_view to_string(Pattern p) {
    switch (p) {
        case Pattern::ConditionalBlock: return "ConditionalBlock";
        case Pattern::ExpressionFix: return "ExpressionFix";
        case Pattern::WrapsWith: return "WrapsWith";
        case Pattern::SingleLine: return "SingleLine";
        case Pattern::WrongReference: return "WrongReference";
        case Pattern::MissingNullCheck: return "MissingNullCheck";
        case Pattern::CopyPaste: return "CopyPaste";
        case Pattern::ConstantChange: return "ConstantChange";
        case Pattern::CodeMoving: return "CodeMoving";
    }
    return "?";
}

inline std::optional<Pattern> parse_pattern(std::string_view s) {
    for (auto p : kPatterns)
        if (to_string(p) == s) return p;
    return std::nullopt;
}

struct VariantInfo {
    std::string_view name;
    Pattern pattern;
};

inline constexpr std::array<VariantInfo, 28> kVariants = {{
    {"condBlockExcAdd", Pattern::ConditionalBlock},
    {"condBlockRetAdd", Pattern::ConditionalBlock},
    {"condBlockOthersAdd", Pattern::ConditionalBlock},
    {"condBlockRem", Pattern::ConditionalBlock},
    {"expLogicMod", Pattern::ExpressionFix},
    {"expLogicExpand", Pattern::ExpressionFix},
    {"expLogicReduce", Pattern::ExpressionFix},
    {"expArithMod", Pattern::ExpressionFix},
    {"wrapsIf", Pattern::WrapsWith},
    {"wrapsIfElse", Pattern::WrapsWith},
    {"wrapsElse", Pattern::WrapsWith},
    {"wrapsTryCatch", Pattern::WrapsWith},
    {"wrapsMethod", Pattern::WrapsWith},
    {"wrapsLoop", Pattern::WrapsWith},
    {"unwrapIf", Pattern::WrapsWith},
    {"unwrapIfElse", Pattern::WrapsWith},
    {"unwrapElse", Pattern::WrapsWith},
    {"unwrapTryCatch", Pattern::WrapsWith},
    {"unwrapMethod", Pattern::WrapsWith},
    {"unwrapLoop", Pattern::WrapsWith},
    {"singleLine", Pattern::SingleLine},
    {"wrongVarRef", Pattern::WrongReference},
    {"wrongMethodRef", Pattern::WrongReference},
    {"missNullCheckP", Pattern::MissingNullCheck},
    {"missNullCheckN", Pattern::MissingNullCheck},
    {"copyPaste", Pattern::CopyPaste},
    {"constChange", Pattern::ConstantChange},
    {"codeMove", Pattern::CodeMoving},
}};

inline std::optional<Pattern> pattern_of_variant(std::string_view v) {
    for (const auto& x : kVariants)
        if (x.name == v) return x.pattern;
    return std::nullopt;
}

/// The unwrap variants are the inverse half of the wraps-with pattern.
inline bool is_unwrap(std::string_view variant) { return starts_with(variant, "unwrap"); }

inline std::string inverse_variant(std::string_view v) {
    if (starts_with(v, "wraps")) return "unwrap" + std::string(v.substr(5));
    if (starts_with(v, "unwrap")) return "wraps" + std::string(v.substr(6));
    return std::string(v);
}

struct RepairPatternTag {
    Pattern pattern = Pattern::SingleLine;
    std::string variant;
    std::vector<Site> sites;
};

struct PatternReport {
    std::vector<RepairPatternTag> tags;  // in variant-table order
    bool classified = false;

    bool has_variant(std::string_view v) const {
        return std::any_of(tags.begin(), tags.end(), [&](const RepairPatternTag& t) { return t.variant == v; });
    }
    bool has(Pattern p) const {
        return std::any_of(tags.begin(), tags.end(), [&](const RepairPatternTag& t) { return t.pattern == p; });
    }
    std::set<std::string> variants() const {
        std::set<std::string> s;
        for (const auto& t : tags) s.insert(t.variant);
        return s;
    }
    std::set<Pattern> patterns() const {
        std::set<Pattern> s;
        for (const auto& t : tags) s.insert(t.pattern);
        return s;
    }
};

struct PatternOptions {
    double copy_paste_jaccard = 0.8;
    std::size_t copy_paste_min_tokens = 4;
};

namespace detail {

class PatternCollector {
public:
    void add(std::string_view variant, Site s) { sites_[std::string(variant)].insert(std::move(s)); }
    PatternReport finish() const {
        PatternReport r;
        for (const auto& v : kVariants) {
            auto it = sites_.find(std::string(v.name));
            if (it == sites_.end()) continue;
            r.tags.push_back({v.pattern, std::string(v.name), {it->second.begin(), it->second.end()}});
        }
        r.classified = !r.tags.empty();
        return r;
    }

private:
    std::map<std::string, std::set<Site>> sites_;
};

inline bool changed_here(const AUnit& u) { return u.has_changed && u.pair < 0; }

inline bool existing(const PatchAnalysis& pa, const AUnit& u) {
    if (!u.touched) return true;
    return u.pair >= 0 && pa.pairs[static_cast<std::size_t>(u.pair)].kind == PairKind::Same;
}

/// Opening keyword of a block header: if, elseif, else, try, catch,
/// finally, for, while, do, switch, case, default; empty otherwise.
inline std::string head_of(const AUnit& u) {
    const auto& t = u.tokens();
    if (t.empty() || t[0].kind != TokenKind::Keyword) return {};
    if (t[0].is("else")) return t.size() > 1 && t[1].is("if") ? "elseif" : "else";
    static const std::set<std::string, std::less<>> heads = {"if", "try", "catch", "finally", "for", "while", "do", "switch", "case", "default"};
    return heads.count(t[0].text) ? t[0].text : std::string();
}

inline bool line_starts_with_closer(const PatchAnalysis& pa, std::size_t u) {
    const AUnit& x = pa.units[u];
    const auto& v = pa.files[x.file].view(x.side);
    if (x.pos == 0) return false;
    const AUnit& prev = pa.units[v.units[x.pos - 1]];
    return prev.su.closes_block() && prev.su.first_line == x.su.first_line && changed_here(prev);
}

/// Units of a `case`/`default` arm: up to the next label or the switch's end.
inline std::vector<std::size_t> case_body(const PatchAnalysis& pa, std::size_t u) {
    const AUnit& x = pa.units[u];
    const auto& v = pa.files[x.file].view(x.side);
    std::vector<std::size_t> out;
    int depth = 0;
    for (std::size_t p = x.pos + 1; p < v.units.size(); ++p) {
        const AUnit& y = pa.units[v.units[p]];
        const std::string h = head_of(y);
        if (depth == 0 && (h == "case" || h == "default")) break;
        if (y.su.closes_block()) {
            if (depth == 0) break;
            --depth;
        } else if (y.su.opens_block()) {
            ++depth;
        }
        out.push_back(v.units[p]);
    }
    return out;
}

inline void block_patterns(const PatchAnalysis& pa, PatternCollector& out) {
    for (Side side : {Side::New, Side::Old}) {
        const bool add = side == Side::New;
        for (std::size_t ui : pa.unpaired(side)) {
            const AUnit& u = pa.units[ui];
            if (!u.has_changed) continue;
            const std::string head = head_of(u);
            if (head.empty()) continue;
            const Site site = site_of(pa, u);
            const bool conditional = head == "if" || head == "elseif" || head == "else" || head == "case" || head == "default";

            if (head == "case" || head == "default") {
                auto body = case_body(pa, ui);
                std::vector<std::size_t> real;
                for (auto b : body)
                    if (!pa.units[b].su.trivial()) real.push_back(b);
                if (real.empty()) continue;
                if (std::all_of(body.begin(), body.end(), [&](std::size_t b) { return changed_here(pa.units[b]); })) {
                    bool thr = false, ret = false;
                    for (auto b : body) {
                        thr |= pa.units[b].feat.throw_stmt;
                        ret |= pa.units[b].feat.returns;
                    }
                    out.add(!add ? "condBlockRem" : thr ? "condBlockExcAdd" : ret ? "condBlockRetAdd" : "condBlockOthersAdd", site);
                }
                continue;
            }

            if (!u.su.opens_block()) {
                // Brace-less `if (c) stmt;` that is entirely new or entirely gone.
                if (conditional && head != "else") {
                    out.add(!add ? "condBlockRem" : u.feat.throw_stmt ? "condBlockExcAdd" : u.feat.returns ? "condBlockRetAdd" : "condBlockOthersAdd", site);
                }
                continue;
            }
            auto closer = pa.block_closer(ui);
            if (!closer) continue;
            const bool closed_here = changed_here(pa.units[*closer]);
            if (!closed_here && !line_starts_with_closer(pa, ui)) continue;
            const auto body = pa.block_body(ui, *closer);
            std::vector<std::size_t> real;
            for (auto b : body)
                if (!pa.units[b].su.trivial()) real.push_back(b);
            if (real.empty()) continue;
            const bool all_changed = std::all_of(body.begin(), body.end(), [&](std::size_t b) { return changed_here(pa.units[b]); });
            const bool any_existing = std::any_of(real.begin(), real.end(), [&](std::size_t b) { return existing(pa, pa.units[b]); });

            if (conditional && all_changed) {
                bool thr = false, ret = false;
                for (auto b : body) {
                    thr |= pa.units[b].feat.throw_stmt;
                    ret |= pa.units[b].feat.returns;
                }
                out.add(!add ? "condBlockRem" : thr ? "condBlockExcAdd" : ret ? "condBlockRetAdd" : "condBlockOthersAdd", site);
            }
            if (any_existing && closed_here) {
                std::string v;
                if (head == "if" || head == "elseif") {
                    v = "If";
                    auto nx = pa.next_in_view(*closer);
                    if (nx && head_of(pa.units[*nx]).rfind("else", 0) == 0 && changed_here(pa.units[*nx])) v = "IfElse";
                } else if (head == "else") {
                    v = "Else";
                } else if (head == "try") {
                    v = "TryCatch";
                } else if (head == "for" || head == "while" || head == "do") {
                    v = "Loop";
                }
                if (!v.empty()) out.add((add ? "wraps" : "unwrap") + v, site);
            }
        }
    }
}

inline bool is_subsequence_pair(const UnitPair& p, std::size_t n_small) { return p.matched.size() == n_small; }

/// Wrapping inside one statement: a ternary, a call, or a brace-less if put
/// around the old expression (and the reverse).
inline void inline_wraps(const PatchAnalysis& pa, const UnitPair& p, PatternCollector& out) {
    const AUnit& o = pa.units[p.old_unit];
    const AUnit& n = pa.units[p.new_unit];
    const int ot = ternaries_in(o, 0, o.tokens().size()), nt = ternaries_in(n, 0, n.tokens().size());
    for (int dir = 0; dir < 2; ++dir) {
        const bool wrap = dir == 0;
        const AUnit& small = wrap ? o : n;
        const AUnit& big = wrap ? n : o;
        if (!is_subsequence_pair(p, small.tokens().size()) || big.tokens().size() <= small.tokens().size()) continue;
        const std::string pre = wrap ? "wraps" : "unwrap";
        const Site site = site_of(pa, big);
        if ((wrap ? nt > ot : ot > nt)) out.add(pre + "IfElse", site);
        // A call that only exists on the bigger side and encloses matched tokens.
        std::set<std::size_t> matched_big;
        for (auto [a, b] : p.matched) matched_big.insert(wrap ? b : a);
        for (const auto& c : big.feat.calls) {
            if (matched_big.count(c.name_index)) continue;
            bool encloses = false;
            for (std::size_t k = c.open_index + 1; k < c.close_index; ++k)
                if (matched_big.count(k)) encloses = true;
            if (encloses) {
                out.add(pre + "Method", site);
                break;
            }
        }
        if (!big.tokens().empty() && big.tokens()[0].is("if") && !matched_big.count(0) && !big.su.opens_block()) out.add(pre + "If", site);
    }
}

/// Top-level clauses of a logic expression in [b, e).
inline std::vector<std::string> clauses(const std::vector<Token>& t, std::size_t b, std::size_t e) {
    std::vector<std::string> out;
    int depth = 0;
    std::size_t start = b;
    auto flush = [&](std::size_t end) {
        std::size_t s = start, x = end;
        while (x > s + 1 && t[s].is("(") && match_forward(t, s) == x - 1) {
            ++s;
            --x;
        }
        if (x > s) out.push_back(join_tokens(t, s, x));
    };
    for (std::size_t i = b; i < e; ++i) {
        if (t[i].is("(")) ++depth;
        else if (t[i].is(")")) --depth;
        else if (depth == 0 && (t[i].is("&&") || t[i].is("||"))) {
            flush(i);
            start = i + 1;
        }
    }
    flush(e);
    return out;
}

/// Token range of the logic expression of a statement: an if/while
/// condition, or the value of a return or assignment using && / ||.
inline std::optional<std::pair<std::size_t, std::size_t>> logic_range(const AUnit& u) {
    const auto& t = u.tokens();
    std::size_t k = 0;
    if (k < t.size() && t[k].is("else")) ++k;
    if (k + 1 < t.size() && (t[k].is("if") || t[k].is("while")) && t[k + 1].is("(")) {
        const std::size_t close = match_forward(t, k + 1);
        if (close < t.size()) return std::make_pair(k + 2, close);
    }
    if (!u.feat.logic_operator) return std::nullopt;
    std::size_t start = 0;
    if (u.feat.returns) {
        while (start < t.size() && !t[start].is("return")) ++start;
        ++start;
    } else if (!u.feat.assignments.empty()) {
        start = u.feat.assignments.front().op_index + 1;
    } else if (u.feat.var_decl && u.feat.var_decl->init_index) {
        start = *u.feat.var_decl->init_index + 1;
    } else {
        return std::nullopt;
    }
    std::size_t end = t.size();
    if (end > start && t[end - 1].is(";")) --end;
    return std::make_pair(start, end);
}

inline bool logic_token(const Token& t) {
    static const std::set<std::string, std::less<>> ops = {"&&", "||", "!", "==", "!=", "<", ">", "<=", ">=", "instanceof"};
    return ops.count(t.text) > 0;
}

inline bool arith_token(const Token& t) { return t.is("+") || t.is("-") || t.is("*") || t.is("/") || t.is("%"); }

inline void expression_patterns(const PatchAnalysis& pa, const UnitPair& p, PatternCollector& out) {
    const AUnit& o = pa.units[p.old_unit];
    const AUnit& n = pa.units[p.new_unit];
    const Site site = site_of(pa, n);
    auto lo = logic_range(o), ln = logic_range(n);
    if (lo && ln) {
        auto co = clauses(o.tokens(), lo->first, lo->second);
        auto cn = clauses(n.tokens(), ln->first, ln->second);
        std::set<std::string> so(co.begin(), co.end()), sn(cn.begin(), cn.end());
        if (so != sn) {
            const bool sub = std::includes(sn.begin(), sn.end(), so.begin(), so.end());
            const bool super = std::includes(so.begin(), so.end(), sn.begin(), sn.end());
            bool logic_edit = co.size() != cn.size();
            for (const auto& r : p.regions) {
                for (std::size_t i = r.ob; i < r.oe; ++i) logic_edit |= logic_token(o.tokens()[i]);
                for (std::size_t i = r.nb; i < r.ne; ++i) logic_edit |= logic_token(n.tokens()[i]);
            }
            if (sub) out.add("expLogicExpand", site);
            else if (super) out.add("expLogicReduce", site);
            else if (logic_edit) out.add("expLogicMod", site);
        }
    }
    // Arithmetic: an operator or grouping change inside an arithmetic
    // expression that is assigned or returned.
    const bool valued = n.feat.returns || n.feat.assignment() || (n.feat.var_decl && n.feat.var_decl->init_index);
    bool pair_structural = false;
    for (const auto& r : p.regions) pair_structural |= structural_edit(o, n, r);
    for (const auto& r : p.regions) {
        if (!valued) break;
        if (pair_structural && paren_only(o, n, r)) continue;  // closing paren of a wrapping call
        if (swap_kind(o, n, r) != SwapKind::None || structural_edit(o, n, r)) continue;
        bool arith = false;
        for (std::size_t i = r.ob; i < r.oe; ++i) arith |= arith_token(o.tokens()[i]);
        for (std::size_t i = r.nb; i < r.ne; ++i) arith |= arith_token(n.tokens()[i]);
        if (!arith && paren_only(o, n, r) && n.feat.arithmetic_operator) {
            // parentheses regrouping operands of an arithmetic operator
            const std::size_t k = r.ne > r.nb ? r.nb : r.ob;
            const auto& t = r.ne > r.nb ? n.tokens() : o.tokens();
            for (std::size_t d = 1; d <= 2; ++d) {
                if (k >= d && arith_token(t[k - d])) arith = true;
                if (k + d < t.size() && arith_token(t[k + d])) arith = true;
            }
        }
        if (arith) {
            out.add("expArithMod", site);
            break;
        }
    }
}

inline bool null_compare_at(const std::vector<Token>& t, std::size_t null_idx, std::string_view& op) {
    if (null_idx >= 1 && (t[null_idx - 1].is("==") || t[null_idx - 1].is("!="))) {
        op = t[null_idx - 1].text;
        return true;
    }
    if (null_idx + 1 < t.size() && (t[null_idx + 1].is("==") || t[null_idx + 1].is("!="))) {
        op = t[null_idx + 1].text;
        return true;
    }
    return false;
}

inline void null_checks(const PatchAnalysis& pa, PatternCollector& out) {
    auto emit = [&](std::string_view op, const Site& s) { out.add(op == "==" ? "missNullCheckP" : "missNullCheckN", s); };
    for (std::size_t ui : pa.unpaired(Side::New)) {
        const AUnit& u = pa.units[ui];
        if (!u.has_changed) continue;
        const std::string head = head_of(u);
        const bool cond = head == "if" || head == "elseif" || head == "while" || u.feat.ternaries > 0;
        if (!cond) continue;
        const auto& t = u.tokens();
        for (std::size_t i = 0; i < t.size(); ++i) {
            std::string_view op;
            if (t[i].kind == TokenKind::Null && null_compare_at(t, i, op)) emit(op, site_at(pa, u, i));
        }
    }
    for (const auto& p : pa.pairs) {
        if (p.kind != PairKind::Modified) continue;
        const AUnit& o = pa.units[p.old_unit];
        const AUnit& n = pa.units[p.new_unit];
        // Only conditions can gain a null check.
        auto ln = logic_range(n);
        const bool cond_stmt = ln && (head_of(n) == "if" || head_of(n) == "elseif" || head_of(n) == "while");
        std::set<std::string> old_clauses;
        if (auto lo = logic_range(o)) {
            auto c = clauses(o.tokens(), lo->first, lo->second);
            old_clauses.insert(c.begin(), c.end());
        }
        for (const auto& r : p.regions) {
            const bool adds_ternary = ternaries_in(n, r.nb, r.ne) > ternaries_in(o, r.ob, r.oe);
            for (std::size_t i = r.nb; i < r.ne; ++i) {
                std::string_view op;
                if (n.tokens()[i].kind != TokenKind::Null || !null_compare_at(n.tokens(), i, op)) continue;
                // the operator must be new as well
                const std::size_t opi = (i >= 1 && (n.tokens()[i - 1].is("==") || n.tokens()[i - 1].is("!="))) ? i - 1 : i + 1;
                if (opi < r.nb || opi >= r.ne) continue;
                bool in_new_clause = false;
                if (cond_stmt) {
                    for (const auto& c : clauses(n.tokens(), ln->first, ln->second))
                        if (!old_clauses.count(c) && c.find("null") != std::string::npos) in_new_clause = true;
                }
                if (adds_ternary || in_new_clause) emit(op, site_at(pa, n, i));
            }
        }
    }
}

inline bool constant_token(const std::vector<Token>& t, std::size_t i) {
    const Token& x = t[i];
    if (x.is_literal()) return x.kind != TokenKind::Null;
    if (x.kind != TokenKind::Identifier) return false;
    if (all_caps(x.text)) return true;
    // Enum-like: Qualifier.NAME where the qualifier is a capitalised type name.
    return i >= 2 && t[i - 1].is(".") && t[i - 2].kind == TokenKind::Identifier && std::isupper(static_cast<unsigned char>(t[i - 2].text[0])) &&
           std::isupper(static_cast<unsigned char>(x.text[0]));
}

inline bool constant_change(const PatchAnalysis& pa, const UnitPair& p) {
    if (p.regions.empty()) return false;
    const AUnit& o = pa.units[p.old_unit];
    const AUnit& n = pa.units[p.new_unit];
    for (const auto& r : p.regions) {
        if (r.oe != r.ob + 1 || r.ne != r.nb + 1) return false;
        if (!constant_token(o.tokens(), r.ob) || !constant_token(n.tokens(), r.nb)) return false;
    }
    return true;
}

inline std::vector<std::string> abstract_ids(const std::vector<Token>& t) {
    std::vector<std::string> out;
    for (const auto& x : t) out.push_back(x.kind == TokenKind::Identifier ? "ID" : x.text);
    return out;
}

inline double trigram_jaccard(const std::vector<Token>& a, const std::vector<Token>& b) {
    auto grams = [](const std::vector<Token>& t) {
        std::set<std::string> g;
        if (t.size() < 3) {
            g.insert(join_tokens(t));
            return g;
        }
        for (std::size_t i = 0; i + 2 < t.size(); ++i) g.insert(t[i].text + "\x1f" + t[i + 1].text + "\x1f" + t[i + 2].text);
        return g;
    };
    auto ga = grams(a), gb = grams(b);
    std::size_t inter = 0;
    for (const auto& x : ga) inter += gb.count(x);
    const std::size_t uni = ga.size() + gb.size() - inter;
    return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

inline void copy_paste(const PatchAnalysis& pa, const PatternOptions& opt, PatternCollector& out) {
    struct Sig {
        std::vector<Token> old_t, new_t;
        Site site;
    };
    std::map<int, Sig> sigs;
    for (const auto& u : pa.units) {
        if (!u.has_changed || u.chunk < 0) continue;
        if (u.pair >= 0 && pa.pairs[static_cast<std::size_t>(u.pair)].kind == PairKind::Same) continue;
        auto& s = sigs[u.chunk];
        auto& dst = u.side == Side::Old ? s.old_t : s.new_t;
        if (dst.empty() && u.side == Side::New) s.site = site_of(pa, u);
        dst.insert(dst.end(), u.tokens().begin(), u.tokens().end());
    }
    std::vector<const Sig*> cands;
    for (const auto& [c, s] : sigs)
        if (s.new_t.size() >= opt.copy_paste_min_tokens) cands.push_back(&s);
    auto texts = [](const std::vector<Token>& t) {
        std::vector<std::string> v;
        for (const auto& x : t) v.push_back(x.text);
        return v;
    };
    for (std::size_t i = 0; i < cands.size(); ++i) {
        for (std::size_t j = i + 1; j < cands.size(); ++j) {
            const Sig& a = *cands[i];
            const Sig& b = *cands[j];
            bool match = texts(a.new_t) == texts(b.new_t) && texts(a.old_t) == texts(b.old_t);
            if (!match && abstract_ids(a.new_t) == abstract_ids(b.new_t) && abstract_ids(a.old_t) == abstract_ids(b.old_t))
                match = trigram_jaccard(a.new_t, b.new_t) >= opt.copy_paste_jaccard;
            if (match) {
                out.add("copyPaste", a.site);
                out.add("copyPaste", b.site);
            }
        }
    }
}

inline void wrong_reference(const PatchAnalysis& pa, PatternCollector& out) {
    for (Side s : {Side::Old, Side::New})
        for (auto u : pa.unpaired(s))
            if (pa.units[u].has_changed) return;
    if (pa.count_pairs(PairKind::Moved) > 0) return;
    std::optional<std::pair<std::string, std::string>> edit;
    SwapKind kind = SwapKind::None;
    Site site;
    bool any = false;
    for (const auto& p : pa.pairs) {
        if (p.kind != PairKind::Modified) continue;
        const AUnit& o = pa.units[p.old_unit];
        const AUnit& n = pa.units[p.new_unit];
        for (const auto& r : p.regions) {
            const SwapKind k = swap_kind(o, n, r);
            if (k == SwapKind::None) return;
            auto e = std::make_pair(join_tokens(o.tokens(), r.ob, r.oe), join_tokens(n.tokens(), r.nb, r.ne));
            if (edit && *edit != e) return;
            edit = e;
            kind = k;
            if (!any) site = site_at(pa, n, r.nb);
            any = true;
        }
    }
    if (!any) return;
    out.add(kind == SwapKind::MethodMethod || kind == SwapKind::CallToVar ? "wrongMethodRef" : "wrongVarRef", site);
}

inline bool single_line(const PatchAnalysis& pa, int patch_size) {
    if (patch_size == 1) return true;
    std::size_t statements = pa.count_pairs(PairKind::Modified) + pa.count_pairs(PairKind::Moved);
    for (Side s : {Side::Old, Side::New})
        for (auto u : pa.unpaired(s))
            if (pa.units[u].has_changed) ++statements;
    return statements == 1;
}

}  // namespace detail

/// Tags the repair patterns of an analysed patch. Every rule fires on its
/// own; patterns are not mutually exclusive.
inline PatternReport detect_patterns(const PatchAnalysis& pa, const ActionReport& actions, int patch_size,
                                     const PatternOptions& opt = {}) {
    (void)actions;
    detail::PatternCollector out;
    detail::block_patterns(pa, out);
    for (const auto& p : pa.pairs) {
        if (p.kind == PairKind::Modified) {
            detail::inline_wraps(pa, p, out);
            detail::expression_patterns(pa, p, out);
            if (detail::constant_change(pa, p)) out.add("constChange", detail::site_of(pa, pa.units[p.new_unit]));
        }
        if (p.kind == PairKind::Moved) {
            out.add("codeMove", detail::site_of(pa, pa.units[p.old_unit]));
            out.add("codeMove", detail::site_of(pa, pa.units[p.new_unit]));
        }
    }
    detail::null_checks(pa, out);
    detail::copy_paste(pa, opt, out);
    detail::wrong_reference(pa, out);
    if (detail::single_line(pa, patch_size)) {
        Site s;
        for (const auto& u : pa.units)
            if (u.has_changed) {
                s = detail::site_of(pa, u);
                break;
            }
        out.add("singleLine", s);
    }
    return out.finish();
}

/// Patches per pattern, most frequent first.
inline std::vector<std::pair<std::string, int>> pattern_rank(const std::vector<std::set<Pattern>>& per_patch) {
    std::vector<std::pair<std::string, int>> out;
    for (auto p : kPatterns) {
        int n = 0;
        for (const auto& s : per_patch) n += s.count(p) ? 1 : 0;
        if (n > 0) out.emplace_back(std::string(to_string(p)), n);
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

/// For each pattern (and "NotClassified"), how many of the patches showing
/// it contain each action.
inline std::map<std::string, std::map<std::string, int>> pattern_action_composition(
    const std::vector<std::pair<std::set<std::string>, std::set<Pattern>>>& records) {
    std::map<std::string, std::map<std::string, int>> out;
    for (const auto& [acts, pats] : records) {
        std::vector<std::string> rows;
        for (auto p : pats) rows.emplace_back(to_string(p));
        if (pats.empty()) rows.emplace_back("NotClassified");
        for (const auto& row : rows) {
            auto& r = out[row];
            for (const auto& a : acts) ++r[a];
        }
    }
    return out;
}

}  // namespace dissect
