#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dissect/analysis.hpp"

namespace dissect {

// ---------------------------------------------------------------------------
// Taxonomy
// ---------------------------------------------------------------------------

enum class ActionGroup {
    Assignment,
    Conditional,
    Loop,
    MethodCall,
    MethodDefinition,
    ObjectInstantiation,
    Exception,
    Return,
    Variable,
    Type
};

enum class ActionType { Addition, Removal, Modification };

struct ActionInfo {
    std::string_view acronym;
    ActionGroup group;
    ActionType type;
};

inline constexpr std::array<ActionInfo, 28> kActions = {{
    {"asgnA", ActionGroup::Assignment, ActionType::Addition},
    {"asgnR", ActionGroup::Assignment, ActionType::Removal},
    {"asgnM", ActionGroup::Assignment, ActionType::Modification},
    {"cndA", ActionGroup::Conditional, ActionType::Addition},
    {"cndR", ActionGroup::Conditional, ActionType::Removal},
    {"cndM", ActionGroup::Conditional, ActionType::Modification},
    {"lpA", ActionGroup::Loop, ActionType::Addition},
    {"lpR", ActionGroup::Loop, ActionType::Removal},
    {"lpM", ActionGroup::Loop, ActionType::Modification},
    {"mcA", ActionGroup::MethodCall, ActionType::Addition},
    {"mcR", ActionGroup::MethodCall, ActionType::Removal},
    {"mcM", ActionGroup::MethodCall, ActionType::Modification},
    {"mdA", ActionGroup::MethodDefinition, ActionType::Addition},
    {"mdR", ActionGroup::MethodDefinition, ActionType::Removal},
    {"mdM", ActionGroup::MethodDefinition, ActionType::Modification},
    {"objA", ActionGroup::ObjectInstantiation, ActionType::Addition},
    {"objR", ActionGroup::ObjectInstantiation, ActionType::Removal},
    {"objM", ActionGroup::ObjectInstantiation, ActionType::Modification},
    {"exA", ActionGroup::Exception, ActionType::Addition},
    {"exR", ActionGroup::Exception, ActionType::Removal},
    {"retA", ActionGroup::Return, ActionType::Addition},
    {"retR", ActionGroup::Return, ActionType::Removal},
    {"retM", ActionGroup::Return, ActionType::Modification},
    {"varA", ActionGroup::Variable, ActionType::Addition},
    {"varR", ActionGroup::Variable, ActionType::Removal},
    {"varM", ActionGroup::Variable, ActionType::Modification},
    {"tyA", ActionGroup::Type, ActionType::Addition},
    {"tyM", ActionGroup::Type, ActionType::Modification},
}};

inline std::optional<ActionInfo> find_action(std::string_view acronym) {
    for (const auto& a : kActions)
        if (a.acronym == acronym) return a;
    return std::nullopt;
}

inline std::string_view to_string(ActionGroup g) {
    switch (g) {
        case ActionGroup::Assignment: return "Assignment";
        case ActionGroup::Conditional: return "Conditional";
        case ActionGroup::Loop: return "Loop";
        case ActionGroup::MethodCall: return "MethodCall";
        case ActionGroup::MethodDefinition: return "MethodDefinition";
        case ActionGroup::ObjectInstantiation: return "ObjectInstantiation";
        case ActionGroup::Exception: return "Exception";
        case ActionGroup::Return: return "Return";
        case ActionGroup::Variable: return "Variable";
        case ActionGroup::Type: return "Type";
    }
    return "?";
}

inline std::string_view to_string(ActionType t) {
    switch (t) {
        case ActionType::Addition: return "Addition";
        case ActionType::Removal: return "Removal";
        case ActionType::Modification: return "Modification";
    }
    return "?";
}

inline std::optional<ActionGroup> parse_action_group(std::string_view s) {
    for (const auto& a : kActions)
        if (to_string(a.group) == s) return a.group;
    return std::nullopt;
}

struct Site {
    std::string file;
    int line = 0;
    Side side = Side::New;
    friend bool operator==(const Site&, const Site&) = default;
    friend bool operator<(const Site& a, const Site& b) {
        return std::tie(a.file, a.line, a.side) < std::tie(b.file, b.line, b.side);
    }
};

struct RepairActionTag {
    std::string acronym;
    ActionGroup group = ActionGroup::Assignment;
    ActionType action = ActionType::Addition;
    std::vector<Site> sites;
};

struct ActionReport {
    std::vector<RepairActionTag> tags;  // in taxonomy order

    bool has(std::string_view acronym) const {
        return std::any_of(tags.begin(), tags.end(), [&](const RepairActionTag& t) { return t.acronym == acronym; });
    }
    std::set<std::string> acronyms() const {
        std::set<std::string> s;
        for (const auto& t : tags) s.insert(t.acronym);
        return s;
    }
    int kind_count() const { return static_cast<int>(tags.size()); }
};

// ---------------------------------------------------------------------------
// Token helpers shared with the pattern detectors
// ---------------------------------------------------------------------------

namespace detail {

inline bool all_caps(std::string_view s) {
    bool letter = false;
    for (char c : s) {
        if (std::islower(static_cast<unsigned char>(c))) return false;
        if (std::isupper(static_cast<unsigned char>(c))) letter = true;
    }
    return letter;
}

inline bool ternary_at(const std::vector<Token>& t, std::size_t i) {
    if (!t[i].is("?")) return false;
    if (i > 0 && (t[i - 1].is("<") || t[i - 1].is(","))) return false;
    if (i + 1 < t.size() && (t[i + 1].is(">") || t[i + 1].is(",") || t[i + 1].is("extends") || t[i + 1].is("super")))
        return false;
    return true;
}

inline std::vector<std::string> callees_in(const AUnit& u, std::size_t b, std::size_t e) {
    std::vector<std::string> out;
    for (const auto& c : u.feat.calls)
        if (c.name_index >= b && c.name_index < e) out.push_back(c.callee);
    return out;
}

inline std::vector<std::string> news_in(const AUnit& u, std::size_t b, std::size_t e) {
    std::vector<std::string> out;
    for (const auto& n : u.feat.instantiations)
        if (!n.thrown && n.new_index >= b && n.new_index < e) out.push_back(n.type);
    return out;
}

inline int ternaries_in(const AUnit& u, std::size_t b, std::size_t e) {
    int n = 0;
    for (std::size_t i = b; i < e; ++i) n += ternary_at(u.tokens(), i);
    return n;
}

/// Removes the common part of two multisets, leaving the surplus of each.
inline void cancel_common(std::vector<std::string>& a, std::vector<std::string>& b) {
    std::vector<std::string> ra;
    for (auto& x : a) {
        auto it = std::find(b.begin(), b.end(), x);
        if (it != b.end()) b.erase(it);
        else ra.push_back(x);
    }
    a = std::move(ra);
}

inline bool is_callee(const std::vector<Token>& t, std::size_t i) { return i + 1 < t.size() && t[i + 1].is("("); }

/// `[recv .]* name ( ... )` spanning exactly [b, e).
inline bool call_expression(const std::vector<Token>& t, std::size_t b, std::size_t e) {
    if (e <= b + 2 || !t[e - 1].is(")")) return false;
    std::size_t i = b;
    while (i + 1 < e && (t[i].kind == TokenKind::Identifier || t[i].is("this")) && t[i + 1].is(".")) i += 2;
    if (i + 1 >= e || t[i].kind != TokenKind::Identifier || !t[i + 1].is("(")) return false;
    return match_forward(t, i + 1) == e - 1;
}

inline bool single_identifier(const std::vector<Token>& t, std::size_t b, std::size_t e) {
    return e == b + 1 && t[b].kind == TokenKind::Identifier;
}

enum class SwapKind { None, VarVar, MethodMethod, VarToCall, CallToVar };

/// Classifies a region as a reference swap: one name used in place of
/// another. Swaps between two ALL_CAPS constants are constant changes, not
/// wrong references.
inline SwapKind swap_kind(const AUnit& o, const AUnit& n, const EditRegion& r) {
    const auto& a = o.tokens();
    const auto& b = n.tokens();
    const bool oid = single_identifier(a, r.ob, r.oe);
    const bool nid = single_identifier(b, r.nb, r.ne);
    if (oid && nid) {
        // heuristic: type positions (`new T`, `T name`) are not references
        auto type_pos = [](const std::vector<Token>& t, std::size_t i) {
            return (i > 0 && t[i - 1].is("new")) || (i + 1 < t.size() && t[i + 1].kind == TokenKind::Identifier);
        };
        if (type_pos(a, r.ob) || type_pos(b, r.nb)) return SwapKind::None;
        const bool oc = is_callee(a, r.ob), nc = is_callee(b, r.nb);
        if (oc && nc) return SwapKind::MethodMethod;
        if (oc || nc) return SwapKind::None;
        if (all_caps(a[r.ob].text) && all_caps(b[r.nb].text)) return SwapKind::None;
        return SwapKind::VarVar;
    }
    // heuristic: a field read traded for a call (or back) counts as a reference swap
    if (oid && !is_callee(a, r.ob) && call_expression(b, r.nb, r.ne)) return SwapKind::VarToCall;
    if (nid && !is_callee(b, r.nb) && call_expression(a, r.ob, r.oe)) return SwapKind::CallToVar;
    return SwapKind::None;
}

enum class ContainerKind { CallArgs, NewArgs, IfCond, SwitchCond, LoopHeader, CatchHeader, Group, Ternary, CaseLabel, Return, AssignRHS, DeclInit };

struct Container {
    ContainerKind kind;
    std::size_t anchor = 0;  // callee name / `new` token / '(' index
    std::size_t open = 0;
    std::size_t close = 0;
};

/// Syntactic contexts enclosing token `idx`, innermost first.
inline std::vector<Container> containers_at(const AUnit& u, std::size_t idx) {
    const auto& t = u.tokens();
    std::vector<std::size_t> stack;  // indices of open parens
    for (std::size_t i = 0; i < idx && i < t.size(); ++i) {
        if (t[i].is("(")) stack.push_back(i);
        else if (t[i].is(")") && !stack.empty()) stack.pop_back();
    }
    auto has_ternary = [&](std::size_t from, std::size_t to) {
        int depth = 0;
        for (std::size_t i = from; i < to && i < t.size(); ++i) {
            if (t[i].is("(")) ++depth;
            else if (t[i].is(")")) --depth;
            else if (depth == 0 && ternary_at(t, i)) return true;
        }
        return false;
    };
    std::vector<Container> out;
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
        const std::size_t open = *it;
        const std::size_t close = match_forward(t, open);
        if (has_ternary(open + 1, close)) out.push_back({ContainerKind::Ternary, open, open, close});
        Container c{ContainerKind::Group, open, open, close};
        if (open > 0) {
            const Token& p = t[open - 1];
            if (p.is("if")) c.kind = ContainerKind::IfCond;
            else if (p.is("switch")) c.kind = ContainerKind::SwitchCond;
            else if (p.is("while") || p.is("for")) c.kind = ContainerKind::LoopHeader;
            else if (p.is("catch")) c.kind = ContainerKind::CatchHeader;
            else if (p.is("this") || p.is("super")) {
                c.kind = ContainerKind::CallArgs;
                c.anchor = open - 1;
            } else if (p.kind == TokenKind::Identifier) {
                std::size_t b = open - 1;
                while (b >= 2 && t[b - 1].is(".") && t[b - 2].kind == TokenKind::Identifier) b -= 2;
                if (b >= 1 && t[b - 1].is("new")) {
                    c.kind = ContainerKind::NewArgs;
                    c.anchor = b - 1;
                } else if (!(u.feat.method_decl && u.feat.method_decl->name_index == open - 1)) {
                    c.kind = ContainerKind::CallArgs;
                    c.anchor = open - 1;
                }
            } else if (p.is(">")) {
                // generic constructor: new Foo<Bar>(
                std::size_t b = open - 1;
                int depth = 0;
                while (b > 0) {
                    if (t[b].is(">")) ++depth;
                    else if (t[b].is("<") && --depth == 0) break;
                    --b;
                }
                while (b >= 1 && (t[b - 1].kind == TokenKind::Identifier || t[b - 1].is("."))) --b;
                if (b >= 1 && t[b - 1].is("new")) {
                    c.kind = ContainerKind::NewArgs;
                    c.anchor = b - 1;
                }
            }
        }
        out.push_back(c);
    }
    if (!t.empty() && t[0].is("case")) {
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (t[i].is(":")) {
                if (idx < i) out.push_back({ContainerKind::CaseLabel, 0, 0, i});
                break;
            }
        }
    }
    if (has_ternary(0, t.size())) {
        // A top-level ternary only encloses the region if it sits in the same statement part.
        std::size_t q = 0;
        for (std::size_t i = 0; i < t.size(); ++i)
            if (ternary_at(t, i)) q = i;
        std::size_t start = 0;
        for (const auto& a : u.feat.assignments) start = std::max(start, a.op_index + 1);
        if (u.feat.returns) start = std::max<std::size_t>(start, 1);
        if (idx >= start && q > 0) out.push_back({ContainerKind::Ternary, q, start, t.size()});
    }
    if (u.feat.returns && !t.empty()) {
        std::size_t r = 0;
        while (r < t.size() && !t[r].is("return")) ++r;
        if (r < idx) out.push_back({ContainerKind::Return, r, r, t.size()});
    }
    for (const auto& a : u.feat.assignments) {
        if (a.op != "++" && a.op != "--" && a.op_index < idx) {
            out.push_back({ContainerKind::AssignRHS, a.op_index, a.op_index, t.size()});
            break;
        }
    }
    if (u.feat.var_decl && u.feat.var_decl->init_index && *u.feat.var_decl->init_index < idx)
        out.push_back({ContainerKind::DeclInit, *u.feat.var_decl->init_index, *u.feat.var_decl->init_index, t.size()});
    return out;
}

/// LCS partner of a token index on the other side, if it was matched.
inline std::optional<std::size_t> partner(const UnitPair& p, std::size_t idx, bool from_old) {
    for (auto [o, n] : p.matched) {
        if (from_old && o == idx) return n;
        if (!from_old && n == idx) return o;
    }
    return std::nullopt;
}

inline bool paren_only(const AUnit& o, const AUnit& n, const EditRegion& r) {
    for (std::size_t i = r.ob; i < r.oe; ++i)
        if (!o.tokens()[i].is("(") && !o.tokens()[i].is(")")) return false;
    for (std::size_t i = r.nb; i < r.ne; ++i)
        if (!n.tokens()[i].is("(") && !n.tokens()[i].is(")")) return false;
    return true;
}

/// Whether the region inserts or deletes a call, an instantiation or a
/// ternary.
inline bool structural_edit(const AUnit& o, const AUnit& n, const EditRegion& r) {
    auto oc = callees_in(o, r.ob, r.oe), nc = callees_in(n, r.nb, r.ne);
    cancel_common(oc, nc);
    if (oc.size() != nc.size()) return true;
    auto on = news_in(o, r.ob, r.oe), nn = news_in(n, r.nb, r.ne);
    cancel_common(on, nn);
    if (on.size() != nn.size()) return true;
    return ternaries_in(o, r.ob, r.oe) != ternaries_in(n, r.nb, r.ne);
}

inline int count_keywords(const AUnit& u, std::initializer_list<std::string_view> kws) {
    int n = 0;
    for (const auto& t : u.tokens())
        if (t.kind == TokenKind::Keyword && std::find(kws.begin(), kws.end(), t.text) != kws.end()) ++n;
    return n;
}

inline bool in_loop_header(const AUnit& u) { return !u.tokens().empty() && u.tokens().front().is("for"); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Detection
// ---------------------------------------------------------------------------

class ActionCollector {
public:
    void add(std::string_view acronym, Site site) { sites_[std::string(acronym)].insert(std::move(site)); }

    const std::map<std::string, std::set<Site>>& sites() const { return sites_; }
    void erase(const std::string& acronym) { sites_.erase(acronym); }

private:
    std::map<std::string, std::set<Site>> sites_;
};

namespace detail {

inline Site site_at(const PatchAnalysis& pa, const AUnit& u, std::size_t token) {
    const auto& t = u.tokens();
    const int line = token < t.size() ? t[token].line : u.line();
    return Site{pa.path_of(u), line, u.side};
}

inline Site site_of(const PatchAnalysis& pa, const AUnit& u) { return Site{pa.path_of(u), u.line(), u.side}; }

/// Tags of one edit region of a modified statement pair.
inline void region_actions(const PatchAnalysis& pa, const UnitPair& p, const EditRegion& r, bool pair_structural,
                           ActionCollector& out) {
    const AUnit& o = pa.units[p.old_unit];
    const AUnit& n = pa.units[p.new_unit];
    const Site os = site_at(pa, o, r.ob < r.oe ? r.ob : std::min(r.ob, o.tokens().empty() ? 0 : o.tokens().size() - 1));
    const Site ns = site_at(pa, n, r.nb < r.ne ? r.nb : std::min(r.nb, n.tokens().empty() ? 0 : n.tokens().size() - 1));
    std::set<std::string> got;
    auto tag = [&](std::string_view a, const Site& s) {
        out.add(a, s);
        got.insert(std::string(a));
    };

    // (a) method calls in the region
    auto oc = callees_in(o, r.ob, r.oe), nc = callees_in(n, r.nb, r.ne);
    cancel_common(oc, nc);
    const std::size_t repl = std::min(oc.size(), nc.size());
    if (repl) tag("mcM", ns);
    if (nc.size() > repl) tag("mcA", ns);
    if (oc.size() > repl) tag("mcR", os);

    // (b) instantiations
    auto on = news_in(o, r.ob, r.oe), nn = news_in(n, r.nb, r.ne);
    cancel_common(on, nn);
    const std::size_t orepl = std::min(on.size(), nn.size());
    if (orepl) tag("objM", ns);
    if (nn.size() > orepl) tag("objA", ns);
    if (on.size() > orepl) tag("objR", os);
    if (r.ob > 0 && r.nb > 0 && r.oe > r.ob && r.ne > r.nb && o.tokens()[r.ob - 1].is("new") && n.tokens()[r.nb - 1].is("new"))
        tag("objM", ns);  // instantiated type replaced

    // (c) conditional expressions
    const int ot = ternaries_in(o, r.ob, r.oe), nt = ternaries_in(n, r.nb, r.ne);
    if (nt > ot) tag("cndA", ns);
    if (ot > nt) tag("cndR", os);

    // (d) one reference used in place of another
    const SwapKind swap = swap_kind(o, n, r);
    if (swap == SwapKind::VarVar || swap == SwapKind::VarToCall || swap == SwapKind::CallToVar) tag("varM", ns);
    const bool is_swap = swap != SwapKind::None;

    // (e) the syntactic context of the edit
    if (paren_only(o, n, r) && pair_structural) return;
    if (nt != ot) return;  // heuristic: the new or dropped ternary is the edit
    const bool use_new = r.ne > r.nb;
    const AUnit& side = use_new ? n : o;
    const std::size_t idx = use_new ? r.nb : r.ob;
    const Site& here = use_new ? ns : os;
    const bool structural = structural_edit(o, n, r);
    bool decl_init = false;
    for (const auto& c : containers_at(side, idx)) {
        bool decided = true;
        switch (c.kind) {
            case ContainerKind::CallArgs: {
                auto other = partner(p, c.anchor, !use_new);
                if (!other) {
                    decided = false;
                    break;
                }
                const AUnit& ou = use_new ? o : n;
                const auto& ot_ = ou.tokens();
                const std::size_t oclose = match_forward(ot_, *other + 1);
                const int here_args = count_args(side.tokens(), c.open, c.close);
                const int there_args = *other + 1 < ot_.size() ? count_args(ot_, *other + 1, oclose) : 0;
                const int new_args = use_new ? here_args : there_args;
                const int old_args = use_new ? there_args : here_args;
                if (new_args > old_args) tag("mcA", ns);
                else if (new_args < old_args) tag("mcR", os);
                else if (!structural) tag("mcM", here);
                break;
            }
            case ContainerKind::NewArgs:
                if (!partner(p, c.anchor, !use_new)) {
                    decided = false;
                    break;
                }
                if (!structural) tag("objM", here);
                break;
            case ContainerKind::IfCond:
            case ContainerKind::SwitchCond:
            case ContainerKind::Ternary:
            case ContainerKind::CaseLabel:
                if (!is_swap) tag("cndM", here);
                break;
            case ContainerKind::LoopHeader:
                if (!is_swap) tag("lpM", here);
                break;
            case ContainerKind::Return:
                if (!is_swap) tag("retM", here);
                break;
            case ContainerKind::AssignRHS:
                if (!is_swap) tag("asgnM", here);
                break;
            case ContainerKind::DeclInit:
                decl_init = true;
                break;
            case ContainerKind::Group:
            case ContainerKind::CatchHeader:
                decided = false;
                break;
        }
        if (decided) break;
    }
    // Heuristic: a changed initializer is an assignment change only when
    // nothing more specific explains the edit.
    if (decl_init && got.empty()) tag("asgnM", here);
    // heuristic: the assignment operator itself replaced, e.g. `i = 0` -> `i++`
    auto op_in = [](const AUnit& u, std::size_t b, std::size_t e) {
        return std::any_of(u.feat.assignments.begin(), u.feat.assignments.end(),
                           [&](const Assignment& a) { return a.op_index >= b && a.op_index < e; });
    };
    if (got.empty() && !is_swap && (op_in(o, r.ob, r.oe) || op_in(n, r.nb, r.ne))) tag("asgnM", here);
}

inline void declaration_actions(const PatchAnalysis& pa, const UnitPair& p, ActionCollector& out) {
    const AUnit& o = pa.units[p.old_unit];
    const AUnit& n = pa.units[p.new_unit];
    const Site os = site_of(pa, o), ns = site_of(pa, n);
    if (o.feat.var_decl && n.feat.var_decl) {
        auto om = o.feat.var_decl->modifiers, nm = n.feat.var_decl->modifiers;
        std::sort(om.begin(), om.end());
        std::sort(nm.begin(), nm.end());
        if (o.feat.var_decl->type != n.feat.var_decl->type || om != nm) out.add("varM", ns);
    }
    if (o.feat.method_decl && n.feat.method_decl) {
        const auto& a = *o.feat.method_decl;
        const auto& b = *n.feat.method_decl;
        if (b.param_types.size() > a.param_types.size()) out.add("mdA", ns);
        else if (b.param_types.size() < a.param_types.size()) out.add("mdR", os);
        auto am = a.modifiers, bm = b.modifiers;
        std::sort(am.begin(), am.end());
        std::sort(bm.begin(), bm.end());
        const bool same_len = a.param_types.size() == b.param_types.size();
        if (a.name != b.name || a.return_type != b.return_type || am != bm || a.throws_clause != b.throws_clause ||
            (same_len && a.param_types != b.param_types))
            out.add("mdM", ns);
    }
    if (o.feat.type_decl && n.feat.type_decl) {
        if (o.feat.type_decl->extends_clause != n.feat.type_decl->extends_clause ||
            o.feat.type_decl->implements_clause != n.feat.type_decl->implements_clause)
            out.add("tyM", ns);
    }
    auto compare = [&](std::initializer_list<std::string_view> kws, std::string_view a, std::string_view r) {
        const int x = count_keywords(o, kws), y = count_keywords(n, kws);
        if (y > x) out.add(a, ns);
        if (x > y) out.add(r, os);
    };
    compare({"if", "else", "case", "default", "switch"}, "cndA", "cndR");
    compare({"for", "while", "do"}, "lpA", "lpR");
    compare({"try", "catch", "finally", "throw"}, "exA", "exR");
    compare({"return"}, "retA", "retR");
}

inline void unit_actions(const PatchAnalysis& pa, const AUnit& u, ActionCollector& out) {
    if (u.su.trivial()) return;
    const bool added = u.side == Side::New;
    const char suffix = added ? 'A' : 'R';
    const Site s = site_of(pa, u);
    auto tag = [&](std::string prefix) { out.add(prefix + suffix, s); };
    const auto& f = u.feat;
    if (f.conditional()) tag("cnd");
    if (f.loop()) tag("lp");
    if (!f.calls.empty()) tag("mc");
    if (std::any_of(f.instantiations.begin(), f.instantiations.end(), [](const Instantiation& i) { return !i.thrown; })) tag("obj");
    if (f.try_catch || f.throw_stmt) tag("ex");
    if (f.returns) tag("ret");
    if (f.method_decl) tag("md");
    if (f.type_decl && added) tag("ty");
}

inline void moved_actions(const PatchAnalysis& pa, const UnitPair& p, ActionCollector& out) {
    const AUnit& n = pa.units[p.new_unit];
    const Site s = site_of(pa, n);
    const auto& f = n.feat;
    if (!f.calls.empty()) out.add("mcM", s);
    else if (f.assignment()) out.add("asgnM", s);
    else if (f.returns) out.add("retM", s);
    else if (f.conditional()) out.add("cndM", s);
    else if (f.loop()) out.add("lpM", s);
    else if (f.var_decl) out.add("varM", s);
}

/// Patch-wide name sets: a name assigned (or declared) only on the fixed
/// side is an addition, only on the buggy side a removal.
inline void name_set_actions(const PatchAnalysis& pa, ActionCollector& out) {
    struct Seen {
        std::vector<std::size_t> old_units, new_units;
    };
    std::map<std::string, Seen> assigned, declared;
    std::set<std::pair<std::string, int>> paired_assign;  // (target, pair) on both sides of one pair
    for (std::size_t i = 0; i < pa.units.size(); ++i) {
        const AUnit& u = pa.units[i];
        if (!u.touched) continue;
        if (u.pair >= 0 && pa.pairs[static_cast<std::size_t>(u.pair)].kind != PairKind::Modified) continue;
        if (in_loop_header(u)) continue;  // heuristic: the counter goes with the loop
        for (const auto& a : u.feat.assignments) {
            auto& s = assigned[a.target];
            (u.side == Side::Old ? s.old_units : s.new_units).push_back(i);
        }
        if (u.feat.var_decl)
            for (const auto& name : u.feat.var_decl->names) {
                auto& s = declared[name];
                (u.side == Side::Old ? s.old_units : s.new_units).push_back(i);
            }
    }
    auto in_same_pair = [&](const Seen& s) {
        for (auto a : s.old_units)
            for (auto b : s.new_units)
                if (pa.units[a].pair >= 0 && pa.units[a].pair == pa.units[b].pair) return true;
        return false;
    };
    for (const auto& [name, s] : assigned) {
        if (!s.new_units.empty() && s.old_units.empty()) out.add("asgnA", site_of(pa, pa.units[s.new_units.front()]));
        else if (s.new_units.empty() && !s.old_units.empty()) out.add("asgnR", site_of(pa, pa.units[s.old_units.front()]));
        else if (!in_same_pair(s)) out.add("asgnM", site_of(pa, pa.units[s.new_units.front()]));
    }
    for (const auto& [name, s] : declared) {
        if (!s.new_units.empty() && s.old_units.empty()) out.add("varA", site_of(pa, pa.units[s.new_units.front()]));
        else if (s.new_units.empty() && !s.old_units.empty()) out.add("varR", site_of(pa, pa.units[s.old_units.front()]));
    }
}

}  // namespace detail

/// Tags the repair actions of an analysed patch.
inline ActionReport detect_actions(const PatchAnalysis& pa) {
    ActionCollector col;
    for (const auto& p : pa.pairs) {
        if (p.kind == PairKind::Same) continue;
        if (p.kind == PairKind::Moved) {
            detail::moved_actions(pa, p, col);
            continue;
        }
        const AUnit& o = pa.units[p.old_unit];
        const AUnit& n = pa.units[p.new_unit];
        bool pair_structural = false;
        for (const auto& r : p.regions)
            if (!detail::paren_only(o, n, r) && detail::structural_edit(o, n, r)) pair_structural = true;
        for (const auto& r : p.regions) detail::region_actions(pa, p, r, pair_structural, col);
        detail::declaration_actions(pa, p, col);
    }
    for (Side s : {Side::Old, Side::New})
        for (std::size_t u : pa.unpaired(s)) detail::unit_actions(pa, pa.units[u], col);
    detail::name_set_actions(pa, col);

    // Evidence filter: an addition needs a site on a line that exists in the
    // fixed version as added or modified, a removal one in the buggy version.
    std::map<std::pair<std::string, int>, ChangeKind> old_kind, new_kind;
    for (const auto& fa : pa.files) {
        for (const auto& l : fa.diff.lines) {
            if (l.old_line) old_kind[{fa.diff.path, *l.old_line}] = l.kind;
            if (l.new_line) new_kind[{fa.diff.path, *l.new_line}] = l.kind;
        }
    }
    auto kind_of = [&](const Site& s) -> std::optional<ChangeKind> {
        const auto& m = s.side == Side::Old ? old_kind : new_kind;
        auto it = m.find({s.file, s.line});
        if (it == m.end()) return std::nullopt;
        return it->second;
    };

    ActionReport report;
    for (const auto& info : kActions) {
        auto it = col.sites().find(std::string(info.acronym));
        if (it == col.sites().end()) continue;
        bool ok = true;
        if (info.type != ActionType::Modification) {
            ok = std::any_of(it->second.begin(), it->second.end(), [&](const Site& s) {
                auto k = kind_of(s);
                if (!k) return false;
                if (*k == ChangeKind::Modified) return true;
                return info.type == ActionType::Addition ? *k == ChangeKind::Added : *k == ChangeKind::Removed;
            });
        }
        if (!ok) continue;
        RepairActionTag t;
        t.acronym = std::string(info.acronym);
        t.group = info.group;
        t.action = info.type;
        t.sites.assign(it->second.begin(), it->second.end());
        report.tags.push_back(std::move(t));
    }
    return report;
}

/// Number of patches containing each action, most frequent first; ties
/// keep taxonomy order.
inline std::vector<std::pair<std::string, int>> action_rank(const std::vector<std::set<std::string>>& per_patch) {
    std::vector<std::pair<std::string, int>> out;
    for (const auto& info : kActions) {
        int n = 0;
        for (const auto& s : per_patch) n += s.count(std::string(info.acronym)) ? 1 : 0;
        if (n > 0) out.emplace_back(std::string(info.acronym), n);
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

inline std::vector<std::pair<std::string, int>> action_rank(const std::vector<ActionReport>& reports) {
    std::vector<std::set<std::string>> sets;
    for (const auto& r : reports) sets.push_back(r.acronyms());
    return action_rank(sets);
}

}  // namespace dissect
