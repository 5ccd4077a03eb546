#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dissect/diff.hpp"
#include "dissect/source_scan.hpp"
#include "dissect/sources.hpp"

namespace dissect {

// Statement-level alignment of the buggy and fixed sides of a patch. Both
// the action and the pattern detectors work on this view rather than on raw
// lines, so multi-line statements and re-indented code are handled once.

enum class Side { Old, New };

inline std::string_view to_string(Side s) { return s == Side::Old ? "old" : "new"; }

struct AUnit {
    Side side = Side::Old;
    std::size_t file = 0;
    StatementUnit su;
    std::string norm;
    LineFeatures feat;
    bool touched = false;
    bool has_changed = false;  // owns a changed line (not only mirror-touched)
    int chunk = -1;            // patch-wide chunk id
    int pair = -1;             // index into PatchAnalysis::pairs
    std::vector<int> changed_lines;
    std::size_t pos = 0;  // position within its side view

    const std::vector<Token>& tokens() const { return su.tokens; }
    int line() const { return changed_lines.empty() ? su.first_line : changed_lines.front(); }
};

enum class PairKind { Same, Moved, Modified };

/// Token ranges [ob, oe) and [nb, ne) that differ between paired units.
struct EditRegion {
    std::size_t ob = 0, oe = 0, nb = 0, ne = 0;
    bool pure_insertion() const { return ob == oe && nb < ne; }
    bool pure_deletion() const { return nb == ne && ob < oe; }
};

struct UnitPair {
    std::size_t old_unit = 0;
    std::size_t new_unit = 0;
    PairKind kind = PairKind::Modified;
    double similarity = 0.0;
    std::vector<EditRegion> regions;
    std::vector<std::pair<std::size_t, std::size_t>> matched;  // token LCS (old idx, new idx)
};

struct SideView {
    bool full_source = false;
    std::set<int> changed;
    std::vector<std::size_t> units;  // unit indices in file order
};

struct FileAnalysis {
    FileDiff diff;
    SideView old_view;
    SideView new_view;
    std::vector<Chunk> chunks;
    int chunk_base = 0;

    const SideView& view(Side s) const { return s == Side::Old ? old_view : new_view; }
};

struct PatchAnalysis {
    std::vector<FileAnalysis> files;
    std::vector<AUnit> units;
    std::vector<UnitPair> pairs;
    int chunk_total = 0;

    const std::string& path_of(const AUnit& u) const { return files[u.file].diff.path; }

    /// Touched units of one side that no pair claims.
    std::vector<std::size_t> unpaired(Side s) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < units.size(); ++i)
            if (units[i].side == s && units[i].touched && units[i].pair < 0) out.push_back(i);
        return out;
    }
    std::size_t count_pairs(PairKind k) const {
        return static_cast<std::size_t>(std::count_if(pairs.begin(), pairs.end(), [k](const UnitPair& p) { return p.kind == k; }));
    }
    /// Unit following `u` in its side view, if any.
    std::optional<std::size_t> next_in_view(std::size_t u) const {
        const auto& v = files[units[u].file].view(units[u].side);
        const std::size_t p = units[u].pos;
        if (p + 1 >= v.units.size()) return std::nullopt;
        return v.units[p + 1];
    }
    /// Matching closer for a unit that opens a block, within the same view.
    std::optional<std::size_t> block_closer(std::size_t u) const {
        if (!units[u].su.opens_block()) return std::nullopt;
        const auto& v = files[units[u].file].view(units[u].side);
        int depth = 0;
        for (std::size_t p = units[u].pos; p < v.units.size(); ++p) {
            const auto& x = units[v.units[p]].su;
            if (x.opens_block()) ++depth;
            else if (x.closes_block() && --depth == 0) return v.units[p];
        }
        return std::nullopt;
    }
    /// Units strictly between an opener and its closer.
    std::vector<std::size_t> block_body(std::size_t opener, std::size_t closer) const {
        const auto& v = files[units[opener].file].view(units[opener].side);
        std::vector<std::size_t> out;
        for (std::size_t p = units[opener].pos + 1; p < units[closer].pos && p < v.units.size(); ++p) out.push_back(v.units[p]);
        return out;
    }
};

namespace detail {

/// Maps a line of one side to the other through the hunks; nullopt for a
/// changed line.
inline std::optional<int> map_line(const FileDiff& f, Side from, int line) {
    int delta = 0;
    for (const auto& h : f.hunks) {
        int lo = 0, hi = 0;
        for (const auto& l : h.lines) {
            const int n = from == Side::Old ? l.old_no : l.new_no;
            if (!n) continue;
            if (!lo) lo = n;
            hi = n;
        }
        if (lo && line < lo) return line + delta;
        if (lo && line <= hi) {
            for (const auto& l : h.lines) {
                const int n = from == Side::Old ? l.old_no : l.new_no;
                if (n != line) continue;
                if (l.op != LineOp::Context) return std::nullopt;
                return from == Side::Old ? l.new_no : l.old_no;
            }
            return std::nullopt;
        }
        delta += from == Side::Old ? h.new_count - h.old_count : h.old_count - h.new_count;
    }
    return line + delta;
}

inline std::vector<std::vector<std::string>> hunk_segments(const FileDiff& f, Side s, std::vector<int>& starts) {
    std::vector<std::vector<std::string>> segs;
    for (const auto& h : f.hunks) {
        std::vector<std::string> seg;
        int first = 0;
        for (const auto& l : h.lines) {
            const bool on_side = s == Side::Old ? l.op != LineOp::Added : l.op != LineOp::Removed;
            if (!on_side) continue;
            if (!first) first = s == Side::Old ? l.old_no : l.new_no;
            seg.push_back(l.text);
        }
        if (!seg.empty()) {
            segs.push_back(std::move(seg));
            starts.push_back(first);
        }
    }
    return segs;
}

inline double dice(const std::vector<Token>& a, const std::vector<Token>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::map<std::string, int> ca;
    for (const auto& t : a) ++ca[t.text];
    int common = 0;
    for (const auto& t : b) {
        auto it = ca.find(t.text);
        if (it != ca.end() && it->second > 0) {
            --it->second;
            ++common;
        }
    }
    return 2.0 * common / static_cast<double>(a.size() + b.size());
}

inline std::string kind_key(const AUnit& u) {
    const auto& t = u.tokens();
    if (t.empty()) return {};
    if (t[0].kind == TokenKind::Keyword &&
        (t[0].is("if") || t[0].is("else") || t[0].is("for") || t[0].is("while") || t[0].is("do") || t[0].is("switch") ||
         t[0].is("case") || t[0].is("return") || t[0].is("throw") || t[0].is("try") || t[0].is("catch")))
        return t[0].text;
    if (u.feat.method_decl) return "md:" + u.feat.method_decl->name;
    if (u.feat.type_decl) return "ty:" + u.feat.type_decl->name;
    if (u.feat.var_decl) return "decl:" + u.feat.var_decl->names.front();
    if (!u.feat.assignments.empty()) return "asgn:" + u.feat.assignments.front().target;
    if (!u.feat.calls.empty()) return "call:" + u.feat.calls.front().callee;
    return {};
}

inline bool substantive(const AUnit& u) {
    if (u.su.trivial()) return false;
    return std::any_of(u.tokens().begin(), u.tokens().end(), [](const Token& t) {
        return t.kind == TokenKind::Identifier || t.kind == TokenKind::Keyword || t.is_literal();
    });
}

/// Token-level LCS; falls back to prefix/suffix trimming for huge units.
inline std::vector<std::pair<std::size_t, std::size_t>> token_lcs(const std::vector<Token>& a, const std::vector<Token>& b) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t pre = 0;
    while (pre < a.size() && pre < b.size() && a[pre].text == b[pre].text) {
        out.emplace_back(pre, pre);
        ++pre;
    }
    std::size_t suf = 0;
    while (suf < a.size() - pre && suf < b.size() - pre && a[a.size() - 1 - suf].text == b[b.size() - 1 - suf].text) ++suf;
    const std::size_t n = a.size() - pre - suf, m = b.size() - pre - suf;
    if (n > 0 && m > 0 && n * m <= 4'000'000) {
        std::vector<std::vector<int>> L(n + 1, std::vector<int>(m + 1, 0));
        for (std::size_t i = n; i-- > 0;)
            for (std::size_t j = m; j-- > 0;)
                L[i][j] = a[pre + i].text == b[pre + j].text ? L[i + 1][j + 1] + 1 : std::max(L[i + 1][j], L[i][j + 1]);
        std::size_t i = 0, j = 0;
        while (i < n && j < m) {
            if (a[pre + i].text == b[pre + j].text) {
                out.emplace_back(pre + i, pre + j);
                ++i;
                ++j;
            } else if (L[i + 1][j] >= L[i][j + 1]) {
                ++i;
            } else {
                ++j;
            }
        }
    }
    for (std::size_t k = suf; k > 0; --k) out.emplace_back(a.size() - k, b.size() - k);
    return out;
}

inline std::vector<EditRegion> regions_from(const std::vector<std::pair<std::size_t, std::size_t>>& matched, std::size_t na,
                                            std::size_t nb) {
    std::vector<EditRegion> out;
    std::size_t oi = 0, ni = 0;
    auto emit = [&](std::size_t oe, std::size_t ne) {
        if (oe > oi || ne > ni) out.push_back({oi, oe, ni, ne});
    };
    for (auto [o, n] : matched) {
        emit(o, n);
        oi = o + 1;
        ni = n + 1;
    }
    emit(na, nb);
    return out;
}

}  // namespace detail

struct AnalysisOptions {
    double pair_threshold = 0.5;
    double same_kind_threshold = 0.3;
};

inline PatchAnalysis analyze_patch(const PatchDiff& patch, const SourceMap& sources,
                                   const LanguageConfig& cfg = java_config(), const AnalysisOptions& opt = {}) {
    PatchAnalysis pa;
    for (const auto& fd : patch.files) {
        FileAnalysis fa;
        fa.diff = fd;
        fa.chunks = detect_chunks(fd);
        fa.chunk_base = pa.chunk_total;
        pa.chunk_total += static_cast<int>(fa.chunks.size());
        const std::size_t file_index = pa.files.size();

        std::map<int, int> old_chunk_of, new_chunk_of;
        for (std::size_t c = 0; c < fa.chunks.size(); ++c) {
            for (const auto& l : fa.chunks[c].lines) {
                if (l.old_line) old_chunk_of[*l.old_line] = fa.chunk_base + static_cast<int>(c);
                if (l.new_line) new_chunk_of[*l.new_line] = fa.chunk_base + static_cast<int>(c);
            }
        }
        for (const auto& h : fd.hunks) {
            for (const auto& l : h.lines) {
                if (l.op == LineOp::Removed) fa.old_view.changed.insert(l.old_no);
                if (l.op == LineOp::Added) fa.new_view.changed.insert(l.new_no);
            }
        }

        const FileSources* src = find_sources(sources, fd.path);
        for (Side side : {Side::Old, Side::New}) {
            SideView& view = side == Side::Old ? fa.old_view : fa.new_view;
            if ((side == Side::Old && fd.created) || (side == Side::New && fd.deleted)) continue;
            const std::optional<std::string>* full = nullptr;
            if (src) full = side == Side::Old ? &src->old_text : &src->new_text;
            std::vector<StatementUnit> sus;
            if (full && *full) {
                view.full_source = true;
                sus = units_of_lines(split_lines(**full), 1, cfg);
            } else {
                std::vector<int> starts;
                auto segs = detail::hunk_segments(fd, side, starts);
                for (std::size_t s = 0; s < segs.size(); ++s) {
                    auto part = units_of_lines(segs[s], starts[s], cfg);
                    sus.insert(sus.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
                }
            }
            const auto& chunk_of = side == Side::Old ? old_chunk_of : new_chunk_of;
            for (auto& su : sus) {
                AUnit u;
                u.side = side;
                u.file = file_index;
                u.norm = su.text();
                u.feat = extract_features(su.tokens, cfg);
                std::set<int> lines;
                for (const auto& t : su.tokens) lines.insert(t.line);
                for (int ln : lines) {
                    if (view.changed.count(ln)) {
                        u.changed_lines.push_back(ln);
                        if (u.chunk < 0) {
                            auto it = chunk_of.find(ln);
                            if (it != chunk_of.end()) u.chunk = it->second;
                        }
                    }
                }
                u.touched = u.has_changed = !u.changed_lines.empty();
                u.su = std::move(su);
                u.pos = view.units.size();
                view.units.push_back(pa.units.size());
                pa.units.push_back(std::move(u));
            }
        }
        pa.files.push_back(std::move(fa));
    }

    // Mirror touching: a statement edited on one side drags its counterpart
    // (found through shared unchanged lines) into the comparison.
    for (int round = 0; round < 4; ++round) {
        bool grew = false;
        for (auto& fa : pa.files) {
            std::map<std::pair<int, int>, std::vector<std::size_t>> by_line;  // (side, line)
            for (Side s : {Side::Old, Side::New})
                for (std::size_t ui : fa.view(s).units)
                    for (const auto& t : pa.units[ui].tokens()) by_line[{static_cast<int>(s), t.line}].push_back(ui);
            for (Side s : {Side::Old, Side::New}) {
                const Side other = s == Side::Old ? Side::New : Side::Old;
                for (std::size_t ui : fa.view(s).units) {
                    if (!pa.units[ui].touched) continue;
                    std::set<int> lines;
                    for (const auto& t : pa.units[ui].tokens()) lines.insert(t.line);
                    for (int ln : lines) {
                        if (fa.view(s).changed.count(ln)) continue;
                        auto mapped = detail::map_line(fa.diff, s, ln);
                        if (!mapped) continue;
                        auto it = by_line.find({static_cast<int>(other), *mapped});
                        if (it == by_line.end()) continue;
                        for (std::size_t vi : it->second) {
                            if (pa.units[vi].touched) continue;
                            pa.units[vi].touched = true;
                            pa.units[vi].chunk = pa.units[ui].chunk;
                            grew = true;
                        }
                    }
                }
            }
        }
        if (!grew) break;
    }

    // Group touched units by chunk.
    std::map<int, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> groups;
    for (std::size_t i = 0; i < pa.units.size(); ++i) {
        const auto& u = pa.units[i];
        if (!u.touched) continue;
        auto& g = groups[u.chunk];
        (u.side == Side::Old ? g.first : g.second).push_back(i);
    }

    auto add_pair = [&](std::size_t o, std::size_t n, PairKind k, double sim) {
        UnitPair p;
        p.old_unit = o;
        p.new_unit = n;
        p.kind = k;
        p.similarity = sim;
        if (k == PairKind::Modified) {
            p.matched = detail::token_lcs(pa.units[o].tokens(), pa.units[n].tokens());
            p.regions = detail::regions_from(p.matched, pa.units[o].tokens().size(), pa.units[n].tokens().size());
        }
        pa.units[o].pair = pa.units[n].pair = static_cast<int>(pa.pairs.size());
        pa.pairs.push_back(std::move(p));
    };

    // 1. identical statements within a chunk (re-indentation, re-wrapping)
    for (auto& [chunk, g] : groups) {
        const auto& O = g.first;
        const auto& N = g.second;
        const std::size_t n = O.size(), m = N.size();
        std::vector<std::vector<int>> L(n + 1, std::vector<int>(m + 1, 0));
        for (std::size_t i = n; i-- > 0;)
            for (std::size_t j = m; j-- > 0;)
                L[i][j] = pa.units[O[i]].norm == pa.units[N[j]].norm ? L[i + 1][j + 1] + 1 : std::max(L[i + 1][j], L[i][j + 1]);
        std::size_t i = 0, j = 0;
        while (i < n && j < m) {
            if (pa.units[O[i]].norm == pa.units[N[j]].norm) {
                add_pair(O[i], N[j], PairKind::Same, 1.0);
                ++i;
                ++j;
            } else if (L[i + 1][j] >= L[i][j + 1]) {
                ++i;
            } else {
                ++j;
            }
        }
    }

    // 2. identical statements that changed place
    {
        std::vector<std::size_t> olds, news;
        for (std::size_t i = 0; i < pa.units.size(); ++i) {
            const auto& u = pa.units[i];
            if (!u.has_changed || u.pair >= 0 || !detail::substantive(u) || u.tokens().size() < 3) continue;
            if (!std::any_of(u.tokens().begin(), u.tokens().end(), [](const Token& t) { return t.kind == TokenKind::Identifier; }))
                continue;
            (u.side == Side::Old ? olds : news).push_back(i);
        }
        for (std::size_t o : olds) {
            for (std::size_t n : news) {
                if (pa.units[n].pair >= 0 || pa.units[n].norm != pa.units[o].norm) continue;
                add_pair(o, n, PairKind::Moved, 1.0);
                break;
            }
        }
    }

    // 3. similar statements within a chunk, order preserving
    for (auto& [chunk, g] : groups) {
        std::vector<std::size_t> O, N;
        for (auto x : g.first)
            if (pa.units[x].pair < 0 && detail::substantive(pa.units[x])) O.push_back(x);
        for (auto x : g.second)
            if (pa.units[x].pair < 0 && detail::substantive(pa.units[x])) N.push_back(x);
        const std::size_t n = O.size(), m = N.size();
        if (!n || !m) continue;
        std::vector<std::vector<double>> sim(n, std::vector<double>(m, -1.0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                const double s = detail::dice(pa.units[O[i]].tokens(), pa.units[N[j]].tokens());
                const std::string ka = detail::kind_key(pa.units[O[i]]);
                const bool same_kind = !ka.empty() && ka == detail::kind_key(pa.units[N[j]]);
                if (s >= opt.pair_threshold || (same_kind && s >= opt.same_kind_threshold)) sim[i][j] = s + (same_kind ? 1.0 : 0.0);
            }
        }
        std::vector<std::vector<double>> best(n + 1, std::vector<double>(m + 1, 0.0));
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t j = m; j-- > 0;) {
                double v = std::max(best[i + 1][j], best[i][j + 1]);
                if (sim[i][j] >= 0) v = std::max(v, best[i + 1][j + 1] + sim[i][j]);
                best[i][j] = v;
            }
        }
        std::size_t i = 0, j = 0;
        while (i < n && j < m) {
            if (sim[i][j] >= 0 && best[i][j] == best[i + 1][j + 1] + sim[i][j]) {
                add_pair(O[i], N[j], PairKind::Modified, sim[i][j]);
                ++i;
                ++j;
            } else if (best[i][j] == best[i + 1][j]) {
                ++i;
            } else {
                ++j;
            }
        }
    }
    return pa;
}

}  // namespace dissect
