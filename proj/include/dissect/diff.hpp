#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dissect/text.hpp"

namespace dissect {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

enum class LineOp { Context, Removed, Added };

/// One line of a raw hunk. Line numbers are 0 when the line does not exist
/// on that side.
struct HunkLine {
    LineOp op = LineOp::Context;
    std::string text;
    int old_no = 0;
    int new_no = 0;
};

struct Hunk {
    int old_start = 0;
    int old_count = 0;
    int new_start = 0;
    int new_count = 0;
    std::vector<HunkLine> lines;
};

enum class ChangeKind { Added, Removed, Modified };

inline std::string_view to_string(ChangeKind k) {
    switch (k) {
        case ChangeKind::Added: return "ADDED";
        case ChangeKind::Removed: return "REMOVED";
        case ChangeKind::Modified: return "MODIFIED";
    }
    return "?";
}

struct ChangedLine {
    ChangeKind kind = ChangeKind::Added;
    std::optional<int> old_line;
    std::optional<int> new_line;
    std::optional<std::string> old_text;
    std::optional<std::string> new_text;

    friend bool operator==(const ChangedLine&, const ChangedLine&) = default;
};

struct FileDiff {
    std::string path;      // path in the fixed version (or buggy one when deleted)
    std::string old_path;  // differs from path only for declared renames
    bool created = false;
    bool deleted = false;
    std::vector<Hunk> hunks;
    std::vector<ChangedLine> lines;  // filled by classify_lines
};

struct PatchDiff {
    std::string patch_id;
    std::vector<FileDiff> files;
    std::vector<std::string> warnings;
};

/// Inclusive line range.
struct LineRange {
    int first = 0;
    int last = 0;
    friend bool operator==(const LineRange&, const LineRange&) = default;
};

/// A maximal run of changed lines in one file. The anchors give the last
/// unchanged line before the chunk and the first unchanged line after it,
/// on both sides, so gaps between chunks can be measured in either version.
struct Chunk {
    std::string file;
    std::vector<ChangedLine> lines;
    std::optional<LineRange> old_span;
    std::optional<LineRange> new_span;
    int old_before = 0;
    int old_after = 0;
    int new_before = 0;
    int new_after = 0;
};

class DiffParseError : public std::runtime_error {
public:
    DiffParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// ---------------------------------------------------------------------------
// Pairing and chunking
// ---------------------------------------------------------------------------

namespace detail {

/// A maximal run of non-context lines inside one hunk.
struct ChangeRun {
    std::vector<HunkLine> lines;
    int old_before = 0;
    int old_after = 0;
    int new_before = 0;
    int new_after = 0;
};

inline std::vector<ChangeRun> change_runs(const FileDiff& file) {
    std::vector<ChangeRun> runs;
    for (const auto& hunk : file.hunks) {
        int next_old = hunk.old_count == 0 ? hunk.old_start + 1 : hunk.old_start;
        int next_new = hunk.new_count == 0 ? hunk.new_start + 1 : hunk.new_start;
        std::optional<ChangeRun> open;
        auto close = [&] {
            if (!open) return;
            open->old_after = next_old;
            open->new_after = next_new;
            runs.push_back(std::move(*open));
            open.reset();
        };
        for (const auto& line : hunk.lines) {
            if (line.op == LineOp::Context) {
                close();
                ++next_old;
                ++next_new;
                continue;
            }
            if (!open) {
                open.emplace();
                open->old_before = next_old - 1;
                open->new_before = next_new - 1;
            }
            open->lines.push_back(line);
            if (line.op == LineOp::Removed) ++next_old;
            else ++next_new;
        }
        close();
    }
    return runs;
}

/// Positional pairing inside one run: a block of removed lines directly
/// followed by a block of added lines (or the reverse) pairs from the start;
/// the surplus keeps its raw kind.
inline std::vector<ChangedLine> classify_run(const std::vector<HunkLine>& run) {
    std::vector<std::pair<std::size_t, std::size_t>> blocks;  // [begin, end)
    for (std::size_t i = 0; i < run.size();) {
        std::size_t j = i;
        while (j < run.size() && run[j].op == run[i].op) ++j;
        blocks.emplace_back(i, j);
        i = j;
    }

    auto single = [](const HunkLine& l) {
        ChangedLine c;
        if (l.op == LineOp::Removed) {
            c.kind = ChangeKind::Removed;
            c.old_line = l.old_no;
            c.old_text = l.text;
        } else {
            c.kind = ChangeKind::Added;
            c.new_line = l.new_no;
            c.new_text = l.text;
        }
        return c;
    };

    std::vector<ChangedLine> out;
    std::size_t b = 0;
    while (b < blocks.size()) {
        auto [first_begin, first_end] = blocks[b];
        if (b + 1 < blocks.size()) {
            auto [second_begin, second_end] = blocks[b + 1];
            const std::size_t n = std::min(first_end - first_begin, second_end - second_begin);
            for (std::size_t k = 0; k < n; ++k) {
                const HunkLine& x = run[first_begin + k];
                const HunkLine& y = run[second_begin + k];
                const HunkLine& rem = x.op == LineOp::Removed ? x : y;
                const HunkLine& add = x.op == LineOp::Removed ? y : x;
                ChangedLine c;
                c.kind = ChangeKind::Modified;
                c.old_line = rem.old_no;
                c.new_line = add.new_no;
                c.old_text = rem.text;
                c.new_text = add.text;
                out.push_back(std::move(c));
            }
            for (std::size_t k = first_begin + n; k < first_end; ++k) out.push_back(single(run[k]));
            for (std::size_t k = second_begin + n; k < second_end; ++k) out.push_back(single(run[k]));
            b += 2;
        } else {
            for (std::size_t k = first_begin; k < first_end; ++k) out.push_back(single(run[k]));
            b += 1;
        }
    }
    return out;
}

}  // namespace detail

/// Assigns ADDED / REMOVED / MODIFIED kinds to the raw hunk lines.
inline FileDiff classify_lines(FileDiff file) {
    file.lines.clear();
    for (const auto& run : detail::change_runs(file)) {
        auto classified = detail::classify_run(run.lines);
        file.lines.insert(file.lines.end(), classified.begin(), classified.end());
    }
    return file;
}

inline PatchDiff classify_lines(PatchDiff patch) {
    for (auto& f : patch.files) f = classify_lines(std::move(f));
    return patch;
}

/// Partitions the changed lines of a file into maximal contiguous runs.
/// Runs from adjacent hunks with no unchanged line between them merge.
inline std::vector<Chunk> detect_chunks(const FileDiff& file) {
    std::vector<Chunk> chunks;
    for (const auto& run : detail::change_runs(file)) {
        auto classified = detail::classify_run(run.lines);
        const bool adjacent = !chunks.empty() && chunks.back().new_after == run.new_before + 1 &&
                              chunks.back().old_after == run.old_before + 1;
        if (adjacent) {
            Chunk& prev = chunks.back();
            prev.lines.insert(prev.lines.end(), classified.begin(), classified.end());
            prev.old_after = run.old_after;
            prev.new_after = run.new_after;
        } else {
            Chunk c;
            c.file = file.path;
            c.lines = std::move(classified);
            c.old_before = run.old_before;
            c.old_after = run.old_after;
            c.new_before = run.new_before;
            c.new_after = run.new_after;
            chunks.push_back(std::move(c));
        }
    }
    for (auto& c : chunks) {
        if (c.old_after - c.old_before > 1) c.old_span = LineRange{c.old_before + 1, c.old_after - 1};
        if (c.new_after - c.new_before > 1) c.new_span = LineRange{c.new_before + 1, c.new_after - 1};
    }
    return chunks;
}

// ---------------------------------------------------------------------------
// Unified diff parsing
// ---------------------------------------------------------------------------

namespace detail {

inline std::string strip_diff_path(std::string_view raw) {
    // Drop a trailing tab-separated timestamp, then a one-letter git prefix.
    auto tab = raw.find('\t');
    if (tab != std::string_view::npos) raw = raw.substr(0, tab);
    raw = trim(raw);
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') raw = raw.substr(1, raw.size() - 2);
    if (raw == "/dev/null") return std::string(raw);
    if (raw.size() > 2 && (raw[0] == 'a' || raw[0] == 'b') && raw[1] == '/') raw.remove_prefix(2);
    return std::string(raw);
}

inline bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && out >= 0;
}

inline bool parse_range(std::string_view s, int& start, int& count) {
    auto comma = s.find(',');
    if (comma == std::string_view::npos) {
        count = 1;
        return parse_int(s, start);
    }
    return parse_int(s.substr(0, comma), start) && parse_int(s.substr(comma + 1), count);
}

/// Parses "@@ -a[,b] +c[,d] @@ [section]".
inline std::optional<Hunk> parse_hunk_header(std::string_view line) {
    if (!starts_with(line, "@@ -")) return std::nullopt;
    line.remove_prefix(4);
    auto space = line.find(' ');
    if (space == std::string_view::npos) return std::nullopt;
    Hunk h;
    if (!parse_range(line.substr(0, space), h.old_start, h.old_count)) return std::nullopt;
    line.remove_prefix(space + 1);
    if (!starts_with(line, "+")) return std::nullopt;
    line.remove_prefix(1);
    space = line.find(' ');
    if (space == std::string_view::npos) return std::nullopt;
    if (!parse_range(line.substr(0, space), h.new_start, h.new_count)) return std::nullopt;
    line.remove_prefix(space + 1);
    if (!starts_with(line, "@@")) return std::nullopt;
    return h;
}

}  // namespace detail

/// Parses a (possibly multi-file) unified diff. Binary file sections are
/// skipped with a warning; file sections without hunks are dropped.
inline PatchDiff parse_unified_diff(std::string_view text, std::string patch_id = {}) {
    PatchDiff patch;
    patch.patch_id = std::move(patch_id);
    const auto lines = split_lines(text);

    std::optional<FileDiff> current;
    bool binary = false;
    std::string rename_from, rename_to;

    auto flush = [&] {
        if (!current) return;
        if (binary) {
            patch.warnings.push_back("binary file skipped: " + current->path);
        } else if (!current->hunks.empty()) {
            for (const auto& f : patch.files) {
                if (f.path == current->path)
                    throw DiffParseError(0, "duplicate file section for " + current->path);
            }
            patch.files.push_back(classify_lines(std::move(*current)));
        }
        current.reset();
        binary = false;
        rename_from.clear();
        rename_to.clear();
    };

    std::size_t i = 0;
    while (i < lines.size()) {
        const std::string& line = lines[i];
        const std::size_t line_no = i + 1;

        if (starts_with(line, "diff --git ") || starts_with(line, "diff ")) {
            flush();
            current.emplace();
            // Best-effort path from "diff --git a/x b/y"; overwritten by ---/+++.
            auto b = line.rfind(" b/");
            if (b != std::string::npos) current->path = line.substr(b + 3);
            auto a = line.find(" a/");
            if (a != std::string::npos && b != std::string::npos && a < b)
                current->old_path = line.substr(a + 3, b - a - 3);
            ++i;
            continue;
        }
        if (starts_with(line, "rename from ")) {
            rename_from = line.substr(12);
            if (current) current->old_path = rename_from;
            ++i;
            continue;
        }
        if (starts_with(line, "rename to ")) {
            rename_to = line.substr(10);
            if (current) current->path = rename_to;
            ++i;
            continue;
        }
        if (starts_with(line, "Binary files ") || starts_with(line, "GIT binary patch")) {
            if (!current) current.emplace();
            if (current->path.empty()) current->path = line;
            binary = true;
            ++i;
            continue;
        }
        if (starts_with(line, "--- ") && i + 1 < lines.size() && starts_with(lines[i + 1], "+++ ")) {
            const bool fresh_section = !current || !current->hunks.empty();
            if (fresh_section) {
                flush();
                current.emplace();
            }
            std::string old_path = detail::strip_diff_path(std::string_view(line).substr(4));
            std::string new_path = detail::strip_diff_path(std::string_view(lines[i + 1]).substr(4));
            current->created = old_path == "/dev/null";
            current->deleted = new_path == "/dev/null";
            current->path = current->deleted ? old_path : new_path;
            current->old_path = current->created ? new_path : old_path;
            if (!rename_to.empty()) current->path = rename_to;
            i += 2;
            continue;
        }
        if (starts_with(line, "@@")) {
            auto header = detail::parse_hunk_header(line);
            if (!header) throw DiffParseError(line_no, "malformed hunk header: " + line);
            if (!current) throw DiffParseError(line_no, "hunk without file header");
            Hunk hunk = std::move(*header);
            int old_left = hunk.old_count;
            int new_left = hunk.new_count;
            int old_no = hunk.old_count == 0 ? hunk.old_start + 1 : hunk.old_start;
            int new_no = hunk.new_count == 0 ? hunk.new_start + 1 : hunk.new_start;
            ++i;
            while (i < lines.size() && (old_left > 0 || new_left > 0)) {
                const std::string& body = lines[i];
                HunkLine hl;
                if (body.empty() || body[0] == ' ') {
                    hl.op = LineOp::Context;
                    hl.text = body.empty() ? std::string() : body.substr(1);
                    hl.old_no = old_no++;
                    hl.new_no = new_no++;
                    --old_left;
                    --new_left;
                } else if (body[0] == '-') {
                    hl.op = LineOp::Removed;
                    hl.text = body.substr(1);
                    hl.old_no = old_no++;
                    --old_left;
                } else if (body[0] == '+') {
                    hl.op = LineOp::Added;
                    hl.text = body.substr(1);
                    hl.new_no = new_no++;
                    --new_left;
                } else if (body[0] == '\\') {
                    ++i;
                    continue;
                } else {
                    throw DiffParseError(i + 1, "unexpected line inside hunk: " + body);
                }
                if (old_left < 0 || new_left < 0)
                    throw DiffParseError(i + 1, "hunk longer than its header declares");
                hunk.lines.push_back(std::move(hl));
                ++i;
            }
            if (old_left > 0 || new_left > 0)
                throw DiffParseError(i, "truncated hunk (header declares more lines)");
            while (i < lines.size() && starts_with(lines[i], "\\")) ++i;
            if (!current->hunks.empty() && hunk.old_start < current->hunks.back().old_start)
                throw DiffParseError(line_no, "hunks out of order");
            current->hunks.push_back(std::move(hunk));
            continue;
        }
        ++i;  // preamble, index lines, mode lines
    }
    flush();
    return patch;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace detail {
inline std::string render_range(int start, int count) {
    if (count == 1) return std::to_string(start);
    return std::to_string(start) + "," + std::to_string(count);
}
}  // namespace detail

inline std::string render_unified_diff(const FileDiff& file) {
    std::string out;
    out += "--- " + (file.created ? std::string("/dev/null") : "a/" + (file.old_path.empty() ? file.path : file.old_path)) + "\n";
    out += "+++ " + (file.deleted ? std::string("/dev/null") : "b/" + file.path) + "\n";
    for (const auto& h : file.hunks) {
        out += "@@ -" + detail::render_range(h.old_start, h.old_count) + " +" +
               detail::render_range(h.new_start, h.new_count) + " @@\n";
        for (const auto& l : h.lines) {
            out += l.op == LineOp::Context ? ' ' : (l.op == LineOp::Removed ? '-' : '+');
            out += l.text;
            out += '\n';
        }
    }
    return out;
}

inline std::string render_unified_diff(const PatchDiff& patch) {
    std::string out;
    for (const auto& f : patch.files) out += render_unified_diff(f);
    return out;
}

// ---------------------------------------------------------------------------
// Line differencing (Myers, O(ND))
// ---------------------------------------------------------------------------

enum class EditOp { Equal, Delete, Insert };

namespace detail {

inline std::vector<EditOp> myers(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    // Trim the common prefix and suffix first; most source patches are tiny
    // relative to their files.
    std::size_t prefix = 0;
    while (prefix < a.size() && prefix < b.size() && a[prefix] == b[prefix]) ++prefix;
    std::size_t suffix = 0;
    while (suffix < a.size() - prefix && suffix < b.size() - prefix &&
           a[a.size() - 1 - suffix] == b[b.size() - 1 - suffix])
        ++suffix;

    const int n = static_cast<int>(a.size() - prefix - suffix);
    const int m = static_cast<int>(b.size() - prefix - suffix);
    auto A = [&](int i) -> const std::string& { return a[prefix + static_cast<std::size_t>(i)]; };
    auto B = [&](int j) -> const std::string& { return b[prefix + static_cast<std::size_t>(j)]; };

    std::vector<EditOp> middle;
    if (n == 0 || m == 0) {
        middle.assign(static_cast<std::size_t>(n), EditOp::Delete);
        middle.insert(middle.end(), static_cast<std::size_t>(m), EditOp::Insert);
    } else {
        const int max = n + m;
        const int offset = max + 1;
        std::vector<int> v(static_cast<std::size_t>(2 * max + 3), 0);
        std::vector<std::vector<int>> trace;
        int final_d = -1;
        for (int d = 0; d <= max && final_d < 0; ++d) {
            trace.push_back(v);
            for (int k = -d; k <= d; k += 2) {
                int x;
                if (k == -d || (k != d && v[offset + k - 1] < v[offset + k + 1])) x = v[offset + k + 1];
                else x = v[offset + k - 1] + 1;
                int y = x - k;
                while (x < n && y < m && A(x) == B(y)) {
                    ++x;
                    ++y;
                }
                v[offset + k] = x;
                if (x >= n && y >= m) {
                    final_d = d;
                    break;
                }
            }
        }
        // Backtrack.
        int x = n, y = m;
        std::vector<EditOp> rev;
        for (int d = final_d; d > 0; --d) {
            const auto& pv = trace[static_cast<std::size_t>(d)];
            const int k = x - y;
            int prev_k;
            if (k == -d || (k != d && pv[offset + k - 1] < pv[offset + k + 1])) prev_k = k + 1;
            else prev_k = k - 1;
            const int prev_x = pv[offset + prev_k];
            const int prev_y = prev_x - prev_k;
            while (x > prev_x && y > prev_y) {
                rev.push_back(EditOp::Equal);
                --x;
                --y;
            }
            if (x == prev_x) rev.push_back(EditOp::Insert);
            else rev.push_back(EditOp::Delete);
            x = prev_x;
            y = prev_y;
        }
        while (x > 0 && y > 0) {
            rev.push_back(EditOp::Equal);
            --x;
            --y;
        }
        middle.assign(rev.rbegin(), rev.rend());
    }

    std::vector<EditOp> ops(prefix, EditOp::Equal);
    // Within each change region, deletions come before insertions.
    for (std::size_t i = 0; i < middle.size();) {
        if (middle[i] == EditOp::Equal) {
            ops.push_back(EditOp::Equal);
            ++i;
            continue;
        }
        std::size_t j = i;
        std::size_t dels = 0, ins = 0;
        while (j < middle.size() && middle[j] != EditOp::Equal) {
            (middle[j] == EditOp::Delete ? dels : ins)++;
            ++j;
        }
        ops.insert(ops.end(), dels, EditOp::Delete);
        ops.insert(ops.end(), ins, EditOp::Insert);
        i = j;
    }
    ops.insert(ops.end(), suffix, EditOp::Equal);
    return ops;
}

}  // namespace detail

/// Minimal line diff of two documents, grouped into hunks with `context`
/// unchanged lines around each change (like `diff -U3`).
inline FileDiff diff_file_pair(std::string_view old_text, std::string_view new_text, std::string path = {},
                               int context = 3) {
    const auto a = split_lines(old_text);
    const auto b = split_lines(new_text);
    const auto ops = detail::myers(a, b);

    FileDiff file;
    file.path = path;
    file.old_path = path;

    // Materialize every line with its numbers, then cut hunks around changes.
    std::vector<HunkLine> all;
    int oi = 0, ni = 0;
    for (EditOp op : ops) {
        HunkLine hl;
        switch (op) {
            case EditOp::Equal:
                hl.op = LineOp::Context;
                hl.text = a[static_cast<std::size_t>(oi)];
                hl.old_no = ++oi;
                hl.new_no = ++ni;
                break;
            case EditOp::Delete:
                hl.op = LineOp::Removed;
                hl.text = a[static_cast<std::size_t>(oi)];
                hl.old_no = ++oi;
                break;
            case EditOp::Insert:
                hl.op = LineOp::Added;
                hl.text = b[static_cast<std::size_t>(ni)];
                hl.new_no = ++ni;
                break;
        }
        all.push_back(std::move(hl));
    }

    std::vector<std::size_t> changed;
    for (std::size_t i = 0; i < all.size(); ++i)
        if (all[i].op != LineOp::Context) changed.push_back(i);

    std::size_t c = 0;
    while (c < changed.size()) {
        std::size_t begin = changed[c] >= static_cast<std::size_t>(context) ? changed[c] - context : 0;
        std::size_t last = changed[c];
        while (c + 1 < changed.size() && changed[c + 1] - last <= static_cast<std::size_t>(2 * context) + 1) {
            ++c;
            last = changed[c];
        }
        ++c;
        std::size_t end = std::min(all.size(), last + 1 + static_cast<std::size_t>(context));

        Hunk h;
        h.lines.assign(all.begin() + static_cast<std::ptrdiff_t>(begin), all.begin() + static_cast<std::ptrdiff_t>(end));
        int old_first = 0, new_first = 0;
        // The start of an empty side is the line before the insertion point.
        int old_prev = 0, new_prev = 0;
        for (std::size_t i = 0; i < begin; ++i) {
            if (all[i].old_no) old_prev = all[i].old_no;
            if (all[i].new_no) new_prev = all[i].new_no;
        }
        for (const auto& l : h.lines) {
            if (l.op != LineOp::Added) {
                ++h.old_count;
                if (!old_first) old_first = l.old_no;
            }
            if (l.op != LineOp::Removed) {
                ++h.new_count;
                if (!new_first) new_first = l.new_no;
            }
        }
        h.old_start = h.old_count ? old_first : old_prev;
        h.new_start = h.new_count ? new_first : new_prev;
        file.hunks.push_back(std::move(h));
    }
    if (a.empty() && !b.empty()) file.created = true;
    if (b.empty() && !a.empty()) file.deleted = true;
    return classify_lines(std::move(file));
}

/// Inverts a file diff: additions become removals and vice versa.
inline FileDiff reverse_diff(const FileDiff& file) {
    FileDiff r;
    r.path = file.old_path.empty() ? file.path : file.old_path;
    r.old_path = file.path;
    r.created = file.deleted;
    r.deleted = file.created;
    for (const auto& h : file.hunks) {
        Hunk rh;
        rh.old_start = h.new_start;
        rh.old_count = h.new_count;
        rh.new_start = h.old_start;
        rh.new_count = h.old_count;
        // Keep the deletions-first convention within each change region.
        std::vector<HunkLine> rem, add;
        auto flush = [&] {
            rh.lines.insert(rh.lines.end(), rem.begin(), rem.end());
            rh.lines.insert(rh.lines.end(), add.begin(), add.end());
            rem.clear();
            add.clear();
        };
        for (const auto& l : h.lines) {
            HunkLine x = l;
            std::swap(x.old_no, x.new_no);
            if (l.op == LineOp::Context) {
                flush();
                rh.lines.push_back(x);
            } else if (l.op == LineOp::Removed) {
                x.op = LineOp::Added;
                add.push_back(x);
            } else {
                x.op = LineOp::Removed;
                rem.push_back(x);
            }
        }
        flush();
        r.hunks.push_back(std::move(rh));
    }
    return classify_lines(std::move(r));
}

inline PatchDiff reverse_diff(const PatchDiff& patch) {
    PatchDiff r;
    r.patch_id = patch.patch_id;
    for (const auto& f : patch.files) r.files.push_back(reverse_diff(f));
    return r;
}

}  // namespace dissect
