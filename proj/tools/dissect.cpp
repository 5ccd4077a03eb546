// dissect: command-line front end for the patch-dissection library.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>

#include "dissect/dissect.hpp"

namespace fs = std::filesystem;
using namespace dissect;

namespace {

constexpr int kOk = 0;
constexpr int kEntryErrors = 1;
constexpr int kUsage = 2;

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

std::string rank_csv(const std::vector<std::pair<std::string, int>>& rank) {
    std::string s = "name,patches\n";
    for (const auto& [k, n] : rank) s += k + "," + std::to_string(n) + "\n";
    return s;
}

std::string composition_csv(const std::vector<PatchRecord>& records) {
    std::string s = "pattern";
    for (const auto& a : kActions) s += "," + std::string(a.acronym);
    s += "\n";
    for (const auto& [p, row] : pattern_action_composition(records)) {
        s += p;
        for (const auto& a : kActions) {
            auto it = row.find(std::string(a.acronym));
            s += "," + std::to_string(it == row.end() ? 0 : it->second);
        }
        s += "\n";
    }
    return s;
}

std::string table_csv(const SummaryTable& t) {
    std::string s = "metric";
    for (auto h : kTableHeaders) s += std::string(",") + h;
    s += "\n";
    for (const auto& r : t.rows) {
        s += r.metric;
        for (double v : r.values) s += "," + format_number(v);
        s += "\n";
    }
    return s;
}

std::string counts_csv(const std::vector<PatchRecord>& records) {
    std::string s = "id,actions,patterns\n";
    const auto a = action_counts(records), p = pattern_counts(records);
    for (std::size_t i = 0; i < records.size(); ++i)
        s += records[i].id() + "," + format_number(a[i]) + "," + format_number(p[i]) + "\n";
    return s;
}

void write_reports(const fs::path& dir, const std::vector<PatchRecord>& records) {
    fs::create_directories(dir);
    write_text(dir / "aggregates.json", dump_json(aggregates_to_json(records)));
    if (records.empty()) return;
    write_text(dir / "table.csv", table_csv(percentile_table(records)));
    const auto v = venn_summary(records);
    std::string venn = "region,patches\n";
    for (auto k : kVennRegions) venn += std::string(k) + "," + std::to_string(v.at(k)) + "\n";
    write_text(dir / "venn.csv", venn);
    write_text(dir / "actions.csv", rank_csv(action_rank(records)));
    write_text(dir / "patterns.csv", rank_csv(pattern_rank(records)));
    write_text(dir / "per-patch-counts.csv", counts_csv(records));
    write_text(dir / "composition.csv", composition_csv(records));
}

std::string stats_text(const std::vector<PatchRecord>& records, bool table, bool venn, bool ra, bool rp, bool dist) {
    std::string out;
    auto section = [&](const std::string& title, const std::string& body) {
        if (!out.empty()) out += "\n";
        out += "# " + title + "\n" + body;
    };
    if (table) section("percentiles", render_table(percentile_table(records)));
    if (venn) section("change profile", render_venn(venn_summary(records)));
    if (ra) section("repair actions", render_rank(action_rank(records)));
    if (rp) section("repair patterns", render_rank(pattern_rank(records)));
    if (dist)
        section("per patch", render_box("actions", distribution_summary(action_counts(records))) +
                                 render_box("patterns", distribution_summary(pattern_counts(records))));
    return out;
}

const char* kIndexPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>dissect</title></head>
<body><p>Records are served at <a href="/records.json">/records.json</a>.</p></body></html>
)";

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dissects bug-fix patches: size, spreading, repair actions and repair patterns."};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "dissect every entry of a manifest");
    std::string manifest_path, out_path, reports_dir;
    bool run_dedup = false;
    unsigned jobs = 0;
    run->add_option("manifest", manifest_path, "manifest JSON")->required();
    run->add_option("--out", out_path, "records file (default: stdout)");
    run->add_option("--reports", reports_dir, "directory for aggregate reports");
    run->add_flag("--dedup", run_dedup, "drop duplicate bugs from the aggregates");
    run->add_option("--jobs", jobs, "worker threads (default: all cores)");

    // one
    auto* one = app.add_subcommand("one", "dissect a single patch and print its record");
    std::string diff_path, buggy_dir, fixed_dir, one_id = "patch-1";
    auto* diff_opt = one->add_option("--diff", diff_path, "unified diff file");
    auto* buggy_opt = one->add_option("--buggy", buggy_dir, "buggy tree (with --fixed)");
    auto* fixed_opt = one->add_option("--fixed", fixed_dir, "fixed tree (with --buggy)");
    buggy_opt->needs(fixed_opt);
    fixed_opt->needs(buggy_opt);
    one->add_option("--id", one_id, "patch id, e.g. Closure-40");
    bool one_text = false;
    one->add_flag("--summary", one_text, "print a short summary instead of JSON");

    // stats
    auto* stats = app.add_subcommand("stats", "aggregate statistics over a records file");
    std::string records_path;
    bool s_table = false, s_venn = false, s_ra = false, s_rp = false, s_dist = false, s_dedup = false, s_json = false;
    stats->add_option("records", records_path, "records JSON (own or published schema)")->required();
    stats->add_flag("--table2", s_table, "percentile table");
    stats->add_flag("--venn", s_venn, "change-profile counts");
    stats->add_flag("--rank-actions", s_ra, "patches per repair action");
    stats->add_flag("--rank-patterns", s_rp, "patches per repair pattern");
    stats->add_flag("--distributions", s_dist, "actions and patterns per patch");
    stats->add_flag("--dedup", s_dedup, "drop duplicate bugs");
    stats->add_flag("--json", s_json, "print all aggregates as JSON");
    std::string csv_dir;
    stats->add_option("--csv", csv_dir, "also write per-report CSV files here");

    // serve
    auto* serve = app.add_subcommand("serve", "serve a records file to the explorer");
    std::string serve_path, static_dir, host = "127.0.0.1";
    int port = 8080;
    serve->add_option("records", serve_path, "records JSON")->required();
    serve->add_option("--port", port, "port")->required();
    serve->add_option("--host", host, "bind address");
    serve->add_option("--static", static_dir, "directory with the explorer build");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*run) {
            Manifest m;
            try {
                m = load_manifest(manifest_path);
            } catch (const ManifestError& e) {
                std::cerr << "dissect: " << e.what() << "\n";
                return kUsage;
            }
            auto result = dissect_corpus(m, jobs);
            auto for_stats = run_dedup ? dedup_records(result.records) : result.records;
            Json doc = corpus_to_json(result.records, result.errors);
            doc["aggregates"] = aggregates_to_json(for_stats);
            if (out_path.empty()) std::cout << dump_json(doc);
            else write_text(out_path, dump_json(doc));
            if (!reports_dir.empty()) write_reports(reports_dir, for_stats);
            for (const auto& e : result.errors) std::cerr << "dissect: " << e.id << ": " << e.message << "\n";
            return result.errors.empty() ? kOk : kEntryErrors;
        }

        if (*one) {
            if (diff_path.empty() && buggy_dir.empty()) {
                std::cerr << "dissect one: give --diff, or --buggy with --fixed\n";
                return kUsage;
            }
            ManifestEntry e;
            std::tie(e.project, e.bug_id) = split_patch_id(one_id);
            if (!diff_path.empty()) e.diff = diff_path;
            if (!buggy_dir.empty()) {
                e.buggy = buggy_dir;
                e.fixed = fixed_dir;
            }
            (void)diff_opt;
            PatchRecord r;
            try {
                r = dissect_patch(e);
            } catch (const EntryFailure& ex) {
                std::cerr << "dissect: " << e.id() << ": " << ex.what() << "\n";
                return kEntryErrors;
            }
            if (!one_text) {
                std::cout << dump_json(to_json(r));
                return kOk;
            }
            const auto& mt = r.metrics;
            std::cout << r.id() << "\n"
                      << "  size " << mt.patch_size << " (added " << mt.added << ", removed " << mt.removed
                      << ", modified " << mt.modified << ")\n"
                      << "  chunks " << mt.chunks << ", spreading " << mt.spreading << ", files " << mt.files
                      << ", classes " << (mt.classes ? std::to_string(*mt.classes) : "?") << ", methods "
                      << (mt.methods ? std::to_string(*mt.methods) : "?") << "\n  actions";
            for (const auto& a : r.actions) std::cout << " " << a.acronym;
            std::cout << "\n  patterns";
            for (const auto& p : r.patterns) std::cout << " " << p.variant;
            if (r.patterns.empty()) std::cout << " (not classified)";
            std::cout << "\n";
            return kOk;
        }

        if (*stats) {
            RecordSet rs;
            try {
                rs = load_reference_json(records_path);
            } catch (const std::exception& e) {
                std::cerr << "dissect: " << e.what() << "\n";
                return kUsage;
            }
            auto records = s_dedup ? dedup_records(rs.records) : rs.records;
            if (records.empty()) {
                std::cerr << "dissect: no records\n";
                return kEntryErrors;
            }
            if (!csv_dir.empty()) write_reports(csv_dir, records);
            if (s_json) {
                std::cout << dump_json(aggregates_to_json(records));
                return kOk;
            }
            if (!(s_table || s_venn || s_ra || s_rp || s_dist)) s_table = s_venn = s_ra = s_rp = s_dist = true;
            std::cout << stats_text(records, s_table, s_venn, s_ra, s_rp, s_dist);
            return kOk;
        }

        if (*serve) {
            RecordSet rs;
            try {
                rs = load_reference_json(serve_path);
            } catch (const std::exception& e) {
                std::cerr << "dissect: " << e.what() << "\n";
                return kUsage;
            }
            const std::string body = dump_json(corpus_to_json(rs.records, rs.errors));
            httplib::Server srv;
            auto send_records = [&body](const httplib::Request&, httplib::Response& res) {
                res.set_header("Access-Control-Allow-Origin", "*");
                res.set_content(body, "application/json");
            };
            srv.Get("/records.json", send_records);
            srv.Get("/api/records", send_records);
            if (!static_dir.empty()) {
                if (!srv.set_mount_point("/", static_dir)) {
                    std::cerr << "dissect: no such directory " << static_dir << "\n";
                    return kUsage;
                }
            } else {
                srv.Get("/", [](const httplib::Request&, httplib::Response& res) { res.set_content(kIndexPage, "text/html"); });
            }
            std::cerr << "serving " << rs.records.size() << " records on http://" << host << ":" << port << "\n";
            if (!srv.listen(host, port)) {
                std::cerr << "dissect: cannot listen on " << host << ":" << port << "\n";
                return kUsage;
            }
            return kOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "dissect: " << e.what() << "\n";
        return kEntryErrors;
    }
    return kUsage;
}
