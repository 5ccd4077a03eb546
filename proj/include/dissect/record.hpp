#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dissect/actions.hpp"
#include "dissect/metrics.hpp"
#include "dissect/patterns.hpp"

namespace dissect {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

struct PatchRecord {
    std::string project;
    std::string bug_id;
    PatchMetrics metrics;
    std::string change_profile;
    std::vector<RepairActionTag> actions;
    std::vector<RepairPatternTag> patterns;
    std::vector<std::string> diagnostics;
    std::string diff;  // may be empty for reference records

    std::string id() const { return project + "-" + bug_id; }

    std::set<std::string> action_set() const {
        std::set<std::string> s;
        for (const auto& a : actions) s.insert(a.acronym);
        return s;
    }
    std::set<std::string> variant_set() const {
        std::set<std::string> s;
        for (const auto& p : patterns) s.insert(p.variant);
        return s;
    }
    std::set<Pattern> pattern_set() const {
        std::set<Pattern> s;
        for (const auto& p : patterns) s.insert(p.pattern);
        return s;
    }
};

struct EntryError {
    std::string id;
    std::string message;
};

class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// "Closure-40" -> ("Closure", "40"). Splits at the last dash.
inline std::pair<std::string, std::string> split_patch_id(const std::string& id) {
    auto dash = id.rfind('-');
    if (dash == std::string::npos) return {id, ""};
    return {id.substr(0, dash), id.substr(dash + 1)};
}

namespace detail {

inline bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace detail

/// Orders by project, then bug id numerically when both ids are numbers.
inline bool record_less(const std::string& pa, const std::string& ba, const std::string& pb, const std::string& bb) {
    if (pa != pb) return pa < pb;
    if (detail::all_digits(ba) && detail::all_digits(bb) && ba.size() != bb.size()) return ba.size() < bb.size();
    return ba < bb;
}

inline bool record_less(const PatchRecord& a, const PatchRecord& b) {
    return record_less(a.project, a.bug_id, b.project, b.bug_id);
}

// ---- own schema ------------------------------------------------------------

inline Json sites_to_json(const std::vector<Site>& sites) {
    Json arr = Json::array();
    for (const auto& s : sites) arr.push_back(Json{{"file", s.file}, {"line", s.line}, {"side", to_string(s.side)}});
    return arr;
}

inline Json metrics_to_json(const PatchMetrics& m) {
    Json j;
    j["added"] = m.added;
    j["removed"] = m.removed;
    j["modified"] = m.modified;
    j["patchSize"] = m.patch_size;
    j["chunks"] = m.chunks;
    j["spreading"] = m.spreading;
    j["files"] = m.files;
    j["classes"] = m.classes ? Json(*m.classes) : Json(nullptr);
    j["methods"] = m.methods ? Json(*m.methods) : Json(nullptr);
    return j;
}

inline Json to_json(const PatchRecord& r) {
    Json j;
    j["project"] = r.project;
    j["bugId"] = r.bug_id;
    j["metrics"] = metrics_to_json(r.metrics);
    j["changeProfile"] = r.change_profile;
    Json acts = Json::array();
    for (const auto& a : r.actions) acts.push_back(Json{{"acronym", a.acronym}, {"sites", sites_to_json(a.sites)}});
    j["actions"] = std::move(acts);
    Json pats = Json::array();
    for (const auto& p : r.patterns)
        pats.push_back(Json{{"pattern", to_string(p.pattern)}, {"variant", p.variant}, {"sites", sites_to_json(p.sites)}});
    j["patterns"] = std::move(pats);
    j["diagnostics"] = r.diagnostics;
    j["diff"] = r.diff;
    return j;
}

namespace detail {

inline void require_keys(const Json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
    if (!j.is_object()) throw SchemaError(where + ": expected an object");
    for (const auto& [k, v] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            throw SchemaError("unrecognized field '" + k + "' in " + where);
    }
}

inline std::vector<Site> sites_from_json(const Json& arr, const std::string& where) {
    std::vector<Site> out;
    if (!arr.is_array()) throw SchemaError(where + ": sites must be an array");
    for (const auto& s : arr) {
        require_keys(s, {"file", "line", "side"}, where);
        Site site;
        site.file = s.at("file").get<std::string>();
        site.line = s.at("line").get<int>();
        site.side = s.at("side").get<std::string>() == "old" ? Side::Old : Side::New;
        out.push_back(std::move(site));
    }
    return out;
}

inline std::optional<int> opt_int(const Json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<int>();
}

}  // namespace detail

inline PatchRecord record_from_json(const Json& j) {
    detail::require_keys(j, {"project", "bugId", "metrics", "changeProfile", "actions", "patterns", "diagnostics", "diff"},
                         "record");
    PatchRecord r;
    try {
        r.project = j.at("project").get<std::string>();
        r.bug_id = j.at("bugId").get<std::string>();
        const auto where = "record " + r.id();
        const auto& m = j.at("metrics");
        detail::require_keys(m, {"added", "removed", "modified", "patchSize", "chunks", "spreading", "files", "classes", "methods"},
                             where + " metrics");
        r.metrics.added = m.at("added").get<int>();
        r.metrics.removed = m.at("removed").get<int>();
        r.metrics.modified = m.at("modified").get<int>();
        r.metrics.patch_size = m.at("patchSize").get<int>();
        r.metrics.chunks = m.at("chunks").get<int>();
        r.metrics.spreading = m.at("spreading").get<int>();
        r.metrics.files = m.at("files").get<int>();
        r.metrics.classes = detail::opt_int(m.at("classes"));
        r.metrics.methods = detail::opt_int(m.at("methods"));
        r.change_profile = j.at("changeProfile").get<std::string>();
        for (const auto& a : j.at("actions")) {
            detail::require_keys(a, {"acronym", "sites"}, where + " action");
            RepairActionTag t;
            t.acronym = a.at("acronym").get<std::string>();
            auto info = find_action(t.acronym);
            if (!info) throw SchemaError(where + ": unknown action '" + t.acronym + "'");
            t.group = info->group;
            t.action = info->type;
            t.sites = detail::sites_from_json(a.at("sites"), where);
            r.actions.push_back(std::move(t));
        }
        for (const auto& p : j.at("patterns")) {
            detail::require_keys(p, {"pattern", "variant", "sites"}, where + " pattern");
            RepairPatternTag t;
            auto pat = parse_pattern(p.at("pattern").get<std::string>());
            if (!pat) throw SchemaError(where + ": unknown pattern '" + p.at("pattern").get<std::string>() + "'");
            t.pattern = *pat;
            t.variant = p.at("variant").get<std::string>();
            t.sites = detail::sites_from_json(p.at("sites"), where);
            r.patterns.push_back(std::move(t));
        }
        r.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
        r.diff = j.at("diff").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("record " + r.id() + ": " + e.what());
    }
    return r;
}

// ---- published dissection schema -------------------------------------------

/// Fine-grained action names of the published file, folded onto the
/// 28-entry taxonomy.
inline const std::map<std::string, std::string>& published_action_table() {
    static const std::map<std::string, std::string> t = {
        {"assignAdd", "asgnA"},       {"assignRem", "asgnR"},       {"assignExpChange", "asgnM"},
        {"condBranIfAdd", "cndA"},    {"condBranIfElseAdd", "cndA"}, {"condBranElseAdd", "cndA"},
        {"condBranCaseAdd", "cndA"},  {"condBranRem", "cndR"},      {"condExpExpand", "cndM"},
        {"condExpRed", "cndM"},       {"condExpMod", "cndM"},       {"loopAdd", "lpA"},
        {"loopRem", "lpR"},           {"loopCondChange", "lpM"},    {"loopInitChange", "lpM"},
        {"mcAdd", "mcA"},             {"mcParAdd", "mcA"},          {"mcRem", "mcR"},
        {"mcParRem", "mcR"},          {"mcRepl", "mcM"},            {"mcMove", "mcM"},
        {"mcParValChange", "mcM"},    {"mcParSwap", "mcM"},         {"mdAdd", "mdA"},
        {"mdParAdd", "mdA"},          {"mdRem", "mdR"},             {"mdParRem", "mdR"},
        {"mdRen", "mdM"},             {"mdParTyChange", "mdM"},     {"mdRetTyChange", "mdM"},
        {"mdModChange", "mdM"},       {"mdOverride", "mdM"},        {"objInstAdd", "objA"},
        {"objInstRem", "objR"},       {"objInstMod", "objM"},       {"exTryCatchAdd", "exA"},
        {"exThrowsAdd", "exA"},       {"exTryCatchRem", "exR"},     {"exThrowsRem", "exR"},
        {"retBranchAdd", "retA"},     {"retRem", "retR"},           {"retExpChange", "retM"},
        {"varAdd", "varA"},           {"varRem", "varR"},           {"varTyChange", "varM"},
        {"varModChange", "varM"},     {"varReplVar", "varM"},       {"varReplMc", "varM"},
        {"tyAdd", "tyA"},             {"tyImpInterf", "tyM"},       {"tyImpInterface", "tyM"},
    };
    return t;
}

/// Maps a published action name to an acronym. Unknown names fall back to
/// their group prefix and an Add/Rem suffix.
inline std::optional<std::string> translate_published_action(const std::string& name) {
    if (find_action(name)) return name;
    const auto& t = published_action_table();
    if (auto it = t.find(name); it != t.end()) return it->second;
    static const std::vector<std::pair<std::string, std::string>> prefixes = {
        {"assign", "asgn"}, {"asgn", "asgn"}, {"cond", "cnd"}, {"cnd", "cnd"}, {"loop", "lp"}, {"lp", "lp"},
        {"mc", "mc"},       {"md", "md"},     {"obj", "obj"},  {"ex", "ex"},   {"ret", "ret"},  {"var", "var"},
        {"ty", "ty"},
    };
    for (const auto& [p, g] : prefixes) {
        if (!starts_with(name, p)) continue;
        std::string acr = g + (name.find("Add") != std::string::npos   ? "A"
                               : name.find("Rem") != std::string::npos ? "R"
                                                                       : "M");
        if (find_action(acr)) return acr;
        return std::nullopt;
    }
    return std::nullopt;
}

inline const std::set<std::string>& published_top_fields() {
    static const std::set<std::string> s = {"bugId",        "program",         "project",       "changedFiles",
                                            "diff",         "failingTests",    "metrics",       "observations",
                                            "repairActions", "repairPatterns", "repairTools",   "revisionId",
                                            "repairActionsCount", "repairPatternsCount"};
    return s;
}

namespace detail {

inline int metric_or(const Json& m, std::initializer_list<const char*> keys, int fallback = 0) {
    for (const char* k : keys)
        if (m.contains(k) && m[k].is_number()) return static_cast<int>(m[k].get<double>());
    return fallback;
}

inline std::optional<int> metric_opt(const Json& m, std::initializer_list<const char*> keys) {
    for (const char* k : keys)
        if (m.contains(k) && m[k].is_number()) return static_cast<int>(m[k].get<double>());
    return std::nullopt;
}

inline std::string json_scalar_string(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    return j.dump();
}

}  // namespace detail

inline PatchRecord record_from_published(const Json& j) {
    if (!j.is_object()) throw SchemaError("published entry: expected an object");
    for (const auto& [k, v] : j.items())
        if (!published_top_fields().count(k)) throw SchemaError("unrecognized field '" + k + "'");
    PatchRecord r;
    r.project = detail::json_scalar_string(j.contains("project") ? j.at("project") : j.at("program"));
    r.bug_id = detail::json_scalar_string(j.at("bugId"));
    if (j.contains("metrics")) {
        const auto& m = j.at("metrics");
        r.metrics.added = detail::metric_or(m, {"addedLines", "linesAdd", "added"});
        r.metrics.removed = detail::metric_or(m, {"removedLines", "linesRem", "removed"});
        r.metrics.modified = detail::metric_or(m, {"modifiedLines", "linesMod", "modified"});
        r.metrics.patch_size = detail::metric_or(m, {"sizeInLines", "patchSize"},
                                                 r.metrics.added + r.metrics.removed + r.metrics.modified);
        r.metrics.chunks = detail::metric_or(m, {"chunks"});
        r.metrics.spreading = detail::metric_or(m, {"spreadingCodeOnly", "spreadCodeOnly", "spreading"});
        r.metrics.files = detail::metric_or(m, {"files"});
        r.metrics.classes = detail::metric_opt(m, {"classes"});
        r.metrics.methods = detail::metric_opt(m, {"methods"});
    }
    r.change_profile = change_profile(r.metrics);
    std::set<std::string> seen;
    if (j.contains("repairActions")) {
        for (const auto& a : j.at("repairActions")) {
            const auto name = a.get<std::string>();
            auto acr = translate_published_action(name);
            if (!acr) {
                r.diagnostics.push_back("unknownAction: " + name);
                continue;
            }
            if (!seen.insert(*acr).second) continue;
            auto info = find_action(*acr);
            r.actions.push_back(RepairActionTag{*acr, info->group, info->type, {}});
        }
        std::stable_sort(r.actions.begin(), r.actions.end(), [](const auto& x, const auto& y) {
            auto ix = std::find_if(kActions.begin(), kActions.end(), [&](const auto& i) { return i.acronym == x.acronym; });
            auto iy = std::find_if(kActions.begin(), kActions.end(), [&](const auto& i) { return i.acronym == y.acronym; });
            return ix < iy;
        });
    }
    if (j.contains("repairPatterns")) {
        std::set<std::string> vseen;
        for (const auto& p : j.at("repairPatterns")) {
            const auto name = p.get<std::string>();
            auto pat = pattern_of_variant(name);
            if (!pat) pat = parse_pattern(name);
            if (!pat) {
                if (name != "notClassified") r.diagnostics.push_back("unknownPattern: " + name);
                continue;
            }
            if (!vseen.insert(name).second) continue;
            r.patterns.push_back(RepairPatternTag{*pat, name, {}});
        }
    }
    if (j.contains("diff") && j.at("diff").is_string()) r.diff = j.at("diff").get<std::string>();
    return r;
}

// ---- files -------------------------------------------------------------------

struct RecordSet {
    std::vector<PatchRecord> records;
    std::vector<EntryError> errors;
    bool published = false;  // loaded from the published dissection file
};

/// Accepts this tool's own document, the published dissection file (a list
/// of entries or an object keyed by id), or a bare list of own records.
inline RecordSet records_from_json(const Json& doc) {
    RecordSet out;
    auto own_list = [&](const Json& arr) {
        for (const auto& e : arr) out.records.push_back(record_from_json(e));
    };
    auto published_list = [&](const Json& arr) {
        out.published = true;
        for (const auto& e : arr) out.records.push_back(record_from_published(e));
    };
    auto looks_published = [](const Json& e) {
        return e.is_object() && (e.contains("repairActions") || e.contains("repairPatterns") || e.contains("program"));
    };
    if (doc.is_object() && doc.contains("schemaVersion")) {
        detail::require_keys(doc, {"schemaVersion", "records", "errors", "aggregates"}, "document");
        if (doc.at("schemaVersion") != kSchemaVersion)
            throw SchemaError("unsupported schemaVersion " + doc.at("schemaVersion").dump());
        own_list(doc.at("records"));
        if (doc.contains("errors"))
            for (const auto& e : doc.at("errors")) {
                detail::require_keys(e, {"id", "message"}, "error entry");
                out.errors.push_back({e.at("id").get<std::string>(), e.at("message").get<std::string>()});
            }
    } else if (doc.is_array()) {
        if (!doc.empty() && looks_published(doc.front())) published_list(doc);
        else own_list(doc);
    } else if (doc.is_object()) {
        Json arr = Json::array();
        for (const auto& [k, v] : doc.items()) arr.push_back(v);
        if (arr.empty() || !looks_published(arr.front())) {
            const std::string first = doc.empty() ? std::string("<empty>") : doc.begin().key();
            throw SchemaError("unrecognized field '" + first + "'");
        }
        published_list(arr);
    } else {
        throw SchemaError("unrecognized document: expected an object or an array");
    }
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline RecordSet load_reference_json(const std::string& path) {
    const auto text = read_file(path);
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(path + ": " + e.what());
    }
    return records_from_json(doc);
}

}  // namespace dissect
