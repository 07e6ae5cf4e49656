#pragma once

// Audit report assembly and rendering (console text and JSON).
//
// JSON schema, field names fixed:
//
//   {
//     "version": string,
//     "config_fingerprint": string,   // 16 hex digits, 64-bit FNV-1a of the
//                                     // canonical key-sorted config JSON
//     "files": [{
//       "path": string,
//       "context": "ml" | "non-ml",
//       "evidence": [{"module": string, "line": int}],
//       "diagnostics": [{"line": int, "column": int, "rule_id": string,
//                        "symbol": string,
//                        "category": "error"|"warning"|"refactor"|"convention"|"fatal",
//                        "message": string, "demoted": bool}]
//     }],
//     "summary": {"files": int, "ml_files": int, "diagnostics": int,
//                 "demoted": int, "by_category": {category: int},
//                 "by_rule": {rule_id: int}}
//   }

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlsmellhound/context.hpp"
#include "mlsmellhound/rules.hpp"

namespace mlsmellhound::report {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kDeprioritisedSeparator = "--- deprioritised ---";

using context::FileContext;
using rules::Diagnostic;

struct FileResult {
    std::string path;
    FileContext context;
    std::vector<Diagnostic> diagnostics;  // already transformed and ordered
};

struct Summary {
    int files = 0;
    int ml_files = 0;
    int diagnostics = 0;
    int demoted = 0;
    std::map<std::string, int> by_category;  // every category, zero included
    std::map<std::string, int> by_rule;
    std::map<int, int> by_band;

    friend bool operator==(const Summary&, const Summary&) = default;
};

struct AuditReport {
    std::vector<FileResult> files;  // sorted by path
    Summary summary;
    std::string tool_version = std::string(kToolVersion);
    std::string config_fingerprint;
};

inline Summary summarize(const std::vector<FileResult>& files) {
    Summary s;
    for (auto c : rules::kAllCategories) {
        s.by_category[std::string(rules::to_string(c))] = 0;
    }
    s.by_band = {{0, 0}, {1, 0}};
    for (const auto& f : files) {
        ++s.files;
        if (f.context.purpose == context::Purpose::ML) {
            ++s.ml_files;
        }
        for (const auto& d : f.diagnostics) {
            ++s.diagnostics;
            ++s.by_category[std::string(rules::to_string(d.category))];
            ++s.by_rule[d.rule_id];
            ++s.by_band[d.demoted ? 1 : 0];
            if (d.demoted) {
                ++s.demoted;
            }
        }
    }
    return s;
}

/// Orders per-file results by path (inputs may arrive in any order) and
/// computes the summary.
inline AuditReport assemble_report(std::vector<FileResult> results, std::string config_fingerprint = {}) {
    std::stable_sort(results.begin(), results.end(),
                     [](const FileResult& a, const FileResult& b) { return a.path < b.path; });
    AuditReport r;
    r.summary = summarize(results);
    r.files = std::move(results);
    r.config_fingerprint = std::move(config_fingerprint);
    return r;
}

inline std::string format_diagnostic(const Diagnostic& d) {
    return std::to_string(d.line) + ":" + std::to_string(d.column) + ": " + d.rule_id + " (" + d.symbol + ") " +
           d.message;
}

inline std::string render_summary(const Summary& s) {
    std::ostringstream out;
    out << "Summary: " << s.files << " file" << (s.files == 1 ? "" : "s") << " analysed (" << s.ml_files
        << " ML, " << (s.files - s.ml_files) << " non-ML)\n";
    out << "Diagnostics: " << s.diagnostics << " (" << s.demoted << " deprioritised)\n";
    out << " ";
    for (auto c : rules::kAllCategories) {
        const auto name = std::string(rules::to_string(c));
        out << " " << name << "=" << s.by_category.at(name);
    }
    out << "\n";
    return out.str();
}

inline std::string render_text(const AuditReport& report) {
    std::ostringstream out;
    for (const auto& f : report.files) {
        out << f.path << " [context: " << context::display_name(f.context.purpose) << "]\n";
        bool separated = false;
        for (const auto& d : f.diagnostics) {
            if (d.demoted && !separated) {
                out << kDeprioritisedSeparator << "\n";
                separated = true;
            }
            out << format_diagnostic(d) << "\n";
        }
        out << "\n";
    }
    out << render_summary(report.summary);
    return out.str();
}

inline nlohmann::ordered_json to_json(const AuditReport& report) {
    using nlohmann::ordered_json;
    ordered_json files = ordered_json::array();
    for (const auto& f : report.files) {
        ordered_json evidence = ordered_json::array();
        for (const auto& e : f.context.evidence) {
            evidence.push_back(ordered_json{{"module", e.module}, {"line", e.line}});
        }
        ordered_json diags = ordered_json::array();
        for (const auto& d : f.diagnostics) {
            diags.push_back(ordered_json{{"line", d.line},
                                         {"column", d.column},
                                         {"rule_id", d.rule_id},
                                         {"symbol", d.symbol},
                                         {"category", rules::to_string(d.category)},
                                         {"message", d.message},
                                         {"demoted", d.demoted}});
        }
        files.push_back(ordered_json{{"path", f.path},
                                     {"context", context::to_string(f.context.purpose)},
                                     {"evidence", std::move(evidence)},
                                     {"diagnostics", std::move(diags)}});
    }
    ordered_json by_category = ordered_json::object();
    for (auto c : rules::kAllCategories) {
        const auto name = std::string(rules::to_string(c));
        by_category[name] = report.summary.by_category.count(name) ? report.summary.by_category.at(name) : 0;
    }
    ordered_json by_rule = ordered_json::object();
    for (const auto& [id, n] : report.summary.by_rule) {
        by_rule[id] = n;
    }
    return ordered_json{
        {"version", report.tool_version},
        {"config_fingerprint", report.config_fingerprint},
        {"files", std::move(files)},
        {"summary",
         {{"files", report.summary.files},
          {"ml_files", report.summary.ml_files},
          {"diagnostics", report.summary.diagnostics},
          {"demoted", report.summary.demoted},
          {"by_category", std::move(by_category)},
          {"by_rule", std::move(by_rule)}}},
    };
}

/// Compact UTF-8 JSON followed by a newline.
inline std::string render_json(const AuditReport& report) { return to_json(report).dump() + "\n"; }

class ReportParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads a rendered report back. Only fields present in the JSON are
/// restored; per-diagnostic path and purpose come from the file entry.
inline AuditReport parse_json(std::string_view text) {
    try {
        auto j = nlohmann::json::parse(text);
        AuditReport r;
        r.tool_version = j.at("version").get<std::string>();
        r.config_fingerprint = j.at("config_fingerprint").get<std::string>();
        for (const auto& jf : j.at("files")) {
            FileResult f;
            f.path = jf.at("path").get<std::string>();
            auto purpose = context::parse_purpose(jf.at("context").get<std::string>());
            if (!purpose) {
                throw ReportParseError("bad context value");
            }
            f.context.purpose = *purpose;
            for (const auto& je : jf.at("evidence")) {
                f.context.evidence.push_back({je.at("module").get<std::string>(), je.at("line").get<int>()});
            }
            for (const auto& jd : jf.at("diagnostics")) {
                Diagnostic d;
                d.path = f.path;
                d.line = jd.at("line").get<int>();
                d.column = jd.at("column").get<int>();
                d.rule_id = jd.at("rule_id").get<std::string>();
                d.symbol = jd.at("symbol").get<std::string>();
                auto cat = rules::parse_category(jd.at("category").get<std::string>());
                if (!cat) {
                    throw ReportParseError("bad category value");
                }
                d.category = *cat;
                d.message = jd.at("message").get<std::string>();
                d.demoted = jd.at("demoted").get<bool>();
                d.context_purpose = f.context.purpose;
                f.diagnostics.push_back(std::move(d));
            }
            r.files.push_back(std::move(f));
        }
        const auto& js = j.at("summary");
        r.summary = summarize(r.files);
        if (js.at("files").get<int>() != r.summary.files || js.at("diagnostics").get<int>() != r.summary.diagnostics ||
            js.at("demoted").get<int>() != r.summary.demoted || js.at("ml_files").get<int>() != r.summary.ml_files) {
            throw ReportParseError("summary does not match file sections");
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ReportParseError(e.what());
    }
}

}  // namespace mlsmellhound::report
