#pragma once

// Command-line driver: file discovery, configuration lookup, the worker
// pool, report output and the exit code.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mlsmellhound/analyzer.hpp"
#include "mlsmellhound/config.hpp"
#include "mlsmellhound/glob.hpp"
#include "mlsmellhound/report.hpp"

namespace mlsmellhound::cli {

namespace fs = std::filesystem;

inline constexpr int kExitClean = 0;
inline constexpr int kExitFindings = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { Text, Json };

struct RunConfig {
    std::vector<std::string> paths;
    std::vector<std::string> exclude_globs;
    OutputFormat format = OutputFormat::Text;
    std::optional<context::Purpose> context_override;
    bool explain_context = false;
    std::optional<std::string> config_path;
    rules::Category fail_on = rules::Category::Warning;
    unsigned jobs = 0;  // 0 = one per hardware thread
};

struct DiscoveredFile {
    fs::path path;
    std::string display;  // normalized forward-slash form used in reports
};

inline std::string display_path(const fs::path& p) {
    auto s = p.lexically_normal().generic_string();
    return s.empty() ? "." : s;
}

inline bool excluded(const std::string& display, const std::vector<std::string>& exclude_globs) {
    return std::any_of(exclude_globs.begin(), exclude_globs.end(),
                       [&](const std::string& g) { return glob_match(g, display); });
}

/// Recursive walk collecting `.py` files in lexicographic order. Hidden
/// directories below a given root are skipped; files named explicitly are
/// always included unless excluded.
inline std::vector<DiscoveredFile> discover_files(const std::vector<std::string>& paths,
                                                  const std::vector<std::string>& exclude_globs) {
    std::set<std::string> seen;
    std::vector<DiscoveredFile> out;
    auto add = [&](const fs::path& p) {
        auto shown = display_path(p);
        if (!excluded(shown, exclude_globs) && seen.insert(shown).second) {
            out.push_back({p, shown});
        }
    };
    for (const auto& raw : paths) {
        fs::path root(raw);
        std::error_code ec;
        auto status = fs::status(root, ec);
        if (ec || !fs::exists(status)) {
            throw UsageError("path does not exist: " + raw);
        }
        if (!fs::is_directory(status)) {
            add(root);
            continue;
        }
        fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
        if (ec) {
            throw UsageError("cannot read directory " + raw + ": " + ec.message());
        }
        for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
            if (ec) {
                break;
            }
            const auto& entry = *it;
            const auto name = entry.path().filename().string();
            if (entry.is_directory(ec)) {
                if (name.size() > 1 && name.front() == '.' && name != "..") {
                    it.disable_recursion_pending();
                }
                continue;
            }
            if (entry.is_regular_file(ec) && entry.path().extension() == ".py") {
                add(entry.path());
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const DiscoveredFile& a, const DiscoveredFile& b) { return a.display < b.display; });
    return out;
}

/// True when some non-demoted diagnostic is at least as severe as `fail_on`.
inline bool should_fail(const report::AuditReport& report, rules::Category fail_on) {
    for (const auto& f : report.files) {
        for (const auto& d : f.diagnostics) {
            if (!d.demoted && rules::rank(d.category) <= rules::rank(fail_on)) {
                return true;
            }
        }
    }
    return false;
}

inline std::string explain_context(const report::AuditReport& report) {
    std::string out;
    for (const auto& f : report.files) {
        out += "context: " + f.path + " -> " + std::string(context::display_name(f.context.purpose));
        if (f.context.override_pattern) {
            out += " (path override '" + *f.context.override_pattern + "')";
        }
        out += "\n";
        if (f.context.evidence.empty()) {
            out += "  evidence: none\n";
        }
        for (const auto& e : f.context.evidence) {
            out += "  evidence: import of " + e.module + " at line " + std::to_string(e.line) + "\n";
        }
        for (const auto& [facet, value] : f.context.declared_facets) {
            out += "  declared " + facet + ": " + value + "\n";
        }
    }
    return out;
}

/// Analyzes `files` with a pool of `jobs` workers. Results come back in
/// the order of `files` regardless of scheduling.
inline std::vector<report::FileResult> analyze_all(const Analyzer& analyzer, const std::vector<DiscoveredFile>& files,
                                                   unsigned jobs) {
    std::vector<report::FileResult> results(files.size());
    if (jobs == 0) {
        jobs = std::max(1u, std::thread::hardware_concurrency());
    }
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(files.size(), 1)));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < files.size(); i = next++) {
            results[i] = analyzer.analyze_file(files[i].path, files[i].display);
        }
    };
    std::vector<std::jthread> pool;
    for (unsigned k = 1; k < jobs; ++k) {
        pool.emplace_back(worker);
    }
    worker();
    return results;
}

/// Applies the command-line context override as the highest-priority
/// path override.
inline config::Config with_context_override(config::Config cfg, std::optional<context::Purpose> forced) {
    if (forced) {
        cfg.context.overrides.insert(cfg.context.overrides.begin(), context::PathOverride{"**", *forced});
    }
    return cfg;
}

struct RunOutput {
    int exit_code = kExitClean;
    report::AuditReport report;
};

inline RunOutput execute(const RunConfig& run, const config::Config& loaded, std::ostream& out, std::ostream& err) {
    auto cfg = with_context_override(loaded, run.context_override);
    auto fingerprint = config::config_fingerprint(cfg);
    auto files = discover_files(run.paths.empty() ? std::vector<std::string>{"."} : run.paths, run.exclude_globs);
    Analyzer analyzer(std::move(cfg));
    RunOutput result;
    result.report = report::assemble_report(analyze_all(analyzer, files, run.jobs), std::move(fingerprint));
    if (run.explain_context) {
        // Keep stdout parseable in JSON mode.
        (run.format == OutputFormat::Json ? err : out) << explain_context(result.report);
    }
    out << (run.format == OutputFormat::Json ? report::render_json(result.report) : report::render_text(result.report));
    result.exit_code = should_fail(result.report, run.fail_on) ? kExitFindings : kExitClean;
    return result;
}

inline std::optional<std::string> env_config_path() {
    if (const char* v = std::getenv(std::string(config::kConfigEnvVar).c_str())) {
        return std::string(v);
    }
    return std::nullopt;
}

/// Full entry point. `args` excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Context-aware linter for Python projects with ML code", "mlsmellhound"};
    RunConfig run;
    std::string format = "text";
    std::string override_text;
    std::string fail_on = "warning";
    std::string config_path;
    app.add_option("paths", run.paths, "Files or directories to lint (default: .)");
    app.add_option("--config", config_path, "Config file (TOML)");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--context-override", override_text, "Force every file's context")
        ->check(CLI::IsMember({"ml", "non-ml"}));
    app.add_flag("--explain-context", run.explain_context, "Print each file's context and evidence");
    app.add_option("--fail-on", fail_on, "Lowest category that fails the run")
        ->check(CLI::IsMember({"error", "warning", "refactor", "convention"}));
    app.add_option("--exclude", run.exclude_globs, "Glob of paths to skip (repeatable)")->allow_extra_args(false);
    app.add_option("--jobs", run.jobs, "Worker threads (0 = auto)");
    app.set_version_flag("--version", "mlsmellhound " + std::string(report::kToolVersion));

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForVersion& e) {
        out << e.what() << "\n";
        return kExitClean;
    } catch (const CLI::Success&) {
        out << app.help();
        return kExitClean;
    } catch (const CLI::ParseError& e) {
        err << "mlsmellhound: " << e.what() << "\n" << "Run with --help for usage.\n";
        return kExitUsage;
    }

    run.format = format == "json" ? OutputFormat::Json : OutputFormat::Text;
    if (!override_text.empty()) {
        run.context_override = context::parse_purpose(override_text);
    }
    run.fail_on = *rules::parse_category(fail_on);
    if (!config_path.empty()) {
        run.config_path = config_path;
    }
    try {
        for (const auto& g : run.exclude_globs) {
            validate_glob(g);
        }
        auto cfg = config::load_config(run.config_path, env_config_path());
        return execute(run, cfg, out, err).exit_code;
    } catch (const config::ConfigError& e) {
        err << "mlsmellhound: config error: " << e.what() << "\n";
    } catch (const GlobError& e) {
        err << "mlsmellhound: " << e.what() << "\n";
    } catch (const UsageError& e) {
        err << "mlsmellhound: " << e.what() << "\n";
    }
    return kExitUsage;
}

}  // namespace mlsmellhound::cli
