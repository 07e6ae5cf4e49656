#pragma once

// Per-file analysis: bytes -> artifacts -> context -> transformed diagnostics.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include "mlsmellhound/config.hpp"
#include "mlsmellhound/context.hpp"
#include "mlsmellhound/report.hpp"
#include "mlsmellhound/rules.hpp"
#include "mlsmellhound/transforms.hpp"

namespace mlsmellhound {

inline constexpr std::string_view kReadErrorId = "F0003";
inline constexpr std::string_view kReadErrorSymbol = "read-error";

/// Resolves both context profiles once; analysis of individual files is
/// then const and safe to call from several threads.
class Analyzer {
public:
    explicit Analyzer(config::Config cfg) : cfg_(std::move(cfg)) {
        for (auto purpose : {context::Purpose::ML, context::Purpose::NonML}) {
            context::FileContext probe;
            probe.purpose = purpose;
            auto& slot = resolved_[purpose == context::Purpose::ML ? 0 : 1];
            slot.profile = transforms::resolve_profile(probe, cfg_.profiles);
            slot.rules = transforms::effective_rule_set(cfg_.catalog, slot.profile);
        }
    }

    const config::Config& config() const { return cfg_; }

    report::FileResult analyze_source(std::string path, std::string source) const {
        report::FileResult result;
        result.path = path;
        auto built = rules::build_artifacts(path, std::move(source));
        if (auto* err = std::get_if<pylex::LexError>(&built)) {
            result.context = context::detect_file_context({}, path, cfg_.context);
            result.diagnostics.push_back(rules::lex_error_diagnostic(path, *err, result.context.purpose));
            return result;
        }
        const auto& art = std::get<rules::FileArtifacts>(built);
        result.context = context::detect_file_context(art.imports, path, cfg_.context);
        const auto& slot = resolved_[result.context.purpose == context::Purpose::ML ? 0 : 1];
        result.diagnostics = transforms::apply_profile(art, result.context, slot.profile, slot.rules);
        return result;
    }

    report::FileResult analyze_file(const std::filesystem::path& file, std::string display_path) const {
        std::ifstream in(file, std::ios::binary);
        std::ostringstream buf;
        if (in) {
            buf << in.rdbuf();
        }
        if (!in) {
            report::FileResult result;
            result.path = display_path;
            result.context = context::detect_file_context({}, display_path, cfg_.context);
            result.diagnostics.push_back(rules::fatal_diagnostic(display_path, 1, 1, kReadErrorId, kReadErrorSymbol,
                                                                 "Cannot read file", result.context.purpose));
            return result;
        }
        return analyze_source(std::move(display_path), buf.str());
    }

private:
    struct Resolved {
        transforms::ContextProfile profile;
        rules::EffectiveRuleSet rules;
    };

    config::Config cfg_;
    Resolved resolved_[2];
};

}  // namespace mlsmellhound
