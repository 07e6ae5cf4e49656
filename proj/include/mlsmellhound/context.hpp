#pragma once

// Per-file project context: whether a file is ML code, and why.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mlsmellhound/glob.hpp"
#include "mlsmellhound/pysyntax.hpp"

namespace mlsmellhound::context {

enum class Purpose { ML, NonML };

inline std::string_view to_string(Purpose p) { return p == Purpose::ML ? "ml" : "non-ml"; }
inline std::string_view display_name(Purpose p) { return p == Purpose::ML ? "ML" : "non-ML"; }

inline std::optional<Purpose> parse_purpose(std::string_view text) {
    if (text == "ml") {
        return Purpose::ML;
    }
    if (text == "non-ml" || text == "non_ml") {
        return Purpose::NonML;
    }
    return std::nullopt;
}

struct Evidence {
    std::string module;
    int line = 0;

    friend bool operator==(const Evidence&, const Evidence&) = default;
};

struct PathOverride {
    std::string pattern;
    Purpose purpose = Purpose::ML;

    friend bool operator==(const PathOverride&, const PathOverride&) = default;
};

struct FileContext {
    Purpose purpose = Purpose::NonML;
    std::vector<Evidence> evidence;
    // Set when a path override decided the purpose.
    std::optional<std::string> override_pattern;
    // Declared by the user, carried through verbatim, never inferred.
    std::map<std::string, std::string> declared_facets;

    friend bool operator==(const FileContext&, const FileContext&) = default;
};

inline const std::set<std::string>& default_ml_modules() {
    static const std::set<std::string> modules = {
        "tensorflow", "torch", "keras", "sklearn", "jax",   "xgboost", "lightgbm",
        "mxnet",      "theano", "statsmodels", "numpy", "pandas", "scipy",
    };
    return modules;
}

struct ContextConfig {
    std::set<std::string> ml_modules = default_ml_modules();
    // First matching pattern wins.
    std::vector<PathOverride> overrides;
    std::map<std::string, std::string> declared_facets;
};

inline bool classify_root_module(std::string_view root, const ContextConfig& cfg) {
    return !root.empty() && cfg.ml_modules.contains(std::string(root));
}

inline FileContext detect_file_context(const std::vector<pysyntax::ImportRecord>& imports, std::string_view path,
                                       const ContextConfig& cfg) {
    FileContext ctx;
    ctx.declared_facets = cfg.declared_facets;
    for (const auto& imp : imports) {
        if (classify_root_module(imp.root_module, cfg)) {
            ctx.evidence.push_back(Evidence{imp.root_module, imp.line});
        }
    }
    ctx.purpose = ctx.evidence.empty() ? Purpose::NonML : Purpose::ML;
    for (const auto& ov : cfg.overrides) {
        if (glob_match(ov.pattern, path)) {
            ctx.purpose = ov.purpose;
            ctx.override_pattern = ov.pattern;
            break;
        }
    }
    return ctx;
}

}  // namespace mlsmellhound::context
