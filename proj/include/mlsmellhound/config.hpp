#pragma once

// Configuration: built-in defaults, the TOML file format layered over them,
// validation, and a stable fingerprint of the effective configuration.
//
// File layout:
//
//   [context]
//   ml_modules = ["torch", "sklearn"]          # replaces the built-in list
//   overrides = [{ pattern = "experiments/**", purpose = "ml" }]
//   [context.facets]                           # declared, never inferred
//   problem_domain = "fraud detection"
//
//   [rules.too-many-arguments]                 # base parameters, by symbol or id
//   max-args = 6
//
//   [profile.ml]                               # also profile.default, profile.non_ml
//   replace = false                            # true drops the built-in profile
//   disable = ["C0303"]
//   enable = ["line-too-long"]
//   demote = ["convention"]                    # rule ids, symbols or categories
//   [profile.ml.params.invalid-name]
//   good-names = ["df", "X"]
//   [profile.ml.remessage]
//   R0913 = "function {name} takes {count} hyperparameters"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>
#include <toml.hpp>

#include "mlsmellhound/context.hpp"
#include "mlsmellhound/glob.hpp"
#include "mlsmellhound/rules.hpp"
#include "mlsmellhound/transforms.hpp"

namespace mlsmellhound::config {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Config {
    context::ContextConfig context;
    rules::Catalog catalog = rules::default_catalog();
    transforms::ProfileSet profiles;
    std::string source = "built-in defaults";
};

inline constexpr std::string_view kDefaultConfigName = "mlsmellhound.toml";
inline constexpr std::string_view kConfigEnvVar = "MLSMELLHOUND_CONFIG";
inline constexpr std::string_view kHyperparameterMessage =
    "function {name} takes {count} hyperparameters; consider a configuration object";

/// The shipped ML profile: short matrix-style names and common data-science
/// names accepted, a higher argument limit with a hyperparameter-oriented
/// message, two-space indentation allowed, and whitespace and indentation
/// findings moved to the trailing band.
inline transforms::ContextProfile shipped_ml_profile() {
    transforms::ContextProfile p;
    p.context_key = transforms::ProfileKey::ML;
    p.param_overrides["C0103"] = {
        {"variable-name-pattern",
         std::string(rules::kDefaultNamePattern) + "|" + std::string(rules::kMatrixNamePattern)},
        {"good-names", std::vector<std::string>{"i", "j", "k", "_", "df", "e", "X", "y", "lr", "n"}},
    };
    p.param_overrides["R0913"] = {{"max-args", std::int64_t{10}}};
    p.param_overrides["W0311"] = {{"indent-unit", std::vector<std::int64_t>{2, 4}}};
    p.remessage["R0913"] = std::string(kHyperparameterMessage);
    p.demote = {"C0303", "W0311"};
    return p;
}

inline Config default_config() {
    Config cfg;
    cfg.profiles.ml = shipped_ml_profile();
    return cfg;
}

namespace detail {

[[noreturn]] inline void fail(const std::string& key, const std::string& what) {
    throw ConfigError(key + ": " + what);
}

inline std::vector<std::string> string_array(const toml::node& node, const std::string& key) {
    const auto* arr = node.as_array();
    if (arr == nullptr) {
        fail(key, "expected an array of strings");
    }
    std::vector<std::string> out;
    for (const auto& item : *arr) {
        auto s = item.value<std::string>();
        if (!s) {
            fail(key, "expected an array of strings");
        }
        out.push_back(*s);
    }
    return out;
}

inline const toml::table& table_at(const toml::node& node, const std::string& key) {
    const auto* t = node.as_table();
    if (t == nullptr) {
        fail(key, "expected a table");
    }
    return *t;
}

inline rules::ParamValue param_value(const rules::ParamSpec& spec, const toml::node& node, const std::string& key) {
    rules::ParamValue value;
    switch (spec.type) {
    case rules::ParamType::PositiveInt:
        if (auto v = node.value_exact<std::int64_t>()) {
            value = *v;
        } else {
            fail(key, "expected a positive integer");
        }
        break;
    case rules::ParamType::Regex:
        if (auto v = node.value_exact<std::string>()) {
            value = *v;
        } else {
            fail(key, "expected a regular expression string");
        }
        break;
    case rules::ParamType::StringSet:
        value = string_array(node, key);
        break;
    case rules::ParamType::PositiveIntSet: {
        const auto* arr = node.as_array();
        if (arr == nullptr) {
            fail(key, "expected an array of positive integers");
        }
        std::vector<std::int64_t> ints;
        for (const auto& item : *arr) {
            auto v = item.value_exact<std::int64_t>();
            if (!v) {
                fail(key, "expected an array of positive integers");
            }
            ints.push_back(*v);
        }
        value = std::move(ints);
        break;
    }
    }
    if (auto err = rules::validate_param(spec, value)) {
        fail(key, *err);
    }
    return value;
}

inline const rules::RuleDescriptor& rule_at(const rules::Catalog& catalog, std::string_view ref,
                                            const std::string& key) {
    const auto* rule = rules::find_rule(catalog, ref);
    if (rule == nullptr) {
        fail(key, "unknown rule '" + std::string(ref) + "'");
    }
    return *rule;
}

inline rules::ParamMap rule_params(const rules::RuleDescriptor& rule, const toml::table& table,
                                   const std::string& prefix) {
    rules::ParamMap out;
    for (const auto& [k, node] : table) {
        const std::string name(k.str());
        const std::string key = prefix + "." + name;
        const auto* spec = rule.param(name);
        if (spec == nullptr) {
            fail(key, "unknown parameter '" + name + "' for rule " + rule.rule_id + " (" + rule.symbol + ")");
        }
        out[name] = param_value(*spec, node, key);
    }
    return out;
}

inline void parse_context(const toml::table& table, context::ContextConfig& cfg) {
    for (const auto& [k, node] : table) {
        const std::string name(k.str());
        const std::string key = "context." + name;
        if (name == "ml_modules") {
            auto modules = string_array(node, key);
            if (modules.empty()) {
                fail(key, "must name at least one module");
            }
            cfg.ml_modules = {modules.begin(), modules.end()};
        } else if (name == "overrides") {
            const auto* arr = node.as_array();
            if (arr == nullptr) {
                fail(key, "expected an array of { pattern, purpose } tables");
            }
            cfg.overrides.clear();
            for (std::size_t i = 0; i < arr->size(); ++i) {
                const std::string item_key = key + "[" + std::to_string(i) + "]";
                const auto& item = table_at(*arr->get(i), item_key);
                context::PathOverride ov;
                bool have_pattern = false, have_purpose = false;
                for (const auto& [ik, inode] : item) {
                    const std::string iname(ik.str());
                    if (iname == "pattern") {
                        auto s = inode.value<std::string>();
                        if (!s) {
                            fail(item_key + ".pattern", "expected a string");
                        }
                        try {
                            validate_glob(*s);
                        } catch (const GlobError& e) {
                            fail(item_key + ".pattern", e.what());
                        }
                        ov.pattern = *s;
                        have_pattern = true;
                    } else if (iname == "purpose") {
                        auto s = inode.value<std::string>();
                        auto p = s ? context::parse_purpose(*s) : std::nullopt;
                        if (!p) {
                            fail(item_key + ".purpose", "expected \"ml\" or \"non-ml\"");
                        }
                        ov.purpose = *p;
                        have_purpose = true;
                    } else {
                        fail(item_key + "." + iname, "unknown key");
                    }
                }
                if (!have_pattern || !have_purpose) {
                    fail(item_key, "override needs both pattern and purpose");
                }
                cfg.overrides.push_back(std::move(ov));
            }
        } else if (name == "facets") {
            cfg.declared_facets.clear();
            for (const auto& [fk, fnode] : table_at(node, key)) {
                auto s = fnode.value<std::string>();
                if (!s) {
                    fail(key + "." + std::string(fk.str()), "expected a string");
                }
                cfg.declared_facets[std::string(fk.str())] = *s;
            }
        } else {
            fail(key, "unknown key");
        }
    }
}

inline std::string demote_entry(const rules::Catalog& catalog, const std::string& entry, const std::string& key) {
    if (auto cat = rules::parse_category(entry)) {
        if (*cat == rules::Category::Fatal) {
            fail(key, "fatal diagnostics cannot be demoted");
        }
        return entry;
    }
    return rule_at(catalog, entry, key).rule_id;
}

inline transforms::ContextProfile parse_profile(const toml::table& table, transforms::ProfileKey which,
                                                const rules::Catalog& catalog, const std::string& prefix,
                                                bool& replace) {
    transforms::ContextProfile p;
    p.context_key = which;
    replace = false;
    for (const auto& [k, node] : table) {
        const std::string name(k.str());
        const std::string key = prefix + "." + name;
        if (name == "replace") {
            auto b = node.value_exact<bool>();
            if (!b) {
                fail(key, "expected a boolean");
            }
            replace = *b;
        } else if (name == "disable" || name == "enable") {
            auto& target = name == "disable" ? p.disable : p.enable;
            for (const auto& ref : string_array(node, key)) {
                target.insert(rule_at(catalog, ref, key).rule_id);
            }
        } else if (name == "demote") {
            for (const auto& ref : string_array(node, key)) {
                p.demote.insert(demote_entry(catalog, ref, key));
            }
        } else if (name == "params") {
            for (const auto& [rk, rnode] : table_at(node, key)) {
                const std::string rkey = key + "." + std::string(rk.str());
                const auto& rule = rule_at(catalog, rk.str(), rkey);
                for (auto& [pname, value] : rule_params(rule, table_at(rnode, rkey), rkey)) {
                    p.param_overrides[rule.rule_id][pname] = std::move(value);
                }
            }
        } else if (name == "remessage") {
            for (const auto& [rk, rnode] : table_at(node, key)) {
                const std::string rkey = key + "." + std::string(rk.str());
                const auto& rule = rule_at(catalog, rk.str(), rkey);
                auto tpl = rnode.value<std::string>();
                if (!tpl || tpl->empty()) {
                    fail(rkey, "expected a nonempty message template");
                }
                try {
                    for (const auto& ph : transforms::template_placeholders(*tpl)) {
                        if (!rule.placeholders.contains(ph)) {
                            fail(rkey, "unknown placeholder '{" + ph + "}' for rule " + rule.rule_id);
                        }
                    }
                } catch (const transforms::TemplateError& e) {
                    fail(rkey, e.what());
                }
                p.remessage[rule.rule_id] = *tpl;
            }
        } else {
            fail(key, "unknown key");
        }
    }
    for (const auto& id : p.disable) {
        if (p.enable.contains(id)) {
            fail(prefix, "rule " + id + " is both enabled and disabled");
        }
    }
    return p;
}

}  // namespace detail

/// Parses TOML text and layers it over the built-in defaults.
inline Config parse_config(std::string_view text, std::string source_name = "<string>") {
    toml::table root;
    try {
        root = toml::parse(text, source_name);
    } catch (const toml::parse_error& e) {
        const auto& where = e.source().begin;
        throw ConfigError(source_name + ":" + std::to_string(where.line) + ":" + std::to_string(where.column) +
                          ": " + std::string(e.description()));
    }
    Config cfg = default_config();
    cfg.source = std::move(source_name);

    for (const auto& [k, node] : root) {
        const std::string name(k.str());
        if (name == "context") {
            detail::parse_context(detail::table_at(node, name), cfg.context);
        } else if (name == "rules") {
            for (const auto& [rk, rnode] : detail::table_at(node, name)) {
                const std::string rkey = "rules." + std::string(rk.str());
                auto rule = std::find_if(cfg.catalog.begin(), cfg.catalog.end(), [&](const auto& r) {
                    return r.rule_id == rk.str() || r.symbol == rk.str();
                });
                if (rule == cfg.catalog.end()) {
                    detail::fail(rkey, "unknown rule '" + std::string(rk.str()) + "'");
                }
                auto params = detail::rule_params(*rule, detail::table_at(rnode, rkey), rkey);
                for (auto& spec : rule->params) {
                    if (auto it = params.find(spec.name); it != params.end()) {
                        spec.default_value = it->second;
                    }
                }
            }
        } else if (name == "profile") {
            for (const auto& [pk, pnode] : detail::table_at(node, name)) {
                const std::string pname(pk.str());
                const std::string pkey = "profile." + pname;
                transforms::ProfileKey which;
                if (pname == "default") {
                    which = transforms::ProfileKey::Default;
                } else if (pname == "ml") {
                    which = transforms::ProfileKey::ML;
                } else if (pname == "non_ml") {
                    which = transforms::ProfileKey::NonML;
                } else {
                    detail::fail(pkey, "unknown profile (expected default, ml or non_ml)");
                }
                bool replace = false;
                auto parsed = detail::parse_profile(detail::table_at(pnode, pkey), which, cfg.catalog, pkey, replace);
                auto& slot = cfg.profiles.get(which);
                slot = replace ? parsed : transforms::merge_profiles(slot, parsed);
            }
        } else {
            detail::fail(name, "unknown key");
        }
    }
    return cfg;
}

inline Config load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read config file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

/// Resolves which config file applies: the explicit path, then the
/// environment variable, then ./mlsmellhound.toml. nullopt means built-in
/// defaults.
inline std::optional<std::filesystem::path> locate_config(const std::optional<std::string>& explicit_path,
                                                          const std::optional<std::string>& env_path,
                                                          const std::filesystem::path& cwd) {
    if (explicit_path && !explicit_path->empty()) {
        return std::filesystem::path(*explicit_path);
    }
    if (env_path && !env_path->empty()) {
        return std::filesystem::path(*env_path);
    }
    auto local = cwd / kDefaultConfigName;
    if (std::filesystem::is_regular_file(local)) {
        return local;
    }
    return std::nullopt;
}

inline Config load_config(const std::optional<std::string>& explicit_path, const std::optional<std::string>& env_path,
                          const std::filesystem::path& cwd = std::filesystem::current_path()) {
    if (auto path = locate_config(explicit_path, env_path, cwd)) {
        return load_config_file(*path);
    }
    return default_config();
}

inline nlohmann::json param_to_json(const rules::ParamValue& v) {
    return std::visit([](const auto& x) { return nlohmann::json(x); }, v);
}

inline nlohmann::json profile_to_json(const transforms::ContextProfile& p) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [id, map] : p.param_overrides) {
        for (const auto& [name, value] : map) {
            params[id][name] = param_to_json(value);
        }
    }
    return {{"disable", p.disable}, {"enable", p.enable},       {"params", params},
            {"remessage", p.remessage}, {"demote", p.demote}};
}

/// Canonical, key-sorted JSON form of the effective configuration.
inline nlohmann::json config_to_json(const Config& cfg) {
    nlohmann::json overrides = nlohmann::json::array();
    for (const auto& ov : cfg.context.overrides) {
        overrides.push_back({{"pattern", ov.pattern}, {"purpose", context::to_string(ov.purpose)}});
    }
    nlohmann::json rule_json = nlohmann::json::object();
    for (const auto& r : cfg.catalog) {
        nlohmann::json params = nlohmann::json::object();
        for (const auto& spec : r.params) {
            params[spec.name] = param_to_json(spec.default_value);
        }
        rule_json[r.rule_id] = {{"symbol", r.symbol}, {"enabled", r.default_enabled}, {"params", params}};
    }
    return {
        {"context",
         {{"ml_modules", cfg.context.ml_modules},
          {"overrides", overrides},
          {"facets", cfg.context.declared_facets}}},
        {"rules", rule_json},
        {"profiles",
         {{"default", profile_to_json(cfg.profiles.default_profile)},
          {"ml", profile_to_json(cfg.profiles.ml)},
          {"non_ml", profile_to_json(cfg.profiles.non_ml)}}},
    };
}

/// 64-bit FNV-1a of the canonical JSON, as 16 lowercase hex digits.
inline std::string config_fingerprint(const Config& cfg) {
    const std::string canonical = config_to_json(cfg).dump();
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace mlsmellhound::config
