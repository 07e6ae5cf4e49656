#pragma once

// Context transformations: subtraction and addition pick the rules that
// run, remessage rewrites findings for the audience, reprioritisation
// moves findings that matter less in this context to a trailing band.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "mlsmellhound/context.hpp"
#include "mlsmellhound/rules.hpp"

namespace mlsmellhound::transforms {

using context::FileContext;
using context::Purpose;
using rules::Diagnostic;

enum class ProfileKey { Default, ML, NonML };

inline std::string_view to_string(ProfileKey k) {
    switch (k) {
    case ProfileKey::Default: return "default";
    case ProfileKey::ML: return "ml";
    case ProfileKey::NonML: return "non_ml";
    }
    return "?";
}

struct ContextProfile {
    ProfileKey context_key = ProfileKey::Default;
    std::set<std::string> disable;  // rule ids
    std::set<std::string> enable;   // rule ids
    std::map<std::string, rules::ParamMap> param_overrides;  // rule id -> partial params
    std::map<std::string, std::string> remessage;            // rule id -> template
    std::set<std::string> demote;   // rule ids or category names

    static ContextProfile keyed(ProfileKey key) {
        ContextProfile p;
        p.context_key = key;
        return p;
    }

    bool empty() const {
        return disable.empty() && enable.empty() && param_overrides.empty() && remessage.empty() && demote.empty();
    }

    friend bool operator==(const ContextProfile&, const ContextProfile&) = default;
};

struct ProfileSet {
    ContextProfile default_profile = ContextProfile::keyed(ProfileKey::Default);
    ContextProfile ml = ContextProfile::keyed(ProfileKey::ML);
    ContextProfile non_ml = ContextProfile::keyed(ProfileKey::NonML);

    const ContextProfile& for_purpose(Purpose p) const { return p == Purpose::ML ? ml : non_ml; }
    ContextProfile& get(ProfileKey k) {
        return k == ProfileKey::Default ? default_profile : (k == ProfileKey::ML ? ml : non_ml);
    }
    const ContextProfile& get(ProfileKey k) const { return const_cast<ProfileSet*>(this)->get(k); }

    friend bool operator==(const ProfileSet&, const ProfileSet&) = default;
};

/// Layers `top` over `base`: entries in `top` win. A rule enabled in one
/// layer and disabled in the other ends up as `top` says.
inline ContextProfile merge_profiles(const ContextProfile& base, const ContextProfile& top) {
    ContextProfile out;
    out.context_key = top.context_key;
    for (const auto& id : base.disable) {
        if (!top.enable.contains(id)) {
            out.disable.insert(id);
        }
    }
    for (const auto& id : base.enable) {
        if (!top.disable.contains(id)) {
            out.enable.insert(id);
        }
    }
    out.disable.insert(top.disable.begin(), top.disable.end());
    out.enable.insert(top.enable.begin(), top.enable.end());
    out.param_overrides = base.param_overrides;
    for (const auto& [id, params] : top.param_overrides) {
        for (const auto& [name, value] : params) {
            out.param_overrides[id][name] = value;
        }
    }
    out.remessage = base.remessage;
    for (const auto& [id, tpl] : top.remessage) {
        out.remessage[id] = tpl;
    }
    out.demote = base.demote;
    out.demote.insert(top.demote.begin(), top.demote.end());
    return out;
}

inline ContextProfile resolve_profile(const FileContext& ctx, const ProfileSet& profiles) {
    return merge_profiles(profiles.default_profile, profiles.for_purpose(ctx.purpose));
}

/// enabled = (default-enabled + enable) - disable, in catalog order, each
/// with defaults overlaid by the profile's parameter overrides.
inline rules::EffectiveRuleSet effective_rule_set(const rules::Catalog& catalog, const ContextProfile& profile) {
    rules::EffectiveRuleSet out;
    for (const auto& rule : catalog) {
        bool enabled = (rule.default_enabled || profile.enable.contains(rule.rule_id)) &&
                       !profile.disable.contains(rule.rule_id);
        if (!enabled) {
            continue;
        }
        auto params = rule.default_params();
        if (auto it = profile.param_overrides.find(rule.rule_id); it != profile.param_overrides.end()) {
            for (const auto& [name, value] : it->second) {
                params[name] = value;
            }
        }
        out.push_back(rules::EffectiveRule{rule, rules::RuleParams(std::move(params))});
    }
    return out;
}

class TemplateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Placeholder names used by a message template, in order of appearance.
inline std::vector<std::string> template_placeholders(std::string_view tpl) {
    std::vector<std::string> names;
    std::size_t i = 0;
    while ((i = tpl.find_first_of("{}", i)) != std::string_view::npos) {
        if (tpl[i] == '}') {
            throw TemplateError("unmatched '}' in message template");
        }
        std::size_t close = tpl.find('}', i);
        if (close == std::string_view::npos) {
            throw TemplateError("unterminated placeholder in message template");
        }
        std::string_view name = tpl.substr(i + 1, close - i - 1);
        if (name.empty() || name.find_first_not_of("abcdefghijklmnopqrstuvwxyz_") != std::string_view::npos) {
            throw TemplateError("malformed placeholder '{" + std::string(name) + "}' in message template");
        }
        names.emplace_back(name);
        i = close + 1;
    }
    return names;
}

inline std::string render_template(std::string_view tpl, const std::map<std::string, std::string>& args) {
    std::string out;
    std::size_t i = 0;
    while (i < tpl.size()) {
        std::size_t open = tpl.find('{', i);
        if (open == std::string_view::npos) {
            out.append(tpl.substr(i));
            break;
        }
        out.append(tpl.substr(i, open - i));
        std::size_t close = tpl.find('}', open);
        std::string name(tpl.substr(open + 1, close - open - 1));
        if (auto it = args.find(name); it != args.end()) {
            out += it->second;
        }
        i = close + 1;
    }
    return out;
}

inline std::vector<Diagnostic> apply_remessage(std::vector<Diagnostic> diags, const ContextProfile& profile) {
    if (profile.remessage.empty()) {
        return diags;
    }
    for (auto& d : diags) {
        if (auto it = profile.remessage.find(d.rule_id); it != profile.remessage.end()) {
            d.message = render_template(it->second, d.args);
        }
    }
    return diags;
}

inline bool is_demoted(const Diagnostic& d, const ContextProfile& profile) {
    if (d.category == rules::Category::Fatal) {
        return false;
    }
    return profile.demote.contains(d.rule_id) || profile.demote.contains(std::string(rules::to_string(d.category)));
}

/// Band 0 then band 1; within a band by category severity, path, line,
/// column and rule id. Ties keep their input order.
inline std::vector<Diagnostic> apply_reprioritisation(std::vector<Diagnostic> diags, const ContextProfile& profile) {
    for (auto& d : diags) {
        d.demoted = is_demoted(d, profile);
    }
    std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
        auto key = [](const Diagnostic& d) {
            return std::tie(d.demoted, d.category, d.path, d.line, d.column, d.rule_id);
        };
        return key(a) < key(b);
    });
    return diags;
}

/// The per-file entry point: select rules, check, remessage, re-rank.
inline std::vector<Diagnostic> apply_profile(const rules::FileArtifacts& art, const FileContext& ctx,
                                             const rules::Catalog& catalog, const ProfileSet& profiles) {
    const auto profile = resolve_profile(ctx, profiles);
    const auto effective = effective_rule_set(catalog, profile);
    auto diags = rules::run_checkers(art, effective, ctx.purpose);
    return apply_reprioritisation(apply_remessage(std::move(diags), profile), profile);
}

/// Same pipeline with a rule set resolved ahead of time.
inline std::vector<Diagnostic> apply_profile(const rules::FileArtifacts& art, const FileContext& ctx,
                                             const ContextProfile& profile, const rules::EffectiveRuleSet& effective) {
    auto diags = rules::run_checkers(art, effective, ctx.purpose);
    return apply_reprioritisation(apply_remessage(std::move(diags), profile), profile);
}

}  // namespace mlsmellhound::transforms
