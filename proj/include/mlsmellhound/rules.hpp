#pragma once

// Rule catalog and the checkers behind it. A checker is a pure function
// from file artifacts and merged parameters to findings; run_checkers
// stamps findings into diagnostics.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mlsmellhound/context.hpp"
#include "mlsmellhound/pylex.hpp"
#include "mlsmellhound/pysyntax.hpp"

namespace mlsmellhound::rules {

enum class Category { Fatal, Error, Warning, Refactor, Convention };

inline constexpr Category kAllCategories[] = {
    Category::Fatal, Category::Error, Category::Warning, Category::Refactor, Category::Convention,
};

/// Severity rank used for ordering; lower sorts first.
inline int rank(Category c) { return static_cast<int>(c); }

inline std::string_view to_string(Category c) {
    switch (c) {
    case Category::Fatal: return "fatal";
    case Category::Error: return "error";
    case Category::Warning: return "warning";
    case Category::Refactor: return "refactor";
    case Category::Convention: return "convention";
    }
    return "?";
}

inline std::optional<Category> parse_category(std::string_view text) {
    for (auto c : kAllCategories) {
        if (to_string(c) == text) {
            return c;
        }
    }
    return std::nullopt;
}

using ParamValue = std::variant<std::int64_t, std::string, std::vector<std::string>, std::vector<std::int64_t>>;
using ParamMap = std::map<std::string, ParamValue>;

enum class ParamType { PositiveInt, Regex, StringSet, PositiveIntSet };

struct ParamSpec {
    std::string name;
    ParamType type;
    ParamValue default_value;
};

class RuleParamError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Checks a parameter value against its declared type. Returns an error
/// description, or nullopt when the value is acceptable.
inline std::optional<std::string> validate_param(const ParamSpec& spec, const ParamValue& value) {
    switch (spec.type) {
    case ParamType::PositiveInt:
        if (!std::holds_alternative<std::int64_t>(value) || std::get<std::int64_t>(value) < 1) {
            return "expected a positive integer";
        }
        return std::nullopt;
    case ParamType::Regex:
        if (!std::holds_alternative<std::string>(value)) {
            return "expected a regular expression string";
        }
        try {
            std::regex re(std::get<std::string>(value));
        } catch (const std::regex_error& e) {
            return std::string("invalid regular expression: ") + e.what();
        }
        return std::nullopt;
    case ParamType::StringSet:
        if (!std::holds_alternative<std::vector<std::string>>(value)) {
            return "expected an array of strings";
        }
        return std::nullopt;
    case ParamType::PositiveIntSet: {
        const auto* ints = std::get_if<std::vector<std::int64_t>>(&value);
        if (ints == nullptr || ints->empty() ||
            std::any_of(ints->begin(), ints->end(), [](std::int64_t v) { return v < 1; })) {
            return "expected a nonempty array of positive integers";
        }
        return std::nullopt;
    }
    }
    return "unknown parameter type";
}

/// Merged parameters for one rule, with regular expressions compiled once.
class RuleParams {
public:
    RuleParams() = default;

    explicit RuleParams(ParamMap values) : values_(std::move(values)) {
        for (const auto& [name, value] : values_) {
            if (const auto* text = std::get_if<std::string>(&value)) {
                try {
                    regexes_[name] = std::make_shared<const std::regex>(*text);
                } catch (const std::regex_error&) {
                    // Not every string parameter is a pattern; regex() reports misuse.
                }
            }
        }
    }

    const ParamMap& values() const { return values_; }

    std::int64_t integer(const std::string& name) const { return get<std::int64_t>(name); }
    const std::string& text(const std::string& name) const { return get<std::string>(name); }
    const std::vector<std::string>& strings(const std::string& name) const {
        return get<std::vector<std::string>>(name);
    }
    const std::vector<std::int64_t>& integers(const std::string& name) const {
        return get<std::vector<std::int64_t>>(name);
    }

    const std::regex& regex(const std::string& name) const {
        auto it = regexes_.find(name);
        if (it == regexes_.end()) {
            throw RuleParamError("parameter '" + name + "' is not a compiled pattern");
        }
        return *it->second;
    }

private:
    template <typename T>
    const T& get(const std::string& name) const {
        auto it = values_.find(name);
        if (it == values_.end()) {
            throw RuleParamError("missing parameter '" + name + "'");
        }
        const T* v = std::get_if<T>(&it->second);
        if (v == nullptr) {
            throw RuleParamError("parameter '" + name + "' has the wrong type");
        }
        return *v;
    }

    ParamMap values_;
    std::map<std::string, std::shared_ptr<const std::regex>> regexes_;
};

/// Everything the checkers may look at for one file.
struct FileArtifacts {
    std::string path;
    std::string source;
    std::vector<pylex::Token> tokens;
    std::vector<pylex::LogicalLine> logical_lines;
    std::vector<pylex::PhysicalLineFacts> physical_lines;
    std::vector<pysyntax::ImportRecord> imports;
    std::vector<pysyntax::NameBinding> bindings;
    std::vector<pysyntax::FunctionSig> functions;

    int line_count() const { return static_cast<int>(physical_lines.size()); }
};

/// Builds artifacts from decoded source, or returns the lexical error.
inline std::variant<FileArtifacts, pylex::LexError> build_artifacts(std::string path, std::string source) {
    if (auto bad = pylex::validate_utf8(source)) {
        return *bad;
    }
    auto lexed = pylex::tokenize(source);
    if (auto* err = std::get_if<pylex::LexError>(&lexed)) {
        return *err;
    }
    FileArtifacts art;
    art.path = std::move(path);
    art.tokens = std::move(std::get<pylex::TokenStream>(lexed));
    art.logical_lines = pylex::split_logical_lines(art.tokens);
    art.physical_lines = pylex::physical_line_facts(source);
    art.imports = pysyntax::extract_imports(art.logical_lines);
    art.bindings = pysyntax::extract_assignment_targets(art.logical_lines);
    art.functions = pysyntax::extract_function_defs(art.logical_lines);
    art.source = std::move(source);
    return art;
}

/// What a checker reports; run_checkers adds rule identity and file.
struct Finding {
    int line = 0;
    int column = 0;
    std::string message;
    std::map<std::string, std::string> args;  // {name}, {count}, {limit}
};

struct Diagnostic {
    std::string path;
    int line = 0;
    int column = 0;
    std::string rule_id;
    std::string symbol;
    Category category = Category::Convention;
    std::string message;
    bool demoted = false;
    context::Purpose context_purpose = context::Purpose::NonML;
    std::map<std::string, std::string> args;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

using CheckFn = std::function<std::vector<Finding>(const FileArtifacts&, const RuleParams&)>;

struct RuleDescriptor {
    std::string rule_id;
    std::string symbol;
    Category category = Category::Convention;
    bool default_enabled = true;
    std::vector<ParamSpec> params;
    std::set<std::string> placeholders;  // usable in remessage templates
    CheckFn check;

    ParamMap default_params() const {
        ParamMap out;
        for (const auto& p : params) {
            out[p.name] = p.default_value;
        }
        return out;
    }

    const ParamSpec* param(std::string_view name) const {
        for (const auto& p : params) {
            if (p.name == name) {
                return &p;
            }
        }
        return nullptr;
    }
};

using Catalog = std::vector<RuleDescriptor>;

/// Looks a rule up by id (C0103) or symbol (invalid-name).
inline const RuleDescriptor* find_rule(const Catalog& catalog, std::string_view id_or_symbol) {
    for (const auto& r : catalog) {
        if (r.rule_id == id_or_symbol || r.symbol == id_or_symbol) {
            return &r;
        }
    }
    return nullptr;
}

// Checkers.

inline constexpr std::string_view kDefaultNamePattern = "^[a-z_][a-z0-9_]{2,30}$";
inline constexpr std::string_view kMatrixNamePattern = "^[A-Z][A-Za-z0-9]{0,2}$";

inline std::vector<Finding> check_invalid_name(const FileArtifacts& art, const RuleParams& params) {
    const auto& pattern = params.regex("variable-name-pattern");
    const auto& good = params.strings("good-names");
    std::vector<Finding> out;
    for (const auto& b : art.bindings) {
        if (std::find(good.begin(), good.end(), b.name) != good.end() || std::regex_search(b.name, pattern)) {
            continue;
        }
        out.push_back(Finding{b.line, b.column,
                              "Variable name \"" + b.name + "\" doesn't conform to the naming pattern " +
                                  params.text("variable-name-pattern"),
                              {{"name", b.name}}});
    }
    return out;
}

inline std::vector<Finding> check_too_many_arguments(const FileArtifacts& art, const RuleParams& params) {
    const auto limit = params.integer("max-args");
    std::vector<Finding> out;
    for (const auto& f : art.functions) {
        if (f.param_count > limit) {
            auto count = std::to_string(f.param_count);
            auto lim = std::to_string(limit);
            out.push_back(Finding{f.line, f.column, "Too many arguments (" + count + "/" + lim + ")",
                                  {{"name", f.name}, {"count", count}, {"limit", lim}}});
        }
    }
    return out;
}

inline std::vector<Finding> check_bad_indentation(const FileArtifacts& art, const RuleParams& params) {
    const auto& units = params.integers("indent-unit");
    std::string allowed;
    for (auto u : units) {
        allowed += (allowed.empty() ? "" : " or ") + std::to_string(u);
    }
    std::vector<Finding> out;
    std::vector<int> stack{0};
    for (const auto& line : art.logical_lines) {
        const int width = line.indent_width;
        while (stack.size() > 1 && stack.back() > width) {
            stack.pop_back();
        }
        if (width > stack.back()) {
            const int step = width - stack.back();
            bool ok = std::any_of(units.begin(), units.end(), [step](std::int64_t u) { return step % u == 0; });
            if (!ok) {
                auto count = std::to_string(step);
                out.push_back(Finding{line.first_line, 1,
                                      "Bad indentation. Indent step of " + count +
                                          " columns is not a multiple of " + allowed,
                                      {{"count", count}, {"limit", allowed}}});
            }
            stack.push_back(width);
        }
    }
    return out;
}

inline std::vector<Finding> check_trailing_whitespace(const FileArtifacts& art, const RuleParams&) {
    std::vector<Finding> out;
    for (const auto& f : art.physical_lines) {
        if (f.has_trailing_whitespace) {
            out.push_back(Finding{f.line, f.trailing_whitespace_column, "Trailing whitespace", {}});
        }
    }
    return out;
}

inline std::vector<Finding> check_line_too_long(const FileArtifacts& art, const RuleParams& params) {
    const auto limit = params.integer("max-line-length");
    std::vector<Finding> out;
    for (const auto& f : art.physical_lines) {
        if (f.length > limit) {
            auto count = std::to_string(f.length);
            auto lim = std::to_string(limit);
            out.push_back(Finding{f.line, 1, "Line too long (" + count + "/" + lim + ")",
                                  {{"count", count}, {"limit", lim}}});
        }
    }
    return out;
}

namespace detail {

// Identifiers mentioned inside the replacement fields of an f-string.
// The literal stays one token; this only harvests names for usage checks.
inline void fstring_names(std::string_view literal, std::set<std::string>& out) {
    std::size_t q = literal.find_first_of("'\"");
    if (q == std::string_view::npos) {
        return;
    }
    std::string_view prefix = literal.substr(0, q);
    if (prefix.find_first_of("fF") == std::string_view::npos) {
        return;
    }
    int depth = 0;
    for (std::size_t i = q; i < literal.size(); ++i) {
        char c = literal[i];
        if (c == '{') {
            if (depth == 0 && i + 1 < literal.size() && literal[i + 1] == '{') {
                ++i;
                continue;
            }
            ++depth;
        } else if (c == '}' && depth > 0) {
            --depth;
        } else if (depth > 0 && pylex::detail::is_ident_start(static_cast<unsigned char>(c))) {
            std::size_t end = i;
            while (end < literal.size() && pylex::detail::is_ident_char(static_cast<unsigned char>(literal[end]))) {
                ++end;
            }
            out.emplace(literal.substr(i, end - i));
            i = end - 1;
        }
    }
}

}  // namespace detail

inline std::vector<Finding> check_unused_import(const FileArtifacts& art, const RuleParams&) {
    std::set<std::string> used;
    for (const auto& line : art.logical_lines) {
        std::set<std::size_t> import_offsets;
        for (auto stmt : pysyntax::detail::statements(line)) {
            if (pysyntax::detail::is_import_statement(stmt)) {
                for (const auto& t : stmt) {
                    import_offsets.insert(t.offset);
                }
            }
        }
        for (const auto& t : line.tokens) {
            if (import_offsets.contains(t.offset)) {
                continue;
            }
            if (t.kind == pylex::TokenKind::Name) {
                used.insert(t.text);
            } else if (t.kind == pylex::TokenKind::String) {
                detail::fstring_names(t.text, used);
            }
        }
    }
    std::vector<Finding> out;
    for (const auto& imp : art.imports) {
        if (imp.star || imp.root_module == "__future__") {
            continue;
        }
        const std::string bound = imp.bound_name();
        if (bound.empty() || used.contains(bound)) {
            continue;
        }
        std::string shown = imp.full_path;
        if (imp.alias && *imp.alias != shown.substr(shown.rfind('.') + 1)) {
            shown += " as " + *imp.alias;
        }
        out.push_back(Finding{imp.line, imp.column, "Unused import " + shown, {{"name", bound}}});
    }
    return out;
}

inline Catalog default_catalog() {
    using V = std::vector<std::string>;
    return {
        RuleDescriptor{"C0103", "invalid-name", Category::Convention, true,
                       {{"variable-name-pattern", ParamType::Regex, std::string(kDefaultNamePattern)},
                        {"good-names", ParamType::StringSet, V{"i", "j", "k", "_"}}},
                       {"name"}, check_invalid_name},
        RuleDescriptor{"R0913", "too-many-arguments", Category::Refactor, true,
                       {{"max-args", ParamType::PositiveInt, std::int64_t{5}}},
                       {"name", "count", "limit"}, check_too_many_arguments},
        RuleDescriptor{"W0311", "bad-indentation", Category::Warning, true,
                       {{"indent-unit", ParamType::PositiveIntSet, std::vector<std::int64_t>{4}}},
                       {"count", "limit"}, check_bad_indentation},
        RuleDescriptor{"C0303", "trailing-whitespace", Category::Convention, true, {}, {}, check_trailing_whitespace},
        RuleDescriptor{"C0301", "line-too-long", Category::Convention, false,
                       {{"max-line-length", ParamType::PositiveInt, std::int64_t{100}}},
                       {"count", "limit"}, check_line_too_long},
        RuleDescriptor{"W0611", "unused-import", Category::Warning, true, {}, {"name"}, check_unused_import},
    };
}

/// A rule selected for a file, with its merged parameters.
struct EffectiveRule {
    RuleDescriptor descriptor;
    RuleParams params;
};

using EffectiveRuleSet = std::vector<EffectiveRule>;

inline constexpr std::string_view kLexErrorId = "F0001";
inline constexpr std::string_view kLexErrorSymbol = "lex-error";
inline constexpr std::string_view kCheckerErrorId = "F0002";
inline constexpr std::string_view kCheckerErrorSymbol = "checker-error";

inline Diagnostic fatal_diagnostic(std::string path, int line, int column, std::string_view rule_id,
                                   std::string_view symbol, std::string message, context::Purpose purpose) {
    Diagnostic d;
    d.path = std::move(path);
    d.line = line;
    d.column = column;
    d.rule_id = rule_id;
    d.symbol = symbol;
    d.category = Category::Fatal;
    d.message = std::move(message);
    d.context_purpose = purpose;
    return d;
}

inline Diagnostic lex_error_diagnostic(std::string path, const pylex::LexError& err, context::Purpose purpose) {
    return fatal_diagnostic(std::move(path), err.line, err.column, kLexErrorId, kLexErrorSymbol,
                            "Cannot analyse file: " + std::string(pylex::to_string(err.reason)) + " at line " +
                                std::to_string(err.line) + ", column " + std::to_string(err.column),
                            purpose);
}

/// Runs every rule in `rules`, in order. A checker that throws yields one
/// fatal diagnostic in place of its findings.
inline std::vector<Diagnostic> run_checkers(const FileArtifacts& art, const EffectiveRuleSet& rules,
                                            context::Purpose purpose) {
    std::vector<Diagnostic> out;
    for (const auto& rule : rules) {
        const auto& desc = rule.descriptor;
        std::vector<Finding> findings;
        try {
            findings = desc.check(art, rule.params);
        } catch (const std::exception& e) {
            out.push_back(fatal_diagnostic(art.path, 1, 1, kCheckerErrorId, kCheckerErrorSymbol,
                                           "Checker " + desc.rule_id + " (" + desc.symbol + ") failed: " + e.what(),
                                           purpose));
            continue;
        }
        for (auto& f : findings) {
            Diagnostic d;
            d.path = art.path;
            d.line = f.line;
            d.column = f.column;
            d.rule_id = desc.rule_id;
            d.symbol = desc.symbol;
            d.category = desc.category;
            d.message = std::move(f.message);
            d.context_purpose = purpose;
            d.args = std::move(f.args);
            out.push_back(std::move(d));
        }
    }
    return out;
}

}  // namespace mlsmellhound::rules
