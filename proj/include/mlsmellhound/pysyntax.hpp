#pragma once

// Recognizers for the handful of statement shapes the checkers need:
// imports, simple name bindings and function definitions.

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlsmellhound/pylex.hpp"

namespace mlsmellhound::pysyntax {

using pylex::LogicalLine;
using pylex::Token;
using pylex::TokenKind;
using TokenSpan = std::span<const Token>;

struct ImportRecord {
    std::string root_module;  // "" for relative imports
    std::string full_path;    // dotted module text; `from a import b` gives "a.b"
    std::optional<std::string> alias;
    int line = 0;
    int column = 0;
    bool star = false;
    bool from_import = false;

    /// Name the statement binds in the importing module.
    std::string bound_name() const {
        if (alias) {
            return *alias;
        }
        return root_module;
    }

    friend bool operator==(const ImportRecord&, const ImportRecord&) = default;
};

enum class BindingKind { Variable, Parameter, Function, Class };

struct NameBinding {
    std::string name;
    int line = 0;
    int column = 0;
    BindingKind kind = BindingKind::Variable;

    friend bool operator==(const NameBinding&, const NameBinding&) = default;
};

struct FunctionSig {
    std::string name;
    int line = 0;
    int column = 0;
    int param_count = 0;
    std::vector<std::string> param_names;

    friend bool operator==(const FunctionSig&, const FunctionSig&) = default;
};

inline bool is_keyword(std::string_view word) {
    static constexpr std::string_view kKeywords[] = {
        "False", "None",   "True",    "and",      "as",     "assert", "async", "await",
        "break", "class",  "continue", "def",     "del",    "elif",   "else",  "except",
        "finally", "for",  "from",    "global",   "if",     "import", "in",    "is",
        "lambda", "nonlocal", "not",  "or",       "pass",   "raise",  "return", "try",
        "while", "with",   "yield",
    };
    return std::find(std::begin(kKeywords), std::end(kKeywords), word) != std::end(kKeywords);
}

namespace detail {

inline int bracket_delta(const Token& tok) {
    if (tok.kind != TokenKind::Operator || tok.text.size() != 1) {
        return 0;
    }
    switch (tok.text[0]) {
    case '(': case '[': case '{': return 1;
    case ')': case ']': case '}': return -1;
    default: return 0;
    }
}

// Splits `tokens` on top-level occurrences of operator `sep`.
inline std::vector<TokenSpan> split_top_level(TokenSpan tokens, std::string_view sep) {
    std::vector<TokenSpan> parts;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        depth += bracket_delta(tokens[i]);
        if (depth == 0 && tokens[i].is_op(sep)) {
            parts.push_back(tokens.subspan(start, i - start));
            start = i + 1;
        }
    }
    parts.push_back(tokens.subspan(start));
    return parts;
}

inline bool is_compound_header(const Token& first) {
    static constexpr std::string_view kHeaders[] = {
        "if", "elif", "else", "try", "except", "finally", "while", "for", "with", "def", "class", "async",
    };
    return first.kind == TokenKind::Name &&
           std::find(std::begin(kHeaders), std::end(kHeaders), first.text) != std::end(kHeaders);
}

// Simple statements of a logical line, in source order. `a; b` yields two
// statements and the body of a one-line compound statement such as
// `if x: import y` is yielded as its own statement after the header.
inline void collect_statements(TokenSpan tokens, std::vector<TokenSpan>& out) {
    for (auto stmt : split_top_level(tokens, ";")) {
        if (stmt.empty()) {
            continue;
        }
        out.push_back(stmt);
        if (!is_compound_header(stmt.front())) {
            continue;
        }
        int depth = 0;
        for (std::size_t i = 0; i < stmt.size(); ++i) {
            if (stmt[i].is_name("lambda") && depth == 0) {
                break;
            }
            depth += bracket_delta(stmt[i]);
            if (depth == 0 && stmt[i].is_op(":")) {
                if (i + 1 < stmt.size()) {
                    collect_statements(stmt.subspan(i + 1), out);
                }
                break;
            }
        }
    }
}

inline std::vector<TokenSpan> statements(const LogicalLine& line) {
    std::vector<TokenSpan> out;
    collect_statements(TokenSpan(line.tokens), out);
    return out;
}

// Parses a dotted name starting at `i`; advances `i` past it.
inline std::optional<std::string> dotted_name(TokenSpan toks, std::size_t& i) {
    if (i >= toks.size() || toks[i].kind != TokenKind::Name || is_keyword(toks[i].text)) {
        return std::nullopt;
    }
    std::string name = toks[i++].text;
    while (i + 1 < toks.size() && toks[i].is_op(".") && toks[i + 1].kind == TokenKind::Name) {
        name += '.';
        name += toks[i + 1].text;
        i += 2;
    }
    return name;
}

inline std::optional<std::string> as_clause(TokenSpan toks, std::size_t& i) {
    if (i + 1 < toks.size() && toks[i].is_name("as") && toks[i + 1].kind == TokenKind::Name) {
        i += 2;
        return toks[i - 1].text;
    }
    return std::nullopt;
}

inline std::string root_of(std::string_view dotted) {
    return std::string(dotted.substr(0, dotted.find('.')));
}

inline void parse_plain_import(TokenSpan stmt, std::vector<ImportRecord>& out) {
    const Token& kw = stmt.front();
    std::vector<ImportRecord> found;
    for (auto part : split_top_level(stmt.subspan(1), ",")) {
        std::size_t i = 0;
        auto path = dotted_name(part, i);
        if (!path) {
            return;
        }
        auto alias = as_clause(part, i);
        if (i != part.size()) {
            return;
        }
        found.push_back(ImportRecord{root_of(*path), *path, alias, kw.line, kw.column, false, false});
    }
    out.insert(out.end(), found.begin(), found.end());
}

inline void parse_from_import(TokenSpan stmt, std::vector<ImportRecord>& out) {
    const Token& kw = stmt.front();
    std::size_t i = 1;
    std::string module;
    bool relative = false;
    while (i < stmt.size() && (stmt[i].is_op(".") || stmt[i].is_op("..."))) {
        module += stmt[i].text;
        relative = true;
        ++i;
    }
    if (i < stmt.size() && !stmt[i].is_name("import")) {
        auto path = dotted_name(stmt, i);
        if (!path) {
            return;
        }
        module += *path;
    }
    if (module.empty() || i >= stmt.size() || !stmt[i].is_name("import")) {
        return;
    }
    ++i;
    const std::string root = relative ? std::string() : root_of(module);
    const std::string prefix = relative && module.back() == '.' ? module : module + ".";

    TokenSpan names = stmt.subspan(i);
    if (names.size() == 1 && names.front().is_op("*")) {
        out.push_back(ImportRecord{root, prefix + "*", std::nullopt, kw.line, kw.column, true, true});
        return;
    }
    if (!names.empty() && names.front().is_op("(")) {
        if (!names.back().is_op(")")) {
            return;
        }
        names = names.subspan(1, names.size() - 2);
    }
    std::vector<ImportRecord> found;
    for (auto part : split_top_level(names, ",")) {
        if (part.empty()) {
            continue;  // trailing comma inside parentheses
        }
        std::size_t k = 0;
        if (part[k].kind != TokenKind::Name || is_keyword(part[k].text)) {
            return;
        }
        std::string name = part[k++].text;
        auto alias = as_clause(part, k);
        if (k != part.size()) {
            return;
        }
        found.push_back(ImportRecord{root, prefix + name, alias ? alias : std::optional(name), kw.line,
                                     kw.column, false, true});
    }
    if (found.empty()) {
        return;
    }
    out.insert(out.end(), found.begin(), found.end());
}

inline bool is_import_statement(TokenSpan stmt) {
    return !stmt.empty() && (stmt.front().is_name("import") || stmt.front().is_name("from"));
}

// Collects the names bound by one assignment target such as `a`,
// `a, (b, *c)` or `x: int`. Attribute and subscript targets bind nothing.
inline void target_names(TokenSpan target, std::vector<NameBinding>& out) {
    auto parts = split_top_level(target, ",");
    if (parts.size() == 1) {
        TokenSpan t = parts.front();
        if (t.empty()) {
            return;
        }
        if (t.size() >= 2 && ((t.front().is_op("(") && t.back().is_op(")")) ||
                              (t.front().is_op("[") && t.back().is_op("]")))) {
            target_names(t.subspan(1, t.size() - 2), out);
            return;
        }
        if (t.front().is_op("*")) {
            t = t.subspan(1);
        }
        if (t.size() == 1 && t.front().kind == TokenKind::Name && !is_keyword(t.front().text)) {
            out.push_back(NameBinding{t.front().text, t.front().line, t.front().column, BindingKind::Variable});
        }
        return;
    }
    for (auto part : parts) {
        target_names(part, out);
    }
}

inline void parse_assignment(TokenSpan stmt, std::vector<NameBinding>& out) {
    if (stmt.empty() || (stmt.front().kind == TokenKind::Name && is_keyword(stmt.front().text))) {
        return;
    }
    // Assignment operators at depth zero, up to the first lambda.
    std::vector<std::size_t> eqs;
    int depth = 0;
    for (std::size_t i = 0; i < stmt.size(); ++i) {
        if (depth == 0 && stmt[i].is_name("lambda")) {
            break;
        }
        depth += bracket_delta(stmt[i]);
        if (depth == 0 && stmt[i].is_op("=")) {
            eqs.push_back(i);
        }
    }
    std::size_t start = 0;
    for (std::size_t eq : eqs) {
        TokenSpan target = stmt.subspan(start, eq - start);
        // Annotated target: `x: int = 1`.
        auto annotated = split_top_level(target, ":");
        if (annotated.size() == 2) {
            target = annotated.front();
        } else if (annotated.size() > 2) {
            return;
        }
        target_names(target, out);
        start = eq + 1;
    }
}

inline std::optional<FunctionSig> parse_def(TokenSpan stmt) {
    std::size_t i = 0;
    if (i < stmt.size() && stmt[i].is_name("async")) {
        ++i;
    }
    if (i + 2 >= stmt.size() || !stmt[i].is_name("def") || stmt[i + 1].kind != TokenKind::Name ||
        !stmt[i + 2].is_op("(")) {
        return std::nullopt;
    }
    FunctionSig sig;
    sig.name = stmt[i + 1].text;
    sig.line = stmt[i + 1].line;
    sig.column = stmt[i + 1].column;
    std::size_t open = i + 2;
    std::size_t close = open;
    int depth = 0;
    for (; close < stmt.size(); ++close) {
        depth += bracket_delta(stmt[close]);
        if (depth == 0) {
            break;
        }
    }
    if (close >= stmt.size()) {
        return std::nullopt;
    }
    for (auto param : split_top_level(stmt.subspan(open + 1, close - open - 1), ",")) {
        std::size_t k = 0;
        if (k < param.size() && (param[k].is_op("*") || param[k].is_op("**"))) {
            ++k;
        }
        // Bare `*` and `/` are markers, not parameters.
        if (k >= param.size() || param[k].kind != TokenKind::Name) {
            continue;
        }
        sig.param_names.push_back(param[k].text);
    }
    if (!sig.param_names.empty() && (sig.param_names.front() == "self" || sig.param_names.front() == "cls")) {
        sig.param_names.erase(sig.param_names.begin());
    }
    sig.param_count = static_cast<int>(sig.param_names.size());
    return sig;
}

}  // namespace detail

/// Every import statement at any nesting depth, in source order.
/// Malformed statements are skipped.
inline std::vector<ImportRecord> extract_imports(const std::vector<LogicalLine>& lines) {
    std::vector<ImportRecord> out;
    for (const auto& line : lines) {
        for (auto stmt : detail::statements(line)) {
            if (stmt.front().is_name("import")) {
                detail::parse_plain_import(stmt, out);
            } else if (stmt.front().is_name("from")) {
                detail::parse_from_import(stmt, out);
            }
        }
    }
    return out;
}

/// Names bound by plain and chained assignments. Augmented assignments,
/// loop and `with` targets are not bindings here.
inline std::vector<NameBinding> extract_assignment_targets(const std::vector<LogicalLine>& lines) {
    std::vector<NameBinding> out;
    for (const auto& line : lines) {
        for (auto stmt : detail::statements(line)) {
            detail::parse_assignment(stmt, out);
        }
    }
    return out;
}

inline std::vector<FunctionSig> extract_function_defs(const std::vector<LogicalLine>& lines) {
    std::vector<FunctionSig> out;
    for (const auto& line : lines) {
        for (auto stmt : detail::statements(line)) {
            if (auto sig = detail::parse_def(stmt)) {
                out.push_back(std::move(*sig));
            }
        }
    }
    return out;
}

}  // namespace mlsmellhound::pysyntax
