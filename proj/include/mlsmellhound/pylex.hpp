#pragma once

// Python source lexer: tokens, logical lines and per-physical-line facts.
// This is the only layer that looks at raw source bytes.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mlsmellhound::pylex {

enum class TokenKind {
    Name,
    Number,
    String,
    Operator,
    Comment,
    Newline,
    IndentMarker,  // leading whitespace of a line that starts a logical line
    Continuation,  // backslash that joins the next physical line
};

inline std::string_view to_string(TokenKind kind) {
    switch (kind) {
    case TokenKind::Name: return "NAME";
    case TokenKind::Number: return "NUMBER";
    case TokenKind::String: return "STRING";
    case TokenKind::Operator: return "OPERATOR";
    case TokenKind::Comment: return "COMMENT";
    case TokenKind::Newline: return "NEWLINE";
    case TokenKind::IndentMarker: return "INDENT-MARKER";
    case TokenKind::Continuation: return "CONTINUATION";
    }
    return "?";
}

struct Token {
    TokenKind kind;
    std::string text;     // verbatim source slice
    int line = 0;         // 1-based physical line of the first byte
    int column = 0;       // 1-based byte column of the first byte
    std::size_t offset = 0;

    bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
    bool is_op(std::string_view t) const { return is(TokenKind::Operator, t); }
    bool is_name(std::string_view t) const { return is(TokenKind::Name, t); }

    friend bool operator==(const Token&, const Token&) = default;
};

enum class LexErrorReason { UnterminatedString, BadEncoding, InvalidCharacter };

inline std::string_view to_string(LexErrorReason reason) {
    switch (reason) {
    case LexErrorReason::UnterminatedString: return "unterminated-string";
    case LexErrorReason::BadEncoding: return "bad-encoding";
    case LexErrorReason::InvalidCharacter: return "invalid-character";
    }
    return "?";
}

struct LexError {
    int line = 1;
    int column = 1;
    LexErrorReason reason = LexErrorReason::InvalidCharacter;

    friend bool operator==(const LexError&, const LexError&) = default;
};

using TokenStream = std::vector<Token>;
using LexResult = std::variant<TokenStream, LexError>;

/// One statement's worth of source. `tokens` holds only the significant
/// tokens (NAME, NUMBER, STRING, OPERATOR); comments, line breaks, indent
/// markers and continuations are structural and dropped.
struct LogicalLine {
    std::vector<Token> tokens;
    int first_line = 0;
    int last_line = 0;
    int indent_width = 0;  // leading columns, tabs expanded to stop 8
    bool continued = false;
};

struct PhysicalLineFacts {
    int line = 0;
    int indent_columns = 0;
    bool has_trailing_whitespace = false;
    int trailing_whitespace_column = 0;  // 1-based byte column, 0 if none
    int length = 0;                      // code points, terminator excluded
};

inline constexpr int kTabStop = 8;

namespace detail {

inline bool is_ident_start(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80;
}

inline bool is_ident_char(unsigned char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
}

inline bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

inline bool is_inline_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\f'; }

// Width of a run of leading whitespace with tabs expanded. Form feed
// resets the count, as CPython does.
inline int expand_indent(std::string_view ws) {
    int col = 0;
    for (char c : ws) {
        if (c == '\t') {
            col = (col / kTabStop + 1) * kTabStop;
        } else if (c == '\f') {
            col = 0;
        } else {
            ++col;
        }
    }
    return col;
}

inline bool is_string_prefix(std::string_view word) {
    if (word.empty() || word.size() > 2) {
        return false;
    }
    bool r = false, b = false, f = false, u = false;
    for (char c : word) {
        switch (c | 0x20) {
        case 'r': if (r) return false; r = true; break;
        case 'b': if (b) return false; b = true; break;
        case 'f': if (f) return false; f = true; break;
        case 'u': if (u) return false; u = true; break;
        default: return false;
        }
    }
    if (u) {
        return word.size() == 1;
    }
    return !(b && f);
}

// Longest-match operator table, three-character operators first.
inline constexpr std::string_view kOperators[] = {
    "**=", "//=", ">>=", "<<=", "...",
    "->", ":=", "==", "!=", "<=", ">=", "**", "//", "<<", ">>",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@=",
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    LexResult run() {
        if (src_.substr(0, 3) == "\xEF\xBB\xBF") {
            pos_ = 3;
            line_start_ = 0;
        }
        at_line_start_ = true;
        while (pos_ < src_.size()) {
            if (at_line_start_) {
                at_line_start_ = false;
                if (depth_ == 0 && !continued_) {
                    emit_indent_marker();
                    if (pos_ >= src_.size()) {
                        break;
                    }
                }
                continued_ = false;
            }
            auto c = static_cast<unsigned char>(src_[pos_]);
            if (is_inline_space(c)) {
                ++pos_;
            } else if (c == '\n' || c == '\r') {
                std::size_t len = (c == '\r' && peek(1) == '\n') ? 2 : 1;
                push(TokenKind::Newline, pos_, len);
                pos_ += len;
                new_line();
            } else if (c == '#') {
                std::size_t end = src_.find_first_of("\r\n", pos_);
                if (end == std::string_view::npos) {
                    end = src_.size();
                }
                push(TokenKind::Comment, pos_, end - pos_);
                pos_ = end;
            } else if (c == '\\') {
                char next = peek(1);
                if (next != '\n' && next != '\r' && pos_ + 1 < src_.size()) {
                    return error(LexErrorReason::InvalidCharacter);
                }
                push(TokenKind::Continuation, pos_, 1);
                ++pos_;
                continued_ = true;
            } else if (c == '"' || c == '\'') {
                if (auto err = lex_string(pos_)) {
                    return *err;
                }
            } else if (is_ident_start(c)) {
                std::size_t end = pos_;
                while (end < src_.size() && is_ident_char(static_cast<unsigned char>(src_[end]))) {
                    ++end;
                }
                std::string_view word = src_.substr(pos_, end - pos_);
                if (end < src_.size() && (src_[end] == '"' || src_[end] == '\'') &&
                    is_string_prefix(word)) {
                    if (auto err = lex_string(pos_, end)) {
                        return *err;
                    }
                } else {
                    push(TokenKind::Name, pos_, end - pos_);
                    pos_ = end;
                }
            } else if (is_digit(c) || (c == '.' && is_digit(static_cast<unsigned char>(peek(1))))) {
                lex_number();
            } else if (c < 0x20 || c == 0x7f) {
                return error(LexErrorReason::InvalidCharacter);
            } else {
                lex_operator();
            }
        }
        return std::move(tokens_);
    }

private:
    char peek(std::size_t ahead) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    int column_of(std::size_t offset) const { return static_cast<int>(offset - line_start_) + 1; }

    void push(TokenKind kind, std::size_t start, std::size_t len) {
        tokens_.push_back(Token{kind, std::string(src_.substr(start, len)), line_, column_of(start), start});
    }

    LexError error(LexErrorReason reason) const { return LexError{line_, column_of(pos_), reason}; }

    void new_line() {
        ++line_;
        line_start_ = pos_;
        at_line_start_ = true;
    }

    void emit_indent_marker() {
        std::size_t end = pos_;
        while (end < src_.size() && is_inline_space(static_cast<unsigned char>(src_[end]))) {
            ++end;
        }
        if (end == pos_) {
            return;
        }
        // Blank and comment-only lines carry no indentation.
        char next = end < src_.size() ? src_[end] : '\n';
        if (next != '\n' && next != '\r' && next != '#') {
            push(TokenKind::IndentMarker, pos_, end - pos_);
        }
        pos_ = end;
    }

    // Lexes a string literal starting at `start`; the opening quote is at
    // `quote_pos`. Physical line bookkeeping is advanced for multi-line
    // literals so later tokens keep correct positions.
    std::optional<LexError> lex_string(std::size_t start, std::size_t quote_pos) {
        const int start_line = line_;
        const std::size_t start_line_begin = line_start_;
        const char quote = src_[quote_pos];
        const bool triple = src_.substr(quote_pos, 3) == std::string(3, quote);
        std::size_t p = quote_pos + (triple ? 3 : 1);
        int line = line_;
        std::size_t line_begin = line_start_;
        auto bump_line = [&](std::size_t next_line_begin) {
            ++line;
            line_begin = next_line_begin;
        };
        while (true) {
            if (p >= src_.size()) {
                return LexError{start_line, static_cast<int>(start - start_line_begin) + 1,
                                LexErrorReason::UnterminatedString};
            }
            char c = src_[p];
            if (c == '\\') {
                if (p + 1 < src_.size()) {
                    char n = src_[p + 1];
                    if (n == '\r' && p + 2 < src_.size() && src_[p + 2] == '\n') {
                        bump_line(p + 3);
                        p += 3;
                        continue;
                    }
                    if (n == '\n' || n == '\r') {
                        bump_line(p + 2);
                    }
                }
                p += 2;
                continue;
            }
            if (c == '\n' || c == '\r') {
                if (!triple) {
                    return LexError{start_line, static_cast<int>(start - start_line_begin) + 1,
                                    LexErrorReason::UnterminatedString};
                }
                std::size_t len = (c == '\r' && p + 1 < src_.size() && src_[p + 1] == '\n') ? 2 : 1;
                p += len;
                bump_line(p);
                continue;
            }
            if (c == quote) {
                if (!triple) {
                    ++p;
                    break;
                }
                if (src_.substr(p, 3) == std::string(3, quote)) {
                    p += 3;
                    break;
                }
            }
            ++p;
        }
        tokens_.push_back(Token{TokenKind::String, std::string(src_.substr(start, p - start)), start_line,
                                static_cast<int>(start - start_line_begin) + 1, start});
        pos_ = p;
        line_ = line;
        line_start_ = line_begin;
        return std::nullopt;
    }

    std::optional<LexError> lex_string(std::size_t start) { return lex_string(start, start); }

    void lex_number() {
        std::size_t end = pos_;
        const bool radix = src_[pos_] == '0' && pos_ + 1 < src_.size() &&
                           std::string_view("xXoObB").find(src_[pos_ + 1]) != std::string_view::npos;
        while (end < src_.size()) {
            auto c = static_cast<unsigned char>(src_[end]);
            if (is_digit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '.') {
                ++end;
                if (!radix && (c == 'e' || c == 'E') && end < src_.size() &&
                    (src_[end] == '+' || src_[end] == '-')) {
                    ++end;
                }
            } else {
                break;
            }
        }
        push(TokenKind::Number, pos_, end - pos_);
        pos_ = end;
    }

    void lex_operator() {
        std::size_t len = 1;
        for (auto op : kOperators) {
            if (src_.substr(pos_, op.size()) == op) {
                len = op.size();
                break;
            }
        }
        char c = src_[pos_];
        if (len == 1) {
            if (c == '(' || c == '[' || c == '{') {
                ++depth_;
            } else if ((c == ')' || c == ']' || c == '}') && depth_ > 0) {
                --depth_;
            }
        }
        push(TokenKind::Operator, pos_, len);
        pos_ += len;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_start_ = 0;
    int line_ = 1;
    int depth_ = 0;
    bool continued_ = false;
    bool at_line_start_ = true;
    TokenStream tokens_;
};

// Returns the offset of the first byte that is not part of a well-formed
// UTF-8 sequence.
inline std::optional<std::size_t> find_invalid_utf8(std::string_view bytes) {
    std::size_t i = 0;
    while (i < bytes.size()) {
        auto c = static_cast<unsigned char>(bytes[i]);
        std::size_t extra = 0;
        std::uint32_t cp = 0;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            extra = 1;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            extra = 2;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            extra = 3;
            cp = c & 0x07;
        } else {
            return i;
        }
        if (i + extra >= bytes.size()) {
            return i;
        }
        for (std::size_t k = 1; k <= extra; ++k) {
            auto cc = static_cast<unsigned char>(bytes[i + k]);
            if ((cc & 0xC0) != 0x80) {
                return i;
            }
            cp = (cp << 6) | (cc & 0x3F);
        }
        static constexpr std::uint32_t kMin[] = {0, 0x80, 0x800, 0x10000};
        if (cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            return i;
        }
        i += extra + 1;
    }
    return std::nullopt;
}

}  // namespace detail

/// Checks that raw file bytes are valid UTF-8. On failure the error points
/// at the first offending byte.
inline std::optional<LexError> validate_utf8(std::string_view bytes) {
    auto bad = detail::find_invalid_utf8(bytes);
    if (!bad) {
        return std::nullopt;
    }
    int line = 1;
    std::size_t line_start = 0;
    for (std::size_t i = 0; i < *bad; ++i) {
        if (bytes[i] == '\n') {
            ++line;
            line_start = i + 1;
        }
    }
    return LexError{line, static_cast<int>(*bad - line_start) + 1, LexErrorReason::BadEncoding};
}

/// Splits decoded source into tokens. Whitespace between tokens is not
/// represented; every other byte belongs to exactly one token.
inline LexResult tokenize(std::string_view source_text) { return detail::Lexer(source_text).run(); }

/// Groups tokens into logical lines, joining physical lines across open
/// brackets and backslash continuations.
inline std::vector<LogicalLine> split_logical_lines(const std::vector<Token>& tokens) {
    std::vector<LogicalLine> lines;
    LogicalLine current;
    int depth = 0;
    int pending_indent = 0;
    bool pending_continuation = false;

    auto flush = [&](int last_line) {
        if (!current.tokens.empty()) {
            current.last_line = std::max(last_line, current.tokens.back().line);
            current.continued = current.last_line > current.first_line;
            lines.push_back(std::move(current));
        }
        current = LogicalLine{};
        pending_indent = 0;
        depth = 0;
    };

    for (const auto& tok : tokens) {
        switch (tok.kind) {
        case TokenKind::IndentMarker:
            if (current.tokens.empty()) {
                pending_indent = detail::expand_indent(tok.text);
            }
            break;
        case TokenKind::Comment:
            break;
        case TokenKind::Continuation:
            pending_continuation = true;
            break;
        case TokenKind::Newline:
            if (pending_continuation || depth > 0) {
                pending_continuation = false;
                break;
            }
            flush(tok.line);
            break;
        default:
            pending_continuation = false;
            if (current.tokens.empty()) {
                current.first_line = tok.line;
                current.indent_width = tok.column == 1 ? 0 : pending_indent;
            }
            if (tok.kind == TokenKind::Operator && tok.text.size() == 1) {
                char c = tok.text[0];
                if (c == '(' || c == '[' || c == '{') {
                    ++depth;
                } else if ((c == ')' || c == ']' || c == '}') && depth > 0) {
                    --depth;
                }
            }
            current.tokens.push_back(tok);
            break;
        }
    }
    if (!current.tokens.empty()) {
        flush(current.tokens.back().line);
    }
    return lines;
}

/// Raw per-physical-line facts, blank lines included. A trailing line
/// terminator does not open an extra empty line.
inline std::vector<PhysicalLineFacts> physical_line_facts(std::string_view source_text) {
    std::vector<PhysicalLineFacts> facts;
    std::size_t pos = 0;
    int line = 1;
    while (pos < source_text.size()) {
        std::size_t end = source_text.find_first_of("\r\n", pos);
        std::size_t next = end;
        if (end == std::string_view::npos) {
            end = next = source_text.size();
        } else {
            next = end + ((source_text[end] == '\r' && end + 1 < source_text.size() &&
                           source_text[end + 1] == '\n') ? 2 : 1);
        }
        std::string_view body = source_text.substr(pos, end - pos);
        if (line == 1 && body.substr(0, 3) == "\xEF\xBB\xBF") {
            body.remove_prefix(3);
        }
        PhysicalLineFacts f;
        f.line = line;
        std::size_t ws = 0;
        while (ws < body.size() && detail::is_inline_space(static_cast<unsigned char>(body[ws]))) {
            ++ws;
        }
        f.indent_columns = detail::expand_indent(body.substr(0, ws));
        std::size_t trail = body.size();
        while (trail > 0 && (body[trail - 1] == ' ' || body[trail - 1] == '\t')) {
            --trail;
        }
        if (trail < body.size()) {
            f.has_trailing_whitespace = true;
            f.trailing_whitespace_column =
                static_cast<int>(trail + static_cast<std::size_t>(body.data() - source_text.data()) - pos) + 1;
        }
        for (char c : body) {
            if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
                ++f.length;
            }
        }
        facts.push_back(f);
        pos = next;
        ++line;
    }
    return facts;
}

}  // namespace mlsmellhound::pylex
