#pragma once

// Path glob matching: `*` and `?` stay within one path component, `**`
// crosses components, `[...]` is a character class (`!` or `^` negates).

#include <stdexcept>
#include <string>
#include <string_view>

namespace mlsmellhound {

class GlobError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

// Returns the length of the class starting at `p[0] == '['`, or 0 when
// the class is not terminated.
inline std::size_t class_length(std::string_view p) {
    std::size_t i = 1;
    if (i < p.size() && (p[i] == '!' || p[i] == '^')) {
        ++i;
    }
    if (i < p.size() && p[i] == ']') {
        ++i;
    }
    while (i < p.size() && p[i] != ']') {
        ++i;
    }
    return i < p.size() ? i + 1 : 0;
}

inline bool class_matches(std::string_view cls, char c) {
    std::size_t i = 1;
    bool negate = false;
    if (cls[i] == '!' || cls[i] == '^') {
        negate = true;
        ++i;
    }
    bool hit = false;
    std::size_t end = cls.size() - 1;
    for (; i < end; ++i) {
        if (i + 2 < end && cls[i + 1] == '-') {
            if (c >= cls[i] && c <= cls[i + 2]) {
                hit = true;
            }
            i += 2;
        } else if (cls[i] == c) {
            hit = true;
        }
    }
    return hit != negate;
}

inline bool glob_match_impl(std::string_view p, std::string_view s) {
    while (!p.empty()) {
        if (p.substr(0, 2) == "**") {
            std::string_view rest = p.substr(2);
            // `**/` also matches zero directories.
            if (!rest.empty() && rest.front() == '/') {
                if (glob_match_impl(rest.substr(1), s)) {
                    return true;
                }
            }
            for (std::size_t k = 0; k <= s.size(); ++k) {
                if (glob_match_impl(rest, s.substr(k))) {
                    return true;
                }
            }
            return false;
        }
        char pc = p.front();
        if (pc == '*') {
            std::string_view rest = p.substr(1);
            for (std::size_t k = 0; k <= s.size(); ++k) {
                if (glob_match_impl(rest, s.substr(k))) {
                    return true;
                }
                if (k < s.size() && s[k] == '/') {
                    break;
                }
            }
            return false;
        }
        if (s.empty()) {
            return false;
        }
        if (pc == '?') {
            if (s.front() == '/') {
                return false;
            }
        } else if (pc == '[') {
            std::size_t len = class_length(p);
            if (s.front() == '/' || !class_matches(p.substr(0, len), s.front())) {
                return false;
            }
            p.remove_prefix(len);
            s.remove_prefix(1);
            continue;
        } else if (pc != s.front()) {
            return false;
        }
        p.remove_prefix(1);
        s.remove_prefix(1);
    }
    return s.empty();
}

}  // namespace detail

/// Throws GlobError for an empty pattern or an unterminated class.
inline void validate_glob(std::string_view pattern) {
    if (pattern.empty()) {
        throw GlobError("empty glob pattern");
    }
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (pattern[i] == '[') {
            std::size_t len = detail::class_length(pattern.substr(i));
            if (len == 0) {
                throw GlobError("unterminated character class in glob '" + std::string(pattern) + "'");
            }
            i += len - 1;
        }
    }
}

/// Matches a forward-slash path against a validated pattern. A leading
/// "./" on the path is ignored.
inline bool glob_match(std::string_view pattern, std::string_view path) {
    while (path.substr(0, 2) == "./") {
        path.remove_prefix(2);
    }
    return detail::glob_match_impl(pattern, path);
}

}  // namespace mlsmellhound
