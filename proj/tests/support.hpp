#pragma once

// Shared helpers for the unit and acceptance suites: fixture access, a
// generator of small random Python files and a generator of random
// context profiles.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mlsmellhound/rules.hpp"
#include "mlsmellhound/transforms.hpp"

namespace mlsmellhound::test_support {

inline std::filesystem::path fixture_dir() { return std::filesystem::path(MLSMELLHOUND_FIXTURE_DIR); }

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << text;
}

/// Scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::mt19937_64 rng{std::random_device{}()};
        path_ = std::filesystem::temp_directory_path() /
                ("mlsmellhound-" + tag + "-" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& options) {
    return options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
}

inline bool coin(std::mt19937_64& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline int between(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// A small syntactically plausible Python file exercising every checker:
/// imports (ML and not), bindings of mixed naming styles, functions with
/// varying arity and indentation, trailing whitespace and long lines.
inline std::string random_python_file(std::mt19937_64& rng, int max_blocks = 8) {
    static const std::vector<std::string> modules = {"os", "sys", "json", "torch", "numpy", "pandas",
                                                     "sklearn.svm", "re", "tensorflow", "collections"};
    static const std::vector<std::string> names = {"df", "e", "P", "X", "y", "lr", "total_count", "Wxh",
                                                   "CamelCase", "data", "n", "tmp", "_", "MAX_SIZE", "a1"};
    std::string out;
    auto trail = [&]() -> std::string { return coin(rng, 0.2) ? (coin(rng) ? " " : "\t ") : ""; };
    const int imports = between(rng, 0, 3);
    for (int i = 0; i < imports; ++i) {
        const auto& mod = pick(rng, modules);
        if (coin(rng)) {
            out += "import " + mod + (coin(rng, 0.3) ? " as alias" + std::to_string(i) : "") + trail() + "\n";
        } else {
            out += "from " + mod + " import thing" + std::to_string(i) + trail() + "\n";
        }
    }
    const int blocks = between(rng, 1, max_blocks);
    for (int b = 0; b < blocks; ++b) {
        switch (between(rng, 0, 4)) {
        case 0:
            out += pick(rng, names) + " = " + std::to_string(between(rng, 0, 99)) + trail() + "\n";
            break;
        case 1: {
            const int params = between(rng, 0, 13);
            const int indent = pick(rng, std::vector<int>{2, 3, 4, 8});
            out += "def func" + std::to_string(b) + "(";
            for (int p = 0; p < params; ++p) {
                out += (p ? ", " : "") + std::string("p") + std::to_string(p);
            }
            out += "):" + trail() + "\n";
            out += std::string(indent, ' ') + pick(rng, names) + " = alias0" + trail() + "\n";
            if (coin(rng)) {
                out += std::string(indent * 2, ' ') + "# nested comment\n";
            }
            out += std::string(indent, ' ') + "return None\n";
            break;
        }
        case 2:
            out += "# " + std::string(between(rng, 0, 130), 'c') + "\n";
            break;
        case 3:
            out += pick(rng, names) + ", " + pick(rng, names) + " = thing0, thing1" + trail() + "\n";
            break;
        default:
            out += "value = \"" + std::string(between(rng, 0, 120), 's') + "\"" + trail() + "\n";
            break;
        }
        if (coin(rng, 0.2)) {
            out += std::string(between(rng, 0, 3), ' ') + "\n";
        }
    }
    return out;
}

/// A random valid profile over the catalog.
inline transforms::ContextProfile random_profile(std::mt19937_64& rng, const rules::Catalog& catalog) {
    transforms::ContextProfile p;
    for (const auto& rule : catalog) {
        const int roll = between(rng, 0, 5);
        if (roll == 0) {
            p.disable.insert(rule.rule_id);
        } else if (roll == 1) {
            p.enable.insert(rule.rule_id);
        }
        if (coin(rng, 0.3)) {
            p.demote.insert(rule.rule_id);
        }
        if (coin(rng, 0.3) && !rule.placeholders.empty()) {
            std::string tpl = "ctx:";
            for (const auto& ph : rule.placeholders) {
                if (coin(rng)) {
                    tpl += " {" + ph + "}";
                }
            }
            p.remessage[rule.rule_id] = tpl;
        } else if (coin(rng, 0.1)) {
            p.remessage[rule.rule_id] = "fixed message";
        }
    }
    for (auto c : {"error", "warning", "refactor", "convention"}) {
        if (coin(rng, 0.15)) {
            p.demote.insert(c);
        }
    }
    if (coin(rng)) {
        p.param_overrides["R0913"]["max-args"] = std::int64_t{between(rng, 1, 12)};
    }
    if (coin(rng)) {
        std::vector<std::int64_t> units;
        for (std::int64_t u : {2, 3, 4}) {
            if (coin(rng)) {
                units.push_back(u);
            }
        }
        if (units.empty()) {
            units.push_back(4);
        }
        p.param_overrides["W0311"]["indent-unit"] = units;
    }
    if (coin(rng)) {
        p.param_overrides["C0301"]["max-line-length"] = std::int64_t{between(rng, 20, 140)};
    }
    if (coin(rng)) {
        p.param_overrides["C0103"]["good-names"] = std::vector<std::string>{"df", "e", "P"};
    }
    return p;
}

}  // namespace mlsmellhound::test_support
