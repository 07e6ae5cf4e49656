#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "mlsmellhound/cli.hpp"
#include "support.hpp"

using namespace mlsmellhound;
namespace support = mlsmellhound::test_support;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::string acceptance(const std::string& name) { return (support::fixture_dir() / "acceptance" / name).string(); }

std::vector<std::string> displays(const std::vector<cli::DiscoveredFile>& files) {
    std::vector<std::string> out;
    for (const auto& f : files) {
        out.push_back(f.display);
    }
    return out;
}

// Sets an environment variable for the lifetime of the guard.
class EnvGuard {
public:
    EnvGuard(const char* name, const std::string& value) : name_(name) { ::setenv(name, value.c_str(), 1); }
    ~EnvGuard() { ::unsetenv(name_); }

private:
    const char* name_;
};

}  // namespace

TEST(Discover, PythonFilesOnly) {
    support::TempDir dir("disc");
    support::write_file(dir.path() / "a.py", "");
    support::write_file(dir.path() / "b.txt", "");
    auto files = cli::discover_files({dir.path().string()}, {});
    ASSERT_EQ(files.size(), 1u);
    EXPECT_EQ(files[0].path.filename(), "a.py");
}

TEST(Discover, NestedSortedAndHiddenSkipped) {
    support::TempDir dir("nest");
    const auto root = dir.path().string();
    support::write_file(dir.path() / "pkg" / "mod.py", "");
    support::write_file(dir.path() / "b.py", "");
    support::write_file(dir.path() / "a" / "z.py", "");
    support::write_file(dir.path() / ".git" / "hook.py", "");
    support::write_file(dir.path() / "pkg" / ".cache" / "x.py", "");
    auto names = displays(cli::discover_files({root}, {}));
    const auto base = cli::display_path(dir.path());
    EXPECT_EQ(names, (std::vector<std::string>{base + "/a/z.py", base + "/b.py", base + "/pkg/mod.py"}));
}

TEST(Discover, ExcludeGlob) {
    support::TempDir dir("excl");
    support::write_file(dir.path() / "venv" / "lib" / "site.py", "");
    support::write_file(dir.path() / "src" / "venv" / "x.py", "");
    support::write_file(dir.path() / "src" / "main.py", "");
    auto names = displays(cli::discover_files({dir.path().string()}, {"**/venv/**"}));
    ASSERT_EQ(names.size(), 1u);
    EXPECT_EQ(fs::path(names[0]).filename(), "main.py");
}

TEST(Discover, ExplicitFileAndDedup) {
    support::TempDir dir("expl");
    support::write_file(dir.path() / "script", "x = 1\n");
    support::write_file(dir.path() / "a.py", "");
    auto files = cli::discover_files(
        {(dir.path() / "script").string(), dir.path().string(), (dir.path() / "a.py").string()}, {});
    EXPECT_EQ(files.size(), 2u);
}

TEST(Discover, MissingPathIsUsageError) {
    EXPECT_THROW(cli::discover_files({"/definitely/not/here"}, {}), cli::UsageError);
    auto r = run({"/definitely/not/here"});
    EXPECT_EQ(r.code, cli::kExitUsage);
    EXPECT_NE(r.err.find("does not exist"), std::string::npos);
}

TEST(Run, ExcludeTakesOneGlobPerFlag) {
    support::TempDir dir("exflag");
    support::write_file(dir.path() / "keep" / "k.py", "import os\n");
    support::write_file(dir.path() / "skip" / "s.py", "import os\n");
    auto r = run({"--exclude", "**/skip/**", dir.path().string(), "--format", "json", "--exclude", "**/none/**"});
    ASSERT_EQ(r.code, 1) << r.err;
    auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j["files"].size(), 1u);
    EXPECT_EQ(fs::path(j["files"][0]["path"].get<std::string>()).filename(), "k.py");
}

TEST(Run, BadFlagExitsTwo) {
    EXPECT_EQ(run({"--no-such-flag"}).code, cli::kExitUsage);
    EXPECT_EQ(run({"--format", "xml", "."}).code, cli::kExitUsage);
    EXPECT_EQ(run({"--context-override", "gpu", "."}).code, cli::kExitUsage);
    EXPECT_EQ(run({"--exclude", "[oops", "."}).code, cli::kExitUsage);
}

TEST(Run, HelpAndVersion) {
    auto h = run({"--help"});
    EXPECT_EQ(h.code, 0);
    EXPECT_NE(h.out.find("--context-override"), std::string::npos);
    auto v = run({"--version"});
    EXPECT_EQ(v.code, 0);
    EXPECT_EQ(v.out, "mlsmellhound " + std::string(report::kToolVersion) + "\n");
}

TEST(Run, CleanTreeExitsZero) {
    support::TempDir dir("clean");
    support::write_file(dir.path() / "ok.py", "import os\n\n\ndef main():\n    return os.getcwd()\n");
    auto r = run({dir.path().string()});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("[context: non-ML]"), std::string::npos);
}

TEST(Run, NonMLTwinExitsOneWithInvalidName) {
    auto r = run({acceptance("training_nonml.py")});
    EXPECT_EQ(r.code, cli::kExitFindings);
    EXPECT_NE(r.out.find("11:1: C0103 (invalid-name)"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("15:5: C0103 (invalid-name)"), std::string::npos) << r.out;
}

TEST(Run, DemotedFindingsDoNotFail) {
    support::TempDir dir("demoted");
    support::write_file(dir.path() / "ml.py", "import torch\nprint(torch.ones(1)) \n");
    support::write_file(dir.path() / "plain.py", "import os\nprint(os.sep) \n");
    EXPECT_EQ(run({(dir.path() / "ml.py").string(), "--fail-on", "convention"}).code, 0);
    EXPECT_EQ(run({(dir.path() / "plain.py").string(), "--fail-on", "convention"}).code, 1);
}

TEST(Run, IndentationExitCodes) {
    // Two-space indentation is allowed for ML files; for the non-ML twin
    // it is a warning.
    EXPECT_EQ(run({acceptance("two_space_ml.py")}).code, 0);
    EXPECT_EQ(run({acceptance("two_space_nonml.py")}).code, 1);
    EXPECT_EQ(run({acceptance("two_space_nonml.py"), "--fail-on", "error"}).code, 0);
}

TEST(Run, FailOnThreshold) {
    EXPECT_EQ(run({acceptance("matrix_nonml.py")}).code, 0);
    EXPECT_EQ(run({acceptance("matrix_nonml.py"), "--fail-on", "convention"}).code, 1);
    EXPECT_EQ(run({acceptance("training_ml.py"), "--fail-on", "refactor"}).code, 1);
    EXPECT_EQ(run({acceptance("training_ml.py"), "--fail-on", "warning"}).code, 0);
}

TEST(Run, LexErrorIsFatalAndFails) {
    support::TempDir dir("lexerr");
    support::write_file(dir.path() / "bad.py", "x = 'open\n");
    auto r = run({dir.path().string(), "--fail-on", "error"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("F0001 (lex-error)"), std::string::npos);
}

TEST(Run, ExplainContext) {
    auto r = run({acceptance("training_ml.py"), "--explain-context"});
    EXPECT_NE(r.out.find("context: " + cli::display_path(acceptance("training_ml.py")) + " -> ML\n"), std::string::npos)
        << r.out;
    EXPECT_NE(r.out.find("  evidence: import of pandas at line 1\n"), std::string::npos);
    EXPECT_LT(r.out.find("evidence:"), r.out.find("[context: ML]"));

    auto j = run({acceptance("training_ml.py"), "--explain-context", "--format", "json"});
    EXPECT_NE(j.err.find("evidence: import of pandas"), std::string::npos);
    EXPECT_TRUE(nlohmann::json::accept(j.out));
}

TEST(Run, ConfigFromFlagAndEnvironment) {
    support::TempDir dir("cfg");
    support::write_file(dir.path() / "c.toml", "[profile.non_ml]\ndisable = [\"invalid-name\"]\n");
    support::write_file(dir.path() / "broken.toml", "[profile.ml]\ndisable = [\"Z9999\"]\n");
    const auto file = acceptance("matrix_nonml.py");
    auto with_flag = run({file, "--config", (dir.path() / "c.toml").string(), "--fail-on", "convention"});
    EXPECT_EQ(with_flag.code, 0) << with_flag.out;

    auto bad = run({file, "--config", (dir.path() / "broken.toml").string()});
    EXPECT_EQ(bad.code, cli::kExitUsage);
    EXPECT_NE(bad.err.find("Z9999"), std::string::npos);

    {
        EnvGuard env(config::kConfigEnvVar.data(), (dir.path() / "c.toml").string());
        EXPECT_EQ(run({file, "--fail-on", "convention"}).code, 0);
        // The flag wins over the environment.
        EXPECT_EQ(run({file, "--config", (dir.path() / "broken.toml").string()}).code, cli::kExitUsage);
    }
    EXPECT_EQ(run({file, "--fail-on", "convention"}).code, 1);
}

TEST(Run, FingerprintTracksConfig) {
    support::TempDir dir("fp");
    support::write_file(dir.path() / "c.toml", "[rules.R0913]\nmax-args = 3\n");
    const auto file = acceptance("matrix_ml.py");
    auto a = nlohmann::json::parse(run({file, "--format", "json"}).out);
    auto b = nlohmann::json::parse(run({file, "--format", "json", "--config", (dir.path() / "c.toml").string()}).out);
    EXPECT_EQ(a.at("config_fingerprint"), config::config_fingerprint(config::default_config()));
    EXPECT_NE(a.at("config_fingerprint"), b.at("config_fingerprint"));
}

TEST(Run, ContextOverrideMatchesConfigOverride) {
    support::TempDir dir("ovr");
    support::write_file(dir.path() / "ml.toml", "[context]\noverrides = [{ pattern = \"**\", purpose = \"ml\" }]\n");
    const auto corpus = (support::fixture_dir() / "acceptance").string();
    auto flag = nlohmann::json::parse(run({corpus, "--format", "json", "--context-override", "ml"}).out);
    auto cfg = nlohmann::json::parse(
        run({corpus, "--format", "json", "--config", (dir.path() / "ml.toml").string()}).out);
    EXPECT_EQ(flag.at("files"), cfg.at("files"));
    EXPECT_EQ(flag.at("summary").at("ml_files"), flag.at("summary").at("files"));
}

TEST(Run, JobsDoNotChangeOutput) {
    const auto corpus = support::fixture_dir().string();
    auto one = run({corpus, "--format", "json", "--jobs", "1"});
    auto many = run({corpus, "--format", "json", "--jobs", "8"});
    EXPECT_EQ(one.out, many.out);
    EXPECT_EQ(one.code, many.code);
    auto text1 = run({corpus, "--jobs", "1"});
    auto text4 = run({corpus, "--jobs", "4"});
    EXPECT_EQ(text1.out, text4.out);
}
