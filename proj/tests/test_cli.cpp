#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "greedyjump_cli/commands.hpp"
#include "greedyjump_cli/config.hpp"

using namespace greedyjump::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("greedyjump_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

int run_quiet(const ExperimentConfig& c) {
    std::ostringstream log;
    return run(c, log);
}

}  // namespace

TEST(Config, CanonicalRoundTripForEveryCommand) {
    for (Command c : all_commands()) {
        const ExperimentConfig cfg = make_config(c, {}, std::string("42"), nullptr);
        const ExperimentConfig back = ExperimentConfig::from_canonical(cfg.canonical());
        EXPECT_EQ(back, cfg) << cfg.canonical();
        EXPECT_EQ(back.canonical(), cfg.canonical());
    }
}

TEST(Config, NormalizesEquivalentSpellings) {
    const auto a = make_config(Command::invariant, {{"steps", "1e6"}, {"d", "3"}}, std::string("7"), nullptr);
    const auto b = make_config(Command::invariant, {{"steps", "1000000"}, {"d", "3"}}, std::string("7"), nullptr);
    EXPECT_EQ(a.canonical(), b.canonical());
    const auto s = make_config(Command::simulate, {{"source", "kronecker:alpha=1.0415*sqrt2"}, {"start", "0.0001, 5"}},
                               std::nullopt, nullptr);
    EXPECT_NE(s.canonical().find("start=1e-04,5"), std::string::npos);
}

TEST(Config, SeedPrecedence) {
    EXPECT_EQ(make_config(Command::stall, {}, std::string("5"), "9").seed, 5u);
    EXPECT_EQ(make_config(Command::stall, {}, std::string("5"), "9").seed_origin, "flag");
    EXPECT_EQ(make_config(Command::stall, {}, std::nullopt, "9").seed, 9u);
    EXPECT_EQ(make_config(Command::stall, {}, std::nullopt, "9").seed_origin, "env");
    EXPECT_EQ(make_config(Command::stall, {}, std::nullopt, nullptr).seed, 0u);
}

TEST(Config, Errors) {
    EXPECT_THROW(make_config(Command::simulate, {{"source", "bogus"}}, std::nullopt, nullptr), std::invalid_argument);
    EXPECT_THROW(make_config(Command::simulate, {{"norms-only", "true"}, {"full-states", "true"}}, std::nullopt, nullptr),
                 std::invalid_argument);
    EXPECT_THROW(make_config(Command::simulate, {{"source", "trig3d"}, {"start", "1,2"}}, std::nullopt, nullptr),
                 std::invalid_argument);
    EXPECT_THROW(make_config(Command::invariant, {{"nope", "1"}}, std::nullopt, nullptr), std::invalid_argument);
    EXPECT_THROW(make_config(Command::invariant, {{"d", "x"}}, std::nullopt, nullptr), std::invalid_argument);
    EXPECT_THROW(ExperimentConfig::from_canonical("fly away=1"), std::invalid_argument);
}

TEST(Cli, InvariantExampleMean) {
    const fs::path dir = fresh_dir("invariant");
    const auto cfg = make_config(Command::invariant, {{"d", "3"}, {"steps", "1e6"}, {"burnin", "1e4"}}, std::string("7"),
                                 nullptr, dir);
    ASSERT_EQ(run_quiet(cfg), kExitOk);
    const std::string csv = slurp(dir / "histogram.csv");
    std::smatch m;
    ASSERT_TRUE(std::regex_search(csv, m, std::regex("mean=([0-9.eE+-]+)")));
    EXPECT_NEAR(std::stod(m[1]), 1.0, 0.01);
    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    EXPECT_EQ(manifest["seed"], 7);
    EXPECT_EQ(manifest["config"], cfg.canonical());
    EXPECT_EQ(csv.rfind("# config: " + cfg.canonical() + "\n", 0), 0u);
    fs::remove_all(dir);
}

TEST(Cli, VdcPeriodicExample) {
    const fs::path dir = fresh_dir("periodic");
    const auto cfg = make_config(Command::vdc_periodic, {{"b", "2"}, {"start", "0.3,0.4"}, {"cycles", "100"}},
                                 std::nullopt, nullptr, dir);
    ASSERT_EQ(run_quiet(cfg), kExitOk);
    const auto j = nlohmann::json::parse(slurp(dir / "vdc-periodic.json"));
    EXPECT_TRUE(j["is_periodic"].get<bool>());
    fs::remove_all(dir);
}

TEST(Cli, PolyphaseNormsOnlyRun) {
    const fs::path dir = fresh_dir("polyphase");
    const auto cfg = make_config(Command::simulate,
                                 {{"source", "polyphase:c=sqrt2:p=3"}, {"start", "0,0"}, {"n", "2e4"}, {"norms-only", "true"},
                                  {"tie-mode", "choose-plus"}},
                                 std::nullopt, nullptr, dir);
    ASSERT_EQ(run_quiet(cfg), kExitOk);
    EXPECT_TRUE(fs::exists(dir / "samples.csv"));
    std::istringstream in(slurp(dir / "trajectory.csv"));
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    EXPECT_EQ(line, "step,norm,sign");
    fs::remove_all(dir);
}

TEST(Cli, ExitCodes) {
    const fs::path dir = fresh_dir("exit");
    const auto halt = make_config(Command::simulate, {{"start", "0,0"}, {"n", "10"}}, std::nullopt, nullptr, dir);
    EXPECT_EQ(run_quiet(halt), kExitIndeterminate);
    EXPECT_TRUE(fs::exists(dir / "trajectory.csv"));
    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    EXPECT_EQ(manifest["exit_code"], kExitIndeterminate);

    const auto bad = make_config(Command::stall, {{"n", "2"}}, std::nullopt, nullptr, dir / "bad");
    EXPECT_EQ(run_quiet(bad), kExitError);
    fs::remove_all(dir);
}

TEST(Cli, ReproducibleDataFiles) {
    for (Command c : {Command::simulate, Command::invariant, Command::solve, Command::kernel, Command::vdc_region,
                      Command::hitting, Command::stall, Command::stopcycle, Command::harmonic}) {
        std::map<std::string, std::string> raw;
        if (c == Command::simulate) raw = {{"source", "sphere:d=3"}, {"start", "1,1,1"}, {"n", "500"}};
        if (c == Command::invariant) raw = {{"steps", "20000"}, {"burnin", "1000"}, {"shards", "3"}};
        if (c == Command::solve) raw = {{"nodes", "300"}};
        if (c == Command::vdc_region) raw = {{"resolution", "40"}};
        const fs::path a = fresh_dir(std::string(command_name(c)) + "_a");
        const fs::path b = fresh_dir(std::string(command_name(c)) + "_b");
        ASSERT_EQ(run_quiet(make_config(c, raw, std::string("11"), nullptr, a)), kExitOk) << command_name(c);
        ASSERT_EQ(run_quiet(make_config(c, raw, std::string("11"), nullptr, b)), kExitOk) << command_name(c);
        std::size_t compared = 0;
        for (const auto& e : fs::directory_iterator(a)) {
            const auto name = e.path().filename();
            EXPECT_TRUE(fs::exists(b / name)) << name;
            if (name == "manifest.json") continue;
            EXPECT_EQ(slurp(e.path()), slurp(b / name)) << command_name(c) << " " << name;
            ++compared;
        }
        EXPECT_GE(compared, 1u) << command_name(c);
        fs::remove_all(a);
        fs::remove_all(b);
    }
}

TEST(Cli, DifferentSeedsGiveDifferentRandomRuns) {
    const fs::path a = fresh_dir("seed_a");
    const fs::path b = fresh_dir("seed_b");
    const std::map<std::string, std::string> raw{{"steps", "5000"}, {"burnin", "100"}};
    ASSERT_EQ(run_quiet(make_config(Command::invariant, raw, std::string("1"), nullptr, a)), kExitOk);
    ASSERT_EQ(run_quiet(make_config(Command::invariant, raw, std::string("2"), nullptr, b)), kExitOk);
    EXPECT_NE(slurp(a / "histogram.csv"), slurp(b / "histogram.csv"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Cli, OutputsMatchPublishedSchemas) {
    const fs::path schemas = GREEDYJUMP_SCHEMA_DIR;
    const auto tables = nlohmann::json::parse(slurp(schemas / "csv-tables.json"))["tables"];
    const auto summaries = nlohmann::json::parse(slurp(schemas / "outputs.schema.json"))["$defs"];
    const auto manifest_schema = nlohmann::json::parse(slurp(schemas / "manifest.schema.json"));

    for (Command c : all_commands()) {
        std::map<std::string, std::string> raw;
        if (c == Command::simulate) raw = {{"n", "50"}};
        if (c == Command::invariant) raw = {{"steps", "5000"}, {"burnin", "100"}};
        if (c == Command::solve) raw = {{"nodes", "200"}};
        if (c == Command::vdc_region) raw = {{"resolution", "20"}};
        const fs::path dir = fresh_dir(std::string("schema_") + std::string(command_name(c)));
        ASSERT_EQ(run_quiet(make_config(c, raw, std::nullopt, nullptr, dir)), kExitOk) << command_name(c);

        const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
        for (const auto& key : manifest_schema["required"]) EXPECT_TRUE(manifest.contains(key)) << key;
        for (const std::string name : manifest["files"]) {
            const std::string text = slurp(dir / name);
            if (name.ends_with(".json")) {
                const auto doc = nlohmann::json::parse(text);
                ASSERT_TRUE(summaries.contains(name)) << name;
                for (const auto& key : summaries[name]["required"]) EXPECT_TRUE(doc.contains(key)) << name << " " << key;
                EXPECT_EQ(doc["config"], manifest["config"]);
                continue;
            }
            ASSERT_TRUE(tables.contains(name)) << name;
            std::istringstream in(text);
            std::string line;
            do {
                std::getline(in, line);
            } while (line.starts_with("#"));
            std::vector<std::string> cols;
            std::stringstream ss(line);
            for (std::string col; std::getline(ss, col, ',');) cols.push_back(col);
            const auto& spec = tables[name]["columns"];
            ASSERT_GE(cols.size(), 2u);
            EXPECT_EQ(cols.front(), spec.front()) << name;
            EXPECT_EQ(cols.back(), spec.back()) << name;
            if (!tables[name].contains("variable_columns")) {
                EXPECT_EQ(cols.size(), spec.size()) << name;
            }
        }
        fs::remove_all(dir);
    }
}
