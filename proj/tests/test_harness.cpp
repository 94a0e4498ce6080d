#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "growth/errors.hpp"
#include "growth/harness.hpp"

using namespace growth;
using namespace growth::harness;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("growth_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig small_wb_experiment(const std::string& out, std::uint64_t seed) {
    models::WyartBouchaudConfig wb;
    wb.n_firms = 5000;
    ExperimentConfig cfg;
    cfg.model = wb;
    cfg.analyses = {{AnalysisKind::density},
                    {AnalysisKind::size_volatility, stats::DispersionStat::rms},
                    {AnalysisKind::tail, stats::DispersionStat::rms, "abs"}};
    cfg.output_dir = out;
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("run_experiment writes one csv per analysis plus a manifest") {
    const fs::path dir = fresh_dir("experiment");
    const RunManifest manifest = run_experiment(small_wb_experiment(dir.string(), 7));
    CHECK(fs::exists(dir / "density.csv"));
    CHECK(fs::exists(dir / "size_volatility_rms.csv"));
    CHECK(fs::exists(dir / "tail_abs.csv"));
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(manifest.outputs.size() == 3);

    const std::string density = slurp(dir / "density.csv");
    CHECK(density.rfind("g,density\n", 0) == 0);
    const std::string sv = slurp(dir / "size_volatility_rms.csv");
    CHECK(sv.rfind("bin_center,value,count\n", 0) == 0);
}

TEST_CASE("identical config and seed give byte-identical csv outputs") {
    const fs::path a = fresh_dir("det_a");
    const fs::path b = fresh_dir("det_b");
    setenv("GRANULAR_GROWTH_THREADS", "4", 1);
    run_experiment(small_wb_experiment(a.string(), 11));
    setenv("GRANULAR_GROWTH_THREADS", "1", 1);
    run_experiment(small_wb_experiment(b.string(), 11));
    unsetenv("GRANULAR_GROWTH_THREADS");
    for (const char* f : {"density.csv", "size_volatility_rms.csv", "tail_abs.csv"})
        CHECK(slurp(a / f) == slurp(b / f));
    // and a different seed changes them
    const fs::path c = fresh_dir("det_c");
    run_experiment(small_wb_experiment(c.string(), 12));
    CHECK(slurp(a / "density.csv") != slurp(c / "density.csv"));
}

TEST_CASE("manifest checksums match the emitted files") {
    const fs::path dir = fresh_dir("checksums");
    const RunManifest manifest = run_experiment(small_wb_experiment(dir.string(), 3));
    for (const auto& out : manifest.outputs)
        CHECK(out.fnv1a64 == file_digest_hex((dir / out.file).string()));
}

TEST_CASE("manifest validates against the documented schema shape") {
    const fs::path dir = fresh_dir("manifest");
    run_experiment(small_wb_experiment(dir.string(), 5));
    const json m = json::parse(slurp(dir / "manifest.json"));
    const json schema = json::parse(slurp(fs::path(TEST_SOURCE_DIR) / ".." / "docs" /
                                          "manifest.schema.json"));
    for (const auto& required : schema.at("required"))
        CHECK(m.contains(required.get<std::string>()));
    CHECK(m["tool"].is_string());
    CHECK(m["version"].is_string());
    CHECK(m["seed"].is_number_unsigned());
    CHECK(m["config"].is_object());
    CHECK(m["outputs"].is_array());
    for (const auto& o : m["outputs"]) {
        CHECK(o.contains("file"));
        CHECK(o.contains("fnv1a64"));
    }
}

TEST_CASE("csv floats round-trip exactly at 17 significant digits") {
    const fs::path dir = fresh_dir("roundtrip");
    run_experiment(small_wb_experiment(dir.string(), 9));
    std::ifstream in(dir / "density.csv");
    std::string line;
    std::getline(in, line); // header
    int checked = 0;
    while (std::getline(in, line) && checked < 200) {
        const auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        for (const std::string& tok :
             {line.substr(0, comma), line.substr(comma + 1)}) {
            const double v = std::strtod(tok.c_str(), nullptr);
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            CHECK(tok == buf);
        }
        ++checked;
    }
    CHECK(checked > 100);
}

TEST_CASE("qq analysis requires the branching model") {
    models::WyartBouchaudConfig wb;
    wb.n_firms = 1000;
    ExperimentConfig cfg;
    cfg.model = wb;
    cfg.analyses = {{AnalysisKind::qq_stable}};
    cfg.output_dir = fresh_dir("qq_bad").string();
    CHECK_THROWS_AS(run_experiment(cfg), parameter_error);
}

TEST_CASE("qq csv has the documented columns") {
    models::FasConfig fas;
    fas.mu = 1.5;
    fas.k0_grid = {256};
    fas.samples = 3000;
    ExperimentConfig cfg;
    cfg.model = fas;
    cfg.analyses = {{AnalysisKind::qq_stable}};
    const fs::path dir = fresh_dir("qq");
    cfg.output_dir = dir.string();
    cfg.seed = 17;
    run_experiment(cfg);
    const std::string qq = slurp(dir / "qq.csv");
    CHECK(qq.rfind("quantile_level,empirical,stable_reference\n", 0) == 0);
    // 99 quantile rows
    CHECK(std::count(qq.begin(), qq.end(), '\n') == 100);
}

TEST_CASE("experiments validate their inputs") {
    ExperimentConfig cfg = small_wb_experiment("/tmp/growth_noanalyses", 1);
    cfg.analyses.clear();
    CHECK_THROWS_AS(run_experiment(cfg), parameter_error);

    const fs::path blocker = fs::temp_directory_path() / "growth_blocker";
    std::ofstream(blocker).put('x');
    ExperimentConfig bad = small_wb_experiment((blocker / "sub").string(), 1);
    CHECK_THROWS_AS(run_experiment(bad), io_error);
    fs::remove(blocker);
}

TEST_CASE("reproduce fig1-right emits the documented files and summary") {
    const fs::path dir = fresh_dir("fig1_right");
    reproduce(Figure::fig1_right, dir.string(), 5);
    CHECK(fs::exists(dir / "density.csv"));
    CHECK(fs::exists(dir / "unit_count_hist.csv"));
    CHECK(fs::exists(dir / "manifest.json"));
    const json summary = json::parse(slurp(dir / "summary.json"));
    CHECK(summary.contains("exponential_fit_ks"));
    CHECK(summary.contains("mean_unit_count"));
    CHECK(summary["exponential_fit_ks"].get<double>() < 0.02);
}

TEST_CASE("cli selftest exits zero") {
    CHECK(cli_main({"selftest"}) == 0);
}

TEST_CASE("cli maps a missing config file to exit code 2") {
    CHECK(cli_main({"simulate", "wb", "--config", "/nonexistent/missing.toml",
                    "--out", "/tmp/growth_cli_cfg"}) == 2);
}

TEST_CASE("cli rejects unknown subcommands with exit code 1") {
    CHECK(cli_main({"frobnicate"}) == 1);
    CHECK(cli_main({}) == 1);
    CHECK(cli_main({"simulate", "nosuchmodel", "--out", "/tmp/growth_cli_x"}) == 1);
}

TEST_CASE("cli oracle exponents prints the prediction table") {
    CHECK(cli_main({"oracle", "exponents", "--mu", "1.4", "--alpha", "1.2", "--b",
                    "0.1"}) == 0);
    CHECK(cli_main({"oracle", "exponents", "--mu", "0.4"}) == 1);
}

TEST_CASE("cli simulate runs a small experiment end to end") {
    const fs::path dir = fresh_dir("cli_sim");
    CHECK(cli_main({"simulate", "wb", "--n-firms", "2000", "--seed", "3", "--out",
                    dir.string()}) == 0);
    CHECK(fs::exists(dir / "density.csv"));
    CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("cli simulate honours a toml config file") {
    const fs::path dir = fresh_dir("cli_toml");
    const fs::path cfg = dir / "wb.toml";
    std::ofstream(cfg) << "[simulate]\nn-firms = 1500\nseed = 8\nalpha = 1.25\n";
    CHECK(cli_main({"simulate", "wb", "--config", cfg.string(), "--out",
                    (dir / "out").string()}) == 0);
    const json m = json::parse(slurp(dir / "out" / "manifest.json"));
    CHECK(m["config"]["n_firms"] == 1500);
    CHECK(m["config"]["alpha"] == 1.25);
}
