#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "otolab/harness.hpp"

using namespace otolab;
namespace fs = std::filesystem;

TEST_CASE("log-spaced checkpoints are increasing and end at the horizon") {
    std::vector<std::int64_t> cps = log_checkpoints(100000, 50);
    CHECK(cps.front() >= 1);
    CHECK(cps.back() == 100000);
    for (std::size_t i = 1; i < cps.size(); ++i) CHECK(cps[i] > cps[i - 1]);
    CHECK(log_checkpoints(1, 10) == std::vector<std::int64_t>{1});
    CHECK_THROWS(log_checkpoints(0, 10));
    CHECK_THROWS(log_checkpoints(100, 0));
}

TEST_CASE("summaries compute the exact mean and sample deviation") {
    RegretTrace a, b;
    a.cumulative = {1.0, 2.0, 3.0};
    a.instantaneous = {1.0, 1.0, 1.0};
    b.cumulative = {3.0, 4.0, 7.0};
    b.instantaneous = {3.0, 1.0, 3.0};
    SummarySeries s = summarize("x", {a, b}, {1, 3});
    CHECK(s.mean[0] == doctest::Approx(2.0));
    CHECK(s.mean[1] == doctest::Approx(5.0));
    // sample std with n-1: sqrt(((1-2)^2 + (3-2)^2) / 1) = sqrt(2)
    CHECK(s.stddev[0] == doctest::Approx(std::sqrt(2.0)));
    CHECK(s.stddev[1] == doctest::Approx(std::sqrt(8.0)));
    CHECK_THROWS(summarize("x", {a, b}, {4}));  // checkpoint past the trace
    CHECK_THROWS(summarize("x", {}, {1}));
}

TEST_CASE("trace CSV has the contract header and checkpoint rows") {
    RegretTrace tr;
    tr.instantaneous = {0.5, 0.0, 0.25};
    tr.cumulative = {0.5, 0.5, 0.75};
    std::string csv = trace_to_csv(tr, {1, 3});
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "step,instantaneous,cumulative");
    std::getline(in, line);
    CHECK(line == "1,0.5,0.5");
    std::getline(in, line);
    CHECK(line == "3,0.25,0.75");
}

TEST_CASE("summary CSV round-trips through the parser") {
    SummaryTable table;
    table.checkpoints = {1, 10, 100};
    SummarySeries s1{"ts", {0.1, 0.2, 0.3}, {0.01, 0.02, 0.03}};
    SummarySeries s2{"ucb", {1.0, 2.0, 3.0}, {0.0, 0.5, 1.0}};
    table.series = {s1, s2};
    SummaryTable back = summary_from_csv(summary_to_csv(table));
    CHECK(back.checkpoints == table.checkpoints);
    REQUIRE(back.series.size() == 2);
    CHECK(back.series[0].tag == "ts");
    CHECK(back.series[1].tag == "ucb");
    for (int i = 0; i < 3; ++i) {
        CHECK(back.series[0].mean[i] == table.series[0].mean[i]);
        CHECK(back.series[1].stddev[i] == table.series[1].stddev[i]);
    }
    CHECK_THROWS(summary_from_csv("bogus,header\n"));
}

TEST_CASE("SVG rendering produces well-formed standalone markup") {
    SummaryTable table;
    table.checkpoints = {1, 10, 100};
    table.series = {{"ts", {0.1, 0.2, 0.3}, {0.01, 0.02, 0.03}}};
    PlotStyle style;
    style.title = "demo";
    style.log_x = true;
    std::string svg = render_curves(table, style);
    CHECK(svg.find("<?xml") == 0);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("demo") != std::string::npos);
    // identical input renders identical bytes
    CHECK(svg == render_curves(table, style));
    CHECK_THROWS(render_curves(SummaryTable{}, style));
}

TEST_CASE("experiment configs validate and round-trip through JSON") {
    ExperimentConfig cfg = ExperimentConfig::preset("bandit", "smoke");
    cfg.out_dir = "somewhere";
    ExperimentConfig back = ExperimentConfig::from_json(cfg.to_json());
    CHECK(back.suite == cfg.suite);
    CHECK(back.seeds == cfg.seeds);
    CHECK(back.params == cfg.params);
    CHECK(back.agents == cfg.agents);

    ExperimentConfig bad = cfg;
    bad.suite = "nonsense";
    CHECK_THROWS(bad.validate());
    bad = cfg;
    bad.out_dir.clear();
    CHECK_THROWS(bad.validate());
    bad = cfg;
    bad.seeds.clear();
    CHECK_THROWS(bad.validate());
    CHECK_THROWS(ExperimentConfig::preset("bandit", "no_such_preset"));
    CHECK_THROWS(ExperimentConfig::from_json("{\"schema_version\": 99}"));
}

TEST_CASE("fnv1a matches the published test vectors") {
    CHECK(fnv1a("") == 0xCBF29CE484222325ULL);
    CHECK(fnv1a("a") == 0xAF63DC4C8601EC8CULL);
    CHECK(fnv1a("foobar") == 0x85944171F73967E8ULL);
}

TEST_CASE("suite runs write a manifest whose summary is recomputable from the per-seed files") {
    fs::path dir = fs::temp_directory_path() / "otolab_harness_test";
    fs::remove_all(dir);
    ExperimentConfig cfg = ExperimentConfig::preset("bandit", "smoke");
    cfg.out_dir = dir.string();
    RunManifest manifest = run_suite(cfg);
    CHECK(manifest.version == "1.0.0");
    CHECK(manifest.config_hash.size() == 16);
    for (const std::string& name : manifest.files) CHECK(fs::exists(dir / name));
    REQUIRE(!manifest.summary.series.empty());

    // recompute the first agent's summary from its per-seed trace files
    const SummarySeries& series = manifest.summary.series[0];
    std::vector<RegretTrace> traces;
    for (std::uint64_t seed : cfg.seeds) {
        fs::path file = dir / ("bandit_" + series.tag + "_seed" + std::to_string(seed) + ".csv");
        REQUIRE(fs::exists(file));
        std::ifstream in(file);
        std::string line;
        std::getline(in, line);  // header
        RegretTrace tr;
        tr.cumulative.resize(manifest.summary.checkpoints.back(), 0.0);
        tr.instantaneous.resize(manifest.summary.checkpoints.back(), 0.0);
        while (std::getline(in, line)) {
            std::istringstream ls(line);
            std::string f1, f2, f3;
            std::getline(ls, f1, ',');
            std::getline(ls, f2, ',');
            std::getline(ls, f3, ',');
            long step = std::stol(f1);
            tr.instantaneous[step - 1] = std::stod(f2);
            tr.cumulative[step - 1] = std::stod(f3);
        }
        traces.push_back(std::move(tr));
    }
    SummarySeries redo = summarize(series.tag, traces, manifest.summary.checkpoints);
    for (std::size_t i = 0; i < redo.mean.size(); ++i) {
        CHECK(redo.mean[i] == series.mean[i]);  // bit-exact: same order, %.17g round trip
        CHECK(redo.stddev[i] == series.stddev[i]);
    }
    fs::remove_all(dir);
}

TEST_CASE("identical configs hash identically, different ones differ") {
    ExperimentConfig a = ExperimentConfig::preset("bounds", "default");
    ExperimentConfig b = a;
    CHECK(fnv1a(a.to_json()) == fnv1a(b.to_json()));
    b.params["d"] = 7;
    CHECK(fnv1a(a.to_json()) != fnv1a(b.to_json()));
}
