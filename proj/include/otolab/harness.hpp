#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "otolab/bandit.hpp"

namespace otolab {

// Logarithmically spaced 1-based step indices ending at horizon.
std::vector<std::int64_t> log_checkpoints(std::int64_t horizon, int n_points = 50);

struct SummarySeries {
    std::string tag;
    std::vector<double> mean;
    std::vector<double> stddev;  // sample standard deviation
};

struct SummaryTable {
    std::vector<std::int64_t> checkpoints;
    std::vector<SummarySeries> series;
};

// Mean and sample std of cumulative regret at the checkpoints.
SummarySeries summarize(const std::string& tag, const std::vector<RegretTrace>& traces,
                        const std::vector<std::int64_t>& checkpoints);

struct PlotStyle {
    int width = 760;
    int height = 480;
    std::string x_label = "step";
    std::string y_label = "cumulative regret";
    std::string title;
    bool log_x = false;
};

// Self-contained SVG: one polyline per series with a +/-1 std band and a
// legend. Byte-deterministic for identical inputs.
std::string render_curves(const SummaryTable& table, const PlotStyle& style);

// --- experiment configs -------------------------------------------------

struct ExperimentConfig {
    std::string suite;                   // bandit | counterexample | linmdp | bounds | boorl
    std::vector<std::uint64_t> seeds;
    std::string out_dir;
    std::map<std::string, double> params;        // numeric suite parameters
    std::vector<std::string> agents;             // bandit/linmdp agent tags

    static ExperimentConfig from_json(const std::string& text);
    static ExperimentConfig preset(const std::string& suite, const std::string& name);
    std::string to_json() const;
    void validate() const;
};

struct RunManifest {
    std::string config_hash;
    std::string version;
    std::vector<std::string> files;
    double wall_clock_seconds = 0.0;
    SummaryTable summary;

    std::string to_json() const;
};

RunManifest run_suite(const ExperimentConfig& config);

// CSV helpers shared by the suites (exact "%.17g" formatting).
std::string format_double(double x);
std::string trace_to_csv(const RegretTrace& trace, const std::vector<std::int64_t>& checkpoints);
std::string summary_to_csv(const SummaryTable& table);
SummaryTable summary_from_csv(const std::string& text);

std::uint64_t fnv1a(const std::string& text);

}  // namespace otolab
