// Command-line front end for the offline-to-online experiment suites.
//
// Exit codes: 0 on success, 1 when a verification criterion fails,
// 2 on configuration errors.

#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "otolab/harness.hpp"
#include "otolab/verify.hpp"

namespace {

otolab::ExperimentConfig load_config(const std::string& suite, const std::string& config_path,
                                     const std::string& preset, const std::string& seeds_csv,
                                     const std::string& out_dir) {
    otolab::ExperimentConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::invalid_argument("cannot open config file " + config_path);
        std::stringstream buf;
        buf << in.rdbuf();
        cfg = otolab::ExperimentConfig::from_json(buf.str());
        if (cfg.suite != suite)
            throw std::invalid_argument("config is for suite '" + cfg.suite + "', not '" + suite + "'");
    } else {
        cfg = otolab::ExperimentConfig::preset(suite, preset.empty() ? "default" : preset);
    }
    if (!seeds_csv.empty()) {
        cfg.seeds.clear();
        std::istringstream ss(seeds_csv);
        std::string field;
        while (std::getline(ss, field, ',')) cfg.seeds.push_back(std::stoull(field));
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    cfg.validate();
    return cfg;
}

void add_suite_command(CLI::App& app, const std::string& name, const std::string& desc, int& exit_code) {
    auto opts = std::make_shared<std::array<std::string, 4>>();  // config, preset, seeds, out
    CLI::App* cmd = app.add_subcommand(name, desc);
    cmd->add_option("--config", (*opts)[0], "JSON experiment config");
    cmd->add_option("--preset", (*opts)[1], "named preset (default: 'default')");
    cmd->add_option("--seeds", (*opts)[2], "comma-separated seed list override");
    cmd->add_option("--out", (*opts)[3], "output directory override");
    cmd->callback([name, opts, &exit_code] {
        otolab::ExperimentConfig cfg = load_config(name, (*opts)[0], (*opts)[1], (*opts)[2], (*opts)[3]);
        otolab::RunManifest manifest = otolab::run_suite(cfg);
        std::printf("suite %s: %zu files in %s (%.2fs, config %s)\n", name.c_str(), manifest.files.size(),
                    cfg.out_dir.c_str(), manifest.wall_clock_seconds, manifest.config_hash.c_str());
        exit_code = 0;
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"offline-to-online reinforcement learning laboratory"};
    app.require_subcommand(1);
    int exit_code = 0;

    add_suite_command(app, "bandit", "multi-armed bandit regret suite", exit_code);
    add_suite_command(app, "counterexample", "two-arm failure constructions for UCB and LCB", exit_code);
    add_suite_command(app, "linmdp", "linear MDP value-iteration agents", exit_code);
    add_suite_command(app, "bounds", "regret bound tabulation", exit_code);
    add_suite_command(app, "boorl", "bootstrapped ensemble gridworld agent", exit_code);

    // verify
    std::string verify_out = "verify_out";
    std::vector<int> criteria;
    CLI::App* verify = app.add_subcommand("verify", "run the acceptance checks");
    verify->add_option("--out", verify_out, "scratch directory for artifacts");
    verify->add_option("--criteria", criteria, "subset of criterion ids (default: all)");
    verify->callback([&] {
        std::vector<int> ids = criteria.empty() ? otolab::all_criterion_ids() : criteria;
        bool all_pass = true;
        for (const otolab::CriterionResult& res : otolab::run_criteria(ids, verify_out)) {
            std::printf("[%s] criterion %2d (%.1fs): %s — %s\n", res.pass ? "PASS" : "FAIL", res.id, res.seconds,
                        res.name.c_str(), res.detail.c_str());
            all_pass = all_pass && res.pass;
        }
        exit_code = all_pass ? 0 : 1;
    });

    // plot: summary CSV -> SVG
    std::string plot_in, plot_out, plot_title;
    bool plot_logx = false;
    CLI::App* plot = app.add_subcommand("plot", "render a summary CSV as SVG curves");
    plot->add_option("--config", plot_in, "summary CSV produced by a suite")->required();
    plot->add_option("--out", plot_out, "output SVG path")->required();
    plot->add_option("--title", plot_title, "plot title");
    plot->add_flag("--log-x", plot_logx, "logarithmic x axis");
    plot->callback([&] {
        std::ifstream in(plot_in);
        if (!in) throw std::invalid_argument("cannot open " + plot_in);
        std::stringstream buf;
        buf << in.rdbuf();
        otolab::SummaryTable table = otolab::summary_from_csv(buf.str());
        otolab::PlotStyle style;
        style.title = plot_title;
        style.log_x = plot_logx;
        std::ofstream out(plot_out, std::ios::binary);
        out << otolab::render_curves(table, style);
        std::printf("wrote %s\n", plot_out.c_str());
        exit_code = 0;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return exit_code;
}
