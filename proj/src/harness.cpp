#include "otolab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "otolab/boorl.hpp"
#include "otolab/bounds.hpp"
#include "otolab/lsvi.hpp"

namespace otolab {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::int64_t> log_checkpoints(std::int64_t horizon, int n_points) {
    if (horizon < 1) throw std::invalid_argument("log_checkpoints: horizon must be >= 1");
    if (n_points < 1) throw std::invalid_argument("log_checkpoints: need at least one point");
    std::vector<std::int64_t> out;
    for (int i = 0; i < n_points; ++i) {
        double frac = static_cast<double>(i + 1) / n_points;
        auto step = static_cast<std::int64_t>(std::llround(std::pow(static_cast<double>(horizon), frac)));
        step = std::clamp<std::int64_t>(step, 1, horizon);
        if (out.empty() || step > out.back()) out.push_back(step);
    }
    if (out.back() != horizon) out.push_back(horizon);
    return out;
}

SummarySeries summarize(const std::string& tag, const std::vector<RegretTrace>& traces,
                        const std::vector<std::int64_t>& checkpoints) {
    if (traces.empty()) throw std::invalid_argument("summarize: no traces");
    SummarySeries out;
    out.tag = tag;
    for (std::int64_t step : checkpoints) {
        double mean = 0.0;
        std::vector<double> vals;
        vals.reserve(traces.size());
        for (const RegretTrace& tr : traces) {
            if (step < 1 || step > static_cast<std::int64_t>(tr.cumulative.size()))
                throw std::invalid_argument("summarize: checkpoint outside trace");
            vals.push_back(tr.cumulative[step - 1]);
            mean += vals.back();
        }
        mean /= vals.size();
        double var = 0.0;
        for (double v : vals) var += (v - mean) * (v - mean);
        var = vals.size() > 1 ? var / (vals.size() - 1) : 0.0;
        out.mean.push_back(mean);
        out.stddev.push_back(std::sqrt(var));
    }
    return out;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string trace_to_csv(const RegretTrace& trace, const std::vector<std::int64_t>& checkpoints) {
    std::ostringstream out;
    out << "step,instantaneous,cumulative\n";
    for (std::int64_t step : checkpoints) {
        if (step < 1 || step > static_cast<std::int64_t>(trace.cumulative.size()))
            throw std::invalid_argument("trace_to_csv: checkpoint outside trace");
        out << step << ',' << format_double(trace.instantaneous[step - 1]) << ','
            << format_double(trace.cumulative[step - 1]) << '\n';
    }
    return out.str();
}

std::string summary_to_csv(const SummaryTable& table) {
    std::ostringstream out;
    out << "step";
    for (const SummarySeries& s : table.series) out << ',' << s.tag << "_mean," << s.tag << "_std";
    out << '\n';
    for (std::size_t i = 0; i < table.checkpoints.size(); ++i) {
        out << table.checkpoints[i];
        for (const SummarySeries& s : table.series)
            out << ',' << format_double(s.mean[i]) << ',' << format_double(s.stddev[i]);
        out << '\n';
    }
    return out.str();
}

SummaryTable summary_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("summary_from_csv: empty input");
    std::vector<std::string> cols;
    {
        std::istringstream hs(line);
        std::string col;
        while (std::getline(hs, col, ',')) cols.push_back(col);
    }
    if (cols.empty() || cols[0] != "step" || cols.size() % 2 == 0)
        throw std::invalid_argument("summary_from_csv: malformed header");
    SummaryTable table;
    for (std::size_t i = 1; i < cols.size(); i += 2) {
        const std::string suffix = "_mean";
        if (cols[i].size() <= suffix.size() || cols[i].substr(cols[i].size() - suffix.size()) != suffix)
            throw std::invalid_argument("summary_from_csv: malformed header");
        SummarySeries s;
        s.tag = cols[i].substr(0, cols[i].size() - suffix.size());
        table.series.push_back(s);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        if (!std::getline(ls, field, ',')) throw std::invalid_argument("summary_from_csv: short row");
        table.checkpoints.push_back(std::stoll(field));
        for (SummarySeries& s : table.series) {
            if (!std::getline(ls, field, ',')) throw std::invalid_argument("summary_from_csv: short row");
            s.mean.push_back(std::stod(field));
            if (!std::getline(ls, field, ',')) throw std::invalid_argument("summary_from_csv: short row");
            s.stddev.push_back(std::stod(field));
        }
    }
    return table;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

// --- SVG ------------------------------------------------------------------

namespace {

std::string svg_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", x);
    return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

}  // namespace

std::string render_curves(const SummaryTable& table, const PlotStyle& style) {
    if (table.checkpoints.empty() || table.series.empty())
        throw std::invalid_argument("render_curves: empty table");
    const double ml = 70, mr = 20, mt = 40, mb = 50;
    const double pw = style.width - ml - mr, ph = style.height - mt - mb;

    auto xval = [&](std::int64_t step) {
        double v = static_cast<double>(step);
        return style.log_x ? std::log(std::max(v, 1.0)) : v;
    };
    double x_lo = xval(table.checkpoints.front()), x_hi = xval(table.checkpoints.back());
    if (x_hi <= x_lo) x_hi = x_lo + 1.0;
    double y_lo = 0.0, y_hi = 1e-12;
    for (const SummarySeries& s : table.series)
        for (std::size_t i = 0; i < s.mean.size(); ++i) {
            y_hi = std::max(y_hi, s.mean[i] + s.stddev[i]);
            y_lo = std::min(y_lo, s.mean[i] - s.stddev[i]);
        }
    auto px = [&](std::int64_t step) { return ml + (xval(step) - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double y) { return mt + (y_hi - y) / (y_hi - y_lo) * ph; };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\"" << style.height
        << "\" viewBox=\"0 0 " << style.width << ' ' << style.height << "\">\n"
        << "<rect width=\"" << style.width << "\" height=\"" << style.height << "\" fill=\"white\"/>\n";
    if (!style.title.empty())
        out << "<text x=\"" << style.width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << style.title
            << "</text>\n";

    // axes
    out << "<line x1=\"" << svg_num(ml) << "\" y1=\"" << svg_num(mt + ph) << "\" x2=\"" << svg_num(ml + pw)
        << "\" y2=\"" << svg_num(mt + ph) << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << svg_num(ml) << "\" y1=\"" << svg_num(mt) << "\" x2=\"" << svg_num(ml) << "\" y2=\""
        << svg_num(mt + ph) << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double frac = i / 4.0;
        double y = y_lo + frac * (y_hi - y_lo);
        out << "<text x=\"" << svg_num(ml - 8) << "\" y=\"" << svg_num(py(y) + 4)
            << "\" text-anchor=\"end\" font-size=\"11\">" << svg_num(y) << "</text>\n";
        std::int64_t first = table.checkpoints.front(), last = table.checkpoints.back();
        std::int64_t step = style.log_x
                                ? static_cast<std::int64_t>(std::llround(std::exp(x_lo + frac * (x_hi - x_lo))))
                                : first + static_cast<std::int64_t>(std::llround(frac * (last - first)));
        out << "<text x=\"" << svg_num(ml + frac * pw) << "\" y=\"" << svg_num(mt + ph + 18)
            << "\" text-anchor=\"middle\" font-size=\"11\">" << step << "</text>\n";
    }
    out << "<text x=\"" << svg_num(ml + pw / 2) << "\" y=\"" << svg_num(mt + ph + 38)
        << "\" text-anchor=\"middle\" font-size=\"13\">" << style.x_label << "</text>\n"
        << "<text x=\"16\" y=\"" << svg_num(mt + ph / 2) << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
        << svg_num(mt + ph / 2) << ")\">" << style.y_label << "</text>\n";

    for (std::size_t si = 0; si < table.series.size(); ++si) {
        const SummarySeries& s = table.series[si];
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        // +/- 1 std band as a closed polygon
        out << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < table.checkpoints.size(); ++i)
            out << svg_num(px(table.checkpoints[i])) << ',' << svg_num(py(s.mean[i] + s.stddev[i])) << ' ';
        for (std::size_t i = table.checkpoints.size(); i-- > 0;)
            out << svg_num(px(table.checkpoints[i])) << ',' << svg_num(py(s.mean[i] - s.stddev[i])) << ' ';
        out << "\"/>\n";
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < table.checkpoints.size(); ++i)
            out << svg_num(px(table.checkpoints[i])) << ',' << svg_num(py(s.mean[i])) << ' ';
        out << "\"/>\n";
        double ly = mt + 14 + 16 * static_cast<double>(si);
        out << "<line x1=\"" << svg_num(ml + pw - 120) << "\" y1=\"" << svg_num(ly) << "\" x2=\""
            << svg_num(ml + pw - 96) << "\" y2=\"" << svg_num(ly) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << svg_num(ml + pw - 90) << "\" y=\"" << svg_num(ly + 4) << "\" font-size=\"12\">" << s.tag
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

// --- configs ----------------------------------------------------------------

void ExperimentConfig::validate() const {
    static const std::vector<std::string> kSuites = {"bandit", "counterexample", "linmdp", "bounds", "boorl"};
    if (std::find(kSuites.begin(), kSuites.end(), suite) == kSuites.end())
        throw std::invalid_argument("config: unknown suite '" + suite + "'");
    if (seeds.empty() && suite != "bounds") throw std::invalid_argument("config: need at least one seed");
    if (out_dir.empty()) throw std::invalid_argument("config: out_dir is required");
    for (const auto& [key, value] : params)
        if (!std::isfinite(value)) throw std::invalid_argument("config: non-finite parameter " + key);
}

std::string ExperimentConfig::to_json() const {
    json j;
    j["schema_version"] = 1;
    j["suite"] = suite;
    j["seeds"] = seeds;
    j["out_dir"] = out_dir;
    j["params"] = json::object();
    for (const auto& [key, value] : params) j["params"][key] = value;
    j["agents"] = agents;
    return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    json j = json::parse(text);
    if (j.value("schema_version", 0) != 1) throw std::invalid_argument("config: unsupported schema_version");
    ExperimentConfig cfg;
    cfg.suite = j.at("suite").get<std::string>();
    cfg.seeds = j.value("seeds", std::vector<std::uint64_t>{});
    cfg.out_dir = j.value("out_dir", std::string{});
    if (j.contains("params"))
        for (auto it = j["params"].begin(); it != j["params"].end(); ++it)
            cfg.params[it.key()] = it.value().get<double>();
    cfg.agents = j.value("agents", std::vector<std::string>{});
    cfg.validate();
    return cfg;
}

namespace {

std::vector<std::uint64_t> iota_seeds(int n) {
    std::vector<std::uint64_t> s(n);
    for (int i = 0; i < n; ++i) s[i] = static_cast<std::uint64_t>(i + 1);
    return s;
}

}  // namespace

ExperimentConfig ExperimentConfig::preset(const std::string& suite, const std::string& name) {
    ExperimentConfig cfg;
    cfg.suite = suite;
    cfg.out_dir = "out";
    bool smoke = name == "smoke";
    if (suite == "bandit") {
        if (name != "tenarm" && !smoke) throw std::invalid_argument("unknown bandit preset '" + name + "'");
        // 10-arm uniform-prior setup: 1000 uniform offline pulls, long online
        // phase, every agent family.
        cfg.params = {{"n_arms", 10}, {"offline_pulls", smoke ? 50.0 : 1000.0},
                      {"horizon", smoke ? 2000.0 : 100000.0}, {"k", 1.0},
                      {"prior_alpha", 1.0}, {"prior_beta", 1.0}, {"checkpoints", 50}};
        cfg.agents = {"ucb", "lcb", "ts", "soft2", "hard2"};
        cfg.seeds = iota_seeds(smoke ? 3 : 100);
    } else if (suite == "counterexample") {
        if (name != "default" && !smoke) throw std::invalid_argument("unknown counterexample preset '" + name + "'");
        cfg.params = {{"epsilon", 0.04}, {"n", 500}, {"draws", smoke ? 2000.0 : 100000.0}, {"lcb_horizon", 1000},
                      {"lcb_draws", smoke ? 500.0 : 10000.0}, {"k", 1.0}};
        cfg.seeds = {1};
    } else if (suite == "linmdp") {
        if (name != "default" && !smoke) throw std::invalid_argument("unknown linmdp preset '" + name + "'");
        cfg.params = {{"n_states", 4}, {"n_actions", 2}, {"H", 3}, {"episodes", smoke ? 40.0 : 400.0},
                      {"offline_episodes", smoke ? 5.0 : 25.0}, {"c", 0.1}, {"delta", 0.05}, {"lambda", 1.0},
                      {"checkpoints", 40}};
        cfg.agents = {"ucb", "lcb", "ts"};
        cfg.seeds = iota_seeds(smoke ? 3 : 20);
    } else if (suite == "bounds") {
        if (name != "default" && !smoke) throw std::invalid_argument("unknown bounds preset '" + name + "'");
        cfg.params = {{"d", 4}, {"H", 5}, {"C_dagger", 2.0}, {"c", 1.0}, {"delta", 0.05},
                      {"n_points", smoke ? 10.0 : 50.0}, {"n_max", 100000}, {"t_max", 100000}};
    } else if (suite == "boorl") {
        if (name != "default" && !smoke) throw std::invalid_argument("unknown boorl preset '" + name + "'");
        cfg.params = {{"width", 5}, {"height", 5}, {"H", 20}, {"slip", 0.0}, {"eps_behavior", 0.3},
                      {"n_transitions", smoke ? 400.0 : 2000.0}, {"total_steps", smoke ? 1500.0 : 6000.0},
                      {"L", 5}, {"mask_p", 0.9}, {"batch", smoke ? 64.0 : 256.0}};
        cfg.seeds = iota_seeds(smoke ? 2 : 20);
    } else {
        throw std::invalid_argument("unknown suite '" + suite + "'");
    }
    return cfg;
}

// --- suite runner -------------------------------------------------------

namespace {

double param(const ExperimentConfig& cfg, const std::string& key, double fallback) {
    auto it = cfg.params.find(key);
    return it == cfg.params.end() ? fallback : it->second;
}

void write_file(const fs::path& path, const std::string& text, RunManifest& manifest) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    manifest.files.push_back(path.filename().string());
}

BanditAgentSpec bandit_spec(const std::string& tag, double k, double pa, double pb) {
    BanditAgentSpec spec;
    spec.k = k;
    spec.prior_alpha = pa;
    spec.prior_beta = pb;
    if (tag == "ucb") {
        spec.kind = BanditAgentSpec::Kind::ucb;
    } else if (tag == "lcb") {
        spec.kind = BanditAgentSpec::Kind::lcb;
    } else if (tag == "ts") {
        spec.kind = BanditAgentSpec::Kind::ts;
    } else if (tag.rfind("soft", 0) == 0) {
        spec.kind = BanditAgentSpec::Kind::switch_soft;
        spec.switch_param = std::stod(tag.substr(4));
    } else if (tag.rfind("hard", 0) == 0) {
        spec.kind = BanditAgentSpec::Kind::switch_hard;
        spec.switch_param = std::stod(tag.substr(4));
    } else {
        throw std::invalid_argument("unknown bandit agent tag '" + tag + "'");
    }
    return spec;
}

void run_bandit_suite(const ExperimentConfig& cfg, const fs::path& dir, RunManifest& manifest) {
    int n_arms = static_cast<int>(param(cfg, "n_arms", 10));
    auto offline_pulls = static_cast<std::int64_t>(param(cfg, "offline_pulls", 1000));
    auto horizon = static_cast<std::int64_t>(param(cfg, "horizon", 100000));
    double k = param(cfg, "k", 1.0);
    double pa = param(cfg, "prior_alpha", 1.0), pb = param(cfg, "prior_beta", 1.0);
    auto checkpoints = log_checkpoints(horizon, static_cast<int>(param(cfg, "checkpoints", 50)));
    if (cfg.agents.empty()) throw std::invalid_argument("bandit suite: no agents");

    SummaryTable table;
    table.checkpoints = checkpoints;
    for (const std::string& tag : cfg.agents) {
        BanditAgentSpec spec = bandit_spec(tag, k, pa, pb);
        std::vector<RegretTrace> traces;
        for (std::uint64_t seed : cfg.seeds) {
            Rng rng(seed);
            BanditModel bandit = sample_bandit(n_arms, pa, pb, rng);
            PullLog offline = collect_offline_uniform(bandit, offline_pulls, rng);
            RegretTrace tr = run_bandit_experiment(bandit, offline, spec, horizon, rng);
            tr.seed = seed;
            write_file(dir / ("bandit_" + tag + "_seed" + std::to_string(seed) + ".csv"),
                       trace_to_csv(tr, checkpoints), manifest);
            traces.push_back(std::move(tr));
        }
        table.series.push_back(summarize(tag, traces, checkpoints));
    }
    write_file(dir / "bandit_summary.csv", summary_to_csv(table), manifest);
    PlotStyle style;
    style.title = "offline-to-online bandit regret";
    style.log_x = true;
    write_file(dir / "bandit_curves.svg", render_curves(table, style), manifest);
    manifest.summary = table;
}

void run_counterexample_suite(const ExperimentConfig& cfg, const fs::path& dir, RunManifest& manifest) {
    double eps = param(cfg, "epsilon", 0.04);
    auto n = static_cast<std::int64_t>(param(cfg, "n", 500));
    auto draws = static_cast<std::int64_t>(param(cfg, "draws", 100000));
    auto lcb_horizon = static_cast<std::int64_t>(param(cfg, "lcb_horizon", 1000));
    auto lcb_draws = static_cast<std::int64_t>(param(cfg, "lcb_draws", 10000));
    double k = param(cfg, "k", 1.0);
    Rng rng(cfg.seeds.at(0));

    CounterexampleFamily ucb_fam = make_counterexample_ucb(eps, n);
    std::int64_t singletons = 0;
    double subopt_sum = 0.0;
    for (std::int64_t i = 0; i < draws; ++i) {
        BanditModel bandit = ucb_fam.draw(rng);
        PullLog log = collect_offline_weighted(bandit, ucb_fam.behavior_weights, n, rng);
        if (log.counts[1] == 1) ++singletons;
        subopt_sum += bandit.best() - bandit.probs[select_ucb(log, k)];
    }

    CounterexampleFamily lcb_fam = make_counterexample_lcb(eps, n);
    BanditAgentSpec lcb;
    lcb.kind = BanditAgentSpec::Kind::lcb;
    lcb.k = k;
    double lcb_regret = 0.0;
    for (std::int64_t i = 0; i < lcb_draws; ++i) {
        BanditModel bandit = lcb_fam.draw(rng);
        PullLog log = collect_offline_weighted(bandit, lcb_fam.behavior_weights, n, rng);
        lcb_regret += run_bandit_experiment(bandit, log, lcb, lcb_horizon, rng).final_regret();
    }

    json j;
    j["epsilon"] = eps;
    j["n"] = n;
    j["ucb_draws"] = draws;
    j["p_single_pull"] = static_cast<double>(singletons) / static_cast<double>(draws);
    j["ucb_first_pull_suboptimality"] = subopt_sum / static_cast<double>(draws);
    j["lcb_draws"] = lcb_draws;
    j["lcb_horizon"] = lcb_horizon;
    j["lcb_mean_cumulative_regret"] = lcb_regret / static_cast<double>(lcb_draws);
    write_file(dir / "counterexample_summary.json", j.dump(2) + "\n", manifest);
}

LinearMdp random_tabular_mdp(int S, int A, int H, Rng& rng) {
    std::vector<Eigen::MatrixXd> trans(H, Eigen::MatrixXd(S * A, S));
    std::vector<Eigen::MatrixXd> rew(H, Eigen::MatrixXd(S, A));
    for (int h = 0; h < H; ++h) {
        for (int row = 0; row < S * A; ++row) {
            double total = 0.0;
            for (int s2 = 0; s2 < S; ++s2) {
                trans[h](row, s2) = 0.05 + rng.uniform();
                total += trans[h](row, s2);
            }
            trans[h].row(row) /= total;
        }
        for (int s = 0; s < S; ++s)
            for (int a = 0; a < A; ++a) rew[h](s, a) = rng.uniform();
    }
    return make_tabular_linear(S, A, H, trans, rew);
}

EpisodeBuffer offline_from_policy(const LinearMdp& mdp, const Policy& pi, int episodes, double eps, Rng& rng) {
    EpisodeBuffer buf;
    buf.source = BufferSource::offline;
    for (int ep = 0; ep < episodes; ++ep) {
        int s = 0;
        for (int h = 0; h < mdp.H; ++h) {
            int a = rng.uniform() < eps ? static_cast<int>(rng.below(mdp.n_actions)) : pi.action[h][s];
            Eigen::VectorXd row = mdp.transition_matrix(h).row(mdp.sa_index(s, a)).transpose();
            double u = rng.uniform(), acc = 0.0;
            int s2 = mdp.n_states - 1;
            for (int cand = 0; cand < mdp.n_states; ++cand) {
                acc += row(cand);
                if (u < acc) {
                    s2 = cand;
                    break;
                }
            }
            buf.transitions.push_back({h, s, a, mdp.reward_vector(h)(mdp.sa_index(s, a)), s2});
            s = s2;
        }
    }
    return buf;
}

void run_linmdp_suite(const ExperimentConfig& cfg, const fs::path& dir, RunManifest& manifest) {
    int S = static_cast<int>(param(cfg, "n_states", 4));
    int A = static_cast<int>(param(cfg, "n_actions", 2));
    int H = static_cast<int>(param(cfg, "H", 3));
    int episodes = static_cast<int>(param(cfg, "episodes", 400));
    int offline_eps = static_cast<int>(param(cfg, "offline_episodes", 25));
    auto checkpoints = log_checkpoints(episodes, static_cast<int>(param(cfg, "checkpoints", 40)));
    if (cfg.agents.empty()) throw std::invalid_argument("linmdp suite: no agents");

    SummaryTable table;
    table.checkpoints = checkpoints;
    for (const std::string& tag : cfg.agents) {
        AgentConfig ac;
        ac.c = param(cfg, "c", 0.1);
        ac.delta = param(cfg, "delta", 0.05);
        ac.lambda = param(cfg, "lambda", 1.0);
        if (tag == "ucb")
            ac.mode = AgentMode::ucb;
        else if (tag == "lcb")
            ac.mode = AgentMode::lcb;
        else if (tag == "ts")
            ac.mode = AgentMode::ts;
        else
            throw std::invalid_argument("unknown linmdp agent tag '" + tag + "'");

        std::vector<RegretTrace> traces;
        for (std::uint64_t seed : cfg.seeds) {
            Rng rng(seed);
            LinearMdp mdp = random_tabular_mdp(S, A, H, rng);
            DpResult opt = solve_optimal(mdp);
            EpisodeBuffer offline = offline_from_policy(mdp, opt.greedy, offline_eps, 0.3, rng);
            LsviAgent agent(mdp, ac, episodes);
            agent.load_offline(offline);
            RegretTrace tr;
            tr.agent_tag = tag;
            tr.seed = seed;
            for (int ep = 0; ep < episodes; ++ep) {
                EpisodeResult res = agent.run_episode(rng);
                tr.instantaneous.push_back(res.regret);
                tr.cumulative.push_back((tr.cumulative.empty() ? 0.0 : tr.cumulative.back()) + res.regret);
            }
            write_file(dir / ("linmdp_" + tag + "_seed" + std::to_string(seed) + ".csv"),
                       trace_to_csv(tr, checkpoints), manifest);
            traces.push_back(std::move(tr));
        }
        table.series.push_back(summarize(tag, traces, checkpoints));
    }
    write_file(dir / "linmdp_summary.csv", summary_to_csv(table), manifest);
    PlotStyle style;
    style.title = "linear MDP episodic regret";
    style.x_label = "episode";
    write_file(dir / "linmdp_curves.svg", render_curves(table, style), manifest);
    manifest.summary = table;
}

void run_bounds_suite(const ExperimentConfig& cfg, const fs::path& dir, RunManifest& manifest) {
    BoundInputs base;
    base.d = static_cast<int>(param(cfg, "d", 4));
    base.H = static_cast<int>(param(cfg, "H", 5));
    base.C_dagger = param(cfg, "C_dagger", 2.0);
    base.c = param(cfg, "c", 1.0);
    base.delta = param(cfg, "delta", 0.05);
    int n_points = static_cast<int>(param(cfg, "n_points", 50));
    double n_max = param(cfg, "n_max", 100000), t_max = param(cfg, "t_max", 100000);
    std::vector<double> n_grid, t_grid;
    for (int i = 0; i < n_points; ++i) {
        n_grid.push_back(std::pow(n_max, static_cast<double>(i + 1) / n_points));
        t_grid.push_back(std::pow(t_max, static_cast<double>(i + 1) / n_points));
    }
    std::ostringstream out;
    out << "N,T,bound\n";
    for (const BoundRow& row : bound_curve(base, n_grid, t_grid))
        out << format_double(row.N) << ',' << format_double(row.T) << ',' << format_double(row.bound) << '\n';
    write_file(dir / "bound_curve.csv", out.str(), manifest);
}

void run_boorl_suite(const ExperimentConfig& cfg, const fs::path& dir, RunManifest& manifest) {
    Gridworld env = Gridworld::open_room(static_cast<int>(param(cfg, "width", 5)),
                                         static_cast<int>(param(cfg, "height", 5)),
                                         static_cast<int>(param(cfg, "H", 20)), param(cfg, "slip", 0.0));
    Rng data_rng(cfg.seeds.at(0) ^ 0x5EEDULL);
    Dataset offline = collect_gridworld_dataset(env, param(cfg, "eps_behavior", 0.3),
                                                static_cast<int>(param(cfg, "n_transitions", 2000)), data_rng);
    write_file(dir / "boorl_dataset.csv", dataset_to_csv(offline), manifest);

    BoorlConfig bc;
    bc.L = static_cast<int>(param(cfg, "L", 5));
    bc.mask_p = param(cfg, "mask_p", 0.9);
    bc.batch = static_cast<int>(param(cfg, "batch", 256));
    bc.total_steps = static_cast<std::int64_t>(param(cfg, "total_steps", 6000));

    std::vector<BoorlVariant> variants = {BoorlVariant::full, BoorlVariant::ensemble1, BoorlVariant::uniform_buffer,
                                          BoorlVariant::optimistic, BoorlVariant::pessimistic};
    std::vector<AblationRow> rows = ablate(env, offline, variants, cfg.seeds, bc);
    std::ostringstream out;
    out << "variant,early_regret_mean,early_regret_std,final_return_mean,final_return_std\n";
    for (const AblationRow& row : rows)
        out << row.variant << ',' << format_double(row.early_regret_mean) << ',' << format_double(row.early_regret_std)
            << ',' << format_double(row.final_return_mean) << ',' << format_double(row.final_return_std) << '\n';
    write_file(dir / "boorl_ablation.csv", out.str(), manifest);

    // Per-episode record stream for the full variant, first seed.
    Rng rng(cfg.seeds.at(0));
    BoorlResult res = run_boorl(env, offline, bc, BoorlVariant::full, rng);
    std::ostringstream jl;
    for (std::size_t ep = 0; ep < res.episode_returns.size(); ++ep) {
        json j;
        j["episode"] = ep;
        j["return"] = res.episode_returns[ep];
        j["regret"] = res.episode_regret[ep];
        jl << j.dump() << '\n';
    }
    write_file(dir / "boorl_episodes.jsonl", jl.str(), manifest);
}

}  // namespace

std::string RunManifest::to_json() const {
    json j;
    j["config_hash"] = config_hash;
    j["version"] = version;
    j["files"] = files;
    j["wall_clock_seconds"] = wall_clock_seconds;
    json summary_json = json::object();
    if (!summary.checkpoints.empty()) {
        summary_json["checkpoints"] = summary.checkpoints;
        summary_json["series"] = json::array();
        for (const SummarySeries& s : summary.series)
            summary_json["series"].push_back({{"tag", s.tag}, {"mean", s.mean}, {"std", s.stddev}});
    }
    j["summary"] = summary_json;
    return j.dump(2);
}

RunManifest run_suite(const ExperimentConfig& config) {
    config.validate();
    auto t0 = std::chrono::steady_clock::now();
    fs::path dir(config.out_dir);
    fs::create_directories(dir);

    RunManifest manifest;
    manifest.version = "1.0.0";
    char hash_buf[20];
    std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(config.to_json())));
    manifest.config_hash = hash_buf;

    if (config.suite == "bandit")
        run_bandit_suite(config, dir, manifest);
    else if (config.suite == "counterexample")
        run_counterexample_suite(config, dir, manifest);
    else if (config.suite == "linmdp")
        run_linmdp_suite(config, dir, manifest);
    else if (config.suite == "bounds")
        run_bounds_suite(config, dir, manifest);
    else if (config.suite == "boorl")
        run_boorl_suite(config, dir, manifest);

    {
        std::ofstream cfg_out(dir / "config.json", std::ios::binary);
        cfg_out << config.to_json() << '\n';
        manifest.files.push_back("config.json");
    }
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ofstream man_out(dir / "manifest.json", std::ios::binary);
    man_out << manifest.to_json() << '\n';
    return manifest;
}

}  // namespace otolab
