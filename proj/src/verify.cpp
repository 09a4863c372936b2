#include "otolab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "otolab/bandit.hpp"
#include "otolab/boorl.hpp"
#include "otolab/bounds.hpp"
#include "otolab/harness.hpp"
#include "otolab/lsvi.hpp"

namespace otolab {

namespace fs = std::filesystem;

namespace {

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;
    double se = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd out;
    out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    double var = 0.0;
    for (double x : xs) var += (x - out.mean) * (x - out.mean);
    var = xs.size() > 1 ? var / (xs.size() - 1) : 0.0;
    out.stddev = std::sqrt(var);
    out.se = out.stddev / std::sqrt(static_cast<double>(xs.size()));
    return out;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

// --- 1: optimism fails on the two-arm construction ----------------------

CriterionResult criterion1() {
    CriterionResult res{1, "two-arm construction: UCB first pull is suboptimal in expectation"};
    const double eps = 0.04;
    const std::int64_t n = 500, draws = 100000;
    CounterexampleFamily fam = make_counterexample_ucb(eps, n);
    Rng rng(11);
    std::int64_t singletons = 0;
    std::vector<double> subopt;
    subopt.reserve(draws);
    for (std::int64_t i = 0; i < draws; ++i) {
        BanditModel bandit = fam.draw(rng);
        PullLog log = collect_offline_weighted(bandit, fam.behavior_weights, n, rng);
        if (log.counts[1] == 1) ++singletons;
        subopt.push_back(bandit.best() - bandit.probs[select_ucb(log, 1.0)]);
    }
    double p_single = static_cast<double>(singletons) / static_cast<double>(draws);
    MeanStd ms = mean_std(subopt);
    res.pass = p_single >= 0.36 && ms.mean >= 0.1 * eps - 3 * ms.se;
    res.detail = "P(single pull)=" + fmt(p_single) + " (need >=0.36), E[subopt]=" + fmt(ms.mean) +
                 " (need >=" + fmt(0.1 * eps - 3 * ms.se) + ")";
    return res;
}

// --- 2: pessimism accrues linear regret on its construction -------------

CriterionResult criterion2() {
    CriterionResult res{2, "two-arm construction: LCB accrues linear regret over 1000 steps"};
    const double eps = 0.04;
    const std::int64_t n = 500, horizon = 1000, draws = 10000;
    CounterexampleFamily fam = make_counterexample_lcb(eps, n);
    BanditAgentSpec lcb;
    lcb.kind = BanditAgentSpec::Kind::lcb;
    lcb.k = 1.0;
    Rng rng(12);
    std::vector<double> finals;
    finals.reserve(draws);
    for (std::int64_t i = 0; i < draws; ++i) {
        BanditModel bandit = fam.draw(rng);
        PullLog log = collect_offline_weighted(bandit, fam.behavior_weights, n, rng);
        finals.push_back(run_bandit_experiment(bandit, log, lcb, horizon, rng).final_regret());
    }
    MeanStd ms = mean_std(finals);
    double need = 0.1 * eps * static_cast<double>(horizon) - 3 * ms.se;
    res.pass = ms.mean >= need;
    res.detail = "E[cumulative regret]=" + fmt(ms.mean) + " (need >=" + fmt(need) + ")";
    return res;
}

// --- shared runs for criteria 3 and 4 ------------------------------------

struct TenArmRuns {
    // per-seed cumulative regret at t = 1e3, 5e4, 1e5 per agent tag
    std::map<std::string, std::vector<double>> at_1e3, at_half, at_end;
};

const TenArmRuns& ten_arm_runs() {
    static const TenArmRuns runs = [] {
        TenArmRuns out;
        const int n_arms = 10;
        const std::int64_t offline_pulls = 1000, horizon = 100000;
        const int n_seeds = 100;
        std::vector<BanditAgentSpec> specs;
        std::vector<std::string> tags;
        auto add = [&](BanditAgentSpec::Kind kind, double sw, const std::string& tag) {
            BanditAgentSpec s;
            s.kind = kind;
            s.k = 1.0;
            s.switch_param = sw;
            specs.push_back(s);
            tags.push_back(tag);
        };
        add(BanditAgentSpec::Kind::ucb, 2.0, "ucb");
        add(BanditAgentSpec::Kind::lcb, 2.0, "lcb");
        add(BanditAgentSpec::Kind::ts, 2.0, "ts");
        add(BanditAgentSpec::Kind::switch_soft, 1.5, "soft1.5");
        add(BanditAgentSpec::Kind::switch_soft, 2.0, "soft2");
        add(BanditAgentSpec::Kind::switch_soft, 4.0, "soft4");
        add(BanditAgentSpec::Kind::switch_hard, 2.0, "hard2");
        add(BanditAgentSpec::Kind::switch_hard, 4.0, "hard4");

        for (int seed = 1; seed <= n_seeds; ++seed) {
            Rng env_rng(seed);
            BanditModel bandit = sample_bandit(n_arms, 1.0, 1.0, env_rng);
            PullLog offline = collect_offline_uniform(bandit, offline_pulls, env_rng);
            for (std::size_t i = 0; i < specs.size(); ++i) {
                Rng rng = env_rng.fork(1000 + i);
                RegretTrace tr = run_bandit_experiment(bandit, offline, specs[i], horizon, rng);
                out.at_1e3[tags[i]].push_back(tr.cumulative[1000 - 1]);
                out.at_half[tags[i]].push_back(tr.cumulative[horizon / 2 - 1]);
                out.at_end[tags[i]].push_back(tr.cumulative[horizon - 1]);
            }
        }
        return out;
    }();
    return runs;
}

// --- 3: the pessimism-optimism dilemma, and probability matching --------

CriterionResult criterion3() {
    CriterionResult res{3, "ten-arm runs: TS tracks LCB early, UCB late, and stays sublinear"};
    const TenArmRuns& runs = ten_arm_runs();
    double ts_1e3 = mean_std(runs.at_1e3.at("ts")).mean;
    double lcb_1e3 = mean_std(runs.at_1e3.at("lcb")).mean;
    double ts_end = mean_std(runs.at_end.at("ts")).mean;
    double ucb_end = mean_std(runs.at_end.at("ucb")).mean;
    double ts_half = mean_std(runs.at_half.at("ts")).mean;
    double lcb_half = mean_std(runs.at_half.at("lcb")).mean;
    double lcb_end = mean_std(runs.at_end.at("lcb")).mean;
    double ts_slope = (ts_end - ts_half) / 50000.0;
    double lcb_slope = (lcb_end - lcb_half) / 50000.0;
    bool a = ts_1e3 <= 1.5 * lcb_1e3;
    bool b = ts_end <= 1.5 * ucb_end;
    bool c = lcb_slope >= 5.0 * ts_slope;
    res.pass = a && b && c;
    res.detail = "TS@1e3=" + fmt(ts_1e3) + " vs 1.5*LCB=" + fmt(1.5 * lcb_1e3) + "; TS@1e5=" + fmt(ts_end) +
                 " vs 1.5*UCB=" + fmt(1.5 * ucb_end) + "; slopes lcb=" + fmt(lcb_slope) + " ts=" + fmt(ts_slope);
    return res;
}

// --- 4: confidence-weight switching underperforms TS ----------------------

CriterionResult criterion4() {
    CriterionResult res{4, "ten-arm runs: every switching schedule ends above TS"};
    const TenArmRuns& runs = ten_arm_runs();
    const std::vector<double>& ts = runs.at_end.at("ts");
    res.pass = true;
    std::ostringstream detail;
    for (const std::string& tag : {"soft1.5", "soft2", "soft4", "hard2", "hard4"}) {
        const std::vector<double>& sw = runs.at_end.at(tag);
        std::vector<double> diff(sw.size());
        for (std::size_t i = 0; i < sw.size(); ++i) diff[i] = sw[i] - ts[i];
        MeanStd ms = mean_std(diff);
        bool ok = ms.mean - 1.645 * ms.se >= 0.0;
        res.pass = res.pass && ok;
        detail << tag << ": diff=" << fmt(ms.mean) << "+-" << fmt(ms.se) << (ok ? " ok; " : " FAIL; ");
    }
    res.detail = detail.str();
    return res;
}

// --- 5: information gain telescopes into a determinant ratio -------------

// Extended-precision log det via Cholesky; the oracle must resolve log-det
// differences far below the double round-off of the matrices' magnitudes.
long double logdet_ld(const std::vector<std::vector<long double>>& m) {
    int d = static_cast<int>(m.size());
    std::vector<std::vector<long double>> l(d, std::vector<long double>(d, 0.0L));
    long double out = 0.0L;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j <= i; ++j) {
            long double acc = m[i][j];
            for (int k = 0; k < j; ++k) acc -= l[i][k] * l[j][k];
            if (i == j) {
                l[i][i] = std::sqrt(acc);
                out += 2.0L * std::log(l[i][i]);
            } else {
                l[i][j] = acc / l[j][j];
            }
        }
    }
    return out;
}

CriterionResult criterion5() {
    CriterionResult res{5, "info gain matches the determinant-lemma and telescoping identities"};
    Rng rng(15);
    double worst_chain = 0.0, worst_step = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        int d = 1 + static_cast<int>(rng.below(10));
        int len = 1 + static_cast<int>(rng.below(500));
        Eigen::MatrixXd lambda = Eigen::MatrixXd::Identity(d, d) * (0.5 + rng.uniform());
        std::vector<std::vector<long double>> lambda_ld(d, std::vector<long double>(d, 0.0L));
        for (int i = 0; i < d; ++i) lambda_ld[i][i] = lambda(i, i);
        long double log_det_init = logdet_ld(lambda_ld);
        long double log_det_prev = log_det_init;
        double gain_sum = 0.0;
        for (int i = 0; i < len; ++i) {
            Eigen::VectorXd phi(d);
            for (int j = 0; j < d; ++j) phi(j) = 2.0 * rng.uniform() - 1.0;
            if (phi.norm() > 1.0) phi /= phi.norm();
            double gain = info_gain(phi, lambda);
            gain_sum += gain;
            lambda += phi * phi.transpose();
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c)
                    lambda_ld[r][c] += static_cast<long double>(phi(r)) * static_cast<long double>(phi(c));
            long double log_det_next = logdet_ld(lambda_ld);
            auto det_form = static_cast<double>(0.5L * (log_det_next - log_det_prev));
            worst_step = std::max(worst_step, std::abs(gain - det_form) / std::max(std::abs(det_form), 1e-300));
            log_det_prev = log_det_next;
        }
        auto chain = static_cast<double>(0.5L * (log_det_prev - log_det_init));
        worst_chain = std::max(worst_chain, std::abs(gain_sum - chain) / std::max(std::abs(chain), 1e-300));
    }
    res.pass = worst_chain <= 1e-9 && worst_step <= 1e-9;
    res.detail = "worst chain rel err=" + fmt(worst_chain) + ", worst per-step rel err=" + fmt(worst_step);
    return res;
}

// --- 6: per-episode regret bound holds empirically -----------------------

CriterionResult criterion6(const std::string& scratch_dir) {
    CriterionResult res{6, "TS episodic regret stays under the info-gain bound"};
    const int n_mdps = 5, episodes_per_mdp = 100, n_replays = 200;
    const double delta = 0.05;
    Rng master(16);
    std::vector<EpisodeRecord> records;
    int H_used = 2;
    for (int m = 0; m < n_mdps; ++m) {
        Rng rng = master.fork(m);
        const int S = 3, A = 2, H = 2;
        std::vector<Eigen::MatrixXd> trans(H, Eigen::MatrixXd(S * A, S));
        std::vector<Eigen::MatrixXd> rew(H, Eigen::MatrixXd(S, A));
        for (int h = 0; h < H; ++h) {
            for (int row = 0; row < S * A; ++row) {
                double tot = 0.0;
                for (int s2 = 0; s2 < S; ++s2) {
                    trans[h](row, s2) = 0.05 + rng.uniform();
                    tot += trans[h](row, s2);
                }
                trans[h].row(row) /= tot;
            }
            for (int s = 0; s < S; ++s)
                for (int a = 0; a < A; ++a) rew[h](s, a) = rng.uniform();
        }
        LinearMdp mdp = make_tabular_linear(S, A, H, trans, rew);
        DpResult opt = solve_optimal(mdp);
        std::vector<Eigen::VectorXd> d_star = visitation(mdp, opt.greedy, 0);
        H_used = H;

        AgentConfig cfg;
        cfg.mode = AgentMode::ts;
        LsviAgent agent(mdp, cfg, episodes_per_mdp);
        for (int ep = 0; ep < episodes_per_mdp; ++ep) {
            agent.refit(rng);
            const GaussianPosterior& post = agent.posterior();
            double gamma_k = estimate_info_ratio(mdp, post, 300, delta, rng).gamma_hat;

            double regret_acc = 0.0, info_acc = 0.0;
            for (int rep = 0; rep < n_replays; ++rep) {
                Policy pi = agent.sample_ts_policy(rng);
                regret_acc += opt.v[0](0) - evaluate_policy(mdp, pi).v[0](0);
                int s = 0;
                for (int h = 0; h < H; ++h) {
                    int a = pi.action[h][s];
                    info_acc += std::sqrt(info_gain(mdp.phi(s, a), post.slices[h].precision));
                    Eigen::VectorXd row = mdp.transition_matrix(h).row(mdp.sa_index(s, a)).transpose();
                    double u = rng.uniform(), acc = 0.0;
                    int s2 = S - 1;
                    for (int cand = 0; cand < S; ++cand) {
                        acc += row(cand);
                        if (u < acc) {
                            s2 = cand;
                            break;
                        }
                    }
                    s = s2;
                }
            }
            // expected info along the true optimal policy's visitation
            double info_opt = 0.0;
            for (int h = 0; h < H; ++h)
                for (int i = 0; i < S * A; ++i)
                    if (d_star[h](i) > 0.0)
                        info_opt += d_star[h](i) *
                                    std::sqrt(info_gain(mdp.features.row(i).transpose(), post.slices[h].precision));

            EpisodeRecord rec;
            rec.regret = regret_acc / n_replays;
            rec.sum_sqrt_info = info_acc / n_replays;
            rec.sum_sqrt_info_opt = info_opt;
            rec.gamma = gamma_k;
            records.push_back(rec);
            agent.run_episode(rng);
        }
    }
    RegretBoundReport report = check_regret_bound(records, 0.0, delta, H_used);
    fs::create_directories(scratch_dir);
    std::ofstream(fs::path(scratch_dir) / "bound_records.jsonl", std::ios::binary)
        << bound_records_jsonl(records, report);
    res.pass = report.violation_fraction <= 0.05;
    res.detail = "violation fraction=" + fmt(report.violation_fraction) + " over " +
                 std::to_string(records.size()) + " episodes";
    return res;
}

// --- 7: bound shape and limiting forms -----------------------------------

CriterionResult criterion7() {
    CriterionResult res{7, "regret bound is concave increasing in T, decreasing in N, with correct limits"};
    BoundInputs base;
    base.d = 4;
    base.H = 5;
    base.C_dagger = 2.0;
    base.c = 1.0;
    base.delta = 0.05;
    const int n = 50;
    const double step_n = 40.0, step_t = 40.0;
    // iota's T is the run's total online budget, constant along a curve
    base.T = step_t * n;
    base.iota_override = base.iota();
    bool ok = true;
    std::string why;
    auto eval = [&](double N, double T) {
        BoundInputs in = base;
        in.N = N;
        in.T = T;
        return bound_eval(in);
    };
    for (int i = 0; i < n && ok; ++i) {
        double N = step_n * (i + 1);
        double prev_diff = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n && ok; ++j) {
            double T = step_t * (j + 1);
            double b = eval(N, T);
            // increasing and concave in T (first differences positive, decreasing)
            if (j > 0) {
                double diff = b - eval(N, T - step_t);
                if (diff <= 0.0) { ok = false; why = "not increasing in T"; }
                if (diff > prev_diff + 1e-12) { ok = false; why = "not concave in T"; }
                prev_diff = diff;
            }
            // decreasing in N
            if (i > 0 && eval(N - step_n, T) < b - 1e-12) { ok = false; why = "not decreasing in N"; }
            // online-only limit: bound at N = 0 under the pure-online form
            BoundInputs online = base;
            online.N = 0.0;
            online.T = T;
            double cap = 2.0 * base.c * std::sqrt(std::pow(base.d, 3) * std::pow(base.H, 3) * T * online.iota());
            if (bound_eval(online) > cap + 1e-12) { ok = false; why = "online-only limit violated"; }
            // one-step limit vs the pure-offline rate
            BoundInputs one = base;
            one.N = N;
            one.T = 1.0;
            double offline_rate = base.c * std::sqrt(std::pow(base.d, 3) * std::pow(base.H, 3) * one.iota()) /
                                  (2.0 * std::sqrt(N / base.C_dagger));
            if (bound_eval(one) > offline_rate + 1e-12) { ok = false; why = "one-step limit violated"; }
        }
    }
    res.pass = ok;
    res.detail = ok ? "all grid checks hold on the 50x50 grid" : why;
    return res;
}

// --- 8: coverage coefficient matches the direct ratio oracle -------------

CriterionResult criterion8() {
    CriterionResult res{8, "coverage coefficient equals the visitation-ratio oracle"};
    Rng master(18);
    double worst_rel = 0.0, worst_self = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        Rng rng = master.fork(trial);
        int S = 2 + static_cast<int>(rng.below(3));
        int A = 2;
        int H = 2 + static_cast<int>(rng.below(2));
        std::vector<Eigen::MatrixXd> trans(H, Eigen::MatrixXd(S * A, S));
        std::vector<Eigen::MatrixXd> rew(H, Eigen::MatrixXd(S, A));
        for (int h = 0; h < H; ++h) {
            for (int row = 0; row < S * A; ++row) {
                double tot = 0.0;
                for (int s2 = 0; s2 < S; ++s2) {
                    trans[h](row, s2) = 0.05 + rng.uniform();
                    tot += trans[h](row, s2);
                }
                trans[h].row(row) /= tot;
            }
            for (int s = 0; s < S; ++s)
                for (int a = 0; a < A; ++a) rew[h](s, a) = rng.uniform();
        }
        LinearMdp mdp = make_tabular_linear(S, A, H, trans, rew);
        auto sampler = [&mdp](Rng&) { return mdp; };

        // Behavior occupancy of the uniform policy.
        std::vector<Eigen::VectorXd> rho(H, Eigen::VectorXd::Zero(S * A));
        Eigen::VectorXd d_state = Eigen::VectorXd::Zero(S);
        d_state(0) = 1.0;
        for (int h = 0; h < H; ++h) {
            for (int s = 0; s < S; ++s)
                for (int a = 0; a < A; ++a) rho[h](mdp.sa_index(s, a)) = d_state(s) / A;
            Eigen::VectorXd next = Eigen::VectorXd::Zero(S);
            for (int s = 0; s < S; ++s)
                for (int a = 0; a < A; ++a)
                    next += rho[h](mdp.sa_index(s, a)) * mdp.transition_matrix(h).row(mdp.sa_index(s, a)).transpose();
            d_state = next;
        }
        std::vector<Eigen::MatrixXd> sigma_rho = feature_covariance(mdp, rho);

        DpResult opt = solve_optimal(mdp);
        std::vector<Eigen::VectorXd> d_star = visitation(mdp, opt.greedy, 0);
        double oracle = 0.0;
        for (int h = 0; h < H; ++h)
            for (int i = 0; i < S * A; ++i)
                if (d_star[h](i) > 1e-15) oracle = std::max(oracle, d_star[h](i) / rho[h](i));

        CoverageResult cov = coverage_coefficient(mdp, sigma_rho, sampler, 1, rng, 0);
        worst_rel = std::max(worst_rel, std::abs(cov.value - oracle) / std::max(oracle, 1e-300));

        // rho = d^{pi*} gives coverage exactly 1
        std::vector<Eigen::MatrixXd> sigma_star = feature_covariance(mdp, d_star);
        CoverageResult self = coverage_coefficient(mdp, sigma_star, sampler, 1, rng, 0);
        worst_self = std::max(worst_self, std::abs(self.value - 1.0));
    }
    res.pass = worst_rel <= 1e-8 && worst_self <= 1e-10;
    res.detail = "worst rel err vs oracle=" + fmt(worst_rel) + ", worst |self-coverage - 1|=" + fmt(worst_self);
    return res;
}

// --- 9: warm-started ensemble beats both pure strategies ------------------

CriterionResult criterion9() {
    CriterionResult res{9, "ensemble agent: early regret under pure optimism, final return over pure pessimism"};
    Gridworld env = Gridworld::open_room(5, 5, 20, 0.0);
    Rng data_rng(19);
    Dataset offline = collect_gridworld_dataset(env, 0.3, 2000, data_rng);

    BoorlConfig cfg;
    cfg.total_steps = 6000;
    std::vector<double> d_early, d_final;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng r1(seed), r2(seed), r3(seed);
        BoorlResult full = run_boorl(env, offline, cfg, BoorlVariant::full, r1);
        BoorlResult optimistic = run_boorl(env, offline, cfg, BoorlVariant::optimistic, r2);
        BoorlResult pessimistic = run_boorl(env, offline, cfg, BoorlVariant::pessimistic, r3);
        d_early.push_back(optimistic.early_regret() - full.early_regret());
        d_final.push_back(full.eval_return - pessimistic.eval_return);
    }
    MeanStd early = mean_std(d_early);
    MeanStd fin = mean_std(d_final);
    bool early_ok = early.mean - 1.645 * early.se >= 0.0;
    bool final_ok = fin.mean - 1.645 * fin.se >= 0.0;
    res.pass = early_ok && final_ok;
    res.detail = "early regret margin=" + fmt(early.mean) + "+-" + fmt(early.se) +
                 ", final return margin=" + fmt(fin.mean) + "+-" + fmt(fin.se);
    return res;
}

// --- 10: ensemble mechanics ------------------------------------------------

CriterionResult criterion10() {
    CriterionResult res{10, "ensemble mechanics: softmax, masks, batch mix, determinism"};
    bool ok = true;
    std::string why;
    Gridworld env = Gridworld::open_room(4, 4, 12, 0.0);
    Rng rng(20);
    Dataset offline = collect_gridworld_dataset(env, 0.3, 600, rng);

    // softmax normalization + shift invariance
    {
        MaskedDataset masked = build_masked_dataset(offline, 3, 1.0, rng);
        BoorlConfig cfg;
        std::vector<EnsembleMember> members;
        for (int l = 0; l < 3; ++l) members.push_back(offline_train_member(masked, l, env, cfg));
        std::vector<double> p = softmax_probs(members, env.start, 1.0);
        double total = std::accumulate(p.begin(), p.end(), 0.0);
        if (std::abs(total - 1.0) > 1e-12) { ok = false; why = "softmax not normalized"; }
        std::vector<EnsembleMember> shifted = members;
        for (EnsembleMember& m : shifted) m.q.array() += 7.25;
        std::vector<double> p2 = softmax_probs(shifted, env.start, 1.0);
        for (std::size_t i = 0; i < p.size(); ++i)
            if (std::abs(p[i] - p2[i]) > 1e-12) { ok = false; why = "softmax not shift invariant"; }
    }

    // mask mean within 3 sigma of p
    {
        Rng mr(21);
        MaskedDataset masked = build_masked_dataset(offline, 5, 0.9, mr);
        std::int64_t ones = 0, n = 0;
        for (const auto& row : masked.masks)
            for (std::uint8_t m : row) {
                ones += m;
                ++n;
            }
        double mean = static_cast<double>(ones) / n;
        double sigma = std::sqrt(0.9 * 0.1 / n);
        if (std::abs(mean - 0.9) > 3 * sigma) { ok = false; why = "mask mean off"; }
    }

    // exact 50/50 batch composition once the online buffer is large enough
    {
        ReplayMixer mixer;
        mixer.offline = &offline;
        // sentinel reward -1 never occurs in environment data
        for (int i = 0; i < 200; ++i) mixer.online.push_back({0, 0, -1.0, 0, false});
        Rng br(22);
        std::vector<GwTransition> batch = mixer.sample_batch(64, br);
        int online_count = 0;
        for (const GwTransition& t : batch) online_count += t.r == -1.0;
        if (static_cast<int>(batch.size()) != 64 || online_count != 32) { ok = false; why = "batch not 50/50"; }
    }

    // L = 1 determinism and full-run bit-determinism
    {
        BoorlConfig cfg;
        cfg.total_steps = 800;
        cfg.batch = 32;
        Rng a1(23), a2(23);
        BoorlResult r1 = run_boorl(env, offline, cfg, BoorlVariant::ensemble1, a1);
        BoorlResult r2 = run_boorl(env, offline, cfg, BoorlVariant::ensemble1, a2);
        if (r1.episode_returns != r2.episode_returns) { ok = false; why = "L=1 run not deterministic"; }
        Rng b1(24), b2(24);
        BoorlResult f1 = run_boorl(env, offline, cfg, BoorlVariant::full, b1);
        BoorlResult f2 = run_boorl(env, offline, cfg, BoorlVariant::full, b2);
        if (f1.episode_returns != f2.episode_returns || f1.regret.cumulative != f2.regret.cumulative ||
            f1.eval_return != f2.eval_return) {
            ok = false;
            why = "full run not bit-deterministic";
        }
    }

    res.pass = ok;
    res.detail = ok ? "softmax, mask, batch and determinism checks hold" : why;
    return res;
}

// --- 11: byte-identical artifacts across repeated runs --------------------

CriterionResult criterion11(const std::string& scratch_dir) {
    CriterionResult res{11, "every suite preset writes byte-identical CSV/SVG artifacts twice"};
    bool ok = true;
    std::string why;
    for (const std::string& suite : {"bandit", "counterexample", "linmdp", "bounds", "boorl"}) {
        ExperimentConfig cfg = ExperimentConfig::preset(suite, "smoke");
        fs::path a = fs::path(scratch_dir) / (suite + "_a");
        fs::path b = fs::path(scratch_dir) / (suite + "_b");
        for (const fs::path& dir : {a, b}) {
            fs::remove_all(dir);
            ExperimentConfig run = cfg;
            run.out_dir = dir.string();
            run_suite(run);
        }
        for (const auto& entry : fs::directory_iterator(a)) {
            std::string name = entry.path().filename().string();
            if (name == "manifest.json" || name == "config.json") continue;  // carry wall clock / out_dir
            std::ifstream fa(entry.path(), std::ios::binary), fb(b / name, std::ios::binary);
            std::stringstream sa, sb;
            sa << fa.rdbuf();
            sb << fb.rdbuf();
            if (!fb || sa.str() != sb.str() || sa.str().empty()) {
                ok = false;
                why = suite + "/" + name + " differs between runs";
            }
        }
    }
    res.pass = ok;
    res.detail = ok ? "all suite artifacts reproduced byte-for-byte" : why;
    return res;
}

}  // namespace

std::vector<int> all_criterion_ids() { return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}; }

std::vector<CriterionResult> run_criteria(const std::vector<int>& ids, const std::string& scratch_dir) {
    std::vector<CriterionResult> out;
    for (int id : ids) {
        auto t0 = std::chrono::steady_clock::now();
        CriterionResult res;
        switch (id) {
            case 1: res = criterion1(); break;
            case 2: res = criterion2(); break;
            case 3: res = criterion3(); break;
            case 4: res = criterion4(); break;
            case 5: res = criterion5(); break;
            case 6: res = criterion6(scratch_dir); break;
            case 7: res = criterion7(); break;
            case 8: res = criterion8(); break;
            case 9: res = criterion9(); break;
            case 10: res = criterion10(); break;
            case 11: res = criterion11(scratch_dir); break;
            default: throw std::invalid_argument("unknown criterion id " + std::to_string(id));
        }
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(res));
    }
    return out;
}

}  // namespace otolab
