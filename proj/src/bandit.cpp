#include "otolab/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace otolab {

double BanditModel::best() const { return *std::max_element(probs.begin(), probs.end()); }

double BanditModel::pull(int arm, Rng& rng) const {
    if (arm < 0 || arm >= n_arms()) throw std::out_of_range("BanditModel::pull: bad arm index");
    if (deterministic) return probs[arm];
    return rng.uniform() < probs[arm] ? 1.0 : 0.0;
}

double SwitchSchedule::weight(std::int64_t t) const {
    if (kind == SwitchKind::soft) {
        double w = param * static_cast<double>(t) / static_cast<double>(horizon) - 1.0;
        return std::min(w, 1.0);
    }
    return t >= static_cast<double>(horizon) / param ? 1.0 : -1.0;
}

std::string BanditAgentSpec::tag() const {
    switch (kind) {
        case Kind::ucb: return "ucb";
        case Kind::lcb: return "lcb";
        case Kind::ts: return "ts";
        case Kind::switch_soft: return "soft" + std::to_string(switch_param);
        case Kind::switch_hard: return "hard" + std::to_string(switch_param);
    }
    return "?";
}

double sample_beta(double alpha, double beta, Rng& rng) {
    std::gamma_distribution<double> ga(alpha, 1.0), gb(beta, 1.0);
    double x = ga(rng);
    double y = gb(rng);
    return x / (x + y);
}

BanditModel sample_bandit(int n_arms, double prior_alpha, double prior_beta, Rng& rng) {
    if (n_arms < 2) throw std::invalid_argument("sample_bandit: need at least 2 arms");
    if (prior_alpha <= 0 || prior_beta <= 0) throw std::invalid_argument("sample_bandit: prior params must be positive");
    BanditModel model;
    model.probs.resize(n_arms);
    for (int i = 0; i < n_arms; ++i) model.probs[i] = sample_beta(prior_alpha, prior_beta, rng);
    return model;
}

PullLog collect_offline_uniform(const BanditModel& bandit, std::int64_t n, Rng& rng) {
    if (n < 0) throw std::invalid_argument("collect_offline_uniform: n must be >= 0");
    PullLog log(bandit.n_arms());
    for (std::int64_t i = 0; i < n; ++i) {
        int arm = static_cast<int>(rng.below(bandit.n_arms()));
        log.record(arm, bandit.pull(arm, rng));
    }
    return log;
}

PullLog collect_offline_weighted(const BanditModel& bandit, const std::vector<double>& weights, std::int64_t n, Rng& rng) {
    if (static_cast<int>(weights.size()) != bandit.n_arms())
        throw std::invalid_argument("collect_offline_weighted: weights size mismatch");
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0) throw std::invalid_argument("collect_offline_weighted: negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("collect_offline_weighted: weights must sum to 1");
    PullLog log(bandit.n_arms());
    for (std::int64_t i = 0; i < n; ++i) {
        double u = rng.uniform() * sum;
        int arm = 0;
        double acc = weights[0];
        while (u >= acc && arm + 1 < bandit.n_arms()) acc += weights[++arm];
        log.record(arm, bandit.pull(arm, rng));
    }
    return log;
}

void posterior_update(BetaPosterior& post, int arm, double reward) {
    if (arm < 0 || arm >= static_cast<int>(post.alpha.size()))
        throw std::out_of_range("posterior_update: bad arm index");
    post.alpha[arm] += reward;
    post.beta[arm] += 1.0 - reward;
}

namespace {

// Confidence radius k*sqrt(log(total)/N_a). Unpulled arms use empirical
// mean 0 with surrogate count 1; log(total) is clamped below at 1 so the
// radius stays positive for the first few pulls.
double bonus(const PullLog& log, int arm, double k) {
    double lg = std::max(std::log(static_cast<double>(std::max<std::int64_t>(log.total, 1))), 1.0);
    double n = static_cast<double>(std::max<std::int64_t>(log.counts[arm], 1));
    return k * std::sqrt(lg / n);
}

int argmax_score(const PullLog& log, double k, double weight) {
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < static_cast<int>(log.counts.size()); ++a) {
        double score = log.mean(a) + weight * bonus(log, a, k);
        if (score > best_score) {
            best_score = score;
            best = a;
        }
    }
    return best;
}

}  // namespace

int select_ucb(const PullLog& log, double k) { return argmax_score(log, k, 1.0); }

int select_lcb(const PullLog& log, double k) { return argmax_score(log, k, -1.0); }

int select_ts(const BetaPosterior& post, Rng& rng) {
    int best = 0;
    double best_theta = -1.0;
    for (int a = 0; a < static_cast<int>(post.alpha.size()); ++a) {
        double theta = sample_beta(post.alpha[a], post.beta[a], rng);
        if (theta > best_theta) {
            best_theta = theta;
            best = a;
        }
    }
    return best;
}

int select_switch(const PullLog& log, const SwitchSchedule& schedule, std::int64_t t, double k) {
    return argmax_score(log, k, schedule.weight(t));
}

RegretTrace run_bandit_experiment(const BanditModel& bandit, const PullLog& offline, const BanditAgentSpec& agent,
                                  std::int64_t horizon, Rng& rng) {
    if (horizon < 1) throw std::invalid_argument("run_bandit_experiment: horizon must be >= 1");

    PullLog log = offline;
    BetaPosterior post{std::vector<double>(bandit.n_arms(), agent.prior_alpha),
                       std::vector<double>(bandit.n_arms(), agent.prior_beta)};
    for (int a = 0; a < bandit.n_arms(); ++a) {
        post.alpha[a] += offline.sums[a];
        post.beta[a] += static_cast<double>(offline.counts[a]) - offline.sums[a];
    }

    SwitchSchedule schedule;
    schedule.kind = agent.kind == BanditAgentSpec::Kind::switch_hard ? SwitchKind::hard : SwitchKind::soft;
    schedule.param = agent.switch_param;
    schedule.horizon = horizon;

    RegretTrace trace;
    trace.agent_tag = agent.tag();
    trace.instantaneous.reserve(horizon);
    trace.cumulative.reserve(horizon);
    double p_star = bandit.best();
    double cum = 0.0;

    for (std::int64_t t = 1; t <= horizon; ++t) {
        int arm = 0;
        switch (agent.kind) {
            case BanditAgentSpec::Kind::ucb: arm = select_ucb(log, agent.k); break;
            case BanditAgentSpec::Kind::lcb: arm = select_lcb(log, agent.k); break;
            case BanditAgentSpec::Kind::ts: arm = select_ts(post, rng); break;
            case BanditAgentSpec::Kind::switch_soft:
            case BanditAgentSpec::Kind::switch_hard: arm = select_switch(log, schedule, t, agent.k); break;
        }
        double reward = bandit.pull(arm, rng);
        log.record(arm, reward);
        posterior_update(post, arm, reward);
        cum += p_star - bandit.probs[arm];
        trace.instantaneous.push_back(p_star - bandit.probs[arm]);
        trace.cumulative.push_back(cum);
    }
    return trace;
}

namespace {

CounterexampleFamily make_counterexample(double epsilon, std::int64_t n, double arm1_mult, double arm2_mult) {
    if (epsilon >= 0.05) throw std::invalid_argument("counterexample: requires epsilon < 0.05");
    if (epsilon <= 0) throw std::invalid_argument("counterexample: epsilon must be positive");
    if (n < 500) throw std::invalid_argument("counterexample: requires n >= 500");
    CounterexampleFamily fam;
    fam.epsilon = epsilon;
    fam.n = n;
    fam.arm1_reward = arm1_mult * epsilon;
    fam.arm2_high = arm2_mult * epsilon;
    double nn = static_cast<double>(n);
    fam.behavior_weights = {(nn - 1.0) / nn, 1.0 / nn};
    return fam;
}

}  // namespace

BanditModel CounterexampleFamily::draw(Rng& rng) const {
    BanditModel model;
    model.deterministic = true;
    model.probs = {arm1_reward, rng.uniform() < 0.5 ? arm2_high : 0.0};
    return model;
}

CounterexampleFamily make_counterexample_ucb(double epsilon, std::int64_t n) {
    return make_counterexample(epsilon, n, 2.0, 2.1);
}

CounterexampleFamily make_counterexample_lcb(double epsilon, std::int64_t n) {
    return make_counterexample(epsilon, n, 1.0, 4.0);
}

}  // namespace otolab
