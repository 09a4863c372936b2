#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "otolab/rng.hpp"

namespace otolab {

// Bernoulli multi-armed bandit. When `deterministic` is set every pull of
// arm a pays exactly probs[a] instead of a Bernoulli draw; the failure
// constructions below need exact empirical means.
struct BanditModel {
    std::vector<double> probs;
    bool deterministic = false;

    int n_arms() const { return static_cast<int>(probs.size()); }
    double best() const;
    double pull(int arm, Rng& rng) const;
};

struct BetaPosterior {
    std::vector<double> alpha;
    std::vector<double> beta;

    static BetaPosterior uniform(int n_arms) { return {std::vector<double>(n_arms, 1.0), std::vector<double>(n_arms, 1.0)}; }
    double mean(int arm) const { return alpha[arm] / (alpha[arm] + beta[arm]); }
};

// Per-arm pull counts and reward sums; `total` includes offline pulls.
struct PullLog {
    std::vector<std::int64_t> counts;
    std::vector<double> sums;
    std::int64_t total = 0;

    explicit PullLog(int n_arms = 0) : counts(n_arms, 0), sums(n_arms, 0.0) {}
    void record(int arm, double reward) {
        counts[arm] += 1;
        sums[arm] += reward;
        total += 1;
    }
    double mean(int arm) const { return counts[arm] > 0 ? sums[arm] / counts[arm] : 0.0; }
};

enum class SwitchKind { soft, hard };

// LCB-to-UCB interpolation of the confidence weight.
// soft: w_t = min(A*t/T - 1, 1); hard: w_t = 2*1{t >= T/B} - 1.
struct SwitchSchedule {
    SwitchKind kind = SwitchKind::soft;
    double param = 2.0;
    std::int64_t horizon = 1;

    double weight(std::int64_t t) const;
};

struct RegretTrace {
    std::vector<double> instantaneous;
    std::vector<double> cumulative;
    std::uint64_t seed = 0;
    std::string agent_tag;

    double final_regret() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
};

struct BanditAgentSpec {
    enum class Kind { ucb, lcb, ts, switch_soft, switch_hard };
    Kind kind = Kind::ts;
    double k = 1.0;            // confidence multiplier
    double switch_param = 2.0; // A for soft, B for hard
    double prior_alpha = 1.0;
    double prior_beta = 1.0;

    std::string tag() const;
};

// Two-arm failure construction: arm 1 pays a fixed reward, arm 2's value is
// resolved per environment draw (high or zero with equal probability), and
// the behavior policy is ((n-1)/n, 1/n).
struct CounterexampleFamily {
    double epsilon = 0.0;
    std::int64_t n = 0;
    double arm1_reward = 0.0;
    double arm2_high = 0.0;
    std::vector<double> behavior_weights;

    BanditModel draw(Rng& rng) const;
};

BanditModel sample_bandit(int n_arms, double prior_alpha, double prior_beta, Rng& rng);
PullLog collect_offline_uniform(const BanditModel& bandit, std::int64_t n, Rng& rng);
PullLog collect_offline_weighted(const BanditModel& bandit, const std::vector<double>& weights, std::int64_t n, Rng& rng);

void posterior_update(BetaPosterior& post, int arm, double reward);

int select_ucb(const PullLog& log, double k);
int select_lcb(const PullLog& log, double k);
int select_ts(const BetaPosterior& post, Rng& rng);
int select_switch(const PullLog& log, const SwitchSchedule& schedule, std::int64_t t, double k);

double sample_beta(double alpha, double beta, Rng& rng);

RegretTrace run_bandit_experiment(const BanditModel& bandit, const PullLog& offline, const BanditAgentSpec& agent,
                                  std::int64_t horizon, Rng& rng);

CounterexampleFamily make_counterexample_ucb(double epsilon, std::int64_t n);
CounterexampleFamily make_counterexample_lcb(double epsilon, std::int64_t n);

}  // namespace otolab
