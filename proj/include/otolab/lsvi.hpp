#pragma once

#include <cstdint>
#include <vector>

#include "otolab/linear_mdp.hpp"
#include "otolab/posterior.hpp"
#include "otolab/rng.hpp"

namespace otolab {

enum class AgentMode { ucb, lcb, ts };

struct AgentConfig {
    AgentMode mode = AgentMode::ts;
    double c = 0.1;          // multiplier on the confidence width Gamma
    double delta = 0.05;
    double lambda = 1.0;     // ridge
    double ts_sigma = 1.0;   // posterior scale for sampled weights
    bool resample_per_step = false;
    bool update_posterior = true;  // false: fixed-belief evaluation mode
};

// Gamma = 2 c H d sqrt(log(4dT/delta)); T clamped below at 2 so the log
// stays positive for T in {0, 1}.
double confidence_width(double c, int d, int H, double T, double delta);

struct EpisodeResult {
    std::vector<Transition> transitions;
    double regret = 0.0;            // V*(s1) - V^pi(s1), exact DP on the true model
    double sum_sqrt_info = 0.0;     // sum_h sqrt(I) at the realized transitions
    std::vector<double> info_gains; // per step h
};

// Greedy policy for sampled weights: argmax_a clip(<w_h, phi(s,a)>).
Policy greedy_from_weights(const LinearMdp& mdp, const std::vector<Eigen::VectorXd>& weights);

// Backward-inducted posterior over the buffer, using the mode's own value
// estimate at h+1 as the regression target.
GaussianPosterior warm_start_from_offline(const LinearMdp& mdp, const EpisodeBuffer& offline, double lambda,
                                          const AgentConfig& config, Rng& rng);

// Least-squares value iteration agent over a known finite linear MDP.
// Keeps all transitions (offline + online) and refits the posterior by
// backward induction before each episode.
class LsviAgent {
public:
    LsviAgent(LinearMdp mdp, AgentConfig config, std::int64_t planned_episodes);

    void load_offline(const EpisodeBuffer& offline);
    void refit(Rng& rng);
    EpisodeResult run_episode(Rng& rng, int s1 = 0);

    Policy sample_ts_policy(Rng& rng) const;  // one posterior draw, no state change

    const GaussianPosterior& posterior() const { return posterior_; }
    const EpisodeBuffer& data() const { return data_; }
    const LinearMdp& mdp() const { return mdp_; }
    double gamma() const { return gamma_; }

private:
    Eigen::VectorXd value_from_slice(int h, const PosteriorSlice& slice, const Eigen::VectorXd* sampled_w) const;

    LinearMdp mdp_;
    AgentConfig config_;
    EpisodeBuffer data_;
    GaussianPosterior posterior_;
    Policy policy_;
    DpResult truth_;
    double gamma_ = 0.0;
    bool fitted_ = false;
};

}  // namespace otolab
