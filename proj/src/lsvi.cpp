#include "otolab/lsvi.hpp"

#include <cmath>
#include <stdexcept>

namespace otolab {

double confidence_width(double c, int d, int H, double T, double delta) {
    double t = std::max(T, 2.0);
    return 2.0 * c * H * d * std::sqrt(std::log(4.0 * d * t / delta));
}

Policy greedy_from_weights(const LinearMdp& mdp, const std::vector<Eigen::VectorXd>& weights) {
    Policy pi = Policy::zeros(mdp.H, mdp.n_states);
    for (int h = 0; h < mdp.H; ++h) {
        double clip_hi = static_cast<double>(mdp.H - h);
        for (int s = 0; s < mdp.n_states; ++s) {
            int best_a = 0;
            double best_q = -1e300;
            for (int a = 0; a < mdp.n_actions; ++a) {
                double q = std::clamp(weights[h].dot(mdp.phi(s, a)), 0.0, clip_hi);
                if (q > best_q) {
                    best_q = q;
                    best_a = a;
                }
            }
            pi.action[h][s] = best_a;
        }
    }
    return pi;
}

LsviAgent::LsviAgent(LinearMdp mdp, AgentConfig config, std::int64_t planned_episodes)
    : mdp_(std::move(mdp)),
      config_(config),
      posterior_(GaussianPosterior::prior(mdp_.d, mdp_.H, config.lambda)),
      policy_(Policy::zeros(mdp_.H, mdp_.n_states)),
      truth_(solve_optimal(mdp_)) {
    gamma_ = confidence_width(config_.c, mdp_.d, mdp_.H,
                              static_cast<double>(planned_episodes) * mdp_.H, config_.delta);
}

void LsviAgent::load_offline(const EpisodeBuffer& offline) {
    if (offline.source != BufferSource::offline) throw std::invalid_argument("load_offline: buffer not tagged offline");
    data_.transitions.insert(data_.transitions.end(), offline.transitions.begin(), offline.transitions.end());
    fitted_ = false;
}

Eigen::VectorXd LsviAgent::value_from_slice(int h, const PosteriorSlice& slice, const Eigen::VectorXd* sampled_w) const {
    double clip_hi = static_cast<double>(mdp_.H - h);
    Eigen::VectorXd v(mdp_.n_states);
    for (int s = 0; s < mdp_.n_states; ++s) {
        double best = -1e300;
        for (int a = 0; a < mdp_.n_actions; ++a) {
            Eigen::VectorXd f = mdp_.phi(s, a);
            double q;
            if (sampled_w != nullptr) {
                q = std::clamp(sampled_w->dot(f), 0.0, clip_hi);
            } else {
                QMode qm = config_.mode == AgentMode::ucb ? QMode::ucb : QMode::lcb;
                q = q_estimate(slice, f, qm, gamma_, clip_hi);
            }
            best = std::max(best, q);
        }
        v(s) = best;
    }
    return v;
}

void LsviAgent::refit(Rng& rng) {
    std::vector<Eigen::VectorXd> sampled(mdp_.H);
    Eigen::VectorXd value_next = Eigen::VectorXd::Zero(mdp_.n_states);
    for (int h = mdp_.H - 1; h >= 0; --h) {
        posterior_.slices[h] = posterior_fit(mdp_, data_, value_next, h, config_.lambda);
        const PosteriorSlice& slice = posterior_.slices[h];
        const Eigen::VectorXd* wp = nullptr;
        if (config_.mode == AgentMode::ts) {
            GaussianPosterior one;
            one.lambda = config_.lambda;
            one.slices = {slice};
            sampled[h] = ts_sample_weights(one, config_.ts_sigma, rng)[0];
            wp = &sampled[h];
        }
        // Greedy policy at this step under the same estimate that feeds the
        // backward target.
        double clip_hi = static_cast<double>(mdp_.H - h);
        for (int s = 0; s < mdp_.n_states; ++s) {
            int best_a = 0;
            double best_q = -1e300;
            for (int a = 0; a < mdp_.n_actions; ++a) {
                Eigen::VectorXd f = mdp_.phi(s, a);
                double q;
                if (wp != nullptr) {
                    q = std::clamp(wp->dot(f), 0.0, clip_hi);
                } else {
                    QMode qm = config_.mode == AgentMode::ucb ? QMode::ucb : QMode::lcb;
                    q = q_estimate(slice, f, qm, gamma_, clip_hi);
                }
                if (q > best_q) {
                    best_q = q;
                    best_a = a;
                }
            }
            policy_.action[h][s] = best_a;
        }
        value_next = value_from_slice(h, slice, wp);
    }
    fitted_ = true;
}

Policy LsviAgent::sample_ts_policy(Rng& rng) const {
    std::vector<Eigen::VectorXd> w = ts_sample_weights(posterior_, config_.ts_sigma, rng);
    return greedy_from_weights(mdp_, w);
}

EpisodeResult LsviAgent::run_episode(Rng& rng, int s1) {
    // TS refits every episode so each one acts on a fresh posterior draw.
    if (!fitted_ || config_.mode == AgentMode::ts) refit(rng);
    EpisodeResult out;
    out.info_gains.resize(mdp_.H, 0.0);

    int s = s1;
    for (int h = 0; h < mdp_.H; ++h) {
        if (config_.mode == AgentMode::ts && config_.resample_per_step) {
            GaussianPosterior one;
            one.lambda = config_.lambda;
            one.slices = {posterior_.slices[h]};
            Eigen::VectorXd w = ts_sample_weights(one, config_.ts_sigma, rng)[0];
            double clip_hi = static_cast<double>(mdp_.H - h);
            int best_a = 0;
            double best_q = -1e300;
            for (int a = 0; a < mdp_.n_actions; ++a) {
                double q = std::clamp(w.dot(mdp_.phi(s, a)), 0.0, clip_hi);
                if (q > best_q) {
                    best_q = q;
                    best_a = a;
                }
            }
            policy_.action[h][s] = best_a;
        }
        int a = policy_.action[h][s];
        Eigen::VectorXd f = mdp_.phi(s, a);
        double gain = info_gain(f, posterior_.slices[h].precision);
        out.info_gains[h] = gain;
        out.sum_sqrt_info += std::sqrt(gain);

        Eigen::MatrixXd p = mdp_.transition_matrix(h);
        int i = mdp_.sa_index(s, a);
        double r = mdp_.reward_vector(h)(i);
        double u = rng.uniform();
        int s_next = mdp_.n_states - 1;
        double acc = 0.0;
        for (int sn = 0; sn < mdp_.n_states; ++sn) {
            acc += p(i, sn);
            if (u < acc) {
                s_next = sn;
                break;
            }
        }
        out.transitions.push_back({h, s, a, r, s_next});
        s = s_next;
    }

    DpResult eval = evaluate_policy(mdp_, policy_);
    out.regret = truth_.v[0](s1) - eval.v[0](s1);

    if (config_.update_posterior) {
        data_.transitions.insert(data_.transitions.end(), out.transitions.begin(), out.transitions.end());
        fitted_ = false;
    }
    return out;
}

GaussianPosterior warm_start_from_offline(const LinearMdp& mdp, const EpisodeBuffer& offline, double lambda,
                                          const AgentConfig& config, Rng& rng) {
    if (offline.source != BufferSource::offline)
        throw std::invalid_argument("warm_start_from_offline: buffer not tagged offline");
    AgentConfig cfg = config;
    cfg.lambda = lambda;
    LsviAgent agent(mdp, cfg, 1);
    agent.load_offline(offline);
    agent.refit(rng);
    return agent.posterior();
}

}  // namespace otolab
