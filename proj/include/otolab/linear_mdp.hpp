#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace otolab {

// Finite-horizon linear MDP over finite state/action sets: transitions and
// rewards are linear in a known feature map,
//   P_h(.|s,a) = <phi(s,a), mu_h(.)>,  r_h(s,a) = <phi(s,a), theta_h>.
struct LinearMdp {
    int d = 0;
    int H = 0;
    int n_states = 0;
    int n_actions = 0;
    Eigen::MatrixXd features;                 // (S*A) x d, row sa_index(s,a) holds phi(s,a)
    std::vector<Eigen::MatrixXd> mu;          // per h: d x S signed measures
    std::vector<Eigen::VectorXd> theta;       // per h: reward parameter

    int sa_index(int s, int a) const { return s * n_actions + a; }
    Eigen::VectorXd phi(int s, int a) const { return features.row(sa_index(s, a)).transpose(); }

    // Realized transition rows (SA x S) and reward vector for step h.
    Eigen::MatrixXd transition_matrix(int h) const { return features * mu[h]; }
    Eigen::VectorXd reward_vector(int h) const { return features * theta[h]; }

    void validate() const;  // throws on Definition-violating tables
};

// Deterministic policy, one action per (h, s).
struct Policy {
    std::vector<std::vector<int>> action;  // [h][s]

    static Policy zeros(int H, int S) { return {std::vector<std::vector<int>>(H, std::vector<int>(S, 0))}; }
};

struct DpResult {
    std::vector<Eigen::VectorXd> v;             // [h] size S, v[H] = 0
    std::vector<Eigen::MatrixXd> q;             // [h] S x A
    Policy greedy;
};

struct Transition {
    int h = 0;
    int s = 0;
    int a = 0;
    double r = 0.0;
    int s_next = 0;
};

enum class BufferSource { offline, online };

struct EpisodeBuffer {
    std::vector<Transition> transitions;
    BufferSource source = BufferSource::online;
};

LinearMdp make_tabular_linear(int n_states, int n_actions, int H,
                              const std::vector<Eigen::MatrixXd>& transition_tables,
                              const std::vector<Eigen::MatrixXd>& reward_tables);

// Exact dynamic programming on the known model.
DpResult solve_optimal(const LinearMdp& mdp);
DpResult evaluate_policy(const LinearMdp& mdp, const Policy& pi);

// State-action visitation d^pi_h(s,a) from a fixed initial state.
std::vector<Eigen::VectorXd> visitation(const LinearMdp& mdp, const Policy& pi, int s1);

// Feature second moment E_{d^pi_h}[phi phi^T] per step.
std::vector<Eigen::MatrixXd> feature_covariance(const LinearMdp& mdp, const std::vector<Eigen::VectorXd>& occupancy);

std::string to_json(const LinearMdp& mdp);
LinearMdp linear_mdp_from_json(const std::string& text);

}  // namespace otolab
