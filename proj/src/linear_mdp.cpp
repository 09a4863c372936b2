#include "otolab/linear_mdp.hpp"

#include <json.hpp>
#include <stdexcept>

namespace otolab {

void LinearMdp::validate() const {
    if (d <= 0 || H <= 0 || n_states <= 0 || n_actions <= 0) throw std::invalid_argument("LinearMdp: bad dimensions");
    if (features.rows() != n_states * n_actions || features.cols() != d)
        throw std::invalid_argument("LinearMdp: feature matrix shape mismatch");
    for (int i = 0; i < features.rows(); ++i) {
        if (features.row(i).norm() > 1.0 + 1e-9) throw std::invalid_argument("LinearMdp: ||phi|| > 1");
    }
    double sqrt_d = std::sqrt(static_cast<double>(d));
    for (int h = 0; h < H; ++h) {
        if (theta[h].norm() > sqrt_d + 1e-9) throw std::invalid_argument("LinearMdp: ||theta|| > sqrt(d)");
        if (mu[h].rowwise().sum().norm() > sqrt_d + 1e-9) throw std::invalid_argument("LinearMdp: ||mu(S)|| > sqrt(d)");
        Eigen::MatrixXd p = transition_matrix(h);
        Eigen::VectorXd r = reward_vector(h);
        for (int i = 0; i < p.rows(); ++i) {
            if (std::abs(p.row(i).sum() - 1.0) > 1e-8) throw std::invalid_argument("LinearMdp: transition row not stochastic");
            if (p.row(i).minCoeff() < -1e-10) throw std::invalid_argument("LinearMdp: negative transition probability");
            if (r(i) < -1e-10 || r(i) > 1.0 + 1e-10) throw std::invalid_argument("LinearMdp: reward outside [0,1]");
        }
    }
}

LinearMdp make_tabular_linear(int n_states, int n_actions, int H,
                              const std::vector<Eigen::MatrixXd>& transition_tables,
                              const std::vector<Eigen::MatrixXd>& reward_tables) {
    if (static_cast<int>(transition_tables.size()) != H || static_cast<int>(reward_tables.size()) != H)
        throw std::invalid_argument("make_tabular_linear: need one table per step");
    LinearMdp mdp;
    mdp.n_states = n_states;
    mdp.n_actions = n_actions;
    mdp.H = H;
    mdp.d = n_states * n_actions;
    mdp.features = Eigen::MatrixXd::Identity(mdp.d, mdp.d);
    mdp.mu.resize(H);
    mdp.theta.resize(H);
    for (int h = 0; h < H; ++h) {
        const Eigen::MatrixXd& p = transition_tables[h];  // (S*A) x S
        const Eigen::MatrixXd& r = reward_tables[h];      // S x A
        if (p.rows() != mdp.d || p.cols() != n_states) throw std::invalid_argument("make_tabular_linear: transition shape");
        if (r.rows() != n_states || r.cols() != n_actions) throw std::invalid_argument("make_tabular_linear: reward shape");
        for (int i = 0; i < p.rows(); ++i) {
            if (std::abs(p.row(i).sum() - 1.0) > 1e-9 || p.row(i).minCoeff() < -1e-12)
                throw std::invalid_argument("make_tabular_linear: non-stochastic transition row");
        }
        mdp.mu[h] = p;  // one-hot features make mu rows the transition rows
        Eigen::VectorXd th(mdp.d);
        for (int s = 0; s < n_states; ++s)
            for (int a = 0; a < n_actions; ++a) {
                double rv = r(s, a);
                if (rv < 0.0 || rv > 1.0) throw std::invalid_argument("make_tabular_linear: reward outside [0,1]");
                th(mdp.sa_index(s, a)) = rv;
            }
        mdp.theta[h] = th;
    }
    return mdp;
}

DpResult solve_optimal(const LinearMdp& mdp) {
    DpResult out;
    out.v.assign(mdp.H + 1, Eigen::VectorXd::Zero(mdp.n_states));
    out.q.assign(mdp.H, Eigen::MatrixXd::Zero(mdp.n_states, mdp.n_actions));
    out.greedy = Policy::zeros(mdp.H, mdp.n_states);
    for (int h = mdp.H - 1; h >= 0; --h) {
        Eigen::MatrixXd p = mdp.transition_matrix(h);
        Eigen::VectorXd r = mdp.reward_vector(h);
        for (int s = 0; s < mdp.n_states; ++s) {
            int best_a = 0;
            double best_q = -1e300;
            for (int a = 0; a < mdp.n_actions; ++a) {
                int i = mdp.sa_index(s, a);
                double q = r(i) + p.row(i).dot(out.v[h + 1]);
                out.q[h](s, a) = q;
                if (q > best_q) {
                    best_q = q;
                    best_a = a;
                }
            }
            out.v[h](s) = best_q;
            out.greedy.action[h][s] = best_a;
        }
    }
    return out;
}

DpResult evaluate_policy(const LinearMdp& mdp, const Policy& pi) {
    DpResult out;
    out.v.assign(mdp.H + 1, Eigen::VectorXd::Zero(mdp.n_states));
    out.q.assign(mdp.H, Eigen::MatrixXd::Zero(mdp.n_states, mdp.n_actions));
    out.greedy = pi;
    for (int h = mdp.H - 1; h >= 0; --h) {
        Eigen::MatrixXd p = mdp.transition_matrix(h);
        Eigen::VectorXd r = mdp.reward_vector(h);
        for (int s = 0; s < mdp.n_states; ++s) {
            for (int a = 0; a < mdp.n_actions; ++a) {
                int i = mdp.sa_index(s, a);
                out.q[h](s, a) = r(i) + p.row(i).dot(out.v[h + 1]);
            }
            out.v[h](s) = out.q[h](s, pi.action[h][s]);
        }
    }
    return out;
}

std::vector<Eigen::VectorXd> visitation(const LinearMdp& mdp, const Policy& pi, int s1) {
    std::vector<Eigen::VectorXd> occ(mdp.H, Eigen::VectorXd::Zero(mdp.n_states * mdp.n_actions));
    Eigen::VectorXd state_dist = Eigen::VectorXd::Zero(mdp.n_states);
    state_dist(s1) = 1.0;
    for (int h = 0; h < mdp.H; ++h) {
        Eigen::MatrixXd p = mdp.transition_matrix(h);
        Eigen::VectorXd next = Eigen::VectorXd::Zero(mdp.n_states);
        for (int s = 0; s < mdp.n_states; ++s) {
            if (state_dist(s) == 0.0) continue;
            int a = pi.action[h][s];
            int i = mdp.sa_index(s, a);
            occ[h](i) += state_dist(s);
            next += state_dist(s) * p.row(i).transpose();
        }
        state_dist = next;
    }
    return occ;
}

std::vector<Eigen::MatrixXd> feature_covariance(const LinearMdp& mdp, const std::vector<Eigen::VectorXd>& occupancy) {
    std::vector<Eigen::MatrixXd> out;
    out.reserve(occupancy.size());
    for (const auto& occ : occupancy) {
        Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(mdp.d, mdp.d);
        for (int i = 0; i < occ.size(); ++i) {
            if (occ(i) == 0.0) continue;
            Eigen::VectorXd f = mdp.features.row(i).transpose();
            sigma += occ(i) * f * f.transpose();
        }
        out.push_back(sigma);
    }
    return out;
}

std::string to_json(const LinearMdp& mdp) {
    nlohmann::json j;
    j["d"] = mdp.d;
    j["H"] = mdp.H;
    j["states"] = mdp.n_states;
    j["actions"] = mdp.n_actions;
    // Eigen stores column-major; emit row-major per the documented schema.
    std::vector<double> row_major;
    row_major.reserve(mdp.features.size());
    for (int i = 0; i < mdp.features.rows(); ++i)
        for (int c = 0; c < mdp.features.cols(); ++c) row_major.push_back(mdp.features(i, c));
    j["features"] = row_major;
    for (int h = 0; h < mdp.H; ++h) {
        Eigen::MatrixXd p = mdp.transition_matrix(h);
        Eigen::VectorXd r = mdp.reward_vector(h);
        nlohmann::json jp = nlohmann::json::array();
        for (int i = 0; i < p.rows(); ++i) jp.push_back(std::vector<double>(p.row(i).begin(), p.row(i).end()));
        j["transitions"].push_back(jp);
        j["rewards"].push_back(std::vector<double>(r.begin(), r.end()));
    }
    return j.dump(2);
}

LinearMdp linear_mdp_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    int S = j.at("states").get<int>();
    int A = j.at("actions").get<int>();
    int H = j.at("H").get<int>();
    std::vector<Eigen::MatrixXd> trans(H), rew(H);
    for (int h = 0; h < H; ++h) {
        Eigen::MatrixXd p(S * A, S);
        for (int i = 0; i < S * A; ++i)
            for (int s = 0; s < S; ++s) p(i, s) = j.at("transitions")[h][i][s].get<double>();
        Eigen::MatrixXd r(S, A);
        for (int s = 0; s < S; ++s)
            for (int a = 0; a < A; ++a) r(s, a) = j.at("rewards")[h][s * A + a].get<double>();
        trans[h] = p;
        rew[h] = r;
    }
    // Round-trip through the tabular constructor; non-one-hot feature maps
    // are serialized for inspection but reloaded as their tabular embedding.
    return make_tabular_linear(S, A, H, trans, rew);
}

}  // namespace otolab
