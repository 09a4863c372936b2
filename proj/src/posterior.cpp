#include "otolab/posterior.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace otolab {

GaussianPosterior GaussianPosterior::prior(int d, int H, double lambda) {
    GaussianPosterior p;
    p.lambda = lambda;
    p.slices.assign(H, {Eigen::VectorXd::Zero(d), lambda * Eigen::MatrixXd::Identity(d, d)});
    return p;
}

PosteriorSlice posterior_fit(const LinearMdp& mdp, const EpisodeBuffer& buffer, const Eigen::VectorXd& value_next,
                             int h, double lambda) {
    if (lambda <= 0) throw std::invalid_argument("posterior_fit: lambda must be positive");
    Eigen::MatrixXd precision = lambda * Eigen::MatrixXd::Identity(mdp.d, mdp.d);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(mdp.d);
    for (const Transition& t : buffer.transitions) {
        if (t.h != h) continue;
        Eigen::VectorXd f = mdp.phi(t.s, t.a);
        precision += f * f.transpose();
        b += f * (t.r + value_next(t.s_next));
    }
    PosteriorSlice slice;
    slice.precision = precision;
    slice.mean = precision.llt().solve(b);
    return slice;
}

double info_gain(const Eigen::VectorXd& phi, const Eigen::MatrixXd& precision) {
    if ((precision - precision.transpose()).norm() > 1e-12 * std::max(1.0, precision.norm()))
        throw std::invalid_argument("info_gain: precision not symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(precision);
    if (llt.info() != Eigen::Success) throw std::invalid_argument("info_gain: precision not SPD");
    double quad = phi.dot(llt.solve(phi));
    return 0.5 * std::log1p(std::max(quad, 0.0));
}

double q_estimate(const PosteriorSlice& slice, const Eigen::VectorXd& phi, QMode mode, double gamma, double clip_hi) {
    if (gamma < 0) throw std::invalid_argument("q_estimate: gamma must be >= 0");
    double q = slice.mean.dot(phi);
    if (mode != QMode::mean) {
        double radius = 0.5 * gamma * std::sqrt(info_gain(phi, slice.precision));
        q += mode == QMode::ucb ? radius : -radius;
    }
    return std::clamp(q, 0.0, clip_hi);
}

std::vector<Eigen::VectorXd> ts_sample_weights(const GaussianPosterior& posterior, double sigma, Rng& rng) {
    if (sigma <= 0) throw std::invalid_argument("ts_sample_weights: sigma must be positive");
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Eigen::VectorXd> out;
    out.reserve(posterior.slices.size());
    for (const PosteriorSlice& slice : posterior.slices) {
        Eigen::LLT<Eigen::MatrixXd> llt(slice.precision);
        if (llt.info() != Eigen::Success) throw std::runtime_error("ts_sample_weights: precision factorization failed");
        Eigen::VectorXd z(slice.mean.size());
        for (int i = 0; i < z.size(); ++i) z(i) = normal(rng);
        // Lambda = L L^T  =>  cov(L^{-T} z) = Lambda^{-1}.
        Eigen::VectorXd w = slice.mean + sigma * llt.matrixU().solve(z);
        out.push_back(std::move(w));
    }
    return out;
}

}  // namespace otolab
