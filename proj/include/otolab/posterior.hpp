#pragma once

#include <Eigen/Dense>
#include <vector>

#include "otolab/linear_mdp.hpp"
#include "otolab/rng.hpp"

namespace otolab {

// One step of the ridge posterior over value parameters:
// w_h ~ N(mean, precision^{-1}), precision = sum phi phi^T + lambda I.
struct PosteriorSlice {
    Eigen::VectorXd mean;
    Eigen::MatrixXd precision;
};

struct GaussianPosterior {
    std::vector<PosteriorSlice> slices;  // one per step h
    double lambda = 1.0;

    static GaussianPosterior prior(int d, int H, double lambda);
    int H() const { return static_cast<int>(slices.size()); }
};

enum class QMode { mean, ucb, lcb };

// Regularized least squares on the step-h transitions of `buffer`, with
// regression target r + value_next(s').
PosteriorSlice posterior_fit(const LinearMdp& mdp, const EpisodeBuffer& buffer, const Eigen::VectorXd& value_next,
                             int h, double lambda);

// 1/2 log(1 + phi^T Lambda^{-1} phi), the information gained about w from
// one observation at feature phi.
double info_gain(const Eigen::VectorXd& phi, const Eigen::MatrixXd& precision);

// <mean, phi> with +/- (Gamma/2) sqrt(info_gain) for ucb/lcb, clipped to
// [0, clip_hi].
double q_estimate(const PosteriorSlice& slice, const Eigen::VectorXd& phi, QMode mode, double gamma, double clip_hi);

// Draws w_h ~ N(mean_h, sigma^2 Lambda_h^{-1}) for every step.
std::vector<Eigen::VectorXd> ts_sample_weights(const GaussianPosterior& posterior, double sigma, Rng& rng);

}  // namespace otolab
