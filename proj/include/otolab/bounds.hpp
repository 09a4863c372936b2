#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "otolab/linear_mdp.hpp"
#include "otolab/posterior.hpp"
#include "otolab/rng.hpp"

namespace otolab {

struct BoundInputs {
    double N = 0.0;         // offline dataset size
    double T = 0.0;         // online steps
    int d = 1;
    int H = 1;
    double C_dagger = 1.0;  // Bayesian coverage coefficient
    double c = 1.0;         // absolute-constant stand-in
    double delta = 0.05;
    // The log factor's T is the total online budget of a run, a constant
    // along a regret curve; set this to pin it when sweeping T.
    double iota_override = 0.0;

    // log(4dT/delta) with T clamped below at 2, unless overridden.
    double iota() const;
};

// c sqrt(d^3 H^3 iota) (sqrt(N/C + T) - sqrt(N/C)).
double bound_eval(const BoundInputs& in);

// c sqrt(C d^3 H^3 iota / N); rejects N = 0.
double suboptimality_bound(const BoundInputs& in);

struct BoundRow {
    double N, T, bound;
};

std::vector<BoundRow> bound_curve(const BoundInputs& base, const std::vector<double>& n_grid,
                                  const std::vector<double>& t_grid);

struct CoverageResult {
    double value = 0.0;
    std::vector<double> per_h;
    int n_posterior_samples = 0;
};

// max_h E_w sup_x (x' Sigma_{pi*_w,h} x)/(x' Sigma_rho_h x), the sup taken
// over the span of Sigma_rho's positive eigenspace; infinity if the optimal
// policy's covariance has mass off that span.
CoverageResult coverage_coefficient(const LinearMdp& mdp, const std::vector<Eigen::MatrixXd>& sigma_rho,
                                    const std::function<LinearMdp(Rng&)>& posterior_sampler, int n_samples,
                                    Rng& rng, int s1 = 0);

struct InfoRatioEstimate {
    double gamma_hat = 0.0;
    int n_samples = 0;
    double violation_rate = 0.0;
};

// Smallest Gamma on a geometric grid (ratio 1.1) such that
// |Q_w - E Q_w| <= (Gamma/2) sqrt(I) holds over all (s,a,h) for at least a
// 1 - delta/2 fraction of posterior draws.
InfoRatioEstimate estimate_info_ratio(const LinearMdp& mdp, const GaussianPosterior& posterior, int n_samples,
                                      double delta, Rng& rng);

struct EpisodeRecord {
    double regret = 0.0;
    double sum_sqrt_info = 0.0;       // sum_h sqrt(I) along the agent's actions
    double sum_sqrt_info_opt = 0.0;   // same, along the optimal policy's actions
    double gamma = 0.0;               // per-episode coefficient; 0 defers to the shared one
};

struct RegretBoundReport {
    std::vector<double> slack;        // bound - regret per episode (agent-action variant)
    std::vector<double> slack_opt;    // optimal-action variant
    double violation_fraction = 0.0;
    double violation_fraction_opt = 0.0;
};

// Per-episode check of regret <= Gamma * sum_h sqrt(I) + 2 delta H^2.
RegretBoundReport check_regret_bound(const std::vector<EpisodeRecord>& records, double gamma_hat, double delta, int H);

// One JSON object per episode: {episode, regret, bound, slack}.
std::string bound_records_jsonl(const std::vector<EpisodeRecord>& records, const RegretBoundReport& report);

}  // namespace otolab
