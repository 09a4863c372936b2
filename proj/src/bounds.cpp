#include "otolab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace otolab {

double BoundInputs::iota() const {
    if (iota_override > 0.0) return iota_override;
    return std::log(4.0 * d * std::max(T, 2.0) / delta);
}

double bound_eval(const BoundInputs& in) {
    if (in.N < 0 || in.T < 0 || in.C_dagger < 1.0 || in.c <= 0) throw std::invalid_argument("bound_eval: invalid inputs");
    double base = in.N / in.C_dagger;
    double scale = in.c * std::sqrt(std::pow(static_cast<double>(in.d), 3) * std::pow(static_cast<double>(in.H), 3) * in.iota());
    return scale * (std::sqrt(base + in.T) - std::sqrt(base));
}

double suboptimality_bound(const BoundInputs& in) {
    if (in.N < 1) throw std::invalid_argument("suboptimality_bound: requires N >= 1");
    return in.c * std::sqrt(in.C_dagger * std::pow(static_cast<double>(in.d), 3) * std::pow(static_cast<double>(in.H), 3) *
                            in.iota() / in.N);
}

std::vector<BoundRow> bound_curve(const BoundInputs& base, const std::vector<double>& n_grid,
                                  const std::vector<double>& t_grid) {
    if (n_grid.empty() || t_grid.empty()) throw std::invalid_argument("bound_curve: empty grid");
    std::vector<BoundRow> rows;
    rows.reserve(n_grid.size() * t_grid.size());
    for (double n : n_grid)
        for (double t : t_grid) {
            BoundInputs in = base;
            in.N = n;
            in.T = t;
            rows.push_back({n, t, bound_eval(in)});
        }
    return rows;
}

namespace {

// sup_{x in span} (x' A x)/(x' B x) via the positive eigenspace of B.
double generalized_sup(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    constexpr double kTol = 1e-12;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
    double scale = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1.0);
    int rank = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > kTol * scale) ++rank;
    if (rank == 0) throw std::invalid_argument("coverage_coefficient: degenerate behavior covariance");

    int d = static_cast<int>(b.rows());
    Eigen::MatrixXd basis(d, rank);
    Eigen::VectorXd inv_sqrt(rank);
    int j = 0;
    for (int i = 0; i < d; ++i) {
        if (es.eigenvalues()(i) > kTol * scale) {
            basis.col(j) = es.eigenvectors().col(i);
            inv_sqrt(j) = 1.0 / std::sqrt(es.eigenvalues()(i));
            ++j;
        }
    }

    // Mass of A off the span of B means the ratio is unbounded.
    Eigen::MatrixXd proj = basis * basis.transpose();
    Eigen::MatrixXd off = (Eigen::MatrixXd::Identity(d, d) - proj) * a * (Eigen::MatrixXd::Identity(d, d) - proj);
    double a_scale = std::max(a.norm(), 1.0);
    if (off.norm() > 1e-9 * a_scale) return std::numeric_limits<double>::infinity();

    Eigen::MatrixXd w = basis * inv_sqrt.asDiagonal();  // B restricted to span becomes identity
    Eigen::MatrixXd m = w.transpose() * a * w;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ms(m);
    return std::max(ms.eigenvalues().maxCoeff(), 0.0);
}

}  // namespace

CoverageResult coverage_coefficient(const LinearMdp& mdp, const std::vector<Eigen::MatrixXd>& sigma_rho,
                                    const std::function<LinearMdp(Rng&)>& posterior_sampler, int n_samples,
                                    Rng& rng, int s1) {
    if (static_cast<int>(sigma_rho.size()) != mdp.H) throw std::invalid_argument("coverage_coefficient: need Sigma_rho per step");
    if (n_samples < 1) throw std::invalid_argument("coverage_coefficient: n_samples must be >= 1");

    std::vector<double> per_h(mdp.H, 0.0);
    for (int i = 0; i < n_samples; ++i) {
        LinearMdp sample = posterior_sampler(rng);
        DpResult opt = solve_optimal(sample);
        std::vector<Eigen::VectorXd> occ = visitation(sample, opt.greedy, s1);
        std::vector<Eigen::MatrixXd> sigma_pi = feature_covariance(sample, occ);
        for (int h = 0; h < mdp.H; ++h) per_h[h] += generalized_sup(sigma_pi[h], sigma_rho[h]) / n_samples;
    }

    CoverageResult out;
    out.per_h = per_h;
    out.n_posterior_samples = n_samples;
    out.value = *std::max_element(per_h.begin(), per_h.end());
    return out;
}

InfoRatioEstimate estimate_info_ratio(const LinearMdp& mdp, const GaussianPosterior& posterior, int n_samples,
                                      double delta, Rng& rng) {
    if (n_samples < 1) throw std::invalid_argument("estimate_info_ratio: n_samples must be >= 1");
    int sa = mdp.n_states * mdp.n_actions;

    // Precompute sqrt(I) and the deviation direction per (h, s, a).
    std::vector<Eigen::MatrixXd> chol_u(mdp.H);
    std::vector<Eigen::VectorXd> sqrt_info(mdp.H);
    for (int h = 0; h < mdp.H; ++h) {
        Eigen::LLT<Eigen::MatrixXd> llt(posterior.slices[h].precision);
        if (llt.info() != Eigen::Success) throw std::invalid_argument("estimate_info_ratio: precision not SPD");
        chol_u[h] = llt.matrixU();
        sqrt_info[h].resize(sa);
        for (int i = 0; i < sa; ++i) {
            Eigen::VectorXd f = mdp.features.row(i).transpose();
            sqrt_info[h](i) = std::sqrt(info_gain(f, posterior.slices[h].precision));
        }
    }

    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> needed(n_samples, 0.0);
    bool degenerate_failure = false;
    for (int k = 0; k < n_samples; ++k) {
        double worst = 0.0;
        for (int h = 0; h < mdp.H; ++h) {
            Eigen::VectorXd z(mdp.d);
            for (int i = 0; i < mdp.d; ++i) z(i) = normal(rng);
            // w - mean ~ N(0, Lambda^{-1}) via the upper-triangular factor
            Eigen::VectorXd dev = chol_u[h].triangularView<Eigen::Upper>().solve(z);
            for (int i = 0; i < sa; ++i) {
                double num = std::abs(mdp.features.row(i).dot(dev));
                double den = sqrt_info[h](i);
                if (den <= 0.0) {
                    if (num > 1e-12) degenerate_failure = true;
                    continue;
                }
                worst = std::max(worst, 2.0 * num / den);
            }
        }
        needed[k] = worst;
    }
    if (degenerate_failure) throw std::runtime_error("estimate_info_ratio: zero info gain with non-degenerate Q-law");

    std::sort(needed.begin(), needed.end());
    auto quantile_idx = static_cast<std::size_t>(std::ceil((1.0 - delta / 2.0) * n_samples)) - 1;
    quantile_idx = std::min(quantile_idx, needed.size() - 1);
    double target = needed[quantile_idx];

    InfoRatioEstimate out;
    out.n_samples = n_samples;
    if (target <= 0.0) {
        out.gamma_hat = 0.0;
        out.violation_rate = 0.0;
        return out;
    }
    double gamma = std::max(target / 16.0, 1e-12);
    while (gamma < target) gamma *= 1.1;
    out.gamma_hat = gamma;
    out.violation_rate =
        static_cast<double>(needed.end() - std::upper_bound(needed.begin(), needed.end(), gamma)) / n_samples;
    return out;
}

RegretBoundReport check_regret_bound(const std::vector<EpisodeRecord>& records, double gamma_hat, double delta, int H) {
    RegretBoundReport report;
    double slack_term = 2.0 * delta * H * H;
    int violations = 0, violations_opt = 0;
    for (const EpisodeRecord& rec : records) {
        double gamma = rec.gamma > 0.0 ? rec.gamma : gamma_hat;
        double bound = gamma * rec.sum_sqrt_info + slack_term;
        double bound_opt = gamma * rec.sum_sqrt_info_opt + slack_term;
        report.slack.push_back(bound - rec.regret);
        report.slack_opt.push_back(bound_opt - rec.regret);
        if (bound < rec.regret) ++violations;
        if (bound_opt < rec.regret) ++violations_opt;
    }
    if (!records.empty()) {
        report.violation_fraction = static_cast<double>(violations) / records.size();
        report.violation_fraction_opt = static_cast<double>(violations_opt) / records.size();
    }
    return report;
}

std::string bound_records_jsonl(const std::vector<EpisodeRecord>& records, const RegretBoundReport& report) {
    if (records.size() != report.slack.size())
        throw std::invalid_argument("bound_records_jsonl: records and report disagree");
    std::ostringstream out;
    char buf[40];
    auto num = [&buf](double x) {
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        return std::string(buf);
    };
    for (std::size_t i = 0; i < records.size(); ++i)
        out << "{\"episode\":" << i << ",\"regret\":" << num(records[i].regret)
            << ",\"bound\":" << num(records[i].regret + report.slack[i]) << ",\"slack\":" << num(report.slack[i])
            << "}\n";
    return out.str();
}

}  // namespace otolab
