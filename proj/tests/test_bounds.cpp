#include <doctest.h>

#include <cmath>
#include <limits>

#include "otolab/bounds.hpp"
#include "otolab/rng.hpp"

using namespace otolab;

TEST_CASE("bound evaluation on hand-computed inputs") {
    BoundInputs in;
    in.d = 1;
    in.H = 1;
    in.C_dagger = 1.0;
    in.c = 1.0;
    in.iota_override = 1.0;
    in.N = 100.0;
    in.T = 0.0;
    CHECK(bound_eval(in) == doctest::Approx(0.0));
    in.T = 44.0;  // sqrt(144) - sqrt(100) = 2
    CHECK(bound_eval(in) == doctest::Approx(2.0));
    CHECK(suboptimality_bound(in) == doctest::Approx(0.1));  // sqrt(1/100)

    BoundInputs bad = in;
    bad.N = -1.0;
    CHECK_THROWS(bound_eval(bad));
    bad = in;
    bad.C_dagger = 0.5;
    CHECK_THROWS(bound_eval(bad));
    bad = in;
    bad.N = 0.0;
    CHECK_THROWS(suboptimality_bound(bad));
}

TEST_CASE("the log factor responds to T unless pinned") {
    BoundInputs in;
    in.d = 3;
    in.delta = 0.05;
    in.T = 50.0;
    CHECK(in.iota() == doctest::Approx(std::log(4.0 * 3 * 50 / 0.05)));
    in.T = 1.0;  // clamps below at 2
    CHECK(in.iota() == doctest::Approx(std::log(4.0 * 3 * 2 / 0.05)));
    in.iota_override = 7.5;
    CHECK(in.iota() == doctest::Approx(7.5));
}

TEST_CASE("bound curve covers the full grid and matches pointwise evaluation") {
    BoundInputs base;
    base.d = 2;
    base.H = 3;
    base.C_dagger = 1.5;
    std::vector<double> n_grid = {10.0, 100.0};
    std::vector<double> t_grid = {5.0, 50.0, 500.0};
    std::vector<BoundRow> rows = bound_curve(base, n_grid, t_grid);
    REQUIRE(rows.size() == 6);
    for (const BoundRow& row : rows) {
        BoundInputs in = base;
        in.N = row.N;
        in.T = row.T;
        CHECK(row.bound == doctest::Approx(bound_eval(in)));
    }
    CHECK_THROWS(bound_curve(base, {}, t_grid));
}

TEST_CASE("pure-online rate dominates the mixed bound") {
    BoundInputs in;
    in.d = 4;
    in.H = 5;
    in.C_dagger = 2.0;
    for (double n : {0.0, 10.0, 1000.0})
        for (double t : {1.0, 100.0, 10000.0}) {
            in.N = n;
            in.T = t;
            double cap = 2.0 * in.c * std::sqrt(std::pow(in.d, 3) * std::pow(in.H, 3) * t * in.iota());
            CHECK(bound_eval(in) <= cap + 1e-9);
        }
}

namespace {

LinearMdp two_state_chain() {
    // state 0: action 0 stays, action 1 moves to state 1 (which absorbs);
    // only state 1 pays reward.
    const int S = 2, A = 2, H = 2;
    std::vector<Eigen::MatrixXd> trans(H, Eigen::MatrixXd::Zero(S * A, S));
    std::vector<Eigen::MatrixXd> rew(H, Eigen::MatrixXd::Zero(S, A));
    for (int h = 0; h < H; ++h) {
        trans[h](0, 0) = 1.0;  // (s0, a0) -> s0
        trans[h](1, 1) = 1.0;  // (s0, a1) -> s1
        trans[h](2, 1) = 1.0;  // (s1, a0) -> s1
        trans[h](3, 1) = 1.0;  // (s1, a1) -> s1
        rew[h](1, 0) = 1.0;
    }
    return make_tabular_linear(S, A, H, trans, rew);
}

}  // namespace

TEST_CASE("coverage coefficient equals the worst visitation ratio on a chain") {
    LinearMdp mdp = two_state_chain();
    DpResult opt = solve_optimal(mdp);
    std::vector<Eigen::VectorXd> d_star = visitation(mdp, opt.greedy, 0);
    auto sampler = [&mdp](Rng&) { return mdp; };
    Rng rng(1);

    // behavior: 80/20 action split at h=0, which underweights the optimal arm
    std::vector<Eigen::VectorXd> rho(mdp.H, Eigen::VectorXd::Zero(mdp.d));
    rho[0](mdp.sa_index(0, 0)) = 0.8;
    rho[0](mdp.sa_index(0, 1)) = 0.2;
    rho[1](mdp.sa_index(0, 0)) = 0.4;
    rho[1](mdp.sa_index(0, 1)) = 0.4;
    rho[1](mdp.sa_index(1, 0)) = 0.1;
    rho[1](mdp.sa_index(1, 1)) = 0.1;
    std::vector<Eigen::MatrixXd> sigma_rho = feature_covariance(mdp, rho);

    double oracle = 0.0;
    for (int h = 0; h < mdp.H; ++h)
        for (int i = 0; i < mdp.d; ++i)
            if (d_star[h](i) > 0.0) oracle = std::max(oracle, d_star[h](i) / rho[h](i));
    CoverageResult cov = coverage_coefficient(mdp, sigma_rho, sampler, 1, rng, 0);
    CHECK(cov.value == doctest::Approx(oracle).epsilon(1e-10));

    // behavior with no mass on the optimal route gives infinite coverage
    std::vector<Eigen::VectorXd> blind = rho;
    blind[0](mdp.sa_index(0, 1)) = 0.0;
    blind[0](mdp.sa_index(0, 0)) = 1.0;
    CoverageResult inf_cov = coverage_coefficient(mdp, feature_covariance(mdp, blind), sampler, 1, rng, 0);
    CHECK(std::isinf(inf_cov.value));

    // matching the optimal visitation yields exactly 1
    CoverageResult self_cov = coverage_coefficient(mdp, feature_covariance(mdp, d_star), sampler, 1, rng, 0);
    CHECK(self_cov.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("info ratio estimate matches the analytic gaussian quantile in 1d") {
    // With Lambda = I (d = 1) and a single unit feature, the deviation
    // |<w - mean, phi>| is |N(0,1)| and sqrt(I) = sqrt(log(2)/2), so the
    // smallest valid coefficient is 2 q_{0.975} / sqrt(log(2)/2).
    LinearMdp mdp;
    {
        std::vector<Eigen::MatrixXd> trans(1, Eigen::MatrixXd::Constant(1, 1, 1.0));
        std::vector<Eigen::MatrixXd> rew(1, Eigen::MatrixXd::Constant(1, 1, 0.5));
        mdp = make_tabular_linear(1, 1, 1, trans, rew);
    }
    GaussianPosterior post = GaussianPosterior::prior(1, 1, 1.0);
    Rng rng(2);
    InfoRatioEstimate est = estimate_info_ratio(mdp, post, 40000, 0.05, rng);
    double target = 2.0 * 2.2414027276049473 / std::sqrt(0.5 * std::log(2.0));
    // one geometric grid step of slack plus Monte-Carlo error on the quantile
    CHECK(est.gamma_hat >= target * 0.95);
    CHECK(est.gamma_hat <= target * 1.15);
    CHECK(est.violation_rate <= 0.025 + 0.005);
}

TEST_CASE("per-episode bound check counts violations correctly") {
    std::vector<EpisodeRecord> records;
    records.push_back({0.1, 1.0, 1.0});   // bound 2*1 + slack term: holds
    records.push_back({10.0, 0.1, 0.1});  // far above the bound: violates
    const double gamma_hat = 2.0, delta = 0.05;
    const int H = 2;
    RegretBoundReport report = check_regret_bound(records, gamma_hat, delta, H);
    REQUIRE(report.slack.size() == 2);
    double floor = 2.0 * delta * H * H;
    CHECK(report.slack[0] == doctest::Approx(gamma_hat * 1.0 + floor - 0.1));
    CHECK(report.slack[1] < 0.0);
    CHECK(report.violation_fraction == doctest::Approx(0.5));
    CHECK(report.violation_fraction_opt == doctest::Approx(0.5));
}
