#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "otolab/bandit.hpp"  // RegretTrace
#include "otolab/gridworld.hpp"
#include "otolab/rng.hpp"

namespace otolab {

struct GwTransition {
    int s = 0;
    int a = 0;
    double r = 0.0;
    int s_next = 0;
    bool done = false;
};

struct Dataset {
    std::vector<GwTransition> records;
};

// Bootstrap-masked dataset: masks[l][i] says whether record i belongs to
// member l's resampled dataset.
struct MaskedDataset {
    Dataset data;
    std::vector<std::vector<std::uint8_t>> masks;
    double p = 1.0;
};

struct EnsembleMember {
    Eigen::MatrixXd q;         // S x A
    std::vector<int> policy;   // greedy action per state
    int member_id = 0;
};

struct BoorlConfig {
    int L = 5;
    double mask_p = 0.9;
    double lambda_bc = 1.0;     // weight of the behavior term in the offline actor score
    double temperature = 1.0;
    double eps_greedy = 0.05;
    int batch = 256;
    double discount = 0.95;
    double lr = 0.1;
    int offline_iters = 2000;
    std::int64_t total_steps = 10000;
};

enum class BoorlVariant {
    full,           // bootstrapped ensemble + softmax selection + 50/50 replay
    ensemble1,      // L = 1 ablation
    uniform_buffer, // single shared buffer, proportional sampling
    optimistic,     // fresh optimistic Q, no offline phase
    pessimistic     // offline policy frozen online
};

struct ReplayMixer {
    const Dataset* offline = nullptr;
    std::vector<GwTransition> online;
    bool uniform = false;  // sample the union proportionally instead of 50/50

    std::vector<GwTransition> sample_batch(int batch, Rng& rng) const;
};

struct BoorlResult {
    std::vector<double> episode_returns;
    std::vector<double> episode_regret;      // optimal return minus episode return
    RegretTrace regret;                      // per online step
    double final_return = 0.0;               // mean over the last 10% of episodes
    double eval_return = 0.0;                // greedy evaluation after training (no exploration noise)
    double selection_entropy = 0.0;          // mean softmax entropy over steps

    double early_regret(double fraction = 0.1) const;
};

struct AblationRow {
    std::string variant;
    double early_regret_mean = 0.0, early_regret_std = 0.0;
    double final_return_mean = 0.0, final_return_std = 0.0;
};

Dataset collect_gridworld_dataset(const Gridworld& env, double eps_behavior, int n_transitions, Rng& rng);
std::string dataset_to_csv(const Dataset& data);
Dataset dataset_from_csv(const std::string& text);

MaskedDataset build_masked_dataset(const Dataset& data, int L, double p, Rng& rng);

EnsembleMember offline_train_member(const MaskedDataset& data, int member_id, const Gridworld& env,
                                    const BoorlConfig& config);

// Softmax over Q_l(s, pi_l(s)) with max-subtraction; returns the full
// probability vector for inspection.
std::vector<double> softmax_probs(const std::vector<EnsembleMember>& members, int state, double temperature);
int softmax_select(const std::vector<EnsembleMember>& members, int state, double temperature, Rng& rng);

// One environment interaction plus a mixed-batch TD update of every member.
// Returns the stored transition.
GwTransition online_step(std::vector<EnsembleMember>& members, ReplayMixer& mixer, const Gridworld& env, int state,
                         int member_index, const BoorlConfig& config, Rng& rng);

BoorlResult run_boorl(const Gridworld& env, const Dataset& offline, const BoorlConfig& config, BoorlVariant variant,
                      Rng& rng);

std::vector<AblationRow> ablate(const Gridworld& env, const Dataset& offline, const std::vector<BoorlVariant>& variants,
                                const std::vector<std::uint64_t>& seeds, const BoorlConfig& config);

}  // namespace otolab
