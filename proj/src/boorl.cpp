#include "otolab/boorl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace otolab {

double BoorlResult::early_regret(double fraction) const {
    std::size_t n = static_cast<std::size_t>(fraction * regret.instantaneous.size());
    n = std::max<std::size_t>(n, 1);
    n = std::min(n, regret.instantaneous.size());
    return std::accumulate(regret.instantaneous.begin(), regret.instantaneous.begin() + n, 0.0);
}

Dataset collect_gridworld_dataset(const Gridworld& env, double eps_behavior, int n_transitions, Rng& rng) {
    Dataset data;
    std::vector<int> pi = env.optimal_policy();
    int s = env.start;
    int steps_in_episode = 0;
    while (static_cast<int>(data.records.size()) < n_transitions) {
        int a = rng.uniform() < eps_behavior ? static_cast<int>(rng.below(Gridworld::kActions)) : pi[s];
        Gridworld::StepResult res = env.step(s, a, rng);
        data.records.push_back({s, a, res.reward, res.s_next, res.done});
        ++steps_in_episode;
        if (res.done || steps_in_episode >= env.H) {
            s = env.start;
            steps_in_episode = 0;
        } else {
            s = res.s_next;
        }
    }
    return data;
}

std::string dataset_to_csv(const Dataset& data) {
    std::ostringstream out;
    out << "s,a,r,s_next,done\n";
    for (const GwTransition& t : data.records)
        out << t.s << ',' << t.a << ',' << t.r << ',' << t.s_next << ',' << (t.done ? 1 : 0) << '\n';
    return out.str();
}

Dataset dataset_from_csv(const std::string& text) {
    Dataset data;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "s,a,r,s_next,done")
        throw std::invalid_argument("dataset_from_csv: bad header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        GwTransition t;
        int done = 0;
        if (std::sscanf(line.c_str(), "%d,%d,%lf,%d,%d", &t.s, &t.a, &t.r, &t.s_next, &done) != 5)
            throw std::invalid_argument("dataset_from_csv: bad row: " + line);
        t.done = done != 0;
        data.records.push_back(t);
    }
    return data;
}

MaskedDataset build_masked_dataset(const Dataset& data, int L, double p, Rng& rng) {
    if (data.records.empty()) throw std::invalid_argument("build_masked_dataset: empty dataset");
    if (L < 1) throw std::invalid_argument("build_masked_dataset: L must be >= 1");
    if (p <= 0.0 || p > 1.0) throw std::invalid_argument("build_masked_dataset: p outside (0,1]");
    MaskedDataset out;
    out.data = data;
    out.p = p;
    out.masks.assign(L, std::vector<std::uint8_t>(data.records.size(), 1));
    if (p < 1.0) {
        for (int l = 0; l < L; ++l)
            for (std::size_t i = 0; i < data.records.size(); ++i) out.masks[l][i] = rng.uniform() < p ? 1 : 0;
    }
    return out;
}

EnsembleMember offline_train_member(const MaskedDataset& data, int member_id, const Gridworld& env,
                                    const BoorlConfig& config) {
    if (config.lambda_bc <= 0) throw std::invalid_argument("offline_train_member: lambda_bc must be positive");
    int S = env.n_states();
    int A = Gridworld::kActions;
    const std::vector<std::uint8_t>& mask = data.masks.at(member_id);

    // Per-(s,a) masked visit counts; support-constrained pessimism never
    // lets the policy leave the masked dataset's actions.
    Eigen::MatrixXd count = Eigen::MatrixXd::Zero(S, A);
    std::vector<std::vector<std::size_t>> by_sa(S * A);
    for (std::size_t i = 0; i < data.data.records.size(); ++i) {
        if (!mask[i]) continue;
        const GwTransition& t = data.data.records[i];
        count(t.s, t.a) += 1.0;
        by_sa[t.s * A + t.a].push_back(i);
    }
    Eigen::VectorXd state_count = count.rowwise().sum();

    EnsembleMember member;
    member.member_id = member_id;
    member.q = Eigen::MatrixXd::Zero(S, A);
    member.policy.assign(S, 0);

    auto improve_policy = [&]() {
        for (int s = 0; s < S; ++s) {
            if (state_count(s) == 0.0) continue;  // unsupported state keeps Q = 0, action 0 (flagged by caller)
            int best_a = -1;
            double best_score = -1e300;
            for (int a = 0; a < A; ++a) {
                if (count(s, a) == 0.0) continue;
                double score = member.q(s, a) + config.lambda_bc * std::log(count(s, a) / state_count(s));
                if (score > best_score) {
                    best_score = score;
                    best_a = a;
                }
            }
            member.policy[s] = best_a;
        }
    };

    improve_policy();
    double q_max = static_cast<double>(env.H);
    for (int it = 0; it < config.offline_iters; ++it) {
        double residual = 0.0;
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) {
                if (count(s, a) == 0.0) continue;
                double target = 0.0;
                for (std::size_t i : by_sa[s * A + a]) {
                    const GwTransition& t = data.data.records[i];
                    double v_next = t.done ? 0.0 : member.q(t.s_next, member.policy[t.s_next]);
                    target += t.r + config.discount * v_next;
                }
                target = std::clamp(target / count(s, a), 0.0, q_max);
                residual = std::max(residual, std::abs(target - member.q(s, a)));
                member.q(s, a) = target;
            }
        }
        improve_policy();
        if (residual < 1e-6) break;
    }
    return member;
}

std::vector<double> softmax_probs(const std::vector<EnsembleMember>& members, int state, double temperature) {
    if (members.empty()) throw std::invalid_argument("softmax_probs: no members");
    if (temperature <= 0) throw std::invalid_argument("softmax_probs: temperature must be positive");
    std::vector<double> logits(members.size());
    for (std::size_t l = 0; l < members.size(); ++l)
        logits[l] = members[l].q(state, members[l].policy[state]) / temperature;
    double m = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (double& v : logits) {
        v = std::exp(v - m);
        z += v;
    }
    for (double& v : logits) v /= z;
    return logits;
}

int softmax_select(const std::vector<EnsembleMember>& members, int state, double temperature, Rng& rng) {
    std::vector<double> p = softmax_probs(members, state, temperature);
    double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t l = 0; l < p.size(); ++l) {
        acc += p[l];
        if (u < acc) return static_cast<int>(l);
    }
    return static_cast<int>(p.size()) - 1;
}

std::vector<GwTransition> ReplayMixer::sample_batch(int batch, Rng& rng) const {
    std::vector<GwTransition> out;
    out.reserve(batch);
    if (uniform) {
        std::size_t total = offline->records.size() + online.size();
        for (int i = 0; i < batch; ++i) {
            std::size_t j = rng.below(total);
            out.push_back(j < offline->records.size() ? offline->records[j] : online[j - offline->records.size()]);
        }
        return out;
    }
    int want_online = batch / 2;
    int n_online = std::min<int>(want_online, static_cast<int>(online.size()));
    int n_offline = batch - n_online;  // shortfall falls back to offline samples
    for (int i = 0; i < n_offline; ++i) out.push_back(offline->records[rng.below(offline->records.size())]);
    for (int i = 0; i < n_online; ++i) out.push_back(online[rng.below(online.size())]);
    return out;
}

GwTransition online_step(std::vector<EnsembleMember>& members, ReplayMixer& mixer, const Gridworld& env, int state,
                         int member_index, const BoorlConfig& config, Rng& rng) {
    if (mixer.offline == nullptr || mixer.offline->records.empty())
        throw std::invalid_argument("online_step: offline buffer must be non-empty");
    const EnsembleMember& actor = members[member_index];
    int a = rng.uniform() < config.eps_greedy ? static_cast<int>(rng.below(Gridworld::kActions)) : actor.policy[state];
    Gridworld::StepResult res = env.step(state, a, rng);
    GwTransition tr{state, a, res.reward, res.s_next, res.done};
    mixer.online.push_back(tr);

    // Online loss drops the behavior term: plain TD on the mixed batch for
    // every member, greedy policy refreshed on the touched states.
    double q_max = static_cast<double>(env.H);
    std::vector<GwTransition> batch = mixer.sample_batch(config.batch, rng);
    for (EnsembleMember& m : members) {
        for (const GwTransition& t : batch) {
            double v_next = t.done ? 0.0 : m.q.row(t.s_next).maxCoeff();
            double td = t.r + config.discount * v_next - m.q(t.s, t.a);
            m.q(t.s, t.a) = std::clamp(m.q(t.s, t.a) + config.lr * td, 0.0, q_max);
            int best_a = 0;
            m.q.row(t.s).maxCoeff(&best_a);
            m.policy[t.s] = best_a;
        }
    }
    return tr;
}

BoorlResult run_boorl(const Gridworld& env, const Dataset& offline, const BoorlConfig& config, BoorlVariant variant,
                      Rng& rng) {
    BoorlConfig cfg = config;
    if (variant == BoorlVariant::ensemble1 || variant == BoorlVariant::optimistic || variant == BoorlVariant::pessimistic)
        cfg.L = 1;

    std::vector<EnsembleMember> members;
    if (variant == BoorlVariant::optimistic) {
        EnsembleMember m;
        m.member_id = 0;
        m.q = Eigen::MatrixXd::Constant(env.n_states(), Gridworld::kActions, static_cast<double>(env.H));
        m.policy.assign(env.n_states(), 0);
        members.push_back(std::move(m));
    } else {
        MaskedDataset masked = build_masked_dataset(offline, cfg.L, variant == BoorlVariant::full ? cfg.mask_p : 1.0, rng);
        for (int l = 0; l < cfg.L; ++l) members.push_back(offline_train_member(masked, l, env, cfg));
    }

    ReplayMixer mixer;
    mixer.offline = &offline;
    mixer.uniform = variant == BoorlVariant::uniform_buffer;

    BoorlResult out;
    out.regret.agent_tag = "boorl";
    double v_star = env.optimal_return();
    double per_step_opt = v_star / env.H;  // optimal reward rate, for the per-step trace

    bool frozen = variant == BoorlVariant::pessimistic;
    double entropy_acc = 0.0;
    std::int64_t steps = 0;
    while (steps < cfg.total_steps) {
        int s = env.start;
        double ep_return = 0.0;
        for (int t = 0; t < env.H && steps < cfg.total_steps; ++t) {
            int idx = 0;
            if (members.size() > 1) {
                std::vector<double> p = softmax_probs(members, s, cfg.temperature);
                for (double pi : p)
                    if (pi > 0) entropy_acc -= pi * std::log(pi);
                double u = rng.uniform();
                double acc = 0.0;
                for (std::size_t l = 0; l < p.size(); ++l) {
                    acc += p[l];
                    if (u < acc) {
                        idx = static_cast<int>(l);
                        break;
                    }
                }
            }
            GwTransition tr;
            if (frozen) {
                int a = members[idx].policy[s];
                Gridworld::StepResult res = env.step(s, a, rng);
                tr = {s, a, res.reward, res.s_next, res.done};
            } else {
                tr = online_step(members, mixer, env, s, idx, cfg, rng);
            }
            ep_return += tr.r;
            ++steps;
            out.regret.instantaneous.push_back(per_step_opt - tr.r);
            out.regret.cumulative.push_back((out.regret.cumulative.empty() ? 0.0 : out.regret.cumulative.back()) +
                                            out.regret.instantaneous.back());
            s = tr.s_next;
            if (tr.done) break;
        }
        out.episode_returns.push_back(ep_return);
        out.episode_regret.push_back(v_star - ep_return);
    }

    std::size_t tail = std::max<std::size_t>(out.episode_returns.size() / 10, 1);
    out.final_return = std::accumulate(out.episode_returns.end() - tail, out.episode_returns.end(), 0.0) / tail;
    out.selection_entropy = steps > 0 ? entropy_acc / static_cast<double>(steps) : 0.0;

    // Greedy evaluation: member drawn once per episode by softmax, actions
    // greedy, no learning.
    const int n_eval = 32;
    double eval_acc = 0.0;
    for (int ep = 0; ep < n_eval; ++ep) {
        int idx = members.size() > 1 ? softmax_select(members, env.start, cfg.temperature, rng) : 0;
        int s = env.start;
        for (int t = 0; t < env.H; ++t) {
            Gridworld::StepResult res = env.step(s, members[idx].policy[s], rng);
            eval_acc += res.reward;
            s = res.s_next;
            if (res.done) break;
        }
    }
    out.eval_return = eval_acc / n_eval;
    return out;
}

std::vector<AblationRow> ablate(const Gridworld& env, const Dataset& offline, const std::vector<BoorlVariant>& variants,
                                const std::vector<std::uint64_t>& seeds, const BoorlConfig& config) {
    if (variants.size() < 2) throw std::invalid_argument("ablate: need at least 2 variants");
    auto name = [](BoorlVariant v) {
        switch (v) {
            case BoorlVariant::full: return "full";
            case BoorlVariant::ensemble1: return "ensemble1";
            case BoorlVariant::uniform_buffer: return "uniform_buffer";
            case BoorlVariant::optimistic: return "optimistic";
            case BoorlVariant::pessimistic: return "pessimistic";
        }
        return "?";
    };
    std::vector<AblationRow> rows;
    for (BoorlVariant v : variants) {
        std::vector<double> early, finals;
        for (std::uint64_t seed : seeds) {
            Rng rng(seed);
            BoorlResult res = run_boorl(env, offline, config, v, rng);
            early.push_back(res.early_regret());
            finals.push_back(res.eval_return);
        }
        auto stats = [](const std::vector<double>& xs) {
            double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
            double var = 0.0;
            for (double x : xs) var += (x - mean) * (x - mean);
            var = xs.size() > 1 ? var / (xs.size() - 1) : 0.0;
            return std::pair<double, double>(mean, std::sqrt(var));
        };
        AblationRow row;
        row.variant = name(v);
        std::tie(row.early_regret_mean, row.early_regret_std) = stats(early);
        std::tie(row.final_return_mean, row.final_return_std) = stats(finals);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace otolab
