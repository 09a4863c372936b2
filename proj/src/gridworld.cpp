#include "otolab/gridworld.hpp"

#include <sstream>
#include <stdexcept>

namespace otolab {

Gridworld Gridworld::from_map(const std::string& text, int horizon, double slip_prob) {
    std::vector<std::string> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) rows.push_back(line);
    }
    if (rows.empty()) throw std::invalid_argument("Gridworld: empty map");
    Gridworld g;
    g.height = static_cast<int>(rows.size());
    g.width = static_cast<int>(rows[0].size());
    g.H = horizon;
    g.slip_prob = slip_prob;
    g.wall.assign(g.width * g.height, 0);
    int starts = 0, goals = 0;
    for (int y = 0; y < g.height; ++y) {
        if (static_cast<int>(rows[y].size()) != g.width) throw std::invalid_argument("Gridworld: ragged map");
        for (int x = 0; x < g.width; ++x) {
            char c = rows[y][x];
            int s = g.cell(x, y);
            switch (c) {
                case '#': g.wall[s] = 1; break;
                case '.': break;
                case 'S': g.start = s; ++starts; break;
                case 'G': g.goal = s; ++goals; break;
                default: throw std::invalid_argument(std::string("Gridworld: bad map character '") + c + "'");
            }
        }
    }
    if (starts != 1 || goals != 1) throw std::invalid_argument("Gridworld: map needs exactly one S and one G");
    if (horizon < 1) throw std::invalid_argument("Gridworld: horizon must be >= 1");
    if (slip_prob < 0.0 || slip_prob >= 1.0) throw std::invalid_argument("Gridworld: slip_prob outside [0,1)");
    if (g.optimal_return() <= 0.0) throw std::invalid_argument("Gridworld: goal unreachable within horizon");
    return g;
}

Gridworld Gridworld::open_room(int width, int height, int horizon, double slip_prob) {
    std::string map;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (x == 0 && y == 0) map += 'S';
            else if (x == width - 1 && y == height - 1) map += 'G';
            else map += '.';
        }
        map += '\n';
    }
    return from_map(map, horizon, slip_prob);
}

int Gridworld::move(int s, int a) const {
    int x = s % width;
    int y = s / width;
    switch (a) {
        case 0: y -= 1; break;  // up
        case 1: y += 1; break;  // down
        case 2: x -= 1; break;  // left
        case 3: x += 1; break;  // right
        default: throw std::out_of_range("Gridworld::move: bad action");
    }
    if (x < 0 || x >= width || y < 0 || y >= height) return s;
    int t = cell(x, y);
    return is_wall(t) ? s : t;
}

Gridworld::StepResult Gridworld::step(int s, int a, Rng& rng) const {
    int effective = a;
    if (slip_prob > 0.0 && rng.uniform() < slip_prob) effective = static_cast<int>(rng.below(kActions));
    int s_next = move(s, effective);
    bool done = s_next == goal;
    return {s_next, done ? 1.0 : 0.0, done};
}

namespace {

// P(s'|s,a) marginalized over the slip.
void transition_probs(const Gridworld& g, int s, int a, std::vector<std::pair<int, double>>& out) {
    out.clear();
    auto add = [&](int t, double p) {
        for (auto& e : out)
            if (e.first == t) {
                e.second += p;
                return;
            }
        out.emplace_back(t, p);
    };
    add(g.move(s, a), 1.0 - g.slip_prob);
    for (int b = 0; b < Gridworld::kActions; ++b) add(g.move(s, b), g.slip_prob / Gridworld::kActions);
}

}  // namespace

double Gridworld::optimal_return() const {
    int S = n_states();
    std::vector<double> v(S, 0.0);
    std::vector<std::pair<int, double>> probs;
    for (int t = 0; t < H; ++t) {
        std::vector<double> next(S, 0.0);
        for (int s = 0; s < S; ++s) {
            if (is_wall(s) || s == goal) continue;
            double best = 0.0;
            for (int a = 0; a < kActions; ++a) {
                transition_probs(*this, s, a, probs);
                double q = 0.0;
                for (auto [sn, p] : probs) q += p * (sn == goal ? 1.0 : v[sn]);
                best = std::max(best, q);
            }
            next[s] = best;
        }
        v = next;
    }
    return v[start];
}

std::vector<int> Gridworld::optimal_policy() const {
    // A lightly discounted fixed point so the greedy action prefers shorter
    // routes; undiscounted values saturate at 1 on every reachable state and
    // leave the argmax tied (a greedy policy over ties can loop forever).
    const double discount = 0.99;
    int S = n_states();
    std::vector<double> v(S, 0.0);
    std::vector<std::pair<int, double>> probs;
    for (int t = 0; t < 4 * (width + height) + H; ++t) {
        std::vector<double> next(S, 0.0);
        for (int s = 0; s < S; ++s) {
            if (is_wall(s) || s == goal) continue;
            double best = 0.0;
            for (int a = 0; a < kActions; ++a) {
                transition_probs(*this, s, a, probs);
                double q = 0.0;
                for (auto [sn, p] : probs) q += p * (sn == goal ? 1.0 : discount * v[sn]);
                best = std::max(best, q);
            }
            next[s] = best;
        }
        v = next;
    }
    std::vector<int> pi(S, 0);
    for (int s = 0; s < S; ++s) {
        double best = -1.0;
        for (int a = 0; a < kActions; ++a) {
            transition_probs(*this, s, a, probs);
            double q = 0.0;
            for (auto [sn, p] : probs) q += p * (sn == goal ? 1.0 : discount * v[sn]);
            if (q > best) {
                best = q;
                pi[s] = a;
            }
        }
    }
    return pi;
}

}  // namespace otolab
