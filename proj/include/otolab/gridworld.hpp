#pragma once

#include <string>
#include <vector>

#include "otolab/rng.hpp"

namespace otolab {

// Four-action gridworld with a single terminal goal paying reward 1.
// Loaded from plain-text maps: '#' wall, '.' floor, 'S' start, 'G' goal.
struct Gridworld {
    int width = 0;
    int height = 0;
    int H = 0;                 // episode horizon
    double slip_prob = 0.0;    // chance the action is replaced by a uniform one
    int start = 0;
    int goal = 0;
    std::vector<char> wall;    // per cell

    static constexpr int kActions = 4;  // up, down, left, right

    static Gridworld from_map(const std::string& text, int horizon, double slip_prob);
    static Gridworld open_room(int width, int height, int horizon, double slip_prob);

    int n_states() const { return width * height; }
    int cell(int x, int y) const { return y * width + x; }
    bool is_wall(int s) const { return wall[s] != 0; }

    // Deterministic move outcome for (state, action), staying put on walls
    // and borders.
    int move(int s, int a) const;

    struct StepResult {
        int s_next;
        double reward;
        bool done;
    };
    StepResult step(int s, int a, Rng& rng) const;

    // Exact finite-horizon optimal value of the start state and the greedy
    // optimal policy (slip-aware dynamic programming).
    double optimal_return() const;
    std::vector<int> optimal_policy() const;  // stationary greedy, per state
};

}  // namespace otolab
