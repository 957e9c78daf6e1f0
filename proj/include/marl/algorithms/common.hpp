#pragma once

#include <Eigen/Dense>
#include <vector>

#include "marl/nn.hpp"
#include "marl/replay.hpp"
#include "marl/rng.hpp"

namespace marl {

// Batch assembly: columns are samples throughout.

Eigen::MatrixXd stack_obs(const std::vector<Transition>& batch, int agent);
Eigen::MatrixXd stack_next_obs(const std::vector<Transition>& batch, int agent);
Eigen::VectorXd stack_rewards(const std::vector<Transition>& batch, int agent);
Eigen::VectorXd stack_done(const std::vector<Transition>& batch);
Eigen::MatrixXd stack_actions_onehot(const std::vector<Transition>& batch, int agent, int n_actions);
Eigen::MatrixXd stack_actions_vector(const std::vector<Transition>& batch, int agent, int dim);

/// Argmax with ties resolved to the lowest index.
int argmax_lowest(const Eigen::VectorXd& v);

/// Epsilon-greedy over a Q-value vector: argmax with probability 1-epsilon,
/// otherwise uniform over all actions. Throws on an empty vector.
int epsilon_greedy(const Eigen::VectorXd& q_values, double epsilon, Rng& rng);

struct EpsilonSchedule {
    double start = 1.0;
    double end = 0.05;
    long decay_steps = 10000;

    double value(long step) const {
        if (decay_steps <= 0 || step >= decay_steps) return end;
        double f = static_cast<double>(step) / static_cast<double>(decay_steps);
        return start + f * (end - start);
    }
};

// Network seed derivation shared by DDPG and MADDPG so that a one-agent
// MADDPG learner starts from bitwise-identical parameters.
inline std::uint64_t actor_net_seed(std::uint64_t base, int agent) {
    return mix_seed(base, 0xAC7012ULL, static_cast<std::uint64_t>(agent));
}
inline std::uint64_t critic_net_seed(std::uint64_t base, int agent) {
    return mix_seed(base, 0xC2171CULL, static_cast<std::uint64_t>(agent));
}

/// Layer size list [input, hidden..., output].
std::vector<int> layer_spec(int input, const std::vector<int>& hidden, int output);

}  // namespace marl
