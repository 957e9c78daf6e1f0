#pragma once

#include "marl/algorithms/common.hpp"

namespace marl {

/// Centralized-critic actor-critic for N agents. Each agent keeps an actor
/// over its own observation and a critic over the concatenation of every
/// agent's observation and action; execution is decentralized (actors only).
struct MaddpgLearner {
    int n_agents = 0;
    std::vector<int> obs_dims;
    std::vector<int> action_dims;
    bool discrete = true;
    double temperature = 1.0;
    Hyperparams hp;
    std::vector<Mlp> actors, actor_targets;
    std::vector<Mlp> critics, critic_targets;
    std::vector<OptimizerState> actor_opts, critic_opts;
    long updates = 0;

    int joint_obs_dim() const;
    int joint_action_dim() const;
};

MaddpgLearner make_maddpg(const std::vector<int>& obs_dims, const std::vector<int>& action_dims,
                          const std::vector<int>& hidden, bool discrete, const Hyperparams& hp,
                          double actor_lr, double critic_lr, double temperature,
                          std::uint64_t seed);

/// Updates agent_index's critic and actor from a joint batch, then
/// soft-updates that agent's targets. Other agents' batch actions fill the
/// critic's remaining slots. Returns (critic loss, actor objective).
std::pair<double, double> maddpg_update(MaddpgLearner& learner, int agent_index,
                                        const std::vector<Transition>& joint_batch);

/// Decentralized exploration action for one agent (discrete: noisy logits,
/// argmax executed).
int maddpg_act_discrete(const MaddpgLearner& learner, int agent, const Eigen::VectorXd& obs,
                        double noise_sigma, Rng& rng);

int maddpg_act_greedy(const MaddpgLearner& learner, int agent, const Eigen::VectorXd& obs);

}  // namespace marl
