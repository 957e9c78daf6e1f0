#pragma once

#include "marl/algorithms/common.hpp"

namespace marl {

/// Deterministic-policy actor-critic with target networks. Continuous
/// actions use the actor output directly; discrete actions go through a
/// temperature-relaxed softmax so the critic stays differentiable, with the
/// argmax executed in the environment.
struct DdpgLearner {
    Mlp actor, critic;
    Mlp actor_target, critic_target;
    OptimizerState actor_opt, critic_opt;
    Hyperparams hp;
    bool discrete = true;
    int action_dim = 0;        // action count (discrete) or vector length
    double temperature = 1.0;  // relaxed one-hot temperature
    long updates = 0;
};

/// obs_dim/action_dim describe one agent. For continuous actors the output
/// activation is tanh (bounded actions); discrete actors emit logits.
DdpgLearner make_ddpg(int obs_dim, const std::vector<int>& hidden, int action_dim, bool discrete,
                      const Hyperparams& hp, double actor_lr, double critic_lr, double temperature,
                      std::uint64_t seed);

/// One update: critic regression to r + gamma (1-done) Q_target(o', mu_target(o')),
/// actor ascent on Q(o, mu(o)), then soft target updates. Returns
/// (critic loss, actor objective). Throws std::runtime_error on non-finite loss.
std::pair<double, double> ddpg_update(DdpgLearner& learner, const std::vector<Transition>& batch,
                                      int agent = 0);

/// Exploration: Gaussian noise on the logits (discrete, returns argmax) or
/// on the action vector (continuous, clipped to [-1, 1]).
int ddpg_act_discrete(const DdpgLearner& learner, const Eigen::VectorXd& obs, double noise_sigma,
                      Rng& rng);
Eigen::VectorXd ddpg_act_continuous(const DdpgLearner& learner, const Eigen::VectorXd& obs,
                                    double noise_sigma, Rng& rng);

}  // namespace marl
