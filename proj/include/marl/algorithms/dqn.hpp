#pragma once

#include "marl/algorithms/common.hpp"

namespace marl {

/// Q-learner with a target network; discrete actions.
struct DqnLearner {
    Mlp q;
    Mlp q_target;
    OptimizerState opt;
    Hyperparams hp;
    EpsilonSchedule epsilon;
    long env_steps = 0;  // drives the epsilon schedule
    long updates = 0;

    int n_actions() const { return q.output_size(); }
};

DqnLearner make_dqn(int obs_dim, const std::vector<int>& hidden, int n_actions,
                    const Hyperparams& hp, double learning_rate, std::uint64_t seed);

/// One TD update on the batch: targets r + gamma (1-done) max_a' Q_target,
/// MSE on the taken actions, soft target update. Returns the loss. Throws
/// std::runtime_error on a non-finite loss (parameters untouched).
double dqn_update(DqnLearner& learner, const std::vector<Transition>& batch, int agent = 0);

/// Epsilon-greedy action at the learner's current schedule position.
int dqn_act(const DqnLearner& learner, const Eigen::VectorXd& obs, double epsilon, Rng& rng);

}  // namespace marl
