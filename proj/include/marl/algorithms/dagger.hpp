#pragma once

#include <functional>
#include <utility>

#include "marl/algorithms/common.hpp"
#include "marl/env.hpp"

namespace marl {

/// Expert queried at the environment's current state (the scripted policies
/// need internal state, not just the observation vector).
using ExpertPolicy = std::function<int(const Env& env, const Eigen::VectorXd& obs)>;

/// Imitation learner: aggregates expert labels on states visited by the
/// beta-mixture of expert and learner, then retrains the classifier on the
/// full dataset each iteration.
struct DaggerLearner {
    Mlp policy;  // softmax classifier over actions
    OptimizerState opt;
    std::vector<std::pair<Eigen::VectorXd, int>> dataset;
    double beta_decay = 0.5;  // beta_k = beta_decay^k
    int train_epochs = 40;
    int minibatch = 64;
    int iteration = 0;

    double beta() const;  // mixture weight of the expert at this iteration
};

DaggerLearner make_dagger(int obs_dim, const std::vector<int>& hidden, int n_actions,
                          double learning_rate, std::uint64_t seed);

struct DaggerStats {
    std::size_t dataset_size = 0;
    long steps_collected = 0;
    double mean_ce_loss = 0.0;
};

/// One DAGGER iteration on a single-agent environment: roll out the mixture
/// policy for `episodes` episodes (seeds derived from seed_base), label every
/// visited state with the expert's action, retrain, and advance the beta
/// schedule. Expert exceptions propagate.
DaggerStats dagger_iterate(DaggerLearner& learner, Env& env, const ExpertPolicy& expert,
                           int episodes, std::uint64_t seed_base);

/// Fraction of held-out expert-rollout states (at least min_states of them)
/// where the classifier's argmax matches the expert.
double dagger_agreement(const DaggerLearner& learner, Env& env, const ExpertPolicy& expert,
                        int min_states, std::uint64_t seed_base);

int dagger_act_greedy(const DaggerLearner& learner, const Eigen::VectorXd& obs);

}  // namespace marl
