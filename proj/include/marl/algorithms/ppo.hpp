#pragma once

#include "marl/algorithms/common.hpp"

namespace marl {

/// Clipped-surrogate policy-gradient learner with a separate value net.
struct PpoLearner {
    Mlp policy;  // softmax over actions
    Mlp value;   // scalar state value
    OptimizerState policy_opt, value_opt;
    Hyperparams hp;  // clip_ratio, gae_lambda, entropy_coef, value_coef, gamma
    int epochs = 4;
    int minibatch = 64;
    long horizon = 2048;
    bool normalize_advantages = true;

    int n_actions() const { return policy.output_size(); }
};

PpoLearner make_ppo(int obs_dim, const std::vector<int>& hidden, int n_actions,
                    const Hyperparams& hp, double learning_rate, std::uint64_t seed);

struct RolloutStep {
    Eigen::VectorXd obs;
    int action = 0;
    double logp = 0.0;
    double reward = 0.0;
    double value = 0.0;
    bool done = false;
};

struct PpoStats {
    double policy_loss = 0.0;
    double value_loss = 0.0;
    double entropy = 0.0;
    double clip_fraction = 0.0;
};

/// Generalized advantage estimation. values carries one bootstrap entry
/// beyond the rewards: values.size() == rewards.size() + 1.
Eigen::VectorXd gae_advantages(const Eigen::VectorXd& rewards, const Eigen::VectorXd& values,
                               const std::vector<std::uint8_t>& dones, double gamma, double lambda);

/// Runs `epochs` passes of shuffled minibatches over the rollout.
/// bootstrap_value is V of the state following the last step (0 if that
/// step ended its episode). Stats are averaged over all minibatches, each
/// evaluated before its own update. Throws std::runtime_error on
/// non-finite losses.
PpoStats ppo_update(PpoLearner& learner, const std::vector<RolloutStep>& rollout,
                    double bootstrap_value, Rng& shuffle_rng);

/// Samples from the current policy; fills logp/value for the rollout record.
int ppo_act(const PpoLearner& learner, const Eigen::VectorXd& obs, Rng& rng, double* logp,
            double* value);

int ppo_act_greedy(const PpoLearner& learner, const Eigen::VectorXd& obs);

}  // namespace marl
