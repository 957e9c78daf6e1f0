#include "marl/algorithms/dqn.hpp"

#include <cmath>
#include <stdexcept>

namespace marl {

DqnLearner make_dqn(int obs_dim, const std::vector<int>& hidden, int n_actions,
                    const Hyperparams& hp, double learning_rate, std::uint64_t seed) {
    hp.validate();
    DqnLearner learner;
    learner.q = mlp_init(layer_spec(obs_dim, hidden, n_actions), Activation::Tanh,
                         OutputActivation::Identity, critic_net_seed(seed, 0));
    learner.q_target = learner.q;
    learner.opt = make_optimizer(learner.q, OptimizerKind::Adam, learning_rate);
    learner.hp = hp;
    return learner;
}

double dqn_update(DqnLearner& learner, const std::vector<Transition>& batch, int agent) {
    const int B = static_cast<int>(batch.size());
    if (B == 0) throw std::invalid_argument("dqn_update: empty batch");

    Eigen::MatrixXd obs = stack_obs(batch, agent);
    Eigen::MatrixXd next_obs = stack_next_obs(batch, agent);
    Eigen::VectorXd rewards = stack_rewards(batch, agent);
    Eigen::VectorXd done = stack_done(batch);

    Eigen::MatrixXd next_q = mlp_forward(learner.q_target, next_obs);
    Eigen::VectorXd target(B);
    for (int i = 0; i < B; ++i) {
        target(i) = rewards(i) +
                    learner.hp.gamma * (1.0 - done(i)) * next_q.col(i).maxCoeff();
    }

    MlpTrace trace;
    Eigen::MatrixXd q = mlp_forward_cached(learner.q, obs, trace);
    Eigen::MatrixXd dq = Eigen::MatrixXd::Zero(q.rows(), q.cols());
    double loss = 0.0;
    for (int i = 0; i < B; ++i) {
        const Action& a = batch[static_cast<std::size_t>(i)].joint_actions[static_cast<std::size_t>(agent)];
        int ai = std::get<int>(a);
        double diff = q(ai, i) - target(i);
        loss += diff * diff;
        dq(ai, i) = 2.0 * diff / B;
    }
    loss /= B;
    if (!std::isfinite(loss)) {
        throw std::runtime_error("dqn_update: non-finite loss");
    }

    Gradients grads;
    mlp_backward(learner.q, trace, dq, grads);
    optimizer_step(learner.q, grads, learner.opt);
    soft_update(learner.q_target, learner.q, learner.hp.tau);
    learner.updates += 1;
    return loss;
}

int dqn_act(const DqnLearner& learner, const Eigen::VectorXd& obs, double epsilon, Rng& rng) {
    return epsilon_greedy(mlp_forward(learner.q, obs), epsilon, rng);
}

}  // namespace marl
