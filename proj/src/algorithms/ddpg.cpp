#include "marl/algorithms/ddpg.hpp"

#include <cmath>
#include <stdexcept>

namespace marl {

DdpgLearner make_ddpg(int obs_dim, const std::vector<int>& hidden, int action_dim, bool discrete,
                      const Hyperparams& hp, double actor_lr, double critic_lr, double temperature,
                      std::uint64_t seed) {
    hp.validate();
    if (temperature <= 0.0) throw std::invalid_argument("ddpg: temperature must be positive");
    DdpgLearner learner;
    learner.discrete = discrete;
    learner.action_dim = action_dim;
    learner.temperature = temperature;
    learner.hp = hp;
    learner.actor = mlp_init(layer_spec(obs_dim, hidden, action_dim), Activation::Tanh,
                             discrete ? OutputActivation::Identity : OutputActivation::Tanh,
                             actor_net_seed(seed, 0));
    learner.critic = mlp_init(layer_spec(obs_dim + action_dim, hidden, 1), Activation::Tanh,
                              OutputActivation::Identity, critic_net_seed(seed, 0));
    learner.actor_target = learner.actor;
    learner.critic_target = learner.critic;
    learner.actor_opt = make_optimizer(learner.actor, OptimizerKind::Adam, actor_lr);
    learner.critic_opt = make_optimizer(learner.critic, OptimizerKind::Adam, critic_lr);
    return learner;
}

namespace {

Eigen::MatrixXd vstack(const Eigen::MatrixXd& top, const Eigen::MatrixXd& bottom) {
    Eigen::MatrixXd out(top.rows() + bottom.rows(), top.cols());
    out.topRows(top.rows()) = top;
    out.bottomRows(bottom.rows()) = bottom;
    return out;
}

}  // namespace

std::pair<double, double> ddpg_update(DdpgLearner& learner, const std::vector<Transition>& batch,
                                      int agent) {
    const int B = static_cast<int>(batch.size());
    if (B == 0) throw std::invalid_argument("ddpg_update: empty batch");

    Eigen::MatrixXd obs = stack_obs(batch, agent);
    Eigen::MatrixXd next_obs = stack_next_obs(batch, agent);
    Eigen::VectorXd rewards = stack_rewards(batch, agent);
    Eigen::VectorXd done = stack_done(batch);
    Eigen::MatrixXd taken = learner.discrete
                                ? stack_actions_onehot(batch, agent, learner.action_dim)
                                : stack_actions_vector(batch, agent, learner.action_dim);

    // Critic target: y = r + gamma (1-d) Q_target(o', mu_target(o')).
    Eigen::MatrixXd next_act = mlp_forward(learner.actor_target, next_obs);
    if (learner.discrete) {
        next_act = softmax_columns(next_act / learner.temperature);
    }
    Eigen::MatrixXd next_q = mlp_forward(learner.critic_target, vstack(next_obs, next_act));
    Eigen::VectorXd target =
        rewards.array() + learner.hp.gamma * (1.0 - done.array()) * next_q.row(0).transpose().array();

    // Critic regression.
    MlpTrace critic_trace;
    Eigen::MatrixXd q = mlp_forward_cached(learner.critic, vstack(obs, taken), critic_trace);
    Eigen::VectorXd diff = q.row(0).transpose() - target;
    double critic_loss = diff.squaredNorm() / B;
    if (!std::isfinite(critic_loss)) throw std::runtime_error("ddpg_update: non-finite critic loss");
    Eigen::MatrixXd dq = (2.0 / B) * diff.transpose();
    Gradients critic_grads;
    mlp_backward(learner.critic, critic_trace, dq, critic_grads);
    optimizer_step(learner.critic, critic_grads, learner.critic_opt);

    // Actor ascent through the critic.
    MlpTrace actor_trace;
    Eigen::MatrixXd logits = mlp_forward_cached(learner.actor, obs, actor_trace);
    Eigen::MatrixXd act = learner.discrete ? softmax_columns(logits / learner.temperature)
                                           : logits;
    MlpTrace q_trace;
    Eigen::MatrixXd qa = mlp_forward_cached(learner.critic, vstack(obs, act), q_trace);
    double actor_objective = qa.row(0).mean();
    if (!std::isfinite(actor_objective)) {
        throw std::runtime_error("ddpg_update: non-finite actor objective");
    }
    Eigen::MatrixXd dqa = Eigen::MatrixXd::Constant(1, B, -1.0 / B);  // minimize -mean Q
    Gradients unused;
    Eigen::MatrixXd input_grad = mlp_backward(learner.critic, q_trace, dqa, unused);
    Eigen::MatrixXd dact = input_grad.bottomRows(learner.action_dim);
    // Discrete: relaxed softmax sits outside the actor net, so its jacobian
    // is applied here; continuous: tanh output is handled inside backward.
    Eigen::MatrixXd dlogits = learner.discrete
                                  ? (softmax_backward_columns(act, dact) / learner.temperature).eval()
                                  : dact;
    Gradients actor_grads;
    mlp_backward(learner.actor, actor_trace, dlogits, actor_grads);
    optimizer_step(learner.actor, actor_grads, learner.actor_opt);

    soft_update(learner.critic_target, learner.critic, learner.hp.tau);
    soft_update(learner.actor_target, learner.actor, learner.hp.tau);
    learner.updates += 1;
    return {critic_loss, actor_objective};
}

int ddpg_act_discrete(const DdpgLearner& learner, const Eigen::VectorXd& obs, double noise_sigma,
                      Rng& rng) {
    Eigen::VectorXd logits = mlp_forward(learner.actor, obs);
    for (Eigen::Index i = 0; i < logits.size(); ++i) logits(i) += noise_sigma * rng.normal();
    return argmax_lowest(logits);
}

Eigen::VectorXd ddpg_act_continuous(const DdpgLearner& learner, const Eigen::VectorXd& obs,
                                    double noise_sigma, Rng& rng) {
    Eigen::VectorXd act = mlp_forward(learner.actor, obs);
    for (Eigen::Index i = 0; i < act.size(); ++i) {
        act(i) = std::clamp(act(i) + noise_sigma * rng.normal(), -1.0, 1.0);
    }
    return act;
}

}  // namespace marl
