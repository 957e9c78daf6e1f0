#include "marl/algorithms/maddpg.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace marl {

int MaddpgLearner::joint_obs_dim() const {
    return std::accumulate(obs_dims.begin(), obs_dims.end(), 0);
}

int MaddpgLearner::joint_action_dim() const {
    return std::accumulate(action_dims.begin(), action_dims.end(), 0);
}

MaddpgLearner make_maddpg(const std::vector<int>& obs_dims, const std::vector<int>& action_dims,
                          const std::vector<int>& hidden, bool discrete, const Hyperparams& hp,
                          double actor_lr, double critic_lr, double temperature,
                          std::uint64_t seed) {
    hp.validate();
    if (obs_dims.empty() || obs_dims.size() != action_dims.size()) {
        throw std::invalid_argument("maddpg: obs/action dimension lists must match and be non-empty");
    }
    if (temperature <= 0.0) throw std::invalid_argument("maddpg: temperature must be positive");
    MaddpgLearner learner;
    learner.n_agents = static_cast<int>(obs_dims.size());
    learner.obs_dims = obs_dims;
    learner.action_dims = action_dims;
    learner.discrete = discrete;
    learner.temperature = temperature;
    learner.hp = hp;
    const int joint = learner.joint_obs_dim() + learner.joint_action_dim();
    for (int i = 0; i < learner.n_agents; ++i) {
        learner.actors.push_back(mlp_init(
            layer_spec(obs_dims[static_cast<std::size_t>(i)], hidden,
                       action_dims[static_cast<std::size_t>(i)]),
            Activation::Tanh, discrete ? OutputActivation::Identity : OutputActivation::Tanh,
            actor_net_seed(seed, i)));
        learner.critics.push_back(mlp_init(layer_spec(joint, hidden, 1), Activation::Tanh,
                                           OutputActivation::Identity, critic_net_seed(seed, i)));
        learner.actor_targets.push_back(learner.actors.back());
        learner.critic_targets.push_back(learner.critics.back());
        learner.actor_opts.push_back(
            make_optimizer(learner.actors.back(), OptimizerKind::Adam, actor_lr));
        learner.critic_opts.push_back(
            make_optimizer(learner.critics.back(), OptimizerKind::Adam, critic_lr));
    }
    return learner;
}

namespace {

// Stacks per-agent blocks vertically: [blocks[0]; blocks[1]; ...].
Eigen::MatrixXd vstack_blocks(const std::vector<Eigen::MatrixXd>& blocks) {
    Eigen::Index rows = 0;
    for (const auto& b : blocks) rows += b.rows();
    Eigen::MatrixXd out(rows, blocks.front().cols());
    Eigen::Index at = 0;
    for (const auto& b : blocks) {
        out.middleRows(at, b.rows()) = b;
        at += b.rows();
    }
    return out;
}

}  // namespace

std::pair<double, double> maddpg_update(MaddpgLearner& learner, int agent_index,
                                        const std::vector<Transition>& joint_batch) {
    const int B = static_cast<int>(joint_batch.size());
    if (B == 0) throw std::invalid_argument("maddpg_update: empty batch");
    if (agent_index < 0 || agent_index >= learner.n_agents) {
        throw std::invalid_argument("maddpg_update: agent index out of range");
    }
    if (joint_batch[0].joint_obs.size() != static_cast<std::size_t>(learner.n_agents)) {
        throw std::invalid_argument("maddpg_update: batch agent count mismatch");
    }
    const std::size_t ai = static_cast<std::size_t>(agent_index);

    std::vector<Eigen::MatrixXd> obs(static_cast<std::size_t>(learner.n_agents));
    std::vector<Eigen::MatrixXd> next_obs(static_cast<std::size_t>(learner.n_agents));
    std::vector<Eigen::MatrixXd> taken(static_cast<std::size_t>(learner.n_agents));
    for (int k = 0; k < learner.n_agents; ++k) {
        std::size_t uk = static_cast<std::size_t>(k);
        obs[uk] = stack_obs(joint_batch, k);
        next_obs[uk] = stack_next_obs(joint_batch, k);
        taken[uk] = learner.discrete
                        ? stack_actions_onehot(joint_batch, k, learner.action_dims[uk])
                        : stack_actions_vector(joint_batch, k, learner.action_dims[uk]);
    }
    Eigen::VectorXd rewards = stack_rewards(joint_batch, agent_index);
    Eigen::VectorXd done = stack_done(joint_batch);

    // Critic target: every agent's target policy acts on its next observation.
    std::vector<Eigen::MatrixXd> next_act(static_cast<std::size_t>(learner.n_agents));
    for (int k = 0; k < learner.n_agents; ++k) {
        std::size_t uk = static_cast<std::size_t>(k);
        next_act[uk] = mlp_forward(learner.actor_targets[uk], next_obs[uk]);
        if (learner.discrete) {
            next_act[uk] = softmax_columns(next_act[uk] / learner.temperature);
        }
    }
    std::vector<Eigen::MatrixXd> joint_next = next_obs;
    joint_next.insert(joint_next.end(), next_act.begin(), next_act.end());
    Eigen::MatrixXd next_q = mlp_forward(learner.critic_targets[ai], vstack_blocks(joint_next));
    Eigen::VectorXd target =
        rewards.array() + learner.hp.gamma * (1.0 - done.array()) * next_q.row(0).transpose().array();

    // Critic regression on the stored joint actions.
    std::vector<Eigen::MatrixXd> joint_now = obs;
    joint_now.insert(joint_now.end(), taken.begin(), taken.end());
    MlpTrace critic_trace;
    Eigen::MatrixXd q =
        mlp_forward_cached(learner.critics[ai], vstack_blocks(joint_now), critic_trace);
    Eigen::VectorXd diff = q.row(0).transpose() - target;
    double critic_loss = diff.squaredNorm() / B;
    if (!std::isfinite(critic_loss)) throw std::runtime_error("maddpg_update: non-finite critic loss");
    Eigen::MatrixXd dq = (2.0 / B) * diff.transpose();
    Gradients critic_grads;
    mlp_backward(learner.critics[ai], critic_trace, dq, critic_grads);
    optimizer_step(learner.critics[ai], critic_grads, learner.critic_opts[ai]);

    // Actor ascent: agent i's slot carries its differentiable relaxed action,
    // all other slots keep the batch actions.
    MlpTrace actor_trace;
    Eigen::MatrixXd logits = mlp_forward_cached(learner.actors[ai], obs[ai], actor_trace);
    Eigen::MatrixXd act = learner.discrete ? softmax_columns(logits / learner.temperature)
                                           : logits;
    std::vector<Eigen::MatrixXd> joint_actor = obs;
    for (int k = 0; k < learner.n_agents; ++k) {
        std::size_t uk = static_cast<std::size_t>(k);
        joint_actor.push_back(k == agent_index ? act : taken[uk]);
    }
    MlpTrace q_trace;
    Eigen::MatrixXd qa = mlp_forward_cached(learner.critics[ai], vstack_blocks(joint_actor), q_trace);
    double actor_objective = qa.row(0).mean();
    if (!std::isfinite(actor_objective)) {
        throw std::runtime_error("maddpg_update: non-finite actor objective");
    }
    Eigen::MatrixXd dqa = Eigen::MatrixXd::Constant(1, B, -1.0 / B);
    Gradients unused;
    Eigen::MatrixXd input_grad = mlp_backward(learner.critics[ai], q_trace, dqa, unused);
    int offset = learner.joint_obs_dim();
    for (int k = 0; k < agent_index; ++k) offset += learner.action_dims[static_cast<std::size_t>(k)];
    Eigen::MatrixXd dact = input_grad.middleRows(offset, learner.action_dims[ai]);
    Eigen::MatrixXd dlogits = learner.discrete
                                  ? (softmax_backward_columns(act, dact) / learner.temperature).eval()
                                  : dact;
    Gradients actor_grads;
    mlp_backward(learner.actors[ai], actor_trace, dlogits, actor_grads);
    optimizer_step(learner.actors[ai], actor_grads, learner.actor_opts[ai]);

    soft_update(learner.critic_targets[ai], learner.critics[ai], learner.hp.tau);
    soft_update(learner.actor_targets[ai], learner.actors[ai], learner.hp.tau);
    learner.updates += 1;
    return {critic_loss, actor_objective};
}

int maddpg_act_discrete(const MaddpgLearner& learner, int agent, const Eigen::VectorXd& obs,
                        double noise_sigma, Rng& rng) {
    Eigen::VectorXd logits = mlp_forward(learner.actors[static_cast<std::size_t>(agent)], obs);
    for (Eigen::Index i = 0; i < logits.size(); ++i) logits(i) += noise_sigma * rng.normal();
    return argmax_lowest(logits);
}

int maddpg_act_greedy(const MaddpgLearner& learner, int agent, const Eigen::VectorXd& obs) {
    return argmax_lowest(mlp_forward(learner.actors[static_cast<std::size_t>(agent)], obs));
}

}  // namespace marl
