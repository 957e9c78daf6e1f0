#include "marl/algorithms/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace marl {

PpoLearner make_ppo(int obs_dim, const std::vector<int>& hidden, int n_actions,
                    const Hyperparams& hp, double learning_rate, std::uint64_t seed) {
    hp.validate();
    PpoLearner learner;
    learner.policy = mlp_init(layer_spec(obs_dim, hidden, n_actions), Activation::Tanh,
                              OutputActivation::Softmax, actor_net_seed(seed, 0));
    learner.value = mlp_init(layer_spec(obs_dim, hidden, 1), Activation::Tanh,
                             OutputActivation::Identity, critic_net_seed(seed, 0));
    learner.policy_opt = make_optimizer(learner.policy, OptimizerKind::Adam, learning_rate);
    learner.value_opt = make_optimizer(learner.value, OptimizerKind::Adam, learning_rate);
    learner.hp = hp;
    return learner;
}

Eigen::VectorXd gae_advantages(const Eigen::VectorXd& rewards, const Eigen::VectorXd& values,
                               const std::vector<std::uint8_t>& dones, double gamma, double lambda) {
    const Eigen::Index T = rewards.size();
    if (values.size() != T + 1) {
        throw std::invalid_argument("gae_advantages: values must have one bootstrap extra entry");
    }
    if (static_cast<Eigen::Index>(dones.size()) != T) {
        throw std::invalid_argument("gae_advantages: dones length mismatch");
    }
    Eigen::VectorXd adv(T);
    double running = 0.0;
    for (Eigen::Index t = T - 1; t >= 0; --t) {
        double not_done = dones[static_cast<std::size_t>(t)] ? 0.0 : 1.0;
        double delta = rewards(t) + gamma * not_done * values(t + 1) - values(t);
        running = delta + gamma * lambda * not_done * running;
        adv(t) = running;
    }
    return adv;
}

int ppo_act(const PpoLearner& learner, const Eigen::VectorXd& obs, Rng& rng, double* logp,
            double* value) {
    Eigen::VectorXd probs = mlp_forward(learner.policy, obs);
    double u = rng.uniform();
    int action = static_cast<int>(probs.size()) - 1;
    double acc = 0.0;
    for (int i = 0; i < probs.size(); ++i) {
        acc += probs(i);
        if (u < acc) {
            action = i;
            break;
        }
    }
    if (logp) *logp = std::log(std::max(probs(action), 1e-12));
    if (value) *value = mlp_forward(learner.value, obs)(0);
    return action;
}

int ppo_act_greedy(const PpoLearner& learner, const Eigen::VectorXd& obs) {
    return argmax_lowest(mlp_forward(learner.policy, obs));
}

PpoStats ppo_update(PpoLearner& learner, const std::vector<RolloutStep>& rollout,
                    double bootstrap_value, Rng& shuffle_rng) {
    const int T = static_cast<int>(rollout.size());
    if (T == 0) throw std::invalid_argument("ppo_update: empty rollout");

    Eigen::MatrixXd obs(rollout[0].obs.size(), T);
    Eigen::VectorXd rewards(T), values(T + 1), old_logp(T);
    std::vector<std::uint8_t> dones(static_cast<std::size_t>(T));
    std::vector<int> actions(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
        const RolloutStep& s = rollout[static_cast<std::size_t>(t)];
        obs.col(t) = s.obs;
        rewards(t) = s.reward;
        values(t) = s.value;
        old_logp(t) = s.logp;
        dones[static_cast<std::size_t>(t)] = s.done ? 1 : 0;
        actions[static_cast<std::size_t>(t)] = s.action;
    }
    values(T) = bootstrap_value;

    Eigen::VectorXd adv = gae_advantages(rewards, values, dones, learner.hp.gamma,
                                         learner.hp.gae_lambda);
    Eigen::VectorXd returns = adv + values.head(T);
    if (learner.normalize_advantages) {
        double mean = adv.mean();
        double var = (adv.array() - mean).square().mean();
        adv = (adv.array() - mean) / (std::sqrt(var) + 1e-8);
    }

    const double clip = learner.hp.clip_ratio;
    const int mb = std::max(1, std::min(learner.minibatch, T));
    std::vector<int> order(static_cast<std::size_t>(T));
    std::iota(order.begin(), order.end(), 0);

    PpoStats stats;
    int minibatches = 0;
    for (int epoch = 0; epoch < learner.epochs; ++epoch) {
        for (int i = T - 1; i > 0; --i) {  // Fisher-Yates with the provided rng
            std::swap(order[static_cast<std::size_t>(i)],
                      order[static_cast<std::size_t>(shuffle_rng.uniform_int(i + 1))]);
        }
        for (int start = 0; start < T; start += mb) {
            const int m = std::min(mb, T - start);
            Eigen::MatrixXd o(obs.rows(), m);
            for (int j = 0; j < m; ++j) o.col(j) = obs.col(order[static_cast<std::size_t>(start + j)]);

            MlpTrace ptrace;
            Eigen::MatrixXd probs = mlp_forward_cached(learner.policy, o, ptrace);
            Eigen::MatrixXd dprobs = Eigen::MatrixXd::Zero(probs.rows(), probs.cols());
            double policy_loss = 0.0, entropy = 0.0, clipped = 0.0;
            for (int j = 0; j < m; ++j) {
                int idx = order[static_cast<std::size_t>(start + j)];
                int a = actions[static_cast<std::size_t>(idx)];
                double A = adv(idx);
                double p = std::max(probs(a, j), 1e-12);
                double ratio = std::exp(std::log(p) - old_logp(idx));
                double unclipped = ratio * A;
                double clipped_obj = std::clamp(ratio, 1.0 - clip, 1.0 + clip) * A;
                policy_loss -= std::min(unclipped, clipped_obj);
                if (unclipped <= clipped_obj) {
                    // Unclipped branch active: gradient flows through the ratio.
                    dprobs(a, j) -= A * ratio / p;
                } else {
                    clipped += 1.0;
                }
                for (int k = 0; k < probs.rows(); ++k) {
                    double pk = std::max(probs(k, j), 1e-12);
                    entropy -= probs(k, j) * std::log(pk);
                    // Entropy bonus is maximized alongside the surrogate.
                    dprobs(k, j) += learner.hp.entropy_coef * (std::log(pk) + 1.0);
                }
            }
            policy_loss /= m;
            entropy /= m;
            dprobs /= m;
            if (!std::isfinite(policy_loss)) throw std::runtime_error("ppo_update: non-finite policy loss");

            MlpTrace vtrace;
            Eigen::MatrixXd v = mlp_forward_cached(learner.value, o, vtrace);
            double value_loss = 0.0;
            Eigen::MatrixXd dv(1, m);
            for (int j = 0; j < m; ++j) {
                int idx = order[static_cast<std::size_t>(start + j)];
                double diff = v(0, j) - returns(idx);
                value_loss += diff * diff;
                dv(0, j) = learner.hp.value_coef * 2.0 * diff / m;
            }
            value_loss /= m;
            if (!std::isfinite(value_loss)) throw std::runtime_error("ppo_update: non-finite value loss");

            Gradients pgrads, vgrads;
            mlp_backward(learner.policy, ptrace, dprobs, pgrads);
            mlp_backward(learner.value, vtrace, dv, vgrads);
            optimizer_step(learner.policy, pgrads, learner.policy_opt);
            optimizer_step(learner.value, vgrads, learner.value_opt);

            stats.policy_loss += policy_loss;
            stats.value_loss += value_loss;
            stats.entropy += entropy;
            stats.clip_fraction += clipped / m;
            minibatches += 1;
        }
    }
    stats.policy_loss /= minibatches;
    stats.value_loss /= minibatches;
    stats.entropy /= minibatches;
    stats.clip_fraction /= minibatches;
    return stats;
}

}  // namespace marl
