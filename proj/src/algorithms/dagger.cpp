#include "marl/algorithms/dagger.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace marl {

double DaggerLearner::beta() const { return std::pow(beta_decay, iteration); }

DaggerLearner make_dagger(int obs_dim, const std::vector<int>& hidden, int n_actions,
                          double learning_rate, std::uint64_t seed) {
    DaggerLearner learner;
    learner.policy = mlp_init(layer_spec(obs_dim, hidden, n_actions), Activation::Tanh,
                              OutputActivation::Softmax, actor_net_seed(seed, 0));
    learner.opt = make_optimizer(learner.policy, OptimizerKind::Adam, learning_rate);
    return learner;
}

int dagger_act_greedy(const DaggerLearner& learner, const Eigen::VectorXd& obs) {
    return argmax_lowest(mlp_forward(learner.policy, obs));
}

namespace {

double train_classifier(DaggerLearner& learner, Rng& rng) {
    const int N = static_cast<int>(learner.dataset.size());
    if (N == 0) return 0.0;
    const int mb = std::max(1, std::min(learner.minibatch, N));
    std::vector<int> order(static_cast<std::size_t>(N));
    std::iota(order.begin(), order.end(), 0);
    double last_epoch_loss = 0.0;
    for (int epoch = 0; epoch < learner.train_epochs; ++epoch) {
        for (int i = N - 1; i > 0; --i) {
            std::swap(order[static_cast<std::size_t>(i)],
                      order[static_cast<std::size_t>(rng.uniform_int(i + 1))]);
        }
        double epoch_loss = 0.0;
        for (int start = 0; start < N; start += mb) {
            const int m = std::min(mb, N - start);
            Eigen::MatrixXd o(learner.policy.input_size(), m);
            for (int j = 0; j < m; ++j) {
                o.col(j) = learner.dataset[static_cast<std::size_t>(order[static_cast<std::size_t>(start + j)])].first;
            }
            MlpTrace trace;
            Eigen::MatrixXd probs = mlp_forward_cached(learner.policy, o, trace);
            Eigen::MatrixXd dprobs = Eigen::MatrixXd::Zero(probs.rows(), probs.cols());
            double loss = 0.0;
            for (int j = 0; j < m; ++j) {
                int label = learner.dataset[static_cast<std::size_t>(order[static_cast<std::size_t>(start + j)])].second;
                double p = std::max(probs(label, j), 1e-12);
                loss -= std::log(p);
                dprobs(label, j) = -1.0 / p / m;
            }
            loss /= m;
            if (!std::isfinite(loss)) throw std::runtime_error("dagger: non-finite training loss");
            Gradients grads;
            mlp_backward(learner.policy, trace, dprobs, grads);
            optimizer_step(learner.policy, grads, learner.opt);
            epoch_loss += loss * m;
        }
        last_epoch_loss = epoch_loss / N;
    }
    return last_epoch_loss;
}

}  // namespace

DaggerStats dagger_iterate(DaggerLearner& learner, Env& env, const ExpertPolicy& expert,
                           int episodes, std::uint64_t seed_base) {
    if (env.num_agents() != 1) {
        throw std::invalid_argument("dagger: single-agent environments only");
    }
    DaggerStats stats;
    const double beta = learner.beta();
    Rng mix_rng(mix_seed(seed_base, 0xDA99E4, static_cast<std::uint64_t>(learner.iteration)));
    for (int e = 0; e < episodes; ++e) {
        std::uint64_t ep_seed = mix_seed(
            seed_base, 0xE715, static_cast<std::uint64_t>(learner.iteration) * 1000003ULL +
                                    static_cast<std::uint64_t>(e));
        Eigen::VectorXd obs = env.reset(ep_seed)[0];
        while (!env.done()) {
            int expert_action = expert(env, obs);
            learner.dataset.emplace_back(obs, expert_action);  // label every visited state
            int act = mix_rng.uniform() < beta ? expert_action : dagger_act_greedy(learner, obs);
            StepResult r = env.step({Action{act}});
            obs = r.observations[0];
            stats.steps_collected += 1;
        }
    }
    Rng train_rng(mix_seed(seed_base, 0x7A17, static_cast<std::uint64_t>(learner.iteration)));
    stats.mean_ce_loss = train_classifier(learner, train_rng);
    stats.dataset_size = learner.dataset.size();
    learner.iteration += 1;
    return stats;
}

double dagger_agreement(const DaggerLearner& learner, Env& env, const ExpertPolicy& expert,
                        int min_states, std::uint64_t seed_base) {
    if (env.num_agents() != 1) {
        throw std::invalid_argument("dagger: single-agent environments only");
    }
    long states = 0, agree = 0;
    std::uint64_t episode = 0;
    while (states < min_states) {
        std::uint64_t ep_seed = mix_seed(seed_base, 0xEA7E, episode++);
        Eigen::VectorXd obs = env.reset(ep_seed)[0];
        while (!env.done()) {
            int expert_action = expert(env, obs);
            if (dagger_act_greedy(learner, obs) == expert_action) agree += 1;
            states += 1;
            StepResult r = env.step({Action{expert_action}});
            obs = r.observations[0];
        }
    }
    return static_cast<double>(agree) / static_cast<double>(states);
}

}  // namespace marl
