#include "marl/algorithms/common.hpp"

#include <stdexcept>

namespace marl {

namespace {

void check_agent(const std::vector<Transition>& batch, int agent) {
    if (batch.empty()) throw std::invalid_argument("batch: empty");
    if (agent < 0 || agent >= static_cast<int>(batch[0].joint_obs.size())) {
        throw std::invalid_argument("batch: agent index out of range");
    }
}

}  // namespace

Eigen::MatrixXd stack_obs(const std::vector<Transition>& batch, int agent) {
    check_agent(batch, agent);
    Eigen::Index dim = batch[0].joint_obs[static_cast<std::size_t>(agent)].size();
    Eigen::MatrixXd out(dim, static_cast<Eigen::Index>(batch.size()));
    for (std::size_t i = 0; i < batch.size(); ++i) {
        out.col(static_cast<Eigen::Index>(i)) = batch[i].joint_obs[static_cast<std::size_t>(agent)];
    }
    return out;
}

Eigen::MatrixXd stack_next_obs(const std::vector<Transition>& batch, int agent) {
    check_agent(batch, agent);
    Eigen::Index dim = batch[0].joint_next_obs[static_cast<std::size_t>(agent)].size();
    Eigen::MatrixXd out(dim, static_cast<Eigen::Index>(batch.size()));
    for (std::size_t i = 0; i < batch.size(); ++i) {
        out.col(static_cast<Eigen::Index>(i)) =
            batch[i].joint_next_obs[static_cast<std::size_t>(agent)];
    }
    return out;
}

Eigen::VectorXd stack_rewards(const std::vector<Transition>& batch, int agent) {
    check_agent(batch, agent);
    Eigen::VectorXd out(static_cast<Eigen::Index>(batch.size()));
    for (std::size_t i = 0; i < batch.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = batch[i].joint_rewards[static_cast<std::size_t>(agent)];
    }
    return out;
}

Eigen::VectorXd stack_done(const std::vector<Transition>& batch) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(batch.size()));
    for (std::size_t i = 0; i < batch.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = batch[i].done ? 1.0 : 0.0;
    }
    return out;
}

Eigen::MatrixXd stack_actions_onehot(const std::vector<Transition>& batch, int agent,
                                     int n_actions) {
    check_agent(batch, agent);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_actions, static_cast<Eigen::Index>(batch.size()));
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Action& a = batch[i].joint_actions[static_cast<std::size_t>(agent)];
        if (!std::holds_alternative<int>(a)) {
            throw std::invalid_argument("batch: expected discrete actions");
        }
        int idx = std::get<int>(a);
        if (idx < 0 || idx >= n_actions) throw std::invalid_argument("batch: action out of range");
        out(idx, static_cast<Eigen::Index>(i)) = 1.0;
    }
    return out;
}

Eigen::MatrixXd stack_actions_vector(const std::vector<Transition>& batch, int agent, int dim) {
    check_agent(batch, agent);
    Eigen::MatrixXd out(dim, static_cast<Eigen::Index>(batch.size()));
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Action& a = batch[i].joint_actions[static_cast<std::size_t>(agent)];
        if (!std::holds_alternative<Eigen::VectorXd>(a)) {
            throw std::invalid_argument("batch: expected continuous actions");
        }
        out.col(static_cast<Eigen::Index>(i)) = std::get<Eigen::VectorXd>(a);
    }
    return out;
}

int argmax_lowest(const Eigen::VectorXd& v) {
    int best = 0;
    for (int i = 1; i < v.size(); ++i) {
        if (v(i) > v(best)) best = i;
    }
    return best;
}

int epsilon_greedy(const Eigen::VectorXd& q_values, double epsilon, Rng& rng) {
    if (q_values.size() == 0) throw std::invalid_argument("epsilon_greedy: empty value vector");
    if (epsilon < 0.0 || epsilon > 1.0) {
        throw std::invalid_argument("epsilon_greedy: epsilon out of [0,1]");
    }
    if (rng.uniform() < epsilon) return rng.uniform_int(static_cast<int>(q_values.size()));
    return argmax_lowest(q_values);
}

std::vector<int> layer_spec(int input, const std::vector<int>& hidden, int output) {
    std::vector<int> sizes;
    sizes.push_back(input);
    for (int h : hidden) sizes.push_back(h);
    sizes.push_back(output);
    return sizes;
}

}  // namespace marl
