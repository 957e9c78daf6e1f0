#pragma once

#include <vector>

#include "marl/env.hpp"
#include "marl/rng.hpp"

namespace marl {

/// Joint multi-agent experience tuple. All per-agent lists share the same
/// length; observation dimensions match the environment's declared spaces.
struct Transition {
    std::vector<Eigen::VectorXd> joint_obs;
    std::vector<Action> joint_actions;
    std::vector<double> joint_rewards;
    std::vector<Eigen::VectorXd> joint_next_obs;
    bool done = false;
};

/// Fixed-capacity ring of joint transitions with FIFO eviction. Single
/// writer, single reader; sampling never mutates the contents.
class ReplayBuffer {
public:
    explicit ReplayBuffer(long capacity);

    /// Appends a transition, evicting the oldest when full. Throws
    /// std::invalid_argument (buffer unchanged) if the transition's shape
    /// disagrees with prior entries.
    void push(Transition t);

    /// Uniform sampling with replacement; deterministic in the RNG state.
    /// Throws std::invalid_argument if fewer than batch_size items are held.
    std::vector<Transition> sample(int batch_size, Rng& rng) const;

    long size() const { return count_; }
    long capacity() const { return capacity_; }

    /// Entry i in insertion order, 0 = oldest retained.
    const Transition& at(long i) const;

private:
    void check_shape(const Transition& t) const;

    long capacity_;
    long write_index_ = 0;
    long count_ = 0;
    std::vector<Transition> storage_;
};

}  // namespace marl
