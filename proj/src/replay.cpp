#include "marl/replay.hpp"

#include <stdexcept>

namespace marl {

ReplayBuffer::ReplayBuffer(long capacity) : capacity_(capacity) {
    if (capacity <= 0) throw std::invalid_argument("replay: capacity must be positive");
    storage_.reserve(static_cast<std::size_t>(std::min<long>(capacity, 1 << 20)));
}

void ReplayBuffer::check_shape(const Transition& t) const {
    std::size_t n = t.joint_obs.size();
    if (t.joint_actions.size() != n || t.joint_rewards.size() != n ||
        t.joint_next_obs.size() != n) {
        throw std::invalid_argument("replay: per-agent lists differ in length");
    }
    if (count_ == 0) return;
    const Transition& ref = at(0);
    if (ref.joint_obs.size() != n) {
        throw std::invalid_argument("replay: agent count differs from stored transitions");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (t.joint_obs[i].size() != ref.joint_obs[i].size() ||
            t.joint_next_obs[i].size() != ref.joint_next_obs[i].size()) {
            throw std::invalid_argument("replay: observation length differs from stored transitions");
        }
        if (t.joint_actions[i].index() != ref.joint_actions[i].index()) {
            throw std::invalid_argument("replay: action kind differs from stored transitions");
        }
    }
}

void ReplayBuffer::push(Transition t) {
    check_shape(t);
    if (count_ < capacity_) {
        storage_.push_back(std::move(t));
        count_ += 1;
    } else {
        storage_[static_cast<std::size_t>(write_index_)] = std::move(t);
    }
    write_index_ = (write_index_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(long i) const {
    if (i < 0 || i >= count_) throw std::out_of_range("replay: index out of range");
    if (count_ < capacity_) return storage_[static_cast<std::size_t>(i)];
    return storage_[static_cast<std::size_t>((write_index_ + i) % capacity_)];
}

std::vector<Transition> ReplayBuffer::sample(int batch_size, Rng& rng) const {
    if (batch_size <= 0) throw std::invalid_argument("replay: batch_size must be positive");
    if (count_ == 0) throw std::invalid_argument("replay: cannot sample from an empty buffer");
    std::vector<Transition> batch;
    batch.reserve(static_cast<std::size_t>(batch_size));
    for (int i = 0; i < batch_size; ++i) {
        batch.push_back(storage_[static_cast<std::size_t>(
            rng.uniform_int(static_cast<int>(storage_.size())))]);
    }
    return batch;
}

}  // namespace marl
