#include "marl/wrappers.hpp"

#include <stdexcept>

namespace marl {

NoisyObservationEnv::NoisyObservationEnv(std::unique_ptr<Env> inner, NoiseConfig config)
    : inner_(std::move(inner)), config_(std::move(config)), rng_(0) {
    if (!inner_) throw std::invalid_argument("NoisyObservationEnv: null inner environment");
    config_.validate();
}

std::vector<Eigen::VectorXd> NoisyObservationEnv::reset(std::uint64_t seed) {
    rng_ = Rng(mix_seed(seed, 0x40153));
    std::vector<Eigen::VectorXd> obs = inner_->reset(seed);
    for (auto& o : obs) o = corrupt_observation(o, config_, rng_);
    return obs;
}

StepResult NoisyObservationEnv::step(const std::vector<Action>& actions) {
    StepResult r = inner_->step(actions);
    for (std::size_t i = 0; i < r.observations.size(); ++i) {
        if (r.agent_done[i]) continue;  // dead agents keep zero observations
        r.observations[i] = corrupt_observation(r.observations[i], config_, rng_);
    }
    return r;
}

}  // namespace marl
