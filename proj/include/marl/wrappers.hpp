#pragma once

#include <memory>

#include "marl/env.hpp"
#include "marl/meta.hpp"

namespace marl {

/// Applies corrupt_observation to every living agent's observation, between
/// the environment and the learner. Dead agents keep their zero vectors.
/// The noise stream derives from the reset seed, so rollouts stay
/// reproducible.
class NoisyObservationEnv : public Env {
public:
    NoisyObservationEnv(std::unique_ptr<Env> inner, NoiseConfig config);

    int num_agents() const override { return inner_->num_agents(); }
    SpaceSpec observation_space(int agent) const override { return inner_->observation_space(agent); }
    SpaceSpec action_space(int agent) const override { return inner_->action_space(agent); }
    std::vector<Eigen::VectorXd> reset(std::uint64_t seed) override;
    StepResult step(const std::vector<Action>& actions) override;
    bool done() const override { return inner_->done(); }

    Env& inner() { return *inner_; }

private:
    std::unique_ptr<Env> inner_;
    NoiseConfig config_;
    Rng rng_;
};

}  // namespace marl
