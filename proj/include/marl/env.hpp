#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace marl {

/// Observation or action space description.
struct SpaceSpec {
    enum class Kind { Discrete, Continuous };
    Kind kind = Kind::Discrete;
    int size = 1;  // action count (discrete) or vector length (continuous)
    std::vector<std::pair<double, double>> bounds;  // per-dimension (low, high), continuous only

    static SpaceSpec discrete(int n) { return SpaceSpec{Kind::Discrete, n, {}}; }
    static SpaceSpec continuous(int n, double lo, double hi) {
        SpaceSpec s{Kind::Continuous, n, {}};
        s.bounds.assign(static_cast<std::size_t>(n), {lo, hi});
        return s;
    }
};

/// Discrete action index or continuous action vector.
using Action = std::variant<int, Eigen::VectorXd>;

/// Per-step environment output. All per-agent lists share the same length.
struct StepResult {
    std::vector<Eigen::VectorXd> observations;
    std::vector<double> rewards;
    std::vector<bool> agent_done;
    bool episode_done = false;
    std::map<std::string, double> info;
};

/// Engine-agnostic multi-agent environment contract. A single instance is
/// single-threaded; run one instance per worker for parallel rollouts.
///
/// Dead agents keep their slot: they receive zero observations and must be
/// sent the environment's no-op action until the episode ends.
class Env {
public:
    virtual ~Env() = default;

    virtual int num_agents() const = 0;
    virtual SpaceSpec observation_space(int agent) const = 0;
    virtual SpaceSpec action_space(int agent) const = 0;

    /// Puts the environment into a fresh initial state, deterministic in seed.
    virtual std::vector<Eigen::VectorXd> reset(std::uint64_t seed) = 0;

    /// Advances exactly one tick. Throws std::runtime_error if called after
    /// the episode finished and before the next reset.
    virtual StepResult step(const std::vector<Action>& actions) = 0;

    /// True once the current episode has finished.
    virtual bool done() const = 0;
};

}  // namespace marl
