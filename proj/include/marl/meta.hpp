#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "marl/nn.hpp"
#include "marl/rng.hpp"
#include "marl/room_clear.hpp"

namespace marl {

/// Observation corruption settings for counterfactual policy regularization:
/// Gaussian noise, random dropout, and hard channel failures.
struct NoiseConfig {
    double gaussian_sigma = 0.0;
    double dropout_prob = 0.0;
    std::vector<int> failed_channels;

    void validate() const;
};

/// Adds N(0, sigma^2) per element, then zeroes each element independently
/// with probability dropout_prob, then zeroes the failed channels. With an
/// all-zero config this is the identity map.
Eigen::VectorXd corrupt_observation(const Eigen::VectorXd& obs, const NoiseConfig& config,
                                    Rng& rng);

/// One population member: a set of greedy actor policies (one per controlled
/// agent slot), its tunable hyperparameters, and bookkeeping.
struct PopulationMember {
    std::vector<Mlp> actors;
    std::map<std::string, double> hyperparams;
    double fitness = 0.0;
    long lineage_id = 0;  // root ancestor; clones inherit it
    long version = 0;     // monotonically increasing across the population
};

struct Population {
    std::vector<PopulationMember> members;
    long next_version = 0;

    int size() const { return static_cast<int>(members.size()); }
};

/// Random-initialized population with distinct lineage ids.
Population make_population(int size, int obs_dim, int n_actions, int team_size,
                           const std::vector<int>& hidden,
                           const std::map<std::string, double>& hyperparams, std::uint64_t seed);

struct PairResult {
    int member_a = 0;
    int member_b = 0;
    int wins_a = 0;
    int wins_b = 0;
    int draws = 0;
};

struct FitnessTable {
    std::vector<PairResult> pairs;
    std::vector<double> fitness;  // wins + 0.5 * draws per member
};

using MatchEnvFactory = std::function<std::unique_ptr<RoomClearEnv>()>;

/// Round-robin self-play: every unordered pair plays episodes_per_pair
/// episodes with deterministic derived seeds, alternating sides. Writes
/// fitness back into the population. Pairs may be evaluated in parallel;
/// results merge in pairing order.
FitnessTable run_tournament(Population& population, const MatchEnvFactory& env_factory,
                            int episodes_per_pair, std::uint64_t seed, int workers = 1);

/// Truncation selection: the bottom 20% are replaced by clones of uniformly
/// sampled top-20% members, each hyperparameter independently perturbed by
/// x0.8 or x1.25. Population size is preserved; survivors are untouched.
/// Throws std::invalid_argument for populations smaller than 5.
void evolve_population(Population& population, const FitnessTable& table, Rng& rng);

}  // namespace marl
