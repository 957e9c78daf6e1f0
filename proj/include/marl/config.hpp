#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "marl/grid.hpp"
#include "marl/meta.hpp"
#include "marl/nn.hpp"
#include "marl/take_cover.hpp"

namespace marl {

/// Parsed, validated run configuration. The config file is a flat
/// `key = value` document ('#' starts a comment); unknown keys are errors,
/// as are out-of-range values, each named explicitly.
struct RunConfig {
    // run.*
    std::vector<std::uint64_t> seeds{0};
    std::string output_dir;
    int workers = 1;

    // env.*
    std::string env_name;  // take_cover | room_clear
    TakeCoverParams take_cover;
    std::vector<std::uint64_t> layout_seeds{1, 2, 3};
    std::string layout_file;  // room_clear; empty = built-in default
    CombatConfig combat;

    // algo.*
    std::string algo_name;  // dqn | ddpg | maddpg | ppo | dagger | random | oracle
    Hyperparams hp;
    std::vector<int> hidden{64, 64};
    double learning_rate = 1e-3;
    double temperature = 1.0;
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    long epsilon_decay_steps = 10000;
    double noise_sigma_start = 1.5;
    double noise_sigma_end = 0.05;
    long noise_decay_episodes = 5000;
    long rollout_horizon = 2048;
    int epochs = 4;
    int minibatch = 64;
    bool normalize_advantages = true;
    int dagger_iterations = 10;
    int dagger_episodes_per_iter = 10;
    int dagger_epochs = 40;

    // train.*
    long total_steps = 0;     // exactly one of total_steps/total_episodes is set
    long total_episodes = 0;
    int update_every = 1;
    long warmup_transitions = 0;  // updates start once buffer >= max(batch, this)
    std::string resume_from;

    // eval.*
    int eval_cadence_episodes = 100;
    int eval_episodes = 20;
    int eval_max_steps = 200;

    // checkpoint.*
    long checkpoint_interval_episodes = 0;  // 0 = final only

    // noise.* (optional observation-corruption wrapper, train-time)
    NoiseConfig noise;
    bool noise_in_eval = false;

    // population.*
    int population_size = 6;
    int population_generations = 3;
    int population_episodes_per_pair = 4;
    std::vector<std::string> population_checkpoints;

    bool uses_take_cover() const { return env_name == "take_cover"; }
};

/// Parses and validates a config document. Unknown keys, missing required
/// keys, and out-of-range values all raise std::invalid_argument naming the
/// offending key.
RunConfig parse_config(const std::string& text);

/// Reads the file and delegates to parse_config.
RunConfig load_config_file(const std::string& path);

}  // namespace marl
