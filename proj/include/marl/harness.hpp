#pragma once

#include <memory>
#include <string>
#include <vector>

#include "marl/checkpoint.hpp"
#include "marl/config.hpp"
#include "marl/env.hpp"
#include "marl/room_clear.hpp"
#include "marl/take_cover.hpp"

namespace marl {

/// A configured environment stack: the outermost Env plus non-owning
/// pointers to the concrete environments inside any wrappers.
struct BuiltEnv {
    std::unique_ptr<Env> env;
    TakeCoverEnv* take_cover = nullptr;
    RoomClearEnv* room_clear = nullptr;
};

/// Builds the configured environment. Evaluation mode caps take-cover
/// episodes at eval.max_steps and applies the noise wrapper only when
/// noise.apply_in_eval is set.
BuiltEnv build_env(const RunConfig& config, bool eval_mode);

struct TrainSummary {
    std::uint64_t seed = 0;
    long episodes = 0;
    long steps = 0;
    double trailing_win_rate = 0.0;
    double trailing_no_loss_win_rate = 0.0;
    std::string run_dir;
    std::string final_checkpoint;
};

/// Trains one seed per the config, writing metrics.csv, episodes.csv and
/// checkpoints under <output_dir>/seed_<seed>/. Fully deterministic in
/// (config, seed).
TrainSummary train_single_seed(const RunConfig& config, std::uint64_t seed);

/// Runs every configured seed. Returns 0 on success.
int train_command(const RunConfig& config);

struct EvalEpisode {
    std::uint64_t seed = 0;
    int steps = 0;
    double return_red = 0.0;
    bool success = false;
    int oracle_steps = -1;  // take_cover only
};

struct EvalReport {
    std::vector<EvalEpisode> episodes;
    double success_rate = 0.0;
    double mean_return = 0.0;
    double mean_length = 0.0;
    double median_steps = 0.0;
    double median_oracle_steps = 0.0;  // take_cover only
};

/// Greedy (no-exploration) evaluation of a checkpointed policy, or of the
/// pseudo-policies "random" and "oracle" when the config names them.
/// Deterministic in (config, seed).
EvalReport evaluate_policy(const RunConfig& config, const Checkpoint* ckpt, std::uint64_t seed);

int evaluate_command(const RunConfig& config, const std::string& checkpoint_path);

/// Take-cover scripted-vs-trained comparison on shared evaluation episodes.
int compare_command(const RunConfig& config, const std::string& checkpoint_path);

int tournament_command(const RunConfig& config);

struct ExportResult {
    std::string consolidated_path;
    std::string winrate_path;
    double max_recompute_error = 0.0;  // trailing win-rate cross-check
};

/// Consolidates per-seed metrics under a run directory and re-derives the
/// trailing win-rate series from the raw episode logs.
ExportResult export_metrics(const std::string& run_dir);

int export_command(const std::string& run_dir);

}  // namespace marl
