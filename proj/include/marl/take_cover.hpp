#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "marl/env.hpp"
#include "marl/geometry.hpp"

namespace marl {

/// Discrete actions of the take-cover agent. Movement is world-frame;
/// rotation changes only the ray directions.
enum class CoverAction : int {
    MoveNorth = 0,
    MoveSouth = 1,
    MoveEast = 2,
    MoveWest = 3,
    RotateLeft = 4,
    RotateRight = 5,
};
constexpr int kCoverActionCount = 6;

struct TakeCoverParams {
    double arena_width = 10.0;
    double arena_height = 10.0;
    int cover_count_min = 2;
    int cover_count_max = 4;
    double cover_size_min = 0.8;
    double cover_size_max = 1.6;
    int wall_count_min = 0;
    int wall_count_max = 2;
    double wall_length_min = 1.5;
    double wall_length_max = 3.0;
    double wall_thickness = 0.3;
    double cover_radius = 0.5;       // acceptance circle around the optimal point
    double move_step = 0.25;         // meters per move action
    double turn_degrees = 30.0;      // per rotate action
    int num_rays = 24;               // rays over 360 degrees
    int step_cap = 500;
    double resolution = 0.1;         // candidate grid for the optimal cover point
    bool randomize_spawn = true;     // jitter the agent spawn each episode
    double min_cover_distance = 1.5; // spawn-to-cover-point lower bound
    double enemy_radius = 0.35;      // enemy disc used by ray tagging
    double clearance = 0.4;          // spawn/enemy clearance from solids
    int max_generation_attempts = 100;
    bool terminate_on_cover = true;

    void validate() const;
};

/// Static geometry of one take-cover scenario.
struct CoverLayout {
    Rect arena;
    std::vector<Rect> walls;
    std::vector<Rect> cover_boxes;
    Vec2 enemy_pos;
    Vec2 agent_spawn;
    double cover_radius = 0.5;
};

/// True if the point sits inside any wall or cover box (closed rectangles).
bool point_in_solid(const Vec2& p, const CoverLayout& layout);

/// True iff the segment from the point to the enemy crosses at least one
/// cover box or wall. Throws std::invalid_argument if the point is inside
/// a solid or outside the arena.
bool is_covered(const Vec2& p, const CoverLayout& layout);

/// Generates a solvable layout, retrying internally with derived sub-seeds.
/// Throws std::runtime_error (naming the seed) if no solvable layout is
/// found within max_generation_attempts.
CoverLayout generate_layout(std::uint64_t seed, const TakeCoverParams& params);

/// Closest covered, reachable candidate-grid point to the layout's spawn.
/// Candidates lie on a uniform grid at the given resolution; ties break
/// toward the lowest x, then lowest y. Throws if no candidate qualifies.
Vec2 oracle_cover_point(const CoverLayout& layout, double resolution);

/// 2D take-cover environment: one learning agent, tagged-ray observations,
/// -1/5000 movement penalty per action and +5 on first entering the circle
/// of cover_radius around the optimal cover point.
///
/// Observation layout: per ray [normalized hit distance, one-hot tag over
/// {enemy, cover, wall, none}], then [sin(facing), cos(facing)].
class TakeCoverEnv : public Env {
public:
    TakeCoverEnv(TakeCoverParams params, std::vector<std::uint64_t> layout_seeds);

    /// Builds on explicit layouts (golden-layout regression tests, crafted
    /// geometry). Layouts must already be solvable.
    TakeCoverEnv(TakeCoverParams params, std::vector<CoverLayout> layouts);

    int num_agents() const override { return 1; }
    SpaceSpec observation_space(int agent) const override;
    SpaceSpec action_space(int agent) const override;
    std::vector<Eigen::VectorXd> reset(std::uint64_t seed) override;
    StepResult step(const std::vector<Action>& actions) override;
    bool done() const override { return done_; }

    int observation_size() const { return params_.num_rays * 5 + 2; }
    const TakeCoverParams& params() const { return params_; }
    const CoverLayout& layout() const { return layout_; }
    Vec2 position() const { return position_; }
    double facing() const { return facing_; }
    Vec2 cover_point() const { return cover_point_; }

    /// Full-information scripted policy: next greedy action along a shortest
    /// obstacle-avoiding lattice path toward the cover circle.
    int oracle_action() const;

    /// Move count of the scripted policy from the episode start (lattice BFS
    /// distance to the cover circle).
    int oracle_steps_initial() const { return initial_oracle_steps_; }

    /// BFS move count from an arbitrary lattice-aligned position; -1 if the
    /// position is off the reachable lattice.
    int oracle_steps_from(const Vec2& pos) const;

    Eigen::VectorXd observe() const;

    struct LatticeField;  // BFS distances over the movement lattice

private:
    bool valid_position(const Vec2& p) const;
    void compute_episode_fields();

    TakeCoverParams params_;
    std::vector<std::uint64_t> layout_seeds_;
    std::vector<CoverLayout> layouts_;  // generated lazily, one per seed

    CoverLayout layout_;  // active episode layout (spawn may be jittered)
    Vec2 cover_point_;
    Vec2 position_;
    double facing_ = 0.0;
    int step_count_ = 0;
    bool done_ = true;
    bool entered_cover_ = false;
    int initial_oracle_steps_ = 0;
    std::shared_ptr<const LatticeField> field_;
};

}  // namespace marl
