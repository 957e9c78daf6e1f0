#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "marl/env.hpp"
#include "marl/grid.hpp"

namespace marl {

enum class CombatAction : int {
    MoveNorth = 0,  // toward row 0
    MoveSouth = 1,
    MoveEast = 2,
    MoveWest = 3,
    Attack = 4,
    Noop = 5,
};
constexpr int kCombatActionCount = 6;

enum class Team { Red, Blue };

struct CombatantState {
    Team team = Team::Red;
    Cell pos;
    int hp = 0;
    bool alive = false;
};

/// Grid combat between a red team and a blue team. Agents are indexed red
/// first, then blue, each in spawn order. One tick resolves in three phases:
/// simultaneous attacks against each attacker's nearest damageable enemy,
/// deaths, then moves in agent-index order.
///
/// Observations are egocentric multi-channel windows (wall, barricade,
/// teammate, enemy planes) plus own hp fraction and normalized position.
class RoomClearEnv : public Env {
public:
    RoomClearEnv(GridLayout layout, CombatConfig config);

    int num_agents() const override { return static_cast<int>(agents_.size()); }
    SpaceSpec observation_space(int agent) const override;
    SpaceSpec action_space(int agent) const override;
    std::vector<Eigen::VectorXd> reset(std::uint64_t seed) override;
    StepResult step(const std::vector<Action>& actions) override;
    bool done() const override { return done_; }

    int red_count() const { return static_cast<int>(layout_.red_spawns.size()); }
    int blue_count() const { return static_cast<int>(layout_.blue_spawns.size()); }
    int observation_size() const;

    const GridLayout& layout() const { return layout_; }
    const CombatConfig& config() const { return config_; }
    const std::vector<CombatantState>& agents() const { return agents_; }
    int tick() const { return tick_; }

    /// Blue agent k as a global agent index.
    int blue_agent(int k) const { return red_count() + k; }

    /// True once the agent has passed the door into the room.
    bool inside_room(const Cell& c) const;

    Eigen::VectorXd observe(int agent) const;

private:
    void check_episode_end();

    GridLayout layout_;
    CombatConfig config_;
    std::vector<CombatantState> agents_;
    std::vector<std::uint8_t> exterior_;  // blue staging area outside the door
    int tick_ = 0;
    bool done_ = true;
    int winner_ = 0;  // 0 none/draw, 1 red, 2 blue
};

/// Doctrine policy for blue agent k: queue at the door in index order,
/// enter one at a time, move along BFS shortest paths to blue_posts[k],
/// and always attack when a red is damageable.
int scripted_blue_action(int blue_index, const RoomClearEnv& env);

/// Adapter that exposes only the red slots of a RoomClearEnv and drives the
/// blue team with the scripted doctrine.
class ScriptedBlueEnv : public Env {
public:
    ScriptedBlueEnv(GridLayout layout, CombatConfig config);

    int num_agents() const override { return inner_.red_count(); }
    SpaceSpec observation_space(int agent) const override { return inner_.observation_space(agent); }
    SpaceSpec action_space(int agent) const override { return inner_.action_space(agent); }
    std::vector<Eigen::VectorXd> reset(std::uint64_t seed) override;
    StepResult step(const std::vector<Action>& actions) override;
    bool done() const override { return inner_.done(); }

    RoomClearEnv& inner() { return inner_; }
    const RoomClearEnv& inner() const { return inner_; }

private:
    RoomClearEnv inner_;
};

}  // namespace marl
