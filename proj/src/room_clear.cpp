#include "marl/room_clear.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

namespace marl {

RoomClearEnv::RoomClearEnv(GridLayout layout, CombatConfig config)
    : layout_(std::move(layout)), config_(std::move(config)) {
    layout_.validate();
    config_.validate();
    agents_.resize(layout_.red_spawns.size() + layout_.blue_spawns.size());

    // The staging area is what blue can reach without passing a door cell.
    GridLayout plugged = layout_;
    for (const Cell& d : layout_.door_cells) plugged.wall_mask[plugged.index(d)] = 1;
    exterior_ = reachable_cells(plugged, layout_.blue_spawns);
}

int RoomClearEnv::observation_size() const {
    int side = 2 * config_.view_radius + 1;
    return 4 * side * side + 1 + 2;
}

SpaceSpec RoomClearEnv::observation_space(int) const {
    return SpaceSpec::continuous(observation_size(), 0.0, 1.0);
}

SpaceSpec RoomClearEnv::action_space(int) const { return SpaceSpec::discrete(kCombatActionCount); }

bool RoomClearEnv::inside_room(const Cell& c) const {
    if (exterior_[layout_.index(c)]) return false;
    for (const Cell& d : layout_.door_cells) {
        if (d == c) return false;
    }
    return true;
}

std::vector<Eigen::VectorXd> RoomClearEnv::reset(std::uint64_t) {
    // Spawn assignment is fixed: agent i takes spawn i of its team.
    for (std::size_t i = 0; i < layout_.red_spawns.size(); ++i) {
        agents_[i] = {Team::Red, layout_.red_spawns[i], config_.hp_max, true};
    }
    for (std::size_t i = 0; i < layout_.blue_spawns.size(); ++i) {
        agents_[layout_.red_spawns.size() + i] = {Team::Blue, layout_.blue_spawns[i],
                                                  config_.hp_max, true};
    }
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        for (std::size_t j = i + 1; j < agents_.size(); ++j) {
            if (agents_[i].pos == agents_[j].pos) {
                throw std::invalid_argument("RoomClearEnv: spawn conflict");
            }
        }
    }
    tick_ = 0;
    done_ = false;
    winner_ = 0;
    std::vector<Eigen::VectorXd> obs;
    obs.reserve(agents_.size());
    for (int i = 0; i < num_agents(); ++i) obs.push_back(observe(i));
    return obs;
}

Eigen::VectorXd RoomClearEnv::observe(int agent) const {
    const CombatantState& self = agents_[static_cast<std::size_t>(agent)];
    Eigen::VectorXd obs = Eigen::VectorXd::Zero(observation_size());
    if (!self.alive) return obs;  // dead agents see nothing

    const int r = config_.view_radius;
    const int side = 2 * r + 1;
    const int plane = side * side;
    auto window_index = [&](int wx, int wy) { return (wy + r) * side + (wx + r); };

    for (int wy = -r; wy <= r; ++wy) {
        for (int wx = -r; wx <= r; ++wx) {
            Cell c{self.pos.x + wx, self.pos.y + wy};
            int wi = window_index(wx, wy);
            if (!layout_.in_bounds(c) || layout_.wall(c)) {
                obs(wi) = 1.0;  // out-of-bounds reads as wall
                continue;
            }
            if (layout_.barricade(c)) obs(plane + wi) = 1.0;
        }
    }
    for (std::size_t j = 0; j < agents_.size(); ++j) {
        const CombatantState& other = agents_[j];
        if (!other.alive || static_cast<int>(j) == agent) continue;
        int wx = other.pos.x - self.pos.x;
        int wy = other.pos.y - self.pos.y;
        if (std::abs(wx) > r || std::abs(wy) > r) continue;
        int base = other.team == self.team ? 2 * plane : 3 * plane;
        obs(base + window_index(wx, wy)) = 1.0;
    }
    obs(4 * plane) = static_cast<double>(self.hp) / config_.hp_max;
    obs(4 * plane + 1) = static_cast<double>(self.pos.x) / (layout_.width - 1);
    obs(4 * plane + 2) = static_cast<double>(self.pos.y) / (layout_.height - 1);
    return obs;
}

void RoomClearEnv::check_episode_end() {
    int red_alive = 0, blue_alive = 0;
    for (const CombatantState& a : agents_) {
        if (!a.alive) continue;
        (a.team == Team::Red ? red_alive : blue_alive) += 1;
    }
    if (red_alive == 0 || blue_alive == 0) {
        done_ = true;
        winner_ = red_alive > 0 ? 1 : (blue_alive > 0 ? 2 : 0);
    } else if (tick_ >= config_.step_cap) {
        done_ = true;
        winner_ = 0;  // draw
    }
}

StepResult RoomClearEnv::step(const std::vector<Action>& actions) {
    if (done_) throw std::runtime_error("RoomClearEnv::step: episode finished, reset required");
    if (actions.size() != agents_.size()) {
        throw std::invalid_argument("RoomClearEnv::step: one action per agent required");
    }
    std::vector<int> acts(agents_.size());
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        if (!std::holds_alternative<int>(actions[i])) {
            throw std::invalid_argument("RoomClearEnv::step: discrete actions required");
        }
        acts[i] = std::get<int>(actions[i]);
        if (acts[i] < 0 || acts[i] >= kCombatActionCount) {
            throw std::invalid_argument("RoomClearEnv::step: action out of range");
        }
        if (!agents_[i].alive && acts[i] != static_cast<int>(CombatAction::Noop)) {
            throw std::invalid_argument("RoomClearEnv::step: dead agents must send noop");
        }
    }

    std::vector<double> rewards(agents_.size(), 0.0);
    tick_ += 1;

    // Phase 1: target selection, simultaneous.
    std::vector<int> target_of(agents_.size(), -1);
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        if (!agents_[i].alive || acts[i] != static_cast<int>(CombatAction::Attack)) continue;
        int best = -1;
        int best_dist = std::numeric_limits<int>::max();
        for (std::size_t j = 0; j < agents_.size(); ++j) {
            if (!agents_[j].alive || agents_[j].team == agents_[i].team) continue;
            if (!can_damage(agents_[i].pos, agents_[j].pos, layout_, config_)) continue;
            int d = chebyshev(agents_[i].pos, agents_[j].pos);
            if (d < best_dist) {  // ties resolve to the lowest agent index
                best_dist = d;
                best = static_cast<int>(j);
            }
        }
        target_of[i] = best;
    }

    // Phase 2: damage, deaths, kill rewards.
    std::vector<int> damage(agents_.size(), 0);
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        if (target_of[i] >= 0) damage[static_cast<std::size_t>(target_of[i])] += config_.attack_damage;
    }
    std::vector<bool> died(agents_.size(), false);
    for (std::size_t j = 0; j < agents_.size(); ++j) {
        if (damage[j] == 0) continue;
        agents_[j].hp -= damage[j];
        if (agents_[j].hp <= 0) {
            agents_[j].hp = 0;
            agents_[j].alive = false;
            died[j] = true;
        }
    }
    for (std::size_t j = 0; j < agents_.size(); ++j) {
        if (!died[j]) continue;
        int killers = 0;
        for (std::size_t i = 0; i < agents_.size(); ++i) {
            if (target_of[i] == static_cast<int>(j)) killers += 1;
        }
        for (std::size_t i = 0; i < agents_.size(); ++i) {
            if (target_of[i] == static_cast<int>(j)) rewards[i] += config_.kill_reward / killers;
        }
    }

    // Phase 3: moves in agent-index order; blocked by solids and living agents.
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        if (!agents_[i].alive) continue;
        Cell target = agents_[i].pos;
        switch (static_cast<CombatAction>(acts[i])) {
            case CombatAction::MoveNorth: target.y -= 1; break;
            case CombatAction::MoveSouth: target.y += 1; break;
            case CombatAction::MoveEast: target.x += 1; break;
            case CombatAction::MoveWest: target.x -= 1; break;
            default: continue;
        }
        if (!layout_.in_bounds(target) || layout_.solid(target)) continue;
        bool occupied = false;
        for (std::size_t j = 0; j < agents_.size(); ++j) {
            if (j != i && agents_[j].alive && agents_[j].pos == target) occupied = true;
        }
        if (!occupied) agents_[i].pos = target;
    }

    check_episode_end();

    int red_alive = 0, blue_alive = 0;
    for (const CombatantState& a : agents_) {
        if (!a.alive) continue;
        (a.team == Team::Red ? red_alive : blue_alive) += 1;
    }
    if (done_ && winner_ != 0) {
        Team winners = winner_ == 1 ? Team::Red : Team::Blue;
        int survivors = winners == Team::Red ? red_alive : blue_alive;
        for (std::size_t i = 0; i < agents_.size(); ++i) {
            if (agents_[i].team == winners) rewards[i] += config_.survivor_bonus * survivors;
        }
    }

    StepResult out;
    out.observations.reserve(agents_.size());
    out.agent_done.reserve(agents_.size());
    double reward_red = 0.0, reward_blue = 0.0;
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        out.observations.push_back(done_ ? Eigen::VectorXd::Zero(observation_size()).eval()
                                         : observe(static_cast<int>(i)));
        out.agent_done.push_back(!agents_[i].alive || done_);
        (agents_[i].team == Team::Red ? reward_red : reward_blue) += rewards[i];
    }
    out.rewards = std::move(rewards);
    out.episode_done = done_;
    out.info["win_red"] = winner_ == 1 ? 1.0 : 0.0;
    out.info["win_blue"] = winner_ == 2 ? 1.0 : 0.0;
    out.info["draw"] = (done_ && winner_ == 0) ? 1.0 : 0.0;
    out.info["red_survivors"] = red_alive;
    out.info["blue_survivors"] = blue_alive;
    out.info["reward_red"] = reward_red;
    out.info["reward_blue"] = reward_blue;
    out.info["tick"] = tick_;
    return out;
}

// ---------------------------------------------------------------------------

int scripted_blue_action(int blue_index, const RoomClearEnv& env) {
    const GridLayout& layout = env.layout();
    const int self_id = env.blue_agent(blue_index);
    const CombatantState& self = env.agents()[static_cast<std::size_t>(self_id)];
    if (!self.alive) return static_cast<int>(CombatAction::Noop);

    // Engaging a damageable red always takes priority over movement.
    for (const CombatantState& a : env.agents()) {
        if (!a.alive || a.team != Team::Red) continue;
        if (can_damage(self.pos, a.pos, layout, env.config())) {
            return static_cast<int>(CombatAction::Attack);
        }
    }

    // Enter one at a time: wait outside until the previous teammate is in.
    if (blue_index > 0 && !env.inside_room(self.pos)) {
        const CombatantState& prev =
            env.agents()[static_cast<std::size_t>(env.blue_agent(blue_index - 1))];
        if (prev.alive && !env.inside_room(prev.pos)) {
            return static_cast<int>(CombatAction::Noop);
        }
    }

    const std::vector<Cell>& posts = layout.blue_posts;
    if (posts.empty()) return static_cast<int>(CombatAction::Noop);
    Cell post = posts[static_cast<std::size_t>(blue_index) % posts.size()];
    if (self.pos == post) return static_cast<int>(CombatAction::Noop);

    std::vector<int> dist = bfs_distances(layout, post);
    int here = dist[layout.index(self.pos)];
    if (here < 0) return static_cast<int>(CombatAction::Noop);  // post unreachable from here

    const int dx[4] = {0, 1, 0, -1};
    const int dy[4] = {-1, 0, 1, 0};
    const CombatAction acts[4] = {CombatAction::MoveNorth, CombatAction::MoveEast,
                                  CombatAction::MoveSouth, CombatAction::MoveWest};
    for (int k = 0; k < 4; ++k) {
        Cell n{self.pos.x + dx[k], self.pos.y + dy[k]};
        if (!layout.in_bounds(n) || layout.solid(n)) continue;
        if (dist[layout.index(n)] != here - 1) continue;
        bool occupied = false;
        for (const CombatantState& a : env.agents()) {
            if (a.alive && a.pos == n) occupied = true;
        }
        if (occupied) continue;
        return static_cast<int>(acts[k]);
    }
    return static_cast<int>(CombatAction::Noop);  // boxed in this tick
}

// ---------------------------------------------------------------------------

ScriptedBlueEnv::ScriptedBlueEnv(GridLayout layout, CombatConfig config)
    : inner_(std::move(layout), std::move(config)) {}

std::vector<Eigen::VectorXd> ScriptedBlueEnv::reset(std::uint64_t seed) {
    std::vector<Eigen::VectorXd> all = inner_.reset(seed);
    all.resize(static_cast<std::size_t>(inner_.red_count()));
    return all;
}

StepResult ScriptedBlueEnv::step(const std::vector<Action>& actions) {
    if (static_cast<int>(actions.size()) != inner_.red_count()) {
        throw std::invalid_argument("ScriptedBlueEnv::step: one action per red agent required");
    }
    std::vector<Action> full = actions;
    for (int k = 0; k < inner_.blue_count(); ++k) {
        full.emplace_back(scripted_blue_action(k, inner_));
    }
    StepResult r = inner_.step(full);
    r.observations.resize(static_cast<std::size_t>(inner_.red_count()));
    r.rewards.resize(static_cast<std::size_t>(inner_.red_count()));
    r.agent_done.resize(static_cast<std::size_t>(inner_.red_count()));
    return r;
}

}  // namespace marl
