#include "marl/take_cover.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

#include "marl/rng.hpp"

namespace marl {

void TakeCoverParams::validate() const {
    if (arena_width <= 0 || arena_height <= 0)
        throw std::invalid_argument("take_cover: arena dimensions must be positive");
    if (cover_count_min < 0 || cover_count_max < cover_count_min)
        throw std::invalid_argument("take_cover: bad cover box count range");
    if (wall_count_min < 0 || wall_count_max < wall_count_min)
        throw std::invalid_argument("take_cover: bad wall count range");
    if (cover_size_min <= 0 || cover_size_max < cover_size_min)
        throw std::invalid_argument("take_cover: bad cover box size range");
    if (cover_radius <= 0) throw std::invalid_argument("take_cover: cover_radius must be positive");
    if (move_step <= 0) throw std::invalid_argument("take_cover: move_step must be positive");
    if (num_rays < 1) throw std::invalid_argument("take_cover: num_rays must be positive");
    if (step_cap < 1) throw std::invalid_argument("take_cover: step_cap must be positive");
    if (resolution <= 0) throw std::invalid_argument("take_cover: resolution must be positive");
    if (max_generation_attempts < 1)
        throw std::invalid_argument("take_cover: max_generation_attempts must be positive");
}

bool point_in_solid(const Vec2& p, const CoverLayout& layout) {
    for (const Rect& r : layout.walls) {
        if (r.contains(p)) return true;
    }
    for (const Rect& r : layout.cover_boxes) {
        if (r.contains(p)) return true;
    }
    return false;
}

bool is_covered(const Vec2& p, const CoverLayout& layout) {
    if (!layout.arena.contains(p)) throw std::invalid_argument("is_covered: point outside arena");
    if (point_in_solid(p, layout)) throw std::invalid_argument("is_covered: point inside a solid");
    for (const Rect& r : layout.cover_boxes) {
        if (segment_intersects_rect(p, layout.enemy_pos, r)) return true;
    }
    for (const Rect& r : layout.walls) {
        if (segment_intersects_rect(p, layout.enemy_pos, r)) return true;
    }
    return false;
}

namespace {

// Candidate grid over the arena at the given resolution; cell centers.
struct CandidateGrid {
    double res;
    int nx, ny;
    Rect arena;

    Vec2 center(int gx, int gy) const {
        return {arena.xmin + (gx + 0.5) * res, arena.ymin + (gy + 0.5) * res};
    }
    int index(int gx, int gy) const { return gy * nx + gx; }
    int cell_of(double coord, double lo, int n) const {
        int c = static_cast<int>(std::floor((coord - lo) / res));
        return std::clamp(c, 0, n - 1);
    }
};

CandidateGrid make_grid(const CoverLayout& layout, double res) {
    CandidateGrid g;
    g.res = res;
    g.arena = layout.arena;
    g.nx = std::max(1, static_cast<int>(std::floor(layout.arena.width() / res)));
    g.ny = std::max(1, static_cast<int>(std::floor(layout.arena.height() / res)));
    return g;
}

}  // namespace

Vec2 oracle_cover_point(const CoverLayout& layout, double resolution) {
    CandidateGrid g = make_grid(layout, resolution);
    std::vector<char> passable(static_cast<std::size_t>(g.nx * g.ny), 0);
    for (int gy = 0; gy < g.ny; ++gy) {
        for (int gx = 0; gx < g.nx; ++gx) {
            passable[static_cast<std::size_t>(g.index(gx, gy))] =
                point_in_solid(g.center(gx, gy), layout) ? 0 : 1;
        }
    }
    // Reachability from the spawn cell (4-connected flood fill).
    std::vector<char> reach(static_cast<std::size_t>(g.nx * g.ny), 0);
    int sx = g.cell_of(layout.agent_spawn.x, layout.arena.xmin, g.nx);
    int sy = g.cell_of(layout.agent_spawn.y, layout.arena.ymin, g.ny);
    if (passable[static_cast<std::size_t>(g.index(sx, sy))]) {
        std::deque<std::pair<int, int>> queue{{sx, sy}};
        reach[static_cast<std::size_t>(g.index(sx, sy))] = 1;
        while (!queue.empty()) {
            auto [cx, cy] = queue.front();
            queue.pop_front();
            const int dx[4] = {0, 0, 1, -1};
            const int dy[4] = {1, -1, 0, 0};
            for (int k = 0; k < 4; ++k) {
                int nx2 = cx + dx[k], ny2 = cy + dy[k];
                if (nx2 < 0 || nx2 >= g.nx || ny2 < 0 || ny2 >= g.ny) continue;
                int idx = g.index(nx2, ny2);
                if (!passable[static_cast<std::size_t>(idx)] || reach[static_cast<std::size_t>(idx)])
                    continue;
                reach[static_cast<std::size_t>(idx)] = 1;
                queue.emplace_back(nx2, ny2);
            }
        }
    }
    bool found = false;
    Vec2 best;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int gy = 0; gy < g.ny; ++gy) {
        for (int gx = 0; gx < g.nx; ++gx) {
            int idx = g.index(gx, gy);
            if (!reach[static_cast<std::size_t>(idx)]) continue;
            Vec2 p = g.center(gx, gy);
            if (!is_covered(p, layout)) continue;
            Vec2 d = p - layout.agent_spawn;
            double d2 = d.dot(d);
            bool better = d2 < best_d2 ||
                          (d2 == best_d2 && (p.x < best.x || (p.x == best.x && p.y < best.y)));
            if (!found || better) {
                found = true;
                best = p;
                best_d2 = d2;
            }
        }
    }
    if (!found) throw std::runtime_error("oracle_cover_point: no covered reachable candidate");
    return best;
}

// ---------------------------------------------------------------------------
// Movement lattice (spacing = move_step, anchored at the episode spawn).

struct TakeCoverEnv::LatticeField {
    Vec2 origin;
    double step;
    int imin, imax, jmin, jmax;
    std::vector<int> dist;  // -1: invalid or unreachable from the cover circle

    int cols() const { return imax - imin + 1; }
    int rows() const { return jmax - jmin + 1; }
    int index(int i, int j) const { return (j - jmin) * cols() + (i - imin); }
    bool in_range(int i, int j) const { return i >= imin && i <= imax && j >= jmin && j <= jmax; }
    Vec2 point(int i, int j) const { return {origin.x + i * step, origin.y + j * step}; }

    int at(int i, int j) const {
        if (!in_range(i, j)) return -1;
        return dist[static_cast<std::size_t>(index(i, j))];
    }

    // Maps a position to lattice indices; false if it is off-lattice.
    bool locate(const Vec2& p, int& i, int& j) const {
        double fi = (p.x - origin.x) / step;
        double fj = (p.y - origin.y) / step;
        i = static_cast<int>(std::lround(fi));
        j = static_cast<int>(std::lround(fj));
        return std::abs(fi - i) < 1e-6 && std::abs(fj - j) < 1e-6 && in_range(i, j);
    }
};

bool TakeCoverEnv::valid_position(const Vec2& p) const {
    return layout_.arena.contains(p) && !point_in_solid(p, layout_);
}

namespace {

std::shared_ptr<const TakeCoverEnv::LatticeField> build_field_impl(
    const CoverLayout& layout, const Vec2& spawn, const Vec2& cover_point, double step,
    double cover_radius);

}  // namespace

void TakeCoverEnv::compute_episode_fields() {
    cover_point_ = oracle_cover_point(layout_, params_.resolution);
    field_ = build_field_impl(layout_, layout_.agent_spawn, cover_point_, params_.move_step,
                              params_.cover_radius);
    int i, j;
    if (field_->locate(layout_.agent_spawn, i, j)) {
        initial_oracle_steps_ = field_->at(i, j);
    } else {
        initial_oracle_steps_ = -1;
    }
}

namespace {

std::shared_ptr<const TakeCoverEnv::LatticeField> build_field_impl(
    const CoverLayout& layout, const Vec2& spawn, const Vec2& cover_point, double step,
    double cover_radius) {
    auto field = std::make_shared<TakeCoverEnv::LatticeField>();
    field->origin = spawn;
    field->step = step;
    field->imin = static_cast<int>(std::ceil((layout.arena.xmin - spawn.x) / step - 1e-9));
    field->imax = static_cast<int>(std::floor((layout.arena.xmax - spawn.x) / step + 1e-9));
    field->jmin = static_cast<int>(std::ceil((layout.arena.ymin - spawn.y) / step - 1e-9));
    field->jmax = static_cast<int>(std::floor((layout.arena.ymax - spawn.y) / step + 1e-9));
    field->dist.assign(static_cast<std::size_t>(field->cols() * field->rows()), -1);

    auto valid = [&](int i, int j) {
        Vec2 p = field->point(i, j);
        return layout.arena.contains(p) && !point_in_solid(p, layout);
    };

    // Multi-source BFS from every valid lattice point inside the cover circle.
    std::deque<std::pair<int, int>> queue;
    for (int j = field->jmin; j <= field->jmax; ++j) {
        for (int i = field->imin; i <= field->imax; ++i) {
            if (!valid(i, j)) continue;
            if (distance(field->point(i, j), cover_point) <= cover_radius) {
                field->dist[static_cast<std::size_t>(field->index(i, j))] = 0;
                queue.emplace_back(i, j);
            }
        }
    }
    const int dx[4] = {0, 0, 1, -1};
    const int dy[4] = {1, -1, 0, 0};
    while (!queue.empty()) {
        auto [ci, cj] = queue.front();
        queue.pop_front();
        int base = field->dist[static_cast<std::size_t>(field->index(ci, cj))];
        for (int k = 0; k < 4; ++k) {
            int ni = ci + dx[k], nj = cj + dy[k];
            if (!field->in_range(ni, nj)) continue;
            std::size_t idx = static_cast<std::size_t>(field->index(ni, nj));
            if (field->dist[idx] != -1 || !valid(ni, nj)) continue;
            field->dist[idx] = base + 1;
            queue.emplace_back(ni, nj);
        }
    }
    return field;
}

// One sampling attempt for an agent spawn on a fixed layout. Returns false
// if the candidate violates any episode precondition.
bool spawn_ok(const CoverLayout& layout, const TakeCoverParams& params, const Vec2& candidate) {
    if (!layout.arena.expanded(-params.clearance).contains(candidate)) return false;
    for (const Rect& r : layout.cover_boxes) {
        if (r.expanded(0.1).contains(candidate)) return false;
    }
    for (const Rect& r : layout.walls) {
        if (r.expanded(0.1).contains(candidate)) return false;
    }
    double min_enemy_dist = 0.30 * std::min(layout.arena.width(), layout.arena.height());
    if (distance(candidate, layout.enemy_pos) < min_enemy_dist) return false;
    if (is_covered(candidate, layout)) return false;  // spawning already hidden is a trivial episode
    CoverLayout with_spawn = layout;
    with_spawn.agent_spawn = candidate;
    Vec2 cover;
    try {
        cover = oracle_cover_point(with_spawn, params.resolution);
    } catch (const std::runtime_error&) {
        return false;
    }
    if (distance(cover, candidate) < params.min_cover_distance) return false;
    auto field = build_field_impl(with_spawn, candidate, cover, params.move_step, params.cover_radius);
    int i, j;
    if (!field->locate(candidate, i, j)) return false;
    return field->at(i, j) >= 0;
}

}  // namespace

CoverLayout generate_layout(std::uint64_t seed, const TakeCoverParams& params) {
    params.validate();
    for (int attempt = 0; attempt < params.max_generation_attempts; ++attempt) {
        Rng rng(mix_seed(seed, 0xC071E5, static_cast<std::uint64_t>(attempt)));
        CoverLayout layout;
        layout.arena = {0.0, 0.0, params.arena_width, params.arena_height};
        layout.cover_radius = params.cover_radius;

        int n_boxes = params.cover_count_min;
        if (params.cover_count_max > params.cover_count_min) {
            n_boxes += rng.uniform_int(params.cover_count_max - params.cover_count_min + 1);
        }
        for (int b = 0; b < n_boxes; ++b) {
            double bw = rng.uniform(params.cover_size_min, params.cover_size_max);
            double bh = rng.uniform(params.cover_size_min, params.cover_size_max);
            double x0 = rng.uniform(0.0, params.arena_width - bw);
            double y0 = rng.uniform(0.0, params.arena_height - bh);
            layout.cover_boxes.push_back({x0, y0, x0 + bw, y0 + bh});
        }
        int n_walls = params.wall_count_min;
        if (params.wall_count_max > params.wall_count_min) {
            n_walls += rng.uniform_int(params.wall_count_max - params.wall_count_min + 1);
        }
        for (int w = 0; w < n_walls; ++w) {
            double len = rng.uniform(params.wall_length_min, params.wall_length_max);
            bool horizontal = rng.bernoulli(0.5);
            double ww = horizontal ? len : params.wall_thickness;
            double wh = horizontal ? params.wall_thickness : len;
            double x0 = rng.uniform(0.0, params.arena_width - ww);
            double y0 = rng.uniform(0.0, params.arena_height - wh);
            layout.walls.push_back({x0, y0, x0 + ww, y0 + wh});
        }

        bool enemy_placed = false;
        double margin = params.clearance + params.enemy_radius;
        for (int t = 0; t < 50 && !enemy_placed; ++t) {
            Vec2 p{rng.uniform(margin, params.arena_width - margin),
                   rng.uniform(margin, params.arena_height - margin)};
            bool clear = true;
            for (const Rect& r : layout.cover_boxes) {
                if (r.expanded(params.enemy_radius + 0.05).contains(p)) clear = false;
            }
            for (const Rect& r : layout.walls) {
                if (r.expanded(params.enemy_radius + 0.05).contains(p)) clear = false;
            }
            if (clear) {
                layout.enemy_pos = p;
                enemy_placed = true;
            }
        }
        if (!enemy_placed) continue;

        bool spawn_placed = false;
        for (int t = 0; t < 80 && !spawn_placed; ++t) {
            Vec2 p{rng.uniform(params.clearance, params.arena_width - params.clearance),
                   rng.uniform(params.clearance, params.arena_height - params.clearance)};
            if (spawn_ok(layout, params, p)) {
                layout.agent_spawn = p;
                spawn_placed = true;
            }
        }
        if (spawn_placed) return layout;
    }
    throw std::runtime_error("generate_layout: no solvable layout for seed " + std::to_string(seed) +
                             " within " + std::to_string(params.max_generation_attempts) +
                             " attempts");
}

// ---------------------------------------------------------------------------

TakeCoverEnv::TakeCoverEnv(TakeCoverParams params, std::vector<std::uint64_t> layout_seeds)
    : params_(std::move(params)), layout_seeds_(std::move(layout_seeds)) {
    params_.validate();
    if (layout_seeds_.empty()) {
        throw std::invalid_argument("TakeCoverEnv: at least one layout seed required");
    }
    layouts_.reserve(layout_seeds_.size());
    for (std::uint64_t s : layout_seeds_) {
        layouts_.push_back(generate_layout(s, params_));
    }
}

TakeCoverEnv::TakeCoverEnv(TakeCoverParams params, std::vector<CoverLayout> layouts)
    : params_(std::move(params)), layouts_(std::move(layouts)) {
    params_.validate();
    if (layouts_.empty()) {
        throw std::invalid_argument("TakeCoverEnv: at least one layout required");
    }
}

SpaceSpec TakeCoverEnv::observation_space(int) const {
    return SpaceSpec::continuous(observation_size(), -1.0, 1.0);
}

SpaceSpec TakeCoverEnv::action_space(int) const { return SpaceSpec::discrete(kCoverActionCount); }

std::vector<Eigen::VectorXd> TakeCoverEnv::reset(std::uint64_t seed) {
    std::size_t idx = static_cast<std::size_t>(splitmix64(seed ^ 0x54414b45C0FFEEULL)) %
                      layouts_.size();
    layout_ = layouts_[idx];
    if (params_.randomize_spawn) {
        Rng rng(mix_seed(seed, 0x5AA5));
        for (int t = 0; t < 60; ++t) {
            Vec2 p{rng.uniform(params_.clearance, params_.arena_width - params_.clearance),
                   rng.uniform(params_.clearance, params_.arena_height - params_.clearance)};
            if (spawn_ok(layout_, params_, p)) {
                layout_.agent_spawn = p;
                break;
            }
        }
        // Falls back to the layout's canonical spawn if no candidate passed.
    }
    compute_episode_fields();
    position_ = layout_.agent_spawn;
    facing_ = 0.0;
    step_count_ = 0;
    done_ = false;
    entered_cover_ = false;
    return {observe()};
}

StepResult TakeCoverEnv::step(const std::vector<Action>& actions) {
    if (done_) throw std::runtime_error("TakeCoverEnv::step: episode finished, reset required");
    if (actions.size() != 1 || !std::holds_alternative<int>(actions[0])) {
        throw std::invalid_argument("TakeCoverEnv::step: expected one discrete action");
    }
    int a = std::get<int>(actions[0]);
    if (a < 0 || a >= kCoverActionCount) {
        throw std::invalid_argument("TakeCoverEnv::step: action out of range");
    }

    const double s = params_.move_step;
    Vec2 target = position_;
    switch (static_cast<CoverAction>(a)) {
        case CoverAction::MoveNorth: target.y += s; break;
        case CoverAction::MoveSouth: target.y -= s; break;
        case CoverAction::MoveEast: target.x += s; break;
        case CoverAction::MoveWest: target.x -= s; break;
        case CoverAction::RotateLeft:
            facing_ += params_.turn_degrees * M_PI / 180.0;
            break;
        case CoverAction::RotateRight:
            facing_ -= params_.turn_degrees * M_PI / 180.0;
            break;
    }
    if (a < 4 && valid_position(target)) {
        position_ = target;  // moves into solids are cancelled, penalty still applies
    }

    step_count_ += 1;
    double reward = -1.0 / 5000.0;
    if (!entered_cover_ && distance(position_, cover_point_) <= params_.cover_radius) {
        entered_cover_ = true;
        reward += 5.0;
        if (params_.terminate_on_cover) done_ = true;
    }
    if (step_count_ >= params_.step_cap) done_ = true;

    StepResult out;
    out.observations = {done_ ? Eigen::VectorXd::Zero(observation_size()).eval() : observe()};
    out.rewards = {reward};
    out.agent_done = {done_};
    out.episode_done = done_;
    out.info["win"] = entered_cover_ ? 1.0 : 0.0;
    out.info["steps"] = static_cast<double>(step_count_);
    out.info["oracle_steps"] = static_cast<double>(initial_oracle_steps_);
    return out;
}

Eigen::VectorXd TakeCoverEnv::observe() const {
    const int n = params_.num_rays;
    Eigen::VectorXd obs = Eigen::VectorXd::Zero(observation_size());
    const double max_range =
        std::hypot(layout_.arena.width(), layout_.arena.height());
    for (int k = 0; k < n; ++k) {
        double angle = facing_ + 2.0 * M_PI * k / n;
        Vec2 dir{std::cos(angle), std::sin(angle)};
        // Tag indices: 0 enemy, 1 cover, 2 wall, 3 none.
        double best_t = std::numeric_limits<double>::infinity();
        int tag = 3;
        if (auto t = ray_circle_hit(position_, dir, layout_.enemy_pos, params_.enemy_radius)) {
            if (*t < best_t) {
                best_t = *t;
                tag = 0;
            }
        }
        for (const Rect& r : layout_.cover_boxes) {
            if (auto t = ray_rect_hit(position_, dir, r)) {
                if (*t < best_t) {
                    best_t = *t;
                    tag = 1;
                }
            }
        }
        for (const Rect& r : layout_.walls) {
            if (auto t = ray_rect_hit(position_, dir, r)) {
                if (*t < best_t) {
                    best_t = *t;
                    tag = 2;
                }
            }
        }
        double boundary = ray_rect_exit(position_, dir, layout_.arena);
        if (boundary < best_t) {
            best_t = boundary;
            tag = 2;
        }
        double dist_norm = 1.0;
        if (std::isfinite(best_t)) {
            dist_norm = std::clamp(best_t / max_range, 0.0, 1.0);
        } else {
            tag = 3;
        }
        obs(5 * k) = dist_norm;
        obs(5 * k + 1 + tag) = 1.0;
    }
    obs(5 * n) = std::sin(facing_);
    obs(5 * n + 1) = std::cos(facing_);
    return obs;
}

int TakeCoverEnv::oracle_action() const {
    if (!field_) throw std::runtime_error("oracle_action: environment not reset");
    int i, j;
    if (!field_->locate(position_, i, j)) {
        throw std::runtime_error("oracle_action: agent is off the movement lattice");
    }
    int here = field_->at(i, j);
    if (here < 0) throw std::runtime_error("oracle_action: cover circle unreachable from here");
    if (here == 0) return static_cast<int>(CoverAction::MoveNorth);  // already inside the circle
    // Neighbor offsets in action order: north, south, east, west.
    const int di[4] = {0, 0, 1, -1};
    const int dj[4] = {1, -1, 0, 0};
    for (int k = 0; k < 4; ++k) {
        if (field_->at(i + di[k], j + dj[k]) == here - 1) return k;
    }
    throw std::runtime_error("oracle_action: inconsistent distance field");
}

int TakeCoverEnv::oracle_steps_from(const Vec2& pos) const {
    if (!field_) return -1;
    int i, j;
    if (!field_->locate(pos, i, j)) return -1;
    return field_->at(i, j);
}

}  // namespace marl
