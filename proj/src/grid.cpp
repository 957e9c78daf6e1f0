#include "marl/grid.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace marl {

std::vector<Cell> supercover(const Cell& a, const Cell& b) {
    std::vector<Cell> cells;
    int dx = b.x - a.x;
    int dy = b.y - a.y;
    int x = a.x;
    int y = a.y;
    cells.push_back(a);
    int xstep = dx >= 0 ? 1 : -1;
    int ystep = dy >= 0 ? 1 : -1;
    dx = std::abs(dx);
    dy = std::abs(dy);
    const int ddx = 2 * dx;
    const int ddy = 2 * dy;
    if (ddx >= ddy) {
        int error = dx;
        int errorprev = dx;
        for (int i = 0; i < dx; ++i) {
            x += xstep;
            error += ddy;
            if (error > ddx) {
                y += ystep;
                error -= ddx;
                if (error + errorprev < ddx) {
                    cells.push_back({x, y - ystep});
                } else if (error + errorprev > ddx) {
                    cells.push_back({x - xstep, y});
                } else {  // exact corner: both side cells are touched
                    cells.push_back({x, y - ystep});
                    cells.push_back({x - xstep, y});
                }
            }
            cells.push_back({x, y});
            errorprev = error;
        }
    } else {
        int error = dy;
        int errorprev = dy;
        for (int i = 0; i < dy; ++i) {
            y += ystep;
            error += ddx;
            if (error > ddy) {
                x += xstep;
                error -= ddy;
                if (error + errorprev < ddy) {
                    cells.push_back({x - xstep, y});
                } else if (error + errorprev > ddy) {
                    cells.push_back({x, y - ystep});
                } else {
                    cells.push_back({x - xstep, y});
                    cells.push_back({x, y - ystep});
                }
            }
            cells.push_back({x, y});
            errorprev = error;
        }
    }
    return cells;
}

bool line_of_sight(const Cell& a, const Cell& b, const GridLayout& layout) {
    for (const Cell& c : supercover(a, b)) {
        if (c == a || c == b) continue;
        if (layout.in_bounds(c) && layout.wall(c)) return false;
    }
    return true;
}

bool can_damage(const Cell& attacker, const Cell& target, const GridLayout& layout,
                const CombatConfig& config) {
    if (chebyshev(attacker, target) > config.attack_range) return false;
    for (const Cell& c : supercover(attacker, target)) {
        if (c == attacker || c == target) continue;
        if (!layout.in_bounds(c)) continue;
        if (layout.wall(c)) return false;
        if (layout.barricade(c) && !orthogonally_adjacent(attacker, c)) return false;
    }
    return true;
}

std::vector<std::uint8_t> reachable_cells(const GridLayout& layout,
                                          const std::vector<Cell>& sources) {
    std::vector<std::uint8_t> reach(static_cast<std::size_t>(layout.width * layout.height), 0);
    std::deque<Cell> queue;
    for (const Cell& s : sources) {
        if (!layout.in_bounds(s) || layout.solid(s)) continue;
        if (!reach[layout.index(s)]) {
            reach[layout.index(s)] = 1;
            queue.push_back(s);
        }
    }
    const int dx[4] = {0, 0, 1, -1};
    const int dy[4] = {-1, 1, 0, 0};
    while (!queue.empty()) {
        Cell c = queue.front();
        queue.pop_front();
        for (int k = 0; k < 4; ++k) {
            Cell n{c.x + dx[k], c.y + dy[k]};
            if (!layout.in_bounds(n) || layout.solid(n) || reach[layout.index(n)]) continue;
            reach[layout.index(n)] = 1;
            queue.push_back(n);
        }
    }
    return reach;
}

std::vector<int> bfs_distances(const GridLayout& layout, const Cell& source) {
    std::vector<int> dist(static_cast<std::size_t>(layout.width * layout.height), -1);
    if (!layout.in_bounds(source) || layout.solid(source)) return dist;
    std::deque<Cell> queue{source};
    dist[layout.index(source)] = 0;
    const int dx[4] = {0, 0, 1, -1};
    const int dy[4] = {-1, 1, 0, 0};
    while (!queue.empty()) {
        Cell c = queue.front();
        queue.pop_front();
        int base = dist[layout.index(c)];
        for (int k = 0; k < 4; ++k) {
            Cell n{c.x + dx[k], c.y + dy[k]};
            if (!layout.in_bounds(n) || layout.solid(n) || dist[layout.index(n)] != -1) continue;
            dist[layout.index(n)] = base + 1;
            queue.push_back(n);
        }
    }
    return dist;
}

std::vector<Cell> safe_cells(const GridLayout& layout, const CombatConfig& config) {
    std::vector<Cell> result;
    if (layout.blue_posts.empty()) return result;
    const Cell center_post = layout.blue_posts.front();
    std::vector<std::uint8_t> blue_reach = reachable_cells(layout, layout.blue_spawns);

    for (int y = 0; y < layout.height; ++y) {
        for (int x = 0; x < layout.width; ++x) {
            Cell c{x, y};
            if (layout.solid(c)) continue;
            if (!can_damage(c, center_post, layout, config)) continue;

            // Barricades the candidate leans on; anyone leaning on the same
            // barricade trades at point blank and is exempt from the scan.
            std::vector<Cell> own_barricades;
            const int dx[4] = {0, 0, 1, -1};
            const int dy[4] = {-1, 1, 0, 0};
            for (int k = 0; k < 4; ++k) {
                Cell n{c.x + dx[k], c.y + dy[k]};
                if (layout.in_bounds(n) && layout.barricade(n)) own_barricades.push_back(n);
            }

            bool safe = true;
            for (int by = 0; by < layout.height && safe; ++by) {
                for (int bx = 0; bx < layout.width && safe; ++bx) {
                    Cell b{bx, by};
                    if (!blue_reach[layout.index(b)]) continue;
                    if (chebyshev(b, c) <= 1) continue;
                    bool shares_barricade = false;
                    for (const Cell& w : own_barricades) {
                        if (orthogonally_adjacent(b, w)) shares_barricade = true;
                    }
                    if (shares_barricade) continue;
                    if (can_damage(b, c, layout, config)) safe = false;
                }
            }
            if (safe) result.push_back(c);
        }
    }
    return result;
}

// ---------------------------------------------------------------------------

void CombatConfig::validate() const {
    if (hp_max <= 0) throw std::invalid_argument("combat: hp_max must be positive");
    if (attack_damage <= 0) throw std::invalid_argument("combat: attack_damage must be positive");
    if (attack_range <= 0) throw std::invalid_argument("combat: attack_range must be positive");
    if (kill_reward < 0) throw std::invalid_argument("combat: kill_reward must be non-negative");
    if (survivor_bonus < 0) throw std::invalid_argument("combat: survivor_bonus must be non-negative");
    if (step_cap <= 0) throw std::invalid_argument("combat: step_cap must be positive");
    if (view_radius <= 0) throw std::invalid_argument("combat: view_radius must be positive");
}

GridLayout GridLayout::parse(const std::string& text) {
    GridLayout layout;
    std::vector<std::string> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(line);
    }
    if (rows.empty()) throw std::invalid_argument("grid parse: empty layout");
    layout.height = static_cast<int>(rows.size());
    layout.width = static_cast<int>(rows[0].size());
    for (std::size_t y = 0; y < rows.size(); ++y) {
        if (static_cast<int>(rows[y].size()) != layout.width) {
            throw std::invalid_argument("grid parse: ragged row " + std::to_string(y));
        }
    }
    layout.wall_mask.assign(static_cast<std::size_t>(layout.width * layout.height), 0);
    layout.barricade_mask.assign(static_cast<std::size_t>(layout.width * layout.height), 0);
    for (int y = 0; y < layout.height; ++y) {
        for (int x = 0; x < layout.width; ++x) {
            char ch = rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
            Cell c{x, y};
            switch (ch) {
                case '#': layout.wall_mask[layout.index(c)] = 1; break;
                case 'B':
                    layout.barricade_mask[layout.index(c)] = 1;
                    layout.barricades.push_back(c);
                    break;
                case 'D': layout.door_cells.push_back(c); break;
                case 'r': layout.red_spawns.push_back(c); break;
                case 'b': layout.blue_spawns.push_back(c); break;
                case 'P': layout.blue_posts.push_back(c); break;
                case '.': break;
                default:
                    throw std::invalid_argument(std::string("grid parse: unknown character '") + ch +
                                                "' at row " + std::to_string(y) + " col " +
                                                std::to_string(x));
            }
        }
    }
    layout.validate();
    return layout;
}

std::string GridLayout::to_text() const {
    std::vector<std::string> rows(static_cast<std::size_t>(height),
                                  std::string(static_cast<std::size_t>(width), '.'));
    auto put = [&](const Cell& c, char ch) {
        rows[static_cast<std::size_t>(c.y)][static_cast<std::size_t>(c.x)] = ch;
    };
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            Cell c{x, y};
            if (wall(c)) put(c, '#');
            if (barricade(c)) put(c, 'B');
        }
    }
    for (const Cell& c : door_cells) put(c, 'D');
    for (const Cell& c : blue_posts) put(c, 'P');
    for (const Cell& c : red_spawns) put(c, 'r');
    for (const Cell& c : blue_spawns) put(c, 'b');
    std::string out;
    for (const std::string& row : rows) {
        out += row;
        out += '\n';
    }
    return out;
}

void GridLayout::validate() const {
    if (width <= 0 || height <= 0) throw std::invalid_argument("grid: empty layout");
    auto check_floor = [&](const Cell& c, const char* what) {
        if (!in_bounds(c)) throw std::invalid_argument(std::string("grid: ") + what + " out of bounds");
        if (solid(c)) throw std::invalid_argument(std::string("grid: ") + what + " on a solid cell");
    };
    for (const Cell& c : blue_spawns) check_floor(c, "blue spawn");
    for (const Cell& c : red_spawns) check_floor(c, "red spawn");
    for (const Cell& c : blue_posts) check_floor(c, "blue post");
    for (const Cell& c : door_cells) check_floor(c, "door cell");
    if (blue_spawns.empty() || red_spawns.empty()) {
        throw std::invalid_argument("grid: both teams need at least one spawn");
    }
    // The door must connect the blue spawn region to every post.
    std::vector<std::uint8_t> reach = reachable_cells(*this, blue_spawns);
    for (const Cell& p : blue_posts) {
        if (!reach[index(p)]) {
            throw std::invalid_argument("grid: blue post unreachable from blue spawns");
        }
    }
}

const std::string& default_room_clear_layout_text() {
    static const std::string text =
        "############\n"
        "#..........#\n"
        "#.r#####r..#\n"
        "#....#.....#\n"
        "#..#.#.#...#\n"
        "#..#B#B#...#\n"
        "#..........#\n"
        "#..........#\n"
        "#....P.....#\n"
        "#P.#.P.....#\n"
        "#####D######\n"
        "#..b..b.b..#\n";
    return text;
}

}  // namespace marl
