#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace marl {

struct Cell {
    int x = 0;
    int y = 0;

    bool operator==(const Cell& o) const { return x == o.x && y == o.y; }
    bool operator!=(const Cell& o) const { return !(*this == o); }
    bool operator<(const Cell& o) const { return y != o.y ? y < o.y : x < o.x; }
};

inline int chebyshev(const Cell& a, const Cell& b) {
    return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

inline bool orthogonally_adjacent(const Cell& a, const Cell& b) {
    return std::abs(a.x - b.x) + std::abs(a.y - b.y) == 1;
}

/// Static geometry of a room-clearing scenario. North is row 0; moving
/// north decreases y. Walls block movement and sight; barricades block
/// movement but not sight.
struct GridLayout {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> wall_mask;       // width * height, row-major
    std::vector<std::uint8_t> barricade_mask;  // width * height, row-major
    std::vector<Cell> door_cells;   // entry corridor, ordered (row-major in files)
    std::vector<Cell> barricades;   // row-major
    std::vector<Cell> blue_spawns;  // row-major
    std::vector<Cell> red_spawns;   // row-major
    std::vector<Cell> blue_posts;   // row-major: center, lower-left, door guard

    std::size_t index(const Cell& c) const {
        return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width) +
               static_cast<std::size_t>(c.x);
    }
    bool in_bounds(const Cell& c) const {
        return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
    }
    bool wall(const Cell& c) const { return wall_mask[index(c)] != 0; }
    bool barricade(const Cell& c) const { return barricade_mask[index(c)] != 0; }
    bool solid(const Cell& c) const { return wall(c) || barricade(c); }

    /// Parses the text-grid format: one character per cell, row-major,
    /// newline-separated. '#' wall, 'B' barricade, 'D' door, 'r'/'b' spawns,
    /// 'P' post, '.' floor. Throws std::invalid_argument with the offending
    /// line/character on malformed input.
    static GridLayout parse(const std::string& text);

    std::string to_text() const;

    /// Checks the structural invariants (bounds, spawn/post placement,
    /// door connectivity). Throws std::invalid_argument on violation.
    void validate() const;
};

/// The built-in 12x12 two-barricade layout.
const std::string& default_room_clear_layout_text();

struct CombatConfig {
    int hp_max = 3;
    int attack_damage = 1;
    int attack_range = 6;  // Chebyshev cells
    double kill_reward = 1.0;
    double survivor_bonus = 0.5;  // per surviving teammate, paid on team win
    int step_cap = 200;
    int view_radius = 3;  // 7x7 observation window

    void validate() const;
};

/// All cells the segment between the two cell centers touches, in traversal
/// order. Exact corner crossings contribute both side cells, so the set is
/// symmetric in the endpoints.
std::vector<Cell> supercover(const Cell& a, const Cell& b);

/// True iff no wall cell lies on the supercover line strictly between the
/// two cells. Barricades do not block sight. Symmetric.
bool line_of_sight(const Cell& a, const Cell& b, const GridLayout& layout);

/// True iff the target is within attack range, the line crosses no wall,
/// and every barricade it crosses is orthogonally adjacent to the attacker
/// (firing over one's own barricade). Deliberately asymmetric at barricades.
bool can_damage(const Cell& attacker, const Cell& target, const GridLayout& layout,
                const CombatConfig& config);

/// Cells reachable from the sources by 4-directional movement over
/// non-solid cells. Returns a width*height mask.
std::vector<std::uint8_t> reachable_cells(const GridLayout& layout, const std::vector<Cell>& sources);

/// BFS move distances from the source over non-solid cells; -1 where
/// unreachable.
std::vector<int> bfs_distances(const GridLayout& layout, const Cell& source);

/// Analysis utility: cells from which the blue center post can be damaged
/// while no blue-reachable cell can damage back, other than point-blank
/// ones (adjacent cells and cells leaning over the same barricade).
/// Returns the cells sorted row-major.
std::vector<Cell> safe_cells(const GridLayout& layout, const CombatConfig& config);

}  // namespace marl
