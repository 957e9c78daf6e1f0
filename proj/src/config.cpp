#include "marl/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace marl {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(value);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& why) {
    throw std::invalid_argument("config: key '" + key + "': " + why);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) bad_value(key, "not a number: '" + value + "'");
        return v;
    } catch (const std::invalid_argument&) {
        bad_value(key, "not a number: '" + value + "'");
    } catch (const std::out_of_range&) {
        bad_value(key, "number out of range: '" + value + "'");
    }
}

long parse_long(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        long v = std::stol(value, &used);
        if (used != value.size()) bad_value(key, "not an integer: '" + value + "'");
        return v;
    } catch (const std::invalid_argument&) {
        bad_value(key, "not an integer: '" + value + "'");
    } catch (const std::out_of_range&) {
        bad_value(key, "integer out of range: '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    bad_value(key, "expected true/false");
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) bad_value(key, "not an unsigned integer: '" + value + "'");
        return static_cast<std::uint64_t>(v);
    } catch (const std::invalid_argument&) {
        bad_value(key, "not an unsigned integer: '" + value + "'");
    } catch (const std::out_of_range&) {
        bad_value(key, "integer out of range: '" + value + "'");
    }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    // Every recognized key; anything else is a typo and rejected.
    static const std::set<std::string> known = {
        "run.seeds", "run.output_dir", "run.workers",
        "env.name", "env.step_cap", "env.layout_seeds", "env.layout_file",
        "env.arena_width", "env.arena_height", "env.cover_count_min", "env.cover_count_max",
        "env.cover_size_min", "env.cover_size_max", "env.wall_count_min", "env.wall_count_max",
        "env.wall_length_min", "env.wall_length_max", "env.wall_thickness", "env.cover_radius",
        "env.move_step", "env.turn_degrees", "env.num_rays", "env.resolution",
        "env.randomize_spawn", "env.min_cover_distance", "env.enemy_radius", "env.clearance",
        "env.terminate_on_cover",
        "env.hp_max", "env.attack_damage", "env.attack_range", "env.kill_reward",
        "env.survivor_bonus", "env.view_radius",
        "algo.name", "algo.hidden", "algo.lr", "algo.gamma", "algo.tau", "algo.epsilon_explore",
        "algo.clip_ratio", "algo.gae_lambda", "algo.entropy_coef", "algo.value_coef",
        "algo.noise_sigma", "algo.batch_size", "algo.buffer_capacity", "algo.temperature",
        "algo.epsilon_start", "algo.epsilon_end", "algo.epsilon_decay_steps",
        "algo.noise_sigma_start", "algo.noise_sigma_end", "algo.noise_decay_episodes",
        "algo.rollout_horizon", "algo.epochs", "algo.minibatch", "algo.normalize_advantages",
        "algo.dagger_iterations", "algo.dagger_episodes_per_iter", "algo.dagger_epochs",
        "train.total_steps", "train.total_episodes", "train.update_every",
        "train.warmup_transitions", "train.resume_from",
        "eval.cadence_episodes", "eval.episodes", "eval.max_steps",
        "checkpoint.interval_episodes",
        "noise.sigma", "noise.dropout", "noise.failed_channels", "noise.apply_in_eval",
        "population.size", "population.generations", "population.episodes_per_pair",
        "population.checkpoints",
    };

    RunConfig cfg;
    std::set<std::string> seen;
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        std::string stripped = line;
        std::size_t hash = stripped.find('#');
        if (hash != std::string::npos) stripped = stripped.substr(0, hash);
        stripped = trim(stripped);
        if (stripped.empty()) continue;
        std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                        " is not of the form key = value");
        }
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (!known.count(key)) {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
        if (seen.count(key)) {
            throw std::invalid_argument("config: duplicate key '" + key + "'");
        }
        seen.insert(key);
        if (value.empty()) bad_value(key, "empty value");

        if (key == "run.seeds") {
            cfg.seeds.clear();
            for (const auto& s : split_list(value)) cfg.seeds.push_back(parse_u64(key, s));
            if (cfg.seeds.empty()) bad_value(key, "empty list");
        } else if (key == "run.output_dir") {
            cfg.output_dir = value;
        } else if (key == "run.workers") {
            cfg.workers = static_cast<int>(parse_long(key, value));
        } else if (key == "env.name") {
            cfg.env_name = value;
        } else if (key == "env.step_cap") {
            long cap = parse_long(key, value);
            cfg.take_cover.step_cap = static_cast<int>(cap);
            cfg.combat.step_cap = static_cast<int>(cap);
        } else if (key == "env.layout_seeds") {
            cfg.layout_seeds.clear();
            for (const auto& s : split_list(value)) cfg.layout_seeds.push_back(parse_u64(key, s));
            if (cfg.layout_seeds.empty()) bad_value(key, "empty list");
        } else if (key == "env.layout_file") {
            cfg.layout_file = value;
        } else if (key == "env.arena_width") {
            cfg.take_cover.arena_width = parse_double(key, value);
        } else if (key == "env.arena_height") {
            cfg.take_cover.arena_height = parse_double(key, value);
        } else if (key == "env.cover_count_min") {
            cfg.take_cover.cover_count_min = static_cast<int>(parse_long(key, value));
        } else if (key == "env.cover_count_max") {
            cfg.take_cover.cover_count_max = static_cast<int>(parse_long(key, value));
        } else if (key == "env.cover_size_min") {
            cfg.take_cover.cover_size_min = parse_double(key, value);
        } else if (key == "env.cover_size_max") {
            cfg.take_cover.cover_size_max = parse_double(key, value);
        } else if (key == "env.wall_count_min") {
            cfg.take_cover.wall_count_min = static_cast<int>(parse_long(key, value));
        } else if (key == "env.wall_count_max") {
            cfg.take_cover.wall_count_max = static_cast<int>(parse_long(key, value));
        } else if (key == "env.wall_length_min") {
            cfg.take_cover.wall_length_min = parse_double(key, value);
        } else if (key == "env.wall_length_max") {
            cfg.take_cover.wall_length_max = parse_double(key, value);
        } else if (key == "env.wall_thickness") {
            cfg.take_cover.wall_thickness = parse_double(key, value);
        } else if (key == "env.cover_radius") {
            cfg.take_cover.cover_radius = parse_double(key, value);
        } else if (key == "env.move_step") {
            cfg.take_cover.move_step = parse_double(key, value);
        } else if (key == "env.turn_degrees") {
            cfg.take_cover.turn_degrees = parse_double(key, value);
        } else if (key == "env.num_rays") {
            cfg.take_cover.num_rays = static_cast<int>(parse_long(key, value));
        } else if (key == "env.resolution") {
            cfg.take_cover.resolution = parse_double(key, value);
        } else if (key == "env.randomize_spawn") {
            cfg.take_cover.randomize_spawn = parse_bool(key, value);
        } else if (key == "env.min_cover_distance") {
            cfg.take_cover.min_cover_distance = parse_double(key, value);
        } else if (key == "env.enemy_radius") {
            cfg.take_cover.enemy_radius = parse_double(key, value);
        } else if (key == "env.clearance") {
            cfg.take_cover.clearance = parse_double(key, value);
        } else if (key == "env.terminate_on_cover") {
            cfg.take_cover.terminate_on_cover = parse_bool(key, value);
        } else if (key == "env.hp_max") {
            cfg.combat.hp_max = static_cast<int>(parse_long(key, value));
        } else if (key == "env.attack_damage") {
            cfg.combat.attack_damage = static_cast<int>(parse_long(key, value));
        } else if (key == "env.attack_range") {
            cfg.combat.attack_range = static_cast<int>(parse_long(key, value));
        } else if (key == "env.kill_reward") {
            cfg.combat.kill_reward = parse_double(key, value);
        } else if (key == "env.survivor_bonus") {
            cfg.combat.survivor_bonus = parse_double(key, value);
        } else if (key == "env.view_radius") {
            cfg.combat.view_radius = static_cast<int>(parse_long(key, value));
        } else if (key == "algo.name") {
            cfg.algo_name = value;
        } else if (key == "algo.hidden") {
            cfg.hidden.clear();
            for (const auto& s : split_list(value)) {
                cfg.hidden.push_back(static_cast<int>(parse_long(key, s)));
            }
        } else if (key == "algo.lr") {
            cfg.learning_rate = parse_double(key, value);
        } else if (key == "algo.gamma") {
            cfg.hp.gamma = parse_double(key, value);
        } else if (key == "algo.tau") {
            cfg.hp.tau = parse_double(key, value);
        } else if (key == "algo.epsilon_explore") {
            cfg.hp.epsilon_explore = parse_double(key, value);
        } else if (key == "algo.clip_ratio") {
            cfg.hp.clip_ratio = parse_double(key, value);
        } else if (key == "algo.gae_lambda") {
            cfg.hp.gae_lambda = parse_double(key, value);
        } else if (key == "algo.entropy_coef") {
            cfg.hp.entropy_coef = parse_double(key, value);
        } else if (key == "algo.value_coef") {
            cfg.hp.value_coef = parse_double(key, value);
        } else if (key == "algo.noise_sigma") {
            cfg.hp.noise_sigma = parse_double(key, value);
        } else if (key == "algo.batch_size") {
            cfg.hp.batch_size = static_cast<int>(parse_long(key, value));
        } else if (key == "algo.buffer_capacity") {
            cfg.hp.buffer_capacity = parse_long(key, value);
        } else if (key == "algo.temperature") {
            cfg.temperature = parse_double(key, value);
        } else if (key == "algo.epsilon_start") {
            cfg.epsilon_start = parse_double(key, value);
        } else if (key == "algo.epsilon_end") {
            cfg.epsilon_end = parse_double(key, value);
        } else if (key == "algo.epsilon_decay_steps") {
            cfg.epsilon_decay_steps = parse_long(key, value);
        } else if (key == "algo.noise_sigma_start") {
            cfg.noise_sigma_start = parse_double(key, value);
        } else if (key == "algo.noise_sigma_end") {
            cfg.noise_sigma_end = parse_double(key, value);
        } else if (key == "algo.noise_decay_episodes") {
            cfg.noise_decay_episodes = parse_long(key, value);
        } else if (key == "algo.rollout_horizon") {
            cfg.rollout_horizon = parse_long(key, value);
        } else if (key == "algo.epochs") {
            cfg.epochs = static_cast<int>(parse_long(key, value));
        } else if (key == "algo.minibatch") {
            cfg.minibatch = static_cast<int>(parse_long(key, value));
        } else if (key == "algo.normalize_advantages") {
            cfg.normalize_advantages = parse_bool(key, value);
        } else if (key == "algo.dagger_iterations") {
            cfg.dagger_iterations = static_cast<int>(parse_long(key, value));
        } else if (key == "algo.dagger_episodes_per_iter") {
            cfg.dagger_episodes_per_iter = static_cast<int>(parse_long(key, value));
        } else if (key == "algo.dagger_epochs") {
            cfg.dagger_epochs = static_cast<int>(parse_long(key, value));
        } else if (key == "train.total_steps") {
            cfg.total_steps = parse_long(key, value);
        } else if (key == "train.total_episodes") {
            cfg.total_episodes = parse_long(key, value);
        } else if (key == "train.update_every") {
            cfg.update_every = static_cast<int>(parse_long(key, value));
        } else if (key == "train.warmup_transitions") {
            cfg.warmup_transitions = parse_long(key, value);
        } else if (key == "train.resume_from") {
            cfg.resume_from = value;
        } else if (key == "eval.cadence_episodes") {
            cfg.eval_cadence_episodes = static_cast<int>(parse_long(key, value));
        } else if (key == "eval.episodes") {
            cfg.eval_episodes = static_cast<int>(parse_long(key, value));
        } else if (key == "eval.max_steps") {
            cfg.eval_max_steps = static_cast<int>(parse_long(key, value));
        } else if (key == "checkpoint.interval_episodes") {
            cfg.checkpoint_interval_episodes = parse_long(key, value);
        } else if (key == "noise.sigma") {
            cfg.noise.gaussian_sigma = parse_double(key, value);
        } else if (key == "noise.dropout") {
            cfg.noise.dropout_prob = parse_double(key, value);
        } else if (key == "noise.failed_channels") {
            cfg.noise.failed_channels.clear();
            for (const auto& s : split_list(value)) {
                cfg.noise.failed_channels.push_back(static_cast<int>(parse_long(key, s)));
            }
        } else if (key == "noise.apply_in_eval") {
            cfg.noise_in_eval = parse_bool(key, value);
        } else if (key == "population.size") {
            cfg.population_size = static_cast<int>(parse_long(key, value));
        } else if (key == "population.generations") {
            cfg.population_generations = static_cast<int>(parse_long(key, value));
        } else if (key == "population.episodes_per_pair") {
            cfg.population_episodes_per_pair = static_cast<int>(parse_long(key, value));
        } else if (key == "population.checkpoints") {
            cfg.population_checkpoints = split_list(value);
        }
    }

    // Required keys and cross-field checks, each named.
    if (cfg.env_name.empty()) throw std::invalid_argument("config: missing required key 'env.name'");
    if (cfg.env_name != "take_cover" && cfg.env_name != "room_clear") {
        bad_value("env.name", "expected take_cover or room_clear");
    }
    if (cfg.algo_name.empty()) throw std::invalid_argument("config: missing required key 'algo.name'");
    static const std::set<std::string> algos = {"dqn", "ddpg", "maddpg", "ppo",
                                                "dagger", "random", "oracle"};
    if (!algos.count(cfg.algo_name)) bad_value("algo.name", "unknown algorithm '" + cfg.algo_name + "'");
    bool has_steps = seen.count("train.total_steps") > 0;
    bool has_episodes = seen.count("train.total_episodes") > 0;
    if (has_steps == has_episodes) {
        throw std::invalid_argument(
            "config: exactly one of 'train.total_steps' and 'train.total_episodes' must be set");
    }
    if (has_steps && cfg.total_steps <= 0) bad_value("train.total_steps", "must be positive");
    if (has_episodes && cfg.total_episodes <= 0) bad_value("train.total_episodes", "must be positive");
    if (cfg.workers < 1) bad_value("run.workers", "must be at least 1");
    if (cfg.update_every < 1) bad_value("train.update_every", "must be at least 1");
    if (cfg.eval_cadence_episodes < 1) bad_value("eval.cadence_episodes", "must be at least 1");
    if (cfg.eval_episodes < 1) bad_value("eval.episodes", "must be at least 1");
    if (cfg.eval_max_steps < 1) bad_value("eval.max_steps", "must be at least 1");
    if (cfg.checkpoint_interval_episodes < 0) {
        bad_value("checkpoint.interval_episodes", "must be non-negative");
    }
    if (cfg.learning_rate <= 0) bad_value("algo.lr", "must be positive");
    if (cfg.temperature <= 0) bad_value("algo.temperature", "must be positive");
    if (cfg.hidden.empty()) bad_value("algo.hidden", "empty list");
    for (int h : cfg.hidden) {
        if (h <= 0) bad_value("algo.hidden", "layer sizes must be positive");
    }
    try {
        cfg.hp.validate();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("config: algo.* value out of range: ") + e.what());
    }
    try {
        cfg.noise.validate();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("config: noise.* value out of range: ") + e.what());
    }
    try {
        cfg.take_cover.validate();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("config: env.* value out of range: ") + e.what());
    }
    try {
        cfg.combat.validate();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("config: env.* value out of range: ") + e.what());
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace marl
