#include "marl/meta.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "marl/algorithms/common.hpp"

namespace marl {

void NoiseConfig::validate() const {
    if (gaussian_sigma < 0.0) throw std::invalid_argument("noise: gaussian_sigma must be non-negative");
    if (dropout_prob < 0.0 || dropout_prob > 1.0) {
        throw std::invalid_argument("noise: dropout_prob out of [0,1]");
    }
}

Eigen::VectorXd corrupt_observation(const Eigen::VectorXd& obs, const NoiseConfig& config,
                                    Rng& rng) {
    config.validate();
    Eigen::VectorXd out = obs;
    if (config.gaussian_sigma > 0.0) {
        for (Eigen::Index i = 0; i < out.size(); ++i) {
            out(i) += config.gaussian_sigma * rng.normal();
        }
    }
    if (config.dropout_prob > 0.0) {
        for (Eigen::Index i = 0; i < out.size(); ++i) {
            if (rng.uniform() < config.dropout_prob) out(i) = 0.0;
        }
    }
    for (int c : config.failed_channels) {
        if (c < 0 || c >= out.size()) {
            throw std::invalid_argument("noise: failed channel index out of range");
        }
        out(c) = 0.0;
    }
    return out;
}

Population make_population(int size, int obs_dim, int n_actions, int team_size,
                           const std::vector<int>& hidden,
                           const std::map<std::string, double>& hyperparams, std::uint64_t seed) {
    if (size < 2) throw std::invalid_argument("population: size must be at least 2");
    if (team_size < 1) throw std::invalid_argument("population: team_size must be positive");
    Population pop;
    for (int m = 0; m < size; ++m) {
        PopulationMember member;
        for (int a = 0; a < team_size; ++a) {
            member.actors.push_back(mlp_init(layer_spec(obs_dim, hidden, n_actions),
                                             Activation::Tanh, OutputActivation::Identity,
                                             mix_seed(seed, 0x909, static_cast<std::uint64_t>(m) * 64 +
                                                                        static_cast<std::uint64_t>(a))));
        }
        member.hyperparams = hyperparams;
        member.lineage_id = m;
        member.version = pop.next_version++;
        pop.members.push_back(std::move(member));
    }
    return pop;
}

namespace {

int member_action(const PopulationMember& member, int slot, const Eigen::VectorXd& obs) {
    const Mlp& actor = member.actors[static_cast<std::size_t>(slot) % member.actors.size()];
    return argmax_lowest(mlp_forward(actor, obs));
}

// Plays one episode, red driven by `red`, blue by `blue`.
// Returns +1 red win, -1 blue win, 0 draw.
int play_match(RoomClearEnv& env, const PopulationMember& red, const PopulationMember& blue,
               std::uint64_t seed) {
    std::vector<Eigen::VectorXd> obs = env.reset(seed);
    StepResult r;
    while (!env.done()) {
        std::vector<Action> actions;
        for (int i = 0; i < env.num_agents(); ++i) {
            const CombatantState& agent = env.agents()[static_cast<std::size_t>(i)];
            if (!agent.alive) {
                actions.emplace_back(static_cast<int>(CombatAction::Noop));
                continue;
            }
            if (agent.team == Team::Red) {
                actions.emplace_back(member_action(red, i, obs[static_cast<std::size_t>(i)]));
            } else {
                int slot = i - env.red_count();
                actions.emplace_back(member_action(blue, slot, obs[static_cast<std::size_t>(i)]));
            }
        }
        r = env.step(actions);
        obs = r.observations;
    }
    if (r.info.at("win_red") == 1.0) return 1;
    if (r.info.at("win_blue") == 1.0) return -1;
    return 0;
}

}  // namespace

FitnessTable run_tournament(Population& population, const MatchEnvFactory& env_factory,
                            int episodes_per_pair, std::uint64_t seed, int workers) {
    const int n = population.size();
    if (n < 2) throw std::invalid_argument("tournament: population size must be at least 2");
    if (episodes_per_pair < 1) throw std::invalid_argument("tournament: episodes_per_pair must be positive");

    std::vector<std::pair<int, int>> pairings;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) pairings.emplace_back(i, j);
    }

    FitnessTable table;
    table.pairs.resize(pairings.size());
    table.fitness.assign(static_cast<std::size_t>(n), 0.0);

    auto run_pair = [&](std::size_t pair_index) {
        auto [i, j] = pairings[pair_index];
        std::unique_ptr<RoomClearEnv> env = env_factory();
        if (!env) throw std::runtime_error("tournament: environment factory returned null");
        PairResult result;
        result.member_a = i;
        result.member_b = j;
        for (int e = 0; e < episodes_per_pair; ++e) {
            std::uint64_t match_seed =
                mix_seed(seed, 0x70u, pair_index * 1000003ULL + static_cast<std::uint64_t>(e));
            // Alternate sides so neither member owns the red advantage.
            bool a_is_red = (e % 2) == 0;
            const PopulationMember& red =
                population.members[static_cast<std::size_t>(a_is_red ? i : j)];
            const PopulationMember& blue =
                population.members[static_cast<std::size_t>(a_is_red ? j : i)];
            int outcome = play_match(*env, red, blue, match_seed);
            if (outcome == 0) {
                result.draws += 1;
            } else if ((outcome == 1) == a_is_red) {
                result.wins_a += 1;
            } else {
                result.wins_b += 1;
            }
        }
        table.pairs[pair_index] = result;
    };

    if (workers <= 1 || pairings.size() <= 1) {
        for (std::size_t p = 0; p < pairings.size(); ++p) run_pair(p);
    } else {
        const int nthreads = std::min<int>(workers, static_cast<int>(pairings.size()));
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nthreads));
        for (int w = 0; w < nthreads; ++w) {
            pool.emplace_back([&, w]() {
                try {
                    for (std::size_t p = static_cast<std::size_t>(w); p < pairings.size();
                         p += static_cast<std::size_t>(nthreads)) {
                        run_pair(p);
                    }
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (const auto& err : errors) {
            if (err) std::rethrow_exception(err);
        }
    }

    for (const PairResult& pr : table.pairs) {
        table.fitness[static_cast<std::size_t>(pr.member_a)] += pr.wins_a + 0.5 * pr.draws;
        table.fitness[static_cast<std::size_t>(pr.member_b)] += pr.wins_b + 0.5 * pr.draws;
    }
    for (int m = 0; m < n; ++m) {
        population.members[static_cast<std::size_t>(m)].fitness =
            table.fitness[static_cast<std::size_t>(m)];
    }
    return table;
}

void evolve_population(Population& population, const FitnessTable& table, Rng& rng) {
    const int n = population.size();
    if (n < 5) throw std::invalid_argument("evolve: population smaller than 5");
    if (static_cast<int>(table.fitness.size()) != n) {
        throw std::invalid_argument("evolve: fitness table size mismatch");
    }
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return table.fitness[static_cast<std::size_t>(a)] > table.fitness[static_cast<std::size_t>(b)];
    });  // ties keep the lower member index first

    const int quantile = n / 5;  // 20%
    for (int k = 0; k < quantile; ++k) {
        int victim = order[static_cast<std::size_t>(n - 1 - k)];
        int parent = order[static_cast<std::size_t>(rng.uniform_int(quantile))];
        PopulationMember child = population.members[static_cast<std::size_t>(parent)];
        for (auto& [key, value] : child.hyperparams) {
            value *= rng.bernoulli(0.5) ? 0.8 : 1.25;  // exploit/explore perturbation
        }
        child.fitness = 0.0;
        child.version = population.next_version++;
        population.members[static_cast<std::size_t>(victim)] = std::move(child);
    }
}

}  // namespace marl
