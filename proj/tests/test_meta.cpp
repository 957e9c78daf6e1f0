#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>

#include "marl/meta.hpp"
#include "marl/wrappers.hpp"

using namespace marl;

namespace {

MatchEnvFactory default_factory(int step_cap = 60) {
    return [step_cap]() {
        CombatConfig config;
        config.step_cap = step_cap;
        return std::make_unique<RoomClearEnv>(GridLayout::parse(default_room_clear_layout_text()),
                                              config);
    };
}

Population small_population(int size, std::uint64_t seed = 5) {
    // Tiny actors keep tournament episodes cheap.
    return make_population(size, 199, 6, 2, {8}, {{"actor_lr", 1e-3}, {"noise_sigma", 0.5}}, seed);
}

}  // namespace

TEST_CASE("corrupt_observation with an all-zero config is the identity") {
    Rng rng(1);
    Eigen::VectorXd obs(5);
    obs << 1, -2, 3, 0.5, -0.25;
    Eigen::VectorXd out = corrupt_observation(obs, NoiseConfig{}, rng);
    CHECK(out == obs);
}

TEST_CASE("failing every channel produces the zero vector") {
    Rng rng(1);
    Eigen::VectorXd obs = Eigen::VectorXd::Random(7);
    NoiseConfig config;
    config.gaussian_sigma = 0.3;
    config.dropout_prob = 0.2;
    for (int i = 0; i < 7; ++i) config.failed_channels.push_back(i);
    CHECK(corrupt_observation(obs, config, rng).isZero());
}

TEST_CASE("gaussian corruption has the configured spread") {
    Rng rng(77);
    NoiseConfig config;
    config.gaussian_sigma = 0.1;
    const int draws = 100000;
    double sum = 0.0, sum_sq = 0.0;
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
    for (int i = 0; i < draws; ++i) {
        double x = corrupt_observation(zero, config, rng)(0);
        sum += x;
        sum_sq += x * x;
    }
    double mean = sum / draws;
    double stddev = std::sqrt(sum_sq / draws - mean * mean);
    CHECK(std::abs(stddev - 0.1) < 0.005);
}

TEST_CASE("corruption preserves the vector length and is deterministic per seed") {
    NoiseConfig config;
    config.gaussian_sigma = 0.2;
    config.dropout_prob = 0.3;
    config.failed_channels = {0};
    Eigen::VectorXd obs = Eigen::VectorXd::Ones(9);
    Rng a(42), b(42);
    Eigen::VectorXd ra = corrupt_observation(obs, config, a);
    Eigen::VectorXd rb = corrupt_observation(obs, config, b);
    CHECK(ra.size() == 9);
    CHECK(ra == rb);
    CHECK(ra(0) == 0.0);
}

TEST_CASE("corrupt_observation validates its config") {
    Rng rng(1);
    Eigen::VectorXd obs = Eigen::VectorXd::Ones(3);
    NoiseConfig bad;
    bad.dropout_prob = 1.5;
    CHECK_THROWS_AS(corrupt_observation(obs, bad, rng), std::invalid_argument);
    NoiseConfig oob;
    oob.failed_channels = {7};
    CHECK_THROWS_AS(corrupt_observation(obs, oob, rng), std::invalid_argument);
}

TEST_CASE("the noisy wrapper corrupts live observations only") {
    NoiseConfig config;
    config.failed_channels = {0, 1};
    CombatConfig combat;
    combat.step_cap = 10;
    auto env = std::make_unique<RoomClearEnv>(GridLayout::parse(default_room_clear_layout_text()),
                                              combat);
    NoisyObservationEnv noisy(std::move(env), config);
    auto obs = noisy.reset(3);
    REQUIRE(obs.size() == 5);
    for (const auto& o : obs) {
        CHECK(o(0) == 0.0);
        CHECK(o(1) == 0.0);
    }
}

TEST_CASE("a two-member tournament plays exactly the requested episodes") {
    Population pop = small_population(2);
    FitnessTable table = run_tournament(pop, default_factory(), 10, 99);
    REQUIRE(table.pairs.size() == 1);
    const PairResult& pr = table.pairs[0];
    CHECK(pr.wins_a + pr.wins_b + pr.draws == 10);
    CHECK(table.fitness[0] == pop.members[0].fitness);
}

TEST_CASE("tournament fitness is conserved: pairs times episodes") {
    Population pop = small_population(4);
    const int episodes = 6;
    FitnessTable table = run_tournament(pop, default_factory(), episodes, 7);
    REQUIRE(table.pairs.size() == 6);
    double total = 0.0;
    for (double f : table.fitness) total += f;
    CHECK(total == doctest::Approx(6.0 * episodes));
}

TEST_CASE("tournaments are deterministic in the seed, including parallel runs") {
    Population pop1 = small_population(3, 11);
    Population pop2 = small_population(3, 11);
    FitnessTable t1 = run_tournament(pop1, default_factory(), 4, 123, 1);
    FitnessTable t2 = run_tournament(pop2, default_factory(), 4, 123, 3);
    REQUIRE(t1.pairs.size() == t2.pairs.size());
    for (std::size_t p = 0; p < t1.pairs.size(); ++p) {
        CHECK(t1.pairs[p].wins_a == t2.pairs[p].wins_a);
        CHECK(t1.pairs[p].wins_b == t2.pairs[p].wins_b);
        CHECK(t1.pairs[p].draws == t2.pairs[p].draws);
    }
    CHECK(t1.fitness == t2.fitness);
}

TEST_CASE("evolution replaces exactly the bottom fifth") {
    Population pop = small_population(10, 21);
    FitnessTable table;
    table.fitness = {9, 8, 7, 6, 5, 4, 3, 2, 1, 0};
    table.pairs = {};
    for (int m = 0; m < 10; ++m) pop.members[static_cast<std::size_t>(m)].fitness = table.fitness[static_cast<std::size_t>(m)];
    std::vector<long> versions;
    for (const auto& m : pop.members) versions.push_back(m.version);
    Rng rng(3);
    evolve_population(pop, table, rng);
    CHECK(pop.size() == 10);
    int replaced = 0;
    for (int m = 0; m < 10; ++m) {
        if (pop.members[static_cast<std::size_t>(m)].version != versions[static_cast<std::size_t>(m)]) replaced += 1;
    }
    CHECK(replaced == 2);
    // The victims were the two lowest-fitness members.
    CHECK(pop.members[8].version != versions[8]);
    CHECK(pop.members[9].version != versions[9]);
}

TEST_CASE("equal fitness still evolves, breaking ties by member index") {
    Population pop = small_population(5, 22);
    FitnessTable table;
    table.fitness = {1, 1, 1, 1, 1};
    Rng rng(4);
    std::vector<long> versions;
    for (const auto& m : pop.members) versions.push_back(m.version);
    evolve_population(pop, table, rng);
    // With all-equal fitness the stable sort keeps index order, so the last
    // member is replaced by a clone of the first.
    CHECK(pop.members[4].version != versions[4]);
    CHECK(pop.members[4].lineage_id == pop.members[0].lineage_id);
}

TEST_CASE("cloned hyperparameters are perturbed by exactly 0.8 or 1.25") {
    Population pop = small_population(5, 23);
    FitnessTable table;
    table.fitness = {5, 4, 3, 2, 1};
    Rng rng(5);
    evolve_population(pop, table, rng);
    const PopulationMember& child = pop.members[4];
    const PopulationMember& parent = pop.members[0];
    for (const auto& [key, value] : child.hyperparams) {
        double base = parent.hyperparams.at(key);
        bool low = std::abs(value - base * 0.8) < 1e-12;
        bool high = std::abs(value - base * 1.25) < 1e-12;
        CHECK((low || high));
    }
}

TEST_CASE("evolution leaves the survivors' parameters untouched") {
    Population pop = small_population(5, 24);
    FitnessTable table;
    table.fitness = {5, 4, 3, 2, 1};
    std::vector<Mlp> before;
    for (int m = 0; m < 4; ++m) before.push_back(pop.members[static_cast<std::size_t>(m)].actors[0]);
    Rng rng(6);
    evolve_population(pop, table, rng);
    for (int m = 0; m < 4; ++m) {
        const Mlp& now = pop.members[static_cast<std::size_t>(m)].actors[0];
        CHECK(now.weights[0] == before[static_cast<std::size_t>(m)].weights[0]);
    }
}

TEST_CASE("populations smaller than five cannot evolve") {
    Population pop = small_population(4, 25);
    FitnessTable table;
    table.fitness = {1, 2, 3, 4};
    Rng rng(7);
    CHECK_THROWS_AS(evolve_population(pop, table, rng), std::invalid_argument);
}
