#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "marl/algorithms/dagger.hpp"
#include "marl/algorithms/ddpg.hpp"
#include "marl/algorithms/dqn.hpp"
#include "marl/algorithms/maddpg.hpp"
#include "marl/algorithms/ppo.hpp"
#include "support/test_envs.hpp"

using namespace marl;

namespace {

Transition single_transition(const Eigen::VectorXd& o, int a, double r, const Eigen::VectorXd& o2,
                             bool done) {
    Transition t;
    t.joint_obs = {o};
    t.joint_actions = {Action{a}};
    t.joint_rewards = {r};
    t.joint_next_obs = {o2};
    t.done = done;
    return t;
}

bool nets_identical(const Mlp& a, const Mlp& b) {
    for (std::size_t k = 0; k < a.weights.size(); ++k) {
        if (a.weights[k] != b.weights[k] || a.biases[k] != b.biases[k]) return false;
    }
    return true;
}

std::vector<Transition> random_batch(Rng& rng, int n, int obs_dim, int n_actions) {
    std::vector<Transition> batch;
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd o(obs_dim), o2(obs_dim);
        for (int d = 0; d < obs_dim; ++d) {
            o(d) = rng.uniform(-1, 1);
            o2(d) = rng.uniform(-1, 1);
        }
        batch.push_back(single_transition(o, rng.uniform_int(n_actions), rng.uniform(-1, 1), o2,
                                          rng.bernoulli(0.2)));
    }
    return batch;
}

}  // namespace

// ---------------------------------------------------------------- epsilon

TEST_CASE("epsilon_greedy picks the argmax at epsilon zero") {
    Rng rng(0);
    Eigen::VectorXd q(3);
    q << 1, 3, 2;
    CHECK(epsilon_greedy(q, 0.0, rng) == 1);
}

TEST_CASE("epsilon_greedy breaks ties toward the lowest index") {
    Rng rng(0);
    Eigen::VectorXd q(2);
    q << 5, 5;
    CHECK(epsilon_greedy(q, 0.0, rng) == 0);
}

TEST_CASE("epsilon_greedy at epsilon one is uniform within 2 percent") {
    Rng rng(7);
    Eigen::VectorXd q(4);
    q << 9, 1, 1, 1;
    std::vector<int> counts(4, 0);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) counts[static_cast<std::size_t>(epsilon_greedy(q, 1.0, rng))]++;
    for (int c : counts) {
        CHECK(c > draws * 0.23);
        CHECK(c < draws * 0.27);
    }
}

TEST_CASE("epsilon_greedy rejects an empty vector") {
    Rng rng(0);
    CHECK_THROWS_AS(epsilon_greedy(Eigen::VectorXd(), 0.5, rng), std::invalid_argument);
}

// -------------------------------------------------------------------- dqn

TEST_CASE("dqn with gamma zero regresses onto the immediate rewards") {
    Hyperparams hp;
    hp.gamma = 0.0;
    hp.tau = 0.05;
    DqnLearner learner = make_dqn(3, {16}, 2, hp, 3e-3, 11);
    Rng rng(5);
    std::vector<Transition> batch = random_batch(rng, 16, 3, 2);
    double loss = 1.0;
    for (int i = 0; i < 2000 && loss >= 1e-3; ++i) loss = dqn_update(learner, batch);
    CHECK(loss < 1e-3);
}

TEST_CASE("dqn terminal targets ignore the next observation") {
    Hyperparams hp;
    DqnLearner a = make_dqn(3, {8}, 2, hp, 1e-3, 3);
    DqnLearner b = make_dqn(3, {8}, 2, hp, 1e-3, 3);
    Rng rng(9);
    Eigen::VectorXd o(3), o2(3), o3(3);
    for (int d = 0; d < 3; ++d) {
        o(d) = rng.uniform(-1, 1);
        o2(d) = rng.uniform(-1, 1);
        o3(d) = rng.uniform(-1, 1);
    }
    dqn_update(a, {single_transition(o, 1, 0.7, o2, true)});
    dqn_update(b, {single_transition(o, 1, 0.7, o3, true)});
    CHECK(nets_identical(a.q, b.q));
}

TEST_CASE("dqn converges to the value-iteration oracle on the 4-state chain") {
    using testing::ChainEnv;
    const double gamma = 0.9;
    Eigen::MatrixXd oracle = testing::chain_value_iteration(4, gamma);

    Hyperparams hp;
    hp.gamma = gamma;
    hp.tau = 1.0;  // tabular-style hard target updates
    // One-hot input, single linear layer: a table in network clothing.
    DqnLearner learner = make_dqn(4, {}, 2, hp, 5e-3, 21);

    // Every non-terminal transition of the chain, replayed as a fixed batch.
    ChainEnv env;
    std::vector<Transition> batch;
    for (int s = 0; s < 3; ++s) {
        for (int a = 0; a < 2; ++a) {
            int s2 = a == 1 ? s + 1 : std::max(0, s - 1);
            bool done = s2 == 3;
            batch.push_back(single_transition(env.encode(s), a, done ? 1.0 : 0.0,
                                              env.encode(std::min(s2, 3)), done));
        }
    }
    for (int i = 0; i < 6000; ++i) dqn_update(learner, batch);
    for (int s = 0; s < 3; ++s) {
        Eigen::VectorXd q = mlp_forward(learner.q, env.encode(s));
        for (int a = 0; a < 2; ++a) {
            CHECK(std::abs(q(a) - oracle(s, a)) < 1e-2);
        }
    }
}

TEST_CASE("non-finite rewards abort the update and leave parameters intact") {
    Hyperparams hp;
    DqnLearner learner = make_dqn(3, {8}, 2, hp, 1e-3, 3);
    Mlp before = learner.q;
    Eigen::VectorXd o = Eigen::VectorXd::Ones(3);
    auto bad = single_transition(o, 0, std::numeric_limits<double>::infinity(), o, false);
    CHECK_THROWS_AS(dqn_update(learner, {bad}), std::runtime_error);
    CHECK(nets_identical(learner.q, before));
}

// ------------------------------------------------------------------- ddpg

TEST_CASE("a constant critic yields a zero actor gradient") {
    Hyperparams hp;
    hp.gamma = 0.0;
    hp.tau = 0.0;
    DdpgLearner learner = make_ddpg(2, {8}, 3, true, hp, 1e-2, 1e-2, 1.0, 5);
    for (auto& w : learner.critic.weights) w.setZero();
    learner.critic.biases.back()(0) = 0.25;  // Q == 0.25 everywhere
    learner.critic_target = learner.critic;
    Mlp actor_before = learner.actor;

    Rng rng(1);
    std::vector<Transition> batch;
    for (int i = 0; i < 8; ++i) {
        Eigen::VectorXd o(2), o2(2);
        o << rng.uniform(-1, 1), rng.uniform(-1, 1);
        o2 << rng.uniform(-1, 1), rng.uniform(-1, 1);
        // Rewards equal the constant critic output so the critic update is
        // also a no-op and Q stays frozen.
        batch.push_back(single_transition(o, rng.uniform_int(3), 0.25, o2, false));
    }
    auto [closs, aobj] = ddpg_update(learner, batch);
    CHECK(closs == doctest::Approx(0.0));
    CHECK(aobj == doctest::Approx(0.25));
    CHECK(nets_identical(learner.actor, actor_before));
}

TEST_CASE("ddpg critic with gamma zero converges to reward regression") {
    Hyperparams hp;
    hp.gamma = 0.0;
    hp.tau = 0.05;
    DdpgLearner learner = make_ddpg(2, {16}, 2, true, hp, 1e-4, 3e-3, 1.0, 6);
    Rng rng(2);
    std::vector<Transition> batch = random_batch(rng, 16, 2, 2);
    double closs = 1.0;
    for (int i = 0; i < 3000 && closs >= 1e-3; ++i) closs = ddpg_update(learner, batch).first;
    CHECK(closs < 1e-3);
}

TEST_CASE("ddpg recovers the analytic optimum of a quadratic critic landscape") {
    // r = -(a - o)^2 with done transitions: the critic learns the quadratic
    // and the linear actor must converge to mu(o) = o.
    Hyperparams hp;
    hp.gamma = 0.9;  // irrelevant: every transition is terminal
    hp.tau = 0.01;
    DdpgLearner learner;
    learner.discrete = false;
    learner.action_dim = 1;
    learner.temperature = 1.0;
    learner.hp = hp;
    learner.actor = mlp_init({1, 1}, Activation::Tanh, OutputActivation::Identity,
                             actor_net_seed(77, 0));
    learner.critic = mlp_init({2, 32, 32, 1}, Activation::Tanh, OutputActivation::Identity,
                              critic_net_seed(77, 0));
    learner.actor_target = learner.actor;
    learner.critic_target = learner.critic;
    learner.actor_opt = make_optimizer(learner.actor, OptimizerKind::Adam, 2e-3);
    learner.critic_opt = make_optimizer(learner.critic, OptimizerKind::Adam, 2e-3);

    Rng rng(31);
    const int total_updates = 6000;
    for (int step = 0; step < total_updates; ++step) {
        // Early phase explores uniformly; later phases sample actions near
        // the current policy so the critic sharpens where the actor climbs.
        double sigma = step < 2000 ? -1.0 : std::max(0.05, 0.4 * (1.0 - step / 6000.0));
        std::vector<Transition> batch;
        for (int i = 0; i < 64; ++i) {
            Eigen::VectorXd o(1), a(1), o2(1);
            o(0) = rng.uniform(-1, 1);
            if (sigma < 0.0) {
                a(0) = rng.uniform(-1, 1);
            } else {
                a(0) = std::clamp(mlp_forward(learner.actor, o)(0) + sigma * rng.normal(), -1.0, 1.0);
            }
            o2(0) = 0.0;
            Transition t;
            t.joint_obs = {o};
            t.joint_actions = {Action{a}};
            t.joint_rewards = {-(a(0) - o(0)) * (a(0) - o(0))};
            t.joint_next_obs = {o2};
            t.done = true;
            batch.push_back(std::move(t));
        }
        ddpg_update(learner, batch);
    }
    for (double o = -0.5; o <= 0.5; o += 0.125) {
        Eigen::VectorXd obs(1);
        obs << o;
        double mu = mlp_forward(learner.actor, obs)(0);
        CHECK(std::abs(mu - o) < 1e-2);
    }
}

// ----------------------------------------------------------------- maddpg

TEST_CASE("maddpg with one agent reproduces ddpg parameter trajectories exactly") {
    Hyperparams hp;
    hp.gamma = 0.95;
    hp.tau = 0.02;
    const std::uint64_t seed = 99;
    DdpgLearner ddpg = make_ddpg(3, {16, 16}, 4, true, hp, 1e-3, 1e-3, 1.0, seed);
    MaddpgLearner maddpg = make_maddpg({3}, {4}, {16, 16}, true, hp, 1e-3, 1e-3, 1.0, seed);
    REQUIRE(nets_identical(ddpg.actor, maddpg.actors[0]));
    REQUIRE(nets_identical(ddpg.critic, maddpg.critics[0]));

    Rng rng(123);
    for (int step = 0; step < 100; ++step) {
        std::vector<Transition> batch = random_batch(rng, 32, 3, 4);
        ddpg_update(ddpg, batch);
        maddpg_update(maddpg, 0, batch);
    }
    CHECK(nets_identical(ddpg.actor, maddpg.actors[0]));
    CHECK(nets_identical(ddpg.critic, maddpg.critics[0]));
    CHECK(nets_identical(ddpg.actor_target, maddpg.actor_targets[0]));
    CHECK(nets_identical(ddpg.critic_target, maddpg.critic_targets[0]));
}

TEST_CASE("maddpg critic with gamma zero regresses onto the agent's rewards") {
    Hyperparams hp;
    hp.gamma = 0.0;
    hp.tau = 0.05;
    MaddpgLearner learner = make_maddpg({2, 2}, {2, 2}, {16}, true, hp, 1e-4, 3e-3, 1.0, 17);
    Rng rng(3);
    std::vector<Transition> batch;
    for (int i = 0; i < 16; ++i) {
        Transition t;
        for (int k = 0; k < 2; ++k) {
            Eigen::VectorXd o(2), o2(2);
            o << rng.uniform(-1, 1), rng.uniform(-1, 1);
            o2 << rng.uniform(-1, 1), rng.uniform(-1, 1);
            t.joint_obs.push_back(o);
            t.joint_next_obs.push_back(o2);
            t.joint_actions.emplace_back(rng.uniform_int(2));
            t.joint_rewards.push_back(rng.uniform(-1, 1));
        }
        t.done = false;
        batch.push_back(std::move(t));
    }
    double closs = 1.0;
    for (int i = 0; i < 3000 && closs >= 1e-3; ++i) closs = maddpg_update(learner, 0, batch).first;
    CHECK(closs < 1e-3);
}

TEST_CASE("maddpg finds the dominant strategy of a one-shot matrix game") {
    // r_i = own_action + 0.25 * other_action: action 1 dominates for both.
    Hyperparams hp;
    hp.gamma = 0.0;
    hp.tau = 0.05;
    MaddpgLearner learner = make_maddpg({1, 1}, {2, 2}, {16}, true, hp, 1e-3, 5e-3, 1.0, 400);
    Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
    std::vector<Transition> batch;
    for (int a0 = 0; a0 < 2; ++a0) {
        for (int a1 = 0; a1 < 2; ++a1) {
            Transition t;
            t.joint_obs = {one, one};
            t.joint_actions = {Action{a0}, Action{a1}};
            t.joint_rewards = {a0 + 0.25 * a1, a1 + 0.25 * a0};
            t.joint_next_obs = {zero, zero};
            t.done = true;
            batch.push_back(std::move(t));
        }
    }
    for (int i = 0; i < 1500; ++i) {
        maddpg_update(learner, 0, batch);
        maddpg_update(learner, 1, batch);
    }
    CHECK(maddpg_act_greedy(learner, 0, one) == 1);
    CHECK(maddpg_act_greedy(learner, 1, one) == 1);
}

TEST_CASE("maddpg rejects batches with the wrong agent count") {
    Hyperparams hp;
    MaddpgLearner learner = make_maddpg({2, 2}, {2, 2}, {8}, true, hp, 1e-3, 1e-3, 1.0, 1);
    Rng rng(1);
    std::vector<Transition> batch = random_batch(rng, 4, 2, 2);  // one agent only
    CHECK_THROWS_AS(maddpg_update(learner, 0, batch), std::invalid_argument);
}

// -------------------------------------------------------------------- gae

TEST_CASE("gae with lambda zero returns the one-step TD errors") {
    Rng rng(8);
    const int T = 12;
    Eigen::VectorXd rewards(T), values(T + 1);
    std::vector<std::uint8_t> dones(T);
    for (int t = 0; t < T; ++t) {
        rewards(t) = rng.uniform(-1, 1);
        values(t) = rng.uniform(-1, 1);
        dones[static_cast<std::size_t>(t)] = rng.bernoulli(0.2) ? 1 : 0;
    }
    values(T) = rng.uniform(-1, 1);
    Eigen::VectorXd adv = gae_advantages(rewards, values, dones, 0.9, 0.0);
    for (int t = 0; t < T; ++t) {
        double nd = dones[static_cast<std::size_t>(t)] ? 0.0 : 1.0;
        double delta = rewards(t) + 0.9 * nd * values(t + 1) - values(t);
        CHECK(adv(t) == doctest::Approx(delta).epsilon(1e-12));
    }
}

TEST_CASE("gae with lambda one and gamma one telescopes to returns minus values") {
    Rng rng(9);
    const int T = 10;
    Eigen::VectorXd rewards(T), values(T + 1);
    std::vector<std::uint8_t> dones(T, 0);
    for (int t = 0; t < T; ++t) {
        rewards(t) = rng.uniform(-1, 1);
        values(t) = rng.uniform(-1, 1);
    }
    values(T) = rng.uniform(-1, 1);
    Eigen::VectorXd adv = gae_advantages(rewards, values, dones, 1.0, 1.0);
    for (int t = 0; t < T; ++t) {
        double tail = values(T);
        for (int k = t; k < T; ++k) tail += rewards(k);
        CHECK(adv(t) == doctest::Approx(tail - values(t)).epsilon(1e-10));
    }
}

TEST_CASE("gae of all zeros is zero") {
    Eigen::VectorXd rewards = Eigen::VectorXd::Zero(5);
    Eigen::VectorXd values = Eigen::VectorXd::Zero(6);
    std::vector<std::uint8_t> dones(5, 0);
    CHECK(gae_advantages(rewards, values, dones, 0.99, 0.95).isZero());
}

TEST_CASE("gae matches a brute-force double loop on random inputs") {
    Rng rng(10);
    for (int trial = 0; trial < 50; ++trial) {
        const int T = 1 + rng.uniform_int(20);
        Eigen::VectorXd rewards(T), values(T + 1);
        std::vector<std::uint8_t> dones(static_cast<std::size_t>(T));
        for (int t = 0; t < T; ++t) {
            rewards(t) = rng.uniform(-2, 2);
            values(t) = rng.uniform(-2, 2);
            dones[static_cast<std::size_t>(t)] = rng.bernoulli(0.25) ? 1 : 0;
        }
        values(T) = rng.uniform(-2, 2);
        double gamma = rng.uniform(0.5, 1.0);
        double lambda = rng.uniform(0.0, 1.0);
        Eigen::VectorXd adv = gae_advantages(rewards, values, dones, gamma, lambda);
        for (int t = 0; t < T; ++t) {
            double acc = 0.0, factor = 1.0;
            for (int k = t; k < T; ++k) {
                double nd = dones[static_cast<std::size_t>(k)] ? 0.0 : 1.0;
                double delta = rewards(k) + gamma * nd * values(k + 1) - values(k);
                acc += factor * delta;
                if (dones[static_cast<std::size_t>(k)]) break;
                factor *= gamma * lambda;
            }
            CHECK(std::abs(adv(t) - acc) < 1e-10);
        }
    }
}

TEST_CASE("gae rejects mismatched lengths") {
    Eigen::VectorXd rewards = Eigen::VectorXd::Zero(5);
    Eigen::VectorXd values = Eigen::VectorXd::Zero(5);
    std::vector<std::uint8_t> dones(5, 0);
    CHECK_THROWS_AS(gae_advantages(rewards, values, dones, 0.9, 0.9), std::invalid_argument);
}

// -------------------------------------------------------------------- ppo

namespace {

std::vector<RolloutStep> collect_rollout(PpoLearner& learner, Env& env, int steps, Rng& rng,
                                         double* bootstrap) {
    std::vector<RolloutStep> rollout;
    Eigen::VectorXd obs = env.reset(1)[0];
    for (int t = 0; t < steps; ++t) {
        RolloutStep s;
        s.obs = obs;
        s.action = ppo_act(learner, obs, rng, &s.logp, &s.value);
        StepResult r = env.step({Action{s.action}});
        s.reward = r.rewards[0];
        s.done = r.episode_done;
        rollout.push_back(s);
        obs = r.episode_done ? env.reset(static_cast<std::uint64_t>(t) + 2)[0] : r.observations[0];
    }
    *bootstrap = rollout.back().done ? 0.0 : mlp_forward(learner.value, obs)(0);
    return rollout;
}

}  // namespace

TEST_CASE("zero advantages with zero entropy coefficient leave the policy unchanged") {
    Hyperparams hp;
    hp.entropy_coef = 0.0;
    PpoLearner learner = make_ppo(2, {8}, 3, hp, 1e-3, 50);
    Mlp before = learner.policy;
    Rng rng(4);
    std::vector<RolloutStep> rollout;
    for (int t = 0; t < 16; ++t) {
        RolloutStep s;
        s.obs = Eigen::VectorXd::Zero(2);
        s.obs(0) = rng.uniform(-1, 1);
        s.action = rng.uniform_int(3);
        s.logp = std::log(1.0 / 3.0);
        s.reward = 0.0;
        s.value = 0.0;
        s.done = false;
        rollout.push_back(s);
    }
    Rng shuffle(1);
    ppo_update(learner, rollout, 0.0, shuffle);
    CHECK(nets_identical(learner.policy, before));
}

TEST_CASE("with ratio one the surrogate equals the mean advantage") {
    Hyperparams hp;
    hp.entropy_coef = 0.0;
    PpoLearner learner = make_ppo(1, {8}, 2, hp, 1e-9, 51);
    learner.normalize_advantages = false;
    learner.epochs = 1;
    learner.minibatch = 64;
    testing::BanditEnv env;
    Rng rng(6);
    double bootstrap = 0.0;
    std::vector<RolloutStep> rollout = collect_rollout(learner, env, 32, rng, &bootstrap);

    Eigen::VectorXd rewards(32), values(33);
    std::vector<std::uint8_t> dones(32);
    for (int t = 0; t < 32; ++t) {
        rewards(t) = rollout[static_cast<std::size_t>(t)].reward;
        values(t) = rollout[static_cast<std::size_t>(t)].value;
        dones[static_cast<std::size_t>(t)] = rollout[static_cast<std::size_t>(t)].done;
    }
    values(32) = bootstrap;
    Eigen::VectorXd adv = gae_advantages(rewards, values, dones, hp.gamma, hp.gae_lambda);

    Rng shuffle(2);
    PpoStats stats = ppo_update(learner, rollout, bootstrap, shuffle);
    CHECK(stats.policy_loss == doctest::Approx(-adv.mean()).epsilon(1e-9));
    CHECK(stats.clip_fraction == 0.0);
}

TEST_CASE("samples pushed outside the clip range contribute no policy gradient") {
    Hyperparams hp;
    hp.entropy_coef = 0.0;
    hp.clip_ratio = 0.2;
    PpoLearner learner = make_ppo(1, {8}, 2, hp, 1e-2, 52);
    learner.normalize_advantages = false;
    learner.epochs = 1;
    learner.minibatch = 1;
    Mlp before = learner.policy;

    Eigen::VectorXd obs = Eigen::VectorXd::Ones(1);
    double p = mlp_forward(learner.policy, obs)(0);
    RolloutStep s;
    s.obs = obs;
    s.action = 0;
    s.logp = std::log(p) - std::log(1.5);  // ratio = 1.5 > 1 + clip
    s.reward = 1.0;                        // positive advantage
    s.value = 0.0;
    s.done = true;
    Rng shuffle(3);
    PpoStats stats = ppo_update(learner, {s}, 0.0, shuffle);
    CHECK(stats.clip_fraction == doctest::Approx(1.0));
    CHECK(nets_identical(learner.policy, before));
}

TEST_CASE("ppo solves the two-armed bandit within 200 updates") {
    Hyperparams hp;
    hp.entropy_coef = 0.005;
    PpoLearner learner = make_ppo(1, {16}, 2, hp, 3e-3, 53);
    learner.epochs = 4;
    learner.minibatch = 32;
    testing::BanditEnv env;
    Rng rng(12);
    Rng shuffle(13);
    for (int update = 0; update < 200; ++update) {
        double bootstrap = 0.0;
        std::vector<RolloutStep> rollout = collect_rollout(learner, env, 64, rng, &bootstrap);
        ppo_update(learner, rollout, bootstrap, shuffle);
    }
    Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
    Eigen::VectorXd probs = mlp_forward(learner.policy, one);
    CHECK(probs(0) > 0.95);
}

// ----------------------------------------------------------------- dagger

namespace {

int chain_expert(const Env&, const Eigen::VectorXd&) {
    return 1;  // always move right
}

}  // namespace

TEST_CASE("with beta one the first iteration rolls out the pure expert") {
    testing::ChainEnv env;
    DaggerLearner learner = make_dagger(4, {8}, 2, 1e-3, 60);
    CHECK(learner.beta() == 1.0);
    DaggerStats stats = dagger_iterate(learner, env, chain_expert, 5, 1234);
    // Expert reaches the terminal state in 3 steps from state 0, every time.
    CHECK(stats.steps_collected == 15);
    CHECK(stats.dataset_size == 15);
    for (const auto& [obs, action] : learner.dataset) CHECK(action == 1);
}

TEST_CASE("the dagger dataset grows by the steps of every iteration") {
    testing::ChainEnv env;
    DaggerLearner learner = make_dagger(4, {8}, 2, 1e-3, 61);
    std::size_t previous = 0;
    long total_steps = 0;
    for (int it = 0; it < 4; ++it) {
        DaggerStats stats = dagger_iterate(learner, env, chain_expert, 3, 777);
        total_steps += stats.steps_collected;
        CHECK(stats.dataset_size == static_cast<std::size_t>(total_steps));
        CHECK(stats.dataset_size >= previous);
        previous = stats.dataset_size;
    }
}

TEST_CASE("dagger learns the chain expert to high agreement") {
    testing::ChainEnv env;
    DaggerLearner learner = make_dagger(4, {16}, 2, 3e-3, 62);
    for (int it = 0; it < 5; ++it) dagger_iterate(learner, env, chain_expert, 5, 555);
    CHECK(dagger_agreement(learner, env, chain_expert, 200, 999) >= 0.99);
}

TEST_CASE("dagger propagates expert failures") {
    testing::ChainEnv env;
    DaggerLearner learner = make_dagger(4, {8}, 2, 1e-3, 63);
    auto failing_expert = [](const Env&, const Eigen::VectorXd&) -> int {
        throw std::runtime_error("expert undefined on this state");
    };
    CHECK_THROWS_AS(dagger_iterate(learner, env, failing_expert, 1, 1), std::runtime_error);
}
