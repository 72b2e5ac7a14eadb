#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <vector>

#include "sel4sel/meta.hpp"

using namespace sel4sel;

namespace {

MetaConfig tiny_config(std::uint64_t seed, DomainKind domain = DomainKind::convex) {
  MetaConfig config;
  config.domain = domain;
  config.iterations = 4;
  config.copies = 4;
  config.sigma = 0.1;
  config.inner.population_size = 10;
  config.inner.generations = 20;
  config.master_seed = seed;
  config.early_stop.enabled = false;
  return config;
}

// Replays the documented (master, iteration, copy) stream layout.
PolicyParams replay_copy(const PolicyParams& theta, const MetaConfig& config, int iteration,
                         int copy) {
  Rng rng(derive_seed(config.master_seed, {kSaltMetaCopy, static_cast<std::uint64_t>(iteration),
                                           static_cast<std::uint64_t>(copy)}));
  return perturb(theta, config.sigma, rng);
}

}  // namespace

TEST_CASE("rank weights: two scores") {
  const std::vector<double> w = rank_weights(std::vector<double>{10.0, 20.0});
  REQUIRE(w.size() == 2);
  CHECK(w[0] == 0.0);
  CHECK(w[1] == 1.0);
}

TEST_CASE("rank weights: full tie shares uniformly") {
  const std::vector<double> w = rank_weights(std::vector<double>{5.0, 5.0, 5.0, 5.0});
  for (double v : w) CHECK(v == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("rank weights: hand-computed example") {
  const std::vector<double> w = rank_weights(std::vector<double>{5.0, 1.0, 3.0});
  REQUIRE(w.size() == 3);
  CHECK(w[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(w[1] == 0.0);
  CHECK(w[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("rank weights: nonnegative, normalized, monotone") {
  Rng rng(55);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_index(19));
    std::vector<double> scores(static_cast<std::size_t>(n));
    for (double& s : scores) s = rng.uniform() < 0.3 ? 1.0 : rng.uniform() * 32.0;  // force ties
    const std::vector<double> w = rank_weights(scores);
    double sum = 0.0;
    for (double v : w) {
      REQUIRE(v >= 0.0);
      sum += v;
    }
    REQUIRE(std::abs(sum - 1.0) <= 1e-12);
    for (std::size_t a = 0; a < scores.size(); ++a) {
      for (std::size_t b = 0; b < scores.size(); ++b) {
        if (scores[a] > scores[b]) REQUIRE(w[a] >= w[b]);
        if (scores[a] == scores[b]) REQUIRE(w[a] == w[b]);
      }
    }
  }
  CHECK_THROWS_AS(rank_weights(std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("weighted average of identical copies is exact") {
  Rng rng(77);
  const PolicyParams theta = PolicyParams::random_init(PolicyParams::reference_shapes(), 0.3, rng);
  const std::vector<PolicyParams> copies(5, theta);
  // Arbitrary normalized weights, including an exact tie group.
  const std::vector<double> weights = rank_weights(std::vector<double>{3.0, 1.0, 3.0, 2.0, 0.5});
  CHECK(rank_weighted_average(copies, weights) == theta);
}

TEST_CASE("weighted average with weights {0,1} returns the winner bitwise") {
  Rng rng(78);
  const PolicyParams a = PolicyParams::random_init(PolicyParams::reference_shapes(), 0.3, rng);
  const PolicyParams b = PolicyParams::random_init(PolicyParams::reference_shapes(), 0.3, rng);
  const std::vector<PolicyParams> copies{a, b};
  CHECK(rank_weighted_average(copies, std::vector<double>{0.0, 1.0}) == b);
}

TEST_CASE("uniform weights give the coordinate mean") {
  Rng rng(79);
  std::vector<PolicyParams> copies;
  for (int c = 0; c < 4; ++c) {
    copies.push_back(PolicyParams::random_init(PolicyParams::reference_shapes(), 0.3, rng));
  }
  const std::vector<double> weights(4, 0.25);
  const PolicyParams avg = rank_weighted_average(copies, weights);
  for (std::size_t i = 0; i < avg.values().size(); ++i) {
    double mean = 0.0;
    for (const PolicyParams& c : copies) mean += c.values()[i];
    mean /= 4.0;
    REQUIRE(avg.values()[i] == doctest::Approx(mean).epsilon(1e-12));
  }
}

TEST_CASE("meta_step with the zero-sigma test hook returns theta exactly") {
  MetaConfig config = tiny_config(5);
  config.sigma = 0.0;  // test hook; train() itself validates sigma > 0
  Rng rng(6);
  const PolicyParams theta = PolicyParams::random_init(config.shapes, 0.2, rng);
  const auto [next, record] = meta_step(theta, config, 0);
  CHECK(next == theta);
  CHECK(record.scores.size() == 4);
}

TEST_CASE("meta_step with two copies adopts the higher-scoring copy exactly") {
  MetaConfig config = tiny_config(123, DomainKind::hashed);  // continuous fitness, no tied scores
  config.copies = 2;
  Rng rng(7);
  const PolicyParams theta = PolicyParams::random_init(config.shapes, 0.1, rng);
  const auto [next, record] = meta_step(theta, config, 3);
  REQUIRE(record.scores.size() == 2);
  REQUIRE(record.scores[0] != record.scores[1]);
  const int winner = record.scores[0] > record.scores[1] ? 0 : 1;
  CHECK(next == replay_copy(theta, config, 3, winner));
}

TEST_CASE("meta updates stay inside the copies' coordinate hull") {
  MetaConfig config = tiny_config(31, DomainKind::deceptive);
  config.copies = 5;
  Rng rng(8);
  PolicyParams theta = PolicyParams::random_init(config.shapes, 0.1, rng);
  for (int iteration = 0; iteration < 5; ++iteration) {
    std::vector<PolicyParams> copies;
    for (int c = 0; c < config.copies; ++c) {
      copies.push_back(replay_copy(theta, config, iteration, c));
    }
    const auto [next, record] = meta_step(theta, config, iteration);
    for (std::size_t i = 0; i < next.values().size(); ++i) {
      double lo = copies[0].values()[i];
      double hi = lo;
      for (const PolicyParams& c : copies) {
        lo = std::min(lo, c.values()[i]);
        hi = std::max(hi, c.values()[i]);
      }
      REQUIRE(next.values()[i] >= lo);
      REQUIRE(next.values()[i] <= hi);
    }
    theta = next;
  }
}

TEST_CASE("train with zero iterations returns the seeded initialization") {
  MetaConfig config = tiny_config(2027);
  config.iterations = 0;
  const TrainResult result = train(config);
  Rng init(derive_seed(config.master_seed, {kSaltPolicyInit}));
  CHECK(result.params == PolicyParams::random_init(config.shapes, config.init_scale, init));
  CHECK(result.iterations_completed == 0);
  CHECK(result.trace.iterations.empty());
}

TEST_CASE("training is deterministic across thread counts") {
  MetaConfig config = tiny_config(909);
  config.iterations = 5;
  MetaConfig threaded = config;
  threaded.threads = 4;
  const TrainResult serial = train(config);
  const TrainResult parallel = train(threaded);
  CHECK(serial.params == parallel.params);
  REQUIRE(serial.trace.iterations.size() == parallel.trace.iterations.size());
  for (std::size_t i = 0; i < serial.trace.iterations.size(); ++i) {
    CHECK(serial.trace.iterations[i].scores == parallel.trace.iterations[i].scores);
  }
}

TEST_CASE("resume from a checkpoint reproduces the uninterrupted run") {
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "sel4sel_test_resume.json";
  MetaConfig config = tiny_config(808);
  config.iterations = 8;
  config.checkpoint_every = 3;
  config.checkpoint_path = path;
  const TrainResult full = train(config);
  const Checkpoint saved = load_checkpoint(path);  // final write: iteration 8
  CHECK(saved.meta.iterations_completed == 8);

  // Rewind to the iteration-6 state and continue.
  MetaConfig rerun = config;
  rerun.iterations = 6;
  const TrainResult partial = train(rerun);
  REQUIRE(partial.iterations_completed == 6);

  Checkpoint midway{partial.params, make_checkpoint_meta(config, 6)};
  const TrainResult resumed = resume_training(midway, config);
  CHECK(resumed.iterations_completed == 8);
  CHECK(resumed.params == full.params);
  std::filesystem::remove(path);
}

TEST_CASE("early stopping trips on a stalled plateau") {
  MetaConfig config = tiny_config(404);
  config.iterations = 40;
  config.early_stop.enabled = true;
  config.early_stop.window = 3;
  config.early_stop.min_iterations = 6;
  config.early_stop.patience = 4;
  config.early_stop.min_delta = 1e9;  // improvement is unreachable: stop at the floor
  const TrainResult result = train(config);
  CHECK(result.early_stopped);
  // Window fills at iteration index 2; patience 4 and the min-iteration floor
  // then allow stopping at iteration index 6 (7 completed).
  CHECK(result.iterations_completed == 7);
}

TEST_CASE("gradient-style update mode moves parameters differently") {
  MetaConfig plain = tiny_config(2020);
  plain.iterations = 2;
  MetaConfig gradient = plain;
  gradient.gradient_update = true;
  const TrainResult a = train(plain);
  const TrainResult b = train(gradient);
  CHECK(a.params.values().size() == b.params.values().size());
  CHECK_FALSE(a.params == b.params);
}

TEST_CASE("smoothed best-copy score trends upward on convex") {
  // Reduced-scale sanity run; loose tolerance, fixed seed.
  MetaConfig config;
  config.domain = DomainKind::convex;
  config.iterations = 120;
  config.copies = 8;
  config.sigma = 0.1;
  config.inner.population_size = 20;
  config.inner.generations = 200;
  config.master_seed = 7;
  config.early_stop.enabled = false;
  const TrainResult result = train(config);
  auto window_mean = [&](int last_exclusive) {
    double sum = 0.0;
    for (int i = last_exclusive - 50; i < last_exclusive; ++i) {
      sum += result.trace.iterations[static_cast<std::size_t>(i)].score_best;
    }
    return sum / 50.0;
  };
  const double early = window_mean(50);
  const double late = window_mean(120);
  CHECK(late >= early - 1.0);  // non-decreasing to within noise
  CHECK(late > 25.0);          // and the domain is actually learned
}

TEST_CASE("meta config validation") {
  MetaConfig config = tiny_config(1);
  config.copies = 1;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = tiny_config(1);
  config.sigma = 0.0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = tiny_config(1);
  config.inner.population_size = 3;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}
