#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "walklab/gnp.hpp"
#include "walklab/graph.hpp"
#include "walklab/rng.hpp"

using namespace walklab;

TEST_CASE("splitmix64_at is stateless and order-independent") {
  const std::uint64_t seed = 0x9d2c5680f1234567ULL;
  std::vector<std::uint64_t> forward, backward;
  for (std::uint64_t i = 0; i < 64; ++i) forward.push_back(splitmix64_at(seed, i));
  for (std::uint64_t i = 64; i-- > 0;) backward.push_back(splitmix64_at(seed, i));
  std::reverse(backward.begin(), backward.end());
  CHECK(forward == backward);
  // distinct counters give distinct values on this window
  std::set<std::uint64_t> uniq(forward.begin(), forward.end());
  CHECK(uniq.size() == forward.size());
  // a different seed decorrelates the whole stream
  CHECK(splitmix64_at(seed, 0) != splitmix64_at(seed + 1, 0));
}

TEST_CASE("uniform01_at lands in [0,1) with the right mean") {
  const std::uint64_t seed = 42;
  const int trials = 100000;
  double sum = 0.0;
  for (int i = 0; i < trials; ++i) {
    double x = uniform01_at(seed, static_cast<std::uint64_t>(i));
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    sum += x;
  }
  // SE of the mean is 1/sqrt(12*trials) ~ 9.1e-4; allow 5 SE
  CHECK(std::abs(sum / trials - 0.5) < 5.0 / std::sqrt(12.0 * trials));
}

TEST_CASE("derive_seed separates streams by tag") {
  CHECK(derive_seed(7, 0) != derive_seed(7, 1));
  CHECK(derive_seed(7, 0) != derive_seed(8, 0));
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
}

TEST_CASE("CounterRng::next_below is in range and roughly uniform") {
  CounterRng rng{derive_seed(123, 99), 0};
  const int draws = 70000;
  std::vector<int> counts(7, 0);
  for (int i = 0; i < draws; ++i) {
    std::uint64_t x = rng.next_below(7);
    REQUIRE(x < 7);
    ++counts[x];
  }
  const double expect = draws / 7.0;
  const double se = std::sqrt(draws * (1.0 / 7.0) * (6.0 / 7.0));
  for (int c : counts) CHECK(std::abs(c - expect) < 5.0 * se);
}

TEST_CASE("pair_index enumerates u<v pairs lexicographically without gaps") {
  const int n = 10;
  std::vector<std::uint64_t> seen;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) seen.push_back(pair_index(n, u, v));
  // lexicographic order of (u,v) must produce 0,1,2,... exactly
  for (std::size_t i = 0; i < seen.size(); ++i)
    CHECK(seen[i] == static_cast<std::uint64_t>(i));
  CHECK(seen.size() == static_cast<std::size_t>(n * (n - 1) / 2));
}

TEST_CASE("sample_gnp is a pure function matching the per-pair threshold rule") {
  const int n = 25;
  const double p = 0.3;
  const std::uint64_t seed = 777;
  Graph a = sample_gnp(n, p, seed);
  Graph b = sample_gnp(n, p, seed);
  CHECK(a.edges() == b.edges());
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      bool want = uniform01_at(seed, pair_index(n, u, v)) < p;
      CHECK(a.has_edge(u, v) == want);
    }
}

TEST_CASE("sample_gnp degenerate probabilities") {
  Graph empty = sample_gnp(6, 0.0, 5);
  CHECK(empty.m == 0);
  Graph full = sample_gnp(6, 1.0, 5);
  CHECK(full.m == 15);
  CHECK(sample_gnp(1, 0.5, 9).n == 1);
  CHECK_THROWS_AS(sample_gnp(0, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_gnp(5, 1.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_gnp(5, -0.1, 1), std::invalid_argument);
}

TEST_CASE("shared seed couples edge sets monotonically in p") {
  const int n = 40;
  const std::uint64_t seed = 2024;
  Graph lo = sample_gnp(n, 0.2, seed);
  Graph hi = sample_gnp(n, 0.5, seed);
  for (auto [u, v] : lo.edges()) CHECK(hi.has_edge(u, v));
}

TEST_CASE("per-edge marginal frequency matches p") {
  const int n = 20;
  const double p = 0.3;
  const int trials = 20000;
  int hits = 0;
  for (int s = 0; s < trials; ++s)
    if (sample_gnp(n, p, static_cast<std::uint64_t>(s)).has_edge(3, 7)) ++hits;
  const double se = std::sqrt(p * (1 - p) / trials);
  CHECK(std::abs(static_cast<double>(hits) / trials - p) < 5.0 * se);
}

TEST_CASE("graph-valued distribution on three vertices is uniform over states") {
  // G(3, 1/2) puts mass 1/8 on each of the 8 labeled graphs
  const int trials = 100000;
  std::vector<int> counts(8, 0);
  for (int s = 0; s < trials; ++s) {
    Graph g = sample_gnp(3, 0.5, static_cast<std::uint64_t>(s));
    int state = (g.has_edge(0, 1) ? 1 : 0) | (g.has_edge(0, 2) ? 2 : 0) |
                (g.has_edge(1, 2) ? 4 : 0);
    ++counts[state];
  }
  const double expect = trials / 8.0;
  const double se = std::sqrt(trials * (1.0 / 8.0) * (7.0 / 8.0));
  for (int c : counts) CHECK(std::abs(c - expect) < 5.0 * se);
}

TEST_CASE("edge count concentrates around its mean") {
  const int n = 200;
  const double p = 0.1;
  const double pairs = n * (n - 1) / 2.0;
  const double mean = pairs * p;
  const double sd = std::sqrt(pairs * p * (1 - p));
  const int trials = 30;
  double sum = 0.0;
  for (int s = 0; s < trials; ++s) {
    Graph g = sample_gnp(n, p, 1000 + static_cast<std::uint64_t>(s));
    CHECK(std::abs(static_cast<double>(g.m) - mean) < 6.0 * sd);
    sum += static_cast<double>(g.m);
  }
  CHECK(std::abs(sum / trials - mean) < 5.0 * sd / std::sqrt(trials));
}

TEST_CASE("sample_connected_gnp conditions on connectivity deterministically") {
  const int n = 30;
  const double p = 5.0 / 29.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    GnpSample s = sample_connected_gnp(n, p, seed);
    CHECK(is_connected(s.graph));
    CHECK(s.attempts >= 1);
    // the accepted draw is exactly the unconditioned sample at the
    // derived per-attempt seed
    Graph replay = sample_gnp(n, p, derive_seed(seed, s.attempts - 1));
    CHECK(replay.edges() == s.graph.edges());
    // and every earlier attempt was rejected for a reason
    for (int a = 1; a < s.attempts; ++a)
      CHECK_FALSE(is_connected(sample_gnp(n, p, derive_seed(seed, a - 1))));
    GnpSample again = sample_connected_gnp(n, p, seed);
    CHECK(again.attempts == s.attempts);
    CHECK(again.graph.edges() == s.graph.edges());
  }
}

TEST_CASE("sample_connected_gnp throws after exhausting its attempt budget") {
  CHECK_THROWS_AS(sample_connected_gnp(4, 0.0, 11, 3), sampling_exhausted);
  try {
    sample_connected_gnp(4, 0.0, 11, 3);
  } catch (const sampling_exhausted& e) {
    CHECK(e.attempts == 3);
  }
  CHECK_THROWS_AS(sample_connected_gnp(4, 0.5, 11, 0), std::invalid_argument);
  // a single vertex is connected, so conditioning is a no-op
  CHECK(sample_connected_gnp(1, 0.0, 1).attempts == 1);
}
