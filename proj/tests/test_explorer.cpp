#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "capsim/explorer.hpp"

using namespace capsim;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Cloud of unit vectors in R^2 at prescribed angles; handy for graphs whose
// structure is known by construction.
SpherePointCloud circle_cloud(const std::vector<double>& angles_deg) {
  SpherePointCloud cloud;
  cloud.kind = CapKind::Real;
  cloud.dim = 2;
  cloud.stride = 2;
  for (const double a : angles_deg) {
    cloud.data.push_back(std::cos(a * kDeg));
    cloud.data.push_back(std::sin(a * kDeg));
  }
  return cloud;
}

}  // namespace

TEST_CASE("cloud sampling produces unit points with coherent overlaps") {
  RandomStream rng(501);
  const auto real = SpherePointCloud::sample(CapKind::Real, 4, 100, rng);
  CHECK(real.size() == 100);
  CHECK(real.stride == 4);
  for (std::size_t i = 0; i < real.size(); ++i) {
    CHECK(real.overlap(i, i) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(real.overlap(3, 7) == real.overlap(7, 3));

  const auto complex = SpherePointCloud::sample(CapKind::Complex, 3, 50, rng);
  CHECK(complex.size() == 50);
  CHECK(complex.stride == 6);
  for (std::size_t i = 0; i < complex.size(); ++i) {
    CHECK(complex.overlap(i, i) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(complex.overlap(1, 2) == doctest::Approx(complex.overlap(2, 1)).epsilon(1e-14));
  CHECK(complex.point_weight() == doctest::Approx(0.02).epsilon(1e-14));
}

TEST_CASE("graph edges appear exactly at near-orthogonal pairs") {
  // 0 deg and 90 deg are orthogonal; 45 deg is far from orthogonal to both;
  // 88 deg is within 2.5 deg of orthogonal to 0 deg only.
  const auto cloud = circle_cloud({0.0, 90.0, 45.0, 88.0});
  const auto g = build_graph(cloud, 2.5 * kDeg, 1);
  CHECK(g.n == 4);
  CHECK(g.edge_count == 2);
  CHECK(g.adjacency[0] == std::vector<std::uint32_t>{1, 3});
  CHECK(g.adjacency[1] == std::vector<std::uint32_t>{0});
  CHECK(g.adjacency[2].empty());
  CHECK(g.adjacency[3] == std::vector<std::uint32_t>{0});

  CHECK(g.is_independent({1, 2, 3}));
  CHECK_FALSE(g.is_independent({0, 1}));
  CHECK_FALSE(g.is_independent({2, 2}));  // duplicates rejected

  CHECK_THROWS_AS(build_graph(cloud, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_graph(cloud, std::numbers::pi / 4.0, 1), std::invalid_argument);
}

TEST_CASE("antipodal points are near-orthogonal to the same vertices") {
  // Antipodal pairs have |dot| = 1, never an edge; orthogonality is two-sided.
  const auto cloud = circle_cloud({0.0, 180.0, 90.0});
  const auto g = build_graph(cloud, 5.0 * kDeg, 1);
  CHECK(g.adjacency[0] == std::vector<std::uint32_t>{2});
  CHECK(g.adjacency[1] == std::vector<std::uint32_t>{2});
  CHECK(g.is_independent({0, 1}));
}

TEST_CASE("graph construction is identical across thread counts") {
  RandomStream rng(502);
  const auto cloud = SpherePointCloud::sample(CapKind::Real, 3, 400, rng);
  const auto serial = build_graph(cloud, 3.0 * kDeg, 1);
  for (const int threads : {0, 2, 5}) {
    const auto parallel = build_graph(cloud, 3.0 * kDeg, threads);
    CHECK(parallel.edge_count == serial.edge_count);
    CHECK(parallel.adjacency == serial.adjacency);
  }
}

TEST_CASE("double-cap seed is independent by construction") {
  for (const std::uint64_t seed : {1u, 2u, 3u}) {
    RandomStream rng(seed);
    for (const auto kind : {CapKind::Real, CapKind::Complex}) {
      for (const std::size_t dim : {2, 3}) {
        RandomStream sub = rng.substream(dim + (kind == CapKind::Real ? 0 : 10));
        const auto cloud = SpherePointCloud::sample(kind, dim, 600, sub);
        const auto g = build_graph(cloud, 2.0 * kDeg, 1);
        const auto seed_set = double_cap_seed(cloud, g);
        CHECK(seed_set.independent);
        CHECK(g.is_independent(seed_set.members));
        CHECK_FALSE(seed_set.members.empty());
      }
    }
  }
}

TEST_CASE("double-cap seed density tracks the cap measure on S^2") {
  RandomStream rng(503);
  const auto cloud = SpherePointCloud::sample(CapKind::Real, 3, 4000, rng);
  const auto g = build_graph(cloud, 2.0 * kDeg, 1);
  const auto seed_set = double_cap_seed(cloud, g);
  // Shrunk cap of half-angle pi/4 - delta/2: measure 1 - cos(alpha) ~ 0.2807.
  const double expected = 1.0 - std::cos(std::numbers::pi / 4.0 - 1.0 * kDeg);
  CHECK(std::abs(seed_set.density - expected) < 0.03);
}

TEST_CASE("greedy returns a maximal independent set") {
  RandomStream rng(504);
  const auto cloud = SpherePointCloud::sample(CapKind::Real, 3, 300, rng);
  const auto g = build_graph(cloud, 4.0 * kDeg, 1);
  const auto set = greedy_search(g, cloud);
  CHECK(set.independent);
  CHECK(g.is_independent(set.members));
  // Maximality: every vertex outside the set has a neighbor inside.
  std::set<std::size_t> chosen(set.members.begin(), set.members.end());
  for (std::size_t v = 0; v < g.n; ++v) {
    if (chosen.count(v)) continue;
    bool blocked = false;
    for (const std::uint32_t u : g.adjacency[v]) {
      if (chosen.count(u)) blocked = true;
    }
    CHECK(blocked);
  }
}

TEST_CASE("exact solver reproduces known optima on crafted graphs") {
  // Path 0-1-2 (via near-orthogonal angles): maximum independent set {0, 2}.
  {
    const auto cloud = circle_cloud({0.0, 90.0, 178.0});
    const auto g = build_graph(cloud, 4.0 * kDeg, 1);
    REQUIRE(g.edge_count == 2);
    const auto best = brute_force_max_independent(g, cloud);
    CHECK(best.members == std::vector<std::size_t>{0, 2});
  }
  // 4-cycle 0-2-1-3-0: maximum independent set has size 2.
  {
    const auto cloud = circle_cloud({0.0, 180.0, 90.0, 270.0});
    const auto g = build_graph(cloud, 4.0 * kDeg, 1);
    REQUIRE(g.edge_count == 4);
    const auto best = brute_force_max_independent(g, cloud);
    CHECK(best.members.size() == 2);
    CHECK(best.independent);
  }
  // Empty graph: everything is independent.
  {
    const auto cloud = circle_cloud({0.0, 10.0, 20.0, 30.0});
    const auto g = build_graph(cloud, 2.0 * kDeg, 1);
    const auto best = brute_force_max_independent(g, cloud);
    CHECK(best.members.size() == 4);
    CHECK(best.density == 1.0);
  }
}

TEST_CASE("exact solver rejects oversized graphs") {
  RandomStream rng(505);
  const auto cloud = SpherePointCloud::sample(CapKind::Real, 3, 41, rng);
  const auto g = build_graph(cloud, 2.0 * kDeg, 1);
  CHECK_THROWS_AS(brute_force_max_independent(g, cloud), std::invalid_argument);
}

TEST_CASE("annealing matches the exact optimum on small graphs") {
  for (const std::uint64_t seed : {601u, 602u, 603u, 604u}) {
    RandomStream rng(seed);
    const std::size_t M = 16 + static_cast<std::size_t>(rng.below(15));
    const auto cloud = SpherePointCloud::sample(CapKind::Real, 3, M, rng);
    const auto g = build_graph(cloud, 12.0 * kDeg, 1);
    const auto exact = brute_force_max_independent(g, cloud);
    AnnealOptions options;
    options.iterations = 200000;
    RandomStream anneal_rng = rng.substream(9);
    const auto annealed = anneal_search(g, cloud, double_cap_seed(cloud, g), anneal_rng, options);
    CHECK(annealed.independent);
    CHECK(annealed.members.size() == exact.members.size());
  }
}

TEST_CASE("shrinking delta weakly increases the exact optimum") {
  RandomStream rng(506);
  const auto cloud = SpherePointCloud::sample(CapKind::Real, 3, 28, rng);
  double prev = 0.0;
  for (const double delta_deg : {16.0, 8.0, 4.0, 2.0, 1.0}) {
    const auto g = build_graph(cloud, delta_deg * kDeg, 1);
    const auto best = brute_force_max_independent(g, cloud);
    CHECK(best.density >= prev);
    prev = best.density;
  }
}

TEST_CASE("explore end-to-end on a small real instance") {
  ExploreOptions options;
  options.anneal_iterations = 30000;
  options.suppress_timing = true;
  const auto report = explore(CapKind::Real, 2, 300, 2.0 * kDeg, 77, options);
  CHECK(report.feasible);
  CHECK(std::abs(report.best_density - 0.5) < 0.07);
  CHECK(report.target_volume == 0.5);
  CHECK(report.gap == doctest::Approx(report.best_density - 0.5).epsilon(1e-14));
  CHECK(report.M == 300);
  CHECK(report.iterations == 30000);
  CHECK(report.elapsed_seconds == 0.0);
  CHECK_FALSE(report.best_members.empty());
}

TEST_CASE("report JSON carries exactly the contract keys") {
  ExploreOptions options;
  options.anneal_iterations = 5000;
  options.suppress_timing = true;
  const auto report = explore(CapKind::Complex, 2, 150, 3.0 * kDeg, 42, options);
  const auto j = nlohmann::json::parse(report.to_json());
  const std::set<std::string> expected{
      "kind", "dim", "M", "delta_radians", "seed", "best_density",
      "target_volume", "gap", "feasible", "iterations", "elapsed_seconds"};
  std::set<std::string> actual;
  for (const auto& item : j.items()) actual.insert(item.key());
  CHECK(actual == expected);
  CHECK(j["kind"] == "complex");
  CHECK(j["dim"] == 2);
  CHECK(j["M"] == 150);
  CHECK(j["seed"] == 42);
  CHECK(j["target_volume"] == 0.5);
  CHECK(j["feasible"] == true);
}

TEST_CASE("explore is deterministic for a fixed seed") {
  ExploreOptions options;
  options.anneal_iterations = 10000;
  options.suppress_timing = true;
  const auto a = explore(CapKind::Real, 3, 250, 2.0 * kDeg, 1234, options);
  const auto b = explore(CapKind::Real, 3, 250, 2.0 * kDeg, 1234, options);
  CHECK(a.to_json() == b.to_json());
  CHECK(a.best_members == b.best_members);
}
