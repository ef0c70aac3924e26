#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "capsim/capgeom.hpp"
#include "capsim/hilbert.hpp"
#include "capsim/rng.hpp"

namespace capsim {

// A cloud of M points on a unit sphere.  For CapKind::Real these are points
// of S^{dim-1} stored as dim reals; for CapKind::Complex they are states of
// C^dim stored as 2*dim reals (re0, im0, re1, im1, ...) and "dot product"
// means |<x|y>|.
struct SpherePointCloud {
  CapKind kind = CapKind::Real;
  std::size_t dim = 0;       // ambient real dimension, or Hilbert dimension
  std::size_t stride = 0;    // reals per point
  std::vector<double> data;  // M * stride

  std::size_t size() const { return stride == 0 ? 0 : data.size() / stride; }
  const double* point(std::size_t i) const { return data.data() + i * stride; }

  // |x_i . x_j| (real) or |<x_i|x_j>| (complex).
  double overlap(std::size_t i, std::size_t j) const;

  // Per-point weights: each point represents a cell of the sphere of equal
  // measure 1/M, so the weight of a set is |set|/M.
  double point_weight() const { return 1.0 / static_cast<double>(size()); }

  static SpherePointCloud sample(CapKind kind, std::size_t dim, std::size_t M,
                                 RandomStream& rng);
};

// delta-orthogonality graph: vertices are cloud points, an edge joins i and j
// iff overlap(i, j) <= sin(delta), i.e. the pair is within delta of
// orthogonal.  Requires 0 < delta < pi/4.  An independent set is then a
// delta-orthogonality-avoiding set.
struct OrthogonalityGraph {
  std::size_t n = 0;
  double delta = 0.0;
  std::vector<std::vector<std::uint32_t>> adjacency;
  std::size_t edge_count = 0;

  bool is_independent(const std::vector<std::size_t>& members) const;
};

// threads: 1 = serial reference, 0 = OpenMP default, k = k threads.  The
// graph is identical for every thread count.
OrthogonalityGraph build_graph(const SpherePointCloud& cloud, double delta,
                               int threads = 1);

struct CandidateSet {
  std::vector<std::size_t> members;
  double density = 0.0;  // |members| / M
  bool independent = false;
};

// Seed set: the double cap around a fixed axis (first basis direction),
// shrunk so that any two members are guaranteed non-delta-orthogonal.
CandidateSet double_cap_seed(const SpherePointCloud& cloud,
                             const OrthogonalityGraph& graph);

// Greedy maximum-independent-set heuristic: repeatedly take the vertex with
// fewest remaining neighbors (ties by lowest index), drop its neighborhood.
CandidateSet greedy_search(const OrthogonalityGraph& graph,
                           const SpherePointCloud& cloud);

struct AnnealOptions {
  std::uint64_t iterations = 1'000'000;
  double t_initial = 1.0;   // in units of one vertex weight
  double t_final = 1e-3;
};

// Simulated annealing over independent sets (add / drop / swap moves, hard
// feasibility).  Starts from `seed` if it is independent and non-empty,
// otherwise from the greedy solution.
CandidateSet anneal_search(const OrthogonalityGraph& graph,
                           const SpherePointCloud& cloud,
                           const CandidateSet& seed, RandomStream& rng,
                           const AnnealOptions& options = {});

// Exact maximum independent set by branch and bound; requires n <= 40.
CandidateSet brute_force_max_independent(const OrthogonalityGraph& graph,
                                         const SpherePointCloud& cloud);

struct SearchReport {
  CapKind kind = CapKind::Real;
  std::size_t dim = 0;
  std::size_t M = 0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  double best_density = 0.0;
  double target_volume = 0.0;  // V_dim or U_dim
  double gap = 0.0;            // best_density - target_volume
  bool feasible = true;        // best set re-verified independent
  std::uint64_t iterations = 0;
  double elapsed_seconds = 0.0;
  std::vector<std::size_t> best_members;

  // JSON object with exactly the report keys (kind, dim, M, delta_radians,
  // seed, best_density, target_volume, gap, feasible, iterations,
  // elapsed_seconds).
  std::string to_json() const;
};

struct ExploreOptions {
  std::uint64_t anneal_iterations = 1'000'000;
  int threads = 1;
  // Deterministic output mode: report elapsed_seconds as 0 so that repeated
  // runs with the same seed emit identical bytes (wall time is still
  // measured and available to the caller via the returned struct when off).
  bool suppress_timing = false;
};

// Full pipeline: sample cloud, build graph, seed with the double cap, improve
// with greedy and annealing, exact-solve when M <= 40, re-verify the winner.
SearchReport explore(CapKind kind, std::size_t dim, std::size_t M, double delta,
                     std::uint64_t seed, const ExploreOptions& options = {});

}  // namespace capsim
