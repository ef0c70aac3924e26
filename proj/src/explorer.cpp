#include "capsim/explorer.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "capsim/parallel.hpp"

namespace capsim {

namespace {

void require_delta(double delta) {
  if (!(delta > 0.0) || !(delta < std::numbers::pi / 4.0)) {
    throw std::invalid_argument("delta must lie in (0, pi/4)");
  }
}

}  // namespace

// ---- Point cloud --------------------------------------------------------------

double SpherePointCloud::overlap(std::size_t i, std::size_t j) const {
  const double* a = point(i);
  const double* b = point(j);
  if (kind == CapKind::Real) {
    double s = 0.0;
    for (std::size_t k = 0; k < stride; ++k) s += a[k] * b[k];
    return std::abs(s);
  }
  // Interleaved re/im; |<a|b>| with <a|b> = sum conj(a_k) b_k.
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < stride; k += 2) {
    const double ar = a[k], ai = a[k + 1], br = b[k], bi = b[k + 1];
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return std::hypot(re, im);
}

SpherePointCloud SpherePointCloud::sample(CapKind kind, std::size_t dim,
                                          std::size_t M, RandomStream& rng) {
  if (dim < 2) throw std::invalid_argument("SpherePointCloud: dimension must be at least 2");
  if (M < 1) throw std::invalid_argument("SpherePointCloud: M must be positive");
  SpherePointCloud cloud;
  cloud.kind = kind;
  cloud.dim = dim;
  cloud.stride = kind == CapKind::Real ? dim : 2 * dim;
  cloud.data.reserve(M * cloud.stride);
  for (std::size_t i = 0; i < M; ++i) {
    if (kind == CapKind::Real) {
      const auto p = uniform_sphere_point(dim, rng);
      cloud.data.insert(cloud.data.end(), p.begin(), p.end());
    } else {
      const PureState s = haar_random_state(dim, rng);
      for (std::size_t k = 0; k < dim; ++k) {
        cloud.data.push_back(s[k].real());
        cloud.data.push_back(s[k].imag());
      }
    }
  }
  return cloud;
}

// ---- Orthogonality graph -------------------------------------------------------

bool OrthogonalityGraph::is_independent(const std::vector<std::size_t>& members) const {
  std::vector<char> in_set(n, 0);
  for (const std::size_t v : members) {
    if (v >= n) return false;
    if (in_set[v]) return false;  // duplicate
    in_set[v] = 1;
  }
  for (const std::size_t v : members) {
    for (const std::uint32_t u : adjacency[v]) {
      if (in_set[u]) return false;
    }
  }
  return true;
}

OrthogonalityGraph build_graph(const SpherePointCloud& cloud, double delta, int threads) {
  require_delta(delta);
  const std::size_t n = cloud.size();
  if (n == 0) throw std::invalid_argument("build_graph: empty cloud");
  const double threshold = std::sin(delta);

  OrthogonalityGraph g;
  g.n = n;
  g.delta = delta;
  // Each vertex's full neighbor row is computed independently, so the rows
  // (and hence the graph) are identical for every thread count.
  g.adjacency = map_blocks<std::vector<std::uint32_t>>(n, threads, [&](std::size_t i) {
    std::vector<std::uint32_t> row;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (cloud.overlap(i, j) <= threshold) row.push_back(static_cast<std::uint32_t>(j));
    }
    return row;
  });
  std::size_t deg_sum = 0;
  for (const auto& row : g.adjacency) deg_sum += row.size();
  g.edge_count = deg_sum / 2;
  return g;
}

// ---- Double-cap seed -----------------------------------------------------------

CandidateSet double_cap_seed(const SpherePointCloud& cloud, const OrthogonalityGraph& graph) {
  require_delta(graph.delta);
  CandidateSet set;
  if (cloud.kind == CapKind::Real) {
    // Points within angle pi/4 - delta/2 of either pole +-e1.  Any two such
    // points subtend an angle whose cosine exceeds sin(delta) in magnitude,
    // so the set is independent by construction.
    const double cos_alpha = std::cos(std::numbers::pi / 4.0 - 0.5 * graph.delta);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      if (std::abs(cloud.point(i)[0]) > cos_alpha) set.members.push_back(i);
    }
  } else {
    // States with |<x|e1>|^2 > (1 + sin delta)/2: for two members,
    // |<x|y>| >= |x1||y1| - sqrt(1-|x1|^2) sqrt(1-|y1|^2) > sin delta.
    const double threshold = 0.5 * (1.0 + std::sin(graph.delta));
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const double* p = cloud.point(i);
      const double t = p[0] * p[0] + p[1] * p[1];
      if (t > threshold) set.members.push_back(i);
    }
  }
  set.density = static_cast<double>(set.members.size()) / static_cast<double>(cloud.size());
  set.independent = graph.is_independent(set.members);
  return set;
}

// ---- Greedy ---------------------------------------------------------------------

CandidateSet greedy_search(const OrthogonalityGraph& graph, const SpherePointCloud& cloud) {
  const std::size_t n = graph.n;
  std::vector<char> alive(n, 1);
  std::vector<std::size_t> degree(n, 0);
  for (std::size_t v = 0; v < n; ++v) degree[v] = graph.adjacency[v].size();

  CandidateSet set;
  std::size_t remaining = n;
  while (remaining > 0) {
    // Vertex with fewest remaining neighbors; ties broken by lowest index.
    std::size_t best = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (alive[v] && (best == n || degree[v] < degree[best])) best = v;
    }
    set.members.push_back(best);
    // Remove best and its neighborhood.
    std::vector<std::size_t> removed{best};
    for (const std::uint32_t u : graph.adjacency[best]) {
      if (alive[u]) removed.push_back(u);
    }
    for (const std::size_t v : removed) {
      alive[v] = 0;
      --remaining;
    }
    for (const std::size_t v : removed) {
      for (const std::uint32_t u : graph.adjacency[v]) {
        if (alive[u]) --degree[u];
      }
    }
  }
  std::sort(set.members.begin(), set.members.end());
  set.density = static_cast<double>(set.members.size()) / static_cast<double>(cloud.size());
  set.independent = graph.is_independent(set.members);
  return set;
}

// ---- Simulated annealing ---------------------------------------------------------

CandidateSet anneal_search(const OrthogonalityGraph& graph, const SpherePointCloud& cloud,
                           const CandidateSet& seed, RandomStream& rng,
                           const AnnealOptions& options) {
  const std::size_t n = graph.n;
  if (options.iterations == 0 || !(options.t_initial > 0.0) || !(options.t_final > 0.0) ||
      options.t_final > options.t_initial) {
    throw std::invalid_argument("anneal_search: bad options");
  }

  std::vector<char> in_set(n, 0);
  // conflicts[v] = number of current members adjacent to v.
  std::vector<std::uint32_t> conflicts(n, 0);
  std::size_t size = 0;

  auto add_vertex = [&](std::size_t v) {
    in_set[v] = 1;
    ++size;
    for (const std::uint32_t u : graph.adjacency[v]) ++conflicts[u];
  };
  auto drop_vertex = [&](std::size_t v) {
    in_set[v] = 0;
    --size;
    for (const std::uint32_t u : graph.adjacency[v]) --conflicts[u];
  };

  const CandidateSet* start = &seed;
  CandidateSet greedy;
  if (!seed.independent || seed.members.empty()) {
    greedy = greedy_search(graph, cloud);
    start = &greedy;
  }
  for (const std::size_t v : start->members) add_vertex(v);

  std::vector<std::size_t> best_members = start->members;
  std::size_t best_size = size;

  // Temperature in units of one vertex (all vertices carry equal weight 1/M);
  // geometric schedule.
  const double decay = std::pow(options.t_final / options.t_initial,
                                1.0 / static_cast<double>(options.iterations));
  double temperature = options.t_initial;

  for (std::uint64_t it = 0; it < options.iterations; ++it, temperature *= decay) {
    const std::size_t v = static_cast<std::size_t>(rng.below(n));
    if (in_set[v]) {
      // Drop: costs one vertex; accepted with the Metropolis rule.
      if (rng.uniform() < std::exp(-1.0 / temperature)) drop_vertex(v);
    } else if (conflicts[v] == 0) {
      add_vertex(v);  // strictly improving, always accepted
      if (size > best_size) {
        best_size = size;
        best_members.clear();
        for (std::size_t u = 0; u < n; ++u) {
          if (in_set[u]) best_members.push_back(u);
        }
      }
    } else if (conflicts[v] == 1) {
      // Swap: exchange v with its unique conflicting member; energy-neutral
      // plateau move that keeps the search from stalling.
      for (const std::uint32_t u : graph.adjacency[v]) {
        if (in_set[u]) {
          drop_vertex(u);
          add_vertex(v);
          break;
        }
      }
    }
  }

  CandidateSet out;
  out.members = std::move(best_members);
  std::sort(out.members.begin(), out.members.end());
  out.density = static_cast<double>(out.members.size()) / static_cast<double>(cloud.size());
  out.independent = graph.is_independent(out.members);
  return out;
}

// ---- Exact solver (branch and bound) ----------------------------------------------

namespace {

struct BnB {
  std::vector<std::uint64_t> adj;
  std::vector<std::size_t> current, best;

  void run(std::uint64_t candidates) {
    const int cand_count = std::popcount(candidates);
    if (current.size() + static_cast<std::size_t>(cand_count) <= best.size()) return;
    if (candidates == 0) {
      if (current.size() > best.size()) best = current;
      return;
    }
    // Pivot on the candidate with the most candidate-neighbors: including or
    // excluding it prunes the most.
    std::uint64_t rest = candidates;
    int pivot = -1, pivot_deg = -1;
    while (rest) {
      const int v = std::countr_zero(rest);
      rest &= rest - 1;
      const int deg = std::popcount(adj[v] & candidates);
      if (deg > pivot_deg) {
        pivot_deg = deg;
        pivot = v;
      }
    }
    const std::uint64_t bit = std::uint64_t{1} << pivot;
    // Include pivot.
    current.push_back(static_cast<std::size_t>(pivot));
    run(candidates & ~bit & ~adj[pivot]);
    current.pop_back();
    // Exclude pivot.
    run(candidates & ~bit);
  }
};

}  // namespace

CandidateSet brute_force_max_independent(const OrthogonalityGraph& graph,
                                         const SpherePointCloud& cloud) {
  if (graph.n > 40) {
    throw std::invalid_argument("brute_force_max_independent: graph too large (n > 40)");
  }
  BnB solver;
  solver.adj.assign(graph.n, 0);
  for (std::size_t v = 0; v < graph.n; ++v) {
    for (const std::uint32_t u : graph.adjacency[v]) {
      solver.adj[v] |= std::uint64_t{1} << u;
    }
  }
  const std::uint64_t all = graph.n == 64 ? ~std::uint64_t{0}
                                          : (std::uint64_t{1} << graph.n) - 1;
  solver.run(all);

  CandidateSet out;
  out.members = solver.best;
  std::sort(out.members.begin(), out.members.end());
  out.density = static_cast<double>(out.members.size()) / static_cast<double>(cloud.size());
  out.independent = graph.is_independent(out.members);
  return out;
}

// ---- Pipeline -----------------------------------------------------------------------

std::string SearchReport::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = kind == CapKind::Real ? "real" : "complex";
  j["dim"] = dim;
  j["M"] = M;
  j["delta_radians"] = delta;
  j["seed"] = seed;
  j["best_density"] = best_density;
  j["target_volume"] = target_volume;
  j["gap"] = gap;
  j["feasible"] = feasible;
  j["iterations"] = iterations;
  j["elapsed_seconds"] = elapsed_seconds;
  return j.dump(2);
}

SearchReport explore(CapKind kind, std::size_t dim, std::size_t M, double delta,
                     std::uint64_t seed, const ExploreOptions& options) {
  require_delta(delta);
  const auto t0 = std::chrono::steady_clock::now();

  RandomStream rng(seed);
  RandomStream cloud_rng = rng.substream(0);
  RandomStream anneal_rng = rng.substream(1);

  const SpherePointCloud cloud = SpherePointCloud::sample(kind, dim, M, cloud_rng);
  const OrthogonalityGraph graph = build_graph(cloud, delta, options.threads);

  const CandidateSet cap = double_cap_seed(cloud, graph);
  const CandidateSet greedy = greedy_search(graph, cloud);
  const CandidateSet* incumbent =
      (cap.independent && cap.members.size() >= greedy.members.size()) ? &cap : &greedy;

  AnnealOptions anneal_options;
  anneal_options.iterations = options.anneal_iterations;
  CandidateSet best = anneal_search(graph, cloud, *incumbent, anneal_rng, anneal_options);
  if (incumbent->independent && incumbent->members.size() > best.members.size()) {
    best = *incumbent;
  }

  std::uint64_t iterations = options.anneal_iterations;
  if (graph.n <= 40) {
    const CandidateSet exact = brute_force_max_independent(graph, cloud);
    if (exact.members.size() >= best.members.size()) best = exact;
  }

  SearchReport report;
  report.kind = kind;
  report.dim = dim;
  report.M = M;
  report.delta = delta;
  report.seed = seed;
  report.best_density = best.density;
  report.target_volume = kind == CapKind::Real
                             ? real_cap_volume_beta(static_cast<std::uint64_t>(dim))
                             : complex_cap_volume_closed(static_cast<std::uint64_t>(dim));
  report.gap = report.best_density - report.target_volume;
  report.feasible = graph.is_independent(best.members);
  report.iterations = iterations;
  report.best_members = std::move(best.members);

  const auto t1 = std::chrono::steady_clock::now();
  report.elapsed_seconds =
      options.suppress_timing ? 0.0 : std::chrono::duration<double>(t1 - t0).count();
  return report;
}

}  // namespace capsim
