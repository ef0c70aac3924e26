// Compares the serial reference implementations against the OpenMP kernels
// and verifies they agree bit for bit while timing both.
//
//   capsim-bench [trials] [M] [threads]

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "capsim/capgeom.hpp"
#include "capsim/explorer.hpp"
#include "capsim/parallel.hpp"
#include "capsim/protocol.hpp"

using namespace capsim;

namespace {

template <typename F>
double time_ms(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-22s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   %s\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms,
              identical ? "results identical" : "RESULTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  const std::uint64_t trials = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 4'000'000;
  const std::size_t M = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 3000;
  const int threads = argc > 3 ? std::atoi(argv[3]) : 0;

  std::printf("threads requested: %d (0 = OpenMP default, resolved %d)\n\n", threads,
              resolve_threads(threads));
  const RandomStream rng(424242);

  {
    MonteCarloEstimate a, b;
    const double ts = time_ms(
        [&] { a = monte_carlo_cap_volume(CapKind::Real, 4, trials, rng, 1); });
    const double tp = time_ms(
        [&] { b = monte_carlo_cap_volume(CapKind::Real, 4, trials, rng, threads); });
    report("mc cap volume (d=4)", ts, tp, a.hits == b.hits);
  }

  {
    const PureState psi = PureState::basis(2, 0);
    const PureState phi = PureState::normalized({{1.0, 0.0}, {1.0, 0.0}});
    SimulationResult a, b;
    const double ts = time_ms([&] { a = two_bit_simulate(psi, phi, trials, rng, 1); });
    const double tp = time_ms([&] { b = two_bit_simulate(psi, phi, trials, rng, threads); });
    report("2-bit protocol", ts, tp, a.plus_count == b.plus_count);
  }

  {
    RandomStream cloud_rng = rng.substream(7);
    const auto cloud = SpherePointCloud::sample(CapKind::Real, 3, M, cloud_rng);
    OrthogonalityGraph a, b;
    const double delta = 2.0 * 3.14159265358979323846 / 180.0;
    const double ts = time_ms([&] { a = build_graph(cloud, delta, 1); });
    const double tp = time_ms([&] { b = build_graph(cloud, delta, threads); });
    report("orthogonality graph", ts, tp,
           a.edge_count == b.edge_count && a.adjacency == b.adjacency);
  }

  return 0;
}
