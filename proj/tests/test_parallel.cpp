#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <vector>

#include "capsim/parallel.hpp"

using namespace capsim;

TEST_CASE("serial and parallel block maps produce identical bytes") {
  // Deliberately float-heavy block function: byte equality here means the
  // decomposition really is order-independent.
  auto block = [](std::size_t b) {
    double acc = 0.0;
    for (int i = 0; i < 1000; ++i) {
      acc += std::sin(static_cast<double>(b) * 1e-3 + i * 1e-4);
    }
    return acc;
  };
  const auto serial = map_blocks_serial<double>(64, block);
  for (const int threads : {0, 2, 3, 7}) {
    const auto parallel = map_blocks_parallel<double>(64, threads, block);
    REQUIRE(parallel.size() == serial.size());
    for (std::size_t i = 0; i < serial.size(); ++i) CHECK(parallel[i] == serial[i]);
  }
  const auto dispatched = map_blocks<double>(64, 1, block);
  for (std::size_t i = 0; i < serial.size(); ++i) CHECK(dispatched[i] == serial[i]);
}

TEST_CASE("zero blocks is a no-op") {
  auto block = [](std::size_t) { return 1; };
  CHECK(map_blocks<int>(0, 1, block).empty());
  CHECK(map_blocks<int>(0, 4, block).empty());
}

TEST_CASE("resolve_threads") {
  CHECK(resolve_threads(1) == 1);
  CHECK(resolve_threads(0) >= 1);
#ifdef _OPENMP
  CHECK(resolve_threads(5) == 5);
#endif
}
