#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "capsim/protocol.hpp"

using namespace capsim;

namespace {

const double kInvSqrt2 = std::numbers::sqrt2 / 2.0;

// The identity-grid protocol over {|0>, |1>, |+>, |->}: encoder announces the
// grid index, decoder answers the Born probability directly.
TabulatedProtocol identity_grid() {
  TabulatedProtocol p;
  p.dimension = 2;
  p.states = {PureState::basis(2, 0), PureState::basis(2, 1),
              PureState({{kInvSqrt2, 0.0}, {kInvSqrt2, 0.0}}),
              PureState({{kInvSqrt2, 0.0}, {-kInvSqrt2, 0.0}})};
  p.measurements = p.states;
  p.shared = {{"X0", 1.0}};
  p.message_count = 4;
  p.encoder = {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}};
  p.decoder.assign(1, std::vector<std::vector<double>>(4, std::vector<double>(4, 0.0)));
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t m = 0; m < 4; ++m) {
      p.decoder[0][k][m] = born_probability(p.states[k], p.measurements[m]);
    }
  }
  p.support_weights = std::vector<double>{0.25, 0.25, 0.25, 0.25};
  return p;
}

// The two-bit protocol at one fixed shared pair, tabulated over a Bloch grid:
// encoder one-hot by lune index, decoder deterministic by the decode rule.
TabulatedProtocol lune_protocol(const SharedPair& shared, std::size_t grid_size,
                                std::uint64_t seed) {
  RandomStream rng(seed);
  TabulatedProtocol p;
  p.dimension = 2;
  for (std::size_t i = 0; i < grid_size; ++i) p.states.push_back(haar_random_state(2, rng));
  p.measurements = {PureState::basis(2, 0), PureState::basis(2, 1),
                    PureState({{kInvSqrt2, 0.0}, {kInvSqrt2, 0.0}})};
  p.shared = {{"pair0", 1.0}};
  p.message_count = 4;
  p.encoder.assign(1, {});
  p.encoder[0].assign(grid_size, std::vector<double>(4, 0.0));
  for (std::size_t s = 0; s < grid_size; ++s) {
    const MessageBits msg = two_bit_encode(bloch_from_state(p.states[s]), shared);
    p.encoder[0][s][static_cast<std::size_t>(msg.index())] = 1.0;
  }
  p.decoder.assign(1, std::vector<std::vector<double>>(
                          4, std::vector<double>(p.measurements.size(), 0.0)));
  for (int k = 0; k < 4; ++k) {
    for (std::size_t m = 0; m < p.measurements.size(); ++m) {
      const int out = two_bit_decode(bloch_from_state(p.measurements[m]),
                                     MessageBits::from_index(k), shared);
      p.decoder[0][static_cast<std::size_t>(k)][m] = out > 0 ? 1.0 : 0.0;
    }
  }
  // Per-state weight: the state's lune fraction split evenly across the grid
  // states landing in that lune, so each support sums to its analytic solid
  // angle.
  const double gamma = std::acos(shared.lambda1.dot(shared.lambda2));
  const double same = (std::numbers::pi - gamma) / (2.0 * std::numbers::pi);
  const double diff = gamma / (2.0 * std::numbers::pi);
  std::vector<std::size_t> counts(4, 0);
  std::vector<std::size_t> lune_of(grid_size);
  for (std::size_t s = 0; s < grid_size; ++s) {
    for (std::size_t k = 0; k < 4; ++k) {
      if (p.encoder[0][s][k] == 1.0) lune_of[s] = k;
    }
    ++counts[lune_of[s]];
  }
  std::vector<double> weights(grid_size);
  for (std::size_t s = 0; s < grid_size; ++s) {
    const std::size_t k = lune_of[s];
    // Messages (+,+) and (-,-) are indices 0 and 3; mixed signs are 1 and 2.
    const double fraction = (k == 0 || k == 3) ? same : diff;
    weights[s] = fraction / static_cast<double>(counts[k]);
  }
  p.support_weights = std::move(weights);
  return p;
}

}  // namespace

TEST_CASE("sign(0) = +1 convention") {
  const SharedPair shared{BlochVector{1.0, 0.0, 0.0}, BlochVector{0.0, 1.0, 0.0}};
  const MessageBits msg = two_bit_encode(BlochVector{0.0, 0.0, 1.0}, shared);
  CHECK(msg.c1 == +1);
  CHECK(msg.c2 == +1);
}

TEST_CASE("MessageBits index round trip") {
  for (int idx = 0; idx < 4; ++idx) {
    CHECK(MessageBits::from_index(idx).index() == idx);
  }
  CHECK(MessageBits{+1, +1}.index() == 0);
  CHECK(MessageBits{-1, -1}.index() == 3);
}

TEST_CASE("protocol is exact at the extremes") {
  RandomStream rng(301);
  for (int i = 0; i < 20; ++i) {
    const PureState psi = haar_random_state(2, rng);
    const PureState perp = orthogonal_qubit(psi);
    const auto same = two_bit_simulate(psi, psi, 2000, rng.substream(i));
    CHECK(same.frequency == 1.0);
    const auto anti = two_bit_simulate(psi, perp, 2000, rng.substream(100 + i));
    CHECK(anti.frequency == 0.0);
  }
}

TEST_CASE("protocol reproduces Born statistics (calibration)") {
  const PureState zero = PureState::basis(2, 0);
  const PureState plus({{kInvSqrt2, 0.0}, {kInvSqrt2, 0.0}});
  // b(psi).b(phi) = 0: frequency must sit at 1/2 (4 sigma = 0.002 at 1e6).
  const auto mid = two_bit_simulate(zero, plus, 1000000, RandomStream(303));
  CHECK(std::abs(mid.frequency - 0.5) < 0.002);

  // Intermediate angle pins the sign convention: born = cos^2(pi/6) = 3/4.
  const double theta = std::numbers::pi / 3.0;
  const PureState tilted({{std::cos(theta / 2.0), 0.0}, {std::sin(theta / 2.0), 0.0}});
  const auto tilt = two_bit_simulate(zero, tilted, 1000000, RandomStream(304));
  CHECK(tilt.born == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(std::abs(tilt.frequency - 0.75) < 0.002);

  CHECK_THROWS_AS(two_bit_simulate(zero, plus, 0, RandomStream(1)), std::invalid_argument);
  CHECK_THROWS_AS(two_bit_simulate(PureState::basis(3, 0), PureState::basis(3, 0), 10,
                                   RandomStream(1)),
                  std::invalid_argument);
}

TEST_CASE("two_bit_simulate is bit-identical across thread counts") {
  const PureState zero = PureState::basis(2, 0);
  const PureState plus({{kInvSqrt2, 0.0}, {kInvSqrt2, 0.0}});
  const RandomStream rng(305);
  const auto serial = two_bit_simulate(zero, plus, 200000, rng, 1);
  for (const int threads : {0, 2, 3}) {
    const auto parallel = two_bit_simulate(zero, plus, 200000, rng, threads);
    CHECK(parallel.plus_count == serial.plus_count);
  }
}

TEST_CASE("identity grid passes every audit") {
  const TabulatedProtocol p = identity_grid();
  CHECK_NOTHROW(p.validate());

  const auto eq = verify_equivalence(p, 1e-9);
  CHECK(eq.pass);
  CHECK(eq.max_deviation < 1e-12);

  const auto sets = support_sets(p);
  REQUIRE(sets.size() == 4);
  for (const auto& s : sets) CHECK(s.members.size() == 1);

  CHECK(lemma1_check(p).pass);

  const auto cov = coverage_check(p);
  CHECK(cov.status == CheckStatus::Pass);
  CHECK(cov.totals[0] == doctest::Approx(1.0).epsilon(1e-12));

  // Without declared weights the check degrades to a warning.
  TabulatedProtocol stripped = identity_grid();
  stripped.support_weights.reset();
  CHECK(coverage_check(stripped).status == CheckStatus::Warning);
}

TEST_CASE("message bound check anchors") {
  const auto pass = message_bound_check(4, 2, CapKind::Complex);
  CHECK(pass.pass);
  CHECK(pass.product == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(pass.bits_used == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(pass.bits_required == doctest::Approx(1.0).epsilon(1e-12));

  const auto fail = message_bound_check(1, 4, CapKind::Complex);
  CHECK_FALSE(fail.pass);
  CHECK(fail.volume == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(fail.product < 1.0);

  const auto boundary = message_bound_check(2, 2, CapKind::Real);
  CHECK(boundary.pass);
  CHECK(boundary.product == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS(message_bound_check(0, 2, CapKind::Real), std::invalid_argument);
}

TEST_CASE("validator catches each constraint violation with a path") {
  auto check_throws = [](TabulatedProtocol p, const char* fragment) {
    try {
      p.validate();
      FAIL_CHECK("expected a validation error naming " << fragment);
    } catch (const ProtocolValidationError& e) {
      CHECK(std::string(e.path()).find(fragment) != std::string::npos);
    }
  };

  TabulatedProtocol bad_weights = identity_grid();
  bad_weights.shared[0].weight = 0.7;
  check_throws(bad_weights, "shared");

  TabulatedProtocol bad_row = identity_grid();
  bad_row.encoder[0][2] = {0.5, 0.0, 0.0, 0.0};
  check_throws(bad_row, "encoder[0][2]");

  TabulatedProtocol bad_prob = identity_grid();
  bad_prob.decoder[0][1][2] = 1.5;
  check_throws(bad_prob, "decoder[0][1][2]");

  TabulatedProtocol ragged = identity_grid();
  ragged.decoder[0][3].pop_back();
  check_throws(ragged, "decoder[0][3]");

  TabulatedProtocol bad_support = identity_grid();
  bad_support.support_weights = std::vector<double>{0.5, 0.5};
  check_throws(bad_support, "support_weights");
}

TEST_CASE("fault injection: corrupting the decoder breaks equivalence") {
  TabulatedProtocol p = identity_grid();
  p.decoder[0][2][0] = 0.9;  // was 0.5
  const auto eq = verify_equivalence(p, 1e-9);
  CHECK_FALSE(eq.pass);
  REQUIRE_FALSE(eq.flagged.empty());
  CHECK(eq.flagged.front().state == 2);
  CHECK(eq.flagged.front().measurement == 0);
  CHECK(eq.max_deviation == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("contrapositive of Lemma 1: an orthogonal pair in one support breaks equivalence") {
  // Merge |0> and |1> into a single message: no decoder row can answer both.
  TabulatedProtocol p;
  p.dimension = 2;
  p.states = {PureState::basis(2, 0), PureState::basis(2, 1)};
  p.measurements = {PureState::basis(2, 0)};
  p.shared = {{"X0", 1.0}};
  p.message_count = 1;
  p.encoder = {{{1.0}, {1.0}}};
  p.decoder = {{{0.5}}};
  CHECK_NOTHROW(p.validate());

  const auto lemma = lemma1_check(p);
  CHECK_FALSE(lemma.pass);
  REQUIRE(lemma.violations.size() == 1);
  CHECK(lemma.violations[0].state_a == 0);
  CHECK(lemma.violations[0].state_b == 1);
  CHECK(lemma.violations[0].overlap == 0.0);

  // Whatever constant the decoder returns, it misses one of the two states
  // by at least 1/2.
  const auto eq = verify_equivalence(p, 1e-9);
  CHECK_FALSE(eq.pass);
  CHECK(eq.max_deviation >= 0.25);
}

TEST_CASE("coverage failure on a half-covered state space") {
  TabulatedProtocol p;
  p.dimension = 2;
  p.states = {PureState::basis(2, 0), PureState::basis(2, 1)};
  p.measurements = {PureState::basis(2, 0)};
  p.shared = {{"X0", 1.0}};
  p.message_count = 2;
  p.encoder = {{{1.0, 0.0}, {0.0, 1.0}}};
  p.decoder = {{{1.0}, {0.0}}};
  // Declared weights cover only half the space.
  p.support_weights = std::vector<double>{0.25, 0.25};
  const auto cov = coverage_check(p);
  CHECK(cov.status == CheckStatus::Fail);
  CHECK(cov.totals[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("support threshold semantics") {
  TabulatedProtocol p = identity_grid();
  // Threshold above every encoder entry empties all supports.
  for (const auto& s : support_sets(p, 1.5)) CHECK(s.members.empty());
}

TEST_CASE("lunes of a fixed shared pair") {
  const double gamma0 = 1.1;
  const SharedPair shared{BlochVector{0.0, 0.0, 1.0},
                          BlochVector{std::sin(gamma0), 0.0, std::cos(gamma0)}};
  const TabulatedProtocol p = lune_protocol(shared, 500, 307);
  CHECK_NOTHROW(p.validate());

  // Supports are the four lunes; no lune contains a near-antipodal pair.
  CHECK(lemma1_check(p, 1e-9).pass);

  // Analytic solid angles sum to 1.
  const auto cov = coverage_check(p, 1e-9);
  CHECK(cov.status == CheckStatus::Pass);
  CHECK(cov.totals[0] == doctest::Approx(1.0).epsilon(1e-9));

  // Support sets coincide with direct lune evaluation.
  const auto sets = support_sets(p);
  REQUIRE(sets.size() == 4);
  std::size_t total = 0;
  for (const auto& set : sets) {
    for (const std::size_t s : set.members) {
      const MessageBits msg = two_bit_encode(bloch_from_state(p.states[s]), shared);
      CHECK(static_cast<std::size_t>(msg.index()) == set.message);
    }
    total += set.members.size();
  }
  CHECK(total == 500);
}

TEST_CASE("Monte Carlo equivalence over explicit pairs") {
  RandomStream rng(308);
  std::vector<std::pair<PureState, PureState>> pairs;
  for (int i = 0; i < 8; ++i) {
    pairs.emplace_back(haar_random_state(2, rng), haar_random_state(2, rng));
  }
  const auto report = verify_equivalence(pairs, 20000, RandomStream(309), 0.05);
  CHECK(report.pass);
  CHECK(report.pairs.size() == 8);
  for (const auto& pr : report.pairs) {
    CHECK(pr.deviation <= 4.5 * std::max(pr.standard_error, 1e-4));
  }
}
