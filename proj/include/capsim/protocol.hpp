#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "capsim/capgeom.hpp"
#include "capsim/hilbert.hpp"
#include "capsim/rng.hpp"

#include <json.hpp>

namespace capsim {

using json = nlohmann::json;

// ---- Two-bit one-way qubit protocol ----------------------------------------

// One shared random value: an independent pair of uniform Bloch vectors.
struct SharedPair {
  BlochVector lambda1, lambda2;
};

// The two classical bits sent from encoder to decoder, stored as signs.
struct MessageBits {
  int c1 = +1, c2 = +1;  // each +1 or -1

  int index() const { return (c1 < 0 ? 2 : 0) | (c2 < 0 ? 1 : 0); }
  static MessageBits from_index(int idx) {
    return MessageBits{(idx & 2) ? -1 : +1, (idx & 1) ? -1 : +1};
  }
};

SharedPair sample_shared_pair(RandomStream& rng);

// Encoder: c_i = sign(x . lambda_i) for the input Bloch vector x.
// sign(0) = +1 throughout.
MessageBits two_bit_encode(const BlochVector& x, const SharedPair& shared);

// Decoder: outputs sign(y . (c1 lambda1 + c2 lambda2)) for the measurement
// Bloch vector y; +1 is reported as outcome "phi", -1 as "phi orthogonal".
int two_bit_decode(const BlochVector& y, const MessageBits& msg, const SharedPair& shared);

struct SimulationResult {
  double frequency = 0.0;       // empirical P(outcome +1)
  double born = 0.0;            // |<psi|phi>|^2
  double standard_error = 0.0;  // binomial
  std::uint64_t trials = 0;
  std::uint64_t plus_count = 0;
};

// Run the protocol on (psi, phi) for the given number of trials.  Blocked and
// substreamed exactly like monte_carlo_cap_volume; bit-identical for every
// thread count.
SimulationResult two_bit_simulate(const PureState& psi, const PureState& phi,
                                  std::uint64_t trials, const RandomStream& rng,
                                  int threads = 1);

// ---- Tabulated protocols ----------------------------------------------------

class ProtocolValidationError : public std::runtime_error {
 public:
  ProtocolValidationError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;  // JSON pointer-ish locator of the offending field
};

struct SharedValue {
  std::string label;
  double weight = 0.0;
};

// A finite-shared-randomness protocol table.  Indexing conventions:
//   encoder[X][state][k]       = rho(message k | shared X, input state)
//   decoder[X][k][measurement] = P(outcome +1 | shared X, message k, measurement)
struct TabulatedProtocol {
  std::size_t dimension = 0;
  std::vector<PureState> states;
  std::vector<PureState> measurements;
  std::vector<SharedValue> shared;
  std::size_t message_count = 0;
  std::vector<std::vector<std::vector<double>>> encoder;
  std::vector<std::vector<std::vector<double>>> decoder;
  std::optional<std::vector<double>> support_weights;  // per state, optional

  std::size_t n_states() const { return states.size(); }
  std::size_t n_measurements() const { return measurements.size(); }
  std::size_t n_shared() const { return shared.size(); }

  // Model prediction P(outcome +1 | state s, measurement m), averaging the
  // encoder/decoder chain over the shared values.
  double model_probability(std::size_t s, std::size_t m) const;

  // Structural + probability-law validation (Eq. 8 style constraints).
  // Throws ProtocolValidationError naming the first offending field.
  void validate() const;

  static TabulatedProtocol from_json(const json& j);
  static TabulatedProtocol load(const std::string& path);
  json to_json() const;
  void save(const std::string& path) const;
};

// ---- Audits -----------------------------------------------------------------

// Support set S_{X,k}: states that emit message k with positive probability
// under shared value X.  Probabilities <= eps_supp are treated as zero.
struct SupportSet {
  std::size_t shared_index = 0;
  std::size_t message = 0;
  std::vector<std::size_t> members;
};

std::vector<SupportSet> support_sets(const TabulatedProtocol& p, double eps_supp = 1e-12);

struct Lemma1Violation {
  std::size_t shared_index = 0;
  std::size_t message = 0;
  std::size_t state_a = 0, state_b = 0;
  double overlap = 0.0;  // |<a|b>|
};

struct Lemma1Report {
  bool pass = true;
  double tolerance = 0.0;
  std::vector<Lemma1Violation> violations;
};

// Scans every support set for an orthogonal pair (|<a|b>| <= tol).  A correct
// protocol must not have any: a message whose support contains orthogonal
// states cannot reproduce quantum predictions exactly.
Lemma1Report lemma1_check(const TabulatedProtocol& p, double tol_orth = 1e-9,
                          double eps_supp = 1e-12);

enum class CheckStatus { Pass, Fail, Warning };

struct CoverageReport {
  CheckStatus status = CheckStatus::Pass;
  double tolerance = 0.0;
  // Sum over messages of the support-weight mass of S_{X,k}, per shared X.
  std::vector<double> totals;
  bool used_support_weights = false;  // false -> uniform weights, Warning at best
};

// Eq. 14-style coverage: for each shared value, the support sets' weights
// must total (at least) the whole space.  With declared support_weights the
// check passes/fails on |total - 1| <= tolerance (total > 1 + tolerance is
// allowed: supports may overlap); without them the fractional count of
// covered states is reported and the status is Warning unless it fails.
CoverageReport coverage_check(const TabulatedProtocol& p, double tolerance = 1e-9,
                              double eps_supp = 1e-12);

struct MessageBoundReport {
  bool pass = false;
  std::uint64_t messages = 0;   // R
  double volume = 0.0;          // V_N or U_N
  double product = 0.0;         // R * volume; must be >= 1
  double bits_used = 0.0;       // log2 R
  double bits_required = 0.0;   // -log2 volume
};

// Eq. 15: R messages can cover the state space only if R * volume >= 1.
MessageBoundReport message_bound_check(std::uint64_t messages, std::uint64_t dim,
                                       CapKind kind);

struct PairDeviation {
  std::size_t state = 0, measurement = 0;
  double model = 0.0, quantum = 0.0, deviation = 0.0;
};

struct EquivalenceReport {
  bool pass = true;
  double tolerance = 0.0;
  double max_deviation = 0.0;
  std::vector<PairDeviation> flagged;  // pairs with deviation > tolerance
};

// Exact audit: model_probability against Born probabilities for every
// (state, measurement) pair.
EquivalenceReport verify_equivalence(const TabulatedProtocol& p, double tolerance = 1e-9);

struct McPairResult {
  std::size_t pair_index = 0;
  double frequency = 0.0, born = 0.0, deviation = 0.0, standard_error = 0.0;
};

struct McEquivalenceReport {
  bool pass = true;
  double tolerance = 0.0;
  double max_deviation = 0.0;
  std::vector<McPairResult> pairs;
};

// Monte Carlo audit of the executable two-bit protocol on explicit qubit
// pairs: empirical frequency vs Born probability, flagged against tolerance.
McEquivalenceReport verify_equivalence(
    const std::vector<std::pair<PureState, PureState>>& pairs,
    std::uint64_t trials, const RandomStream& rng, double tolerance,
    int threads = 1);

}  // namespace capsim
