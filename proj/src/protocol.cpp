#include "capsim/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "capsim/parallel.hpp"

namespace capsim {

namespace {

constexpr std::uint64_t kBlockSize = 65536;

int sign_of(double v) { return v < 0.0 ? -1 : +1; }  // sign(0) = +1

BlochVector uniform_bloch(RandomStream& rng) {
  const auto p = uniform_sphere_point(3, rng);
  return BlochVector{p[0], p[1], p[2]};
}

std::uint64_t simulate_block(const BlochVector& x, const BlochVector& y,
                             std::uint64_t n, RandomStream sub) {
  std::uint64_t plus = 0;
  for (std::uint64_t t = 0; t < n; ++t) {
    const SharedPair shared = sample_shared_pair(sub);
    const MessageBits msg = two_bit_encode(x, shared);
    if (two_bit_decode(y, msg, shared) > 0) ++plus;
  }
  return plus;
}

}  // namespace

SharedPair sample_shared_pair(RandomStream& rng) {
  SharedPair s;
  s.lambda1 = uniform_bloch(rng);
  s.lambda2 = uniform_bloch(rng);
  return s;
}

MessageBits two_bit_encode(const BlochVector& x, const SharedPair& shared) {
  return MessageBits{sign_of(x.dot(shared.lambda1)), sign_of(x.dot(shared.lambda2))};
}

int two_bit_decode(const BlochVector& y, const MessageBits& msg, const SharedPair& shared) {
  const BlochVector combined =
      shared.lambda1.scaled(static_cast<double>(msg.c1)) +
      shared.lambda2.scaled(static_cast<double>(msg.c2));
  return sign_of(y.dot(combined));
}

SimulationResult two_bit_simulate(const PureState& psi, const PureState& phi,
                                  std::uint64_t trials, const RandomStream& rng,
                                  int threads) {
  if (psi.dimension() != 2 || phi.dimension() != 2) {
    throw std::invalid_argument("two_bit_simulate: states must be qubits");
  }
  if (trials == 0) throw std::invalid_argument("two_bit_simulate: trials must be positive");
  const BlochVector x = bloch_from_state(psi);
  const BlochVector y = bloch_from_state(phi);
  const std::uint64_t n_blocks = (trials + kBlockSize - 1) / kBlockSize;
  const auto plus_per_block = map_blocks<std::uint64_t>(
      static_cast<std::size_t>(n_blocks), threads, [&](std::size_t b) {
        const std::uint64_t lo = static_cast<std::uint64_t>(b) * kBlockSize;
        const std::uint64_t n = std::min(kBlockSize, trials - lo);
        return simulate_block(x, y, n, rng.substream(b));
      });
  std::uint64_t plus = 0;
  for (const auto p : plus_per_block) plus += p;
  SimulationResult r;
  r.trials = trials;
  r.plus_count = plus;
  r.frequency = static_cast<double>(plus) / static_cast<double>(trials);
  r.born = born_probability(psi, phi);
  r.standard_error =
      std::sqrt(r.frequency * (1.0 - r.frequency) / static_cast<double>(trials));
  return r;
}

// ---- Tabulated protocol core --------------------------------------------------

double TabulatedProtocol::model_probability(std::size_t s, std::size_t m) const {
  double p = 0.0;
  for (std::size_t x = 0; x < shared.size(); ++x) {
    double inner = 0.0;
    for (std::size_t k = 0; k < message_count; ++k) {
      inner += encoder[x][s][k] * decoder[x][k][m];
    }
    p += shared[x].weight * inner;
  }
  return p;
}

void TabulatedProtocol::validate() const {
  const double tol = 1e-9;
  const double slack = 1e-12;  // tolerated excursion outside [0, 1]
  auto idx = [](const std::string& base, std::size_t i) {
    return base + "[" + std::to_string(i) + "]";
  };

  if (dimension < 2) {
    throw ProtocolValidationError("dimension", "must be at least 2");
  }
  if (states.empty()) throw ProtocolValidationError("states", "must be non-empty");
  if (measurements.empty()) throw ProtocolValidationError("measurements", "must be non-empty");
  if (shared.empty()) throw ProtocolValidationError("shared", "must be non-empty");
  if (message_count < 1) throw ProtocolValidationError("message_count", "must be at least 1");

  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].dimension() != dimension) {
      throw ProtocolValidationError(idx("states", i), "dimension mismatch");
    }
  }
  for (std::size_t i = 0; i < measurements.size(); ++i) {
    if (measurements[i].dimension() != dimension) {
      throw ProtocolValidationError(idx("measurements", i), "dimension mismatch");
    }
  }

  double total_weight = 0.0;
  for (std::size_t x = 0; x < shared.size(); ++x) {
    if (shared[x].weight < -slack || !std::isfinite(shared[x].weight)) {
      throw ProtocolValidationError(idx("shared", x) + ".weight", "must be non-negative");
    }
    total_weight += shared[x].weight;
  }
  if (std::abs(total_weight - 1.0) > tol) {
    throw ProtocolValidationError("shared", "weights must sum to 1");
  }

  if (encoder.size() != shared.size()) {
    throw ProtocolValidationError("encoder", "must have one table per shared value");
  }
  if (decoder.size() != shared.size()) {
    throw ProtocolValidationError("decoder", "must have one table per shared value");
  }
  for (std::size_t x = 0; x < shared.size(); ++x) {
    if (encoder[x].size() != states.size()) {
      throw ProtocolValidationError(idx("encoder", x), "must have one row per state");
    }
    for (std::size_t s = 0; s < states.size(); ++s) {
      const auto& row = encoder[x][s];
      const std::string where = idx(idx("encoder", x), s);
      if (row.size() != message_count) {
        throw ProtocolValidationError(where, "row length must equal message_count");
      }
      double sum = 0.0;
      for (std::size_t k = 0; k < message_count; ++k) {
        if (!(row[k] >= -slack && row[k] <= 1.0 + slack)) {
          throw ProtocolValidationError(idx(where, k), "probability out of [0, 1]");
        }
        sum += row[k];
      }
      if (std::abs(sum - 1.0) > tol) {
        throw ProtocolValidationError(where, "message distribution must sum to 1");
      }
    }
    if (decoder[x].size() != message_count) {
      throw ProtocolValidationError(idx("decoder", x), "must have one row per message");
    }
    for (std::size_t k = 0; k < message_count; ++k) {
      const auto& row = decoder[x][k];
      const std::string where = idx(idx("decoder", x), k);
      if (row.size() != measurements.size()) {
        throw ProtocolValidationError(where, "row length must equal measurement count");
      }
      for (std::size_t m = 0; m < row.size(); ++m) {
        if (!(row[m] >= -slack && row[m] <= 1.0 + slack)) {
          throw ProtocolValidationError(idx(where, m), "probability out of [0, 1]");
        }
      }
    }
  }

  if (support_weights) {
    if (support_weights->size() != states.size()) {
      throw ProtocolValidationError("support_weights", "must have one entry per state");
    }
    for (std::size_t i = 0; i < support_weights->size(); ++i) {
      const double w = (*support_weights)[i];
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw ProtocolValidationError(idx("support_weights", i), "must be non-negative");
      }
    }
  }
}

// ---- Audits -------------------------------------------------------------------

std::vector<SupportSet> support_sets(const TabulatedProtocol& p, double eps_supp) {
  std::vector<SupportSet> sets;
  sets.reserve(p.n_shared() * p.message_count);
  for (std::size_t x = 0; x < p.n_shared(); ++x) {
    for (std::size_t k = 0; k < p.message_count; ++k) {
      SupportSet set;
      set.shared_index = x;
      set.message = k;
      for (std::size_t s = 0; s < p.n_states(); ++s) {
        if (p.encoder[x][s][k] > eps_supp) set.members.push_back(s);
      }
      sets.push_back(std::move(set));
    }
  }
  return sets;
}

Lemma1Report lemma1_check(const TabulatedProtocol& p, double tol_orth, double eps_supp) {
  Lemma1Report report;
  report.tolerance = tol_orth;
  for (const auto& set : support_sets(p, eps_supp)) {
    for (std::size_t i = 0; i + 1 < set.members.size(); ++i) {
      for (std::size_t j = i + 1; j < set.members.size(); ++j) {
        const std::size_t a = set.members[i], b = set.members[j];
        const double overlap = std::abs(inner_product(p.states[a], p.states[b]));
        if (overlap <= tol_orth) {
          report.violations.push_back(
              Lemma1Violation{set.shared_index, set.message, a, b, overlap});
        }
      }
    }
  }
  report.pass = report.violations.empty();
  return report;
}

CoverageReport coverage_check(const TabulatedProtocol& p, double tolerance,
                              double eps_supp) {
  CoverageReport report;
  report.tolerance = tolerance;
  report.used_support_weights = p.support_weights.has_value();
  report.totals.resize(p.n_shared(), 0.0);

  for (const auto& set : support_sets(p, eps_supp)) {
    double mass = 0.0;
    for (const std::size_t s : set.members) {
      mass += report.used_support_weights
                  ? (*p.support_weights)[s]
                  : 1.0 / static_cast<double>(p.n_states());
    }
    report.totals[set.shared_index] += mass;
  }

  bool all_cover = true;
  for (const double t : report.totals) {
    if (t < 1.0 - tolerance) all_cover = false;
  }
  if (!all_cover) {
    report.status = CheckStatus::Fail;
  } else {
    report.status =
        report.used_support_weights ? CheckStatus::Pass : CheckStatus::Warning;
  }
  return report;
}

MessageBoundReport message_bound_check(std::uint64_t messages, std::uint64_t dim,
                                       CapKind kind) {
  if (messages == 0) {
    throw std::invalid_argument("message_bound_check: message count must be positive");
  }
  MessageBoundReport report;
  report.messages = messages;
  report.volume = kind == CapKind::Real ? real_cap_volume_beta(dim)
                                        : complex_cap_volume_closed(dim);
  report.product = static_cast<double>(messages) * report.volume;
  report.bits_used = std::log2(static_cast<double>(messages));
  report.bits_required = kind == CapKind::Real ? -log2_real_cap_volume(dim)
                                               : static_cast<double>(dim) - 1.0;
  // Boundary cases (e.g. R = 2 against a half-sphere cap) sit exactly at
  // product = 1; tolerate rounding in the volume evaluation there.
  report.pass = report.product >= 1.0 - 1e-9;
  return report;
}

EquivalenceReport verify_equivalence(const TabulatedProtocol& p, double tolerance) {
  EquivalenceReport report;
  report.tolerance = tolerance;
  for (std::size_t s = 0; s < p.n_states(); ++s) {
    for (std::size_t m = 0; m < p.n_measurements(); ++m) {
      const double model = p.model_probability(s, m);
      const double quantum = born_probability(p.states[s], p.measurements[m]);
      const double dev = std::abs(model - quantum);
      report.max_deviation = std::max(report.max_deviation, dev);
      if (dev > tolerance) {
        report.flagged.push_back(PairDeviation{s, m, model, quantum, dev});
      }
    }
  }
  report.pass = report.flagged.empty();
  return report;
}

McEquivalenceReport verify_equivalence(
    const std::vector<std::pair<PureState, PureState>>& pairs,
    std::uint64_t trials, const RandomStream& rng, double tolerance, int threads) {
  McEquivalenceReport report;
  report.tolerance = tolerance;
  report.pairs.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto sim =
        two_bit_simulate(pairs[i].first, pairs[i].second, trials, rng.substream(i), threads);
    McPairResult r;
    r.pair_index = i;
    r.frequency = sim.frequency;
    r.born = sim.born;
    r.deviation = std::abs(sim.frequency - sim.born);
    r.standard_error = sim.standard_error;
    report.max_deviation = std::max(report.max_deviation, r.deviation);
    if (r.deviation > tolerance) report.pass = false;
    report.pairs.push_back(r);
  }
  return report;
}

}  // namespace capsim
