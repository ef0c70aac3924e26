#include "capsim/capgeom.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "capsim/hilbert.hpp"
#include "capsim/parallel.hpp"
#include "capsim/quadrature.hpp"

namespace capsim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kBlockSize = 65536;

void require_dim(std::uint64_t d, const char* who) {
  if (d < 2) throw std::invalid_argument(std::string(who) + ": dimension must be at least 2");
}

// Integral of sin^m over [0, b], by quadrature.
double sin_power_integral(std::uint64_t m, double b) {
  return integrate([m](double x) { return std::pow(std::sin(x), static_cast<double>(m)); },
                   0.0, b);
}

// Monte Carlo kernel, one 65536-trial block: number of points of S^{dim-1}
// (real) or C^dim (complex) falling in the double cap around the first axis.
std::uint64_t cap_block_hits(CapKind kind, std::uint64_t dim, std::uint64_t n,
                             RandomStream sub) {
  std::uint64_t hits = 0;
  if (kind == CapKind::Real) {
    const std::size_t d = static_cast<std::size_t>(dim);
    std::vector<double> x(d);
    for (std::uint64_t t = 0; t < n; ++t) {
      x = uniform_sphere_point(d, sub);
      if (std::abs(x[0]) > std::numbers::sqrt2 / 2.0) ++hits;
    }
  } else {
    const std::size_t d = static_cast<std::size_t>(dim);
    for (std::uint64_t t = 0; t < n; ++t) {
      PureState psi = haar_random_state(d, sub);
      // Reference state |0>: overlap magnitude^2 is just |psi_0|^2.
      if (std::norm(psi[0]) > 0.5) ++hits;
    }
  }
  return hits;
}

}  // namespace

double sphere_surface_area(std::uint64_t d) {
  if (d < 1) throw std::invalid_argument("sphere_surface_area: d must be at least 1");
  const double a = 0.5 * static_cast<double>(d + 1);
  return 2.0 * std::exp(a * std::log(kPi) - std::lgamma(a));
}

// ---- Real double cap --------------------------------------------------------

double real_cap_volume(std::uint64_t d) {
  require_dim(d, "real_cap_volume");
  if (d == 2) return 0.5;  // two arcs of opening pi/2 out of 2 pi
  // Colatitude density on S^{d-1} is proportional to sin^{d-2}; the double
  // cap is the region within pi/4 of either pole.
  const std::uint64_t m = d - 2;
  return 2.0 * sin_power_integral(m, kPi / 4.0) / sin_power_integral(m, kPi);
}

double real_cap_volume_beta(std::uint64_t d) {
  require_dim(d, "real_cap_volume_beta");
  // Substituting t = sin^2(x) in the colatitude integral turns the cap
  // fraction into a regularized incomplete beta: V_d = I_{1/2}((d-1)/2, 1/2).
  return boost::math::ibeta(0.5 * static_cast<double>(d - 1), 0.5, 0.5);
}

double log2_real_cap_volume(std::uint64_t d) {
  require_dim(d, "log2_real_cap_volume");
  if (d == 2) return -1.0;
  const double m = static_cast<double>(d - 2);
  if (m > 1e9) {
    // Laplace endpoint/interior expansions; the O(1/m) corrections are below
    // double resolution here, and they dodge both the sub-ulp peak width in
    // the quadrature and the catastrophic cancellation of the lgamma
    // difference at this scale:
    //   integral_0^{pi/4} sin^m = 2^{-m/2}/m (1 + O(1/m))
    //   integral_0^{pi}   sin^m = sqrt(2 pi / m) (1 + O(1/m)).
    return 1.0 - 0.5 * m - std::log2(m) - 0.5 * std::log2(2.0 * kPi / m);
  }
  // Numerator: integral of sin^m over [0, pi/4], factored as
  // (1/sqrt2)^m * integral of (sqrt2 sin x)^m, whose integrand peaks at 1 at
  // the right endpoint, so the quadrature never underflows even for huge m.
  // The integrand decays like e^{-m u} at distance u from pi/4; beyond
  // u = 800/m it is below e^{-800} and contributes nothing representable, so
  // the domain is clipped there to keep the peak resolvable.
  const double lo = kPi / 4.0 - std::min(kPi / 4.0, 800.0 / std::max(m, 1.0));
  const double scaled = integrate(
      [m](double x) { return std::pow(std::numbers::sqrt2 * std::sin(x), m); },
      lo, kPi / 4.0);
  const double log2_numerator = -0.5 * m + std::log2(scaled);
  // Denominator: integral of sin^m over [0, pi] = sqrt(pi) Gamma((m+1)/2) / Gamma(m/2 + 1).
  const double log2_denominator =
      (0.5 * std::log(kPi) + std::lgamma(0.5 * (m + 1.0)) - std::lgamma(0.5 * m + 1.0)) /
      std::numbers::ln2;
  return 1.0 + log2_numerator - log2_denominator;
}

double asymptotic_real_cap_volume(std::uint64_t N) {
  require_dim(N, "asymptotic_real_cap_volume");
  return std::exp2(log2_asymptotic_real_cap_volume(N));
}

double log2_asymptotic_real_cap_volume(std::uint64_t N) {
  require_dim(N, "log2_asymptotic_real_cap_volume");
  const double n = static_cast<double>(N);
  return -0.5 * n + 2.0 - 0.5 * std::log2(2.0 * kPi * n);
}

// ---- Complex double cap -----------------------------------------------------

double complex_cap_volume(std::uint64_t N) {
  require_dim(N, "complex_cap_volume");
  // For Haar-random |x>, t = |<x|s>|^2 has density (N-1)(1-t)^{N-2} on [0,1];
  // the cap is t > 1/2.  Same endpoint-peak clipping as in
  // log2_real_cap_volume: mass beyond 800/(N-1) past t = 1/2 is below e^-800
  // of the peak.
  const double a = static_cast<double>(N - 1);
  const double hi = 0.5 + std::min(0.5, 800.0 / a);
  const double scaled =
      a * integrate([a](double t) { return std::pow(2.0 * (1.0 - t), a - 1.0); }, 0.5, hi);
  return scaled * std::ldexp(1.0, -(static_cast<int>(std::min<std::uint64_t>(N, 2000)) - 2));
}

double complex_cap_volume_closed(std::uint64_t N) {
  require_dim(N, "complex_cap_volume_closed");
  if (N >= 1076) return 0.0;  // below double underflow
  return std::ldexp(1.0, 1 - static_cast<int>(N));
}

double complex_cap_volume_decomposed(std::uint64_t N) {
  require_dim(N, "complex_cap_volume_decomposed");
  // Write |x> = e^{i a} cos(th) |s> + sin(th) |s_perp>, th in [0, pi/2].
  // Slicing S^{2N-1} by th gives cross sections that are a circle of radius
  // cos th (the phase against |s>) times a sphere S^{2N-3} of radius sin th,
  // so the slice mass is w_1(cos th) * w_{2N-3}(sin th) d th with
  // w_d(r) = W_d r^d.  The cap |<x|s>|^2 > 1/2 is th < pi/4.  This
  // parametrization covers S^{2N-1} twice (once per phase circle sign
  // convention), so the normalizing mass is 2 W_{2N-1} rather than W_{2N-1}:
  // with the naive prefactor 2/W_{2N-1} the N = 2 "volume" would come out
  // as 1.0 instead of the correct 1/2.
  const double w1 = sphere_surface_area(1);
  const double w_fiber = sphere_surface_area(2 * N - 3);
  const double w_total = sphere_surface_area(2 * N - 1);
  const double m = static_cast<double>(2 * N - 3);
  const double integral = integrate(
      [m](double th) { return std::cos(th) * std::pow(std::sin(th), m); }, 0.0,
      kPi / 4.0);
  return (w1 * w_fiber / (2.0 * w_total)) * 2.0 * integral;
}

// ---- Monte Carlo ------------------------------------------------------------

MonteCarloEstimate monte_carlo_cap_volume(CapKind kind, std::uint64_t dim,
                                          std::uint64_t trials,
                                          const RandomStream& rng, int threads) {
  require_dim(dim, "monte_carlo_cap_volume");
  if (trials == 0) throw std::invalid_argument("monte_carlo_cap_volume: trials must be positive");
  const std::uint64_t n_blocks = (trials + kBlockSize - 1) / kBlockSize;
  const auto hits_per_block = map_blocks<std::uint64_t>(
      static_cast<std::size_t>(n_blocks), threads, [&](std::size_t b) {
        const std::uint64_t lo = static_cast<std::uint64_t>(b) * kBlockSize;
        const std::uint64_t n = std::min(kBlockSize, trials - lo);
        return cap_block_hits(kind, dim, n, rng.substream(b));
      });
  std::uint64_t hits = 0;
  for (const auto h : hits_per_block) hits += h;
  MonteCarloEstimate est;
  est.trials = trials;
  est.hits = hits;
  est.estimate = static_cast<double>(hits) / static_cast<double>(trials);
  est.standard_error =
      std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(trials));
  return est;
}

// ---- Lower bounds -----------------------------------------------------------

double theorem2_coefficient(double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("theorem2_coefficient: epsilon must be positive");
  const double theta = std::pow(2.0 / std::sqrt(3.0), std::numbers::sqrt2);
  return std::log2(theta + epsilon);
}

BoundsRow lower_bounds(unsigned n, double epsilon) {
  if (n < 1 || n > 62) throw std::invalid_argument("lower_bounds: n must be in [1, 62]");
  if (!(epsilon > 0.0)) throw std::invalid_argument("lower_bounds: epsilon must be positive");
  BoundsRow row;
  row.n = n;
  row.N = std::uint64_t{1} << n;
  row.log2_VN = log2_real_cap_volume(row.N);
  row.real_bound_bits = -row.log2_VN;
  row.complex_bound_bits = row.N - 1;
  row.theorem2_bits = static_cast<double>(row.N) * theorem2_coefficient(epsilon);
  row.entanglement_bits = row.N - 1 - n;
  row.fw_log2 = -static_cast<double>(row.N) * std::log2(1.203);
  row.raig_log2 = -static_cast<double>(row.N) * std::log2(1.225);
  row.ref_2_pow_n_over_3 = std::exp2(static_cast<double>(n) / 3.0);
  return row;
}

std::vector<BoundsRow> lower_bounds_table(unsigned n_max, double epsilon) {
  if (n_max < 1) throw std::invalid_argument("lower_bounds_table: n_max must be at least 1");
  std::vector<BoundsRow> rows;
  rows.reserve(n_max);
  for (unsigned n = 1; n <= n_max; ++n) rows.push_back(lower_bounds(n, epsilon));
  return rows;
}

}  // namespace capsim
