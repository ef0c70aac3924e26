#pragma once

#include <cstdint>
#include <vector>

#include "capsim/rng.hpp"

namespace capsim {

enum class CapKind { Real, Complex };

// Surface area W_d of the unit d-sphere S^d embedded in R^{d+1}:
// W_d = 2 pi^{(d+1)/2} / Gamma((d+1)/2).  W_1 = 2 pi, W_2 = 4 pi.
double sphere_surface_area(std::uint64_t d);

// ---- Real double cap -------------------------------------------------------
//
// V_d is the normalized measure of the set {x in S^{d-1} : |x . a| > 1/sqrt2}
// for a fixed axis a: two antipodal caps of polar half-angle pi/4.
//
// real_cap_volume:       direct quadrature of the colatitude integral
//                        (ratio of sin^{d-2} integrals).
// real_cap_volume_beta:  independent closed-form route via the regularized
//                        incomplete beta function, V_d = I_{1/2}((d-1)/2, 1/2).
// log2_real_cap_volume:  log-domain evaluation, exact to ~1e-12 relative in
//                        the log, usable far beyond the underflow point of
//                        the linear-domain routines (d in the thousands).
double real_cap_volume(std::uint64_t d);
double real_cap_volume_beta(std::uint64_t d);
double log2_real_cap_volume(std::uint64_t d);

// Asymptotic form V_N ~ 2^{-N/2+2} / sqrt(2 pi N) and its log2.
double asymptotic_real_cap_volume(std::uint64_t N);
double log2_asymptotic_real_cap_volume(std::uint64_t N);

// ---- Complex double cap ----------------------------------------------------
//
// U_N is the normalized measure of {x in CP^{N-1} : |<x|s>|^2 > 1/2} for a
// fixed state s.  Closed form U_N = 2^{1-N}.
//
// complex_cap_volume:            quadrature over t = |<x|s>|^2 using the
//                                Beta(1, N-1) overlap density (N-1)(1-t)^{N-2}.
// complex_cap_volume_closed:     exact 2^{1-N}.
// complex_cap_volume_decomposed: hypersphere decomposition of S^{2N-1}: the
//                                cap is a solid of revolution over the polar
//                                angle theta with cross-section areas
//                                w_1(cos th) w_{2N-3}(sin th), normalized by
//                                the doubled-parametrization total mass.
double complex_cap_volume(std::uint64_t N);
double complex_cap_volume_closed(std::uint64_t N);
double complex_cap_volume_decomposed(std::uint64_t N);

// ---- Monte Carlo -----------------------------------------------------------

struct MonteCarloEstimate {
  double estimate = 0.0;        // hit fraction
  double standard_error = 0.0;  // binomial standard error
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
};

// Hit-or-miss estimate of V_dim (Real: dim = ambient real dimension >= 2) or
// U_dim (Complex: dim = Hilbert dimension >= 2).  Trials are processed in
// fixed 65536-sample blocks, each on its own RNG substream; the estimate is
// bit-identical for every thread count (threads: 1 = serial reference,
// 0 = OpenMP default, k = k OpenMP threads).
MonteCarloEstimate monte_carlo_cap_volume(CapKind kind, std::uint64_t dim,
                                          std::uint64_t trials,
                                          const RandomStream& rng,
                                          int threads = 1);

// ---- Lower-bound table (communication bounds, bits) ------------------------

struct BoundsRow {
  unsigned n = 0;                  // qubit count
  std::uint64_t N = 0;             // Hilbert dimension 2^n
  double log2_VN = 0.0;            // log2 of the real cap volume V_N
  double real_bound_bits = 0.0;    // -log2 V_N
  std::uint64_t complex_bound_bits = 0;   // 2^n - 1
  double theorem2_bits = 0.0;      // 2^n log2(theta + eps), theta = (2/sqrt3)^sqrt2
  std::uint64_t entanglement_bits = 0;    // 2^n - 1 - n
  double fw_log2 = 0.0;            // -N log2(1.203)
  double raig_log2 = 0.0;          // -N log2(1.225)
  double ref_2_pow_n_over_3 = 0.0; // 2^{n/3}
};

// Coefficient log2 theta with theta = (2/sqrt3)^sqrt2 (~0.2934).
double theorem2_coefficient(double epsilon);

// One row of the bounds table for n qubits (1 <= n <= 62).
BoundsRow lower_bounds(unsigned n, double epsilon = 1e-6);
std::vector<BoundsRow> lower_bounds_table(unsigned n_max, double epsilon = 1e-6);

}  // namespace capsim
