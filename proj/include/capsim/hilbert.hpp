#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "capsim/rng.hpp"

namespace capsim {

using cdouble = std::complex<double>;

// Unit vector in R^3.
struct BlochVector {
  double x = 0.0, y = 0.0, z = 0.0;

  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const;
  BlochVector operator+(const BlochVector& o) const { return {x + o.x, y + o.y, z + o.z}; }
  BlochVector operator-() const { return {-x, -y, -z}; }
  BlochVector scaled(double s) const { return {s * x, s * y, s * z}; }
};

// Normalized state vector in C^N, N >= 2.  The constructor rejects vectors
// whose norm deviates from 1 by more than 1e-9; use `normalized` to build a
// state from an arbitrary nonzero vector.
class PureState {
 public:
  explicit PureState(std::vector<cdouble> amplitudes);
  PureState(std::initializer_list<cdouble> amplitudes)
      : PureState(std::vector<cdouble>(amplitudes)) {}

  static PureState normalized(std::vector<cdouble> amplitudes);
  static PureState basis(std::size_t dim, std::size_t k);

  std::size_t dimension() const { return amps_.size(); }
  const cdouble& operator[](std::size_t i) const { return amps_[i]; }
  const std::vector<cdouble>& amplitudes() const { return amps_; }

 private:
  struct already_normalized {};
  PureState(std::vector<cdouble> amplitudes, already_normalized);

  std::vector<cdouble> amps_;
};

// <a|b> = sum_i conj(a_i) b_i.  Dimensions must match.
cdouble inner_product(const PureState& a, const PureState& b);

// |<psi|phi>|^2.
double born_probability(const PureState& psi, const PureState& phi);

bool is_orthogonal(const PureState& a, const PureState& b, double tol = 1e-9);
bool is_orthogonal(std::span<const double> a, std::span<const double> b, double tol = 1e-9);

// Qubit <-> Bloch sphere.  bloch_from_state maps |0> to (0,0,1) and |+> to
// (1,0,0); state_from_bloch is its right inverse up to global phase.
BlochVector bloch_from_state(const PureState& psi);
PureState state_from_bloch(const BlochVector& b);

// The unique (up to phase) qubit orthogonal to psi.
PureState orthogonal_qubit(const PureState& psi);

// Haar-uniform state in C^dim: normalized vector of iid complex Gaussians.
PureState haar_random_state(std::size_t dim, RandomStream& rng);

// Uniform point on the unit sphere S^{dim-1} in R^dim, dim >= 2.
std::vector<double> uniform_sphere_point(std::size_t dim, RandomStream& rng);

}  // namespace capsim
