#include "capsim/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace capsim {

namespace {

double norm_squared(const std::vector<cdouble>& v) {
  double s = 0.0;
  for (const auto& a : v) s += std::norm(a);
  return s;
}

}  // namespace

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

PureState::PureState(std::vector<cdouble> amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() < 2) {
    throw std::invalid_argument("PureState: dimension must be at least 2");
  }
  const double n = std::sqrt(norm_squared(amps_));
  if (std::abs(n - 1.0) > 1e-9) {
    throw std::invalid_argument("PureState: vector is not normalized");
  }
}

PureState::PureState(std::vector<cdouble> amplitudes, already_normalized)
    : amps_(std::move(amplitudes)) {}

PureState PureState::normalized(std::vector<cdouble> amplitudes) {
  if (amplitudes.size() < 2) {
    throw std::invalid_argument("PureState: dimension must be at least 2");
  }
  const double n = std::sqrt(norm_squared(amplitudes));
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("PureState: cannot normalize zero or non-finite vector");
  }
  for (auto& a : amplitudes) a /= n;
  return PureState(std::move(amplitudes), already_normalized{});
}

PureState PureState::basis(std::size_t dim, std::size_t k) {
  if (dim < 2) throw std::invalid_argument("PureState::basis: dimension must be at least 2");
  if (k >= dim) throw std::invalid_argument("PureState::basis: index out of range");
  std::vector<cdouble> v(dim, cdouble{0.0, 0.0});
  v[k] = cdouble{1.0, 0.0};
  return PureState(std::move(v), already_normalized{});
}

cdouble inner_product(const PureState& a, const PureState& b) {
  if (a.dimension() != b.dimension()) {
    throw std::invalid_argument("inner_product: dimension mismatch");
  }
  cdouble s{0.0, 0.0};
  for (std::size_t i = 0; i < a.dimension(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double born_probability(const PureState& psi, const PureState& phi) {
  return std::norm(inner_product(psi, phi));
}

bool is_orthogonal(const PureState& a, const PureState& b, double tol) {
  return std::abs(inner_product(a, b)) <= tol;
}

bool is_orthogonal(std::span<const double> a, std::span<const double> b, double tol) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("is_orthogonal: dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return std::abs(s) <= tol;
}

BlochVector bloch_from_state(const PureState& psi) {
  if (psi.dimension() != 2) {
    throw std::invalid_argument("bloch_from_state: state must be a qubit");
  }
  const cdouble a = psi[0], b = psi[1];
  const cdouble ab = std::conj(a) * b;
  return BlochVector{2.0 * ab.real(), 2.0 * ab.imag(), std::norm(a) - std::norm(b)};
}

PureState state_from_bloch(const BlochVector& v) {
  if (std::abs(v.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("state_from_bloch: vector is not on the unit sphere");
  }
  // theta/phi parametrization: |psi> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
  const double z = std::clamp(v.z, -1.0, 1.0);
  const double theta = std::acos(z);
  const double phi = std::atan2(v.y, v.x);
  const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  return PureState::normalized({cdouble{c, 0.0}, std::polar(s, phi)});
}

PureState orthogonal_qubit(const PureState& psi) {
  if (psi.dimension() != 2) {
    throw std::invalid_argument("orthogonal_qubit: state must be a qubit");
  }
  // (-conj b, conj a): negation and conjugation are exact in IEEE arithmetic
  // and |b|^2 + |a|^2 reproduces psi's own norm bitwise, so the amplitudes
  // must not be rescaled -- the Bloch vector of the result is then the exact
  // negation of bloch(psi).
  return PureState(std::vector<cdouble>{-std::conj(psi[1]), std::conj(psi[0])});
}

PureState haar_random_state(std::size_t dim, RandomStream& rng) {
  if (dim < 2) throw std::invalid_argument("haar_random_state: dimension must be at least 2");
  std::vector<cdouble> v(dim);
  for (auto& a : v) a = cdouble{rng.normal(), rng.normal()};
  return PureState::normalized(std::move(v));
}

std::vector<double> uniform_sphere_point(std::size_t dim, RandomStream& rng) {
  if (dim < 2) throw std::invalid_argument("uniform_sphere_point: dimension must be at least 2");
  std::vector<double> v(dim);
  double n2;
  do {
    n2 = 0.0;
    for (auto& x : v) {
      x = rng.normal();
      n2 += x * x;
    }
  } while (n2 == 0.0);
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& x : v) x *= inv;
  return v;
}

}  // namespace capsim
