#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include "hidmom/legendre.hpp"
#include "hidmom/quantum_numbers.hpp"
#include "hidmom/radial.hpp"

namespace hidmom {

using Complex = std::complex<double>;

/// Spherical-frame gradient of a wavefunction:
///   (d/dr, (1/r) d/dtheta, (1/(r sin theta)) d/dphi) psi.
/// The third component is evaluated through the reduced Legendre function,
/// so points on the z axis are regular for every m (the |m| >= 2 components
/// vanish there, |m| = 1 has a finite limit). Only r = 0 is refused.
struct SphericalGradient {
  Complex d_dr;
  Complex d_dtheta_over_r;
  Complex d_dphi_over_r_sin;
};

struct StateAndGradient {
  Complex value;
  SphericalGradient gradient;
};

inline Complex eval_state(QuantumNumbers qn, double r, double theta, double phi) {
  require_valid(qn);
  const double radial = radial_wavefunction(qn.n, qn.l, r);
  const double plm = normalized_plm(qn.l, qn.m, std::cos(theta));
  return radial * plm * std::exp(Complex(0.0, qn.m * phi));
}

inline StateAndGradient eval_state_and_gradient(QuantumNumbers qn, double r, double theta,
                                                double phi) {
  require_valid(qn);
  if (r <= 0.0) {
    throw std::domain_error("eval_state_and_gradient: gradient is singular at r = 0");
  }
  const RadialDerivatives rad = radial_derivatives(qn.n, qn.l, r);
  const AngularFactors ang = angular_factors(qn.l, qn.m, std::cos(theta));
  const Complex phase = std::exp(Complex(0.0, qn.m * phi));

  StateAndGradient out;
  out.value = rad.value * ang.plm * phase;
  out.gradient.d_dr = rad.ddr * ang.plm * phase;
  out.gradient.d_dtheta_over_r = rad.value * ang.dplm_dtheta * phase / r;
  out.gradient.d_dphi_over_r_sin =
      Complex(0.0, double(qn.m)) * rad.value * ang.plm_over_sin * phase / r;
  return out;
}

/// Finite expansion over unperturbed bound states. Keys are unique by
/// construction; iteration order is the (n, l, m) lexicographic order, which
/// downstream sums rely on for reproducibility.
class Superposition {
 public:
  using Terms = std::map<QuantumNumbers, Complex>;

  Superposition() = default;

  static Superposition eigenstate(QuantumNumbers qn) {
    require_valid(qn);
    Superposition s;
    s.terms_[qn] = 1.0;
    return s;
  }

  void add(QuantumNumbers qn, Complex coefficient) {
    require_valid(qn);
    auto [it, inserted] = terms_.emplace(qn, coefficient);
    if (!inserted) it->second += coefficient;
  }

  void set(QuantumNumbers qn, Complex coefficient) {
    require_valid(qn);
    terms_[qn] = coefficient;
  }

  [[nodiscard]] Complex coefficient(QuantumNumbers qn) const {
    const auto it = terms_.find(qn);
    return it == terms_.end() ? Complex(0.0) : it->second;
  }

  [[nodiscard]] double norm_squared() const {
    double total = 0.0;
    for (const auto& [qn, c] : terms_) total += std::norm(c);
    return total;
  }

  [[nodiscard]] std::size_t size() const { return terms_.size(); }
  [[nodiscard]] bool empty() const { return terms_.empty(); }
  [[nodiscard]] auto begin() const { return terms_.begin(); }
  [[nodiscard]] auto end() const { return terms_.end(); }

  Superposition& operator*=(Complex factor) {
    for (auto& [qn, c] : terms_) c *= factor;
    return *this;
  }

  Superposition& operator+=(const Superposition& other) {
    for (const auto& [qn, c] : other.terms_) add(qn, c);
    return *this;
  }

  [[nodiscard]] int max_n() const {
    int n = 0;
    for (const auto& [qn, c] : terms_) n = std::max(n, qn.n);
    return n;
  }

 private:
  Terms terms_;
};

inline Superposition operator*(Complex factor, Superposition s) {
  s *= factor;
  return s;
}

}  // namespace hidmom
