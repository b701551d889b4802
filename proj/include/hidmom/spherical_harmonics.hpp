#pragma once

#include <cmath>
#include <complex>

#include "hidmom/legendre.hpp"

namespace hidmom {

/// Y_lm(theta, phi), orthonormal on the sphere, Condon-Shortley phase
/// (Y_11 = -sqrt(3/8pi) sin(theta) e^{i phi}). The phase convention is
/// load-bearing: every signed momentum and hidden-momentum result in this
/// library is tied to it.
inline std::complex<double> spherical_harmonic(int l, int m, double theta, double phi) {
  const double plm = normalized_plm(l, m, std::cos(theta));
  return plm * std::exp(std::complex<double>(0.0, m * phi));
}

}  // namespace hidmom
