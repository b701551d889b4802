#pragma once

#include <cmath>
#include <stdexcept>

#include "hidmom/quantum_numbers.hpp"

namespace hidmom {

/// Generalized Laguerre polynomial L_k^alpha(x) by upward recurrence in the
/// degree. Stable for the degrees used here (k <= n-1 <= 29).
inline double laguerre(int k, int alpha, double x) {
  if (k < 0 || alpha < 0) throw std::invalid_argument("laguerre: k, alpha must be >= 0");
  if (k == 0) return 1.0;
  double lkm1 = 1.0;
  double lk = 1.0 + alpha - x;
  for (int j = 2; j <= k; ++j) {
    const double next = ((2.0 * j - 1.0 + alpha - x) * lk - (j - 1.0 + alpha) * lkm1) / j;
    lkm1 = lk;
    lk = next;
  }
  return lk;
}

namespace detail {

// Normalization N_nl with the factorial ratio accumulated as a running
// product of reciprocals; avoids forming (n+l)! directly.
inline double radial_normalization(int n, int l) {
  const double two_over_n = 2.0 / n;
  double norm_sq = two_over_n * two_over_n * two_over_n / (2.0 * n);
  for (int k = n - l; k <= n + l; ++k) norm_sq /= k;
  return std::sqrt(norm_sq);
}

}  // namespace detail

/// R_nl(r) with the exponential envelope stripped:
///   value = R_nl(r) e^{+r/n},  ddr = R'_nl(r) e^{+r/n}.
/// Both are polynomials in r; quadrature against the e^{-scale r} weight of
/// a Gauss-Laguerre rule uses these so no large exponentials are formed.
struct ScaledRadial {
  double value = 0.0;
  double ddr = 0.0;
};

inline ScaledRadial radial_scaled(int n, int l, double r) {
  require_valid({n, l, 0});
  if (r < 0.0) throw std::invalid_argument("radial_scaled: r must be >= 0");
  const int k = n - l - 1;
  const int alpha = 2 * l + 1;
  const double x = 2.0 * r / n;
  const double norm = detail::radial_normalization(n, l);

  double xl = 1.0;  // x^l
  for (int j = 0; j < l; ++j) xl *= x;

  const double lag = laguerre(k, alpha, x);
  const double dlag = (k >= 1) ? -laguerre(k - 1, alpha + 1, x) : 0.0;

  ScaledRadial out;
  out.value = norm * xl * lag;
  // d/dr = (2/n) d/dx on the polynomial part, then subtract value/n for the
  // stripped envelope derivative: (S' - S/n).
  double dpoly = xl * dlag;
  if (l >= 1) {
    double xlm1 = 1.0;
    for (int j = 0; j < l - 1; ++j) xlm1 *= x;
    dpoly += l * xlm1 * lag;
  }
  out.ddr = norm * ((2.0 / n) * dpoly - xl * lag / n);
  return out;
}

/// Normalized hydrogen radial function, integral R^2 r^2 dr = 1:
///   R_nl(r) = N_nl (2r/n)^l e^{-r/n} L^{2l+1}_{n-l-1}(2r/n).
inline double radial_wavefunction(int n, int l, double r) {
  const ScaledRadial s = radial_scaled(n, l, r);
  return s.value * std::exp(-r / n);
}

/// R, R', R'' at one radius. R'' is what the radial Schroedinger residual
/// check needs; it is assembled from the Laguerre derivative identities
/// dL_k^a = -L_{k-1}^{a+1}, d2L_k^a = L_{k-2}^{a+2}.
struct RadialDerivatives {
  double value = 0.0;
  double ddr = 0.0;
  double d2dr2 = 0.0;
};

inline RadialDerivatives radial_derivatives(int n, int l, double r) {
  require_valid({n, l, 0});
  if (r < 0.0) throw std::invalid_argument("radial_derivatives: r must be >= 0");
  const int k = n - l - 1;
  const int alpha = 2 * l + 1;
  const double x = 2.0 * r / n;
  const double norm = detail::radial_normalization(n, l);
  const double env = std::exp(-r / n);
  const double dx = 2.0 / n;

  const double lag = laguerre(k, alpha, x);
  const double dlag = (k >= 1) ? -laguerre(k - 1, alpha + 1, x) : 0.0;
  const double d2lag = (k >= 2) ? laguerre(k - 2, alpha + 2, x) : 0.0;

  double xl = 1.0, xlm1 = 1.0, xlm2 = 1.0;
  for (int j = 0; j < l; ++j) xl *= x;
  for (int j = 0; j < l - 1; ++j) xlm1 *= x;
  for (int j = 0; j < l - 2; ++j) xlm2 *= x;

  const double s = xl * lag;
  double sp = xl * dlag;
  if (l >= 1) sp += l * xlm1 * lag;
  double spp = xl * d2lag;
  if (l >= 1) spp += 2.0 * l * xlm1 * dlag;
  if (l >= 2) spp += l * (l - 1.0) * xlm2 * lag;

  // chain rule in r, then the envelope
  const double S = s, S1 = dx * sp, S2 = dx * dx * spp;
  RadialDerivatives out;
  out.value = norm * S * env;
  out.ddr = norm * (S1 - S / n) * env;
  out.d2dr2 = norm * (S2 - 2.0 * S1 / n + S / (n * n)) * env;
  return out;
}

}  // namespace hidmom
