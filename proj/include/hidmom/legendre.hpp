#pragma once

#include <cmath>
#include <stdexcept>

namespace hidmom {

/// Fully normalized associated Legendre values at u = cos(theta), with the
/// Condon-Shortley phase folded in:
///
///   plm(u) * e^{i m phi} = Y_lm(theta, phi),   integral |Y_lm|^2 dOmega = 1.
///
/// The sign convention matters: it fixes the sign of every y- and
/// phi-sensitive matrix element downstream. All members are evaluated
/// through the "reduced" function q_lm = plm / sin^|m|(theta), which is a
/// polynomial in u, so the pole limits are exact:
///   plm_over_sin = plm / sin(theta)  (finite for |m| >= 1; reported as 0
///                                     for m = 0, where every use site
///                                     carries a factor m),
///   dplm_dtheta  = d(plm)/d(theta).
struct AngularFactors {
  double plm = 0.0;
  double dplm_dtheta = 0.0;
  double plm_over_sin = 0.0;
};

namespace detail {

// Reduced recurrence: q_l = plm / sin^m with m >= 0. Returns q_l and q_{l-1}
// (zero when l == m). Start value q_m^m carries the Condon-Shortley (-1)^m.
struct ReducedPair {
  double q = 0.0;
  double q_prev = 0.0;
};

inline ReducedPair reduced_assoc_legendre(int l, int m, double u) {
  constexpr double inv_sqrt_4pi = 0.28209479177387814;  // 1/sqrt(4 pi)
  double qmm = inv_sqrt_4pi;
  for (int k = 1; k <= m; ++k) {
    qmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k));
  }
  if (l == m) return {qmm, 0.0};

  double q_prev = qmm;
  double q = u * std::sqrt(2.0 * m + 3.0) * qmm;
  for (int k = m + 2; k <= l; ++k) {
    const double ak = std::sqrt((4.0 * k * k - 1.0) / (double(k) * k - double(m) * m));
    const double ak1 =
        std::sqrt((4.0 * (k - 1.0) * (k - 1.0) - 1.0) / ((k - 1.0) * (k - 1.0) - double(m) * m));
    const double next = ak * (u * q - q_prev / ak1);
    q_prev = q;
    q = next;
  }
  return {q, q_prev};
}

}  // namespace detail

inline AngularFactors angular_factors(int l, int m, double u) {
  if (l < 0 || std::abs(m) > l || std::abs(u) > 1.0) {
    throw std::invalid_argument("angular_factors: need 0 <= |m| <= l and |u| <= 1");
  }
  const int am = std::abs(m);
  const double sign = (m < 0 && (am & 1)) ? -1.0 : 1.0;
  const auto [q, q_prev] = detail::reduced_assoc_legendre(l, am, u);

  const double s = std::sqrt(std::max(0.0, (1.0 - u) * (1.0 + u)));
  // c_l couples degrees l and l-1 in the normalized derivative relation
  //   (1 - u^2) d(plm)/du = -l u plm_l + c_l plm_{l-1},
  // so d(plm)/d(theta) = (l u plm_l - c_l plm_{l-1}) / sin(theta).
  const double cl =
      (l > am) ? std::sqrt((double(l) * l - double(am) * am) * (2.0 * l + 1.0) / (2.0 * l - 1.0))
               : 0.0;

  AngularFactors out;
  if (am == 0) {
    out.plm = q;
    out.plm_over_sin = 0.0;
    if (s == 0.0) {
      out.dplm_dtheta = 0.0;  // exact pole limit for m = 0
    } else {
      out.dplm_dtheta = (l * u * q - cl * q_prev) / s;
    }
  } else {
    double s_pow = 1.0;  // sin^{am-1}
    for (int k = 1; k < am; ++k) s_pow *= s;
    out.plm = sign * q * s_pow * s;
    out.plm_over_sin = sign * q * s_pow;
    out.dplm_dtheta = sign * s_pow * (l * u * q - cl * q_prev);
  }
  return out;
}

/// plm alone (normalized, Condon-Shortley).
inline double normalized_plm(int l, int m, double u) { return angular_factors(l, m, u).plm; }

}  // namespace hidmom
