#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "hidmom/kernels.hpp"
#include "hidmom/legendre.hpp"
#include "hidmom/quadrature.hpp"
#include "hidmom/quantum_numbers.hpp"
#include "hidmom/radial.hpp"
#include "hidmom/wavefunction.hpp"

namespace hidmom {

namespace detail {

inline double int_pow(double x, int p) {
  if (p == 0) return 1.0;
  double out = 1.0;
  const double base = p > 0 ? x : 1.0 / x;
  for (int i = 0; i < std::abs(p); ++i) out *= base;
  return out;
}

inline int ket_sin_power(AngularFactor f, int m_ket) {
  const int am = std::abs(m_ket);
  switch (f) {
    case AngularFactor::Plm: return am;
    case AngularFactor::DPlmDTheta: return am == 0 ? 1 : am - 1;
    case AngularFactor::PlmOverSin: return am - 1;
  }
  return 0;
}

}  // namespace detail

/// <a| kernel |b> over the full 3D measure. The phi integral is analytic:
/// a term contributes only when m_a = m_b + phi_shift, otherwise it is an
/// exact zero and no quadrature runs. The remaining (r, u) integrand is
/// polynomial x e^{-scale r} by construction (asserted through the sin-power
/// parity check), so the auto-sized Gauss rules are exact to roundoff.
inline std::complex<double> sandwich_integral(QuantumNumbers a, QuantumNumbers b,
                                              const OperatorKernel& kernel, RuleCache& rules,
                                              QuadratureConfig config = {}) {
  require_valid(a);
  require_valid(b);
  kernel.validate();

  const int p_max = std::max(0, kernel.max_radial_power());
  const int radial_count = (a.n + b.n + p_max + 4 + 1) / 2 + config.radial_margin;
  const double scale = 1.0 / a.n + 1.0 / b.n;
  const int angular_count = a.l + b.l + config.angular_margin;

  const RadialRule& rrule = rules.radial(radial_count, scale);
  const AngularRule& arule = rules.angular(angular_count);
  const std::size_t nr = rrule.nodes.size();
  const std::size_t nu = arule.nodes.size();

  // Per-call tabulation of the bra/ket factors, shared across terms.
  std::vector<ScaledRadial> rad_a(nr), rad_b(nr);
  for (std::size_t i = 0; i < nr; ++i) {
    rad_a[i] = radial_scaled(a.n, a.l, rrule.nodes[i]);
    rad_b[i] = radial_scaled(b.n, b.l, rrule.nodes[i]);
  }
  std::vector<double> plm_a(nu);
  std::vector<AngularFactors> ang_b(nu);
  for (std::size_t j = 0; j < nu; ++j) {
    plm_a[j] = normalized_plm(a.l, a.m, arule.nodes[j]);
    ang_b[j] = angular_factors(b.l, b.m, arule.nodes[j]);
  }

  constexpr double two_pi = 2.0 * M_PI;
  std::vector<double> radial_buf(nr), angular_buf(nu);
  std::vector<std::complex<double>> term_values;
  term_values.reserve(kernel.terms.size());

  for (const KernelTerm& term : kernel.terms) {
    if (a.m != b.m + term.phi_shift) continue;      // phi selection rule
    if (term.times_ket_m && b.m == 0) continue;     // term carries a factor m_ket

    const int total_sin =
        std::abs(a.m) + detail::ket_sin_power(term.angular, b.m) + term.sin_power;
    if (total_sin % 2 != 0) {
      throw std::logic_error("sandwich_integral: non-polynomial angular integrand");
    }

    for (std::size_t i = 0; i < nr; ++i) {
      const double fb =
          term.radial == RadialFactor::Value ? rad_b[i].value : rad_b[i].ddr;
      radial_buf[i] = rrule.weights[i] * rad_a[i].value * fb *
                      detail::int_pow(rrule.nodes[i], 2 + term.radial_power);
    }
    const double radial_integral = pairwise_sum(radial_buf);

    for (std::size_t j = 0; j < nu; ++j) {
      const double u = arule.nodes[j];
      const double s = std::sqrt(std::max(0.0, (1.0 - u) * (1.0 + u)));
      double fb = 0.0;
      switch (term.angular) {
        case AngularFactor::Plm: fb = ang_b[j].plm; break;
        case AngularFactor::DPlmDTheta: fb = ang_b[j].dplm_dtheta; break;
        case AngularFactor::PlmOverSin: fb = ang_b[j].plm_over_sin; break;
      }
      angular_buf[j] = arule.weights[j] * plm_a[j] * detail::int_pow(u, term.cos_power) *
                       detail::int_pow(s, term.sin_power) * fb;
    }
    const double angular_integral = pairwise_sum(angular_buf);

    std::complex<double> coeff = term.coeff;
    if (term.times_ket_m) coeff *= static_cast<double>(b.m);
    term_values.push_back(coeff * (two_pi * radial_integral * angular_integral));
  }

  return pairwise_sum(term_values);
}

}  // namespace hidmom
