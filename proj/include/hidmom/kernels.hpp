#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace hidmom {

enum class Axis { X, Y, Z };

inline const char* axis_name(Axis a) {
  switch (a) {
    case Axis::X: return "x";
    case Axis::Y: return "y";
    case Axis::Z: return "z";
  }
  return "?";
}

/// Which radial function of the ket a term multiplies.
enum class RadialFactor { Value, Derivative };

/// Which angular function of the ket a term multiplies. PlmOverSin is the
/// reduced plm/sin(theta); every term using it carries a factor m_ket, so
/// the m = 0 case is an exact zero rather than a singularity.
enum class AngularFactor { Plm, DPlmDTheta, PlmOverSin };

/// One separable integrand term of an operator sandwich:
///   coeff [* m_ket] * r^radial_power * radial(ket)
///       * u^cos_power * sin^sin_power(theta) * angular(ket) * e^{i phi_shift phi}
/// against conj(psi_bra) and the r^2 dr du dphi measure. The phi integral is
/// analytic (2 pi when m_bra = m_ket + phi_shift, else exactly zero).
struct KernelTerm {
  std::complex<double> coeff;
  int radial_power = 0;
  RadialFactor radial = RadialFactor::Value;
  int cos_power = 0;
  int sin_power = 0;
  AngularFactor angular = AngularFactor::Plm;
  int phi_shift = 0;
  bool times_ket_m = false;
};

struct OperatorKernel {
  std::vector<KernelTerm> terms;

  [[nodiscard]] int max_radial_power() const {
    int p = 0;
    for (const auto& t : terms) p = std::max(p, t.radial_power);
    return p;
  }

  void validate() const {
    for (const auto& t : terms) {
      if (t.sin_power < 0 || t.cos_power < 0) {
        throw std::invalid_argument("operator kernel: negative angular powers");
      }
      if (t.radial_power < -3 || t.radial_power > 3) {
        throw std::invalid_argument("operator kernel: unsupported radial power");
      }
      if (std::abs(t.phi_shift) > 2) {
        throw std::invalid_argument("operator kernel: unsupported phi harmonic");
      }
      if (t.angular == AngularFactor::PlmOverSin && !t.times_ket_m) {
        throw std::invalid_argument("operator kernel: plm/sin term without its m factor");
      }
    }
  }
};

inline OperatorKernel unit_kernel() {
  return {{KernelTerm{1.0}}};
}

namespace detail {
// coefficient of e^{i q phi} in cos(phi) or sin(phi)
inline std::complex<double> cos_phi_coeff(int /*q*/) { return {0.5, 0.0}; }
inline std::complex<double> sin_phi_coeff(int q) { return {0.0, q > 0 ? -0.5 : 0.5}; }
}  // namespace detail

/// Multiplication by the coordinate x, y or z (as a function, applied after
/// whatever the kernel already does to the ket).
inline OperatorKernel multiply_position(const OperatorKernel& k, Axis axis) {
  OperatorKernel out;
  for (const auto& t : k.terms) {
    if (axis == Axis::Z) {
      KernelTerm z = t;
      z.radial_power += 1;
      z.cos_power += 1;
      out.terms.push_back(z);
      continue;
    }
    // x = r sin cos(phi), y = r sin sin(phi): two phi harmonics each
    for (const int q : {+1, -1}) {
      KernelTerm s = t;
      s.coeff *= (axis == Axis::X) ? detail::cos_phi_coeff(q) : detail::sin_phi_coeff(q);
      s.radial_power += 1;
      s.sin_power += 1;
      s.phi_shift += q;
      out.terms.push_back(s);
    }
  }
  return out;
}

inline OperatorKernel multiply_radial_power(OperatorKernel k, int power) {
  for (auto& t : k.terms) t.radial_power += power;
  return k;
}

inline OperatorKernel scale_kernel(OperatorKernel k, std::complex<double> factor) {
  for (auto& t : k.terms) t.coeff *= factor;
  return k;
}

inline OperatorKernel add_kernels(OperatorKernel a, const OperatorKernel& b) {
  a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
  return a;
}

inline OperatorKernel position_kernel(Axis axis) { return multiply_position(unit_kernel(), axis); }

inline OperatorKernel inv_r_kernel() { return multiply_radial_power(unit_kernel(), -1); }

/// x/r^3, y/r^3 or z/r^3.
inline OperatorKernel pos_over_r3_kernel(Axis axis) {
  return multiply_radial_power(position_kernel(axis), -3);
}

/// p_axis = -i d/d(axis) applied to the ket, expanded in spherical
/// derivatives:
///   d/dx = sin cos(phi) d/dr + (cos cos(phi)/r) d/dtheta - (sin(phi)/(r sin)) d/dphi
///   d/dy = sin sin(phi) d/dr + (cos sin(phi)/r) d/dtheta + (cos(phi)/(r sin)) d/dphi
///   d/dz = cos d/dr - (sin/r) d/dtheta
/// with d/dphi -> i m_ket on the basis functions.
inline OperatorKernel momentum_kernel(Axis axis) {
  OperatorKernel out;
  const std::complex<double> mi{0.0, -1.0};  // the -i of the momentum operator

  if (axis == Axis::Z) {
    KernelTerm dr;
    dr.coeff = mi;
    dr.radial = RadialFactor::Derivative;
    dr.cos_power = 1;
    out.terms.push_back(dr);

    KernelTerm dtheta;
    dtheta.coeff = -mi;
    dtheta.radial_power = -1;
    dtheta.sin_power = 1;
    dtheta.angular = AngularFactor::DPlmDTheta;
    out.terms.push_back(dtheta);
    return out;
  }

  const bool is_x = (axis == Axis::X);
  for (const int q : {+1, -1}) {
    const std::complex<double> trig =
        is_x ? detail::cos_phi_coeff(q) : detail::sin_phi_coeff(q);

    KernelTerm dr;  // sin(theta) trig(phi) d/dr
    dr.coeff = mi * trig;
    dr.radial = RadialFactor::Derivative;
    dr.sin_power = 1;
    dr.phi_shift = q;
    out.terms.push_back(dr);

    KernelTerm dtheta;  // (cos(theta) trig(phi)/r) d/dtheta
    dtheta.coeff = mi * trig;
    dtheta.radial_power = -1;
    dtheta.cos_power = 1;
    dtheta.angular = AngularFactor::DPlmDTheta;
    dtheta.phi_shift = q;
    out.terms.push_back(dtheta);

    // the d/dphi piece: -sin(phi) for x, +cos(phi) for y, times i m_ket
    const std::complex<double> other =
        is_x ? -detail::sin_phi_coeff(q) : detail::cos_phi_coeff(q);
    KernelTerm dphi;
    dphi.coeff = mi * other * std::complex<double>{0.0, 1.0};  // i from d/dphi
    dphi.radial_power = -1;
    dphi.angular = AngularFactor::PlmOverSin;
    dphi.phi_shift = q;
    dphi.times_ket_m = true;
    out.terms.push_back(dphi);
  }
  return out;
}

/// p^2 applied pointwise to an eigenstate ket: p^2 |b> = 2 (E_b + 1/r) |b>.
inline OperatorKernel p2_pointwise_kernel(double ket_energy) {
  OperatorKernel out;
  KernelTerm energy;
  energy.coeff = 2.0 * ket_energy;
  out.terms.push_back(energy);
  KernelTerm coulomb;
  coulomb.coeff = 2.0;
  coulomb.radial_power = -1;
  out.terms.push_back(coulomb);
  return out;
}

}  // namespace hidmom
