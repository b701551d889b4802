#pragma once

namespace hidmom {

/// Hartree atomic units: hbar = m_e = e = a0 = e^2/(4 pi eps0) = 1.
/// Energies are in hartree, the Bohr magneton is 1/2, and the speed of
/// light equals the inverse fine-structure constant. c is kept as a knob
/// so that quantities claimed to be c-independent can be tested as such.
struct UnitSystem {
  double c = 137.035999;

  static constexpr double hbar = 1.0;
  static constexpr double electron_mass = 1.0;
  static constexpr double elementary_charge = 1.0;
  static constexpr double bohr_radius = 1.0;
  static constexpr double coulomb_constant = 1.0;  // e^2/(4 pi eps0)
  static constexpr double hartree = 1.0;
  static constexpr double bohr_magneton = 0.5;     // e hbar / (2 m_e)
};

/// SI values of one atomic unit (CODATA 2018), carried in output metadata
/// so downstream consumers can convert.
namespace si {
inline constexpr double length_m_per_au = 5.29177210903e-11;
inline constexpr double energy_J_per_au = 4.3597447222071e-18;
inline constexpr double velocity_m_s_per_au = 2.18769126364e6;
inline constexpr double momentum_kg_m_s_per_au = 1.99285191288e-24;
inline constexpr double electric_field_V_m_per_au = 5.14220674763e11;
inline constexpr double time_s_per_au = 2.4188843265857e-17;
}  // namespace si

}  // namespace hidmom
