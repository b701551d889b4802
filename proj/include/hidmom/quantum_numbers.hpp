#pragma once

#include <compare>
#include <stdexcept>
#include <string>

namespace hidmom {

/// Label (n, l, m) of a hydrogen bound state.
/// Valid when n >= 1, 0 <= l <= n-1, -l <= m <= l.
struct QuantumNumbers {
  int n = 1;
  int l = 0;
  int m = 0;

  friend auto operator<=>(const QuantumNumbers&, const QuantumNumbers&) = default;

  [[nodiscard]] bool valid() const {
    return n >= 1 && l >= 0 && l <= n - 1 && m >= -l && m <= l;
  }

  [[nodiscard]] std::string str() const {
    return std::to_string(n) + "," + std::to_string(l) + "," + std::to_string(m);
  }
};

inline void require_valid(QuantumNumbers qn) {
  if (!qn.valid()) {
    throw std::invalid_argument("invalid quantum numbers (" + qn.str() + ")");
  }
}

/// Bound-state energy -1/(2n^2) hartree.
inline double energy(QuantumNumbers qn) {
  require_valid(qn);
  const double n = static_cast<double>(qn.n);
  return -0.5 / (n * n);
}

struct BasisState {
  QuantumNumbers qn;
  double energy;
};

inline BasisState basis_state(QuantumNumbers qn) { return {qn, energy(qn)}; }

/// Basis truncation defaults: the principal quantum number of any state fed
/// to the engines. 20 reproduces the reference configuration; 30 is a hard
/// cap past which the double-precision recurrences are not validated.
inline constexpr int default_n_max = 20;
inline constexpr int hard_n_cap = 30;

inline void require_within_cap(QuantumNumbers qn, int n_cap) {
  require_valid(qn);
  if (qn.n > n_cap) {
    throw std::invalid_argument("state (" + qn.str() + ") exceeds the configured n cap " +
                                std::to_string(n_cap));
  }
}

}  // namespace hidmom
