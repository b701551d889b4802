#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <iomanip>
#include <map>
#include <ostream>
#include <shared_mutex>
#include <string>
#include <vector>

#include "hidmom/kernels.hpp"
#include "hidmom/quadrature.hpp"
#include "hidmom/quantum_numbers.hpp"
#include "hidmom/sandwich.hpp"
#include "hidmom/wavefunction.hpp"

namespace hidmom {

/// The operator sandwiches the hidden-momentum estimators need.
enum class OperatorKind { X, Y, Z, InvR, YOverR3, Py, XPy, SymInvRPy, P2, PyP2 };

inline const char* operator_kind_name(OperatorKind k) {
  switch (k) {
    case OperatorKind::X: return "x";
    case OperatorKind::Y: return "y";
    case OperatorKind::Z: return "z";
    case OperatorKind::InvR: return "inv_r";
    case OperatorKind::YOverR3: return "y_over_r3";
    case OperatorKind::Py: return "p_y";
    case OperatorKind::XPy: return "x_p_y";
    case OperatorKind::SymInvRPy: return "sym_inv_r_p_y";
    case OperatorKind::P2: return "p2";
    case OperatorKind::PyP2: return "p_y_p2";
  }
  return "?";
}

namespace detail {

enum class ElementOp : std::uint8_t {
  Pos,
  InvR,
  PosOverR3,
  P,          // commutator reduction i(E_a - E_b) <a|pos|b>
  PDirect,    // gradient-kernel quadrature
  InvRP,      // <a|(1/r) p_axis|b>, gradient quadrature
  SymInvRP,   // (1/r)p + p(1/r) = 2 (1/r)p + i pos/r^3
  PosP,       // <a|pos_ax1 p_ax2|b>
  P2,         // 2 (E_b delta_ab + <a|1/r|b>)
  P2Direct,   // pointwise p^2 |b> = 2(E_b + 1/r)|b>
  PP2,        // 2 E_b <p> + 2 <(1/r)p> + 2i <pos/r^3>
  PP2Direct,
};

struct ElementKey {
  QuantumNumbers a;
  QuantumNumbers b;
  ElementOp op;
  Axis ax1 = Axis::Y;
  Axis ax2 = Axis::Y;

  friend auto operator<=>(const ElementKey&, const ElementKey&) = default;
};

inline std::string element_op_name(ElementOp op, Axis ax1, Axis ax2) {
  switch (op) {
    case ElementOp::Pos: return axis_name(ax1);
    case ElementOp::InvR: return "inv_r";
    case ElementOp::PosOverR3: return std::string(axis_name(ax1)) + "_over_r3";
    case ElementOp::P: return std::string("p_") + axis_name(ax1);
    case ElementOp::PDirect: return std::string("p_") + axis_name(ax1) + "~direct";
    case ElementOp::InvRP: return std::string("inv_r_p_") + axis_name(ax1);
    case ElementOp::SymInvRP: return std::string("sym_inv_r_p_") + axis_name(ax1);
    case ElementOp::PosP: return std::string(axis_name(ax1)) + "_p_" + axis_name(ax2);
    case ElementOp::P2: return "p2";
    case ElementOp::P2Direct: return "p2~direct";
    case ElementOp::PP2: return std::string("p_") + axis_name(ax1) + "_p2";
    case ElementOp::PP2Direct: return std::string("p_") + axis_name(ax1) + "_p2~direct";
  }
  return "?";
}

}  // namespace detail

/// Matrix elements <a|O|b> in atomic units. Reduction identities are the
/// primary path; gradient-kernel quadrature backs the *_direct oracle
/// routes. Selection-rule-forbidden pairs short-circuit to an exact 0.0
/// before any numerics and are never stored. Computed entries are memoized;
/// Hermitian kinds are stored under the canonical (a <= b) orientation and
/// reconstructed by conjugation.
class ElementEngine {
 public:
  struct Config {
    int n_cap = default_n_max;
    QuadratureConfig quadrature;
  };

  ElementEngine() : ElementEngine(Config{}) {}
  explicit ElementEngine(Config cfg) : cfg_(cfg) {}

  [[nodiscard]] const Config& config() const { return cfg_; }

  Complex element(QuantumNumbers a, QuantumNumbers b, OperatorKind kind) {
    switch (kind) {
      case OperatorKind::X: return position(a, b, Axis::X);
      case OperatorKind::Y: return position(a, b, Axis::Y);
      case OperatorKind::Z: return position(a, b, Axis::Z);
      case OperatorKind::InvR: return inv_r(a, b);
      case OperatorKind::YOverR3: return pos_over_r3(a, b, Axis::Y);
      case OperatorKind::Py: return momentum(a, b, Axis::Y);
      case OperatorKind::XPy: return pos_p(a, b, Axis::X, Axis::Y);
      case OperatorKind::SymInvRPy: return sym_inv_r_p(a, b, Axis::Y);
      case OperatorKind::P2: return p2(a, b);
      case OperatorKind::PyP2: return p_p2(a, b, Axis::Y);
    }
    throw std::invalid_argument("element: unknown operator kind");
  }

  Complex position(QuantumNumbers a, QuantumNumbers b, Axis axis) {
    return get({a, b, detail::ElementOp::Pos, axis});
  }
  Complex inv_r(QuantumNumbers a, QuantumNumbers b) {
    return get({a, b, detail::ElementOp::InvR});
  }
  Complex pos_over_r3(QuantumNumbers a, QuantumNumbers b, Axis axis) {
    return get({a, b, detail::ElementOp::PosOverR3, axis});
  }
  Complex momentum(QuantumNumbers a, QuantumNumbers b, Axis axis) {
    return get({a, b, detail::ElementOp::P, axis});
  }
  Complex momentum_direct(QuantumNumbers a, QuantumNumbers b, Axis axis) {
    return get({a, b, detail::ElementOp::PDirect, axis});
  }
  Complex inv_r_p(QuantumNumbers a, QuantumNumbers b, Axis axis) {
    return get({a, b, detail::ElementOp::InvRP, axis});
  }
  Complex sym_inv_r_p(QuantumNumbers a, QuantumNumbers b, Axis axis) {
    return get({a, b, detail::ElementOp::SymInvRP, axis});
  }
  Complex pos_p(QuantumNumbers a, QuantumNumbers b, Axis pos_axis, Axis p_axis) {
    return get({a, b, detail::ElementOp::PosP, pos_axis, p_axis});
  }
  Complex p2(QuantumNumbers a, QuantumNumbers b) { return get({a, b, detail::ElementOp::P2}); }
  Complex p2_direct(QuantumNumbers a, QuantumNumbers b) {
    return get({a, b, detail::ElementOp::P2Direct});
  }
  Complex p_p2(QuantumNumbers a, QuantumNumbers b, Axis axis) {
    return get({a, b, detail::ElementOp::PP2, axis});
  }
  Complex p_p2_direct(QuantumNumbers a, QuantumNumbers b, Axis axis) {
    return get({a, b, detail::ElementOp::PP2Direct, axis});
  }

  struct VerifyResult {
    Complex reduction;
    Complex direct;
    double relative_gap = 0.0;
  };

  /// Reduction value vs the independent gradient-quadrature route.
  /// Only the kinds that have both strategies are accepted.
  VerifyResult verify_against_direct(QuantumNumbers a, QuantumNumbers b, OperatorKind kind) {
    Complex reduction, direct;
    switch (kind) {
      case OperatorKind::Py:
        reduction = momentum(a, b, Axis::Y);
        direct = momentum_direct(a, b, Axis::Y);
        break;
      case OperatorKind::P2:
        reduction = p2(a, b);
        direct = p2_direct(a, b);
        break;
      case OperatorKind::PyP2:
        reduction = p_p2(a, b, Axis::Y);
        direct = p_p2_direct(a, b, Axis::Y);
        break;
      default:
        throw std::invalid_argument("verify_against_direct: kind has a single strategy");
    }
    const double denom = std::max(std::abs(reduction), std::abs(direct));
    const double gap = denom < 1e-300 ? 0.0 : std::abs(reduction - direct) / denom;
    return {reduction, direct, gap};
  }

  /// <s| O |s> with a deterministic pair order and tree reduction.
  Complex expectation(const Superposition& s, OperatorKind kind) {
    return expectation_bilinear(s, s, [&](QuantumNumbers a, QuantumNumbers b) {
      return element(a, b, kind);
    });
  }

  /// <sa| O |sb> for any element functor (used for the cross terms of the
  /// time-evolved expectation values).
  template <typename ElementFn>
  Complex expectation_bilinear(const Superposition& sa, const Superposition& sb,
                               ElementFn&& element_fn) {
    std::vector<Complex> contribs;
    contribs.reserve(sa.size() * sb.size());
    for (const auto& [qa, ca] : sa) {
      for (const auto& [qb, cb] : sb) {
        const Complex e = element_fn(qa, qb);
        if (e != Complex(0.0)) contribs.push_back(std::conj(ca) * cb * e);
      }
    }
    return pairwise_sum(contribs);
  }

  /// Debug dump of every memoized entry:
  /// bra_n,bra_l,bra_m,ket_n,ket_l,ket_m,kind,re,im
  void dump_csv(std::ostream& os) const {
    os << "bra_n,bra_l,bra_m,ket_n,ket_l,ket_m,kind,re,im\n";
    const std::shared_lock lock(mutex_);
    os << std::setprecision(17);
    for (const auto& [key, value] : table_) {
      os << key.a.n << ',' << key.a.l << ',' << key.a.m << ',' << key.b.n << ',' << key.b.l
         << ',' << key.b.m << ',' << detail::element_op_name(key.op, key.ax1, key.ax2) << ','
         << value.real() << ',' << value.imag() << '\n';
    }
  }

  [[nodiscard]] std::size_t table_size() const {
    const std::shared_lock lock(mutex_);
    return table_.size();
  }

 private:
  static int delta_l(QuantumNumbers a, QuantumNumbers b) { return a.l - b.l; }
  static int delta_m(QuantumNumbers a, QuantumNumbers b) { return a.m - b.m; }

  static bool dipole_allowed(QuantumNumbers a, QuantumNumbers b, Axis axis) {
    if (std::abs(delta_l(a, b)) != 1) return false;
    const int dm = delta_m(a, b);
    return axis == Axis::Z ? dm == 0 : std::abs(dm) == 1;
  }

  static bool allowed(const detail::ElementKey& k) {
    using detail::ElementOp;
    const int dl = std::abs(delta_l(k.a, k.b));
    const int dm = delta_m(k.a, k.b);
    switch (k.op) {
      case ElementOp::Pos:
      case ElementOp::PosOverR3:
      case ElementOp::P:
      case ElementOp::PDirect:
      case ElementOp::InvRP:
      case ElementOp::SymInvRP:
      case ElementOp::PP2:
      case ElementOp::PP2Direct:
        return dipole_allowed(k.a, k.b, k.ax1);
      case ElementOp::InvR:
      case ElementOp::P2:
      case ElementOp::P2Direct:
        return dl == 0 && dm == 0;
      case ElementOp::PosP: {
        if (dl != 0 && dl != 2) return false;
        // phi harmonics of the two factors add up
        const bool z1 = k.ax1 == Axis::Z, z2 = k.ax2 == Axis::Z;
        if (z1 && z2) return dm == 0;
        if (z1 != z2) return std::abs(dm) == 1;
        return dm == 0 || std::abs(dm) == 2;
      }
    }
    return false;
  }

  static bool hermitian_canonical(detail::ElementOp op) {
    using detail::ElementOp;
    switch (op) {
      case ElementOp::Pos:
      case ElementOp::InvR:
      case ElementOp::PosOverR3:
      case ElementOp::P:
      case ElementOp::SymInvRP:
      case ElementOp::P2:
        return true;
      default:
        return false;
    }
  }

  Complex get(detail::ElementKey key) {
    require_within_cap(key.a, cfg_.n_cap);
    require_within_cap(key.b, cfg_.n_cap);
    if (!allowed(key)) return 0.0;
    if (hermitian_canonical(key.op) && key.b < key.a) {
      detail::ElementKey swapped = key;
      std::swap(swapped.a, swapped.b);
      return std::conj(get(swapped));
    }
    {
      const std::shared_lock lock(mutex_);
      const auto it = table_.find(key);
      if (it != table_.end()) return it->second;
    }
    const Complex value = compute(key);
    {
      const std::unique_lock lock(mutex_);
      table_.insert_or_assign(key, value);
    }
    return value;
  }

  Complex compute(const detail::ElementKey& k) {
    using detail::ElementOp;
    const Complex i_unit{0.0, 1.0};
    switch (k.op) {
      case ElementOp::Pos:
        return sandwich(k.a, k.b, position_kernel(k.ax1));
      case ElementOp::InvR:
        return sandwich(k.a, k.b, inv_r_kernel());
      case ElementOp::PosOverR3:
        return sandwich(k.a, k.b, pos_over_r3_kernel(k.ax1));
      case ElementOp::P:
        return i_unit * (energy(k.a) - energy(k.b)) * position(k.a, k.b, k.ax1);
      case ElementOp::PDirect:
        return sandwich(k.a, k.b, momentum_kernel(k.ax1));
      case ElementOp::InvRP:
        return sandwich(k.a, k.b, multiply_radial_power(momentum_kernel(k.ax1), -1));
      case ElementOp::SymInvRP:
        return 2.0 * inv_r_p(k.a, k.b, k.ax1) + i_unit * pos_over_r3(k.a, k.b, k.ax1);
      case ElementOp::PosP:
        return sandwich(k.a, k.b, multiply_position(momentum_kernel(k.ax2), k.ax1));
      case ElementOp::P2: {
        const double diag = (k.a == k.b) ? 2.0 * energy(k.b) : 0.0;
        return diag + 2.0 * inv_r(k.a, k.b);
      }
      case ElementOp::P2Direct:
        return sandwich(k.a, k.b, p2_pointwise_kernel(energy(k.b)));
      case ElementOp::PP2:
        return 2.0 * energy(k.b) * momentum(k.a, k.b, k.ax1) +
               2.0 * inv_r_p(k.a, k.b, k.ax1) + 2.0 * i_unit * pos_over_r3(k.a, k.b, k.ax1);
      case ElementOp::PP2Direct: {
        OperatorKernel kernel = scale_kernel(momentum_kernel(k.ax1), 2.0 * energy(k.b));
        kernel = add_kernels(std::move(kernel),
                             scale_kernel(multiply_radial_power(momentum_kernel(k.ax1), -1), 2.0));
        kernel = add_kernels(std::move(kernel),
                             scale_kernel(pos_over_r3_kernel(k.ax1), 2.0 * i_unit));
        return sandwich(k.a, k.b, kernel);
      }
    }
    throw std::logic_error("element compute: unhandled op");
  }

  Complex sandwich(QuantumNumbers a, QuantumNumbers b, const OperatorKernel& kernel) {
    return sandwich_integral(a, b, kernel, rules_, cfg_.quadrature);
  }

  Config cfg_;
  RuleCache rules_;
  mutable std::shared_mutex mutex_;
  std::map<detail::ElementKey, Complex> table_;
};

}  // namespace hidmom
