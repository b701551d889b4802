#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hidmom {

/// Deterministic pairwise (tree) reduction. Splitting points depend only on
/// the length, so the same inputs always reduce in the same order no matter
/// how the terms were produced.
template <typename T>
T pairwise_sum(std::span<const T> values) {
  if (values.empty()) return T{};
  if (values.size() <= 8) {
    T total = values[0];
    for (std::size_t i = 1; i < values.size(); ++i) total += values[i];
    return total;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& values) {
  return pairwise_sum(std::span<const T>(values));
}

/// Gauss-Laguerre rule mapped to the weight e^{-scale r} on (0, inf):
///   integral_0^inf f(r) e^{-scale r} dr = sum w_i f(nodes_i)
/// exactly for polynomial f up to exactness_degree = 2 count - 1.
struct RadialRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double scale = 1.0;
  int exactness_degree = 0;
};

/// Gauss-Legendre rule in u = cos(theta) on [-1, 1]; nodes are symmetric
/// about 0 and the weights sum to 2.
struct AngularRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int exactness_degree = 0;
};

namespace detail {

// Laguerre L_k(x) and L_{k-1}(x) for the Newton iteration.
inline std::pair<double, double> laguerre_pair(int k, double x) {
  double lm1 = 1.0, lk = 1.0 - x;
  if (k == 0) return {1.0, 0.0};
  for (int j = 2; j <= k; ++j) {
    const double next = ((2.0 * j - 1.0 - x) * lk - (j - 1.0) * lm1) / j;
    lm1 = lk;
    lk = next;
  }
  return {lk, lm1};
}

// Legendre P_k(x) and P_{k-1}(x).
inline std::pair<double, double> legendre_pair(int k, double x) {
  double pm1 = 1.0, pk = x;
  if (k == 0) return {1.0, 0.0};
  for (int j = 2; j <= k; ++j) {
    const double next = ((2.0 * j - 1.0) * x * pk - (j - 1.0) * pm1) / j;
    pm1 = pk;
    pk = next;
  }
  return {pk, pm1};
}

[[noreturn]] inline void newton_failure(const char* what, int count, int index, double last) {
  throw std::runtime_error(std::string(what) + ": Newton iteration failed to converge (count=" +
                           std::to_string(count) + ", node=" + std::to_string(index) +
                           ", last step=" + std::to_string(last) + ")");
}

}  // namespace detail

inline RadialRule gauss_laguerre(int count, double scale) {
  if (count < 1) throw std::invalid_argument("gauss_laguerre: count must be >= 1");
  if (!(scale > 0.0)) throw std::invalid_argument("gauss_laguerre: scale must be > 0");

  RadialRule rule;
  rule.scale = scale;
  rule.exactness_degree = 2 * count - 1;
  rule.nodes.resize(count);
  rule.weights.resize(count);

  double z = 0.0;
  for (int i = 0; i < count; ++i) {
    // Stroud-Secrest starting guesses, then Newton on L_count.
    if (i == 0) {
      z = 3.0 / (1.0 + 2.4 * count);
    } else if (i == 1) {
      z += 15.0 / (1.0 + 2.5 * count);
    } else {
      const double step = (1.0 + 2.55 * (i - 1)) / (1.9 * (i - 1));
      z += step * (z - rule.nodes[i - 2] * scale);
    }
    double delta = 1.0;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      const auto [lk, lm1] = detail::laguerre_pair(count, z);
      const double deriv = count * (lk - lm1) / z;
      delta = lk / deriv;
      z -= delta;
      if (std::abs(delta) <= 1e-14 * std::max(z, 1.0)) {
        converged = true;
        break;
      }
    }
    if (!converged) detail::newton_failure("gauss_laguerre", count, i, delta);

    const auto [lk, lm1] = detail::laguerre_pair(count, z);
    const double deriv = count * (lk - lm1) / z;
    const double weight = 1.0 / (z * deriv * deriv);
    rule.nodes[i] = z / scale;
    rule.weights[i] = weight / scale;
  }
  return rule;
}

inline AngularRule gauss_legendre(int count) {
  if (count < 1) throw std::invalid_argument("gauss_legendre: count must be >= 1");

  AngularRule rule;
  rule.exactness_degree = 2 * count - 1;
  rule.nodes.resize(count);
  rule.weights.resize(count);

  const int half = (count + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (count + 0.5));
    double delta = 1.0;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      const auto [pk, pm1] = detail::legendre_pair(count, z);
      const double deriv = count * (z * pk - pm1) / (z * z - 1.0);
      delta = pk / deriv;
      z -= delta;
      if (std::abs(delta) <= 1e-15) {
        converged = true;
        break;
      }
    }
    if (!converged) detail::newton_failure("gauss_legendre", count, i, delta);

    const auto [pk, pm1] = detail::legendre_pair(count, z);
    const double deriv = count * (z * pk - pm1) / (z * z - 1.0);
    const double weight = 2.0 / ((1.0 - z * z) * deriv * deriv);
    // mirror for exact symmetry about u = 0
    rule.nodes[i] = -z;
    rule.nodes[count - 1 - i] = z;
    rule.weights[i] = weight;
    rule.weights[count - 1 - i] = weight;
  }
  if (count % 2 == 1) rule.nodes[half - 1] = 0.0;
  return rule;
}

/// Quadrature sizing knobs. The counts the sandwich engine derives from the
/// state degrees are already exact; the margins absorb the negative radial
/// powers of the 1/r-type kernels and leave headroom for the degree-doubling
/// regression check.
struct QuadratureConfig {
  int radial_margin = 8;
  int angular_margin = 6;
};

/// Immutable rule cache; safe for concurrent lookups.
class RuleCache {
 public:
  const RadialRule& radial(int count, double scale) {
    const std::scoped_lock lock(mutex_);
    const auto key = std::make_pair(count, scale);
    auto it = radial_.find(key);
    if (it == radial_.end()) it = radial_.emplace(key, gauss_laguerre(count, scale)).first;
    return it->second;
  }

  const AngularRule& angular(int count) {
    const std::scoped_lock lock(mutex_);
    auto it = angular_.find(count);
    if (it == angular_.end()) it = angular_.emplace(count, gauss_legendre(count)).first;
    return it->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, double>, RadialRule> radial_;
  std::map<int, AngularRule> angular_;
};

}  // namespace hidmom
