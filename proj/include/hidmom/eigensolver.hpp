#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace hidmom {

struct SymmetricEigenResult {
  std::vector<double> eigenvalues;                 // ascending
  std::vector<std::vector<double>> eigenvectors;   // eigenvectors[k] pairs with eigenvalues[k]
};

/// Cyclic Jacobi diagonalization of a small dense real symmetric matrix.
/// Deterministic (fixed sweep order), which the reproducibility contract of
/// the CLI depends on. Eigenvectors are normalized and sign-fixed so the
/// largest-magnitude component is positive.
inline SymmetricEigenResult eigen_symmetric(std::vector<std::vector<double>> a,
                                            int max_sweeps = 100) {
  const std::size_t n = a.size();
  for (const auto& row : a) {
    if (row.size() != n) throw std::invalid_argument("eigen_symmetric: matrix must be square");
  }

  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a[i][j]));
  if (scale == 0.0) scale = 1.0;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a[p][q]));
    if (off <= 1e-15 * scale) break;
    if (sweep == max_sweeps - 1) {
      throw std::runtime_error("eigen_symmetric: Jacobi sweeps did not converge");
    }

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) <= 1e-18 * scale) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a[i][i] < a[j][j]; });

  SymmetricEigenResult out;
  out.eigenvalues.resize(n);
  out.eigenvectors.assign(n, std::vector<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a[order[k]][order[k]];
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors[k][i] = v[i][order[k]];
  }
  for (auto& vec : out.eigenvectors) {
    std::size_t imax = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(vec[i]) > std::abs(vec[imax])) imax = i;
    if (vec[imax] < 0.0)
      for (auto& x : vec) x = -x;
  }
  return out;
}

/// Rebuild each (near-)degenerate eigenvalue block on a canonical basis:
/// Gram-Schmidt of the block projector applied to the standard basis vectors
/// in index order. The span is untouched; the representative basis becomes
/// independent of the rotation angles the Jacobi sweeps happened to end on.
inline void canonicalize_degenerate_subspaces(SymmetricEigenResult& r, double tol) {
  const std::size_t n = r.eigenvalues.size();
  std::size_t start = 0;
  while (start < n) {
    std::size_t stop = start + 1;
    while (stop < n && std::abs(r.eigenvalues[stop] - r.eigenvalues[start]) <= tol) ++stop;
    const std::size_t size = stop - start;
    if (size >= 2) {
      std::vector<std::vector<double>> basis;
      for (std::size_t e = 0; e < n && basis.size() < size; ++e) {
        // project the e-th standard basis vector onto the block span
        std::vector<double> w(n, 0.0);
        for (std::size_t k = start; k < stop; ++k) {
          const double dot = r.eigenvectors[k][e];
          for (std::size_t i = 0; i < n; ++i) w[i] += dot * r.eigenvectors[k][i];
        }
        for (const auto& u : basis) {
          double dot = 0.0;
          for (std::size_t i = 0; i < n; ++i) dot += u[i] * w[i];
          for (std::size_t i = 0; i < n; ++i) w[i] -= dot * u[i];
        }
        double norm = 0.0;
        for (double x : w) norm += x * x;
        norm = std::sqrt(norm);
        if (norm > 1e-6) {
          for (auto& x : w) x /= norm;
          std::size_t imax = 0;
          for (std::size_t i = 1; i < n; ++i)
            if (std::abs(w[i]) > std::abs(w[imax])) imax = i;
          if (w[imax] < 0.0)
            for (auto& x : w) x = -x;
          basis.push_back(std::move(w));
        }
      }
      if (basis.size() != size) {
        throw std::logic_error("canonicalize_degenerate_subspaces: block basis incomplete");
      }
      for (std::size_t k = 0; k < size; ++k) r.eigenvectors[start + k] = basis[k];
    }
    start = stop;
  }
}

}  // namespace hidmom
