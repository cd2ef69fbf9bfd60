#ifndef WSHIFT_LINALG_HPP
#define WSHIFT_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "wshift/detail/tridiagonal.hpp"
#include "wshift/errors.hpp"

namespace wshift {

/// Dense square matrix, row-major. Used for small symmetric moment matrices.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}

  static SymmetricMatrix identity(std::size_t n) {
    SymmetricMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static SymmetricMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    SymmetricMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) throw DomainError("matrix rows must be square");
      for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  double max_asymmetry() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
    return worst;
  }

  SymmetricMatrix& operator-=(const SymmetricMatrix& o) {
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }

  bool operator==(const SymmetricMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

/// D^{-1/2} M D^{-1/2} with D = diag(M). Congruence preserves inertia, so
/// PSD-ness is unchanged while entries of very different magnitude are brought
/// to a common scale. Needs a positive diagonal.
inline SymmetricMatrix unit_diagonal_scaling(const SymmetricMatrix& m) {
  SymmetricMatrix out(m.size());
  std::vector<double> d(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!(m(i, i) > 0.0)) throw DomainError("unit-diagonal scaling needs a positive diagonal");
    d[i] = 1.0 / std::sqrt(m(i, i));
  }
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) out(i, j) = m(i, j) * d[i] * d[j];
  return out;
}

struct CholeskyOutcome {
  bool psd = false;
  std::size_t rank = 0;  // pivots accepted above threshold
};

/// Semidefinite pivoted Cholesky (outer-product form, largest remaining
/// diagonal first). Stops when every remaining diagonal is <= threshold; the
/// matrix is declared PSD if the remaining Schur complement is then within
/// threshold of zero entrywise.
inline CholeskyOutcome pivoted_cholesky(SymmetricMatrix s, double threshold) {
  const std::size_t n = s.size();
  std::vector<std::size_t> remaining(n);
  for (std::size_t i = 0; i < n; ++i) remaining[i] = i;
  CholeskyOutcome out;
  while (!remaining.empty()) {
    auto piv_it = std::max_element(remaining.begin(), remaining.end(),
                                   [&](std::size_t x, std::size_t y) { return s(x, x) < s(y, y); });
    const std::size_t p = *piv_it;
    const double d = s(p, p);
    if (d <= threshold) {
      for (std::size_t x : remaining)
        for (std::size_t y : remaining)
          if (std::abs(s(x, y)) > threshold || s(x, x) < -threshold) return out;
      out.psd = true;
      return out;
    }
    remaining.erase(piv_it);
    ++out.rank;
    for (std::size_t x : remaining) {
      const double lx = s(x, p) / d;
      for (std::size_t y : remaining) s(x, y) -= lx * s(p, y);
    }
  }
  out.psd = true;
  return out;
}

/// Householder reduction to symmetric tridiagonal form followed by Sturm
/// bisection for the smallest eigenvalue.
inline double min_eigenvalue_householder(const SymmetricMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) throw DomainError("empty matrix");
  if (n == 1) return m(0, 0);
  SymmetricMatrix a = m;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double alpha = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) alpha += a(i, k) * a(i, k);
    alpha = std::sqrt(alpha);
    if (alpha == 0.0) continue;
    if (a(k + 1, k) > 0) alpha = -alpha;
    std::vector<double> v(n, 0.0);
    v[k + 1] = a(k + 1, k) - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = a(i, k);
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0.0) continue;
    // A <- H A H with H = I - 2 v v^T / (v^T v).
    std::vector<double> p(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) sum += a(i, j) * v[j];
      p[i] = 2.0 * sum / vnorm2;
    }
    double vp = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vp += v[i] * p[i];
    const double kcoef = vp / vnorm2;
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = p[i] - kcoef * v[i];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) -= q[i] * v[j] + v[i] * q[j];
  }
  std::vector<double> diag(n), off(n - 1);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i);
  for (std::size_t i = 0; i + 1 < n; ++i) off[i] = a(i + 1, i);
  return detail::min_eigenvalue_tridiagonal(diag, off);
}

}  // namespace wshift

#endif  // WSHIFT_LINALG_HPP
