#ifndef WSHIFT_ORACLE_HPP
#define WSHIFT_ORACLE_HPP

// Brute-force numerics that cross-check the primary routes. Nothing here is
// shared with the implementations it checks beyond the weight accessors.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "wshift/errors.hpp"
#include "wshift/lattice2d.hpp"
#include "wshift/linalg.hpp"
#include "wshift/measures.hpp"
#include "wshift/weights1d.hpp"

namespace wshift::oracle {

/// (N+1) x N matrix of W - lambda restricted to span{e_0..e_{N-1}}: column n
/// holds -lambda at row n and alpha_n at row n+1.
struct RectangularSection {
  std::size_t columns = 0;
  std::complex<double> lambda;
  std::vector<double> subdiagonal;  // alpha_0 .. alpha_{N-1}

  std::complex<double> entry(std::size_t row, std::size_t col) const {
    if (row == col) return -lambda;
    if (row == col + 1) return subdiagonal[col];
    return 0.0;
  }
};

inline RectangularSection make_section(const UnilateralShift& shift, std::complex<double> lambda,
                                       std::size_t n) {
  if (n < 2) throw DomainError("section needs N >= 2");
  RectangularSection s{n, lambda, std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) s.subdiagonal[i] = shift.weight(i);
  return s;
}

/// Smallest singular value: complex Givens QR of the lower bidiagonal section
/// to an upper bidiagonal R, then inverse iteration on R^H R with two O(N)
/// bidiagonal solves per step.
inline double min_singular(const RectangularSection& sec) {
  using cd = std::complex<double>;
  const std::size_t n = sec.columns;
  std::vector<cd> r(n), s(n > 0 ? n - 1 : 0);
  cd a = -sec.lambda;
  for (std::size_t i = 0; i < n; ++i) {
    const double b = sec.subdiagonal[i];
    const double rho = std::hypot(std::abs(a), b);
    r[i] = rho;
    if (i + 1 < n) s[i] = -b * sec.lambda / rho;
    a = -a * sec.lambda / rho;
  }
  for (const auto& d : r)
    if (std::abs(d) == 0.0) return 0.0;

  auto apply_r = [&](const std::vector<cd>& x) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cd v = r[i] * x[i];
      if (i + 1 < n) v += s[i] * x[i + 1];
      sum += std::norm(v);
    }
    return std::sqrt(sum);
  };
  auto normalize = [](std::vector<cd>& x) {
    double nn = 0.0;
    for (const auto& v : x) nn += std::norm(v);
    nn = std::sqrt(nn);
    for (auto& v : x) v /= nn;
  };

  std::vector<cd> x(n), z(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.25 * std::sin(1.7 * static_cast<double>(i) + 0.3);
  normalize(x);
  double sigma = apply_r(x);
  int settled = 0;
  for (int iter = 0; iter < 200000 && settled < 3; ++iter) {
    // R^H z = x (forward), then R x = z (backward).
    z[0] = x[0] / std::conj(r[0]);
    for (std::size_t i = 1; i < n; ++i) z[i] = (x[i] - std::conj(s[i - 1]) * z[i - 1]) / std::conj(r[i]);
    x[n - 1] = z[n - 1] / r[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (z[i] - s[i] * x[i + 1]) / r[i];
    normalize(x);
    const double next = apply_r(x);
    settled = std::abs(next - sigma) <= 1e-15 * next ? settled + 1 : 0;
    sigma = next;
  }
  return sigma;
}

/// Moment along the reverse staircase: e2 steps up column 0, then e1 steps
/// along row m2.
inline double gamma_bruteforce(const WeightDiagram2D& d, LatticePoint m) {
  double g = 1.0;
  for (std::size_t j = 0; j < m.m2; ++j) {
    const double b = d.beta_column0(j);
    g *= b * b;
  }
  for (std::size_t l = 0; l < m.m1; ++l) {
    const double a = d.alpha(l, m.m2);
    g *= a * a;
  }
  return g;
}

/// log gamma along the same reverse staircase; stays finite where the product
/// underflows.
inline double log_gamma_bruteforce(const WeightDiagram2D& d, LatticePoint m) {
  double g = 0.0;
  for (std::size_t j = 0; j < m.m2; ++j) g += 2.0 * std::log(d.beta_column0(j));
  for (std::size_t l = 0; l < m.m1; ++l) g += 2.0 * std::log(d.alpha(l, m.m2));
  return g;
}

struct JacobiSpectrum {
  std::vector<double> eigenvalues;  // ascending
  int sweeps = 0;
  double min() const { return eigenvalues.front(); }
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// 1e-12 (relative to the matrix norm when that exceeds 1).
inline JacobiSpectrum psd_bruteforce(const SymmetricMatrix& input) {
  SymmetricMatrix a = input;
  const std::size_t n = a.size();
  if (n == 0) throw DomainError("empty matrix");
  if (input.max_asymmetry() > 1e-12) throw DomainError("psd_bruteforce: matrix is not symmetric");
  double frob = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) frob += a(i, j) * a(i, j);
  const double target = 1e-12 * std::max(1.0, std::sqrt(frob));
  auto off_norm = [&] {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) sum += a(i, j) * a(i, j);
    return std::sqrt(sum);
  };
  JacobiSpectrum out;
  while (off_norm() > target) {
    if (out.sweeps == 100) throw ConvergenceError("Jacobi eigensolver did not converge in 100 sweeps");
    ++out.sweeps;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) out.eigenvalues.push_back(a(i, i));
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  return out;
}

struct MomentMatch {
  bool pass = false;
  std::optional<std::size_t> first_failure;
  double worst_relative = 0.0;
};

/// |gamma_n(shift) - int s^n dmu| <= tol * max(1, gamma_n) for n <= n_max.
template <class Measure>
MomentMatch measure_moment_match(const UnilateralShift& shift, const Measure& mu, std::size_t n_max,
                                 double tol) {
  const Moments1D g = moments(shift, n_max);
  MomentMatch out;
  for (std::size_t n = 0; n <= n_max; ++n) {
    const double scale = std::max(1.0, std::abs(g(n)));
    const double diff = std::abs(g(n) - measure_moment(mu, n)) / scale;
    out.worst_relative = std::max(out.worst_relative, diff);
    if (diff > tol && !out.first_failure) out.first_failure = n;
  }
  out.pass = !out.first_failure.has_value();
  return out;
}

}  // namespace wshift::oracle

#endif  // WSHIFT_ORACLE_HPP
