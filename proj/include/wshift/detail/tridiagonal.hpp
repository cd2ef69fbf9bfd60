#ifndef WSHIFT_DETAIL_TRIDIAGONAL_HPP
#define WSHIFT_DETAIL_TRIDIAGONAL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

namespace wshift::detail {

// Sturm count: number of eigenvalues of the symmetric tridiagonal matrix
// (diag, off) strictly below x. off.size() == diag.size() - 1.
inline std::size_t sturm_count_below(std::span<const double> diag,
                                     std::span<const double> off, double x) {
  constexpr double pivmin = std::numeric_limits<double>::min();
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const double e2 = i == 0 ? 0.0 : off[i - 1] * off[i - 1];
    q = diag[i] - x - (i == 0 ? 0.0 : e2 / q);
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

// Gershgorin interval enclosing the spectrum.
inline std::pair<double, double> gershgorin_bounds(std::span<const double> diag,
                                                   std::span<const double> off) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(off[i - 1]);
    if (i + 1 < diag.size()) radius += std::abs(off[i]);
    lo = std::min(lo, diag[i] - radius);
    hi = std::max(hi, diag[i] + radius);
  }
  return {lo, hi};
}

// k-th smallest eigenvalue (k = 0 is the minimum) by bisection on the Sturm
// count, bracketed in [lo, hi]. Stops at relative width rel_tol or when the
// midpoint stops moving.
inline double kth_eigenvalue_bisect(std::span<const double> diag,
                                    std::span<const double> off, std::size_t k,
                                    double lo, double hi, double rel_tol = 4e-16) {
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi))) break;
    if (sturm_count_below(diag, off, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

inline double min_eigenvalue_tridiagonal(std::span<const double> diag,
                                         std::span<const double> off) {
  auto [lo, hi] = gershgorin_bounds(diag, off);
  const double pad = 1e-300 + 1e-15 * std::max(std::abs(lo), std::abs(hi));
  return kth_eigenvalue_bisect(diag, off, 0, lo - pad, hi + pad);
}

}  // namespace wshift::detail

#endif  // WSHIFT_DETAIL_TRIDIAGONAL_HPP
