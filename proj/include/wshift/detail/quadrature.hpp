#ifndef WSHIFT_DETAIL_QUADRATURE_HPP
#define WSHIFT_DETAIL_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "wshift/errors.hpp"

namespace wshift::detail {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

// Gauss-Kronrod 7/15 nodes on [-1, 1] (positive half, centre first).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.000000000000000000000000000000000, 0.207784955007898467600689403773245,
    0.405845151377397166906606412076961, 0.586087235467691130294144845693013,
    0.741531185599394439863864773280788, 0.864864423359769072789712788640926,
    0.949107912342758524526189684047851, 0.991455371120812639206854697526329};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.209482141084727828012999174891714, 0.204432940075298892414161999234649,
    0.190350578064785409913256402421014, 0.169004726639267902826583426598550,
    0.140653259715525918745189590510238, 0.104790010322250183839876322541518,
    0.063092092629978553290700663189204, 0.022935322010529224963732008058970};
// Gauss weights for the 7-point rule, aligned with odd-indexed Kronrod nodes
// (centre, nodes[2], nodes[4], nodes[6]).
inline constexpr std::array<double, 4> kGaussWeights = {
    0.417959183673469387755102040816327, 0.381830050505118944950369775488975,
    0.279705391489276667901467771423780, 0.129484966168869693270611432679082};

template <class F>
QuadratureResult gauss_kronrod_15(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = kKronrodWeights[0] * fc;
  double gauss = kGaussWeights[0] * fc;
  for (int i = 1; i < 8; ++i) {
    const double x = h * kKronrodNodes[i];
    const double s = f(c - x) + f(c + x);
    kronrod += kKronrodWeights[i] * s;
    if (i % 2 == 0) gauss += kGaussWeights[i / 2] * s;
  }
  return {kronrod * h, std::abs((kronrod - gauss) * h), 15};
}

/// Globally adaptive Gauss-Kronrod: repeatedly bisects the interval with the
/// largest error estimate until the summed estimate is below abs_tol.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double abs_tol,
                                    int max_intervals = 2000) {
  struct Piece {
    double a, b;
    QuadratureResult r;
    bool operator<(const Piece& o) const { return r.error < o.r.error; }
  };
  std::priority_queue<Piece> pieces;
  Piece first{a, b, gauss_kronrod_15(f, a, b)};
  double total = first.r.value, err = first.r.error;
  int evals = first.r.evaluations;
  pieces.push(first);
  while (err > abs_tol) {
    if (static_cast<int>(pieces.size()) >= max_intervals)
      throw QuadratureError("adaptive quadrature did not converge", err);
    Piece worst = pieces.top();
    pieces.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Piece left{worst.a, mid, gauss_kronrod_15(f, worst.a, mid)};
    Piece right{mid, worst.b, gauss_kronrod_15(f, mid, worst.b)};
    total += left.r.value + right.r.value - worst.r.value;
    err += left.r.error + right.r.error - worst.r.error;
    evals += 30;
    pieces.push(left);
    pieces.push(right);
  }
  return {total, err, evals};
}

}  // namespace wshift::detail

#endif  // WSHIFT_DETAIL_QUADRATURE_HPP
