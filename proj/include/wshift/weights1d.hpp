#ifndef WSHIFT_WEIGHTS1D_HPP
#define WSHIFT_WEIGHTS1D_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wshift/detail/tridiagonal.hpp"
#include "wshift/errors.hpp"

namespace wshift {

class WeightSequence;

// Tail rules. Each rule is evaluated at the absolute index n (n >= head size).

/// Every tail weight equals `value`.
struct ConstantTail {
  double value = 1.0;
};

/// sqrt(ell - 1/(n - offset + 2)); offset = 0 is the Bergman-like shift.
struct BergmanLikeTail {
  int ell = 1;
  int offset = 0;
};

/// sqrt((1 + kappa^{n+1}) / (1 + kappa^n)), the shift with Berger measure
/// (delta_1 + delta_kappa)/2.
struct TwoAtomTail {
  double kappa = 2.0;
};

/// cap * (1 - ratio^{n+1}); strictly increasing to `cap` for ratio in (0,1).
struct GeometricCapTail {
  double cap = 1.0;
  double ratio = 0.5;
};

/// sqrt(gamma_{n+1} / gamma_n) for the moments of a finitely atomic measure,
/// atoms given as (location, mass).
struct MomentRatioTail {
  std::vector<std::pair<double, double>> atoms;
};

/// Borrows weights from another sequence at the same absolute index.
struct SequenceTail {
  std::shared_ptr<const WeightSequence> source;
};

using TailRule = std::variant<ConstantTail, BergmanLikeTail, TwoAtomTail,
                              GeometricCapTail, MomentRatioTail, SequenceTail>;

/// Lazy positive weight list: an explicit head followed by a closed-form tail.
/// Immutable after construction.
class WeightSequence {
 public:
  /// Number of leading weights validated against the declared supremum at
  /// construction.
  static constexpr std::size_t kValidationSpan = 256;

  WeightSequence() : WeightSequence({}, ConstantTail{1.0}) {}

  WeightSequence(std::vector<double> head, TailRule tail)
      : head_(std::move(head)), tail_(std::move(tail)) {
    validate_tail();
    declared_sup_ = sup_from(0);
    validate_materialized();
  }

  /// Explicit supremum; must dominate every weight.
  WeightSequence(std::vector<double> head, TailRule tail, double declared_sup)
      : head_(std::move(head)), tail_(std::move(tail)), declared_sup_(declared_sup) {
    validate_tail();
    if (!(declared_sup_ > 0.0) || !std::isfinite(declared_sup_))
      throw DomainError("declared supremum must be a positive finite real");
    validate_materialized();
  }

  double operator()(std::size_t n) const { return weight(n); }

  double weight(std::size_t n) const {
    if (n < head_.size()) return head_[n];
    return tail_weight(n);
  }

  const std::vector<double>& head() const { return head_; }
  const TailRule& tail() const { return tail_; }
  double declared_sup() const { return declared_sup_; }

  /// Analytic supremum of weights with index >= n0.
  double sup_from(std::size_t n0) const {
    double s = tail_sup(n0);
    for (std::size_t i = n0; i < head_.size(); ++i) s = std::max(s, head_[i]);
    return s;
  }

  /// True when the tail rule is certified nondecreasing from index n0 on.
  bool tail_nondecreasing_from(std::size_t n0) const {
    return std::visit(
        [&](const auto& t) -> bool {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, SequenceTail>) {
            return t.source->nondecreasing_from(n0);
          } else {
            (void)t;
            return true;
          }
        },
        tail_);
  }

  /// Certified nondecreasing from n0: head checked numerically, tail by rule.
  bool nondecreasing_from(std::size_t n0) const {
    const std::size_t stop = std::max(head_.size(), n0);
    for (std::size_t i = n0; i < stop; ++i)
      if (weight(i) > weight(i + 1)) return false;
    return tail_nondecreasing_from(std::max(head_.size(), n0));
  }

 private:
  double tail_weight(std::size_t n) const {
    return std::visit(
        [n](const auto& t) -> double {
          using T = std::decay_t<decltype(t)>;
          const double nd = static_cast<double>(n);
          if constexpr (std::is_same_v<T, ConstantTail>) {
            return t.value;
          } else if constexpr (std::is_same_v<T, BergmanLikeTail>) {
            return std::sqrt(t.ell - 1.0 / (nd - t.offset + 2.0));
          } else if constexpr (std::is_same_v<T, TwoAtomTail>) {
            // kappa - (kappa-1)/(1+kappa^n) avoids overflow for large n.
            return std::sqrt(t.kappa - (t.kappa - 1.0) / (1.0 + std::pow(t.kappa, nd)));
          } else if constexpr (std::is_same_v<T, GeometricCapTail>) {
            return t.cap * (1.0 - std::pow(t.ratio, nd + 1.0));
          } else if constexpr (std::is_same_v<T, MomentRatioTail>) {
            double top = 0.0;
            for (const auto& a : t.atoms) top = std::max(top, a.first);
            double num = 0.0, den = 0.0;
            for (const auto& [s, mass] : t.atoms) {
              const double r = s / top;
              num += mass * std::pow(r, nd + 1.0);
              den += mass * std::pow(r, nd);
            }
            return std::sqrt(top * num / den);
          } else {
            return t.source->weight(n);
          }
        },
        tail_);
  }

  double tail_sup(std::size_t n0) const {
    const std::size_t start = std::max(n0, head_.size());
    return std::visit(
        [start](const auto& t) -> double {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, ConstantTail>) {
            return t.value;
          } else if constexpr (std::is_same_v<T, BergmanLikeTail>) {
            return std::sqrt(static_cast<double>(t.ell));
          } else if constexpr (std::is_same_v<T, TwoAtomTail>) {
            return std::sqrt(t.kappa);
          } else if constexpr (std::is_same_v<T, GeometricCapTail>) {
            return t.cap;
          } else if constexpr (std::is_same_v<T, MomentRatioTail>) {
            double top = 0.0;
            for (const auto& a : t.atoms) top = std::max(top, a.first);
            return std::sqrt(top);
          } else {
            return t.source->sup_from(start);
          }
        },
        tail_);
  }

  void validate_tail() const {
    std::visit(
        [this](const auto& t) {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, ConstantTail>) {
            if (!(t.value > 0.0)) throw DomainError("constant tail must be positive");
          } else if constexpr (std::is_same_v<T, BergmanLikeTail>) {
            if (t.ell < 1) throw DomainError("Bergman-like index must be >= 1");
            if (static_cast<long long>(head_.size()) - t.offset < 0)
              throw DomainError("Bergman-like tail offset exceeds head length");
          } else if constexpr (std::is_same_v<T, TwoAtomTail>) {
            if (!(t.kappa > 1.0)) throw DomainError("two-atom parameter kappa must exceed 1");
          } else if constexpr (std::is_same_v<T, GeometricCapTail>) {
            if (!(t.cap > 0.0) || !(t.ratio > 0.0 && t.ratio < 1.0))
              throw DomainError("geometric cap tail needs cap > 0 and ratio in (0,1)");
          } else if constexpr (std::is_same_v<T, MomentRatioTail>) {
            double top = 0.0;
            for (const auto& [s, mass] : t.atoms) {
              if (!(s >= 0.0) || !(mass > 0.0))
                throw DomainError("moment-ratio tail needs nonnegative locations and positive masses");
              top = std::max(top, s);
            }
            if (!(top > 0.0)) throw DomainError("moment-ratio tail needs an atom away from 0");
          } else {
            if (!t.source) throw DomainError("sequence tail without source");
          }
        },
        tail_);
  }

  void validate_materialized() const {
    const double slack = 1e-12 * std::max(1.0, declared_sup_);
    const std::size_t span = std::max(kValidationSpan, head_.size() + 1);
    for (std::size_t n = 0; n < span; ++n) {
      const double w = weight(n);
      if (!(w > 0.0) || !std::isfinite(w))
        throw DomainError("weight " + std::to_string(n) + " is not a positive finite real");
      if (w > declared_sup_ + slack)
        throw IntegrityError("weight " + std::to_string(n) + " exceeds declared supremum");
    }
  }

  std::vector<double> head_;
  TailRule tail_;
  double declared_sup_ = 1.0;
};

/// W e_n = weight(n) e_{n+1} on l^2(Z_+).
struct UnilateralShift {
  WeightSequence weights;
  std::string label;

  double weight(std::size_t n) const { return weights.weight(n); }
};

inline UnilateralShift make_shift(std::vector<double> head, TailRule tail,
                                  std::string label = "shift") {
  return {WeightSequence(std::move(head), std::move(tail)), std::move(label)};
}

/// The unweighted shift U_+.
inline UnilateralShift make_unilateral_shift() {
  return {WeightSequence({}, ConstantTail{1.0}), "U+"};
}

/// B_+^{(ell)} = shift(sqrt(ell - 1/(n+2))); ell = 1 is the Bergman shift.
inline UnilateralShift make_bergman_like(int ell) {
  if (ell < 1) throw DomainError("Bergman-like index must be a positive integer");
  return {WeightSequence({}, BergmanLikeTail{ell, 0}), "B+(" + std::to_string(ell) + ")"};
}

/// W_kappa with Berger measure (delta_1 + delta_kappa)/2.
inline UnilateralShift make_two_atom_shift(double kappa) {
  if (!(kappa > 1.0)) throw DomainError("two-atom shift needs kappa > 1");
  return {WeightSequence({}, TwoAtomTail{kappa}), "W_kappa"};
}

/// Moments gamma_0..gamma_{nMax}, gamma_n = alpha_0^2 ... alpha_{n-1}^2.
class Moments1D {
 public:
  explicit Moments1D(std::vector<double> values) : values_(std::move(values)) {}
  double operator()(std::size_t n) const { return values_.at(n); }
  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

inline Moments1D moments(const UnilateralShift& shift, std::size_t n_max) {
  std::vector<double> g(n_max + 1);
  g[0] = 1.0;
  for (std::size_t n = 0; n < n_max; ++n) {
    const double w = shift.weight(n);
    g[n + 1] = g[n] * (w * w);
  }
  return Moments1D(std::move(g));
}

/// Operator norm, i.e. the declared supremum. Throws IntegrityError if any of
/// the first `scan` weights exceeds it.
inline double norm(const UnilateralShift& shift, std::size_t scan = 1000) {
  const double sup = shift.weights.declared_sup();
  const double slack = 1e-12 * std::max(1.0, sup);
  for (std::size_t n = 0; n < scan; ++n)
    if (shift.weight(n) > sup + slack)
      throw IntegrityError("weight " + std::to_string(n) + " of " + shift.label +
                           " exceeds declared supremum");
  return sup;
}

struct Hyponormality1D {
  bool pass = false;
  std::optional<std::size_t> witness;  // first n with alpha_n > alpha_{n+1}
  std::size_t checked_upto = 0;        // indices n < checked_upto compared numerically
  bool tail_certified = false;
};

/// Monotone-weight test: alpha_n <= alpha_{n+1} for n below the checked range,
/// plus the tail rule's nondecreasing certificate beyond it.
inline Hyponormality1D is_hyponormal_1d(const UnilateralShift& shift, std::size_t n_max) {
  if (n_max < 1) throw DomainError("is_hyponormal_1d needs nMax >= 1");
  Hyponormality1D v;
  v.checked_upto = std::max(n_max, shift.weights.head().size());
  for (std::size_t n = 0; n < v.checked_upto; ++n) {
    if (shift.weight(n) > shift.weight(n + 1)) {
      v.witness = n;
      return v;
    }
  }
  v.tail_certified = shift.weights.tail_nondecreasing_from(v.checked_upto);
  v.pass = v.tail_certified;
  return v;
}

struct LeftInverseNorm {
  double value = 0.0;      // 1/sigma_min, +inf when near_spectrum
  double sigma_min = 0.0;  // smallest singular value of the section
  bool near_spectrum = false;
  std::size_t resolution = 0;
};

/// Smallest singular value of the (N+1) x N section of W - lambda on
/// span{e_0..e_{N-1}}, by bisection on the Golub-Kahan tridiagonal form.
inline double section_min_singular(const UnilateralShift& shift, std::complex<double> lambda,
                                   std::size_t n) {
  if (n < 2) throw DomainError("section resolution N must be >= 2");
  // Singular values of a bidiagonal are invariant under unimodular scaling, so
  // the entries may be replaced by their moduli. The perfect shuffle of
  // [[0, A], [A^T, 0]] has zero diagonal and off-diagonal d_0, e_0, d_1, e_1, ...
  const double d = std::abs(lambda);
  std::vector<double> diag(2 * n + 1, 0.0);
  std::vector<double> off(2 * n);
  double scale = d;
  for (std::size_t i = 0; i < n; ++i) {
    off[2 * i] = d;
    off[2 * i + 1] = shift.weight(i);
    scale = std::max(scale, off[2 * i + 1]);
  }
  // Eigenvalues are -sigma_i (n of them), one structural 0, +sigma_i. The
  // smallest singular value is eigenvalue index n + 1 in ascending order.
  const double hi = 2.0 * scale + 1e-300;
  return detail::kth_eigenvalue_bisect(diag, off, n + 1, 0.0, hi);
}

inline LeftInverseNorm canonical_left_inverse_norm(const UnilateralShift& shift,
                                                   std::complex<double> lambda, std::size_t n) {
  LeftInverseNorm r;
  r.resolution = n;
  r.sigma_min = section_min_singular(shift, lambda, n);
  r.near_spectrum = r.sigma_min < 1e-12;
  r.value = r.near_spectrum ? std::numeric_limits<double>::infinity() : 1.0 / r.sigma_min;
  return r;
}

}  // namespace wshift

#endif  // WSHIFT_WEIGHTS1D_HPP
