#ifndef WSHIFT_LATTICE2D_HPP
#define WSHIFT_LATTICE2D_HPP

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wshift/errors.hpp"
#include "wshift/weights1d.hpp"

namespace wshift {

struct LatticePoint {
  std::size_t m1 = 0;
  std::size_t m2 = 0;

  LatticePoint operator+(const LatticePoint& o) const { return {m1 + o.m1, m2 + o.m2}; }
  auto operator<=>(const LatticePoint&) const = default;
};

inline constexpr LatticePoint kEps1{1, 0};
inline constexpr LatticePoint kEps2{0, 1};

enum class Family { ThmCompactPer, ExampleBergman, ExOf1Atom, ThmImportant, Stair, ThmKhypo, AdHoc };

inline std::string family_name(Family f) {
  switch (f) {
    case Family::ThmCompactPer: return "thm-compactper";
    case Family::ExampleBergman: return "example-bergman";
    case Family::ExOf1Atom: return "exof1atom";
    case Family::ThmImportant: return "thm-important";
    case Family::Stair: return "stair";
    case Family::ThmKhypo: return "thm-khypo";
    case Family::AdHoc: return "adhoc";
  }
  return "unknown";
}

inline const std::vector<Family>& all_families() {
  static const std::vector<Family> f = {Family::ThmCompactPer, Family::ExampleBergman,
                                        Family::ExOf1Atom,     Family::ThmImportant,
                                        Family::Stair,         Family::ThmKhypo,
                                        Family::AdHoc};
  return f;
}

/// Row 0, a common row for j >= 1, and column 0.
struct CompactPerParams {
  UnilateralShift row0;
  UnilateralShift row1;
  UnilateralShift col0;
};
struct ExampleBergmanParams {};
struct ExOf1AtomParams {
  double alpha = 0.5;
  double beta = 0.8;
};
struct ThmImportantParams {
  std::vector<int> ells;
  UnilateralShift col;
  bool strict = true;
};
struct StairParams {
  double a = 0.5;
};
struct ThmKhypoParams {
  double kappa = 2.0;
  double y0 = 0.5;
};
/// Explicit rows (the last one repeats upward) and column 0.
struct AdHocParams {
  std::vector<UnilateralShift> rows;
  UnilateralShift col0;
};

using FamilyParams = std::variant<CompactPerParams, ExampleBergmanParams, ExOf1AtomParams,
                                  ThmImportantParams, StairParams, ThmKhypoParams, AdHocParams>;

/// Commuting pair of weight fields on Z_+^2. alpha is given per family; beta
/// is stored only on column 0 and propagated by the commutativity relation
///   beta(m + e1) alpha(m) = alpha(m + e2) beta(m).
class WeightDiagram2D {
 public:
  explicit WeightDiagram2D(FamilyParams params) : params_(std::move(params)) {
    const double defect = scan_commutativity(8, 8);
    if (defect > 1e-12) throw IntegrityError("diagram violates commutativity");
  }

  Family family() const { return static_cast<Family>(params_.index()); }
  std::string family_name() const { return wshift::family_name(family()); }
  const FamilyParams& params() const { return params_; }

  /// T1 weight at (i, j).
  double alpha(std::size_t i, std::size_t j) const {
    return std::visit(
        [i, j](const auto& p) -> double {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, CompactPerParams>) {
            return j == 0 ? p.row0.weight(i) : p.row1.weight(i);
          } else if constexpr (std::is_same_v<P, ExampleBergmanParams>) {
            const double n = static_cast<double>(i);
            return j == 0 ? std::sqrt((2.0 * n + 1.0) / (n + 1.0)) : std::sqrt((n + 1.0) / (n + 2.0));
          } else if constexpr (std::is_same_v<P, ExOf1AtomParams>) {
            return std::pow(p.alpha, static_cast<double>(j));
          } else if constexpr (std::is_same_v<P, ThmImportantParams>) {
            if (j < p.ells.size())
              return std::sqrt(p.ells[j] - 1.0 / (static_cast<double>(i) + 2.0));
            return 1.0;
          } else if constexpr (std::is_same_v<P, StairParams>) {
            return i < j ? p.a : 1.0;
          } else if constexpr (std::is_same_v<P, ThmKhypoParams>) {
            if (j > 0) return 1.0;
            const double k = p.kappa;
            return std::sqrt(k - (k - 1.0) / (1.0 + std::pow(k, static_cast<double>(i))));
          } else {
            return p.rows[std::min(j, p.rows.size() - 1)].weight(i);
          }
        },
        params_);
  }

  /// T2 weight on column 0.
  double beta_column0(std::size_t j) const {
    return std::visit(
        [j](const auto& p) -> double {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, CompactPerParams> || std::is_same_v<P, AdHocParams>) {
            return p.col0.weight(j);
          } else if constexpr (std::is_same_v<P, ExampleBergmanParams>) {
            return j == 0 ? std::sqrt(0.5) : 1.0;
          } else if constexpr (std::is_same_v<P, ExOf1AtomParams>) {
            return p.beta;
          } else if constexpr (std::is_same_v<P, ThmImportantParams>) {
            return p.col.weight(j);
          } else if constexpr (std::is_same_v<P, StairParams>) {
            return 1.0;
          } else {
            return j == 0 ? p.y0 : 1.0;
          }
        },
        params_);
  }

  /// T2 weight at (i, j), forced by commutativity from column 0.
  double beta(std::size_t i, std::size_t j) const {
    double b = beta_column0(j);
    for (std::size_t l = 0; l < i; ++l) b *= alpha(l, j + 1) / alpha(l, j);
    return b;
  }

  double alpha(LatticePoint m) const { return alpha(m.m1, m.m2); }
  double beta(LatticePoint m) const { return beta(m.m1, m.m2); }

  /// If rows j >= j0 are all U_+ and every beta with j >= j0 equals 1, returns
  /// j0: moments there are constant in m, so every moment matrix based at
  /// m2 >= j0 is a multiple of the all-ones matrix.
  std::optional<std::size_t> tensor_unit_tail_row() const {
    if (family() == Family::ThmKhypo) return 1;
    return std::nullopt;
  }

  /// Horizontal slice W_{alpha^{(j)}}.
  UnilateralShift row(std::size_t j) const {
    const std::string label = "row " + std::to_string(j);
    return std::visit(
        [&](const auto& p) -> UnilateralShift {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, CompactPerParams>) {
            return j == 0 ? p.row0 : p.row1;
          } else if constexpr (std::is_same_v<P, ExampleBergmanParams>) {
            if (j == 0) return make_shift({1.0}, BergmanLikeTail{2, 1}, label);
            return make_bergman_like(1);
          } else if constexpr (std::is_same_v<P, ExOf1AtomParams>) {
            return make_shift({}, ConstantTail{std::pow(p.alpha, static_cast<double>(j))}, label);
          } else if constexpr (std::is_same_v<P, ThmImportantParams>) {
            return j < p.ells.size() ? make_bergman_like(p.ells[j]) : make_unilateral_shift();
          } else if constexpr (std::is_same_v<P, StairParams>) {
            return make_shift(std::vector<double>(j, p.a), ConstantTail{1.0}, label);
          } else if constexpr (std::is_same_v<P, ThmKhypoParams>) {
            return j == 0 ? make_two_atom_shift(p.kappa) : make_unilateral_shift();
          } else {
            return p.rows[std::min(j, p.rows.size() - 1)];
          }
        },
        params_);
  }

  /// Vertical slice W_{beta^{(i)}}.
  UnilateralShift column(std::size_t i) const {
    const std::string label = "column " + std::to_string(i);
    auto head_upto = [&](std::size_t len) {
      std::vector<double> h(len);
      for (std::size_t j = 0; j < len; ++j) h[j] = beta(i, j);
      return h;
    };
    return std::visit(
        [&](const auto& p) -> UnilateralShift {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, CompactPerParams>) {
            return make_shift(head_upto(1), SequenceTail{std::make_shared<const WeightSequence>(p.col0.weights)}, label);
          } else if constexpr (std::is_same_v<P, ExampleBergmanParams> || std::is_same_v<P, ThmKhypoParams>) {
            return make_shift(head_upto(1), ConstantTail{1.0}, label);
          } else if constexpr (std::is_same_v<P, ExOf1AtomParams>) {
            return make_shift({}, ConstantTail{std::pow(p.alpha, static_cast<double>(i)) * p.beta}, label);
          } else if constexpr (std::is_same_v<P, ThmImportantParams>) {
            return make_shift(head_upto(p.ells.size()), SequenceTail{std::make_shared<const WeightSequence>(p.col.weights)}, label);
          } else if constexpr (std::is_same_v<P, StairParams>) {
            return make_shift(std::vector<double>(i, p.a), ConstantTail{1.0}, label);
          } else {
            return make_shift(head_upto(p.rows.size() - 1), SequenceTail{std::make_shared<const WeightSequence>(p.col0.weights)}, label);
          }
        },
        params_);
  }

  /// Largest relative defect of the commutativity relation for m1 < M1, m2 < M2.
  double scan_commutativity(std::size_t m1_count, std::size_t m2_count) const {
    double worst = 0.0;
    for (std::size_t j = 0; j < m2_count; ++j) {
      double b = beta_column0(j);  // beta(i, j), advanced incrementally in i
      for (std::size_t i = 0; i < m1_count; ++i) {
        const double lhs = beta(i + 1, j) * alpha(i, j);
        const double rhs = alpha(i, j + 1) * b;
        const double scale = std::max(std::abs(lhs), std::abs(rhs));
        if (scale > 0.0) worst = std::max(worst, std::abs(lhs - rhs) / scale);
        b = beta(i + 1, j);
      }
    }
    return worst;
  }

 private:
  FamilyParams params_;
};

inline WeightDiagram2D make_thm_compactper(UnilateralShift row0, UnilateralShift row1,
                                           UnilateralShift col0) {
  return WeightDiagram2D(CompactPerParams{std::move(row0), std::move(row1), std::move(col0)});
}

inline WeightDiagram2D make_example_bergman() { return WeightDiagram2D(ExampleBergmanParams{}); }

inline WeightDiagram2D make_example_exof1atom(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha < beta && beta <= 1.0))
    throw DomainError("exof1atom needs 0 < alpha < beta <= 1");
  return WeightDiagram2D(ExOf1AtomParams{alpha, beta});
}

enum class ColumnCheck { Strict, Relaxed };

/// Rows B_+^{(ell_j)} for j < k, U_+ above, column 0 given by `col`.
/// Strict mode requires col strictly increasing; relaxed accepts nondecreasing.
inline WeightDiagram2D make_thm_important(std::vector<int> ells, UnilateralShift col,
                                          ColumnCheck check = ColumnCheck::Strict) {
  if (ells.empty()) throw DomainError("thm-important needs at least one Bergman-like row");
  for (int l : ells)
    if (l < 1) throw DomainError("Bergman-like indices must be >= 1");
  // Ties in double precision are accepted inside a tail whose rule is
  // strictly increasing in closed form.
  const bool strict_rule = std::holds_alternative<GeometricCapTail>(col.weights.tail()) ||
                           std::holds_alternative<BergmanLikeTail>(col.weights.tail()) ||
                           std::holds_alternative<TwoAtomTail>(col.weights.tail());
  for (std::size_t n = 0; n < WeightSequence::kValidationSpan; ++n) {
    const double a = col.weight(n), b = col.weight(n + 1);
    const bool tie_ok = a == b && strict_rule && n >= col.weights.head().size();
    if (check == ColumnCheck::Strict ? !(a < b || tie_ok) : !(a <= b))
      throw DomainError("column weights must be " +
                        std::string(check == ColumnCheck::Strict ? "strictly increasing" : "nondecreasing") +
                        " (violated at n = " + std::to_string(n) + ")");
  }
  if (!col.weights.tail_nondecreasing_from(WeightSequence::kValidationSpan))
    throw DomainError("column tail rule is not certified nondecreasing");
  return WeightDiagram2D(ThmImportantParams{std::move(ells), std::move(col), check == ColumnCheck::Strict});
}

inline WeightDiagram2D make_example_stair(double a) {
  if (!(a > 0.0 && a < 1.0)) throw DomainError("stair needs 0 < a < 1");
  return WeightDiagram2D(StairParams{a});
}

inline WeightDiagram2D make_thm_khypo(double kappa, double y0) {
  if (!(kappa > 1.0)) throw DomainError("thm-khypo needs kappa > 1");
  if (!(y0 > 0.0 && y0 <= 1.0)) throw DomainError("thm-khypo needs 0 < y0 <= 1");
  return WeightDiagram2D(ThmKhypoParams{kappa, y0});
}

inline WeightDiagram2D make_adhoc(std::vector<UnilateralShift> rows, UnilateralShift col0) {
  if (rows.empty()) throw DomainError("ad-hoc diagram needs at least one row");
  return WeightDiagram2D(AdHocParams{std::move(rows), std::move(col0)});
}

inline UnilateralShift horizontal_slice(const WeightDiagram2D& d, std::size_t j) { return d.row(j); }
inline UnilateralShift vertical_slice(const WeightDiagram2D& d, std::size_t i) { return d.column(i); }

/// Moment gamma_m along the staircase path: all e1 steps on row 0, then e2
/// steps up column m1.
inline double gamma2d(const WeightDiagram2D& d, LatticePoint m) {
  double g = 1.0;
  for (std::size_t l = 0; l < m.m1; ++l) {
    const double a = d.alpha(l, 0);
    g *= a * a;
  }
  for (std::size_t j = 0; j < m.m2; ++j) {
    const double w = d.beta(m.m1, j);
    g *= w * w;
  }
  return g;
}

/// log gamma on the rectangle [0, M1] x [0, M2], filled along staircase paths
/// with beta propagated row by row. Logs keep far corners finite.
class MomentGrid {
 public:
  MomentGrid(const WeightDiagram2D& d, std::size_t m1_max, std::size_t m2_max)
      : m1_max_(m1_max), m2_max_(m2_max), log_gamma_((m1_max + 1) * (m2_max + 1)) {
    std::vector<double> log_beta(m2_max);  // log beta(i, j) for current i
    for (std::size_t j = 0; j < m2_max; ++j) log_beta[j] = std::log(d.beta_column0(j));
    double log_row = 0.0;  // log gamma(i, 0)
    for (std::size_t i = 0; i <= m1_max; ++i) {
      double g = log_row;
      at(i, 0) = g;
      for (std::size_t j = 0; j < m2_max; ++j) {
        g += 2.0 * log_beta[j];
        at(i, j + 1) = g;
      }
      if (i == m1_max) break;
      log_row += 2.0 * std::log(d.alpha(i, 0));
      for (std::size_t j = 0; j < m2_max; ++j)
        log_beta[j] += std::log(d.alpha(i, j + 1)) - std::log(d.alpha(i, j));
    }
  }

  double log_gamma(std::size_t i, std::size_t j) const { return log_gamma_[i * (m2_max_ + 1) + j]; }
  double gamma(std::size_t i, std::size_t j) const { return std::exp(log_gamma(i, j)); }
  double gamma(LatticePoint m) const { return gamma(m.m1, m.m2); }
  std::size_t m1_max() const { return m1_max_; }
  std::size_t m2_max() const { return m2_max_; }

 private:
  double& at(std::size_t i, std::size_t j) { return log_gamma_[i * (m2_max_ + 1) + j]; }

  std::size_t m1_max_;
  std::size_t m2_max_;
  std::vector<double> log_gamma_;
};

struct CompactnessWitness {
  std::vector<double> entries;  // beta_0 prod_{l<n} alpha(l,1)/alpha(l,0) = beta(n, 0)
  bool decays = false;          // last entry below tol * max entry
};

/// Diagonal of B = beta_0 diag(1, alpha_01/alpha_00, ...) for diagrams of the
/// compact-perturbation shape (row 0 distinct, rows j >= 1 equal).
inline CompactnessWitness compactness_witness(const WeightDiagram2D& d, std::size_t n,
                                              double tol = 0.02) {
  const bool shape_ok = d.family() == Family::ThmCompactPer ||
                        d.family() == Family::ExampleBergman || d.family() == Family::ThmKhypo ||
                        (d.family() == Family::ThmImportant &&
                         std::get<ThmImportantParams>(d.params()).ells.size() == 1);
  if (!shape_ok)
    throw DomainError("compactness witness requires a compact-perturbation diagram, got " + d.family_name());
  if (n == 0) throw DomainError("compactness witness needs N >= 1");
  CompactnessWitness w;
  w.entries.resize(n);
  double b = d.beta_column0(0);
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w.entries[i] = b;
    peak = std::max(peak, b);
    b *= d.alpha(i, 1) / d.alpha(i, 0);
  }
  w.decays = w.entries.back() < tol * peak;
  return w;
}

}  // namespace wshift

#endif  // WSHIFT_LATTICE2D_HPP
