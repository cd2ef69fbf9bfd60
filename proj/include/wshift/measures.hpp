#ifndef WSHIFT_MEASURES_HPP
#define WSHIFT_MEASURES_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "wshift/detail/quadrature.hpp"
#include "wshift/errors.hpp"
#include "wshift/weights1d.hpp"

namespace wshift {

/// Atoms whose coordinates differ by at most this much are merged.
inline constexpr double kAtomMergeTol = 1e-12;

struct Atom1D {
  double location = 0.0;
  double mass = 0.0;
  bool operator==(const Atom1D&) const = default;
};

struct Atom2D {
  double s = 0.0;
  double t = 0.0;
  double mass = 0.0;
  bool operator==(const Atom2D&) const = default;
};

/// Finitely atomic positive measure on [0, inf). Atoms are kept sorted by
/// location with distinct locations.
class AtomicMeasure1D {
 public:
  AtomicMeasure1D() = default;

  explicit AtomicMeasure1D(std::vector<Atom1D> atoms) {
    for (const auto& a : atoms) {
      if (!(a.location >= 0.0) || !std::isfinite(a.location))
        throw DomainError("atom locations must be finite and >= 0");
      if (!(a.mass > 0.0) || !std::isfinite(a.mass))
        throw DomainError("atom masses must be positive");
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom1D& x, const Atom1D& y) { return x.location < y.location; });
    for (const auto& a : atoms) {
      if (!atoms_.empty() && a.location - atoms_.back().location <= kAtomMergeTol)
        atoms_.back().mass += a.mass;
      else
        atoms_.push_back(a);
    }
  }

  static AtomicMeasure1D dirac(double location, double mass = 1.0) {
    return AtomicMeasure1D({{location, mass}});
  }

  const std::vector<Atom1D>& atoms() const { return atoms_; }

  double total_mass() const {
    double m = 0.0;
    for (const auto& a : atoms_) m += a.mass;
    return m;
  }

  bool is_probability() const { return std::abs(total_mass() - 1.0) <= 1e-12; }

  double max_location() const { return atoms_.empty() ? 0.0 : atoms_.back().location; }

  bool operator==(const AtomicMeasure1D&) const = default;

 private:
  std::vector<Atom1D> atoms_;
};

/// Finitely atomic positive measure on [0, inf)^2, sorted by (s, t).
class AtomicMeasure2D {
 public:
  AtomicMeasure2D() = default;

  explicit AtomicMeasure2D(std::vector<Atom2D> atoms) {
    for (const auto& a : atoms) {
      if (!(a.s >= 0.0) || !(a.t >= 0.0) || !std::isfinite(a.s) || !std::isfinite(a.t))
        throw DomainError("atom coordinates must be finite and >= 0");
      if (!(a.mass > 0.0) || !std::isfinite(a.mass))
        throw DomainError("atom masses must be positive");
    }
    std::sort(atoms.begin(), atoms.end(), [](const Atom2D& x, const Atom2D& y) {
      return x.s < y.s || (x.s == y.s && x.t < y.t);
    });
    for (const auto& a : atoms) {
      auto same = std::find_if(atoms_.begin(), atoms_.end(), [&](const Atom2D& b) {
        return std::abs(a.s - b.s) <= kAtomMergeTol && std::abs(a.t - b.t) <= kAtomMergeTol;
      });
      if (same != atoms_.end())
        same->mass += a.mass;
      else
        atoms_.push_back(a);
    }
  }

  const std::vector<Atom2D>& atoms() const { return atoms_; }

  double total_mass() const {
    double m = 0.0;
    for (const auto& a : atoms_) m += a.mass;
    return m;
  }

  bool operator==(const AtomicMeasure2D&) const = default;

 private:
  std::vector<Atom2D> atoms_;
};

/// Product measure mu x nu.
inline AtomicMeasure2D product(const AtomicMeasure1D& mu, const AtomicMeasure1D& nu) {
  std::vector<Atom2D> atoms;
  for (const auto& a : mu.atoms())
    for (const auto& b : nu.atoms()) atoms.push_back({a.location, b.location, a.mass * b.mass});
  return AtomicMeasure2D(std::move(atoms));
}

enum class DensityFamily { Bergman1, Bergman2 };

/// Registered closed-form densities: the Berger measures of B_+^{(1)}
/// (ds on [0,1]) and B_+^{(2)} (s ds / (pi sqrt(2s - s^2)) on [0,2]).
struct DensityMeasure1D {
  DensityFamily family = DensityFamily::Bergman1;

  double support_lo() const { return 0.0; }
  double support_hi() const { return family == DensityFamily::Bergman1 ? 1.0 : 2.0; }

  double density(double s) const {
    if (s < support_lo() || s > support_hi()) return 0.0;
    if (family == DensityFamily::Bergman1) return 1.0;
    return s / (std::numbers::pi * std::sqrt(2.0 * s - s * s));
  }

  std::string name() const { return family == DensityFamily::Bergman1 ? "bergman1" : "bergman2"; }
};

enum class QuadratureMethod { Substitution, Plain };

inline double measure_moment(const AtomicMeasure1D& mu, std::size_t n) {
  double sum = 0.0;
  for (const auto& a : mu.atoms()) sum += a.mass * std::pow(a.location, static_cast<double>(n));
  return sum;
}

inline double measure_moment(const AtomicMeasure2D& mu, std::size_t m1, std::size_t m2) {
  double sum = 0.0;
  for (const auto& a : mu.atoms())
    sum += a.mass * std::pow(a.s, static_cast<double>(m1)) * std::pow(a.t, static_cast<double>(m2));
  return sum;
}

/// Integral of s^n against a registered density. The substitution route maps
/// s = 1 + sin(theta) for the Bergman-2 density, which cancels the
/// 1/sqrt(2s - s^2) endpoint singularity; absolute error <= 1e-8. The plain
/// route integrates the singular integrand directly with tolerance 1e-6.
inline double measure_moment(const DensityMeasure1D& mu, std::size_t n,
                             QuadratureMethod method = QuadratureMethod::Substitution) {
  const double nd = static_cast<double>(n);
  if (mu.family == DensityFamily::Bergman1) {
    auto f = [nd](double s) { return std::pow(s, nd); };
    return detail::integrate_adaptive(f, 0.0, 1.0, 1e-12).value;
  }
  if (method == QuadratureMethod::Substitution) {
    auto f = [nd](double theta) { return std::pow(1.0 + std::sin(theta), nd + 1.0) / std::numbers::pi; };
    return detail::integrate_adaptive(f, -std::numbers::pi / 2, std::numbers::pi / 2, 1e-11).value;
  }
  auto f = [&mu, nd](double s) { return std::pow(s, nd) * mu.density(s); };
  return detail::integrate_adaptive(f, 0.0, 2.0, 1e-6, 20000).value;
}

/// Weight sequence whose moments are those of mu: alpha_n = sqrt(gamma_{n+1}/gamma_n).
/// The first n_max weights are materialized from the moments, the remainder
/// follows the closed-form moment-ratio rule.
inline WeightSequence shift_from_measure(const AtomicMeasure1D& mu, std::size_t n_max) {
  if (!mu.is_probability()) throw DomainError("shift_from_measure needs a probability measure");
  if (!(mu.max_location() > 0.0)) throw DomainError("measure concentrated at 0 has vanishing moments");
  std::vector<double> head(n_max);
  for (std::size_t n = 0; n < n_max; ++n)
    head[n] = std::sqrt(measure_moment(mu, n + 1) / measure_moment(mu, n));
  MomentRatioTail tail;
  for (const auto& a : mu.atoms()) tail.atoms.emplace_back(a.location, a.mass);
  return WeightSequence(std::move(head), std::move(tail), std::sqrt(mu.max_location()));
}

inline AtomicMeasure1D marginal_x(const AtomicMeasure2D& mu) {
  std::vector<Atom1D> atoms;
  for (const auto& a : mu.atoms()) atoms.push_back({a.s, a.mass});
  return AtomicMeasure1D(std::move(atoms));
}

inline AtomicMeasure1D marginal_y(const AtomicMeasure2D& mu) {
  std::vector<Atom1D> atoms;
  for (const auto& a : mu.atoms()) atoms.push_back({a.t, a.mass});
  return AtomicMeasure1D(std::move(atoms));
}

enum class SliceAxis { Horizontal, Vertical };

/// Berger measure of the j-th horizontal slice: the marginal in s of
/// t^j dmu / gamma_{0j}. Vertical slices swap the roles of s and t.
inline AtomicMeasure1D slice_measure(const AtomicMeasure2D& mu, std::size_t j, SliceAxis axis) {
  const double jd = static_cast<double>(j);
  double normalizer = 0.0;
  std::vector<Atom1D> atoms;
  for (const auto& a : mu.atoms()) {
    const double weight = axis == SliceAxis::Horizontal ? std::pow(a.t, jd) : std::pow(a.s, jd);
    const double mass = a.mass * weight;
    normalizer += mass;
    if (mass > 0.0) atoms.push_back({axis == SliceAxis::Horizontal ? a.s : a.t, mass});
  }
  if (!(normalizer > 0.0))
    throw SliceUndefinedError("slice " + std::to_string(j) + " undefined: gamma normalizer vanishes");
  for (auto& a : atoms) a.mass /= normalizer;
  return AtomicMeasure1D(std::move(atoms));
}

/// Atomic measures are mutually absolutely continuous iff their supports agree.
inline bool mutually_abs_continuous(const AtomicMeasure1D& mu, const AtomicMeasure1D& nu) {
  if (mu.atoms().size() != nu.atoms().size()) return false;
  for (std::size_t i = 0; i < mu.atoms().size(); ++i)
    if (std::abs(mu.atoms()[i].location - nu.atoms()[i].location) > kAtomMergeTol) return false;
  return true;
}

/// (delta_1 + delta_kappa) / 2.
inline AtomicMeasure1D two_atom_measure(double kappa) {
  return AtomicMeasure1D({{1.0, 0.5}, {kappa, 0.5}});
}

}  // namespace wshift

#endif  // WSHIFT_MEASURES_HPP
