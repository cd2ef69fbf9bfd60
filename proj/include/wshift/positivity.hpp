#ifndef WSHIFT_POSITIVITY_HPP
#define WSHIFT_POSITIVITY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wshift/errors.hpp"
#include "wshift/lattice2d.hpp"
#include "wshift/linalg.hpp"
#include "wshift/measures.hpp"
#include "wshift/weights1d.hpp"

namespace wshift {

/// Default PSD slack, relative to max(1, trace).
inline constexpr double kPsdTol = 1e-10;

/// Symmetric matrix of moments together with its index labels. One-variable
/// Hankel matrices carry labels (i, 0).
struct MomentMatrix {
  SymmetricMatrix entries;
  std::vector<LatticePoint> labels;
  LatticePoint origin;
  std::size_t order = 0;
};

struct PsdResult {
  bool psd = false;
  double lambda_min = 0.0;
  double threshold = 0.0;  // tol * max(1, trace)
};

/// PSD classification by pivoted Cholesky with pivot threshold
/// tol * max(1, trace); lambda_min reported from a Householder/Sturm
/// eigenvalue computation.
inline PsdResult is_psd(const SymmetricMatrix& m, double tol = kPsdTol) {
  double scale = 1.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) scale = std::max(scale, std::abs(m(i, j)));
  if (m.max_asymmetry() > 1e-12 * scale) throw DomainError("is_psd: matrix is not symmetric");
  PsdResult r;
  r.threshold = tol * std::max(1.0, m.trace());
  r.psd = pivoted_cholesky(m, r.threshold).psd;
  r.lambda_min = min_eigenvalue_householder(m);
  return r;
}

inline PsdResult is_psd(const MomentMatrix& m, double tol = kPsdTol) { return is_psd(m.entries, tol); }

/// (k+1) x (k+1) Hankel matrix (gamma_{m1+i+j}).
inline MomentMatrix hankel_matrix(const UnilateralShift& shift, std::size_t m1, std::size_t k) {
  const Moments1D g = moments(shift, m1 + 2 * k);
  MomentMatrix out{SymmetricMatrix(k + 1), {}, {m1, 0}, k};
  for (std::size_t i = 0; i <= k; ++i) {
    out.labels.push_back({i, 0});
    for (std::size_t j = 0; j <= k; ++j) out.entries(i, j) = g(m1 + i + j);
  }
  return out;
}

/// Hankel matrix of W_kappa at m1 minus y0^2 times the all-ones matrix.
inline SymmetricMatrix shifted_hankel(double kappa, double y0, std::size_t k, std::size_t m1) {
  SymmetricMatrix m = hankel_matrix(make_two_atom_shift(kappa), m1, k).entries;
  m -= SymmetricMatrix(k + 1, y0 * y0);
  return m;
}

inline PsdResult shifted_psd_test(double kappa, double y0, std::size_t k, std::size_t m1,
                                  double tol = kPsdTol) {
  if (!(kappa > 1.0)) throw DomainError("shifted_psd_test needs kappa > 1");
  if (!(y0 > 0.0)) throw DomainError("shifted_psd_test needs y0 > 0");
  return is_psd(shifted_hankel(kappa, y0, k, m1), tol);
}

/// Multi-indices of total degree <= k in graded-lexicographic order:
/// (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
inline std::vector<LatticePoint> graded_lex_indices(std::size_t k) {
  std::vector<LatticePoint> idx;
  for (std::size_t deg = 0; deg <= k; ++deg)
    for (std::size_t p1 = deg + 1; p1-- > 0;) idx.push_back({p1, deg - p1});
  return idx;
}

/// Two-variable moment matrix M_m(k): entry (p, q) = gamma_{m+p+q}, p and q
/// ranging over multi-indices of degree <= k. grid must cover m + (2k, 2k).
inline MomentMatrix two_var_moment_matrix(const MomentGrid& grid, LatticePoint m, std::size_t k) {
  if (k < 1) throw DomainError("moment matrix order must be >= 1");
  if (m.m1 + 2 * k > grid.m1_max() || m.m2 + 2 * k > grid.m2_max())
    throw DomainError("moment grid too small for requested matrix");
  const auto idx = graded_lex_indices(k);
  MomentMatrix out{SymmetricMatrix(idx.size()), idx, m, k};
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) out.entries(a, b) = grid.gamma(m + idx[a] + idx[b]);
  return out;
}

inline MomentMatrix two_var_moment_matrix(const WeightDiagram2D& d, LatticePoint m, std::size_t k) {
  return two_var_moment_matrix(MomentGrid(d, m.m1 + 2 * k, m.m2 + 2 * k), m, k);
}

/// Inclusive rectangle 0 <= m1 <= m1_max, 0 <= m2 <= m2_max.
struct Region {
  std::size_t m1_max = 0;
  std::size_t m2_max = 0;
  bool operator==(const Region&) const = default;
};

struct PositivityVerdict {
  enum class Status { PassOnRegion, Fail };
  struct Witness {
    LatticePoint m;
    double lambda_min = 0.0;
  };

  Status status = Status::Fail;
  std::optional<Witness> witness;
  Region region;
  double tol = kPsdTol;
  std::size_t order = 1;
  std::optional<std::string> tail_certificate;

  bool pass() const { return status == Status::PassOnRegion; }
};

/// How scans feed each moment matrix to is_psd. Moments along a lattice scan
/// can span many orders of magnitude inside one matrix, which makes a
/// trace-relative threshold blind to the small block; UnitDiagonal tests the
/// congruent matrix D^{-1/2} M D^{-1/2} instead and reports its lambda_min.
enum class PsdScaling { UnitDiagonal, Raw };

/// Scans M_m(k) over the region. The first failing m in row-major order
/// (m2 outer, m1 inner) is the witness.
inline PositivityVerdict is_k_hyponormal(const WeightDiagram2D& d, std::size_t k, Region region,
                                         double tol = kPsdTol, PsdScaling scaling = PsdScaling::UnitDiagonal) {
  if (k < 1) throw DomainError("k-hyponormality needs k >= 1");
  PositivityVerdict v;
  v.region = region;
  v.tol = tol;
  v.order = k;
  const MomentGrid grid(d, region.m1_max + 2 * k, region.m2_max + 2 * k);
  for (std::size_t m2 = 0; m2 <= region.m2_max; ++m2) {
    for (std::size_t m1 = 0; m1 <= region.m1_max; ++m1) {
      const auto mat = two_var_moment_matrix(grid, {m1, m2}, k);
      const PsdResult r =
          is_psd(scaling == PsdScaling::UnitDiagonal ? unit_diagonal_scaling(mat.entries) : mat.entries, tol);
      if (!r.psd) {
        v.status = PositivityVerdict::Status::Fail;
        v.witness = PositivityVerdict::Witness{{m1, m2}, r.lambda_min};
        return v;
      }
    }
  }
  v.status = PositivityVerdict::Status::PassOnRegion;
  if (auto j0 = d.tensor_unit_tail_row())
    v.tail_certificate = "rows m2 >= " + std::to_string(*j0) +
                         " are U+ with unit columns; moments there are constant, so every "
                         "M_m(k) with m2 >= " + std::to_string(*j0) + " is a multiple of the all-ones matrix";
  return v;
}

inline PositivityVerdict is_hyponormal_pair(const WeightDiagram2D& d, Region region, double tol = kPsdTol,
                                            PsdScaling scaling = PsdScaling::UnitDiagonal) {
  return is_k_hyponormal(d, 1, region, tol, scaling);
}

/// Largest y0 in (0, 1] (to bisection tolerance 1e-6) for which the shifted
/// Hankel test passes at every m1 <= m1_max. PSD-ness is monotone in y0
/// because lowering y0 adds a positive multiple of the all-ones matrix.
inline double find_max_y0(double kappa, std::size_t k, std::size_t m1_max, double tol = kPsdTol) {
  if (!(kappa > 1.0)) throw DomainError("find_max_y0 needs kappa > 1");
  if (k < 1) throw DomainError("find_max_y0 needs k >= 1");
  std::vector<SymmetricMatrix> hankels;
  const UnilateralShift w = make_two_atom_shift(kappa);
  for (std::size_t m1 = 0; m1 <= m1_max; ++m1) hankels.push_back(hankel_matrix(w, m1, k).entries);
  auto passes = [&](double y0) {
    for (const auto& h : hankels) {
      SymmetricMatrix m = h;
      m -= SymmetricMatrix(k + 1, y0 * y0);
      if (!is_psd(m, tol).psd) return false;
    }
    return true;
  };
  double lo = 0.0, hi = 1.0;
  if (passes(hi)) return hi;
  while (hi - lo > 1e-7) {
    const double mid = 0.5 * (lo + hi);
    (passes(mid) ? lo : hi) = mid;
  }
  return lo;
}

struct ImportantSearchResult {
  std::vector<int> ells;
  double cap = 0.0;
  double ratio = 0.0;
  PositivityVerdict verdict;
};

/// Column weights c (1 - r^{n+1}).
inline UnilateralShift geometric_cap_column(double cap, double ratio) {
  return make_shift({}, GeometricCapTail{cap, ratio}, "W_beta");
}

/// Candidate Bergman-like indices: strictly decreasing sequences of length
/// k with ell_{k-1} >= 2 and ell_0 <= k + 3, ordered by ell_0 and then
/// lexicographically. ell = 1 directly below a U_+ row would make T2 unbounded.
inline std::vector<std::vector<int>> important_ell_candidates(std::size_t k) {
  std::vector<std::vector<int>> out;
  const int top = static_cast<int>(k) + 3;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int below) -> void {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    const int need = static_cast<int>(k - cur.size());  // remaining entries, each >= 2
    for (int l = need + 1; l < below; ++l) {
      cur.push_back(l);
      self(self, l);
      cur.pop_back();
    }
  };
  rec(rec, top + 1);
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.front() < y.front(); });
  return out;
}

/// Searches the fixed grid ells x cap {0.5, 0.8, 1} x ratio {0.5, 0.9} with
/// geometric-cap column 0 and returns the first candidate whose pair is
/// hyponormal on [0, region_size]^2, or nullopt once the grid is exhausted.
inline std::optional<ImportantSearchResult> search_thm_important_params(std::size_t k,
                                                                        std::size_t region_size) {
  if (k < 1) throw DomainError("search needs k >= 1");
  for (const auto& ells : important_ell_candidates(k)) {
    for (double cap : {0.5, 0.8, 1.0}) {
      for (double ratio : {0.5, 0.9}) {
        const auto d = make_thm_important(ells, geometric_cap_column(cap, ratio));
        auto v = is_hyponormal_pair(d, {region_size, region_size});
        if (v.pass()) return ImportantSearchResult{ells, cap, ratio, std::move(v)};
      }
    }
  }
  return std::nullopt;
}

/// y0^2 delta_{(1,1)} + (xi_kappa - y0^2 delta_1) x delta_0, with
/// xi_kappa = (delta_1 + delta_kappa)/2. Masses within 1e-12 of zero are dropped.
inline AtomicMeasure2D remark_measure_decomposition(double kappa, double y0) {
  if (!(kappa > 1.0)) throw DomainError("remark decomposition needs kappa > 1");
  if (!(y0 > 0.0)) throw DomainError("remark decomposition needs y0 > 0");
  const double y2 = y0 * y0;
  const double rest = 0.5 - y2;
  if (rest < -1e-12)
    throw NegativeMassError("NEGATIVE_MASS: xi_kappa - y0^2 delta_1 has mass " + std::to_string(rest) +
                                " at s = 1",
                            rest);
  std::vector<Atom2D> atoms{{1.0, 1.0, y2}, {kappa, 0.0, 0.5}};
  if (rest > 1e-12) atoms.push_back({1.0, 0.0, rest});
  return AtomicMeasure2D(std::move(atoms));
}

}  // namespace wshift

#endif  // WSHIFT_POSITIVITY_HPP
