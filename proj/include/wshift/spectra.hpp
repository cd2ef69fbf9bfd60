#ifndef WSHIFT_SPECTRA_HPP
#define WSHIFT_SPECTRA_HPP

// Spectral pictures of Reinhardt sets, stored in the modulus plane
// (|z1|, |z2|) as finite unions of products of radial sets.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "wshift/errors.hpp"
#include "wshift/lattice2d.hpp"
#include "wshift/oracle.hpp"
#include "wshift/weights1d.hpp"

namespace wshift {

inline constexpr double kRadialTol = 1e-12;

/// Closed subset of [0, inf): an interval, a single radius, or the closed
/// geometric family {r0 q^k : k >= 0} u {0}.
struct RadialSet {
  enum class Kind { Interval, Point, Geometric };
  Kind kind = Kind::Point;
  double a = 0.0;  // lo, r, or r0
  double b = 0.0;  // hi, unused, or q

  static RadialSet interval(double lo, double hi) {
    if (!(lo >= 0.0) || !(hi >= lo) || !std::isfinite(hi)) throw DomainError("interval needs 0 <= lo <= hi");
    if (hi - lo <= kRadialTol) return point(lo);
    return {Kind::Interval, lo, hi};
  }
  static RadialSet point(double r) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("radius must be finite and >= 0");
    return {Kind::Point, r, 0.0};
  }
  static RadialSet geometric(double r0, double q) {
    if (!(r0 >= 0.0) || !std::isfinite(r0)) throw DomainError("geometric family needs r0 >= 0");
    if (!(q > 0.0 && q < 1.0)) throw DomainError("geometric family needs 0 < q < 1");
    if (r0 <= kRadialTol) return point(0.0);
    return {Kind::Geometric, r0, q};
  }

  double lo() const { return kind == Kind::Interval ? a : (kind == Kind::Point ? a : 0.0); }
  double hi() const { return kind == Kind::Interval ? b : a; }

  bool contains(double x) const {
    const double tol = kRadialTol * std::max(1.0, std::abs(x));
    switch (kind) {
      case Kind::Interval: return x >= a - tol && x <= b + tol;
      case Kind::Point: return std::abs(x - a) <= tol;
      case Kind::Geometric: {
        if (std::abs(x) <= tol) return true;
        if (x <= 0.0 || x > a + tol) return false;
        const double k = std::round(std::log(x / a) / std::log(b));
        return k >= 0.0 && std::abs(a * std::pow(b, k) - x) <= tol;
      }
    }
    return false;
  }

  /// Elements r0 q^k for k < count (geometric), or the defining radii.
  std::vector<double> elements(std::size_t count) const {
    std::vector<double> out;
    for (std::size_t k = 0; k < count; ++k) out.push_back(a * std::pow(b, static_cast<double>(k)));
    return out;
  }

  bool operator==(const RadialSet&) const = default;
};

inline bool approx_equal(const RadialSet& x, const RadialSet& y) {
  return x.kind == y.kind && std::abs(x.a - y.a) <= kRadialTol * std::max(1.0, std::abs(x.a)) &&
         std::abs(x.b - y.b) <= kRadialTol * std::max(1.0, std::abs(x.b));
}

inline bool subset(const RadialSet& x, const RadialSet& y) {
  using K = RadialSet::Kind;
  switch (x.kind) {
    case K::Point: return y.contains(x.a);
    case K::Interval: return y.kind == K::Interval && y.contains(x.a) && y.contains(x.b);
    case K::Geometric:
      if (y.kind == K::Interval) return y.contains(0.0) && y.contains(x.a);
      if (y.kind == K::Geometric) {
        if (!y.contains(x.a)) return false;
        const double p = std::round(std::log(x.b) / std::log(y.b));
        return p >= 1.0 && std::abs(std::pow(y.b, p) - x.b) <= kRadialTol;
      }
      return false;
  }
  return false;
}

inline bool intersects(const RadialSet& x, const RadialSet& y) {
  using K = RadialSet::Kind;
  if (x.kind == K::Point) return y.contains(x.a);
  if (y.kind == K::Point) return x.contains(y.a);
  if (x.kind == K::Interval && y.kind == K::Interval)
    return x.a <= y.b + kRadialTol && y.a <= x.b + kRadialTol;
  if (x.kind == K::Geometric && y.kind == K::Geometric) return true;  // both hold 0
  const RadialSet& g = x.kind == K::Geometric ? x : y;
  const RadialSet& iv = x.kind == K::Geometric ? y : x;
  if (iv.contains(0.0)) return true;
  // Largest member not above hi, compared with lo.
  double k = 0.0;
  if (g.a > iv.b) k = std::ceil(std::log(iv.b / g.a) / std::log(g.b) - 1e-12);
  return g.a * std::pow(g.b, k) >= iv.a - kRadialTol;
}

/// Ordering used by the normal form.
inline bool radial_less(const RadialSet& x, const RadialSet& y) {
  return std::tie(x.kind, x.a, x.b) < std::tie(y.kind, y.a, y.b);
}

/// Product z1 x z2 in the modulus plane.
struct Primitive {
  RadialSet z1;
  RadialSet z2;
  bool contains(double x, double y) const { return z1.contains(x) && z2.contains(y); }
  bool operator==(const Primitive&) const = default;
};

inline bool subset(const Primitive& p, const Primitive& q) { return subset(p.z1, q.z1) && subset(p.z2, q.z2); }
inline bool intersects(const Primitive& p, const Primitive& q) {
  return intersects(p.z1, q.z1) && intersects(p.z2, q.z2);
}

inline Primitive product(RadialSet z1, RadialSet z2) { return {z1, z2}; }

/// Euclidean distance from (x, y) to a primitive, geometric factors read as
/// their nearest member.
inline double distance_to(const Primitive& p, double x, double y) {
  auto axis = [](const RadialSet& s, double v) {
    switch (s.kind) {
      case RadialSet::Kind::Interval: return v < s.a ? s.a - v : (v > s.b ? v - s.b : 0.0);
      case RadialSet::Kind::Point: return std::abs(v - s.a);
      case RadialSet::Kind::Geometric: {
        double best = std::abs(v);
        for (double e = s.a; e > 1e-300 && e > v * 0.5 * s.b; e *= s.b) best = std::min(best, std::abs(v - e));
        return best;
      }
    }
    return 0.0;
  };
  return std::hypot(axis(p.z1, x), axis(p.z2, y));
}

inline const std::vector<std::string>& picture_labels() {
  static const std::vector<std::string> labels{"sigma_T", "sigma_Te", "sigma_l", "sigma_le", "sigma_r", "sigma_re"};
  return labels;
}

/// Finite union of products, tagged with the spectrum it depicts.
class SpectralPicture {
 public:
  SpectralPicture() = default;
  SpectralPicture(std::string label, std::vector<Primitive> primitives)
      : label_(std::move(label)), primitives_(std::move(primitives)) {
    if (std::find(picture_labels().begin(), picture_labels().end(), label_) == picture_labels().end())
      throw DomainError("unknown spectrum label '" + label_ + "'");
  }

  const std::string& label() const { return label_; }
  const std::vector<Primitive>& primitives() const { return primitives_; }
  bool empty() const { return primitives_.empty(); }

  bool contains(double x, double y) const {
    return std::any_of(primitives_.begin(), primitives_.end(), [&](const Primitive& p) { return p.contains(x, y); });
  }

  /// Drops primitives contained in others (keeping one of any equal pair)
  /// and sorts the rest.
  SpectralPicture normal_form() const {
    std::vector<Primitive> ps = primitives_;
    std::sort(ps.begin(), ps.end(), [](const Primitive& p, const Primitive& q) {
      if (!approx_equal(p.z1, q.z1)) return radial_less(p.z1, q.z1);
      return radial_less(p.z2, q.z2);
    });
    std::vector<Primitive> kept;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      bool absorbed = false;
      for (std::size_t j = 0; j < ps.size() && !absorbed; ++j) {
        if (i == j || !subset(ps[i], ps[j])) continue;
        // Mutual containment means equal sets; keep the first copy.
        absorbed = !subset(ps[j], ps[i]) || j < i;
      }
      if (!absorbed) kept.push_back(ps[i]);
    }
    SpectralPicture out;
    out.label_ = label_;
    out.primitives_ = std::move(kept);
    return out;
  }

  /// Set equality of normal forms, primitive by primitive.
  bool same_set(const SpectralPicture& other) const {
    const auto x = normal_form(), y = other.normal_form();
    if (x.primitives_.size() != y.primitives_.size()) return false;
    for (std::size_t i = 0; i < x.primitives_.size(); ++i)
      if (!approx_equal(x.primitives_[i].z1, y.primitives_[i].z1) ||
          !approx_equal(x.primitives_[i].z2, y.primitives_[i].z2))
        return false;
    return true;
  }

  bool has_interior() const {
    return std::any_of(primitives_.begin(), primitives_.end(), [](const Primitive& p) {
      return p.z1.kind == RadialSet::Kind::Interval && p.z2.kind == RadialSet::Kind::Interval;
    });
  }

 private:
  std::string label_ = "sigma_T";
  std::vector<Primitive> primitives_;
};

/// Structural equality including the label.
inline bool operator==(const SpectralPicture& x, const SpectralPicture& y) {
  return x.label() == y.label() && x.same_set(y);
}

struct PictureBundle {
  std::vector<SpectralPicture> pictures;

  const SpectralPicture& at(const std::string& label) const {
    for (const auto& p : pictures)
      if (p.label() == label) return p;
    throw DomainError("picture bundle has no " + label);
  }
  const SpectralPicture& taylor() const { return at("sigma_T"); }
  const SpectralPicture& essential() const { return at("sigma_Te"); }
};

// --- closed forms -----------------------------------------------------------

struct OneVariablePicture {
  RadialSet spectrum;   // |lambda| values of the closed disk
  RadialSet essential;  // the circle of radius ||W||
  int index_inside = -1;
  double radius = 0.0;
};

inline OneVariablePicture picture_1var(const UnilateralShift& shift) {
  const auto h = is_hyponormal_1d(shift, 256);
  if (!h.pass)
    throw HypothesisError(shift.label + " is not hyponormal" +
                          (h.witness ? " (alpha_" + std::to_string(*h.witness) + " > alpha_" +
                                           std::to_string(*h.witness + 1) + ")"
                                     : std::string(" (tail not certified)")));
  const double r = norm(shift);
  return {RadialSet::interval(0.0, r), RadialSet::point(r), -1, r};
}

namespace detail {

inline PictureBundle compactper_bundle(double a0, double a1, double c) {
  using R = RadialSet;
  SpectralPicture t("sigma_T", {{R::interval(0, a1), R::interval(0, c)}, {R::interval(0, a0), R::point(0)}});
  SpectralPicture te("sigma_Te", {{R::interval(0, a1), R::point(c)},
                                  {R::point(a1), R::interval(0, c)},
                                  {R::point(a0), R::point(0)}});
  return {{t.normal_form(), te.normal_form()}};
}

}  // namespace detail

/// Row j >= 1 norms are compared for j <= this many rows.
inline constexpr std::size_t kRowHypothesisSpan = 8;

/// sigma_T and sigma_Te for diagrams with a distinguished row 0 and common
/// row norm above it. Needs ||row_j|| = ||row_1|| < ||row_0||.
inline PictureBundle picture_thm_compactper(const WeightDiagram2D& d) {
  const Family f = d.family();
  if (f != Family::ThmCompactPer && f != Family::ExampleBergman && f != Family::ThmKhypo)
    throw HypothesisError("family " + d.family_name() + " is not of compact-perturbation type");
  const double a0 = norm(d.row(0));
  const double a1 = norm(d.row(1));
  for (std::size_t j = 2; j <= kRowHypothesisSpan; ++j) {
    const double aj = norm(d.row(j));
    if (std::abs(aj - a1) > 1e-9 * std::max(1.0, a1))
      throw HypothesisError("row " + std::to_string(j) + " has norm " + std::to_string(aj) + " != row 1 norm " +
                            std::to_string(a1));
  }
  if (!(a0 > a1 + 1e-12))
    throw HypothesisError("row 0 norm " + std::to_string(a0) + " must exceed row 1 norm " + std::to_string(a1));
  return detail::compactper_bundle(a0, a1, norm(d.column(0)));
}

inline PictureBundle picture_thm_important(const std::vector<int>& ells, double c) {
  if (ells.empty()) throw DomainError("ells must be non-empty");
  for (int l : ells)
    if (l < 1) throw DomainError("each ell must be >= 1");
  if (*std::max_element(ells.begin(), ells.end()) != ells.front())
    throw DomainError("ell_0 must be the largest ell");
  if (!(c > 0.0)) throw DomainError("c must be positive");
  using R = RadialSet;
  const double b0 = std::sqrt(static_cast<double>(ells.front()));
  SpectralPicture t("sigma_T", {{R::interval(0, 1), R::interval(0, c)}, {R::interval(0, b0), R::point(0)}});
  std::vector<Primitive> te{{R::interval(0, 1), R::point(c)}, {R::point(1), R::interval(0, c)}};
  for (int l : ells) te.push_back({R::point(std::sqrt(static_cast<double>(l))), R::point(0)});
  return {{t.normal_form(), SpectralPicture("sigma_Te", te).normal_form()}};
}

inline PictureBundle picture_example_exof1atom(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha < beta && beta <= 1.0)) throw DomainError("exof1atom needs 0 < alpha < beta <= 1");
  using R = RadialSet;
  const std::vector<Primitive> t{{R::interval(0, 1), R::point(0)}, {R::point(0), R::interval(0, beta)}};
  const std::vector<Primitive> e{{R::point(0), R::point(0)},
                                 {R::geometric(1.0, alpha), R::point(0)},
                                 {R::point(0), R::geometric(beta, alpha)}};
  PictureBundle b;
  b.pictures.push_back(SpectralPicture("sigma_T", t).normal_form());
  b.pictures.push_back(SpectralPicture("sigma_Te", e).normal_form());
  b.pictures.push_back(SpectralPicture("sigma_r", t).normal_form());
  for (const char* label : {"sigma_l", "sigma_le", "sigma_re"})
    b.pictures.push_back(SpectralPicture(label, e).normal_form());
  return b;
}

inline PictureBundle picture_thm_khypo(double kappa) {
  if (!(kappa > 1.0)) throw DomainError("khypo picture needs kappa > 1");
  return detail::compactper_bundle(std::sqrt(kappa), 1.0, 1.0);
}

// --- outer boundary ---------------------------------------------------------

namespace detail {

/// Breakpoint/gap decomposition of one axis. Cell 2i is the breakpoint
/// xs[i]; cell 2i+1 is the open gap after it (the last gap is unbounded).
struct AxisCells {
  std::vector<double> xs;

  std::size_t count() const { return 2 * xs.size(); }
  double sample(std::size_t c) const {
    if (c % 2 == 0) return xs[c / 2];
    const std::size_t i = c / 2;
    return i + 1 < xs.size() ? 0.5 * (xs[i] + xs[i + 1]) : xs[i] + 1.0;
  }
  RadialSet closure(std::size_t c) const {
    if (c % 2 == 0) return RadialSet::point(xs[c / 2]);
    return RadialSet::interval(xs[c / 2], xs[c / 2 + 1]);
  }
};

inline AxisCells make_axis(std::vector<double> v) {
  v.push_back(0.0);
  std::sort(v.begin(), v.end());
  AxisCells a;
  for (double x : v)
    if (a.xs.empty() || x - a.xs.back() > kRadialTol * std::max(1.0, x)) a.xs.push_back(x);
  return a;
}

/// Geometric factors replaced by their largest member and the accumulation point.
inline std::vector<Primitive> finite_surrogate(const SpectralPicture& p) {
  std::vector<Primitive> out;
  auto expand = [](const RadialSet& s) {
    if (s.kind != RadialSet::Kind::Geometric) return std::vector<RadialSet>{s};
    return std::vector<RadialSet>{RadialSet::point(s.a), RadialSet::point(0.0)};
  };
  for (const auto& prim : p.primitives())
    for (const auto& x : expand(prim.z1))
      for (const auto& y : expand(prim.z2)) out.push_back({x, y});
  return out;
}

}  // namespace detail

/// Boundary of the unbounded component of the complement of the picture in
/// the closed quadrant. Points on the axes belong to it only when they touch
/// that component, so the axes themselves are not boundary.
inline SpectralPicture outer_boundary(const SpectralPicture& p) {
  const auto prims = detail::finite_surrogate(p);
  SpectralPicture empty_out(p.label(), {});
  if (prims.empty()) return empty_out;
  std::vector<double> xv, yv;
  for (const auto& q : prims) {
    xv.push_back(q.z1.a);
    yv.push_back(q.z2.a);
    if (q.z1.kind == RadialSet::Kind::Interval) xv.push_back(q.z1.b);
    if (q.z2.kind == RadialSet::Kind::Interval) yv.push_back(q.z2.b);
  }
  const auto ax = detail::make_axis(xv), ay = detail::make_axis(yv);
  const std::size_t nx = ax.count(), ny = ay.count();
  auto id = [ny](std::size_t i, std::size_t j) { return i * ny + j; };

  std::vector<char> in_set(nx * ny, 0);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const double x = ax.sample(i), y = ay.sample(j);
      in_set[id(i, j)] = std::any_of(prims.begin(), prims.end(), [&](const Primitive& q) { return q.contains(x, y); });
    }

  // a is a face of b along one axis when equal, or a is the breakpoint next to gap b.
  auto face1 = [](std::size_t a, std::size_t b) { return a == b || (a % 2 == 0 && b % 2 == 1 && (a == b + 1 || a + 1 == b)); };
  auto face = [&](std::size_t ai, std::size_t aj, std::size_t bi, std::size_t bj) {
    return face1(ai, bi) && face1(aj, bj);
  };

  std::vector<char> outer(nx * ny, 0);
  std::deque<std::pair<std::size_t, std::size_t>> queue{{nx - 1, ny - 1}};
  outer[id(nx - 1, ny - 1)] = 1;
  while (!queue.empty()) {
    const auto [i, j] = queue.front();
    queue.pop_front();
    for (std::size_t u = i > 0 ? i - 1 : 0; u <= std::min(nx - 1, i + 1); ++u)
      for (std::size_t v = j > 0 ? j - 1 : 0; v <= std::min(ny - 1, j + 1); ++v) {
        if (outer[id(u, v)] || in_set[id(u, v)]) continue;
        if (!face(u, v, i, j) && !face(i, j, u, v)) continue;
        outer[id(u, v)] = 1;
        queue.emplace_back(u, v);
      }
  }

  std::vector<char> bd(nx * ny, 0);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      if (!in_set[id(i, j)]) continue;
      for (std::size_t u = i > 0 ? i - 1 : 0; u <= std::min(nx - 1, i + 1) && !bd[id(i, j)]; ++u)
        for (std::size_t v = j > 0 ? j - 1 : 0; v <= std::min(ny - 1, j + 1); ++v)
          if (outer[id(u, v)] && face(i, j, u, v)) {
            bd[id(i, j)] = 1;
            break;
          }
    }

  // Merge maximal runs of boundary cells along each grid line.
  std::vector<Primitive> out;
  for (std::size_t j = 0; j < ny; j += 2)
    for (std::size_t i = 0; i < nx;) {
      if (!bd[id(i, j)]) { ++i; continue; }
      std::size_t e = i;
      while (e + 1 < nx && bd[id(e + 1, j)]) ++e;
      const double lo = ax.closure(i).a;
      const double hi = ax.closure(e).kind == RadialSet::Kind::Interval ? ax.closure(e).b : ax.closure(e).a;
      out.push_back({RadialSet::interval(lo, hi), RadialSet::point(ay.xs[j / 2])});
      i = e + 1;
    }
  for (std::size_t i = 0; i < nx; i += 2)
    for (std::size_t j = 0; j < ny;) {
      if (!bd[id(i, j)]) { ++j; continue; }
      std::size_t e = j;
      while (e + 1 < ny && bd[id(i, e + 1)]) ++e;
      const double lo = ay.closure(j).a;
      const double hi = ay.closure(e).kind == RadialSet::Kind::Interval ? ay.closure(e).b : ay.closure(e).a;
      out.push_back({RadialSet::point(ax.xs[i / 2]), RadialSet::interval(lo, hi)});
      j = e + 1;
    }
  return SpectralPicture(p.label(), out).normal_form();
}

// --- raster oracle ----------------------------------------------------------

/// Square pixel grid over [0, width] x [0, height].
struct RasterFrame {
  std::size_t pixels = 2000;
  double width = 1.0;
  double height = 1.0;
};

inline RasterFrame frame_for(const std::vector<const SpectralPicture*>& pics, std::size_t pixels = 2000) {
  double mx = 0.0, my = 0.0;
  for (const auto* p : pics)
    for (const auto& q : p->primitives()) {
      mx = std::max(mx, q.z1.hi());
      my = std::max(my, q.z2.hi());
    }
  return {pixels, 1.1 * std::max(mx, 0.1), 1.1 * std::max(my, 0.1)};
}

struct Raster {
  RasterFrame frame;
  std::vector<char> on;  // row-major, index iy * pixels + ix

  explicit Raster(RasterFrame f) : frame(f), on(f.pixels * f.pixels, 0) {}
  char& at(std::size_t ix, std::size_t iy) { return on[iy * frame.pixels + ix]; }
  char at(std::size_t ix, std::size_t iy) const { return on[iy * frame.pixels + ix]; }
  std::size_t count() const { return static_cast<std::size_t>(std::count(on.begin(), on.end(), 1)); }
};

/// Pixels whose closed square meets the picture. Geometric families are
/// drawn member by member until they collapse into pixel 0.
inline Raster rasterize(const SpectralPicture& p, RasterFrame f) {
  Raster r(f);
  const double dx = f.width / static_cast<double>(f.pixels), dy = f.height / static_cast<double>(f.pixels);
  auto ranges = [&](const RadialSet& s, double d) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    auto cell = [&](double v) {
      return std::min(f.pixels - 1, static_cast<std::size_t>(std::max(0.0, std::floor(v / d))));
    };
    switch (s.kind) {
      case RadialSet::Kind::Interval: out.emplace_back(cell(s.a), cell(s.b)); break;
      case RadialSet::Kind::Point: out.emplace_back(cell(s.a), cell(s.a)); break;
      case RadialSet::Kind::Geometric:
        out.emplace_back(0, 0);
        for (double e = s.a; e >= d; e *= s.b) out.emplace_back(cell(e), cell(e));
        break;
    }
    return out;
  };
  for (const auto& q : p.primitives())
    for (const auto& [x0, x1] : ranges(q.z1, dx))
      for (const auto& [y0, y1] : ranges(q.z2, dy))
        for (std::size_t iy = y0; iy <= y1; ++iy)
          for (std::size_t ix = x0; ix <= x1; ++ix) r.at(ix, iy) = 1;
  return r;
}

/// Raster outer boundary: flood the complement from the top and right edges
/// (4-connected), then keep set pixels with an 8-neighbour in the flood.
inline Raster raster_outer_boundary(const SpectralPicture& p, RasterFrame f) {
  const Raster set = rasterize(p, f);
  const std::size_t n = f.pixels;
  std::vector<char> outer(n * n, 0);
  std::vector<std::size_t> stack;
  auto seed = [&](std::size_t ix, std::size_t iy) {
    if (!set.at(ix, iy) && !outer[iy * n + ix]) {
      outer[iy * n + ix] = 1;
      stack.push_back(iy * n + ix);
    }
  };
  for (std::size_t k = 0; k < n; ++k) {
    seed(k, n - 1);
    seed(n - 1, k);
  }
  while (!stack.empty()) {
    const std::size_t c = stack.back();
    stack.pop_back();
    const std::size_t ix = c % n, iy = c / n;
    if (ix > 0) seed(ix - 1, iy);
    if (ix + 1 < n) seed(ix + 1, iy);
    if (iy > 0) seed(ix, iy - 1);
    if (iy + 1 < n) seed(ix, iy + 1);
  }
  Raster bd(f);
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) {
      if (!set.at(ix, iy)) continue;
      bool touch = false;
      for (std::size_t v = iy > 0 ? iy - 1 : 0; v <= std::min(n - 1, iy + 1) && !touch; ++v)
        for (std::size_t u = ix > 0 ? ix - 1 : 0; u <= std::min(n - 1, ix + 1); ++u)
          if (outer[v * n + u]) {
            touch = true;
            break;
          }
      bd.at(ix, iy) = touch;
    }
  return bd;
}

/// Every lit pixel of each raster lies within `pixels` (Chebyshev) of a lit
/// pixel of the other.
inline bool rasters_match(const Raster& x, const Raster& y, std::size_t pixels = 1) {
  const std::size_t n = x.frame.pixels;
  if (y.frame.pixels != n) throw DomainError("raster frames differ");
  auto covered = [&](const Raster& a, const Raster& b) {
    for (std::size_t iy = 0; iy < n; ++iy)
      for (std::size_t ix = 0; ix < n; ++ix) {
        if (!a.at(ix, iy)) continue;
        bool hit = false;
        for (std::size_t v = iy > pixels ? iy - pixels : 0; v <= std::min(n - 1, iy + pixels) && !hit; ++v)
          for (std::size_t u = ix > pixels ? ix - pixels : 0; u <= std::min(n - 1, ix + pixels); ++u)
            if (b.at(u, v)) {
              hit = true;
              break;
            }
        if (!hit) return false;
      }
    return true;
  };
  return covered(x, y) && covered(y, x);
}

// --- components -------------------------------------------------------------

inline constexpr std::size_t kInfiniteComponents = std::numeric_limits<std::size_t>::max();

/// Connected components of the modulus-plane set. A geometric family yields
/// countably many components unless an interval starting at 0 in the same
/// coordinate meets every member, in which case they all join it.
inline std::size_t component_count(const SpectralPicture& pic) {
  const auto nf = pic.normal_form();
  struct Piece {
    Primitive shape;
    bool tail = false;  // members below the finite cutoff plus the accumulation point
    bool tail_on_z1 = true;
  };
  std::vector<Piece> pieces;
  const auto& prims = nf.primitives();
  for (std::size_t idx = 0; idx < prims.size(); ++idx) {
    const auto& p = prims[idx];
    const bool g1 = p.z1.kind == RadialSet::Kind::Geometric, g2 = p.z2.kind == RadialSet::Kind::Geometric;
    if (g1 && g2) return kInfiniteComponents;
    if (!g1 && !g2) {
      pieces.push_back({p});
      continue;
    }
    const RadialSet& g = g1 ? p.z1 : p.z2;
    // Cut below every positive coordinate used by the other primitives.
    double floor_value = std::numeric_limits<double>::infinity();
    for (std::size_t o = 0; o < prims.size(); ++o) {
      if (o == idx) continue;
      const RadialSet& s = g1 ? prims[o].z1 : prims[o].z2;
      for (double v : {s.a, s.kind == RadialSet::Kind::Interval ? s.b : s.a})
        if (v > kRadialTol) floor_value = std::min(floor_value, v);
    }
    std::size_t k = 0;
    for (double e = g.a; e >= 0.5 * floor_value && k < 100000; e *= g.b, ++k) {
      const RadialSet pt = RadialSet::point(e);
      pieces.push_back({g1 ? Primitive{pt, p.z2} : Primitive{p.z1, pt}});
    }
    pieces.push_back({p, true, g1});
  }

  std::vector<std::size_t> parent(pieces.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (pieces[i].tail) {
      const Piece& t = pieces[i];
      const RadialSet& other = t.tail_on_z1 ? t.shape.z2 : t.shape.z1;
      std::optional<std::size_t> absorber;
      for (std::size_t j = 0; j < pieces.size() && !absorber; ++j) {
        if (pieces[j].tail) continue;
        const RadialSet& same = t.tail_on_z1 ? pieces[j].shape.z1 : pieces[j].shape.z2;
        const RadialSet& cross = t.tail_on_z1 ? pieces[j].shape.z2 : pieces[j].shape.z1;
        if (same.kind == RadialSet::Kind::Interval && same.a <= kRadialTol && intersects(cross, other)) absorber = j;
      }
      if (!absorber) return kInfiniteComponents;
      parent[find(i)] = find(*absorber);
      continue;
    }
    for (std::size_t j = i + 1; j < pieces.size(); ++j)
      if (!pieces[j].tail && intersects(pieces[i].shape, pieces[j].shape)) parent[find(i)] = find(j);
  }
  std::size_t roots = 0;
  for (std::size_t i = 0; i < pieces.size(); ++i) roots += find(i) == i;
  return roots;
}

// --- necessary conditions and probes ----------------------------------------

struct SliceNormVerdict {
  bool pass = false;
  std::vector<double> row_norms;     // index j = 0..J
  std::vector<double> column_norms;  // index i = 0..J
  std::optional<std::string> failure;
};

/// Subnormality forces ||row_j|| equal for j >= 1 and ||column_i|| equal for
/// i >= 1. A FAIL therefore rules subnormality out.
inline SliceNormVerdict slice_norm_necessary_check(const WeightDiagram2D& d, std::size_t J) {
  if (J < 2) throw DomainError("slice norm check needs J >= 2");
  SliceNormVerdict v;
  for (std::size_t j = 0; j <= J; ++j) {
    v.row_norms.push_back(norm(horizontal_slice(d, j)));
    v.column_norms.push_back(norm(vertical_slice(d, j)));
  }
  for (std::size_t j = 2; j <= J && !v.failure; ++j) {
    if (std::abs(v.row_norms[j] - v.row_norms[1]) > 1e-9)
      v.failure = "row " + std::to_string(j) + " norm differs from row 1";
    else if (std::abs(v.column_norms[j] - v.column_norms[1]) > 1e-9)
      v.failure = "column " + std::to_string(j) + " norm differs from column 1";
  }
  v.pass = !v.failure;
  return v;
}

enum class KernelVerdict { Converges, Diverges, Undecided };

inline std::string to_string(KernelVerdict v) {
  switch (v) {
    case KernelVerdict::Converges: return "CONVERGES";
    case KernelVerdict::Diverges: return "DIVERGES";
    case KernelVerdict::Undecided: return "UNDECIDED";
  }
  return "";
}

inline constexpr double kKernelDelta = 0.02;

struct KernelProbe {
  KernelVerdict verdict = KernelVerdict::Undecided;
  double diagonal_rate = 0.0;  // root-test statistic of the diagonal sums
  double max_ray_rate = 0.0;   // largest root-test statistic along probed rays
};

/// Root tests on the terms r1^{2 m1} r2^{2 m2} / gamma_m of the reproducing
/// kernel series over the triangle m1 + m2 <= N. Each statistic is the
/// geometric growth rate between the midpoint and the end of its sequence.
inline KernelProbe kernel_convergence_probe(const WeightDiagram2D& d, double r1, double r2, std::size_t N = 200) {
  if (!(r1 >= 0.0) || !(r2 >= 0.0)) throw DomainError("probe point needs r1, r2 >= 0");
  if (N < 8) throw DomainError("probe needs N >= 8");
  KernelProbe out;
  if (r1 == 0.0 && r2 == 0.0) {
    out.verdict = KernelVerdict::Converges;
    return out;
  }
  const MomentGrid grid(d, N, N);
  const double ninf = -std::numeric_limits<double>::infinity();
  auto log_power = [&](double r, std::size_t e) {
    if (e == 0) return 0.0;
    return r == 0.0 ? ninf : 2.0 * static_cast<double>(e) * std::log(r);
  };
  auto log_term = [&](std::size_t i, std::size_t j) {
    return log_power(r1, i) + log_power(r2, j) - grid.log_gamma(i, j);
  };
  auto rate = [&](double lo_val, double hi_val, std::size_t steps) {
    if (hi_val == ninf) return 0.0;
    if (lo_val == ninf) return std::numeric_limits<double>::infinity();
    return std::exp((hi_val - lo_val) / static_cast<double>(steps));
  };

  auto log_diag = [&](std::size_t n) {
    double mx = ninf;
    for (std::size_t i = 0; i <= n; ++i) mx = std::max(mx, log_term(i, n - i));
    if (mx == ninf) return ninf;
    double s = 0.0;
    for (std::size_t i = 0; i <= n; ++i) s += std::exp(log_term(i, n - i) - mx);
    return mx + std::log(s);
  };
  const std::size_t half = N / 2;
  out.diagonal_rate = rate(log_diag(half), log_diag(N), N - half);

  auto ray = [&](std::size_t i0, std::size_t j0, std::size_t di, std::size_t dj) {
    const std::size_t span_i = di ? (N - i0) / di : N, span_j = dj ? (N - j0) / dj : N;
    const std::size_t t_end = std::min(span_i, span_j), t_mid = t_end / 2;
    return rate(log_term(i0 + di * t_mid, j0 + dj * t_mid), log_term(i0 + di * t_end, j0 + dj * t_end),
                t_end - t_mid);
  };
  for (std::size_t j = 0; j <= 4; ++j) {
    out.max_ray_rate = std::max(out.max_ray_rate, ray(0, j, 1, 0));
    out.max_ray_rate = std::max(out.max_ray_rate, ray(j, 0, 0, 1));
  }
  out.max_ray_rate = std::max({out.max_ray_rate, ray(0, 0, 1, 1), ray(0, 0, 2, 1), ray(0, 0, 1, 2)});

  if (out.diagonal_rate < 1.0 - kKernelDelta)
    out.verdict = KernelVerdict::Converges;
  else if (out.max_ray_rate > 1.0 + kKernelDelta)
    out.verdict = KernelVerdict::Diverges;
  return out;
}

struct LeftIdentityCheck {
  double lhs = 0.0;  // canonical left inverse norm at resolution N
  double rhs = 0.0;  // 1 / dist(lambda, unit circle)
  bool equal = false;
  double sigma_min = 0.0;         // primary route
  double oracle_sigma_min = 0.0;  // Givens QR / inverse iteration route
};

/// For shifts whose weights are at most 1 and eventually 1 the left spectrum
/// is the unit circle, so the distance identity predicts 1/(1 - |lambda|).
inline LeftIdentityCheck left_identity_check(const UnilateralShift& shift, std::complex<double> lambda,
                                             std::size_t N = 200) {
  if (std::abs(lambda) >= 1.0) throw DomainError("lambda must lie inside the open unit disk");
  const auto* tail = std::get_if<ConstantTail>(&shift.weights.tail());
  if (!tail || std::abs(tail->value - 1.0) > 1e-15)
    throw HypothesisError(shift.label + " is not eventually unit-weight");
  if (!is_hyponormal_1d(shift, std::max<std::size_t>(2, shift.weights.head().size())).pass)
    throw HypothesisError(shift.label + " is not hyponormal");
  LeftIdentityCheck c;
  const auto lin = canonical_left_inverse_norm(shift, lambda, N);
  c.sigma_min = lin.sigma_min;
  c.lhs = lin.value;
  c.rhs = 1.0 / (1.0 - std::abs(lambda));
  c.equal = std::abs(c.lhs - c.rhs) <= 1e-6 * c.rhs;
  c.oracle_sigma_min = oracle::min_singular(oracle::make_section(shift, lambda, N));
  return c;
}

// --- SVG --------------------------------------------------------------------

struct SvgOptions {
  std::size_t family_truncation = 12;
  int width = 600;
  int height = 400;
};

namespace detail {

inline std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  if (std::string(buf) == "-0.000000") return "0.000000";
  return buf;
}

}  // namespace detail

/// Deterministic SVG of layered pictures. The first layer draws area
/// primitives filled light gray; every layer strokes segments at 2pt and marks
/// points with r=2 dots. Geometric families show their leading members plus a
/// hollow marker at the accumulation point.
inline std::string render_svg(const std::vector<SpectralPicture>& layers, const SvgOptions& opt = {}) {
  using detail::fmt6;
  double mx = 0.1, my = 0.1;
  for (const auto& l : layers)
    for (const auto& q : l.primitives()) {
      mx = std::max(mx, q.z1.hi());
      my = std::max(my, q.z2.hi());
    }
  const double margin = 40.0;
  const double scale =
      std::min((opt.width - 2 * margin) / (1.1 * mx), (opt.height - 2 * margin) / (1.1 * my));
  auto X = [&](double x) { return fmt6(margin + scale * x); };
  auto Y = [&](double y) { return fmt6(opt.height - margin - scale * y); };

  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) +
                  "\" height=\"" + std::to_string(opt.height) + "\" viewBox=\"0 0 " + std::to_string(opt.width) +
                  " " + std::to_string(opt.height) + "\">\n";
  s += "<line class=\"axis\" x1=\"" + X(0) + "\" y1=\"" + Y(0) + "\" x2=\"" + X(1.1 * mx) + "\" y2=\"" + Y(0) +
       "\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
  s += "<line class=\"axis\" x1=\"" + X(0) + "\" y1=\"" + Y(0) + "\" x2=\"" + X(0) + "\" y2=\"" + Y(1.1 * my) +
       "\" stroke=\"black\" stroke-width=\"0.5\"/>\n";

  for (std::size_t li = 0; li < layers.size(); ++li) {
    const auto nf = layers[li].normal_form();
    const std::string color = li == 0 && layers.size() > 1 ? "gray" : "black";
    s += "<g class=\"" + nf.label() + "\">\n";
    auto draw = [&](const RadialSet& a, const RadialSet& b, const std::string& cls) {
      using K = RadialSet::Kind;
      if (a.kind == K::Interval && b.kind == K::Interval) {
        s += "<rect class=\"area\" x=\"" + X(a.a) + "\" y=\"" + Y(b.b) + "\" width=\"" + fmt6(scale * (a.b - a.a)) +
             "\" height=\"" + fmt6(scale * (b.b - b.a)) + "\" fill=\"lightgray\" stroke=\"" + color +
             "\" stroke-width=\"2\"/>\n";
      } else if (a.kind == K::Interval || b.kind == K::Interval) {
        const double x1 = a.a, x2 = a.kind == K::Interval ? a.b : a.a;
        const double y1 = b.a, y2 = b.kind == K::Interval ? b.b : b.a;
        s += "<line class=\"" + (cls.empty() ? std::string("segment") : cls) + "\" x1=\"" + X(x1) + "\" y1=\"" +
             Y(y1) + "\" x2=\"" + X(x2) + "\" y2=\"" + Y(y2) + "\" stroke=\"" + color +
             "\" stroke-width=\"2\"" + (cls.empty() ? "" : " stroke-dasharray=\"2,2\"") + "/>\n";
      } else {
        s += "<circle class=\"" + (cls.empty() ? std::string("dot") : cls) + "\" cx=\"" + X(a.a) + "\" cy=\"" +
             Y(b.a) + "\" r=\"2\" fill=\"" + color + "\"/>\n";
      }
    };
    for (const auto& q : nf.primitives()) {
      const bool g1 = q.z1.kind == RadialSet::Kind::Geometric, g2 = q.z2.kind == RadialSet::Kind::Geometric;
      if (!g1 && !g2) {
        draw(q.z1, q.z2, "");
        continue;
      }
      const std::string axis = g1 ? "z1" : "z2";
      const RadialSet& g = g1 ? q.z1 : q.z2;
      const RadialSet& other = g1 ? q.z2 : q.z1;
      for (double e : g.elements(opt.family_truncation)) {
        const RadialSet pt = RadialSet::point(e);
        const RadialSet other_pt = other.kind == RadialSet::Kind::Geometric ? RadialSet::point(other.a) : other;
        draw(g1 ? pt : other_pt, g1 ? other_pt : pt, "family-member " + axis);
      }
      const double ax = g1 ? 0.0 : other.a, ay = g1 ? other.a : 0.0;
      s += "<circle class=\"accumulation " + axis + "\" cx=\"" + X(ax) + "\" cy=\"" + Y(ay) +
           "\" r=\"4\" fill=\"none\" stroke=\"" + color + "\" stroke-dasharray=\"1,1\"/>\n";
    }
    s += "</g>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace wshift

#endif  // WSHIFT_SPECTRA_HPP
