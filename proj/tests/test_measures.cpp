#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "wshift/errors.hpp"
#include "wshift/measures.hpp"
#include "wshift/weights1d.hpp"

using namespace wshift;

namespace {

// Midpoint sum in theta after s = 1 + sin(theta); smooth integrand, so a few
// thousand panels give ~1e-12 without sharing the library's quadrature.
double bergman2_moment_midpoint(std::size_t n) {
  const int panels = 20000;
  const double h = std::numbers::pi / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double th = -std::numbers::pi / 2 + (i + 0.5) * h;
    sum += std::pow(1.0 + std::sin(th), static_cast<double>(n) + 1.0);
  }
  return sum * h / std::numbers::pi;
}

AtomicMeasure2D remark_measure(double kappa, double y0sq) {
  std::vector<Atom2D> atoms{{1.0, 1.0, y0sq}, {kappa, 0.0, 0.5}};
  if (y0sq < 0.5) atoms.push_back({1.0, 0.0, 0.5 - y0sq});
  return AtomicMeasure2D(atoms);
}

}  // namespace

TEST(Measures, AtomicMoments) {
  EXPECT_DOUBLE_EQ(measure_moment(two_atom_measure(2.0), 3), 4.5);
  for (std::size_t n = 0; n < 20; ++n) EXPECT_DOUBLE_EQ(measure_moment(AtomicMeasure1D::dirac(1.0), n), 1.0);
  const AtomicMeasure2D mu({{1.0, 2.0, 0.25}, {3.0, 0.5, 0.75}});
  EXPECT_DOUBLE_EQ(measure_moment(mu, 2, 1), 0.25 * 2.0 + 0.75 * 9.0 * 0.5);
}

TEST(Measures, AtomicInvariants) {
  const AtomicMeasure1D mu({{2.0, 0.25}, {1.0, 0.5}, {2.0, 0.25}});
  ASSERT_EQ(mu.atoms().size(), 2u);
  EXPECT_DOUBLE_EQ(mu.atoms()[0].location, 1.0);
  EXPECT_DOUBLE_EQ(mu.atoms()[1].mass, 0.5);
  EXPECT_TRUE(mu.is_probability());
  EXPECT_FALSE(AtomicMeasure1D({{1.0, 0.4}}).is_probability());
  EXPECT_THROW(AtomicMeasure1D({{1.0, 0.0}}), DomainError);
  EXPECT_THROW(AtomicMeasure1D({{-1.0, 1.0}}), DomainError);
  EXPECT_THROW(AtomicMeasure2D({{1.0, 1.0, -0.1}}), DomainError);
  EXPECT_EQ(AtomicMeasure2D({{1.0, 1.0, 0.5}, {1.0, 1.0, 0.5}}).atoms().size(), 1u);
}

TEST(Measures, BergmanDensities) {
  const DensityMeasure1D b1{DensityFamily::Bergman1}, b2{DensityFamily::Bergman2};
  EXPECT_NEAR(measure_moment(b2, 0), 1.0, 1e-8);
  EXPECT_NEAR(measure_moment(b2, 2), 2.5, 1e-8);
  for (std::size_t n = 0; n <= 10; ++n) {
    EXPECT_NEAR(measure_moment(b1, n), 1.0 / (n + 1.0), 1e-10);
    EXPECT_NEAR(measure_moment(b2, n), bergman2_moment_midpoint(n), 1e-8) << n;
    EXPECT_NEAR(measure_moment(b2, n), moments(make_bergman_like(2), n)(n), 1e-8) << n;
    EXPECT_NEAR(measure_moment(b1, n), moments(make_bergman_like(1), n)(n), 1e-8) << n;
  }
}

TEST(Measures, PlainQuadratureFallbackIsLooser) {
  const DensityMeasure1D b2{DensityFamily::Bergman2};
  for (std::size_t n : {0u, 3u, 6u})
    EXPECT_NEAR(measure_moment(b2, n, QuadratureMethod::Plain), moments(make_bergman_like(2), n)(n), 1e-4);
}

TEST(Measures, ShiftFromMeasure) {
  const auto w = shift_from_measure(two_atom_measure(2.0), 5);
  EXPECT_NEAR(w.weight(0), std::sqrt(1.5), 1e-15);
  const auto d1 = shift_from_measure(AtomicMeasure1D::dirac(1.0), 4);
  for (std::size_t n = 0; n < 30; ++n) EXPECT_NEAR(d1.weight(n), 1.0, 1e-15);
  EXPECT_NEAR(shift_from_measure(two_atom_measure(3.0), 3).weight(1), std::sqrt(2.5), 1e-15);
  EXPECT_NEAR(w.declared_sup(), std::sqrt(2.0), 1e-15);
  EXPECT_THROW(shift_from_measure(AtomicMeasure1D({{1.0, 0.3}}), 3), DomainError);
}

TEST(Measures, ShiftFromMeasureRoundTrip) {
  const std::vector<AtomicMeasure1D> mus{two_atom_measure(2.0), two_atom_measure(1.5),
                                         AtomicMeasure1D({{0.2, 0.1}, {0.9, 0.6}, {1.7, 0.3}})};
  for (const auto& mu : mus) {
    const UnilateralShift s{shift_from_measure(mu, 8), "from-measure"};
    const auto g = moments(s, 30);
    for (std::size_t n = 0; n <= 30; ++n) EXPECT_NEAR(g(n) / measure_moment(mu, n), 1.0, 1e-12) << n;
  }
}

TEST(Measures, Marginals) {
  const auto x = marginal_x(remark_measure(2.0, 0.5));
  EXPECT_EQ(x, two_atom_measure(2.0));
  EXPECT_EQ(marginal_x(remark_measure(2.0, 0.3)), two_atom_measure(2.0));
  EXPECT_EQ(marginal_x(AtomicMeasure2D({{0.3, 0.7, 1.0}})), AtomicMeasure1D::dirac(0.3));
  EXPECT_EQ(marginal_x(AtomicMeasure2D({{1.0, 0.0, 0.5}, {2.0, 0.0, 0.5}})), two_atom_measure(2.0));
  EXPECT_EQ(marginal_y(AtomicMeasure2D({{0.3, 0.7, 1.0}})), AtomicMeasure1D::dirac(0.7));
}

TEST(Measures, Slices) {
  const auto mu = remark_measure(2.0, 0.5);
  EXPECT_EQ(slice_measure(mu, 1, SliceAxis::Horizontal), AtomicMeasure1D::dirac(1.0));
  EXPECT_EQ(slice_measure(mu, 0, SliceAxis::Horizontal), two_atom_measure(2.0));
  EXPECT_EQ(slice_measure(AtomicMeasure2D({{0.4, 2.0, 3.0}}), 5, SliceAxis::Horizontal), AtomicMeasure1D::dirac(0.4));
  EXPECT_THROW(slice_measure(AtomicMeasure2D({{1.0, 0.0, 1.0}}), 1, SliceAxis::Horizontal), SliceUndefinedError);
  EXPECT_EQ(slice_measure(AtomicMeasure2D({{1.0, 0.0, 1.0}}), 1, SliceAxis::Vertical), AtomicMeasure1D::dirac(0.0));
}

TEST(Measures, SliceInvariants) {
  const std::vector<AtomicMeasure2D> mus{remark_measure(2.0, 0.4),
                                         AtomicMeasure2D({{0.5, 0.5, 0.2}, {1.5, 0.25, 0.3}, {2.0, 1.0, 0.5}}),
                                         AtomicMeasure2D({{0.1, 3.0, 1.0}})};
  for (const auto& mu : mus) {
    EXPECT_EQ(slice_measure(mu, 0, SliceAxis::Horizontal), marginal_x(mu));
    EXPECT_EQ(slice_measure(mu, 0, SliceAxis::Vertical), marginal_y(mu));
    for (std::size_t j = 0; j < 6; ++j) {
      EXPECT_NEAR(slice_measure(mu, j, SliceAxis::Horizontal).total_mass(), 1.0, 1e-12);
      EXPECT_NEAR(slice_measure(mu, j, SliceAxis::Vertical).total_mass(), 1.0, 1e-12);
    }
  }
}

TEST(Measures, MutualAbsoluteContinuity) {
  EXPECT_FALSE(mutually_abs_continuous(two_atom_measure(2.0), AtomicMeasure1D::dirac(1.0)));
  EXPECT_TRUE(mutually_abs_continuous(two_atom_measure(2.0), AtomicMeasure1D({{1.0, 1.0 / 3}, {2.0, 2.0 / 3}})));
  EXPECT_TRUE(mutually_abs_continuous(AtomicMeasure1D::dirac(1.0), AtomicMeasure1D::dirac(1.0)));
}
