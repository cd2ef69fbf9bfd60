#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "wshift/errors.hpp"
#include "wshift/spectra.hpp"

using namespace wshift;
using R = RadialSet;

namespace {

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

double distance_to_set(const SpectralPicture& p, double x, double y) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : p.primitives()) best = std::min(best, distance_to(q, x, y));
  return best;
}

}  // namespace

TEST(Spectra, RadialSets) {
  const auto g = R::geometric(1.0, 0.5);
  EXPECT_TRUE(g.contains(0.25));
  EXPECT_TRUE(g.contains(0.0));
  EXPECT_FALSE(g.contains(0.3));
  EXPECT_TRUE(R::interval(0, 1).contains(0.4));
  EXPECT_FALSE(R::point(1).contains(0.999));
  EXPECT_TRUE(subset(R::point(0.5), R::interval(0, 1)));
  EXPECT_TRUE(subset(g, R::interval(0, 1)));
  EXPECT_FALSE(subset(R::interval(0, 1), g));
  EXPECT_TRUE(intersects(g, R::point(0.125)));
  EXPECT_FALSE(intersects(g, R::interval(0.3, 0.45)));
  EXPECT_EQ(R::interval(0.7, 0.7).kind, R::Kind::Point);
  EXPECT_THROW(R::interval(1.0, 0.5), DomainError);
  EXPECT_THROW(R::point(-1.0), DomainError);
  EXPECT_THROW(R::geometric(1.0, 1.0), DomainError);
  const auto e = g.elements(4);
  ASSERT_EQ(e.size(), 4u);
  EXPECT_DOUBLE_EQ(e[3], 0.125);
}

TEST(Spectra, PictureLabelsValidated) {
  EXPECT_THROW(SpectralPicture("sigma_x", {}), DomainError);
  for (const auto& l : picture_labels()) EXPECT_NO_THROW(SpectralPicture(l, {}));
}

TEST(Spectra, OneVariablePictures) {
  const auto u = picture_1var(make_unilateral_shift());
  EXPECT_DOUBLE_EQ(u.radius, 1.0);
  EXPECT_TRUE(approx_equal(u.spectrum, R::interval(0, 1)));
  EXPECT_TRUE(approx_equal(u.essential, R::point(1)));
  EXPECT_EQ(u.index_inside, -1);
  EXPECT_NEAR(picture_1var(make_bergman_like(2)).radius, std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(picture_1var(make_shift({0.5}, ConstantTail{1.0})).radius, 1.0);
  EXPECT_THROW(picture_1var(make_shift({1.0}, ConstantTail{0.5})), HypothesisError);
}

TEST(Spectra, KhypoPictureClosedForm) {
  const auto b = picture_thm_khypo(2.0);
  const double s = std::sqrt(2.0);
  const SpectralPicture t("sigma_T", {{R::interval(0, s), R::point(0)}, {R::interval(0, 1), R::interval(0, 1)}});
  const SpectralPicture te("sigma_Te", {{R::point(1), R::interval(0, 1)}, {R::point(s), R::point(0)}, {R::interval(0, 1), R::point(1)}});
  EXPECT_EQ(b.taylor(), t);
  EXPECT_EQ(b.essential(), te);
  EXPECT_EQ(component_count(b.essential()), 2u);
  EXPECT_EQ(component_count(b.taylor()), 1u);
  EXPECT_FALSE(outer_boundary(b.taylor()).same_set(b.essential()));
  EXPECT_THROW(picture_thm_khypo(1.0), DomainError);
}

TEST(Spectra, KhypoPointMergesWithCornerAsKappaShrinks) {
  const auto b = picture_thm_khypo(1.0 + 1e-14);
  EXPECT_EQ(component_count(b.essential()), 1u);
  EXPECT_EQ(component_count(picture_thm_khypo(1.01).essential()), 2u);
}

TEST(Spectra, CompactPerAgreesWithKhypo) {
  const auto d = make_thm_khypo(2.0, 0.6);
  const auto a = picture_thm_compactper(d);
  const auto b = picture_thm_khypo(2.0);
  EXPECT_EQ(a.taylor(), b.taylor());
  EXPECT_EQ(a.essential(), b.essential());
  const auto built = make_thm_compactper(make_two_atom_shift(2.0), make_unilateral_shift(), d.column(0));
  EXPECT_EQ(picture_thm_compactper(built).taylor(), b.taylor());
}

TEST(Spectra, ExampleBergmanPicture) {
  const auto p = picture_thm_compactper(make_example_bergman());
  const SpectralPicture t("sigma_T", {{R::interval(0, 1), R::interval(0, 1)}, {R::interval(0, std::sqrt(2.0)), R::point(0)}});
  EXPECT_EQ(p.taylor(), t);
  EXPECT_EQ(component_count(p.essential()), 2u);
}

TEST(Spectra, CompactPerHypotheses) {
  const auto u = make_unilateral_shift();
  EXPECT_THROW(picture_thm_compactper(make_thm_compactper(u, u, make_shift({0.5}, ConstantTail{1.0}))), HypothesisError);
  EXPECT_THROW(picture_thm_compactper(make_example_stair(0.5)), HypothesisError);
}

TEST(Spectra, ImportantPictures) {
  const auto b = picture_thm_important({4, 3, 2}, 1.0);
  EXPECT_EQ(component_count(b.essential()), 4u);
  EXPECT_EQ(component_count(picture_thm_important({1}, 1.0).essential()), 1u);
  EXPECT_EQ(component_count(picture_thm_important({2}, 0.7).essential()), 2u);
  EXPECT_FALSE(outer_boundary(b.taylor()).same_set(b.essential()));
  for (const auto& q : b.essential().primitives())
    for (double x : {0.0, 0.5, 1.0})
      if (q.z1.contains(x) && q.z2.contains(x)) {
        EXPECT_TRUE(b.taylor().contains(x, x));
      }
  EXPECT_THROW(picture_thm_important({2, 3}, 1.0), DomainError);
}

TEST(Spectra, ExOf1AtomPicture) {
  const auto b = picture_example_exof1atom(0.5, 0.8);
  EXPECT_FALSE(b.taylor().has_interior());
  EXPECT_TRUE(b.taylor().same_set(b.at("sigma_r")));
  EXPECT_TRUE(b.essential().contains(0.0, 0.8 * 0.125));
  EXPECT_TRUE(b.essential().contains(0.25, 0.0));
  EXPECT_TRUE(b.essential().contains(1.0, 0.0));
  EXPECT_FALSE(b.essential().contains(0.3, 0.0));
  for (const char* l : {"sigma_l", "sigma_le", "sigma_re"}) EXPECT_TRUE(b.at(l).same_set(b.essential()));
  EXPECT_EQ(component_count(b.essential()), kInfiniteComponents);
  EXPECT_THROW(picture_example_exof1atom(0.8, 0.5), DomainError);
}

TEST(Spectra, EssentialInsideTaylor) {
  for (const auto& b : {picture_thm_khypo(2.0), picture_thm_important({4, 3, 2}, 1.0),
                        picture_example_exof1atom(0.5, 0.8), picture_thm_compactper(make_example_bergman())}) {
    for (const auto& q : b.essential().primitives()) {
      const auto xs = q.z1.kind == R::Kind::Geometric ? q.z1.elements(8) : std::vector<double>{q.z1.lo(), q.z1.hi()};
      const auto ys = q.z2.kind == R::Kind::Geometric ? q.z2.elements(8) : std::vector<double>{q.z2.lo(), q.z2.hi()};
      for (double x : xs)
        for (double y : ys) EXPECT_TRUE(b.taylor().contains(x, y)) << x << "," << y;
    }
    EXPECT_EQ(b.essential().normal_form(), b.essential().normal_form().normal_form());
  }
}

TEST(Spectra, OuterBoundaryExamples) {
  const SpectralPicture sq("sigma_T", {{R::interval(0, 1), R::interval(0, 1)}});
  const SpectralPicture expect("sigma_T", {{R::point(1), R::interval(0, 1)}, {R::interval(0, 1), R::point(1)}});
  EXPECT_TRUE(outer_boundary(sq).same_set(expect));
  const SpectralPicture dot("sigma_Te", {{R::point(0.7), R::point(0)}});
  EXPECT_TRUE(outer_boundary(dot).same_set(dot));
  const SpectralPicture khypo_boundary(
      "sigma_T", {{R::interval(0, 1), R::point(1)}, {R::point(1), R::interval(0, 1)}, {R::interval(1, std::sqrt(2.0)), R::point(0)}});
  EXPECT_TRUE(outer_boundary(picture_thm_khypo(2.0).taylor()).same_set(khypo_boundary));
}

TEST(Spectra, OuterBoundaryMatchesRaster) {
  const std::vector<SpectralPicture> pics{picture_thm_khypo(2.0).taylor(), picture_thm_important({4, 3, 2}, 1.0).taylor(),
                                          picture_thm_important({2}, 0.6).taylor(),
                                          SpectralPicture("sigma_T", {{R::interval(0, 1), R::interval(0, 1)}}),
                                          SpectralPicture("sigma_T", {{R::interval(0.2, 0.9), R::interval(0.3, 0.5)},
                                                                      {R::point(1.1), R::interval(0, 0.8)}})};
  for (const auto& p : pics) {
    const auto frame = frame_for({&p});
    const auto symbolic = rasterize(outer_boundary(p), frame);
    const auto raster = raster_outer_boundary(p, frame);
    EXPECT_GT(raster.count(), 0u);
    EXPECT_TRUE(rasters_match(symbolic, raster)) << p.label();
  }
}

TEST(Spectra, KhypoEssentialDiffersFromRasterBoundary) {
  const auto b = picture_thm_khypo(2.0);
  const auto frame = frame_for({&b.taylor(), &b.essential()});
  EXPECT_FALSE(rasters_match(rasterize(b.essential(), frame), raster_outer_boundary(b.taylor(), frame)));
}

TEST(Spectra, ComponentCountInvariantUnderRewriting) {
  std::mt19937 rng(7);
  for (const auto& b : {picture_thm_khypo(2.0), picture_thm_important({4, 3, 2}, 1.0), picture_thm_important({5, 2}, 0.8)}) {
    const auto& e = b.essential();
    const std::size_t base = component_count(e);
    auto prims = e.primitives();
    for (int t = 0; t < 20; ++t) {
      std::shuffle(prims.begin(), prims.end(), rng);
      auto extended = prims;
      extended.push_back(prims.front());  // duplicates are absorbed by the normal form
      EXPECT_EQ(component_count(SpectralPicture(e.label(), prims)), base);
      EXPECT_EQ(component_count(SpectralPicture(e.label(), extended)), base);
      EXPECT_EQ(component_count(SpectralPicture(e.label(), extended).normal_form()), base);
    }
  }
  EXPECT_EQ(component_count(SpectralPicture("sigma_Te", {})), 0u);
}

TEST(Spectra, GeometricTailAbsorbedByAxisInterval) {
  const SpectralPicture p("sigma_Te", {{R::geometric(1.0, 0.5), R::point(0)}, {R::interval(0, 0.3), R::point(0)}});
  // Members 1 and 0.5 stand alone; 0.25, 0.125, ... and 0 lie in [0, 0.3].
  EXPECT_EQ(component_count(p), 3u);
}

TEST(Spectra, SliceNormCheck) {
  const auto khypo = slice_norm_necessary_check(make_thm_khypo(2.0, 0.6), 6);
  EXPECT_TRUE(khypo.pass);
  const auto berg = slice_norm_necessary_check(make_example_bergman(), 6);
  EXPECT_TRUE(berg.pass);
  EXPECT_NEAR(berg.row_norms[0], std::sqrt(2.0), 1e-9);
  for (std::size_t j = 1; j <= 6; ++j) EXPECT_NEAR(berg.row_norms[j], 1.0, 1e-9);
  const auto bad = make_adhoc({make_two_atom_shift(9.0), make_unilateral_shift(), make_bergman_like(4)},
                              make_shift({0.5}, ConstantTail{1.0}));
  const auto v = slice_norm_necessary_check(bad, 4);
  EXPECT_FALSE(v.pass);
  ASSERT_TRUE(v.failure.has_value());
  EXPECT_NE(v.failure->find("row 2"), std::string::npos);
  EXPECT_THROW(slice_norm_necessary_check(bad, 1), DomainError);
}

TEST(Spectra, SliceNormCheckStableInJ) {
  for (const auto& d : {make_thm_khypo(2.0, 0.6), make_example_bergman(), make_example_stair(0.5)}) {
    const bool base = slice_norm_necessary_check(d, 2).pass;
    for (std::size_t J = 3; J <= 12; ++J) EXPECT_EQ(slice_norm_necessary_check(d, J).pass, base);
  }
}

TEST(Spectra, KernelProbeExamples) {
  const auto d = make_example_bergman();
  EXPECT_EQ(kernel_convergence_probe(d, 1.2, 0.0).verdict, KernelVerdict::Converges);
  EXPECT_EQ(kernel_convergence_probe(d, 1.2, 0.5).verdict, KernelVerdict::Diverges);
  EXPECT_EQ(kernel_convergence_probe(d, 0.0, 0.0).verdict, KernelVerdict::Converges);
  EXPECT_EQ(kernel_convergence_probe(make_example_stair(0.5), 0.0, 0.0).verdict, KernelVerdict::Converges);
  EXPECT_EQ(to_string(KernelVerdict::Undecided), "UNDECIDED");
}

TEST(Spectra, KernelProbeMatchesTaylorSpectrum) {
  const auto d = make_example_bergman();
  const auto pic = picture_thm_compactper(d).taylor();
  const auto boundary = outer_boundary(pic);
  std::size_t checked = 0;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const double x = 0.08 * i, y = 0.08 * j;
      if (distance_to_set(boundary, x, y) <= 0.05) continue;
      const auto probe = kernel_convergence_probe(d, x, y);
      const auto expected = pic.contains(x, y) ? KernelVerdict::Converges : KernelVerdict::Diverges;
      EXPECT_EQ(probe.verdict, expected) << "(" << x << "," << y << ") diag=" << probe.diagonal_rate
                                         << " ray=" << probe.max_ray_rate;
      ++checked;
    }
  EXPECT_GT(checked, 300u);
}

TEST(Spectra, LeftIdentity) {
  const auto stair_row = make_example_stair(0.5).row(1);
  const auto c = left_identity_check(stair_row, 0.0);
  EXPECT_NEAR(c.lhs, 2.0, 1e-9);
  EXPECT_NEAR(c.rhs, 1.0, 1e-15);
  EXPECT_FALSE(c.equal);
  EXPECT_NEAR(c.sigma_min, c.oracle_sigma_min, 1e-12);
  const auto u = left_identity_check(make_unilateral_shift(), 0.0);
  EXPECT_NEAR(u.lhs, 1.0, 1e-12);
  EXPECT_TRUE(u.equal);
  // Two leading half weights: sigma_min of the section is 1/2 again, not 1/4.
  EXPECT_NEAR(left_identity_check(make_shift({0.5, 0.5}, ConstantTail{1.0}), 0.0).lhs, 2.0, 1e-9);
  EXPECT_THROW(left_identity_check(stair_row, 1.0), DomainError);
  EXPECT_THROW(left_identity_check(make_bergman_like(1), 0.0), HypothesisError);
}

TEST(Spectra, SectionSingularValueMonotoneInN) {
  const auto s = make_example_stair(0.5).row(1);
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t n = 4; n <= 256; ++n) {
    const double v = oracle::min_singular(oracle::make_section(s, 0.3, n));
    EXPECT_LE(v, prev + 1e-12) << n;
    prev = v;
  }
}

TEST(Spectra, SvgGlyphs) {
  const auto imp = picture_thm_important({4, 3, 2}, 1.0);
  const std::string s = render_svg({imp.taylor(), imp.essential()});
  EXPECT_EQ(count_of(s, "class=\"dot\""), 3u);
  EXPECT_NE(s.find("width=\"600\""), std::string::npos);
  const auto ex = picture_example_exof1atom(0.5, 0.8);
  const std::string e = render_svg({ex.taylor(), ex.essential()});
  EXPECT_EQ(count_of(e, "family-member z1"), 12u);
  EXPECT_GE(count_of(e, "class=\"accumulation z1"), 1u);
  SvgOptions five;
  five.family_truncation = 5;
  EXPECT_EQ(count_of(render_svg({ex.essential()}, five), "family-member z1"), 5u);
  EXPECT_EQ(s, render_svg({imp.taylor(), imp.essential()}));
}
