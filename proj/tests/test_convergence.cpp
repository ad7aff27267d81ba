#include "nlstokes/convergence.hpp"
#include "nlstokes/error.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace nlstokes;

TEST(ObservedOrder, Examples) {
  const std::vector<double> quarter{4e-2, 1e-2};
  auto o = observed_order(quarter, 2.0);
  ASSERT_EQ(o.size(), 1u);
  EXPECT_DOUBLE_EQ(*o[0], 2.0);

  const std::vector<double> flat{3e-3, 3e-3};
  EXPECT_DOUBLE_EQ(*observed_order(flat, 2.0)[0], 0.0);

  const std::vector<double> rising{1e-3, 4e-3};
  EXPECT_DOUBLE_EQ(*observed_order(rising, 2.0)[0], -2.0);
}

TEST(ObservedOrder, MissingEntries) {
  const std::vector<double> e{1e-2, 0.0, 1e-4, 2.5e-5};
  const auto o = observed_order(e, 2.0);
  ASSERT_EQ(o.size(), 3u);
  EXPECT_FALSE(o[0].has_value());
  EXPECT_FALSE(o[1].has_value());
  EXPECT_DOUBLE_EQ(*o[2], 2.0);
  EXPECT_TRUE(observed_order(std::vector<double>{1.0}, 2.0).empty());
  const std::vector<double> tiny{1e-15, 1e-16};
  EXPECT_FALSE(observed_order(tiny, 2.0, 1e-14)[0].has_value());
}

TEST(ObservedOrder, PerPairRatios) {
  const std::vector<double> e{1.0, 1.0 / 9, 1.0 / 36};
  const std::vector<double> r{3.0, 2.0};
  const auto o = observed_order(e, r);
  EXPECT_NEAR(*o[0], 2.0, 1e-14);
  EXPECT_NEAR(*o[1], 2.0, 1e-14);
  EXPECT_THROW((void)observed_order(e, std::vector<double>{2.0}), Error);
}

TEST(DeltaStudy, TaylorGreenSecondOrder) {
  RateStudy s;
  s.deltas = {0.2, 0.1, 0.05};
  s.Ns = {16};
  const auto rep = delta_refinement_study(s);
  ASSERT_EQ(rep.rungs.size(), 3u);
  ASSERT_EQ(rep.order_u.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_GE(*rep.order_u[k], 1.8);
    EXPECT_LE(*rep.order_u[k], 2.2);
    EXPECT_GE(*rep.order_p[k], 1.8);
  }
  EXPECT_TRUE(rep.flags.empty());
  for (const auto& r : rep.rungs) {
    EXPECT_TRUE(r.energy_err_u.has_value());
    EXPECT_GT(r.err_u, 0.0);
  }
}

TEST(DeltaStudy, SingleRungHasNoOrders) {
  RateStudy s;
  s.deltas = {0.1};
  s.Ns = {16};
  const auto rep = delta_refinement_study(s);
  EXPECT_EQ(rep.rungs.size(), 1u);
  EXPECT_TRUE(rep.order_u.empty());
  EXPECT_GT(rep.rungs[0].err_u, 0.0);
}

TEST(DeltaStudy, ErrorsScaleLinearlyWithAmplitude) {
  RateStudy s;
  s.deltas = {0.2, 0.1};
  s.Ns = {16};
  s.forcing = RandomBandLimited{17, 5, 0.2, 1.0};
  const auto a = delta_refinement_study(s);
  s.forcing = RandomBandLimited{17, 5, 0.2, 2.0};
  const auto b = delta_refinement_study(s);
  for (std::size_t i = 0; i < a.rungs.size(); ++i) {
    EXPECT_NEAR(b.rungs[i].err_u, 2 * a.rungs[i].err_u, 1e-13 * a.rungs[i].err_u);
    EXPECT_NEAR(b.rungs[i].err_p, 2 * a.rungs[i].err_p, 1e-13 * a.rungs[i].err_p);
  }
}

TEST(DeltaStudy, IllPosedKernelPropagates) {
  RateStudy s;
  s.deltas = {0.5};
  s.Ns = {8};
  s.normalize = false;
  s.gradient = RadialProfile::fractional(0.5, KernelRole::gradient, 0.0);
  EXPECT_THROW((void)delta_refinement_study(s), IllPosedError);
}

TEST(DeltaStudy, RejectsNonmonotoneLadder) {
  RateStudy s;
  s.deltas = {0.1, 0.2};
  s.Ns = {16};
  EXPECT_THROW((void)delta_refinement_study(s), Error);
}

TEST(SpectralStudy, BandLimitedIsExactOnceRetained) {
  RateStudy s;
  s.forcing = RandomBandLimited{5, 7};
  s.deltas = {0.1};
  s.Ns = {16, 32};
  const auto rep = spectral_refinement_study(s);
  for (const auto& r : rep.rungs) {
    EXPECT_LE(r.err_u, 1e-12);
    EXPECT_LE(r.err_p, 1e-12);
  }
  // both errors sit below the order floor
  EXPECT_FALSE(rep.order_u[0].has_value());
}

TEST(SpectralStudy, DecayingForcingMonotoneWithLargeRatios) {
  RateStudy s;
  s.forcing = RandomBandLimited{9, 1000, 1.0};
  s.deltas = {0.1};
  s.Ns = {8, 16, 32};
  const auto rep = spectral_refinement_study(s);
  for (std::size_t i = 1; i < rep.rungs.size(); ++i) {
    EXPECT_LE(rep.rungs[i].err_u, rep.rungs[i - 1].err_u);
    EXPECT_LE(rep.rungs[i].err_p, rep.rungs[i - 1].err_p);
    EXPECT_GT(rep.rungs[i - 1].err_u / rep.rungs[i].err_u, 10.0);
  }
  for (const auto& f : rep.flags) EXPECT_EQ(f.find("increased"), std::string::npos) << f;
}

TEST(CompatibilityStudy, TriangleAndDecay) {
  RateStudy s;
  s.forcing = RandomBandLimited{21, 3};
  s.Ns = {8, 16, 32};
  s.deltas = {1.0 / 8, 1.0 / 16, 1.0 / 32};
  const auto rep = asymptotic_compatibility_study(s);
  for (std::size_t i = 0; i < rep.rungs.size(); ++i) {
    const auto& r = rep.rungs[i];
    ASSERT_TRUE(r.triangle_holds.has_value());
    EXPECT_TRUE(*r.triangle_holds);
    EXPECT_LE(r.err_u, *r.delta_gap_u + *r.truncation_u + 1e-15);
    // band 3 is retained on every rung, so truncation vanishes
    EXPECT_LE(*r.truncation_u, 1e-13);
    if (i > 0) {
      EXPECT_LT(r.err_u, rep.rungs[i - 1].err_u);
    }
  }
  for (const auto& o : rep.order_u) EXPECT_NEAR(*o, 2.0, 0.3);
}

TEST(CompatibilityStudy, FixedDeltaPlateausAtGap) {
  RateStudy s;
  s.forcing = RandomBandLimited{4, 3};
  s.Ns = {8, 16, 32};
  s.deltas = {0.1, 0.1, 0.1};
  const auto rep = asymptotic_compatibility_study(s);
  RateStudy d;
  d.forcing = s.forcing;
  d.deltas = {0.1};
  d.Ns = {16};
  const double gap = delta_refinement_study(d).rungs[0].err_u;
  for (const auto& r : rep.rungs) EXPECT_NEAR(r.err_u, gap, 1e-12 * gap);
}

TEST(CompatibilityStudy, MismatchedPathRejected) {
  RateStudy s;
  s.Ns = {8, 16};
  s.deltas = {0.1};
  EXPECT_THROW((void)asymptotic_compatibility_study(s), Error);
}
