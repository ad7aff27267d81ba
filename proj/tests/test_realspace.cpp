#include "nlstokes/error.hpp"
#include "nlstokes/forcing.hpp"
#include "nlstokes/realspace.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace nlstokes;

namespace {

constexpr double pi = std::numbers::pi;

ScaledKernel constant_gradient(int d, double delta) {
  return {normalize_profile(RadialProfile::constant(KernelRole::gradient), d), delta, d};
}

ScaledKernel constant_diffusion(int d, double delta) {
  return {normalize_profile(RadialProfile::constant(KernelRole::diffusion), d), delta, d};
}

LatticeField random_lattice(const PeriodicGrid& g, int comps, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  LatticeField f(g, comps);
  for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values.data()[i] = u(rng);
  return f;
}

double measure(std::vector<double> lo, std::vector<double> hi, double R) { return box_ball_measure(lo, hi, R); }

}  // namespace

TEST(BoxBall, ClosedForms) {
  EXPECT_NEAR(measure({-0.5, 0.0}, {2.0, 0.0}, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(measure({-0.5}, {2.0}, 1.0), 1.5, 1e-15);
  EXPECT_NEAR(measure({0, 0}, {1, 1}, 10.0), 1.0, 1e-14);
  EXPECT_NEAR(measure({-1, -1}, {1, 1}, 0.5), pi / 4, 1e-14);
  EXPECT_NEAR(measure({0, 0}, {0.7, 0.7}, 0.7), pi * 0.49 / 4, 1e-14);
  EXPECT_NEAR(measure({0, -2}, {2, 2}, 1.0), pi / 2, 1e-14);
  EXPECT_NEAR(measure({-1, -1, -1}, {1, 1, 1}, 0.8), 4.0 / 3 * pi * 0.512, 1e-12);
  EXPECT_NEAR(measure({0, 0, 0}, {1, 1, 1}, 1.0), pi / 6, 1e-12);
  EXPECT_NEAR(measure({0, 0, 0}, {0.5, 0.5, 0.5}, 5.0), 0.125, 1e-14);
}

TEST(BoxBall, AdditiveOverSplits) {
  const double whole = measure({-0.3, 0.1}, {0.9, 0.8}, 0.85);
  const double left = measure({-0.3, 0.1}, {0.2, 0.8}, 0.85);
  const double right = measure({0.2, 0.1}, {0.9, 0.8}, 0.85);
  EXPECT_NEAR(whole, left + right, 1e-14);
  const double w3 = measure({-0.3, 0.1, -0.6}, {0.9, 0.8, 0.2}, 0.85);
  const double a3 = measure({-0.3, 0.1, -0.6}, {0.9, 0.8, -0.1}, 0.85);
  const double b3 = measure({-0.3, 0.1, -0.1}, {0.9, 0.8, 0.2}, 0.85);
  EXPECT_NEAR(w3, a3 + b3, 1e-12);
}

TEST(Stencil, ConstantKernelWeightsTileTheBall) {
  for (int d : {2, 3}) {
    const PeriodicGrid g(d, d == 2 ? 64 : 32);
    const double delta = 0.5;
    const auto k = constant_gradient(d, delta);
    const auto st = build_stencil(k, g);
    double sum = 0.0;
    for (const auto& e : st.entries) {
      sum += e.weight;
      EXPECT_GT(e.distance, 0.0);
    }
    const double h = g.spacing();
    const double ball = d == 2 ? pi * delta * delta : 4.0 / 3 * pi * std::pow(delta, 3);
    EXPECT_NEAR(sum, k(0.0) * (ball - std::pow(h, d)), 1e-10 * k(0.0) * ball);
  }
}

TEST(Stencil, Preconditions) {
  EXPECT_THROW((void)build_stencil(constant_gradient(2, 3.2), PeriodicGrid(2, 32)), Error);
  EXPECT_THROW((void)build_stencil(constant_gradient(2, 0.1), PeriodicGrid(2, 32)), Error);
  EXPECT_THROW((void)build_stencil(constant_gradient(3, 0.5), PeriodicGrid(2, 32)), Error);
}

TEST(Operators, ZeroField) {
  const PeriodicGrid g(2, 32);
  const auto r = apply_operator_realspace(NonlocalOp::L, LatticeField(g, 2), constant_diffusion(2, 0.4));
  EXPECT_EQ(r.field.values.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Operators, GradientOfSineFollowsSymbol) {
  const double delta = 0.4;
  const auto k = constant_gradient(2, delta);
  const double b = b_symbol(k, 1.0);
  std::vector<double> errs;
  for (int N : {32, 64, 128}) {
    const PeriodicGrid g(2, N);
    const auto p = LatticeField::sample(g, 1, [](const Eigen::VectorXd& x) {
      return Eigen::VectorXd::Constant(1, std::sin(x[0]));
    });
    const auto gp = apply_operator_realspace(NonlocalOp::G, p, k).field;
    double err = 0.0;
    for (Eigen::Index j = 0; j < g.point_count(); ++j) {
      err = std::max(err, std::abs(gp.values(0, j) - b * std::cos(g.point(j)[0])));
      err = std::max(err, std::abs(gp.values(1, j)));
    }
    errs.push_back(err);
  }
  EXPECT_LT(errs[0], 0.1);
  EXPECT_GT(errs[0], errs[1]);
  EXPECT_GT(errs[1], errs[2]);
}

TEST(Operators, DivergenceFormsAgree) {
  for (int d : {2, 3}) {
    const PeriodicGrid g(d, d == 2 ? 32 : 16);
    const auto k = constant_gradient(d, d == 2 ? 0.4 : 0.9);
    const auto u = random_lattice(g, d, 5);
    const auto plus = apply_operator_realspace(NonlocalOp::D, u, k, DivergenceForm::plus).field;
    const auto minus = apply_operator_realspace(NonlocalOp::D, u, k, DivergenceForm::minus).field;
    const double scale = plus.values.cwiseAbs().maxCoeff();
    EXPECT_LE((plus.values - minus.values).cwiseAbs().maxCoeff(), 1e-12 * scale);
  }
}

TEST(Operators, ThreadsDoNotChangeValues) {
  const PeriodicGrid g(2, 32);
  const auto k = constant_diffusion(2, 0.4);
  const auto u = random_lattice(g, 2, 8);
  const auto a = apply_operator_realspace(NonlocalOp::L, u, k, DivergenceForm::plus, 1).field;
  const auto b = apply_operator_realspace(NonlocalOp::L, u, k, DivergenceForm::plus, 3).field;
  EXPECT_TRUE(a.values == b.values);
}

TEST(Operators, FractionalWarning) {
  const PeriodicGrid g(2, 32);
  const ScaledKernel frac(normalize_profile(RadialProfile::fractional(0.5, KernelRole::gradient), 2), 0.4, 2);
  const auto r = apply_operator_realspace(NonlocalOp::G, random_lattice(g, 1, 1), frac);
  EXPECT_FALSE(r.warnings.empty());
  const ScaledKernel mild(normalize_profile(RadialProfile::fractional(-0.5, KernelRole::gradient), 2), 0.4, 2);
  EXPECT_TRUE(apply_operator_realspace(NonlocalOp::G, random_lattice(g, 1, 1), mild).warnings.empty());
}

TEST(Operators, ShapeChecks) {
  const PeriodicGrid g(2, 32);
  EXPECT_THROW((void)apply_operator_realspace(NonlocalOp::G, LatticeField(g, 2), constant_gradient(2, 0.4)), Error);
  EXPECT_THROW((void)apply_operator_realspace(NonlocalOp::D, LatticeField(g, 1), constant_gradient(2, 0.4)), Error);
  EXPECT_THROW((void)apply_operator_realspace(NonlocalOp::L, LatticeField(g, 1), constant_gradient(2, 0.4)), Error);
}

TEST(Adjointness, RandomPairs) {
  const PeriodicGrid g(2, 32);
  for (const auto& k : {constant_gradient(2, 0.4),
                        ScaledKernel(normalize_profile(RadialProfile::fractional(0.5, KernelRole::gradient), 2), 0.4, 2)}) {
    for (unsigned s = 0; s < 5; ++s) {
      EXPECT_LE(adjointness_residual(random_lattice(g, 2, 2 * s), random_lattice(g, 1, 2 * s + 1), k), 1e-12);
    }
  }
}

TEST(Adjointness, ConstantPressureAndZeroVelocity) {
  const PeriodicGrid g(2, 32);
  const auto k = constant_gradient(2, 0.4);
  LatticeField p(g, 1);
  p.values.setConstant(2.5);
  const auto u = random_lattice(g, 2, 3);
  EXPECT_LE(apply_operator_realspace(NonlocalOp::G, p, k).field.values.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(std::abs(apply_operator_realspace(NonlocalOp::D, u, k).field.values.sum()), 1e-10);
  EXPECT_EQ(adjointness_residual(LatticeField(g, 2), random_lattice(g, 1, 4), k), 0.0);
}

TEST(Adjointness, LatticeMismatch) {
  const auto k = constant_gradient(2, 0.4);
  try {
    (void)adjointness_residual(LatticeField(PeriodicGrid(2, 32), 2), LatticeField(PeriodicGrid(2, 64), 1), k);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::lattice_mismatch);
  }
}

TEST(PlaneWave, DiffusionOrderTwo) {
  const auto k = constant_diffusion(2, 0.4);
  const std::vector<int> xi{1, 0};
  const double e64 = planewave_symbol_check(NonlocalOp::L, k, xi, 64);
  const double e128 = planewave_symbol_check(NonlocalOp::L, k, xi, 128);
  EXPECT_NEAR(std::log2(e64 / e128), 2.0, 0.3);
}

TEST(PlaneWave, ZeroWaveAndCoarseLattice) {
  const std::vector<int> zero{0, 0};
  EXPECT_EQ(planewave_symbol_check(NonlocalOp::G, constant_gradient(2, 0.4), zero, 32), 0.0);
  const std::vector<int> xi{1, 0};
  EXPECT_THROW((void)planewave_symbol_check(NonlocalOp::L, constant_diffusion(2, 0.1), xi, 32), Error);
}
