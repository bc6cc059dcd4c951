#include "stratsp/bump.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

using namespace stratsp;

TEST(Smoothstep, EndpointsAreExact) {
  EXPECT_EQ(BumpProfile::smoothstep(0.0), 0.0);
  EXPECT_EQ(BumpProfile::smoothstep(-1.0), 0.0);
  EXPECT_EQ(BumpProfile::smoothstep(1.0), 1.0);
  EXPECT_EQ(BumpProfile::smoothstep(2.0), 1.0);
  double mid = BumpProfile::smoothstep(0.5);
  EXPECT_NEAR(mid, 0.5, 1e-15);
}

TEST(Smoothstep, ComplementIdentity) {
  for (double t : {0.1, 0.25, 0.4, 0.6, 0.9}) {
    EXPECT_NEAR(BumpProfile::smoothstep(t) + BumpProfile::smoothstep(1.0 - t), 1.0, 1e-15);
  }
  for (double t = 0.05; t < 1.0; t += 0.05) {
    double s = BumpProfile::smoothstep(t);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(CutoffChi, PlateauAndDecay) {
  BumpProfile b = make_bump_partition(2.0);
  EXPECT_EQ(b.chi(0.5), 1.0);
  EXPECT_EQ(b.chi(1.0), 1.0);
  EXPECT_EQ(b.chi(2.0), 0.0);
  EXPECT_EQ(b.chi(5.0), 0.0);
  double prev = 1.0;
  for (double u = 1.0; u <= 2.0; u += 0.01) {
    double v = b.chi(u);
    EXPECT_LE(v, prev + 1e-15);  // monotone down across the transition
    prev = v;
  }
}

TEST(Partition, UnitAtOneAndCompactSupport) {
  for (double nu : {2.0, 1.5, std::pow(2.0, 0.25)}) {
    BumpProfile b = make_bump_partition(nu);
    EXPECT_EQ(b.phi(1.0), 1.0);
    EXPECT_EQ(b.phi(1.0 / nu), 0.0);
    EXPECT_EQ(b.phi(nu), 0.0);
    EXPECT_EQ(b.phi(0.5 / nu), 0.0);
    EXPECT_EQ(b.phi(2.0 * nu), 0.0);
    EXPECT_GT(b.phi(std::sqrt(nu)), 0.0);  // interior of the right half
  }
}

TEST(Partition, TelescopesToOne) {
  for (double nu : {2.0, 1.5, std::pow(2.0, 0.25)}) {
    BumpProfile b = make_bump_partition(nu);
    // Sum of phi(nu^{-j} u) over enough j is exactly 1 up to roundoff.
    for (double u : {0.03, 0.7, 1.0, 2.5, 17.0, 400.0}) {
      EXPECT_LE(partition_deficit(b, u, -40, 40), 2e-14) << "nu=" << nu << " u=" << u;
    }
  }
}

TEST(Partition, ScaledPieceMatchesUnscaled) {
  BumpProfile b = make_bump_partition(2.0);
  for (int j : {-3, 0, 2, 5}) {
    for (double u : {0.8, 1.0, 1.3}) {
      double s = std::pow(2.0, j) * u;
      EXPECT_NEAR(b.phi_at_scale(j, s), b.phi(u), 1e-14);
    }
  }
}

TEST(Partition, AtMostTwoActiveScales) {
  BumpProfile b = make_bump_partition(2.0);
  for (double u : {0.9, 1.1, 3.7, 64.0}) {
    int active = 0;
    for (int j = -20; j <= 20; j++)
      if (b.phi_at_scale(j, u) > 0.0) active++;
    EXPECT_GE(active, 1);
    EXPECT_LE(active, 2);
  }
}

TEST(Partition, RejectsDegenerateRatio) {
  EXPECT_THROW(make_bump_partition(1.0), std::invalid_argument);
  EXPECT_THROW(make_bump_partition(0.5), std::invalid_argument);
  EXPECT_NO_THROW(make_bump_partition(1.0001));
}
