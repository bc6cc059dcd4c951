#include "stratsp/weights.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "stratsp/conv.hpp"
#include "stratsp/group.hpp"
#include "stratsp/multiplier.hpp"
#include "stratsp/rational.hpp"
#include "stratsp/rng.hpp"
#include "stratsp/spectral.hpp"
#include "support/oracles.hpp"

using namespace stratsp;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MultiplierSpec default_spec() {
  MultiplierSpec ms;
  ms.theta = 1.0;
  ms.beta = 2.0;
  return ms;
}

}  // namespace

TEST(Characteristics, UnitWeightIsExactlyOne) {
  Group g = make_torus(1, 16);
  Weight one = power_weight(g, 0.0);
  EXPECT_DOUBLE_EQ(one.ap(1.5), 1.0);
  EXPECT_DOUBLE_EQ(one.ap(2.0), 1.0);
  EXPECT_DOUBLE_EQ(one.ap(3.0), 1.0);
  EXPECT_DOUBLE_EQ(one.rh(2.0), 1.0);
  EXPECT_DOUBLE_EQ(one.rh(4.0), 1.0);
}

TEST(Characteristics, ConstantWeightScaleInvariance) {
  Group g = make_torus(1, 12);
  dvec w(g.size, 7.25);
  Weight c(g, w);
  EXPECT_NEAR(c.ap(2.0), 1.0, 1e-12);
  EXPECT_NEAR(c.rh(3.0), 1.0, 1e-12);
}

TEST(Characteristics, HandComputedBumpOnEightTorus) {
  Group g = make_torus(1, 8);
  dvec wv(g.size, 1.0);
  wv[0] = 2.0;
  Weight w(g, wv);
  // Radius-1 ball around the identity: <w> = 4/3, <1/w> = 5/6; all larger
  // balls give smaller products, so [w]_{A_2} = 10/9.
  EXPECT_NEAR(w.ap(2.0), 10.0 / 9.0, 1e-12);
  // Same ball maximizes sqrt(<w^2>)/<w> = sqrt(2)/(4/3) = 3/(2 sqrt 2).
  EXPECT_NEAR(w.rh(2.0), 3.0 / (2.0 * std::sqrt(2.0)), 1e-12);
}

TEST(Characteristics, BoundedBelowByOneAndNested) {
  Group g = make_torus(1, 16);
  Rng rng(4, 1);
  dvec wv(g.size);
  for (auto& v : wv) v = std::exp(rng.symmetric());
  Weight w(g, wv);
  double prev = kInf;
  for (double p : {1.5, 2.0, 2.5, 3.0, 5.0}) {
    double cur = w.ap(p);
    EXPECT_GE(cur, 1.0 - 1e-12);
    EXPECT_LE(cur, prev + 1e-12);  // characteristics shrink as p grows
    prev = cur;
  }
  EXPECT_GE(w.rh(2.0), 1.0 - 1e-12);
  EXPECT_LE(w.rh(2.0), w.rh(3.0) + 1e-12);  // q-averages grow with q
}

TEST(Characteristics, PowerWeightGrowthCurve) {
  Group g = make_torus(1, 64);
  EXPECT_DOUBLE_EQ(power_weight(g, 0.0).ap(2.0), 1.0);
  // Frozen external oracle values (exhaustive ball enumeration, independent
  // implementation).
  EXPECT_NEAR(power_weight(g, 0.5).ap(2.0), 1.3123704212177696, 1e-9);
  EXPECT_NEAR(power_weight(g, 0.9).ap(2.0), 2.3688525163313248, 1e-9);
  EXPECT_NEAR(power_weight(g, 0.95).ap(2.0), 2.603529030592005, 1e-9);
  double prev = 1.0;
  for (double a : {0.3, 0.5, 0.7, 0.9, 0.95}) {
    double cur = power_weight(g, a).ap(2.0);
    EXPECT_GT(cur, prev);
    prev = cur;
  }
  EXPECT_GT(power_weight(g, -0.4).ap(2.0), 1.0);
  EXPECT_TRUE(std::isfinite(power_weight(g, -0.4).ap(2.0)));
}

TEST(Characteristics, Validation) {
  Group g = make_torus(1, 8);
  EXPECT_THROW(Weight(g, dvec(4, 1.0)), std::invalid_argument);
  dvec bad(g.size, 1.0);
  bad[3] = 0.0;
  EXPECT_THROW(Weight(g, bad), std::invalid_argument);
  bad[3] = -2.0;
  EXPECT_THROW(Weight(g, bad), std::invalid_argument);
  bad[3] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(Weight(g, bad), std::invalid_argument);
  Weight w = power_weight(g, 0.5);
  EXPECT_THROW(w.ap(1.0), std::invalid_argument);
  EXPECT_THROW(w.ap(0.5), std::invalid_argument);
  EXPECT_THROW(w.rh(1.0), std::invalid_argument);
}

TEST(WeightedNorms, HandValues) {
  cvec f = {{3.0, 0.0}, {0.0, 4.0}, {0.0, 0.0}};
  dvec w = {2.0, 1.0, 5.0};
  EXPECT_DOUBLE_EQ(weighted_norm(f, 1.0, w), 10.0);
  EXPECT_NEAR(weighted_norm(f, 2.0, w), std::sqrt(34.0), 1e-14);
  EXPECT_DOUBLE_EQ(weighted_norm(f, kInf, w), 4.0);
  EXPECT_THROW(weighted_norm(f, 0.5, w), std::invalid_argument);
}

TEST(WeightedOpnorms, L1DeltaAttainment) {
  Group g = make_torus(1, 12);
  SpectralDecomposition dec = spectral_decompose(g, 1.0);
  cvec K(heat_kernel(dec, 0.3).size());
  {
    dvec hk = heat_kernel(dec, 0.3);
    for (size_t i = 0; i < hk.size(); i++) K[i] = {hk[i], 0.0};
  }
  ConvolutionOperator T{&g, K};
  Weight w = power_weight(g, 1.2);

  double exact = weighted_opnorm_l1(T, w.values());
  // Independent recomputation through the dense operator matrix.
  auto M = oracles::convolution_matrix(g, K);
  double oracle = 0.0;
  for (int y = 0; y < g.size; y++) {
    double s = 0.0;
    for (int x = 0; x < g.size; x++) s += std::abs(M(x, y)) * w(x);
    oracle = std::max(oracle, s / w(y));
  }
  EXPECT_NEAR(exact, oracle, 1e-12 * oracle);

  // A delta attains the norm: sweep every delta through the operator itself.
  double best_delta = 0.0;
  for (int y = 0; y < g.size; y++) {
    cvec d(g.size, {0.0, 0.0});
    d[y] = 1.0;
    best_delta =
        std::max(best_delta, weighted_norm(T.apply(d), 1.0, w.values()) / w(y));
  }
  EXPECT_NEAR(exact, best_delta, 1e-12 * exact);
}

TEST(WeightedOpnorms, L2MatchesDenseSingularValue) {
  Group g = make_torus(1, 16);
  SpectralDecomposition dec = spectral_decompose(g, 2.0);
  auto m = make_oscillating(default_spec());
  Weight w = power_weight(g, 0.7);
  Rng rng(21, 2);
  double iter = weighted_opnorm_l2(dec, m, w.values(), rng);
  double dense = oracles::weighted_l2_opnorm_dense(g, kernel_of(dec, m), w.values());
  EXPECT_NEAR(iter, dense, 1e-8 * std::max(dense, 1e-30));
}

TEST(WeightedOpnorms, UnweightedL2ReducesToSpectralSup) {
  Group g = make_torus(1, 16);
  SpectralDecomposition dec = spectral_decompose(g, 2.0);
  auto m = make_oscillating(default_spec());
  dvec flat(g.size, 1.0);
  Rng rng(3, 3);
  double iter = weighted_opnorm_l2(dec, m, flat, rng);
  double sup = 0.0;
  for (double s : dec.sq) sup = std::max(sup, std::abs(m(s)));
  EXPECT_NEAR(iter, sup, 1e-9 * std::max(sup, 1e-30));
}

TEST(WeightedOpnorms, BracketContractAcrossExponents) {
  Group g = make_torus(1, 16);
  SpectralDecomposition dec = spectral_decompose(g, 2.0);
  auto m = make_oscillating(default_spec());
  Weight w = power_weight(g, 0.5);
  Rng rng(8, 4);

  OpnormBracket b1 = weighted_opnorm(dec, m, 1.0, w, rng);
  EXPECT_TRUE(b1.exact);
  EXPECT_EQ(b1.lower, b1.upper);

  OpnormBracket b2 = weighted_opnorm(dec, m, 2.0, w, rng);
  EXPECT_TRUE(b2.exact);

  OpnormBracket binf = weighted_opnorm(dec, m, kInf, w, rng);
  EXPECT_TRUE(binf.exact);
  ConvolutionOperator T{&g, kernel_of(dec, m)};
  EXPECT_DOUBLE_EQ(binf.upper, T.kernel_l1());

  OpnormBracket mid = weighted_opnorm(dec, m, 1.5, w, rng, 60);
  EXPECT_FALSE(mid.exact);
  EXPECT_GT(mid.lower, 0.0);
  EXPECT_TRUE(std::isfinite(mid.upper));
  EXPECT_LE(mid.lower, mid.upper * (1.0 + 1e-9));

  EXPECT_THROW(weighted_opnorm(dec, m, 0.8, w, rng), std::invalid_argument);
}

TEST(BfpBound, ExponentSpotValues) {
  EXPECT_DOUBLE_EQ(bfp_exponent(1.0, 4.0, 2.0), 1.5);
  EXPECT_DOUBLE_EQ(bfp_exponent(2.0, 4.0, 3.0), 3.0);
  EXPECT_DOUBLE_EQ(bfp_exponent(1.0, 2.0, 1.5), 2.0);
}

TEST(BfpBound, CheckIsFiniteAndTagged) {
  Group g = make_torus(1, 16);
  GridFamily gridfam = build_dyadic_grids(g, 0.5, 3);
  SparseFamily S = sparsify(g, gridfam, full_forest_collection(gridfam));
  Weight w = power_weight(g, 0.5);
  Rng rng(15, 6);
  cvec f(g.size), h(g.size);
  for (auto& z : f) z = rng.unit_disk();
  for (auto& z : h) z = rng.unit_disk();

  BfpResult res = bfp_bound_check(S, f, h, 1.0, 4.0, 2.0, w);
  EXPECT_FALSE(res.degenerate);
  EXPECT_DOUBLE_EQ(res.exponent, 1.5);
  EXPECT_DOUBLE_EQ(res.ap_char, w.ap(2.0));
  EXPECT_DOUBLE_EQ(res.rh_char, w.rh(2.0));  // (r2/p)' = 2
  EXPECT_GT(res.form, 0.0);
  EXPECT_GT(res.rhs, 0.0);
  EXPECT_TRUE(std::isfinite(res.ratio));
  EXPECT_GT(res.ratio, 0.0);

  EXPECT_THROW(bfp_bound_check(S, f, h, 2.0, 4.0, 2.0, w), std::invalid_argument);
  EXPECT_THROW(bfp_bound_check(S, f, h, 1.0, 2.0, 2.0, w), std::invalid_argument);
}

TEST(Thresholds, ExactRationalValues) {
  Thresholds t = multiplier_thresholds(4, Rational(2));
  EXPECT_EQ(t.p_thr, Rational(4));
  ASSERT_TRUE(t.s_defined);
  EXPECT_EQ(t.s_thr, Rational(4));

  t = multiplier_thresholds(4, Rational(3));
  EXPECT_EQ(t.p_thr, Rational(8, 3));
  ASSERT_TRUE(t.s_defined);
  EXPECT_EQ(t.s_thr, Rational(8));

  EXPECT_FALSE(multiplier_thresholds(4, Rational(4)).s_defined);
  EXPECT_FALSE(multiplier_thresholds(4, Rational(6)).s_defined);
  EXPECT_THROW(multiplier_thresholds(4, Rational(0)), std::invalid_argument);

  t = riesz_thresholds(4, Rational(3, 2));
  EXPECT_EQ(t.p_thr, Rational(8, 3));
  ASSERT_TRUE(t.s_defined);
  EXPECT_EQ(t.s_thr, Rational(8));
  EXPECT_FALSE(riesz_thresholds(4, Rational(2)).s_defined);
  EXPECT_EQ(riesz_thresholds(4, Rational(1)).p_thr, Rational(4));

  t = dispersive_thresholds(4, Rational(2), Rational(3));
  EXPECT_EQ(t.p_thr, Rational(8, 3));
  ASSERT_TRUE(t.s_defined);
  EXPECT_EQ(t.s_thr, Rational(8));
  EXPECT_FALSE(dispersive_thresholds(1, Rational(1), Rational(2)).s_defined);
  EXPECT_THROW(dispersive_thresholds(4, Rational(0), Rational(1)), std::invalid_argument);
}

TEST(Thresholds, ReciprocalFormAgrees) {
  // 1/s = 1/2 - beta/(2Q) written through exact rational arithmetic.
  for (auto [Q, bn, bd] : {std::array<long long, 3>{4, 2, 1}, {4, 3, 1}, {4, 7, 2}, {6, 5, 1}}) {
    Rational beta(bn, bd);
    Thresholds t = multiplier_thresholds(Q, beta);
    ASSERT_TRUE(t.s_defined);
    EXPECT_EQ(Rational(1) / t.s_thr, Rational(1, 2) - beta / Rational(2 * Q));
    // p-threshold reciprocal: 1/p = beta/(2Q).
    EXPECT_EQ(Rational(1) / t.p_thr, beta / Rational(2 * Q));
  }
  // Riesz order k behaves like beta = 2k.
  for (long long k = 1; k <= 3; k++) {
    Thresholds r = riesz_thresholds(8, Rational(k));
    Thresholds m = multiplier_thresholds(8, Rational(2 * k));
    EXPECT_EQ(r.p_thr, m.p_thr);
    ASSERT_EQ(r.s_defined, m.s_defined);
    if (r.s_defined) EXPECT_EQ(r.s_thr, m.s_thr);
  }
}

TEST(Quantitative, ModeValidationAndCellStructure) {
  Group g = make_torus(1, 16);
  SpectralDecomposition dec = spectral_decompose(g, 2.0);
  MultiplierSpec ms = default_spec();  // beta = 2 = 2Q on Q = 1

  QuantReport rep = quantitative_suite(dec, ms, "i", 5, 20);
  EXPECT_EQ(rep.mode, "i");
  EXPECT_EQ(rep.cells.size(), 9u);  // three p times three a
  EXPECT_GT(rep.kernel_l1, 0.0);
  EXPECT_EQ(rep.thr.p_thr, Rational(1));
  for (const auto& cell : rep.cells) {
    EXPECT_GE(cell.ap_char, 1.0 - 1e-12);
    EXPECT_GE(cell.rh_char, 1.0 - 1e-12);
    EXPECT_GT(cell.ceiling, 0.0);
    EXPECT_GE(cell.lower, 0.0);
    EXPECT_EQ(cell.exact, cell.p == 2.0);
    EXPECT_DOUBLE_EQ(cell.r1, 1.0);
    EXPECT_EQ(cell.r2, kInf);
  }

  EXPECT_THROW(quantitative_suite(dec, ms, "ii", 5, 8), std::invalid_argument);
  EXPECT_THROW(quantitative_suite(dec, ms, "iii", 5, 8), std::invalid_argument);
  EXPECT_THROW(quantitative_suite(dec, ms, "iv", 5, 8), std::invalid_argument);
}

TEST(Quantitative, ModeThreeUsesFiniteSecondExponent) {
  Group g = make_torus(1, 16);
  SpectralDecomposition dec = spectral_decompose(g, 2.0);
  MultiplierSpec ms = default_spec();
  ms.beta = 0.5;  // inside (0, Q) for Q = 1; s_beta = 4

  QuantReport rep = quantitative_suite(dec, ms, "iii", 5, 15);
  EXPECT_EQ(rep.cells.size(), 9u);
  for (const auto& cell : rep.cells) {
    EXPECT_DOUBLE_EQ(cell.r1, 2.0);
    EXPECT_TRUE(std::isfinite(cell.r2));
    EXPECT_GT(cell.r2, cell.p);
    EXPECT_GE(cell.rh_char, 1.0 - 1e-12);
    EXPECT_GT(cell.exponent, 0.0);
  }
}

TEST(Quantitative, DeterministicUnderSeed) {
  Group g = make_torus(1, 16);
  SpectralDecomposition dec = spectral_decompose(g, 2.0);
  MultiplierSpec ms = default_spec();
  QuantReport a = quantitative_suite(dec, ms, "i", 9, 10);
  QuantReport b = quantitative_suite(dec, ms, "i", 9, 10);
  ASSERT_EQ(a.cells.size(), b.cells.size());
  for (size_t i = 0; i < a.cells.size(); i++) {
    EXPECT_EQ(a.cells[i].lower, b.cells[i].lower);
    EXPECT_EQ(a.cells[i].ceiling, b.cells[i].ceiling);
  }
}
