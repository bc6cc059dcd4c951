// Oscillating multipliers sigma -> exp(i sigma^theta) sigma^{-theta beta/2},
// restricted to the region where sigma^theta >= 1, together with their dyadic
// frequency pieces and the two-sided boundedness diagnostics used to certify
// class membership of a candidate multiplier.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "stratsp/bump.hpp"
#include "stratsp/sobolev.hpp"
#include "stratsp/spectral.hpp"

namespace stratsp {

struct MultiplierSpec {
  double theta = 1.0;
  double beta = 2.0;
  double eps = 0.1;        // small/large spatial-scale split exponent
  double eps_tilde = 0.01; // slack in unweighted L1 decay rates
  double nu = 2.0;

  void validate() const {
    if (theta == 0.0) throw std::invalid_argument("multiplier: theta must be nonzero");
    if (beta < 0.0) throw std::invalid_argument("multiplier: beta must be nonnegative");
    if (!(nu > 1.0)) throw std::invalid_argument("multiplier: nu must exceed 1");
    if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("multiplier: eps must lie in (0,1)");
  }
};

// Value at sigma >= 0. Zero outside {sigma^theta >= 1}; the theta < 0 branch
// extends continuously by 0 at sigma = 0.
inline std::complex<double> oscillating_multiplier(const MultiplierSpec& ms, double sigma) {
  if (sigma < 0.0) throw std::domain_error("oscillating_multiplier: sigma must be nonnegative");
  if (ms.theta > 0.0) {
    if (sigma < 1.0) return {0.0, 0.0};
  } else {
    if (sigma > 1.0 || sigma == 0.0) return {0.0, 0.0};
  }
  double phase = std::pow(sigma, ms.theta);
  double amp = std::pow(sigma, -ms.theta * ms.beta / 2.0);
  return std::polar(amp, phase);
}

inline Multiplier make_oscillating(const MultiplierSpec& ms) {
  ms.validate();
  return [ms](double sigma) { return oscillating_multiplier(ms, sigma); };
}

// Band piece m_j(sigma) = m(sigma) phi(nu^{-j} sigma); support in [nu^{j-1}, nu^{j+1}].
inline std::complex<double> piece_value(const MultiplierSpec& ms, const BumpProfile& b, int j,
                                        double sigma) {
  double w = b.phi_at_scale(j, sigma);
  if (w == 0.0) return {0.0, 0.0};
  return w * oscillating_multiplier(ms, sigma);
}

inline Multiplier make_piece(const MultiplierSpec& ms, const BumpProfile& b, int j) {
  ms.validate();
  return [ms, b, j](double sigma) { return piece_value(ms, b, j, sigma); };
}

// Rescaled piece u -> m(nu^j u) phi(u); support in [1/nu, nu].
inline std::complex<double> rescaled_piece_value(const MultiplierSpec& ms, const BumpProfile& b,
                                                 int j, double u) {
  double w = b.phi(u);
  if (w == 0.0) return {0.0, 0.0};
  return w * oscillating_multiplier(ms, std::pow(b.nu, j) * u);
}

// All j whose band (nu^{j-1}, nu^{j+1}) meets [smin, smax]; smin, smax > 0.
inline std::vector<int> band_range(double nu, double smin, double smax) {
  if (!(smin > 0.0) || !(smax >= smin)) throw std::invalid_argument("band_range: need 0 < smin <= smax");
  double lo = std::log(smin) / std::log(nu);
  double hi = std::log(smax) / std::log(nu);
  std::vector<int> js;
  for (int j = (int)std::floor(lo) - 1; j <= (int)std::ceil(hi) + 1; j++) {
    if (j + 1 > lo && j - 1 < hi) js.push_back(j);
  }
  return js;
}

// Bands meeting [smin, smax] that also meet the support of the multiplier.
inline std::vector<int> support_band_range(const MultiplierSpec& ms, double smin, double smax) {
  std::vector<int> js;
  for (int j : band_range(ms.nu, smin, smax)) {
    if (ms.theta > 0.0 ? j >= 0 : j <= 0) js.push_back(j);
  }
  return js;
}

// Bands with j*theta > 0: the regime covered by the decay estimates.
inline std::vector<int> deep_band_range(const MultiplierSpec& ms, double smin, double smax) {
  std::vector<int> js;
  for (int j : support_band_range(ms, smin, smax)) {
    if (j * ms.theta > 0.0) js.push_back(j);
  }
  return js;
}

// Two-sided class diagnostics. For each band j with j*theta > 0 the rescaled
// piece h_j(u) = m(nu^j u) phi(u) is measured on [1/nu, nu]:
//   cond1_j   = nu^{j theta beta / 2} * sup |h_j|
//   cond2_{s,j} = nu^{-j theta (2s - beta)/2} * ||h_j||_{L^2_s}
// Both sequences are bounded uniformly in j exactly when the multiplier lies
// in the class; the tail ratio (max/min over the deeper half of the j-range)
// quantifies flatness.
struct ClassReport {
  std::vector<int> js;
  std::vector<double> cond1;               // per j
  std::vector<std::vector<double>> cond2;  // [s][j-index], s = 0..smax
  int smax = 0;
  double cond1_sup = 0.0, cond1_tail_ratio = 0.0;
  std::vector<double> cond2_sup, cond2_tail_ratio;
  bool cond1_bounded = false;
  std::vector<char> cond2_bounded;

  bool all_bounded() const {
    if (!cond1_bounded) return false;
    for (char c : cond2_bounded)
      if (!c) return false;
    return true;
  }
};

namespace detail {

// max/min of v over its second half (deeper bands); inf if the half is empty
// or touches zero.
inline double tail_ratio(const std::vector<double>& v) {
  size_t n = v.size();
  if (n < 2) return std::numeric_limits<double>::infinity();
  double mx = 0.0, mn = std::numeric_limits<double>::infinity();
  for (size_t i = n / 2; i < n; i++) {
    mx = std::max(mx, v[i]);
    mn = std::min(mn, v[i]);
  }
  if (!(mn > 0.0) || !std::isfinite(mx)) return std::numeric_limits<double>::infinity();
  return mx / mn;
}

}  // namespace detail

inline ClassReport class_membership_report(const MultiplierSpec& ms, const BumpProfile& b,
                                           double smin, double smax_sigma, int smax_order,
                                           int grid = 4096, double flat_ratio_cap = 10.0) {
  ms.validate();
  if (smax_order < 0) throw std::invalid_argument("class report: smax_order must be nonnegative");
  ClassReport rep;
  rep.smax = smax_order;
  rep.js = deep_band_range(ms, smin, smax_sigma);
  // Deeper bands last, so the tail ratio looks at large |j| theta.
  std::sort(rep.js.begin(), rep.js.end(),
            [&](int a, int c) { return a * ms.theta < c * ms.theta; });

  double lo = 1.0 / b.nu, hi = b.nu;
  double pad = 0.05 * (hi - lo);
  for (int j : rep.js) {
    double sup = 0.0;
    for (int i = 0; i <= grid; i++) {
      double u = lo + (hi - lo) * i / grid;
      sup = std::max(sup, std::abs(rescaled_piece_value(ms, b, j, u)));
    }
    rep.cond1.push_back(std::pow(ms.nu, j * ms.theta * ms.beta / 2.0) * sup);
  }
  for (int s = 0; s <= smax_order; s++) {
    std::vector<double> row;
    for (int j : rep.js) {
      auto h = [&](double u) { return rescaled_piece_value(ms, b, j, u); };
      double w = sobolev_norm_integer(h, lo - pad, hi + pad, s, grid);
      row.push_back(std::pow(ms.nu, -j * ms.theta * (2.0 * s - ms.beta) / 2.0) * w);
    }
    rep.cond2.push_back(std::move(row));
  }

  rep.cond1_sup = rep.cond1.empty() ? 0.0 : *std::max_element(rep.cond1.begin(), rep.cond1.end());
  rep.cond1_tail_ratio = detail::tail_ratio(rep.cond1);
  rep.cond1_bounded = rep.cond1_tail_ratio <= flat_ratio_cap;
  for (int s = 0; s <= smax_order; s++) {
    const auto& row = rep.cond2[s];
    rep.cond2_sup.push_back(row.empty() ? 0.0 : *std::max_element(row.begin(), row.end()));
    double tr = detail::tail_ratio(row);
    rep.cond2_tail_ratio.push_back(tr);
    rep.cond2_bounded.push_back(tr <= flat_ratio_cap ? 1 : 0);
  }
  return rep;
}

// Pointwise partition check: |sum_j m_j(sigma) - m(sigma)| over the bands
// covering sigma. Exact telescoping makes this roundoff-small.
inline double piece_sum_deficit(const MultiplierSpec& ms, const BumpProfile& b, double sigma) {
  auto js = band_range(ms.nu, sigma, sigma);
  std::complex<double> s{0.0, 0.0};
  for (int j : js) s += piece_value(ms, b, j, sigma);
  // Bands outside the support window contribute exact zeros; the covering
  // identity needs every j with phi(nu^{-j} sigma) != 0, which js contains.
  return std::abs(s - oscillating_multiplier(ms, sigma));
}

}  // namespace stratsp
