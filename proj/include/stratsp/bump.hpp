// Smooth dyadic partition of unity on (0, inf). chi is an exp-flat cutoff,
// identically 1 on (0,1] and 0 on [nu,inf); phi(u) = chi(u) - chi(nu u) is a
// tent supported exactly on [1/nu, nu] with phi(1) = 1, and
// sum_j phi(nu^{-j} u) = 1 for every u > 0 (telescoping).
#pragma once

#include <cmath>
#include <stdexcept>

namespace stratsp {

struct BumpProfile {
  double nu = 2.0;

  // C^infty monotone step: 0 at t<=0, 1 at t>=1, exp-flat at both ends.
  static double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double a = std::exp(-1.0 / t);
    double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
  }

  double chi(double u) const {
    if (u <= 1.0) return 1.0;
    if (u >= nu) return 0.0;
    return smoothstep((nu - u) / (nu - 1.0));
  }

  double phi(double u) const { return chi(u) - chi(nu * u); }

  // phi(nu^{-j} u)
  double phi_at_scale(int j, double u) const { return phi(std::pow(nu, -j) * u); }
};

inline BumpProfile make_bump_partition(double nu) {
  if (!(nu > 1.0)) throw std::invalid_argument("bump: nu must exceed 1");
  return BumpProfile{nu};
}

// |sum_{j=jmin}^{jmax} phi(nu^{-j} u) - 1| for u covered by the j-range.
inline double partition_deficit(const BumpProfile& b, double u, int jmin, int jmax) {
  double s = 0.0;
  for (int j = jmin; j <= jmax; j++) s += b.phi_at_scale(j, u);
  return std::abs(s - 1.0);
}

}  // namespace stratsp
