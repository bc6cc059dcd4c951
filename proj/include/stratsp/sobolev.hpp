// L^2 Sobolev norms of window functions on a bounded interval, by repeated
// central differences and trapezoid quadrature on a zero-padded uniform grid.
// The integrand must vanish at the window boundary (hard error otherwise);
// fractional orders interpolate log-convexly between the neighboring integers.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace stratsp {

using ScalarFn = std::function<std::complex<double>(double)>;

inline double sobolev_norm_integer(const ScalarFn& h, double lo, double hi, int s,
                                   int grid = 4096) {
  if (s < 0) throw std::invalid_argument("sobolev_norm: order must be >= 0");
  if (!(hi > lo)) throw std::invalid_argument("sobolev_norm: empty window");
  int M = std::max(grid, 4096) + 1;
  double dx = (hi - lo) / (M - 1);
  std::vector<std::complex<double>> cur(M + 2 * s, 0.0);
  double peak = 0.0;
  for (int i = 0; i < M; i++) {
    cur[s + i] = h(lo + i * dx);
    peak = std::max(peak, std::abs(cur[s + i]));
  }
  double edge = std::max(std::abs(cur[s]), std::abs(cur[s + M - 1]));
  if (peak > 0.0 && edge > 1e-10 * peak)
    throw std::domain_error("sobolev_norm: support touches the window boundary");
  int L = M + 2 * s;
  auto trapz_sq = [&](const std::vector<std::complex<double>>& v) {
    double acc = 0.0;
    for (int i = 0; i < L; i++) {
      double w = (i == 0 || i == L - 1) ? 0.5 : 1.0;
      acc += w * std::norm(v[i]);
    }
    return acc * dx;
  };
  double total = trapz_sq(cur);
  std::vector<std::complex<double>> nxt(L);
  for (int k = 1; k <= s; k++) {
    for (int i = 0; i < L; i++) {
      std::complex<double> up = (i + 1 < L) ? cur[i + 1] : 0.0;
      std::complex<double> dn = (i > 0) ? cur[i - 1] : 0.0;
      nxt[i] = (up - dn) / (2.0 * dx);
    }
    cur.swap(nxt);
    total += trapz_sq(cur);
  }
  return std::sqrt(total);
}

// Integer s computed directly; fractional s = k + t with t in (0,1) via
// ||h||_{k}^{1-t} * ||h||_{k+1}^{t}.
inline double sobolev_norm(const ScalarFn& h, double lo, double hi, double s,
                           int grid = 4096) {
  if (s < 0) throw std::invalid_argument("sobolev_norm: order must be >= 0");
  double k = std::floor(s);
  double t = s - k;
  if (t < 1e-9) return sobolev_norm_integer(h, lo, hi, static_cast<int>(k), grid);
  if (t > 1.0 - 1e-9) return sobolev_norm_integer(h, lo, hi, static_cast<int>(k) + 1, grid);
  double a = sobolev_norm_integer(h, lo, hi, static_cast<int>(k), grid);
  double b = sobolev_norm_integer(h, lo, hi, static_cast<int>(k) + 1, grid);
  return std::pow(a, 1.0 - t) * std::pow(b, t);
}

}  // namespace stratsp
