// Shared vector types and small linear-algebra helpers.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "stratsp/group.hpp"

namespace stratsp {

using cvec = std::vector<std::complex<double>>;
using dvec = std::vector<double>;

inline double norm2(const cvec& f) {
  double s = 0;
  for (const auto& v : f) s += std::norm(v);
  return std::sqrt(s);
}

inline double norm_sup(const cvec& f) {
  double s = 0;
  for (const auto& v : f) s = std::max(s, std::abs(v));
  return s;
}

// <f,g> = sum f(x) conj(g(x))
inline std::complex<double> inner(const cvec& f, const cvec& g) {
  std::complex<double> s = 0;
  for (size_t i = 0; i < f.size(); i++) s += f[i] * std::conj(g[i]);
  return s;
}

// (T_z f)(x) = f(z^{-1} x)
inline cvec left_translate(const Group& g, int z, const cvec& f) {
  cvec out(f.size());
  int zi = g.inv(z);
  for (int x = 0; x < g.size; x++) out[x] = f[g.mul(zi, x)];
  return out;
}

inline double max_abs_diff(const cvec& a, const cvec& b) {
  double m = 0;
  for (size_t i = 0; i < a.size(); i++) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace stratsp
