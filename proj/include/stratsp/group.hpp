// Finite models of stratified groups: flat tori Z_n^d and discrete Heisenberg
// quotients H(Z_m) with m = n^2, together with their quasi-norms.
//
// Elements are indexed 0..size-1 with the identity at index 0. The full
// multiplication table is stored (size <= 4096, so at most 32 MB of uint16),
// which makes products, inverses and distances O(1) lookups everywhere else.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace stratsp {

constexpr int kMaxModelPoints = 4096;

struct Group {
  std::string name;
  int size = 0;
  int Q = 0;  // homogeneous dimension
  int identity = 0;
  std::vector<std::uint16_t> mul_table;  // size*size, row-major: mul(a,b) = a.b
  std::vector<std::uint16_t> inv_table;
  std::vector<double> norms;             // quasi-norm per element
  std::vector<std::uint16_t> generators; // directed list, inverses included
  std::vector<std::vector<int>> coords;  // integer coordinates per element
  std::vector<int> coord_weights;        // dilation weight per coordinate (1 = horizontal)
  double h0 = 0.0;        // smallest nonzero quasi-norm value
  double diameter = 0.0;

  int mul(int a, int b) const { return mul_table[static_cast<size_t>(a) * size + b]; }
  int inv(int a) const { return inv_table[a]; }
  double norm(int a) const { return norms[a]; }
  // Left-invariant distance d(z,x) = |z^{-1} x|.
  double dist(int z, int x) const { return norms[mul(inv_table[z], x)]; }

  // Distinct quasi-norm values, ascending (0 first).
  std::vector<double> ball_radii() const {
    std::vector<double> r = norms;
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
  }

  // |B(z,r)| with closed balls; independent of z by transitivity.
  int ball_count(double r) const {
    int c = 0;
    for (double v : norms)
      if (v <= r) c++;
    return c;
  }

  // Smallest K with |ab| <= K(|a|+|b|) over all pairs (a,b) != (e,e).
  double measure_quasi_triangle() const {
    double K = 0.0;
    for (int a = 0; a < size; a++)
      for (int b = 0; b < size; b++) {
        double denom = norms[a] + norms[b];
        if (denom == 0.0) continue;
        K = std::max(K, norms[mul(a, b)] / denom);
      }
    return K;
  }

  // max |x^{-1}|/|x| over x != e; 1 when the gauge is inversion-symmetric.
  double inversion_asymmetry() const {
    double ratio = 1.0;
    for (int a = 1; a < size; a++)
      ratio = std::max(ratio, norms[inv_table[a]] / norms[a]);
    return ratio;
  }
};

namespace detail {

inline int symmetric_rep(int c, int n) {
  // representative in (-n/2, n/2]
  return c > n / 2 ? c - n : c;
}

inline void finalize(Group& g) {
  g.h0 = 0.0;
  g.diameter = 0.0;
  for (int a = 0; a < g.size; a++) {
    double v = g.norms[a];
    g.diameter = std::max(g.diameter, v);
    if (v > 0.0 && (g.h0 == 0.0 || v < g.h0)) g.h0 = v;
  }
}

}  // namespace detail

inline Group make_torus(int d, int n) {
  if (d < 1 || n < 2) throw std::invalid_argument("torus: need d >= 1 and n >= 2");
  long long sz = 1;
  for (int i = 0; i < d; i++) {
    sz *= n;
    if (sz > kMaxModelPoints)
      throw std::invalid_argument("torus(" + std::to_string(d) + "," + std::to_string(n) +
                                  "): exceeds the " + std::to_string(kMaxModelPoints) +
                                  "-point model cap");
  }
  Group g;
  g.name = "torus(" + std::to_string(d) + "," + std::to_string(n) + ")";
  g.size = static_cast<int>(sz);
  g.Q = d;
  g.coord_weights.assign(d, 1);
  g.coords.assign(g.size, std::vector<int>(d));
  for (int idx = 0; idx < g.size; idx++) {
    int t = idx;
    for (int i = 0; i < d; i++) { g.coords[idx][i] = t % n; t /= n; }
  }
  auto index_of = [&](const std::vector<int>& c) {
    int idx = 0;
    for (int i = d - 1; i >= 0; i--) idx = idx * n + ((c[i] % n + n) % n);
    return idx;
  };
  g.mul_table.resize(static_cast<size_t>(g.size) * g.size);
  g.inv_table.resize(g.size);
  std::vector<int> tmp(d);
  for (int a = 0; a < g.size; a++) {
    for (int b = 0; b < g.size; b++) {
      for (int i = 0; i < d; i++) tmp[i] = g.coords[a][i] + g.coords[b][i];
      g.mul_table[static_cast<size_t>(a) * g.size + b] =
          static_cast<std::uint16_t>(index_of(tmp));
    }
    for (int i = 0; i < d; i++) tmp[i] = -g.coords[a][i];
    g.inv_table[a] = static_cast<std::uint16_t>(index_of(tmp));
  }
  g.norms.resize(g.size);
  for (int a = 0; a < g.size; a++) {
    double s = 0;
    for (int i = 0; i < d; i++) {
      double r = detail::symmetric_rep(g.coords[a][i], n);
      s += r * r;
    }
    g.norms[a] = std::sqrt(s);
  }
  for (int i = 0; i < d; i++) {
    std::vector<int> e(d, 0);
    e[i] = 1;
    int plus = index_of(e);
    e[i] = -1;
    int minus = index_of(e);
    g.generators.push_back(static_cast<std::uint16_t>(plus));
    if (minus != plus) g.generators.push_back(static_cast<std::uint16_t>(minus));
  }
  detail::finalize(g);
  return g;
}

// Heisenberg group over the ring Z_m with m = n^2: coordinates (x,y,z) mod m,
// product (x,y,z).(x',y',z') = (x+x', y+y', z+z'+x y'). This is a genuine
// step-2 group: [X,Y] = (0,0,1) is central of order m = n^2, and the first
// stratum {X,Y} generates. Q = 4. Gauge: ((x~^2+y~^2)^2 + z~^2)^{1/4} on
// symmetric representatives.
inline Group make_heisenberg(int n) {
  if (n < 2) throw std::invalid_argument("heisenberg: need n >= 2");
  long long m = static_cast<long long>(n) * n;
  long long sz = m * m * m;
  if (sz > kMaxModelPoints)
    throw std::invalid_argument("heisenberg(" + std::to_string(n) + "): " +
                                std::to_string(sz) + " points exceeds the " +
                                std::to_string(kMaxModelPoints) + "-point model cap");
  int M = static_cast<int>(m);
  Group g;
  g.name = "heisenberg(" + std::to_string(n) + ")";
  g.size = static_cast<int>(sz);
  g.Q = 4;
  g.coord_weights = {1, 1, 2};  // central coordinate scales like delta^2
  auto index_of = [M](int x, int y, int z) {
    x = (x % M + M) % M; y = (y % M + M) % M; z = (z % M + M) % M;
    return (x * M + y) * M + z;
  };
  g.coords.assign(g.size, std::vector<int>(3));
  for (int x = 0; x < M; x++)
    for (int y = 0; y < M; y++)
      for (int z = 0; z < M; z++) {
        int idx = index_of(x, y, z);
        g.coords[idx] = {x, y, z};
      }
  g.mul_table.resize(static_cast<size_t>(g.size) * g.size);
  g.inv_table.resize(g.size);
  for (int a = 0; a < g.size; a++) {
    int xa = g.coords[a][0], ya = g.coords[a][1], za = g.coords[a][2];
    for (int b = 0; b < g.size; b++) {
      int xb = g.coords[b][0], yb = g.coords[b][1], zb = g.coords[b][2];
      g.mul_table[static_cast<size_t>(a) * g.size + b] =
          static_cast<std::uint16_t>(index_of(xa + xb, ya + yb, za + zb + xa * yb));
    }
    g.inv_table[a] = static_cast<std::uint16_t>(index_of(-xa, -ya, -za + xa * ya));
  }
  g.norms.resize(g.size);
  for (int a = 0; a < g.size; a++) {
    double x = detail::symmetric_rep(g.coords[a][0], M);
    double y = detail::symmetric_rep(g.coords[a][1], M);
    double z = detail::symmetric_rep(g.coords[a][2], M);
    double h = x * x + y * y;
    g.norms[a] = std::pow(h * h + z * z, 0.25);
  }
  auto idx = [&](int x, int y, int z) { return index_of(x, y, z); };
  g.generators = {static_cast<std::uint16_t>(idx(1, 0, 0)),
                  static_cast<std::uint16_t>(idx(-1, 0, 0)),
                  static_cast<std::uint16_t>(idx(0, 1, 0)),
                  static_cast<std::uint16_t>(idx(0, -1, 0))};
  detail::finalize(g);
  return g;
}

// Parses "torus(d,n)" or "heisenberg(n)" (whitespace tolerated).
inline Group make_model(const std::string& desc) {
  std::string s;
  for (char c : desc)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  auto open = s.find('(');
  auto close = s.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw std::invalid_argument("model: expected kind(args), got '" + desc + "'");
  std::string kind = s.substr(0, open);
  std::string args = s.substr(open + 1, close - open - 1);
  auto comma = args.find(',');
  try {
    if (kind == "torus") {
      if (comma == std::string::npos)
        throw std::invalid_argument("model: torus needs (d,n)");
      return make_torus(std::stoi(args.substr(0, comma)), std::stoi(args.substr(comma + 1)));
    }
    if (kind == "heisenberg") {
      if (comma != std::string::npos)
        throw std::invalid_argument("model: heisenberg needs (n)");
      return make_heisenberg(std::stoi(args));
    }
  } catch (const std::invalid_argument&) {
    throw;
  }
  throw std::invalid_argument("model: unknown kind '" + kind + "'");
}

}  // namespace stratsp
