// Independent oracles for the test suites. Everything here recomputes target
// quantities through a different algorithm than the library path it checks:
// matrix-exponential actions by scaled Taylor series, closed-form circle
// eigenvalues, and dense singular values.
#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "stratsp/conv.hpp"
#include "stratsp/group.hpp"
#include "stratsp/spectral.hpp"
#include "stratsp/types.hpp"

namespace oracles {

using stratsp::cvec;
using stratsp::dvec;
using stratsp::Group;

// exp(-t L) f by scaling + Taylor on the sparse Laplacian action; never
// touches the eigendecomposition.
inline cvec expm_heat_action(const Group& g, double s0, double t, const cvec& f) {
  double norm_bound = 2.0 * t * s0 * s0 * (double)g.generators.size();
  int m = 0;
  while (norm_bound / std::pow(2.0, m) > 0.5) m++;
  long steps = 1L << m;
  double h = t / (double)steps;
  cvec y = f;
  for (long s = 0; s < steps; s++) {
    // y <- exp(-h L) y via Taylor; ||h L|| <= 1/2 so 24 terms reach ~1e-19.
    cvec term = y;
    cvec acc = y;
    for (int k = 1; k <= 24; k++) {
      term = stratsp::laplacian_apply(g, s0, term);
      double c = -h / (double)k;
      for (auto& z : term) z *= c;
      for (size_t i = 0; i < acc.size(); i++) acc[i] += term[i];
    }
    y = std::move(acc);
  }
  return y;
}

// Circle eigenvalues 2 s0^2 (1 - cos(2 pi k / n)) summed over d factors,
// enumerated directly; returned sorted ascending.
inline dvec torus_eigenvalues(int d, int n, double s0) {
  dvec single(n);
  for (int k = 0; k < n; k++)
    single[k] = 2.0 * s0 * s0 * (1.0 - std::cos(2.0 * M_PI * k / n));
  dvec out = {0.0};
  for (int axis = 0; axis < d; axis++) {
    dvec next;
    next.reserve(out.size() * n);
    for (double base : out)
      for (double v : single) next.push_back(base + v);
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Dense operator matrix of right convolution by K: column y is T(delta_y).
inline Eigen::MatrixXcd convolution_matrix(const Group& g, const cvec& K) {
  Eigen::MatrixXcd T(g.size, g.size);
  for (int y = 0; y < g.size; y++) {
    int yi = g.inv(y);
    for (int x = 0; x < g.size; x++) T(x, y) = K[g.mul(yi, x)];
  }
  return T;
}

// Largest singular value of W^{1/2} T W^{-1/2}, computed densely.
inline double weighted_l2_opnorm_dense(const Group& g, const cvec& K, const dvec& w) {
  Eigen::MatrixXcd T = convolution_matrix(g, K);
  for (int x = 0; x < g.size; x++)
    for (int y = 0; y < g.size; y++) T(x, y) *= std::sqrt(w[x]) / std::sqrt(w[y]);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(T);
  return svd.singularValues()(0);
}

// ||T||_{L^p -> L^p} lower bound certificate: the exact p-norm ratio of one
// explicit input.
inline double lp_ratio(const Group& g, const cvec& K, const cvec& f, double p) {
  cvec Tf = stratsp::convolve(g, f, K);
  return stratsp::lp_norm(Tf, p) / stratsp::lp_norm(f, p);
}

}  // namespace oracles
