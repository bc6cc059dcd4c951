// Oscillatory averages of Schrodinger-type flows: the order-k time average of
// exp(i s lambda^{alpha/2}) over [0, t], evaluated per eigenvalue through
// adaptive quadrature, plus the half-wave / dispersive propagator itself.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "stratsp/spectral.hpp"
#include "stratsp/types.hpp"

namespace stratsp {

namespace detail {

using cplx = std::complex<double>;

inline cplx simpson_rule(double a, double b, cplx fa, cplx fm, cplx fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
cplx adaptive_simpson(F&& f, double a, double b, cplx fa, cplx fm, cplx fb, cplx whole,
                      double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  cplx flm = f(lm), frm = f(rm);
  cplx left = simpson_rule(a, m, fa, flm, fm);
  cplx right = simpson_rule(m, b, fm, frm, fb);
  cplx s2 = left + right;
  if (depth <= 0 || std::abs(s2 - whole) <= 15.0 * tol) return s2 + (s2 - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

// Integrate f over [a, b], pre-split into panels no wider than max_panel so
// the oscillation inside each panel stays bounded.
template <class F>
cplx integrate_oscillatory(F&& f, double a, double b, double max_panel, double tol) {
  if (b <= a) return {0.0, 0.0};
  int panels = std::max(1, (int)std::ceil((b - a) / max_panel));
  cplx total{0.0, 0.0};
  for (int p = 0; p < panels; p++) {
    double x0 = a + (b - a) * p / panels;
    double x1 = a + (b - a) * (p + 1) / panels;
    double xm = 0.5 * (x0 + x1);
    cplx f0 = f(x0), fm = f(xm), f1 = f(x1);
    cplx whole = simpson_rule(x0, x1, f0, fm, f1);
    total += adaptive_simpson(f, x0, x1, f0, fm, f1, whole, tol / panels, 48);
  }
  return total;
}

}  // namespace detail

// Average of order k of the flow at frequency mu = lambda^{alpha/2}:
//   A_k(t, mu) = k t^{-k} integral_0^t (t - s)^{k-1} exp(i s mu) ds.
// At lambda = 0 the average is exactly 1 for every k and t.
inline std::complex<double> riesz_scalar(int k, double alpha, double t, double lambda,
                                         double tol = 1e-10) {
  if (k < 1) throw std::invalid_argument("riesz_scalar: order k must be positive");
  if (!(t > 0.0)) throw std::invalid_argument("riesz_scalar: time t must be positive");
  if (lambda < 0.0) throw std::domain_error("riesz_scalar: lambda must be nonnegative");
  if (lambda == 0.0) return {1.0, 0.0};
  double mu = std::pow(lambda, alpha / 2.0);
  auto f = [&](double s) {
    double w = k == 1 ? 1.0 : std::pow(1.0 - s / t, k - 1);
    return std::polar(w, s * mu);
  };
  // Keep each quadrature panel under a half period of the phase.
  double max_panel = mu > 0.0 ? 3.141592653589793 / mu : t;
  std::complex<double> integral = detail::integrate_oscillatory(f, 0.0, t, max_panel, tol * t);
  return (double)k / t * integral;
}

// Closed form at order 1: (exp(i t mu) - 1) / (i t mu).
inline std::complex<double> riesz_scalar_order1(double alpha, double t, double lambda) {
  if (!(t > 0.0)) throw std::invalid_argument("riesz_scalar_order1: time t must be positive");
  if (lambda < 0.0) throw std::domain_error("riesz_scalar_order1: lambda must be nonnegative");
  if (lambda == 0.0) return {1.0, 0.0};
  double mu = std::pow(lambda, alpha / 2.0);
  std::complex<double> itmu{0.0, t * mu};
  return (std::exp(itmu) - 1.0) / itmu;
}

// Leading large-mu constant: repeated integration by parts gives
//   A_k(t, mu) ~ k! (i t mu)^{-k} exp(i t mu) * e^{-i pi k / 2} ... folded as
//   A_k(t, mu) = c_k (t mu)^{-k} exp(i t mu) + O((t mu)^{-k-1}),
// with c_k = k! exp(-i pi k / 2).
inline std::complex<double> riesz_asymptotic_constant(int k) {
  if (k < 1) throw std::invalid_argument("riesz_asymptotic_constant: order k must be positive");
  double fact = 1.0;
  for (int i = 2; i <= k; i++) fact *= i;
  return std::polar(fact, -1.5707963267948966 * k);
}

inline std::complex<double> riesz_principal_term(int k, double t, double mu) {
  return riesz_asymptotic_constant(k) * std::pow(t * mu, -(double)k) *
         std::polar(1.0, t * mu);
}

inline Multiplier make_riesz_multiplier(int k, double alpha, double t) {
  return [k, alpha, t](double sigma) { return riesz_scalar(k, alpha, t, sigma * sigma); };
}

inline cvec riesz_mean_apply(const SpectralDecomposition& dec, int k, double alpha, double t,
                             const cvec& f) {
  return apply_multiplier(dec, make_riesz_multiplier(k, alpha, t), f);
}

// Dispersive propagator exp(i t L^{alpha/2}); t = 0 returns the input
// unchanged, bit for bit.
inline cvec dispersive_propagate(const SpectralDecomposition& dec, int alpha, double t,
                                 const cvec& f) {
  if (alpha < 1) throw std::invalid_argument("dispersive_propagate: alpha must be a positive integer");
  if (t == 0.0) return f;
  std::vector<std::complex<double>> scal(dec.N);
  for (int i = 0; i < dec.N; i++) {
    double mu = std::pow(dec.sq[i], alpha);  // (sigma^2)^{alpha/2} = sigma^alpha
    scal[i] = std::polar(1.0, t * mu);
  }
  return apply_scalars(dec, scal, f);
}

}  // namespace stratsp
