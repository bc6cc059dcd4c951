// Sublaplacian assembly, dense eigendecomposition (LAPACKE dsyevd), and the
// functional calculus m(sqrt(L)). Multipliers are functions of sigma = sqrt of
// the eigenvalue. Kernels, convolution, Plancherel and the heat-kernel reports
// live here too.
#pragma once

#include <lapacke.h>

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "stratsp/fit.hpp"
#include "stratsp/group.hpp"
#include "stratsp/sobolev.hpp"
#include "stratsp/types.hpp"

namespace stratsp {

using Multiplier = std::function<std::complex<double>(double)>;

// L = s0^2 (deg I - sum_a R_a) over the directed generator list; (R_a f)(x) = f(xa).
inline cvec laplacian_apply(const Group& g, double s0, const cvec& f) {
  double s2 = s0 * s0;
  int deg = static_cast<int>(g.generators.size());
  cvec out(g.size);
  for (int x = 0; x < g.size; x++) {
    std::complex<double> acc = static_cast<double>(deg) * f[x];
    for (auto a : g.generators) acc -= f[g.mul(x, a)];
    out[x] = s2 * acc;
  }
  return out;
}

// Dense column-major N*N matrix of L; symmetric because the generator list is
// closed under inverses.
inline dvec assemble_sublaplacian(const Group& g, double s0) {
  int N = g.size;
  double s2 = s0 * s0;
  dvec A(static_cast<size_t>(N) * N, 0.0);
  int deg = static_cast<int>(g.generators.size());
  for (int x = 0; x < N; x++) {
    A[static_cast<size_t>(x) * N + x] = s2 * deg;
    for (auto a : g.generators) {
      int y = g.mul(x, a);  // L_{x,y} -= s0^2
      A[static_cast<size_t>(y) * N + x] -= s2;
    }
  }
  return A;
}

struct SpectralDecomposition {
  const Group* g = nullptr;
  double s0 = 1.0;
  int N = 0;
  dvec lambda;  // ascending eigenvalues of L
  dvec sq;      // sqrt(lambda), with tiny negative roundoff clamped to 0
  dvec V;       // N*N column-major, column i = orthonormal eigenvector i
  double clamped = 0.0;  // largest |negative| eigenvalue clamped to zero

  Eigen::Map<const Eigen::MatrixXd> Vm() const {
    return Eigen::Map<const Eigen::MatrixXd>(V.data(), N, N);
  }
};

inline SpectralDecomposition spectral_decompose(const Group& g, double s0) {
  SpectralDecomposition dec;
  dec.g = &g;
  dec.s0 = s0;
  dec.N = g.size;
  dec.V = assemble_sublaplacian(g, s0);
  dec.lambda.resize(dec.N);
  int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', dec.N, dec.V.data(), dec.N,
                            dec.lambda.data());
  if (info != 0)
    throw std::runtime_error("spectral_decompose: dsyevd failed with info=" +
                             std::to_string(info));
  double lmax = std::max(dec.lambda.back(), 1.0);
  dec.sq.resize(dec.N);
  for (int i = 0; i < dec.N; i++) {
    double l = dec.lambda[i];
    if (l < 0) {
      if (-l > 1e-8 * lmax)
        throw std::runtime_error("spectral_decompose: eigenvalue " + std::to_string(l) +
                                 " is negative beyond roundoff");
      dec.clamped = std::max(dec.clamped, -l);
      l = 0.0;
      dec.lambda[i] = 0.0;
    }
    dec.sq[i] = std::sqrt(l);
  }
  return dec;
}

inline cvec multiplier_values(const SpectralDecomposition& dec, const Multiplier& m) {
  cvec vals(dec.N);
  for (int i = 0; i < dec.N; i++) vals[i] = m(dec.sq[i]);
  return vals;
}

inline bool is_exact_identity(const cvec& scalars) {
  for (const auto& v : scalars)
    if (v.real() != 1.0 || v.imag() != 0.0) return false;
  return true;
}

// f -> V diag(scalars) V^T f. All-ones scalar vectors short-circuit to the
// exact identity (the detection is bit-exact, see README notes).
inline cvec apply_scalars(const SpectralDecomposition& dec, const cvec& scalars,
                          const cvec& f) {
  if (is_exact_identity(scalars)) return f;
  int N = dec.N;
  auto V = dec.Vm();
  Eigen::VectorXd fr(N), fi(N);
  for (int i = 0; i < N; i++) { fr[i] = f[i].real(); fi[i] = f[i].imag(); }
  Eigen::VectorXd cr = V.transpose() * fr;
  Eigen::VectorXd ci = V.transpose() * fi;
  Eigen::VectorXd dr(N), di(N);
  for (int i = 0; i < N; i++) {
    std::complex<double> c(cr[i], ci[i]);
    c *= scalars[i];
    dr[i] = c.real();
    di[i] = c.imag();
  }
  Eigen::VectorXd outr = V * dr, outi = V * di;
  cvec out(N);
  for (int i = 0; i < N; i++) out[i] = {outr[i], outi[i]};
  return out;
}

inline cvec apply_multiplier(const SpectralDecomposition& dec, const Multiplier& m,
                             const cvec& f) {
  return apply_scalars(dec, multiplier_values(dec, m), f);
}

// K_m = m(sqrt(L)) delta_e; the operator is then right-convolution by K_m.
inline cvec kernel_of_scalars(const SpectralDecomposition& dec, const cvec& scalars) {
  int N = dec.N;
  auto V = dec.Vm();
  int e = dec.g->identity;
  Eigen::VectorXd dr(N), di(N);
  for (int i = 0; i < N; i++) {
    std::complex<double> c = scalars[i] * dec.V[static_cast<size_t>(i) * N + e];
    dr[i] = c.real();
    di[i] = c.imag();
  }
  Eigen::VectorXd outr = V * dr, outi = V * di;
  cvec K(N);
  for (int i = 0; i < N; i++) K[i] = {outr[i], outi[i]};
  return K;
}

inline cvec kernel_of(const SpectralDecomposition& dec, const Multiplier& m) {
  return kernel_of_scalars(dec, multiplier_values(dec, m));
}

// (f * K)(x) = sum_y f(y) K(y^{-1} x)
inline cvec convolve(const Group& g, const cvec& f, const cvec& K) {
  cvec out(g.size, 0.0);
  for (int y = 0; y < g.size; y++) {
    if (f[y] == std::complex<double>(0.0, 0.0)) continue;
    const std::uint16_t* row = &g.mul_table[static_cast<size_t>(g.inv(y)) * g.size];
    std::complex<double> fy = f[y];
    for (int x = 0; x < g.size; x++) out[x] += fy * K[row[x]];
  }
  return out;
}

namespace detail {
struct Kahan {
  double sum = 0.0, c = 0.0;
  void add(double v) {
    double y = v - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};
}  // namespace detail

struct PlancherelResult {
  double kernel_side = 0.0;    // sum_x |K_m(x)|^2
  double spectral_side = 0.0;  // (1/|G|) sum_i |m(sigma_i)|^2
  double rel_err = 0.0;
};

// Two independent paths: the kernel side goes through the eigenvector sandwich,
// the spectral side touches only the eigenvalues.
inline PlancherelResult plancherel_check(const SpectralDecomposition& dec,
                                         const Multiplier& m) {
  cvec scalars = multiplier_values(dec, m);
  cvec K = kernel_of_scalars(dec, scalars);
  detail::Kahan lhs, rhs;
  for (const auto& v : K) lhs.add(std::norm(v));
  for (const auto& v : scalars) rhs.add(std::norm(v));
  PlancherelResult r;
  r.kernel_side = lhs.sum;
  r.spectral_side = rhs.sum / dec.N;
  double denom = std::max(std::abs(r.spectral_side), 1e-300);
  r.rel_err = std::abs(r.kernel_side - r.spectral_side) / denom;
  return r;
}

// max_i |m(sigma_i)|: the exact L^2 -> L^2 norm of m(sqrt(L)).
inline double spectral_sup(const SpectralDecomposition& dec, const cvec& scalars) {
  double s = 0;
  for (const auto& v : scalars) s = std::max(s, std::abs(v));
  return s;
}

struct DecompositionChecks {
  double reconstruction_err = 0.0;  // max |V diag(lambda) V^T - L|
  double orthonormality_err = 0.0;  // max |V^T V - I|
  bool sampled = false;             // true when N > 1024 (64 probe columns)
  int lambda0_multiplicity = 0;
};

inline DecompositionChecks check_decomposition(const SpectralDecomposition& dec) {
  DecompositionChecks out;
  const Group& g = *dec.g;
  int N = dec.N;
  auto V = dec.Vm();
  Eigen::Map<const Eigen::VectorXd> lam(dec.lambda.data(), N);
  if (N <= 1024) {
    dvec A = assemble_sublaplacian(g, dec.s0);
    Eigen::Map<const Eigen::MatrixXd> Am(A.data(), N, N);
    Eigen::MatrixXd R = V * lam.asDiagonal() * V.transpose() - Am;
    out.reconstruction_err = R.cwiseAbs().maxCoeff();
    Eigen::MatrixXd O = V.transpose() * V - Eigen::MatrixXd::Identity(N, N);
    out.orthonormality_err = O.cwiseAbs().maxCoeff();
  } else {
    out.sampled = true;
    int samples = 64;
    for (int k = 0; k < samples; k++) {
      int j = static_cast<int>(static_cast<long long>(k) * N / samples);
      // reconstruction on column j
      Eigen::VectorXd vj = V.row(j).transpose();
      Eigen::VectorXd col = V * lam.cwiseProduct(vj).matrix();
      cvec ej(N, 0.0);
      ej[j] = 1.0;
      cvec Lj = laplacian_apply(g, dec.s0, ej);
      for (int i = 0; i < N; i++)
        out.reconstruction_err =
            std::max(out.reconstruction_err, std::abs(col[i] - Lj[i].real()));
      Eigen::VectorXd o = V.transpose() * V.col(j);
      o[j] -= 1.0;
      out.orthonormality_err = std::max(out.orthonormality_err, o.cwiseAbs().maxCoeff());
    }
  }
  double lmax = std::max(dec.lambda.back(), 1.0);
  for (double l : dec.lambda)
    if (l <= 1e-9 * lmax) out.lambda0_multiplicity++;
  return out;
}

// ---- heat kernel -----------------------------------------------------------

// p_t = kernel of e^{-t sigma^2} = e^{-tL} delta_e (real by construction).
inline dvec heat_kernel(const SpectralDecomposition& dec, double t) {
  cvec K = kernel_of(dec, [t](double s) {
    return std::complex<double>(std::exp(-t * s * s), 0.0);
  });
  dvec p(dec.N);
  double scale = std::abs(K[dec.g->identity]);
  for (int i = 0; i < dec.N; i++) {
    if (std::abs(K[i].imag()) > 1e-12 * std::max(scale, 1.0))
      throw std::runtime_error("heat_kernel: unexpectedly complex kernel");
    p[i] = K[i].real();
  }
  return p;
}

struct HeatRow {
  int x = 0;
  double norm_x = 0.0;
  double p = 0.0;
};

struct HeatReport {
  double t = 0.0;
  double mass_err = 0.0;       // |sum p - 1|
  double min_p = 0.0;          // most negative value (roundoff floor)
  bool peak_at_identity = false;
  LineFit gaussian_fit;        // log p against |x|^2/t, |x| <= diam/4
  std::vector<HeatRow> rows;   // sorted by |x|, then index
};

inline HeatReport heat_report(const SpectralDecomposition& dec, double t) {
  const Group& g = *dec.g;
  HeatReport rep;
  rep.t = t;
  dvec p = heat_kernel(dec, t);
  detail::Kahan mass;
  double mn = p[0], mx = p[0];
  int argmax = 0;
  for (int i = 0; i < g.size; i++) {
    mass.add(p[i]);
    mn = std::min(mn, p[i]);
    if (p[i] > mx) { mx = p[i]; argmax = i; }
  }
  rep.mass_err = std::abs(mass.sum - 1.0);
  rep.min_p = mn;
  rep.peak_at_identity = (argmax == g.identity);
  rep.rows.resize(g.size);
  for (int i = 0; i < g.size; i++) rep.rows[i] = {i, g.norm(i), p[i]};
  std::stable_sort(rep.rows.begin(), rep.rows.end(),
                   [](const HeatRow& a, const HeatRow& b) { return a.norm_x < b.norm_x; });
  std::vector<double> u, y;
  double rcut = g.diameter / 4.0;
  for (const auto& row : rep.rows)
    if (row.norm_x <= rcut && row.p > 1e-290) {
      u.push_back(row.norm_x * row.norm_x / t);
      y.push_back(std::log(row.p));
    }
  if (u.size() >= 3) rep.gaussian_fit = fit_line(u, y);
  return rep;
}

// ---- kernel weight checks --------------------------------------------------

struct KernelNormCheck {
  double ratio = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
};

// sum_x |K_m(x)|^2 (1+|x|^s)^2 against ||m||_{L^2_s}^2 for m(sigma) = h(sigma/R).
// Convention: ||m|| is the Sobolev norm of the dilated profile on a window
// bracketing its support [R/4, R]. m identically zero on the spectrum gives 0.
inline KernelNormCheck weighted_kernel_norm_check(const SpectralDecomposition& dec,
                                                  const ScalarFn& h, int s, double R) {
  Multiplier m = [&h, R](double sg) { return h(sg / R); };
  cvec scalars = multiplier_values(dec, m);
  bool live = false;
  for (const auto& v : scalars)
    if (std::abs(v) > 0) { live = true; break; }
  KernelNormCheck out;
  double den2 = 0.0;
  {
    ScalarFn mfull = [&h, R](double sg) { return h(sg / R); };
    double d = sobolev_norm(mfull, R / 8.0, 9.0 * R / 8.0, static_cast<double>(s));
    den2 = d * d;
  }
  if (!live || den2 == 0.0) return out;  // zero-multiplier convention
  cvec K = kernel_of_scalars(dec, scalars);
  detail::Kahan num;
  const Group& g = *dec.g;
  for (int x = 0; x < g.size; x++) {
    double w = 1.0 + std::pow(g.norm(x), s);
    num.add(std::norm(K[x]) * w * w);
  }
  out.numerator = num.sum;
  out.denominator = den2;
  out.ratio = num.sum / den2;
  return out;
}

// max_x |K_h(x)| (1+R|x|)^s, normalized by R^Q ||h||_{L^2_{s+kappa}} for a
// profile h supported in [1/4, 1] dilated to [R/4, R]. Errors out when the
// dilated band misses the spectrum entirely.
inline KernelNormCheck pointwise_kernel_bound_check(const SpectralDecomposition& dec,
                                                    const ScalarFn& h, int s, double R,
                                                    double kappa = 0.1) {
  Multiplier m = [&h, R](double sg) { return h(sg / R); };
  cvec scalars = multiplier_values(dec, m);
  bool live = false;
  for (const auto& v : scalars)
    if (std::abs(v) > 0) { live = true; break; }
  if (!live)
    throw std::domain_error(
        "pointwise_kernel_bound_check: dilated profile has empty spectral support "
        "(no eigenvalue in [R/4, R] band), R=" + std::to_string(R));
  cvec K = kernel_of_scalars(dec, scalars);
  const Group& g = *dec.g;
  double peak = 0.0;
  for (int x = 0; x < g.size; x++)
    peak = std::max(peak, std::abs(K[x]) * std::pow(1.0 + R * g.norm(x), s));
  double hn = sobolev_norm(h, 1.0 / 8.0, 9.0 / 8.0, s + kappa);
  KernelNormCheck out;
  out.numerator = peak;
  out.denominator = std::pow(R, g.Q) * hn;
  out.ratio = peak / out.denominator;
  return out;
}

}  // namespace stratsp
