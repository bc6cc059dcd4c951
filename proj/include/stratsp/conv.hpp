// Convolution operators f -> f * k on a finite group model, their exact
// operator norms on the lattice points p,q in {1,2,inf}, interpolation upper
// bounds and randomized lower bounds for other pairs, and the smooth spatial
// decomposition of a band-limited kernel into annular pieces.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "stratsp/bump.hpp"
#include "stratsp/fit.hpp"
#include "stratsp/group.hpp"
#include "stratsp/multiplier.hpp"
#include "stratsp/rng.hpp"
#include "stratsp/spectral.hpp"
#include "stratsp/types.hpp"

namespace stratsp {

inline double lp_norm(const cvec& f, double p) {
  if (p == std::numeric_limits<double>::infinity()) return norm_sup(f);
  double s = 0.0;
  for (auto& v : f) s += std::pow(std::abs(v), p);
  return std::pow(s, 1.0 / p);
}

struct ConvolutionOperator {
  const Group* g = nullptr;
  cvec kernel;

  cvec apply(const cvec& f) const { return convolve(*g, f, kernel); }

  // Adjoint on l^2: kernel x -> conj(k(x^{-1})).
  ConvolutionOperator adjoint() const {
    ConvolutionOperator a;
    a.g = g;
    a.kernel.resize(kernel.size());
    for (int x = 0; x < g->size; x++) a.kernel[x] = std::conj(kernel[g->inv(x)]);
    return a;
  }

  double kernel_l1() const {
    double s = 0.0;
    for (auto& v : kernel) s += std::abs(v);
    return s;
  }
  double kernel_l2() const { return norm2(kernel); }
  double kernel_sup() const { return norm_sup(kernel); }
};

// Largest singular value of T via power iteration on T*T. Optional warm start;
// otherwise a seeded random start. Converged when the Rayleigh quotient is
// stationary to rel_tol between sweeps.
struct PowerIterationResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  cvec vector;
};

inline PowerIterationResult opnorm22_power(const ConvolutionOperator& T, Rng& rng,
                                           int max_iter = 500, double rel_tol = 1e-9,
                                           const cvec* warm_start = nullptr) {
  int n = T.g->size;
  ConvolutionOperator Ts = T.adjoint();
  cvec v(n);
  if (warm_start) {
    v = *warm_start;
  } else {
    for (auto& z : v) z = {rng.symmetric(), rng.symmetric()};
  }
  double nv = norm2(v);
  if (nv == 0.0) throw std::invalid_argument("power iteration: zero start vector");
  for (auto& z : v) z /= nv;

  PowerIterationResult res;
  double prev = -1.0;
  for (int it = 0; it < max_iter; it++) {
    cvec w = Ts.apply(T.apply(v));
    double rq = std::real(inner(w, v));  // = ||T v||^2 for unit v
    double nw = norm2(w);
    res.iterations = it + 1;
    if (nw == 0.0) {
      res.value = 0.0;
      res.converged = true;
      res.vector = v;
      return res;
    }
    for (auto& z : w) z /= nw;
    v = std::move(w);
    double cur = std::sqrt(std::max(rq, 0.0));
    if (prev >= 0.0 && std::abs(cur - prev) <= rel_tol * std::max(cur, 1e-300)) {
      res.value = cur;
      res.converged = true;
      res.vector = v;
      return res;
    }
    prev = cur;
  }
  res.value = prev < 0.0 ? 0.0 : prev;
  res.vector = v;
  return res;
}

// Exact operator norm for the five closed-form pairs; 2->2 by power iteration.
inline double opnorm_exact(const ConvolutionOperator& T, double p, double q, Rng& rng) {
  double inf = std::numeric_limits<double>::infinity();
  if (p == 1.0 && q == 1.0) return T.kernel_l1();
  if (p == inf && q == inf) return T.kernel_l1();
  if (p == 1.0 && q == 2.0) return T.kernel_l2();
  if (p == 2.0 && q == inf) return T.kernel_l2();
  if (p == 1.0 && q == inf) return T.kernel_sup();
  if (p == 2.0 && q == 2.0) return opnorm22_power(T, rng).value;
  throw std::invalid_argument("opnorm_exact: unsupported (p,q) pair");
}

// Riesz-Thorin upper bound for 1 <= p <= q <= inf, interpolating between the
// closed-form vertex pairs.
inline double opnorm_upper(const ConvolutionOperator& T, double p, double q) {
  double inf = std::numeric_limits<double>::infinity();
  if (!(p >= 1.0) || !(q >= p)) throw std::invalid_argument("opnorm_upper: need 1 <= p <= q");
  double l1 = T.kernel_l1(), l2 = T.kernel_l2(), ls = T.kernel_sup();
  double ip = p == inf ? 0.0 : 1.0 / p;
  double iq = q == inf ? 0.0 : 1.0 / q;
  // Vertices of the Riesz-Thorin diagram in (1/p, 1/q): (1,1) and (0,0) carry
  // ||k||_1, (1,0) carries ||k||_inf, (1,1/2) and (1/2,0) carry ||k||_2.
  // The segment from (ip,iq) toward the diagonal hits (1,1/2)-(1/2,0) when
  // ip - iq >= 1/2; otherwise interpolate straight to the diagonal bound.
  double gap = ip - iq;
  if (gap <= 0.0) return l1;
  if (gap >= 1.0) return ls;
  if (gap <= 0.5) {
    double t = 2.0 * gap;  // 0 at diagonal, 1 at the l2 line
    return std::pow(l1, 1.0 - t) * std::pow(l2, t);
  }
  double t = 2.0 * (gap - 0.5);
  return std::pow(l2, 1.0 - t) * std::pow(ls, t);
}

// Randomized lower bound: best ratio ||Tf||_q / ||f||_p over point masses,
// the constant vector, and random trials.
inline double opnorm_lower(const ConvolutionOperator& T, double p, double q, Rng& rng,
                           int trials = 200) {
  int n = T.g->size;
  double best = 0.0;
  auto probe = [&](const cvec& f) {
    double np = lp_norm(f, p);
    if (np == 0.0) return;
    best = std::max(best, lp_norm(T.apply(f), q) / np);
  };
  cvec f(n, {0.0, 0.0});
  f[T.g->identity] = 1.0;
  probe(f);
  std::fill(f.begin(), f.end(), std::complex<double>{1.0, 0.0});
  probe(f);
  for (int t = 0; t < trials; t++) {
    for (auto& z : f) z = {rng.symmetric(), rng.symmetric()};
    probe(f);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Spatial pieces of a band kernel.
//
// For a band-j kernel K_j the annular mask at level l is
//   w_{j,l}(x) = phi(nu^{-l + j(1-theta)} |x|),  x != e,
// so sum_l w_{j,l}(x) = 1 for every x != e, and the kernel value at the
// identity is assigned to the smallest nonempty level.
// ---------------------------------------------------------------------------

inline double spatial_mask(const MultiplierSpec& ms, const BumpProfile& b, int j, int l,
                           double nrm) {
  if (nrm <= 0.0) return 0.0;
  return b.phi(std::pow(b.nu, -l + j * (1.0 - ms.theta)) * nrm);
}

// Levels l whose mask is nonzero at some nonidentity point of the model.
inline std::vector<int> spatial_levels(const Group& g, const MultiplierSpec& ms,
                                       const BumpProfile& b, int j) {
  std::vector<int> out;
  double c0 = j * (1.0 - ms.theta);
  for (double v : g.ball_radii()) {
    if (v <= 0.0) continue;
    double c = c0 + std::log(v) / std::log(b.nu);
    for (int l = (int)std::floor(c - 1.0); l <= (int)std::ceil(c + 1.0); l++) {
      if (spatial_mask(ms, b, j, l, v) > 0.0) out.push_back(l);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct SpatialPiece {
  ConvolutionOperator op;
  int level = 0;
  bool carries_diagonal = false;
  bool empty = true;
};

// Piece of band_kernel at level l. diag_level marks the level that receives
// the kernel value at the identity.
inline SpatialPiece spatial_piece(const Group& g, const MultiplierSpec& ms, const BumpProfile& b,
                                  int j, int l, int diag_level, const cvec& band_kernel) {
  SpatialPiece p;
  p.level = l;
  p.op.g = &g;
  p.op.kernel.assign(g.size, {0.0, 0.0});
  for (int x = 0; x < g.size; x++) {
    if (x == g.identity) continue;
    double w = spatial_mask(ms, b, j, l, g.norm(x));
    if (w != 0.0) {
      p.op.kernel[x] = w * band_kernel[x];
      p.empty = false;
    }
  }
  if (l == diag_level) {
    p.op.kernel[g.identity] = band_kernel[g.identity];
    p.carries_diagonal = true;
    if (band_kernel[g.identity] != std::complex<double>{0.0, 0.0}) p.empty = false;
  }
  return p;
}

struct BandPieces {
  int j = 0;
  std::vector<int> levels;
  int diag_level = 0;
  std::vector<SpatialPiece> pieces;

  // Exact resummation defect against the band kernel, in sup norm.
  double resum_defect(const cvec& band_kernel) const {
    if (pieces.empty()) return 0.0;
    const Group& g = *pieces.front().op.g;
    double worst = 0.0;
    for (int x = 0; x < g.size; x++) {
      std::complex<double> s{0.0, 0.0};
      for (auto& p : pieces) s += p.op.kernel[x];
      worst = std::max(worst, std::abs(s - band_kernel[x]));
    }
    return worst;
  }
};

inline BandPieces decompose_band_kernel(const Group& g, const MultiplierSpec& ms,
                                        const BumpProfile& b, int j, const cvec& band_kernel) {
  BandPieces bp;
  bp.j = j;
  bp.levels = spatial_levels(g, ms, b, j);
  if (bp.levels.empty()) {
    // Every point is the identity only when |G| = 1; otherwise positive norms
    // always meet some level. Keep a single diagonal piece as a fallback.
    bp.levels.push_back(0);
  }
  bp.diag_level = bp.levels.front();
  for (int l : bp.levels) bp.pieces.push_back(spatial_piece(g, ms, b, j, l, bp.diag_level, band_kernel));
  return bp;
}

// ---------------------------------------------------------------------------
// Band decay report: measured norms of the band operators T_j against the
// modeled rates. Usable bands are those whose window captures an eigenvalue
// with mask weight at least band_weight_floor, so the band operator is not
// artificially small merely because the spectrum misses the band.
// ---------------------------------------------------------------------------

struct BandNormRow {
  int j = 0;
  double mask_peak = 0.0;  // max_i phi(nu^{-j} sigma_i)
  bool usable = false;
  double spectral_sup = 0.0;   // max_i |m_j(sigma_i)|; equals the 2->2 norm
  double power_value = 0.0;    // 2->2 norm recomputed through convolution
  int power_iterations = 0;
  double l1_norm = 0.0;        // ||K_j||_1 = 1->1 = inf->inf norm
  double l2_kernel = 0.0;      // ||K_j||_2 = 1->2 norm
  double sup_kernel = 0.0;     // ||K_j||_inf = 1->inf norm
  double small_block_l1 = 0.0; // ||sum_{l <= j eps} pieces||_1
  double large_piece_l1_worst = 0.0;
};

struct DecayReport {
  std::vector<BandNormRow> rows;
  int usable = 0;
  LineFit l2_fit;   // log_nu ||T_j||_{2->2} vs j over usable bands
  double l2_slope_expected = 0.0;
  LineFit l1_fit;   // log_nu ||K_j||_1 vs j
  double l1_slope_expected = 0.0;
  LineFit sup_fit;  // log_nu ||K_j||_inf vs j
  double sup_slope_expected = 0.0;
};

inline DecayReport piece_decay_report(const SpectralDecomposition& dec, const MultiplierSpec& ms,
                                      const BumpProfile& b, Rng& rng,
                                      double band_weight_floor = 0.9, bool with_power = false,
                                      int min_usable = 3) {
  ms.validate();
  const Group& g = *dec.g;
  double smin = std::numeric_limits<double>::infinity(), smax = 0.0;
  for (double s : dec.sq) {
    if (s > 0.0) smin = std::min(smin, s);
    smax = std::max(smax, s);
  }
  if (!(smax > 0.0)) throw std::domain_error("decay report: spectrum has no positive point");

  DecayReport rep;
  rep.l2_slope_expected = -ms.theta * ms.beta / 2.0;
  double Q = (double)g.Q;
  rep.l1_slope_expected = -ms.theta * ms.beta / 2.0 + ms.theta * Q / 2.0 + ms.eps_tilde;
  rep.sup_slope_expected = Q - ms.theta * Q / 2.0;

  std::vector<double> xs, y2, y1, ys;
  for (int j : deep_band_range(ms, smin, smax)) {
    BandNormRow row;
    row.j = j;
    for (double s : dec.sq) row.mask_peak = std::max(row.mask_peak, b.phi_at_scale(j, s));
    row.usable = row.mask_peak >= band_weight_floor;

    auto mj = make_piece(ms, b, j);
    auto scal = multiplier_values(dec, mj);
    for (auto& z : scal) row.spectral_sup = std::max(row.spectral_sup, std::abs(z));
    cvec K = kernel_of_scalars(dec, scal);
    ConvolutionOperator T{&g, K};
    row.l1_norm = T.kernel_l1();
    row.l2_kernel = T.kernel_l2();
    row.sup_kernel = T.kernel_sup();

    if (with_power && row.usable) {
      // Warm start at the eigenvector of the extremal scalar: the Rayleigh
      // quotient is stationary there, so agreement between the two paths
      // cross-checks the kernel assembly against the scalar calculus.
      int n = dec.N;
      int ix = 0;
      double bestv = -1.0;
      for (int i = 0; i < n; i++) {
        double a = std::abs(scal[i]);
        if (a > bestv) {
          bestv = a;
          ix = i;
        }
      }
      cvec warm(n);
      for (int x = 0; x < n; x++) warm[x] = dec.V[(size_t)ix * n + x];
      auto pr = opnorm22_power(T, rng, 500, 1e-10, &warm);
      row.power_value = pr.value;
      row.power_iterations = pr.iterations;
    }

    BandPieces bp = decompose_band_kernel(g, ms, b, j, K);
    double cutoff = j * ms.eps;
    cvec small(g.size, {0.0, 0.0});
    for (auto& p : bp.pieces) {
      if ((double)p.level <= cutoff) {
        for (int x = 0; x < g.size; x++) small[x] += p.op.kernel[x];
      } else {
        double l1 = 0.0;
        for (auto& v : p.op.kernel) l1 += std::abs(v);
        row.large_piece_l1_worst = std::max(row.large_piece_l1_worst, l1);
      }
    }
    for (auto& v : small) row.small_block_l1 += std::abs(v);

    if (row.usable && row.spectral_sup > 0.0) {
      rep.usable++;
      xs.push_back((double)j);
      double lognu = std::log(b.nu);
      y2.push_back(std::log(row.spectral_sup) / lognu);
      if (row.l1_norm > 0.0) y1.push_back(std::log(row.l1_norm) / lognu);
      if (row.sup_kernel > 0.0) ys.push_back(std::log(row.sup_kernel) / lognu);
    }
    rep.rows.push_back(std::move(row));
  }

  if (rep.usable < min_usable)
    throw std::domain_error(
        "decay report: fewer than the required number of usable bands; widen the spectrum "
        "(larger s0 or model) or reduce nu");
  rep.l2_fit = fit_line(xs, y2);
  if (y1.size() == xs.size()) rep.l1_fit = fit_line(xs, y1);
  if (ys.size() == xs.size()) rep.sup_fit = fit_line(xs, ys);
  return rep;
}

}  // namespace stratsp
