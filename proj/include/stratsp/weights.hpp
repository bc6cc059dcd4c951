// Muckenhoupt machinery on a finite group model: exhaustive-ball A_p and
// reverse Holder characteristics with per-weight caching, power weights,
// weighted norms and operator-norm brackets, the bilinear sparse-form bound
// with its literal characteristic exponent, exact rational thresholds, and
// the quantitative weighted sweep.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stratsp/conv.hpp"
#include "stratsp/group.hpp"
#include "stratsp/multiplier.hpp"
#include "stratsp/rational.hpp"
#include "stratsp/rng.hpp"
#include "stratsp/sparse.hpp"
#include "stratsp/spectral.hpp"
#include "stratsp/types.hpp"

namespace stratsp {

// Positive weight with cached ball-supremum characteristics. The ball family
// is exhaustive: every center, every distinct norm value as radius. By
// translation invariance of the metric, B(z, r) = { z*h : |h| <= r }, so one
// norm-sorted element list serves every center via prefix sweeps.
class Weight {
 public:
  Weight(const Group& g, dvec w) : g_(&g), w_(std::move(w)) {
    if ((int)w_.size() != g.size) throw std::invalid_argument("weight: size mismatch");
    for (double v : w_)
      if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("weight: values must be positive and finite");
    order_.resize(g.size);
    for (int i = 0; i < g.size; i++) order_[i] = i;
    std::sort(order_.begin(), order_.end(), [&](int a, int b) {
      double na = g.norm(a), nb = g.norm(b);
      return na != nb ? na < nb : a < b;
    });
    for (int i = 0; i < g.size; i++) {
      if (i + 1 == g.size || g.norm(order_[i + 1]) != g.norm(order_[i]))
        boundaries_.push_back(i + 1);  // prefix length of each closed ball
    }
  }

  const Group& group() const { return *g_; }
  const dvec& values() const { return w_; }
  double operator()(int x) const { return w_[x]; }

  // [w]_{A_p} = sup_B <w>_B <w^{1-p'}>_B^{p-1}, exact over the ball family.
  double ap(double p) const {
    if (!(p > 1.0)) throw std::invalid_argument("ap characteristic: need p > 1");
    return cached('a', p, [&] {
      dvec v(w_.size());
      for (size_t i = 0; i < w_.size(); i++) v[i] = std::pow(w_[i], -1.0 / (p - 1.0));
      double best = 0.0;
      for (int z = 0; z < g_->size; z++) {
        double sw = 0.0, sv = 0.0;
        size_t b = 0;
        for (int i = 0; i < g_->size; i++) {
          int x = g_->mul(z, order_[i]);
          sw += w_[x];
          sv += v[x];
          if (b < boundaries_.size() && i + 1 == boundaries_[b]) {
            double cnt = (double)(i + 1);
            best = std::max(best, (sw / cnt) * std::pow(sv / cnt, p - 1.0));
            b++;
          }
        }
      }
      return best;
    });
  }

  // [w]_{RH_q} = sup_B <w>_{q,B} / <w>_{1,B}, exact over the ball family.
  double rh(double q) const {
    if (!(q > 1.0)) throw std::invalid_argument("rh characteristic: need q > 1");
    return cached('r', q, [&] {
      dvec v(w_.size());
      for (size_t i = 0; i < w_.size(); i++) v[i] = std::pow(w_[i], q);
      double best = 0.0;
      for (int z = 0; z < g_->size; z++) {
        double sw = 0.0, sv = 0.0;
        size_t b = 0;
        for (int i = 0; i < g_->size; i++) {
          int x = g_->mul(z, order_[i]);
          sw += w_[x];
          sv += v[x];
          if (b < boundaries_.size() && i + 1 == boundaries_[b]) {
            double cnt = (double)(i + 1);
            best = std::max(best, std::pow(sv / cnt, 1.0 / q) / (sw / cnt));
            b++;
          }
        }
      }
      return best;
    });
  }

 private:
  template <class F>
  double cached(char kind, double x, F&& compute) const {
    auto key = std::make_pair(kind, x);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    double v = compute();
    cache_[key] = v;
    return v;
  }

  const Group* g_;
  dvec w_;
  std::vector<int> order_;
  std::vector<int> boundaries_;
  mutable std::map<std::pair<char, double>, double> cache_;
};

// w(x) = max(|x|, h0)^a; the floor at h0 keeps the weight positive at the
// identity.
inline Weight power_weight(const Group& g, double a) {
  dvec w(g.size);
  for (int x = 0; x < g.size; x++) w[x] = std::pow(std::max(g.norm(x), g.h0), a);
  return Weight(g, std::move(w));
}

inline double weighted_norm(const cvec& f, double p, const dvec& w) {
  if (p == std::numeric_limits<double>::infinity()) return norm_sup(f);
  if (!(p >= 1.0)) throw std::invalid_argument("weighted norm: need p >= 1");
  double s = 0.0;
  for (size_t i = 0; i < f.size(); i++) s += std::pow(std::abs(f[i]), p) * w[i];
  return std::pow(s, 1.0 / p);
}

// ---------------------------------------------------------------------------
// Weighted operator norms of a convolution operator
// ---------------------------------------------------------------------------

// ||T||_{L^1(w)->L^1(w)} = max_y (1/w(y)) sum_x |K(y^{-1} x)| w(x): a delta at
// the maximizing y attains it.
inline double weighted_opnorm_l1(const ConvolutionOperator& T, const dvec& w) {
  const Group& g = *T.g;
  double best = 0.0;
  for (int y = 0; y < g.size; y++) {
    int yi = g.inv(y);
    double s = 0.0;
    for (int x = 0; x < g.size; x++) s += std::abs(T.kernel[g.mul(yi, x)]) * w[x];
    best = std::max(best, s / w[y]);
  }
  return best;
}

// ||T||_{L^2(w)->L^2(w)} = spectral norm of W^{1/2} T W^{-1/2}, by power
// iteration on the conjugated operator.
inline double weighted_opnorm_l2(const SpectralDecomposition& dec, const Multiplier& m,
                                 const dvec& w, Rng& rng, int max_iter = 2000,
                                 double rel_tol = 1e-11) {
  int n = dec.N;
  auto scal = multiplier_values(dec, m);
  auto scal_conj = scal;
  for (auto& z : scal_conj) z = std::conj(z);
  dvec sq(n), isq(n);
  for (int i = 0; i < n; i++) {
    sq[i] = std::sqrt(w[i]);
    isq[i] = 1.0 / sq[i];
  }
  auto applyA = [&](const cvec& x) {
    cvec y(n);
    for (int i = 0; i < n; i++) y[i] = x[i] * isq[i];
    y = apply_scalars(dec, scal, y);
    for (int i = 0; i < n; i++) y[i] *= sq[i];
    return y;
  };
  auto applyAstar = [&](const cvec& x) {
    cvec y(n);
    for (int i = 0; i < n; i++) y[i] = x[i] * sq[i];
    y = apply_scalars(dec, scal_conj, y);
    for (int i = 0; i < n; i++) y[i] *= isq[i];
    return y;
  };
  cvec v(n);
  for (auto& z : v) z = {rng.symmetric(), rng.symmetric()};
  double nv = norm2(v);
  for (auto& z : v) z /= nv;
  double prev = -1.0;
  for (int it = 0; it < max_iter; it++) {
    cvec av = applyA(v);
    cvec m2 = applyAstar(av);
    double cur = norm2(av);
    double nm = norm2(m2);
    if (nm == 0.0) return 0.0;
    for (auto& z : m2) z /= nm;
    v = std::move(m2);
    if (prev >= 0.0 && std::abs(cur - prev) <= rel_tol * std::max(cur, 1e-300)) return cur;
    prev = cur;
  }
  return prev < 0.0 ? 0.0 : prev;
}

// Randomized lower bound for ||T||_{L^p(w)} from deltas, constants, ball
// indicators, weight-adapted bumps, and random ball-supported data.
inline double weighted_opnorm_lower(const ConvolutionOperator& T, double p, const dvec& w,
                                    Rng& rng, int trials = 200) {
  const Group& g = *T.g;
  double best = 0.0;
  auto probe = [&](const cvec& f) {
    double nf = weighted_norm(f, p, w);
    if (nf == 0.0 || !std::isfinite(nf)) return;
    best = std::max(best, weighted_norm(T.apply(f), p, w) / nf);
  };
  cvec f(g.size, {0.0, 0.0});
  int amax = 0, amin = 0;
  for (int x = 0; x < g.size; x++) {
    if (w[x] > w[amax]) amax = x;
    if (w[x] < w[amin]) amin = x;
  }
  for (int x : {g.identity, amax, amin}) {
    std::fill(f.begin(), f.end(), std::complex<double>{0.0, 0.0});
    f[x] = 1.0;
    probe(f);
  }
  std::fill(f.begin(), f.end(), std::complex<double>{1.0, 0.0});
  probe(f);
  for (size_t i = 0; i < f.size(); i++) f[i] = std::pow(w[i], -1.0 / p);
  probe(f);
  auto radii = g.ball_radii();
  for (size_t ri = 0; ri < radii.size(); ri += std::max<size_t>(1, radii.size() / 8)) {
    for (int x = 0; x < g.size; x++)
      f[x] = g.norm(x) <= radii[ri] ? std::complex<double>{1.0, 0.0} : std::complex<double>{0.0, 0.0};
    probe(f);
  }
  for (int t = 0; t < trials; t++) {
    f = detail::random_ball_function(g, rng);
    probe(f);
  }
  return best;
}

struct OpnormBracket {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  bool exact = false;  // lower == upper by construction
};

// Weighted operator norm bracket for the multiplier operator. p in {1, 2,
// inf} is exact; other p report a probe lower bound and the smaller of the
// endpoint interpolation and the characteristic-factor upper bound.
inline OpnormBracket weighted_opnorm(const SpectralDecomposition& dec, const Multiplier& m,
                                     double p, const Weight& w, Rng& rng, int trials = 200) {
  if (!(p >= 1.0)) throw std::invalid_argument("weighted_opnorm: need p >= 1");
  OpnormBracket out;
  ConvolutionOperator T{dec.g, kernel_of(dec, m)};
  double inf = std::numeric_limits<double>::infinity();
  if (p == 1.0) {
    out.lower = out.upper = weighted_opnorm_l1(T, w.values());
    out.exact = true;
    return out;
  }
  if (p == inf) {
    out.lower = out.upper = T.kernel_l1();
    out.exact = true;
    return out;
  }
  if (p == 2.0) {
    out.lower = out.upper = weighted_opnorm_l2(dec, m, w.values(), rng);
    out.exact = true;
    return out;
  }
  out.lower = weighted_opnorm_lower(T, p, w.values(), rng, trials);
  double n1 = weighted_opnorm_l1(T, w.values());
  double n2 = weighted_opnorm_l2(dec, m, w.values(), rng);
  double ninf = T.kernel_l1();
  double interp;
  if (p < 2.0) {
    double t = 2.0 * (1.0 - 1.0 / p);
    interp = std::pow(n1, 1.0 - t) * std::pow(n2, t);
  } else {
    double t = 1.0 - 2.0 / p;
    interp = std::pow(n2, 1.0 - t) * std::pow(ninf, t);
  }
  double char_factor = std::pow(w.ap(p), std::max(1.0, 1.0 / (p - 1.0)));
  out.upper = std::min(interp, opnorm_upper(T, p, p) * char_factor);
  return out;
}

// ---------------------------------------------------------------------------
// Bilinear form bound with the literal characteristic exponent
// ---------------------------------------------------------------------------

inline double bfp_exponent(double r1, double r2, double p) {
  return std::max(1.0 / (p - r1), (r2 - 1.0) / (r2 - p));
}

struct BfpResult {
  double form = 0.0, rhs = 0.0, ratio = 0.0;
  double exponent = 0.0, ap_char = 0.0, rh_char = 0.0;
  bool degenerate = false;  // rhs vanished with a nonzero form (a bug signal)
};

inline BfpResult bfp_bound_check(const SparseFamily& S, const cvec& f, const cvec& g, double r1,
                                 double r2, double p, const Weight& w) {
  if (!(r1 < p) || !(p < r2)) throw std::invalid_argument("bfp: need r1 < p < r2");
  BfpResult res;
  res.exponent = bfp_exponent(r1, r2, p);
  res.ap_char = w.ap(p / r1);
  double rq = r2 / p;  // (r2/p)' is the reverse Holder index
  double rhq = rq / (rq - 1.0);
  res.rh_char = rhq > 1.0 ? w.rh(rhq) : 1.0;
  double pp = p / (p - 1.0);
  dvec dual(w.values().size());
  for (size_t i = 0; i < dual.size(); i++) dual[i] = std::pow(w.values()[i], 1.0 - pp);
  double r2p = r2 == 1.0 ? std::numeric_limits<double>::infinity() : r2 / (r2 - 1.0);
  res.form = sparse_form(S, f, g, r1, r2p);
  res.rhs = std::pow(res.ap_char * res.rh_char, res.exponent) * weighted_norm(f, p, w.values()) *
            weighted_norm(g, pp, dual);
  if (res.rhs > 0.0) {
    res.ratio = res.form / res.rhs;
  } else if (res.form > 0.0) {
    res.degenerate = true;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Exact rational thresholds
// ---------------------------------------------------------------------------

struct Thresholds {
  Rational p_thr;
  Rational s_thr;
  bool s_defined = false;
};

// p_beta = 2Q/beta; s_beta = 2Q/(Q - beta) for beta < Q.
inline Thresholds multiplier_thresholds(long long Q, const Rational& beta) {
  if (!(beta > Rational(0))) throw std::invalid_argument("thresholds: beta must be positive");
  Thresholds t;
  t.p_thr = Rational(2 * Q) / beta;
  Rational gap = Rational(Q) - beta;
  if (gap > Rational(0)) {
    t.s_thr = Rational(2 * Q) / gap;
    t.s_defined = true;
  }
  return t;
}

// p_k = Q/k; s_k = 2Q/(Q - 2k) for 2k < Q.
inline Thresholds riesz_thresholds(long long Q, const Rational& k) {
  if (!(k > Rational(0))) throw std::invalid_argument("thresholds: k must be positive");
  Thresholds t;
  t.p_thr = Rational(Q) / k;
  Rational gap = Rational(Q) - Rational(2) * k;
  if (gap > Rational(0)) {
    t.s_thr = Rational(2 * Q) / gap;
    t.s_defined = true;
  }
  return t;
}

// p_{alpha,beta} = Q alpha / beta; s_{alpha,beta} = 2 alpha Q / (alpha Q - 2 beta).
inline Thresholds dispersive_thresholds(long long Q, const Rational& alpha, const Rational& beta) {
  if (!(alpha > Rational(0)) || !(beta > Rational(0)))
    throw std::invalid_argument("thresholds: alpha and beta must be positive");
  Thresholds t;
  t.p_thr = Rational(Q) * alpha / beta;
  Rational gap = alpha * Rational(Q) - Rational(2) * beta;
  if (gap > Rational(0)) {
    t.s_thr = Rational(2) * alpha * Rational(Q) / gap;
    t.s_defined = true;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Quantitative sweep
// ---------------------------------------------------------------------------

struct QuantCell {
  double p = 0.0, a = 0.0;
  double r1 = 0.0, r2 = 0.0, exponent = 0.0;
  double ap_char = 1.0, rh_char = 1.0;
  double lower = 0.0, ceiling = 0.0;
  bool exact = false;
  bool pass = false;
};

struct QuantReport {
  std::string mode;
  Thresholds thr;
  double kernel_l1 = 0.0;
  std::vector<QuantCell> cells;
  bool all_pass = true;
};

// Sweeps (p, power-weight a) inside the weight class the theory prescribes
// for the mode, comparing the measured weighted-opnorm lower bound against
// the ceiling ||K||_1 * (characteristics)^{exponent}:
//   mode i   : beta = 2Q,        all p, w in A_p;
//   mode ii  : Q <= beta < 2Q,   p > p_beta, w in A_{p/p_beta};
//   mode iii : 0 < beta < Q,     2 < p < s_beta, w in A_{p/2} cap RH_{(s/p)'}
//              with s the midpoint of (p, s_beta).
inline QuantReport quantitative_suite(const SpectralDecomposition& dec, const MultiplierSpec& ms,
                                      const std::string& mode, std::uint64_t seed,
                                      int probe_trials = 120) {
  ms.validate();
  const Group& g = *dec.g;
  double Q = (double)g.Q;
  QuantReport rep;
  rep.mode = mode;

  if (mode == "i") {
    if (ms.beta != 2.0 * Q) throw std::invalid_argument("quantitative mode i: beta must equal 2Q");
  } else if (mode == "ii") {
    if (!(ms.beta >= Q) || !(ms.beta < 2.0 * Q))
      throw std::invalid_argument("quantitative mode ii: beta must lie in [Q, 2Q)");
  } else if (mode == "iii") {
    if (!(ms.beta > 0.0) || !(ms.beta < Q))
      throw std::invalid_argument("quantitative mode iii: beta must lie in (0, Q)");
  } else {
    throw std::invalid_argument("quantitative: mode must be i, ii, or iii");
  }

  long long beta_num = (long long)std::llround(ms.beta * 1000.0);
  rep.thr = multiplier_thresholds(g.Q, Rational(beta_num, 1000));

  auto m = make_oscillating(ms);
  ConvolutionOperator T{&g, kernel_of(dec, m)};
  rep.kernel_l1 = T.kernel_l1();

  double p_beta = 2.0 * Q / ms.beta;
  double s_beta = ms.beta < Q ? 2.0 * Q / (Q - ms.beta) : 0.0;

  std::vector<double> ps;
  double r1_class = 1.0;  // the A_{p/r1_class} membership index for the a-sweep
  if (mode == "i") {
    ps = {1.5, 2.0, 4.0};
    r1_class = 1.0;
  } else if (mode == "ii") {
    ps = {p_beta + 0.25, p_beta + 1.0, 2.0 * p_beta};
    if (p_beta < 2.0) ps.push_back(2.0);
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    r1_class = p_beta;
  } else {
    for (double t : {0.25, 0.5, 0.75}) ps.push_back(2.0 + t * (s_beta - 2.0));
    r1_class = 2.0;
  }

  Rng rng(seed, 11);
  for (double p : ps) {
    double a_hi = 0.5 * Q * (p / r1_class - 1.0);
    double a_lo = -0.5 * Q;
    for (double a : {a_lo, 0.0, a_hi}) {
      Weight w = power_weight(g, a);
      QuantCell cell;
      cell.p = p;
      cell.a = a;
      if (mode == "iii") {
        cell.r1 = 2.0;
        cell.r2 = 0.5 * (p + s_beta);
        cell.ap_char = w.ap(p / 2.0);
        double rq = cell.r2 / p;
        double rhq = rq / (rq - 1.0);
        cell.rh_char = rhq > 1.0 ? w.rh(rhq) : 1.0;
        cell.exponent = bfp_exponent(cell.r1, cell.r2, p);
      } else {
        cell.r1 = r1_class;
        cell.r2 = std::numeric_limits<double>::infinity();
        cell.ap_char = w.ap(p / cell.r1);
        cell.rh_char = 1.0;
        cell.exponent = std::max(1.0 / (p - cell.r1), 1.0);
      }
      cell.ceiling = rep.kernel_l1 * std::pow(cell.ap_char * cell.rh_char, cell.exponent);
      if (p == 2.0) {
        cell.lower = weighted_opnorm_l2(dec, m, w.values(), rng);
        cell.exact = true;
      } else {
        cell.lower = weighted_opnorm_lower(T, p, w.values(), rng, probe_trials);
      }
      cell.pass = cell.lower <= cell.ceiling * (1.0 + 1e-9);
      rep.all_pass = rep.all_pass && cell.pass;
      rep.cells.push_back(cell);
    }
  }
  return rep;
}

}  // namespace stratsp
