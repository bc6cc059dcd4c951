// Experiment runner: one function per suite, each consuming a validated
// Config and emitting a CSV plus a RunReport into the output directory.
// Identical (config, seed) runs produce byte-identical CSV bodies; wall-clock
// lives only in comment headers.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "stratsp/bump.hpp"
#include "stratsp/config.hpp"
#include "stratsp/conv.hpp"
#include "stratsp/dyadic.hpp"
#include "stratsp/group.hpp"
#include "stratsp/multiplier.hpp"
#include "stratsp/rational.hpp"
#include "stratsp/report.hpp"
#include "stratsp/riesz.hpp"
#include "stratsp/rng.hpp"
#include "stratsp/sparse.hpp"
#include "stratsp/spectral.hpp"
#include "stratsp/weights.hpp"

namespace stratsp {

inline Group model_from_config(const Config& cfg) {
  const std::string& kind = cfg.get_string("model.kind");
  int n = (int)cfg.get_int("model.n");
  if (kind == "torus") return make_torus((int)cfg.get_int("model.d"), n);
  return make_heisenberg(n);
}

inline MultiplierSpec multiplier_from_config(const Config& cfg) {
  MultiplierSpec ms;
  ms.theta = cfg.get_double("multiplier.theta");
  ms.beta = cfg.get_double("multiplier.beta");
  ms.eps = cfg.get_double("multiplier.eps");
  ms.eps_tilde = cfg.get_double("multiplier.eps_tilde");
  ms.nu = cfg.get_double("scales.nu");
  ms.validate();
  return ms;
}

namespace detail {

inline std::string out_path(const Config& cfg, const std::string& name) {
  return cfg.get_string("run.out") + "/" + name;
}

// Budget guard: marks the report partial once the configured wall-clock
// budget is exhausted so long suites can stop between phases.
struct Budget {
  const Stopwatch& sw;
  double limit;
  bool tripped = false;
  Budget(const Stopwatch& s, const Config& cfg)
      : sw(s), limit(cfg.get_double("run.budget_seconds")) {}
  bool exceeded(RunReport& rep) {
    if (!tripped && sw.seconds() > limit) {
      tripped = true;
      rep.partial = true;
      rep.flag("budget_exceeded_seconds", sw.seconds());
    }
    return tripped;
  }
};

inline std::pair<double, double> positive_spectrum_range(const SpectralDecomposition& dec) {
  double smin = std::numeric_limits<double>::infinity(), smax = 0.0;
  for (double s : dec.sq) {
    if (s > 0.0) smin = std::min(smin, s);
    smax = std::max(smax, s);
  }
  if (!(smax > 0.0)) throw std::domain_error("suite: spectrum has no positive point");
  return {smin, smax};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// group: model sanity and geometry.
// ---------------------------------------------------------------------------
inline RunReport suite_group(const Config& cfg) {
  Stopwatch sw;
  RunReport rep;
  rep.suite = "group";
  rep.config = cfg;
  rep.seed = cfg.get_seed();
  Group g = model_from_config(cfg);

  rep.info("size", g.size);
  rep.info("homogeneous_dimension", g.Q);
  rep.add("identity_norm_zero", g.norm(g.identity), 0.0, g.norm(g.identity) == 0.0);

  int bad_inv = 0, bad_assoc = 0;
  for (int a = 0; a < g.size; a++) {
    if (g.mul(a, g.inv(a)) != g.identity || g.mul(g.inv(a), a) != g.identity) bad_inv++;
    if (g.mul(g.identity, a) != a || g.mul(a, g.identity) != a) bad_inv++;
  }
  Rng rng(rep.seed, 3);
  int probes = std::min(20000, g.size * g.size);
  for (int t = 0; t < probes; t++) {
    int a = (int)rng.uniform_int(g.size), b = (int)rng.uniform_int(g.size),
        c = (int)rng.uniform_int(g.size);
    if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))) bad_assoc++;
  }
  rep.add("inverse_identity_failures", bad_inv, 0.0, bad_inv == 0);
  rep.add("associativity_failures", bad_assoc, 0.0, bad_assoc == 0);
  rep.info("quasi_triangle_constant", g.measure_quasi_triangle());
  rep.info("inversion_asymmetry", g.inversion_asymmetry());
  rep.info("h0", g.h0);
  rep.info("diameter", g.diameter);

  CsvWriter csv(detail::out_path(cfg, "group.csv"), "group", cfg,
                {"radius", "ball_count"});
  for (double r : g.ball_radii()) {
    csv.cell(r);
    csv.cell(g.ball_count(r));
    csv.end_row();
  }
  rep.wall_ms = sw.ms();
  rep.write(detail::out_path(cfg, "group_report.csv"));
  return rep;
}

// ---------------------------------------------------------------------------
// spectral: eigendecomposition quality and the two-path Parseval identity for
// every multiplier family the suites use.
// ---------------------------------------------------------------------------
inline RunReport suite_spectral(const Config& cfg) {
  Stopwatch sw;
  RunReport rep;
  rep.suite = "spectral";
  rep.config = cfg;
  rep.seed = cfg.get_seed();
  Group g = model_from_config(cfg);
  SpectralDecomposition dec = spectral_decompose(g, cfg.get_double("model.s0"));

  auto chk = check_decomposition(dec);
  double lscale = std::max(dec.lambda.back(), 1.0);
  rep.add("reconstruction_rel_err", chk.reconstruction_err / lscale, 1e-10,
          chk.reconstruction_err / lscale <= 1e-10);
  rep.add("orthonormality_err", chk.orthonormality_err, 1e-10, chk.orthonormality_err <= 1e-10);
  rep.add("lambda0_multiplicity", chk.lambda0_multiplicity, 1.0, chk.lambda0_multiplicity == 1);
  rep.info("clamped_eigenvalue", dec.clamped);
  rep.info("sigma_max", dec.sq.back());

  MultiplierSpec ms = multiplier_from_config(cfg);
  double tmax = std::max(dec.lambda.back(), 1.0);
  std::vector<std::pair<std::string, Multiplier>> fams = {
      {"heat", [&](double s) { return std::complex<double>(std::exp(-s * s / tmax), 0.0); }},
      {"oscillating", make_oscillating(ms)},
      {"riesz", make_riesz_multiplier((int)cfg.get_int("riesz.k"), cfg.get_double("riesz.alpha"),
                                      cfg.get_double("riesz.t"))},
      {"dispersive",
       [&](double s) {
         return std::polar(1.0, cfg.get_double("dispersive.t") *
                                    std::pow(s, cfg.get_double("dispersive.alpha")));
       }},
  };
  for (auto& [name, m] : fams) {
    auto pr = plancherel_check(dec, m);
    rep.add("plancherel_" + name, pr.rel_err, 1e-10, pr.rel_err <= 1e-10);
  }

  CsvWriter csv(detail::out_path(cfg, "spectral.csv"), "spectral", cfg,
                {"i", "lambda", "sigma"});
  for (int i = 0; i < dec.N; i++) {
    csv.cell(i);
    csv.cell(dec.lambda[i]);
    csv.cell(dec.sq[i]);
    csv.end_row();
  }
  rep.wall_ms = sw.ms();
  rep.write(detail::out_path(cfg, "spectral_report.csv"));
  return rep;
}

// ---------------------------------------------------------------------------
// heat: positivity, mass, peak location, Gaussian profile of e^{-tL} delta_e.
// ---------------------------------------------------------------------------
inline RunReport suite_heat(const Config& cfg) {
  Stopwatch sw;
  RunReport rep;
  rep.suite = "heat";
  rep.config = cfg;
  rep.seed = cfg.get_seed();
  Group g = model_from_config(cfg);
  SpectralDecomposition dec = spectral_decompose(g, cfg.get_double("model.s0"));
  double lmax = std::max(dec.lambda.back(), 1.0);

  CsvWriter csv(detail::out_path(cfg, "heat.csv"), "heat", cfg, {"t", "x", "norm_x", "p"});
  for (double c : {1.0, 10.0, 100.0}) {
    double t = c / lmax;
    HeatReport hr = heat_report(dec, t);
    std::string tag = "t" + std::to_string((int)c);
    rep.add("mass_err_" + tag, hr.mass_err, 1e-12, hr.mass_err <= 1e-12);
    rep.add("min_value_" + tag, hr.min_p, -1e-12, hr.min_p >= -1e-12);
    rep.add("peak_at_identity_" + tag, hr.peak_at_identity ? 1.0 : 0.0, 1.0,
            hr.peak_at_identity);
    rep.info("gaussian_slope_" + tag, hr.gaussian_fit.slope);
    rep.info("gaussian_r2_" + tag, hr.gaussian_fit.r2);
    for (const auto& row : hr.rows) {
      csv.cell(t);
      csv.cell(row.x);
      csv.cell(row.norm_x);
      csv.cell(row.p);
      csv.end_row();
    }
  }
  rep.wall_ms = sw.ms();
  rep.write(detail::out_path(cfg, "heat_report.csv"));
  return rep;
}

// ---------------------------------------------------------------------------
// multiplier-check: partition exactness, symbol-class diagnostics, band
// kernel resummation.
// ---------------------------------------------------------------------------
inline RunReport suite_multiplier_check(const Config& cfg) {
  Stopwatch sw;
  RunReport rep;
  rep.suite = "multiplier-check";
  rep.config = cfg;
  rep.seed = cfg.get_seed();
  MultiplierSpec ms = multiplier_from_config(cfg);
  BumpProfile b = make_bump_partition(ms.nu);
  Group g = model_from_config(cfg);
  SpectralDecomposition dec = spectral_decompose(g, cfg.get_double("model.s0"));
  auto [smin, smax] = detail::positive_spectrum_range(dec);

  // Telescoping sum over a 1000-point geometric grid clear of sigma = 0.
  double lo = smin / (ms.nu * ms.nu), hi = smax * ms.nu * ms.nu;
  double worst = 0.0;
  for (int i = 0; i < 1000; i++) {
    double u = lo * std::pow(hi / lo, i / 999.0);
    worst = std::max(worst, piece_sum_deficit(ms, b, u));
  }
  rep.add("telescoping_deficit", worst, 1e-10, worst <= 1e-10);

  int smax_order = (int)cfg.get_int("multiplier.smax");
  ClassReport cr = class_membership_report(ms, b, smin, smax, smax_order);
  rep.add("cond1_tail_ratio", cr.cond1_tail_ratio, 10.0, cr.cond1_bounded);
  rep.info("cond1_sup", cr.cond1_sup);
  for (int s = 1; s <= smax_order; s++) {
    rep.add("cond2_tail_ratio_s" + std::to_string(s), cr.cond2_tail_ratio[s], 10.0,
            cr.cond2_bounded[s] != 0);
    rep.info("cond2_sup_s" + std::to_string(s), cr.cond2_sup[s]);
  }

  // Spatial resummation per band: pieces must add back to the band kernel.
  auto js = deep_band_range(ms, smin, smax);
  double resum_worst = 0.0;
  int bands = 0;
  for (int j : js) {
    cvec Kj = kernel_of(dec, make_piece(ms, b, j));
    double scale = 0.0;
    for (auto& v : Kj) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) continue;
    BandPieces bp = decompose_band_kernel(g, ms, b, j, Kj);
    resum_worst = std::max(resum_worst, bp.resum_defect(Kj) / scale);
    bands++;
  }
  rep.add("band_resum_rel_defect", resum_worst, 1e-10, resum_worst <= 1e-10);
  rep.info("bands_checked", bands);

  CsvWriter csv(detail::out_path(cfg, "multiplier_check.csv"), "multiplier_check", cfg,
                {"j", "cond1", "cond2_s1"});
  for (size_t i = 0; i < cr.js.size(); i++) {
    csv.cell(cr.js[i]);
    csv.cell(cr.cond1[i]);
    csv.cell(cr.cond2.size() > 1 ? cr.cond2[1][i] : 0.0);
    csv.end_row();
  }
  rep.wall_ms = sw.ms();
  rep.write(detail::out_path(cfg, "multiplier_check_report.csv"));
  return rep;
}

// ---------------------------------------------------------------------------
// decay: per-band norms, fitted slopes, and the exact band-norm identity.
// ---------------------------------------------------------------------------
inline RunReport suite_decay(const Config& cfg) {
  Stopwatch sw;
  RunReport rep;
  rep.suite = "decay";
  rep.config = cfg;
  rep.seed = cfg.get_seed();
  MultiplierSpec ms = multiplier_from_config(cfg);
  BumpProfile b = make_bump_partition(ms.nu);
  Group g = model_from_config(cfg);
  SpectralDecomposition dec = spectral_decompose(g, cfg.get_double("model.s0"));
  Rng rng(rep.seed, 5);

  DecayReport dr = piece_decay_report(dec, ms, b, rng, 0.9, true, 3);
  rep.info("usable_bands", dr.usable);
  double l2dev = dr.l2_slope_expected == 0.0
                     ? std::abs(dr.l2_fit.slope)
                     : std::abs(dr.l2_fit.slope - dr.l2_slope_expected) /
                           std::abs(dr.l2_slope_expected);
  rep.add("l2_slope_rel_dev", l2dev, 0.15, l2dev <= 0.15);
  rep.info("l2_slope", dr.l2_fit.slope);
  rep.info("l2_slope_expected", dr.l2_slope_expected);
  rep.info("l1_slope", dr.l1_fit.slope);
  rep.info("l1_slope_expected", dr.l1_slope_expected);
  rep.info("sup_slope", dr.sup_fit.slope);
  rep.info("sup_slope_expected", dr.sup_slope_expected);

  double ident = 0.0;
  for (const auto& row : dr.rows) {
    if (!row.usable || row.spectral_sup == 0.0) continue;
    ident = std::max(ident, std::abs(row.power_value - row.spectral_sup) / row.spectral_sup);
  }
  rep.add("band_norm_identity_rel_err", ident, 1e-6, ident <= 1e-6);

  CsvWriter csv(detail::out_path(cfg, "decay.csv"), "decay", cfg,
                {"j", "mask_peak", "usable", "spectral_sup", "power_value", "l1_norm",
                 "l2_kernel", "sup_kernel", "small_block_l1", "large_piece_l1_worst"});
  for (const auto& row : dr.rows) {
    csv.cell(row.j);
    csv.cell(row.mask_peak);
    csv.cell(row.usable ? 1 : 0);
    csv.cell(row.spectral_sup);
    csv.cell(row.power_value);
    csv.cell(row.l1_norm);
    csv.cell(row.l2_kernel);
    csv.cell(row.sup_kernel);
    csv.cell(row.small_block_l1);
    csv.cell(row.large_piece_l1_worst);
    csv.end_row();
  }
  rep.wall_ms = sw.ms();
  rep.write(detail::out_path(cfg, "decay_report.csv"));
  return rep;
}

// ---------------------------------------------------------------------------
// riesz: quadrature against the order-1 closed form and structural scalars.
// ---------------------------------------------------------------------------
inline RunReport suite_riesz(const Config& cfg) {
  Stopwatch sw;
  RunReport rep;
  rep.suite = "riesz";
  rep.config = cfg;
  rep.seed = cfg.get_seed();
  Group g = model_from_config(cfg);
  SpectralDecomposition dec = spectral_decompose(g, cfg.get_double("model.s0"));
  int k = (int)cfg.get_int("riesz.k");
  double alpha = cfg.get_double("riesz.alpha");
  double t = cfg.get_double("riesz.t");

  double closed_err = 0.0;
  for (double lam : dec.lambda) {
    auto q = riesz_scalar(1, alpha, t, lam);
    auto c = riesz_scalar_order1(alpha, t, lam);
    closed_err = std::max(closed_err, std::abs(q - c) / std::max(std::abs(c), 1e-30));
  }
  rep.add("order1_closed_form_rel_err", closed_err, 1e-8, closed_err <= 1e-8);

  auto zero = riesz_scalar(k, alpha, t, 0.0);
  double zerr = std::abs(zero - std::complex<double>(1.0, 0.0));
  rep.add("zero_eigenvalue_scalar", zerr, 0.0, zerr == 0.0);

  double overshoot = 0.0, principal_dev = 0.0;
  CsvWriter csv(detail::out_path(cfg, "riesz.csv"), "riesz", cfg,
                {"lambda", "mu", "re", "im", "abs"});
  for (double lam : dec.lambda) {
    auto q = riesz_scalar(k, alpha, t, lam);
    overshoot = std::max(overshoot, std::abs(q) - 1.0);
    csv.cell(lam);
    csv.cell(std::pow(lam, alpha / 2.0));
    csv.cell(q.real());
    csv.cell(q.imag());
    csv.cell(std::abs(q));
    csv.end_row();
  }
  rep.add("modulus_overshoot", overshoot, 1e-9, overshoot <= 1e-9);

  double mu_top = std::pow(dec.lambda.back(), alpha / 2.0);
  if (mu_top * t > 50.0 * k) {
    auto q = riesz_scalar(k, alpha, t, dec.lambda.back());
    auto lead = riesz_principal_term(k, t, mu_top);
    principal_dev = std::abs(q - lead) / std::abs(lead);
    rep.info("principal_term_rel_dev_top", principal_dev);
  }
  rep.wall_ms = sw.ms();
  rep.write(detail::out_path(cfg, "riesz_report.csv"));
  return rep;
}

// ---------------------------------------------------------------------------
// dispersive: unitarity, group law, exact identity at t = 0.
// ---------------------------------------------------------------------------
inline RunReport suite_dispersive(const Config& cfg) {
  Stopwatch sw;
  RunReport rep;
  rep.suite = "dispersive";
  rep.config = cfg;
  rep.seed = cfg.get_seed();
  Group g = model_from_config(cfg);
  SpectralDecomposition dec = spectral_decompose(g, cfg.get_double("model.s0"));
  int alpha = (int)cfg.get_int("dispersive.alpha");
  double t = cfg.get_double("dispersive.t");
  Rng rng(rep.seed, 9);

  cvec f(g.size);
  for (auto& z : f) z = {rng.symmetric(), rng.symmetric()};
  double nf = norm2(f);

  cvec u0 = dispersive_propagate(dec, alpha, 0.0, f);
  double id_gap = max_abs_diff(u0, f);
  rep.add("identity_at_t0", id_gap, 0.0, id_gap == 0.0);

  double unit_worst = 0.0;
  CsvWriter csv(detail::out_path(cfg, "dispersive.csv"), "dispersive", cfg,
                {"t", "norm_ratio_minus_1"});
  for (double c : {0.25, 0.5, 1.0, 2.0}) {
    double tt = c * t;
    cvec u = dispersive_propagate(dec, alpha, tt, f);
    double dev = std::abs(norm2(u) / nf - 1.0);
    unit_worst = std::max(unit_worst, dev);
    csv.cell(tt);
    csv.cell(dev);
    csv.end_row();
  }
  rep.add("unitarity_rel_err", unit_worst, 1e-10, unit_worst <= 1e-10);

  cvec u12 = dispersive_propagate(dec, alpha, 0.3 * t,
                                  dispersive_propagate(dec, alpha, 0.7 * t, f));
  cvec u3 = dispersive_propagate(dec, alpha, t, f);
  double grp = 0.0;
  for (int i = 0; i < g.size; i++) grp = std::max(grp, std::abs(u12[i] - u3[i]));
  grp /= nf;
  rep.add("group_property_rel_err", grp, 1e-9, grp <= 1e-9);
  rep.wall_ms = sw.ms();
  rep.write(detail::out_path(cfg, "dispersive_report.csv"));
  return rep;
}

// ---------------------------------------------------------------------------
// grids: dyadic systems, axioms, ball-covering.
// ---------------------------------------------------------------------------
inline RunReport suite_grids(const Config& cfg) {
  Stopwatch sw;
  RunReport rep;
  rep.suite = "grids";
  rep.config = cfg;
  rep.seed = cfg.get_seed();
  Group g = model_from_config(cfg);
  GridFamily fam = build_dyadic_grids(g, cfg.get_double("scales.mu"), rep.seed,
                                      (int)cfg.get_int("run.grids_max"));

  long violations = 0, checked = 0;
  for (const auto& grid : fam.grids) {
    AxiomReport ar = verify_grid_axioms(g, grid, fam.c1, fam.C1);
    violations += (long)ar.violations.size();
    if (!ar.pass && ar.violations.empty()) violations++;  // capped list still counts
    checked += ar.checked;
  }
  rep.add("axiom_violations", (double)violations, 0.0, violations == 0);
  rep.info("axiom_checks", (double)checked);
  rep.add("ball_covering_violations", fam.hk.violations, 0.0, fam.hk.pass);
  rep.info("ball_covering_windows", fam.hk.windows_checked);
  rep.info("ball_covering_constant", fam.hk.C);
  rep.info("grids_used", (double)fam.grids.size());
  rep.add("sandwich_order", fam.C1 - fam.c1, 0.0, fam.c1 <= fam.C1);
  rep.info("c1", fam.c1);
  rep.info("C1", fam.C1);

  CsvWriter csv(detail::out_path(cfg, "grids.csv"), "grids", cfg,
                {"grid", "k", "delta", "cells"});
  for (size_t gi = 0; gi < fam.grids.size(); gi++) {
    const auto& grid = fam.grids[gi];
    for (int k = grid.k_min; k <= grid.k_max; k++) {
      csv.cell((int)gi);
      csv.cell(k);
      csv.cell(grid.delta(k));
      csv.cell((int)grid.centers[grid.level_index(k)].size());
      csv.end_row();
    }
  }
  rep.wall_ms = sw.ms();
  rep.write(detail::out_path(cfg, "grids_report.csv"));
  return rep;
}

// ---------------------------------------------------------------------------
// sparse-check: proof-scale collection -> sparse family -> domination ratios.
// ---------------------------------------------------------------------------
inline RunReport suite_sparse_check(const Config& cfg) {
  Stopwatch sw;
  RunReport rep;
  rep.suite = "sparse-check";
  rep.config = cfg;
  rep.seed = cfg.get_seed();
  detail::Budget budget(sw, cfg);
  MultiplierSpec ms = multiplier_from_config(cfg);
  BumpProfile b = make_bump_partition(ms.nu);
  Group g = model_from_config(cfg);
  SpectralDecomposition dec = spectral_decompose(g, cfg.get_double("model.s0"));
  GridFamily fam = build_dyadic_grids(g, cfg.get_double("scales.mu"), rep.seed,
                                      (int)cfg.get_int("run.grids_max"));
  double r1 = cfg.get_double("sparse.r1");
  double r2 = cfg.get_double("sparse.r2");

  Rational eta = Rational::parse(cfg.get_string("sparse.eta"));
  auto [smin, smax] = detail::positive_spectrum_range(dec);
  auto js = deep_band_range(ms, smin, smax);
  ScaleCollection col = proof_scale_collection(g, fam, ms, js);
  rep.info("collection_entries", (double)col.entries.size());
  rep.info("collection_clamped", col.clamped_entries);
  if (col.unreliable) rep.flag("collection_clamped_fraction_high", col.clamped_entries);
  rep.info("carleson_packing", col.carleson_packing);
  SparseFamily S = sparsify(g, fam, col, eta.num, eta.den);
  SparseCheck chk = verify_sparse_family(g, S);
  rep.add("family_disjoint", chk.disjoint ? 1.0 : 0.0, 1.0, chk.disjoint);
  rep.add("family_dense", chk.dense ? 1.0 : 0.0, 1.0, chk.dense);
  rep.add("family_cores_inside", chk.cores_inside ? 1.0 : 0.0, 1.0, chk.cores_inside);
  rep.info("family_cubes", (double)S.cubes.size());
  rep.info("family_dropped", S.dropped);
  rep.info("family_min_density", S.min_density);

  if (budget.exceeded(rep)) {
    rep.wall_ms = sw.ms();
    rep.write(detail::out_path(cfg, "sparse_check_report.csv"));
    return rep;
  }

  int trials = (int)cfg.get_int("run.trials");
  DominationReport dom = domination_experiment(dec, ms, b, fam, r1, r2, trials, rep.seed,
                                               eta.num, eta.den);
  int adm = (int)admissible_region((double)g.Q, ms.beta, r1, r2) !=
                    (int)Admissibility::inadmissible
                ? 1
                : 0;
  rep.add("pair_admissible", adm, 1.0, adm == 1);
  bool finite = std::isfinite(dom.max_ratio);
  rep.add("max_ratio_finite", finite ? 1.0 : 0.0, 1.0, finite);
  rep.info("max_ratio", dom.max_ratio);
  rep.info("median_ratio", dom.median_ratio);
  rep.info("dual_max_ratio", dom.dual_max_ratio);
  rep.info("dual_median_ratio", dom.dual_median_ratio);
  rep.add("zero_form_bugs", dom.zero_form_bugs, 0.0, dom.zero_form_bugs == 0);

  CsvWriter csv(detail::out_path(cfg, "sparse_check.csv"), "sparse_check", cfg,
                {"trial", "inner_abs", "form", "ratio", "dual_form", "dual_ratio"});
  for (const auto& row : dom.trials) {
    csv.cell(row.trial);
    csv.cell(row.inner_abs);
    csv.cell(row.form);
    csv.cell(row.ratio);
    csv.cell(row.dual_form);
    csv.cell(row.dual_ratio);
    csv.end_row();
  }
  rep.wall_ms = sw.ms();
  rep.write(detail::out_path(cfg, "sparse_check_report.csv"));
  return rep;
}

// ---------------------------------------------------------------------------
// weights: characteristics, invariances, weighted operator-norm bracket.
// ---------------------------------------------------------------------------
inline RunReport suite_weights(const Config& cfg) {
  Stopwatch sw;
  RunReport rep;
  rep.suite = "weights";
  rep.config = cfg;
  rep.seed = cfg.get_seed();
  Group g = model_from_config(cfg);
  double p = cfg.get_double("weights.p");
  double q = cfg.get_double("weights.q");
  double a = cfg.get_double("weights.a");
  Rng rng(rep.seed, 13);

  Weight one(g, dvec(g.size, 1.0));
  double ap1 = one.ap(p), rh1 = one.rh(q);
  rep.add("unit_ap_char", std::abs(ap1 - 1.0), 0.0, ap1 == 1.0);
  rep.add("unit_rh_char", std::abs(rh1 - 1.0), 0.0, rh1 == 1.0);

  Weight w = power_weight(g, a);
  double wp = w.ap(p);
  rep.info("power_ap_char", wp);
  rep.info("power_rh_char", w.rh(q));
  double nest_gap = 0.0;
  double prev = wp;
  for (double dp : {0.5, 1.0, 2.0}) {
    double cur = w.ap(p + dp);
    nest_gap = std::max(nest_gap, cur - prev);
    prev = cur;
  }
  rep.add("ap_nesting_monotone", nest_gap, 0.0, nest_gap <= 0.0);

  double scale_dev = 0.0;
  for (double c : {1e-3, 1e3}) {
    dvec sv(g.size);
    for (int i = 0; i < g.size; i++) sv[i] = c * w.values()[i];
    Weight ws(g, std::move(sv));
    scale_dev = std::max(scale_dev, std::abs(ws.ap(p) / wp - 1.0));
    scale_dev = std::max(scale_dev, std::abs(ws.rh(q) / w.rh(q) - 1.0));
  }
  rep.add("scale_invariance_rel_dev", scale_dev, 1e-12, scale_dev <= 1e-12);

  double pp = p / (p - 1.0);
  dvec dual(g.size);
  for (int i = 0; i < g.size; i++) dual[i] = std::pow(w.values()[i], 1.0 - pp);
  double holder_excess = 0.0;
  for (int t = 0; t < 50; t++) {
    cvec f = detail::random_ball_function(g, rng);
    cvec h = detail::random_ball_function(g, rng);
    double lhs = std::abs(inner(f, h));
    double rhs = weighted_norm(f, p, w.values()) * weighted_norm(h, pp, dual);
    if (rhs > 0.0) holder_excess = std::max(holder_excess, lhs / rhs - 1.0);
  }
  rep.add("holder_duality_excess", holder_excess, 1e-12, holder_excess <= 1e-12);

  SpectralDecomposition dec = spectral_decompose(g, cfg.get_double("model.s0"));
  MultiplierSpec ms = multiplier_from_config(cfg);
  auto m = make_oscillating(ms);
  OpnormBracket br = weighted_opnorm(dec, m, p, w, rng);
  rep.info("opnorm_lower", br.lower);
  rep.info("opnorm_upper", br.upper);
  rep.add("opnorm_bracket_order", br.lower - br.upper * (1.0 + 1e-12), 0.0,
          br.lower <= br.upper * (1.0 + 1e-12));

  CsvWriter csv(detail::out_path(cfg, "weights.csv"), "weights", cfg,
                {"a", "ap_char", "rh_char"});
  for (double av : {0.0, 0.25, 0.5, 0.75, 0.95 * g.Q * (p - 1.0)}) {
    Weight wv = power_weight(g, av);
    csv.cell(av);
    csv.cell(wv.ap(p));
    csv.cell(wv.rh(q));
    csv.end_row();
  }
  rep.wall_ms = sw.ms();
  rep.write(detail::out_path(cfg, "weights_report.csv"));
  return rep;
}

// ---------------------------------------------------------------------------
// quantitative: threshold arithmetic and the weighted ceiling sweep.
// ---------------------------------------------------------------------------
inline RunReport suite_quantitative(const Config& cfg) {
  Stopwatch sw;
  RunReport rep;
  rep.suite = "quantitative";
  rep.config = cfg;
  rep.seed = cfg.get_seed();
  Group g = model_from_config(cfg);
  SpectralDecomposition dec = spectral_decompose(g, cfg.get_double("model.s0"));
  MultiplierSpec ms = multiplier_from_config(cfg);
  QuantReport qr = quantitative_suite(dec, ms, cfg.get_string("quant.mode"), rep.seed);

  rep.info("p_threshold", qr.thr.p_thr.value());
  if (qr.thr.s_defined) rep.info("s_threshold", qr.thr.s_thr.value());
  rep.info("kernel_l1", qr.kernel_l1);
  int fails = 0;
  for (const auto& c : qr.cells)
    if (!c.pass) fails++;
  rep.add("cells_over_ceiling", fails, 0.0, fails == 0);
  rep.info("cells_total", (double)qr.cells.size());

  CsvWriter csv(detail::out_path(cfg, "quantitative.csv"), "quantitative", cfg,
                {"p", "a", "r1", "r2", "exponent", "ap_char", "rh_char", "lower", "ceiling",
                 "exact", "pass"});
  for (const auto& c : qr.cells) {
    csv.cell(c.p);
    csv.cell(c.a);
    csv.cell(c.r1);
    csv.cell(c.r2);
    csv.cell(c.exponent);
    csv.cell(c.ap_char);
    csv.cell(c.rh_char);
    csv.cell(c.lower);
    csv.cell(c.ceiling);
    csv.cell(c.exact ? 1 : 0);
    csv.cell(c.pass ? 1 : 0);
    csv.end_row();
  }
  rep.wall_ms = sw.ms();
  rep.write(detail::out_path(cfg, "quantitative_report.csv"));
  return rep;
}

// ---------------------------------------------------------------------------
// dispatcher
// ---------------------------------------------------------------------------
inline RunReport run_experiment(const Config& cfg, const std::string& suite_in) {
  cfg.validate();
  std::string suite = suite_in == "spectrum" ? "spectral" : suite_in;
  if (suite == "group") return suite_group(cfg);
  if (suite == "spectral") return suite_spectral(cfg);
  if (suite == "heat") return suite_heat(cfg);
  if (suite == "multiplier-check") return suite_multiplier_check(cfg);
  if (suite == "decay") return suite_decay(cfg);
  if (suite == "riesz") return suite_riesz(cfg);
  if (suite == "dispersive") return suite_dispersive(cfg);
  if (suite == "grids") return suite_grids(cfg);
  if (suite == "sparse-check") return suite_sparse_check(cfg);
  if (suite == "weights") return suite_weights(cfg);
  if (suite == "quantitative") return suite_quantitative(cfg);
  throw std::invalid_argument(
      "unknown suite '" + suite_in +
      "' (expected group, spectral, heat, multiplier-check, decay, riesz, dispersive, "
      "grids, sparse-check, weights, or quantitative)");
}

}  // namespace stratsp
