// Sparse families over dyadic grid systems: scale collections with geometric
// weights, the Carleson-to-sparse conversion with exact density accounting,
// bilinear sparse forms, the admissible exponent region, and the randomized
// domination experiment.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "stratsp/conv.hpp"
#include "stratsp/dyadic.hpp"
#include "stratsp/group.hpp"
#include "stratsp/multiplier.hpp"
#include "stratsp/rng.hpp"
#include "stratsp/spectral.hpp"
#include "stratsp/types.hpp"

namespace stratsp {

// ---------------------------------------------------------------------------
// Averages and sparse forms
// ---------------------------------------------------------------------------

inline double average(const cvec& f, const std::vector<int>& pts, double r) {
  if (pts.empty()) throw std::invalid_argument("average: empty cube");
  if (r == std::numeric_limits<double>::infinity()) {
    double m = 0.0;
    for (int x : pts) m = std::max(m, std::abs(f[x]));
    return m;
  }
  if (!(r >= 1.0)) throw std::invalid_argument("average: exponent must be >= 1");
  double s = 0.0;
  for (int x : pts) s += std::pow(std::abs(f[x]), r);
  return std::pow(s / pts.size(), 1.0 / r);
}

// ---------------------------------------------------------------------------
// Scale collections
// ---------------------------------------------------------------------------

struct CubeTag {
  int grid = 0, k = 0, cube = 0;
  int j = 0, l = 0;   // band and spatial level that prescribed this cube
  double gamma = 1.0; // geometric weight
  bool clamped = false;
};

struct ScaleCollection {
  std::vector<CubeTag> entries;
  int clamped_entries = 0;
  bool unreliable = false;       // more than 30% of entries were clamped
  double carleson_packing = 0.0; // within-grid packing constant
  double max_weight = 0.0;       // max summed gamma over distinct cubes
  int distinct_cubes = 0;
};

namespace detail {

// Ancestor cube index of (k_fine, cube) at coarser level k_coarse.
inline int ancestor_cube(const DyadicGrid& grid, int k_fine, int cube, int k_coarse) {
  int c = cube;
  for (int k = k_fine; k > k_coarse; k--) c = grid.parent[grid.level_index(k)][c];
  return c;
}

inline void finish_collection(const GridFamily& fam, ScaleCollection& col) {
  col.unreliable =
      !col.entries.empty() && col.clamped_entries * 10 > (int)col.entries.size() * 3;

  std::map<std::array<int, 3>, double> weight;
  for (auto& e : col.entries) weight[{e.grid, e.k, e.cube}] += e.gamma;
  col.distinct_cubes = (int)weight.size();
  for (auto& kv : weight) col.max_weight = std::max(col.max_weight, kv.second);

  // Within-grid packing: for each included cube, total point count of
  // included cubes contained in it (self included), over its own count.
  for (int t = 0; t < (int)fam.grids.size(); t++) {
    const DyadicGrid& grid = fam.grids[t];
    std::vector<std::array<int, 2>> cubes;  // (k, cube), distinct, this grid
    for (auto& kv : weight)
      if (kv.first[0] == t) cubes.push_back({kv.first[1], kv.first[2]});
    if (cubes.empty()) continue;
    std::vector<long> size(cubes.size()), load(cubes.size(), 0);
    std::map<std::array<int, 2>, int> index;
    for (int i = 0; i < (int)cubes.size(); i++) {
      index[cubes[i]] = i;
      int li = grid.level_index(cubes[i][0]);
      long s = 0;
      for (int own : grid.owner[li])
        if (own == cubes[i][1]) s++;
      size[i] = s;
    }
    // For each cube, walk its ancestors among the included levels and add its
    // point count to each containing cube's load.
    std::vector<int> levels;
    for (auto& c : cubes) levels.push_back(c[0]);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (int i = 0; i < (int)cubes.size(); i++) {
      for (int k : levels) {
        if (k >= cubes[i][0]) continue;  // coarser levels have smaller k
        int anc = ancestor_cube(grid, cubes[i][0], cubes[i][1], k);
        auto it = index.find({k, anc});
        if (it != index.end()) load[it->second] += size[i];
      }
      load[i] += size[i];
    }
    for (int i = 0; i < (int)cubes.size(); i++)
      if (size[i] > 0)
        col.carleson_packing = std::max(col.carleson_packing, (double)load[i] / size[i]);
  }
}

}  // namespace detail

// The cube collection the domination proof sums over: for each band j the
// single level floor(j(1-theta) - j eps) carrying the small spatial scales,
// and one level floor(j(1-theta) - l) per large spatial scale l, each taken
// across every grid of the family and tagged with its geometric weight.
// Levels outside the grid range are clamped and counted; the l-ladder stops
// at the first level that clamps to the coarsest grid level.
inline ScaleCollection proof_scale_collection(const Group& g, const GridFamily& fam,
                                              const MultiplierSpec& ms,
                                              const std::vector<int>& js) {
  if (fam.grids.empty()) throw std::invalid_argument("scale collection: empty grid family");
  ms.validate();
  double Q = (double)g.Q;
  ScaleCollection col;
  int k_min = fam.grids[0].k_min, k_max = fam.grids[0].k_max;
  auto push_level = [&](int j, int l, int level, double gamma) {
    bool clamped = false;
    int k = level;
    if (k < k_min) {
      k = k_min;
      clamped = true;
    }
    if (k > k_max) {
      k = k_max;
      clamped = true;
    }
    for (int t = 0; t < (int)fam.grids.size(); t++) {
      int li = fam.grids[t].level_index(k);
      int ncubes = (int)fam.grids[t].centers[li].size();
      for (int c = 0; c < ncubes; c++) {
        col.entries.push_back({t, k, c, j, l, gamma, clamped});
        if (clamped) col.clamped_entries++;
      }
    }
    return clamped;
  };

  for (int j : js) {
    if (j * ms.theta <= 0.0) continue;
    double aj = std::abs((double)j);
    double depth = aj * std::abs(ms.theta);  // = j*theta for j*theta > 0
    int small_level = (int)std::floor(j * (1.0 - ms.theta) - aj * ms.eps);
    push_level(j, (int)std::floor(aj * ms.eps), small_level,
               std::pow(ms.nu, -depth * ms.beta / 2.0));
    double large_rate = Q * (Q + std::abs(ms.theta) * ms.beta / 2.0);
    for (int l = (int)std::floor(aj * ms.eps) + 1;; l++) {
      int level = (int)std::floor(j * (1.0 - ms.theta) - l);
      double gamma = std::pow(ms.nu, -large_rate * (aj + l));
      bool clamped = push_level(j, l, level, gamma);
      if (clamped && level <= k_min) break;
      if (l > 4 * (std::abs(j) + std::abs(k_min) + std::abs(k_max)) + 8)
        break;  // safety stop; unreachable for consistent grids
    }
  }
  detail::finish_collection(fam, col);
  return col;
}

// Every cube of every grid and level, unit weights. Test fodder for the
// sparsification and form routines.
inline ScaleCollection full_forest_collection(const GridFamily& fam) {
  ScaleCollection col;
  for (int t = 0; t < (int)fam.grids.size(); t++) {
    const DyadicGrid& grid = fam.grids[t];
    for (int k = grid.k_min; k <= grid.k_max; k++) {
      int ncubes = (int)grid.centers[grid.level_index(k)].size();
      for (int c = 0; c < ncubes; c++) col.entries.push_back({t, k, c, 0, 0, 1.0, false});
    }
  }
  detail::finish_collection(fam, col);
  return col;
}

// ---------------------------------------------------------------------------
// Sparsification
// ---------------------------------------------------------------------------

struct SparseCube {
  int grid = 0, k = 0, cube = 0;
  int center = 0;
  double gamma = 1.0;
  std::vector<int> pts;   // the cube R
  std::vector<int> core;  // the selected E_R
};

struct SparseFamily {
  long long eta_num = 1, eta_den = 2;
  std::vector<SparseCube> cubes;
  int dropped = 0;
  double min_density = 1.0;  // min |E_R| / |R| over kept cubes
  bool complete = true;      // no cube was dropped
};

struct SparseCheck {
  bool disjoint = true;
  bool dense = true;  // |E_R| * eta_den >= eta_num * |R| for every cube, exact
  bool cores_inside = true;
  bool pass() const { return disjoint && dense && cores_inside; }
};

inline SparseCheck verify_sparse_family(const Group& g, const SparseFamily& fam) {
  SparseCheck chk;
  std::vector<char> seen(g.size, 0);
  for (auto& R : fam.cubes) {
    if ((long long)R.core.size() * fam.eta_den < fam.eta_num * (long long)R.pts.size())
      chk.dense = false;
    std::vector<char> member(g.size, 0);
    for (int x : R.pts) member[x] = 1;
    for (int x : R.core) {
      if (!member[x]) chk.cores_inside = false;
      if (seen[x]) chk.disjoint = false;
      seen[x] = 1;
    }
  }
  return chk;
}

// Carleson-to-sparse conversion. Cubes are deduplicated by point set (weights
// summed). If the full-group cube is present it claims exactly
// ceil(eta |G|) points first, farthest from the identity, so the emitted form
// is strictly positive on every nonzero pair. The remaining cubes are
// processed smallest-first, each claiming all its still-unclaimed points;
// a cube is kept exactly when that claim reaches ceil(eta |R|), so every kept
// cube has density >= eta in exact integer arithmetic.
inline SparseFamily sparsify(const Group& g, const GridFamily& fam, const ScaleCollection& col,
                             long long eta_num = 1, long long eta_den = 2) {
  if (eta_num <= 0 || eta_den <= 0 || eta_num > eta_den)
    throw std::invalid_argument("sparsify: eta must lie in (0, 1]");
  SparseFamily out;
  out.eta_num = eta_num;
  out.eta_den = eta_den;

  std::map<std::array<int, 3>, double> weight;
  for (auto& e : col.entries) weight[{e.grid, e.k, e.cube}] += e.gamma;

  struct Cand {
    int grid, k, cube, center;
    double gamma;
    std::vector<int> pts;
  };
  std::vector<Cand> cands;
  std::map<std::vector<int>, int> by_pts;  // dedup by point set
  for (auto& kv : weight) {
    const DyadicGrid& grid = fam.grids[kv.first[0]];
    int li = grid.level_index(kv.first[1]);
    Cand c{kv.first[0], kv.first[1], kv.first[2], grid.centers[li][kv.first[2]], kv.second, {}};
    for (int x = 0; x < (int)grid.owner[li].size(); x++)
      if (grid.owner[li][x] == kv.first[2]) c.pts.push_back(x);
    auto it = by_pts.find(c.pts);
    if (it != by_pts.end()) {
      cands[it->second].gamma += c.gamma;
      continue;
    }
    by_pts[c.pts] = (int)cands.size();
    cands.push_back(std::move(c));
  }

  auto need_of = [&](size_t n) -> long long {
    return ((long long)n * eta_num + eta_den - 1) / eta_den;
  };

  std::vector<char> claimed(g.size, 0);
  std::vector<int> order(cands.size());
  for (size_t i = 0; i < order.size(); i++) order[i] = (int)i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (cands[a].pts.size() != cands[b].pts.size())
      return cands[a].pts.size() < cands[b].pts.size();
    if (cands[a].grid != cands[b].grid) return cands[a].grid < cands[b].grid;
    if (cands[a].k != cands[b].k) return cands[a].k > cands[b].k;
    return cands[a].cube < cands[b].cube;
  });

  // Full-group cube first, if present.
  for (int i : order) {
    if ((int)cands[i].pts.size() != g.size) continue;
    std::vector<int> byn = cands[i].pts;
    std::sort(byn.begin(), byn.end(), [&](int a, int b) {
      double na = g.norm(a), nb = g.norm(b);
      return na != nb ? na > nb : a < b;
    });
    long long need = need_of(byn.size());
    SparseCube R{cands[i].grid, cands[i].k, cands[i].cube, cands[i].center, cands[i].gamma,
                 cands[i].pts, {}};
    for (long long s = 0; s < need; s++) {
      R.core.push_back(byn[s]);
      claimed[byn[s]] = 1;
    }
    std::sort(R.core.begin(), R.core.end());
    out.min_density = std::min(out.min_density, (double)R.core.size() / R.pts.size());
    out.cubes.push_back(std::move(R));
    break;  // point-set dedup leaves at most one
  }

  for (int i : order) {
    if ((int)cands[i].pts.size() == g.size && !out.cubes.empty() &&
        (int)out.cubes.front().pts.size() == g.size)
      continue;
    std::vector<int> free;
    for (int x : cands[i].pts)
      if (!claimed[x]) free.push_back(x);
    if ((long long)free.size() < need_of(cands[i].pts.size())) {
      out.dropped++;
      out.complete = false;
      continue;
    }
    for (int x : free) claimed[x] = 1;
    SparseCube R{cands[i].grid, cands[i].k, cands[i].cube, cands[i].center, cands[i].gamma,
                 cands[i].pts, std::move(free)};
    out.min_density = std::min(out.min_density, (double)R.core.size() / R.pts.size());
    out.cubes.push_back(std::move(R));
  }
  return out;
}

inline double sparse_form(const SparseFamily& fam, const cvec& f, const cvec& g, double r1,
                          double r2p) {
  double total = 0.0, comp = 0.0;
  for (auto& R : fam.cubes) {
    double term = (double)R.pts.size() * average(f, R.pts, r1) * average(g, R.pts, r2p);
    double y = term - comp;
    double t = total + y;
    comp = (t - total) - y;
    total = t;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Admissible exponents
// ---------------------------------------------------------------------------

enum class Admissibility { sparse1, sparse2, inadmissible };

inline const char* admissibility_name(Admissibility a) {
  switch (a) {
    case Admissibility::sparse1: return "sparse1";
    case Admissibility::sparse2: return "sparse2";
    default: return "inadmissible";
  }
}

inline Admissibility admissible_region(double Q, double beta, double r1, double r2) {
  if (!(r1 >= 1.0) || !(r2 >= 1.0))
    throw std::invalid_argument("admissible_region: exponents must be >= 1");
  double gap = beta / (2.0 * Q);
  if (r1 <= r2 && r2 <= 2.0 && 1.0 / r1 - 0.5 < gap) return Admissibility::sparse1;
  double r1p = r1 == 1.0 ? std::numeric_limits<double>::infinity() : r1 / (r1 - 1.0);
  if (r1 <= 2.0 && 2.0 <= r2 && r2 <= r1p && 1.0 / r1 - 1.0 / r2 < gap)
    return Admissibility::sparse2;
  return Admissibility::inadmissible;
}

// ---------------------------------------------------------------------------
// Domination experiment
// ---------------------------------------------------------------------------

struct DominationTrial {
  int trial = 0;
  double inner_abs = 0.0, form = 0.0, ratio = 0.0;
  double dual_form = 0.0, dual_ratio = 0.0;
};

struct DominationReport {
  std::string admissibility;
  double max_ratio = 0.0, median_ratio = 0.0;
  double dual_max_ratio = 0.0, dual_median_ratio = 0.0;
  int zero_form_bugs = 0;
  int sparse_dropped = 0;
  double sparse_min_density = 1.0;
  bool collection_unreliable = false;
  std::vector<DominationTrial> trials;
};

namespace detail {

inline double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Random complex data on a random ball of radius <= diam/4.
inline cvec random_ball_function(const Group& g, Rng& rng) {
  cvec f(g.size, {0.0, 0.0});
  auto radii = g.ball_radii();
  std::vector<double> usable;
  for (double r : radii)
    if (r > 0.0 && r <= g.diameter / 4.0) usable.push_back(r);
  if (usable.empty()) usable.push_back(g.h0);
  int z = (int)rng.uniform_int((std::uint64_t)g.size);
  double r = usable[rng.uniform_int((std::uint64_t)usable.size())];
  for (int x = 0; x < g.size; x++) {
    if (g.dist(z, x) <= r) f[x] = rng.unit_disk();
  }
  return f;
}

}  // namespace detail

inline DominationReport domination_experiment(const SpectralDecomposition& dec,
                                              const MultiplierSpec& ms, const BumpProfile& b,
                                              const GridFamily& gridfam, double r1, double r2,
                                              int trials, std::uint64_t seed,
                                              long long eta_num = 1, long long eta_den = 2) {
  ms.validate();
  const Group& g = *dec.g;
  DominationReport rep;
  rep.admissibility = admissibility_name(admissible_region((double)g.Q, ms.beta, r1, r2));

  double smin = std::numeric_limits<double>::infinity(), smax = 0.0;
  for (double s : dec.sq) {
    if (s > 0.0) smin = std::min(smin, s);
    smax = std::max(smax, s);
  }
  auto js = deep_band_range(ms, smin, smax);
  ScaleCollection col = proof_scale_collection(g, gridfam, ms, js);
  rep.collection_unreliable = col.unreliable;
  SparseFamily S = sparsify(g, gridfam, col, eta_num, eta_den);
  rep.sparse_dropped = S.dropped;
  rep.sparse_min_density = S.min_density;

  cvec K = kernel_of(dec, make_oscillating(ms));
  double kscale = 0.0;
  for (auto& v : K) kscale += std::abs(v);

  double r2p = r2 == 1.0 ? std::numeric_limits<double>::infinity() : r2 / (r2 - 1.0);
  Rng rng(seed, 7);
  std::vector<double> ratios, dual_ratios;
  for (int t = 0; t < trials; t++) {
    cvec f = detail::random_ball_function(g, rng);
    cvec gg = detail::random_ball_function(g, rng);
    cvec Tf = convolve(g, f, K);
    double inner_abs = std::abs(inner(Tf, gg));
    DominationTrial row;
    row.trial = t;
    row.inner_abs = inner_abs;
    row.form = sparse_form(S, f, gg, r1, r2p);
    row.dual_form = sparse_form(S, f, gg, r2p, r1);
    double tiny = 1e-13 * std::max(kscale * norm2(f) * norm2(gg), 1.0);
    if (row.form > 0.0) {
      row.ratio = inner_abs / row.form;
      ratios.push_back(row.ratio);
    } else if (inner_abs > tiny) {
      rep.zero_form_bugs++;
    }
    if (row.dual_form > 0.0) {
      row.dual_ratio = inner_abs / row.dual_form;
      dual_ratios.push_back(row.dual_ratio);
    } else if (inner_abs > tiny) {
      rep.zero_form_bugs++;
    }
    rep.trials.push_back(row);
  }
  for (double r : ratios) rep.max_ratio = std::max(rep.max_ratio, r);
  for (double r : dual_ratios) rep.dual_max_ratio = std::max(rep.dual_max_ratio, r);
  rep.median_ratio = detail::median_of(ratios);
  rep.dual_median_ratio = detail::median_of(dual_ratios);
  return rep;
}

}  // namespace stratsp
