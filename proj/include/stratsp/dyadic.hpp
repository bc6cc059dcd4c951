// Dyadic cube systems on a finite quasi-metric group: greedy nested nets,
// hierarchical ownership, measured sandwich constants, and the exhaustive
// ball-in-cube covering check across a small family of grids. The family is
// built as left translates of one aligned base grid, staggered so that every
// point sits deep inside its cube in some translate at every checked scale;
// at scale ratio 1/2 the largest admissible ball nearly fills a cube, so
// random shifts cannot achieve this and the stagger must be exact.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "stratsp/group.hpp"
#include "stratsp/rng.hpp"

namespace stratsp {

struct DyadicGrid {
  double mu = 0.5;
  int k_min = 0, k_max = 0;
  // Per level (index k - k_min): net centers in admission order, the cube
  // index owning each point, and each cube's parent at the coarser level.
  std::vector<std::vector<int>> centers;
  std::vector<std::vector<int>> owner;
  std::vector<std::vector<int>> parent;  // empty at the coarsest level

  int levels() const { return k_max - k_min + 1; }
  int level_index(int k) const { return k - k_min; }
  double delta(int k) const { return std::pow(mu, k); }

  std::vector<std::vector<int>> cells(int k) const {
    int li = level_index(k);
    std::vector<std::vector<int>> cs(centers[li].size());
    for (int x = 0; x < (int)owner[li].size(); x++) cs[owner[li][x]].push_back(x);
    return cs;
  }
};

struct HKStatus {
  bool pass = false;
  int violations = 0;
  int windows_checked = 0;
  double C = 0.0;  // sup diam(cube) / (mu^{k+2}) over checked windows
  std::vector<std::pair<int, int>> failures;  // (point, level), capped
};

struct GridFamily {
  double mu = 0.5;
  std::uint64_t seed = 0;
  std::vector<DyadicGrid> grids;
  double c1 = std::numeric_limits<double>::infinity();  // inner sandwich constant
  double C1 = 0.0;                                      // outer sandwich constant
  HKStatus hk;
};

namespace detail {

// Base grid from anisotropic coordinate blocks. Each coordinate axis carries
// a dilation weight w; at scale delta the axis circle is partitioned into
// arcs of length >= delta^w, every level refining the previous one, and a
// cube is a product of arcs. Centers are the blocks' minimal corners, so
// coarser centers prefix finer nets, and two distinct centers differ by at
// least delta^w along some axis, which the quasi-norm turns into distance
// >= delta. A weight-2 central coordinate stays unsplit down to the scale
// where the gauge can resolve it, so cube boundaries follow the dilation
// geometry instead of wiggling with the group twist.
inline DyadicGrid build_base_grid(const Group& g, double mu) {
  DyadicGrid grid;
  grid.mu = mu;
  double lmu = std::log(mu);
  grid.k_min = (int)std::floor(std::log(g.diameter) / lmu) - 1;
  grid.k_max = (int)std::ceil(std::log(g.h0) / lmu) + 1;
  if (grid.k_max < grid.k_min) grid.k_max = grid.k_min;

  int n = g.size;
  int axes = (int)g.coords[0].size();
  std::vector<int> weights = g.coord_weights;
  if ((int)weights.size() != axes) weights.assign(axes, 1);
  std::vector<int> extent(axes, 1);
  for (int x = 0; x < n; x++)
    for (int i = 0; i < axes; i++) extent[i] = std::max(extent[i], g.coords[x][i] + 1);

  long long total = 1;
  for (int i = 0; i < axes; i++) total *= extent[i];
  std::vector<int> point_at(total, -1);
  auto flat = [&](const std::vector<int>& c) {
    long long f = 0;
    for (int i = axes - 1; i >= 0; i--) f = f * extent[i] + c[i];
    return f;
  };
  for (int x = 0; x < n; x++) point_at[flat(g.coords[x])] = x;

  // Arc start positions per axis and level; each level refines the last.
  int L = grid.levels();
  std::vector<std::vector<std::vector<int>>> starts(axes);
  for (int i = 0; i < axes; i++) {
    std::vector<int> cur = {0};
    for (int li = 0; li < L; li++) {
      double target = std::pow(grid.delta(grid.k_min + li), weights[i]);
      int tc = target >= (double)extent[i] ? extent[i]
                                           : std::max(1, (int)std::ceil(target - 1e-9));
      std::vector<int> next;
      for (size_t b = 0; b < cur.size(); b++) {
        int s = cur[b];
        int e = b + 1 < cur.size() ? cur[b + 1] : extent[i];
        int W = e - s;
        int m = std::max(1, W / tc);
        for (int j = 0; j < m; j++) next.push_back(s + (int)((long long)W * j / m));
      }
      starts[i].push_back(next);
      cur = std::move(next);
    }
  }

  grid.centers.assign(L, {});
  grid.owner.assign(L, {});
  grid.parent.assign(L, {});
  std::vector<int> prev_rank;  // block flat index -> center rank, coarser level
  std::vector<long long> prev_block_of_point;
  for (int li = 0; li < L; li++) {
    // Coordinate -> arc index per axis, then block flat index per point.
    std::vector<std::vector<int>> arc(axes);
    long long nblocks = 1;
    for (int i = 0; i < axes; i++) {
      arc[i].assign(extent[i], 0);
      const auto& st = starts[i][li];
      for (size_t b = 0; b < st.size(); b++) {
        int e = b + 1 < st.size() ? st[b + 1] : extent[i];
        for (int c = st[b]; c < e; c++) arc[i][c] = (int)b;
      }
      nblocks *= (long long)st.size();
    }
    auto block_of = [&](const std::vector<int>& c) {
      long long f = 0;
      for (int i = axes - 1; i >= 0; i--) f = f * (long long)starts[i][li].size() + arc[i][c[i]];
      return f;
    };

    // Ranks: blocks holding a coarser center first, in the coarser order.
    std::vector<int> rank(nblocks, -1);
    int next_rank = 0;
    if (li > 0) {
      for (int c : grid.centers[li - 1]) {
        long long b = block_of(g.coords[c]);
        rank[b] = next_rank++;
      }
    }
    std::vector<long long> blocks_in_order;
    blocks_in_order.reserve(nblocks);
    for (long long b = 0; b < nblocks; b++)
      if (rank[b] < 0) blocks_in_order.push_back(b);
    for (long long b : blocks_in_order) rank[b] = next_rank++;

    // Centers: the minimal corner of each block, listed by rank.
    std::vector<int> ctr(next_rank, -1);
    {
      std::vector<int> corner(axes);
      std::vector<long long> stack(1, 0);
      // enumerate blocks by mixed radix
      std::vector<int> bidx(axes, 0);
      for (long long b = 0; b < nblocks; b++) {
        long long t = b;
        for (int i = 0; i < axes; i++) {
          bidx[i] = (int)(t % (long long)starts[i][li].size());
          t /= (long long)starts[i][li].size();
        }
        for (int i = 0; i < axes; i++) corner[i] = starts[i][li][bidx[i]];
        int p = point_at[flat(corner)];
        if (p < 0) throw std::logic_error("dyadic: block corner is not a model point");
        ctr[rank[b]] = p;
      }
    }
    grid.centers[li] = std::move(ctr);

    grid.owner[li].resize(n);
    std::vector<long long> bop(n);
    for (int x = 0; x < n; x++) {
      long long b = block_of(g.coords[x]);
      bop[x] = b;
      grid.owner[li][x] = rank[b];
    }

    if (li > 0) {
      grid.parent[li].assign(next_rank, -1);
      for (int x = 0; x < n; x++) grid.parent[li][grid.owner[li][x]] = prev_rank[prev_block_of_point[x]];
    }
    prev_rank = std::move(rank);
    prev_block_of_point = std::move(bop);
  }
  return grid;
}

inline void measure_sandwich(const Group& g, const DyadicGrid& grid, double& c1, double& C1) {
  int n = g.size;
  for (int k = grid.k_min; k <= grid.k_max; k++) {
    int li = grid.level_index(k);
    double delta = grid.delta(k);
    auto cs = grid.cells(k);
    for (int c = 0; c < (int)cs.size(); c++) {
      int z = grid.centers[li][c];
      double out_max = 0.0, in_min = std::numeric_limits<double>::infinity();
      for (int x = 0; x < n; x++) {
        double d = g.dist(z, x);
        if (grid.owner[li][x] == c) {
          out_max = std::max(out_max, d);
        } else {
          in_min = std::min(in_min, d);
        }
      }
      C1 = std::max(C1, out_max / delta);
      if ((int)cs[c].size() < n) c1 = std::min(c1, in_min / delta);
    }
  }
}

inline double cube_diameter(const Group& g, const std::vector<int>& pts) {
  double d = 0.0;
  for (size_t i = 0; i < pts.size(); i++)
    for (size_t j = 0; j < pts.size(); j++) d = std::max(d, g.dist(pts[i], pts[j]));
  return d;
}

}  // namespace detail

// Covering check: for every center z and level k whose radius window
// [mu^{k+2}, mu^{k+1}) meets (0, diam/4], the largest admissible ball around z
// must lie inside z's level-k cube in at least one grid of the family.
inline HKStatus hk_covering_check(const Group& g, const std::vector<DyadicGrid>& grids,
                                  double mu, int failure_cap = 1 << 20) {
  if (grids.empty()) throw std::invalid_argument("hk_covering_check: empty grid family");
  HKStatus st;
  st.pass = true;
  int n = g.size;
  double rcap_global = g.diameter / 4.0;
  int k_min = grids[0].k_min, k_max = grids[0].k_max;

  // Cache cube point lists and diameters per (grid, level) on demand.
  std::vector<std::vector<std::vector<std::vector<int>>>> cells(grids.size());
  std::vector<std::vector<std::vector<double>>> diams(grids.size());
  for (size_t t = 0; t < grids.size(); t++) {
    cells[t].resize(grids[t].levels());
    diams[t].resize(grids[t].levels());
  }

  for (int k = k_min; k <= k_max; k++) {
    double r_lo = std::pow(mu, k + 2);
    double r_hi_open = std::pow(mu, k + 1);
    if (r_lo > rcap_global) continue;  // window above the admissible radius range
    // The union of admissible open balls B(z, r) with r in the window and
    // r <= diam/4 is the open ball of radius min(mu^{k+1}, diam/4).
    double r_eff = std::min(r_hi_open, rcap_global);
    for (size_t t = 0; t < grids.size(); t++) {
      int li = grids[t].level_index(k);
      if (cells[t][li].empty()) {
        cells[t][li] = grids[t].cells(k);
        diams[t][li].assign(cells[t][li].size(), -1.0);
      }
    }
    for (int z = 0; z < n; z++) {
      st.windows_checked++;
      bool covered = false;
      for (size_t t = 0; t < grids.size() && !covered; t++) {
        int li = grids[t].level_index(k);
        int cz = grids[t].owner[li][z];
        bool inside = true;
        for (int x = 0; x < n; x++) {
          if (g.dist(z, x) < r_eff && grids[t].owner[li][x] != cz) {
            inside = false;
            break;
          }
        }
        if (inside) {
          covered = true;
          double& dm = diams[t][li][cz];
          if (dm < 0.0) dm = detail::cube_diameter(g, cells[t][li][cz]);
          st.C = std::max(st.C, dm / r_lo);
        }
      }
      if (!covered) {
        st.pass = false;
        st.violations++;
        if ((int)st.failures.size() < failure_cap) st.failures.push_back({z, k});
      }
    }
  }
  return st;
}

namespace detail {

// Points whose largest admissible ball at level k lies inside their own cube.
// Membership is exactly the per-grid covering test, so a translate family
// that leaves no point shallow at any level passes the exhaustive check.
inline std::vector<char> deep_set(const Group& g, const DyadicGrid& grid, int k, double r_eff) {
  int n = g.size;
  int li = grid.level_index(k);
  std::vector<char> deep(n, 1);
  for (int z = 0; z < n; z++) {
    int cz = grid.owner[li][z];
    for (int x = 0; x < n; x++) {
      if (g.dist(z, x) < r_eff && grid.owner[li][x] != cz) {
        deep[z] = 0;
        break;
      }
    }
  }
  return deep;
}

// Points whose coordinates are divisible by high powers of two come first,
// so greedy net selection reproduces aligned lattices scale by scale and
// ownership boundaries stay straight instead of wiggling with the group
// twist.
inline std::vector<int> alignment_order(const Group& g) {
  int n = g.size;
  std::vector<int> order(n);
  for (int x = 0; x < n; x++) order[x] = x;
  std::vector<long> score(n, 0);
  for (int x = 0; x < n; x++)
    for (int c : g.coords[x]) {
      int v = 0;
      for (int t = c; v < 30 && t % 2 == 0; t /= 2) {
        v++;
        if (t == 0) v = 30;
      }
      score[x] += v;
    }
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return score[a] != score[b] ? score[a] > score[b] : a < b; });
  return order;
}

// Left translate of a grid. The metric is left-invariant, so nets, nesting,
// ownership, and sandwich constants carry over verbatim.
inline DyadicGrid translate_grid(const Group& g, const DyadicGrid& base, int shift) {
  DyadicGrid out;
  out.mu = base.mu;
  out.k_min = base.k_min;
  out.k_max = base.k_max;
  out.parent = base.parent;
  out.centers.resize(base.centers.size());
  out.owner.resize(base.owner.size());
  int unshift = g.inv(shift);
  for (size_t li = 0; li < base.centers.size(); li++) {
    out.centers[li].resize(base.centers[li].size());
    for (size_t c = 0; c < base.centers[li].size(); c++)
      out.centers[li][c] = g.mul(shift, base.centers[li][c]);
    out.owner[li].resize((size_t)g.size);
    for (int x = 0; x < g.size; x++) out.owner[li][x] = base.owner[li][g.mul(unshift, x)];
  }
  return out;
}

}  // namespace detail

// Family construction. One base grid is built from an alignment-first
// admission order (on power-of-two models this makes the nets exact aligned
// lattices), its deep set is computed per level, and the family consists of
// left translates of the base grid chosen greedily, scarcest level first, so
// that every point is deep in some translate at every level. A seed-derived
// global translate randomizes the family without touching the cover.
inline GridFamily build_dyadic_grids(const Group& g, double mu, std::uint64_t seed,
                                     int max_grids = 8) {
  if (!(mu > 0.0) || !(mu < 1.0)) throw std::invalid_argument("dyadic: mu must lie in (0,1)");
  if (max_grids < 1) throw std::invalid_argument("dyadic: max_grids must be positive");
  GridFamily fam;
  fam.mu = mu;
  fam.seed = seed;
  int n = g.size;

  DyadicGrid base = detail::build_one_grid(g, mu, detail::alignment_order(g));

  // Levels whose radius window meets (0, diam/4]; levels with a full deep set
  // constrain nothing and are dropped.
  double rcap = g.diameter / 4.0;
  struct LevelDeep {
    int k = 0;
    long count = 0;
    std::vector<char> deep;
  };
  std::vector<LevelDeep> lv;
  for (int k = base.k_min; k <= base.k_max; k++) {
    if (std::pow(mu, k + 2) > rcap) continue;
    double r_eff = std::min(std::pow(mu, k + 1), rcap);
    LevelDeep ld;
    ld.k = k;
    ld.deep = detail::deep_set(g, base, k, r_eff);
    for (char c : ld.deep) ld.count += c;
    if (ld.count < n) lv.push_back(std::move(ld));
  }
  std::sort(lv.begin(), lv.end(), [](const LevelDeep& a, const LevelDeep& b) {
    return a.count != b.count ? a.count < b.count : a.k < b.k;
  });

  // Greedy cover in translate space: z is covered at level l by translate a
  // iff the point a^{-1} z is deep in the base grid at level l. The scarcest
  // level is completed first; ties prefer total progress, then the smallest
  // translate, which keeps the stagger consecutive on tight levels where the
  // deep residues must partition exactly.
  std::vector<std::vector<int>> cnt(lv.size(), std::vector<int>(n, 0));
  std::vector<int> shifts;
  auto install = [&](int a, int sign) {
    for (size_t m = 0; m < lv.size(); m++)
      for (int d = 0; d < n; d++)
        if (lv[m].deep[d]) cnt[m][g.mul(a, d)] += sign;
  };
  std::vector<long> primary(n, 0);
  bool full = false;
  for (size_t l = 0; l < lv.size() && !full; l++) {
    for (;;) {
      if ((int)shifts.size() >= max_grids) {
        full = true;
        break;
      }
      long miss = 0;
      for (int c : cnt[l]) miss += c == 0;
      if (miss == 0) break;
      for (int a = 0; a < n; a++) {
        primary[a] = 0;
        for (int d = 0; d < n; d++)
          if (lv[l].deep[d] && cnt[l][g.mul(a, d)] == 0) primary[a]++;
      }
      long pmax = *std::max_element(primary.begin(), primary.end());
      if (pmax == 0) break;  // no translate helps; the check below reports honestly
      int best_a = -1;
      long best_total = -1;
      for (int a = 0; a < n; a++) {
        if (primary[a] < pmax) continue;
        long total = 0;
        for (size_t m = 0; m < lv.size(); m++)
          for (int d = 0; d < n; d++)
            if (lv[m].deep[d] && cnt[m][g.mul(a, d)] == 0) total++;
        if (total > best_total) {
          best_total = total;
          best_a = a;
        }
      }
      shifts.push_back(best_a);
      install(best_a, +1);
    }
  }
  if (shifts.empty()) {
    shifts.push_back(0);
    install(0, +1);
  }

  // Swap refinement: greedy overlap can strand a handful of points once the
  // family is full. Replace one shift at a time by whichever translate
  // recovers the most uncovered pairs, until a sweep makes no progress.
  auto miss_total = [&]() {
    long m = 0;
    for (auto& c : cnt)
      for (int v : c) m += v == 0;
    return m;
  };
  for (int sweep = 0; sweep < 64 && miss_total() > 0; sweep++) {
    bool improved = false;
    for (size_t i = 0; i < shifts.size(); i++) {
      install(shifts[i], -1);
      long best_gain = -1;
      int best_a = shifts[i];
      for (int a = 0; a < n; a++) {
        long gain = 0;
        for (size_t m = 0; m < lv.size(); m++)
          for (int d = 0; d < n; d++)
            if (lv[m].deep[d] && cnt[m][g.mul(a, d)] == 0) gain++;
        if (gain > best_gain || (gain == best_gain && a == shifts[i])) {
          best_gain = gain;
          best_a = a;
        }
      }
      if (best_a != shifts[i]) improved = true;
      shifts[i] = best_a;
      install(best_a, +1);
    }
    if (!improved) break;
  }

  Rng rng(seed, 0);
  int b = rng.uniform_int(n);
  for (int a : shifts) fam.grids.push_back(detail::translate_grid(g, base, g.mul(b, a)));

  fam.hk = hk_covering_check(g, fam.grids, mu);
  for (auto& grid : fam.grids) detail::measure_sandwich(g, grid, fam.c1, fam.C1);
  if (!std::isfinite(fam.c1)) fam.c1 = 1.0;  // every cube is all of G (degenerate model)
  return fam;
}

struct AxiomViolation {
  std::string axiom;
  int k = 0, cube = 0, point = 0;
};

struct AxiomReport {
  bool pass = true;
  long checked = 0;
  std::vector<AxiomViolation> violations;

  void flag(const std::string& ax, int k, int cube, int point, int cap = 16) {
    pass = false;
    if ((int)violations.size() < cap) violations.push_back({ax, k, cube, point});
  }
};

// The four cube-system axioms against family constants c1 <= C1:
//   partition  - each level's ownership is a total map onto nonempty cubes,
//                and every net center owns itself;
//   nesting    - cubes refine exactly along parent links;
//   inner-ball - d(z_R, x) < c1 delta_k implies x in R;
//   outer-ball - x in R implies d(z_R, x) <= C1 delta_k.
inline AxiomReport verify_grid_axioms(const Group& g, const DyadicGrid& grid, double c1,
                                      double C1) {
  AxiomReport rep;
  int n = g.size;
  for (int k = grid.k_min; k <= grid.k_max; k++) {
    int li = grid.level_index(k);
    int ncubes = (int)grid.centers[li].size();
    std::vector<int> pop(ncubes, 0);
    for (int x = 0; x < n; x++) {
      rep.checked++;
      int c = grid.owner[li][x];
      if (c < 0 || c >= ncubes) {
        rep.flag("partition", k, c, x);
        continue;
      }
      pop[c]++;
      if (li > 0 && grid.owner[li - 1][x] != grid.parent[li][c]) rep.flag("nesting", k, c, x);
      double ratio = g.dist(grid.centers[li][c], x) / grid.delta(k);
      if (ratio > C1) rep.flag("outer-ball", k, c, x);
    }
    for (int c = 0; c < ncubes; c++) {
      if (pop[c] == 0) rep.flag("partition", k, c, grid.centers[li][c]);
      if (grid.owner[li][grid.centers[li][c]] != c) rep.flag("partition", k, c, grid.centers[li][c]);
    }
    for (int c = 0; c < ncubes; c++) {
      int z = grid.centers[li][c];
      for (int x = 0; x < n; x++) {
        rep.checked++;
        if (g.dist(z, x) / grid.delta(k) < c1 && grid.owner[li][x] != c)
          rep.flag("inner-ball", k, c, x);
      }
    }
  }
  return rep;
}

}  // namespace stratsp
