// Prints the radial profile of the heat kernel e^{-tL} delta_e on a circle
// model at three times, together with mass and positivity diagnostics.
#include <cstdio>

#include "stratsp/group.hpp"
#include "stratsp/spectral.hpp"

int main() {
  using namespace stratsp;
  Group g = make_torus(1, 64);
  SpectralDecomposition dec = spectral_decompose(g, 1.0);
  double lmax = dec.lambda.back();
  std::printf("model=%s size=%d lambda_max=%.6f\n", g.name.c_str(), g.size, lmax);
  for (double c : {1.0, 10.0, 100.0}) {
    double t = c / lmax;
    HeatReport hr = heat_report(dec, t);
    std::printf("\nt=%.6g  mass_err=%.3e  min_p=%.3e  peak_at_identity=%d  "
                "gaussian_slope=%.4f (r2=%.4f)\n",
                t, hr.mass_err, hr.min_p, hr.peak_at_identity ? 1 : 0,
                hr.gaussian_fit.slope, hr.gaussian_fit.r2);
    std::printf("%8s %14s\n", "|x|", "p_t(x)");
    double last = -1.0;
    for (const auto& row : hr.rows) {
      if (row.norm_x == last) continue;  // one row per radius
      last = row.norm_x;
      std::printf("%8.3f %14.6e\n", row.norm_x, row.p);
      if (last > g.diameter / 2.0) break;
    }
  }
  return 0;
}
