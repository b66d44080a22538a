// Recomputes the Hoelder calibration constant of the predual bound.
#include <cstdio>
#include <cstdlib>

#include "msparse/morrey.hpp"
#include "msparse/preduality.hpp"

int main(int argc, char** argv) {
  using namespace msparse;
  const std::uint64_t seeds = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2000;
  const Grid3 grid(32);
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    const auto [f, g] = holder_sample(grid, seed);
    const double lhs = pairing_integral(f, g);
    for (const WeightSpec& w : holder_weights()) {
      const MorreyParams params{2.0, w, default_scales(grid, w)};
      const double ratio = lhs / (predual_bound(f, 2.0, w).value * gm_norm(g, params).value);
      worst = std::max(worst, ratio);
    }
  }
  std::printf("max ratio %.17g\n", worst);
  return 0;
}
