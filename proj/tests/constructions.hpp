#ifndef PNF_TESTS_CONSTRUCTIONS_HPP
#define PNF_TESTS_CONSTRUCTIONS_HPP

#include <cmath>

#include "oracles.hpp"
#include "pnf/model.hpp"

namespace construct {

// Two-ring profile with productions from the reduced two-level system: highs
// see 2 k_hi highs and m lows, lows see k_lo highs. The reduced equation has
// several roots, so the high production is bracketed by the caller.
inline pnf::StrategyProfile two_type(int n, int n_h, int k_hi, int k_lo,
                                    const pnf::GameConfig& config, double lo, double hi) {
  const int m = (n - n_h) * k_lo / n_h;
  const double rho = config.rho;
  const auto low_of = [&](double xh) {
    return oracle::best_z(k_lo * std::pow(xh, rho), config.c, rho, 1.0);
  };
  const auto gap = [&](double xh) {
    const double s = 2 * k_hi * std::pow(xh, rho) + m * std::pow(low_of(xh), rho);
    return xh - oracle::best_z(s, config.c, rho, 1.0);
  };
  const bool rising = gap(lo) < 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    ((gap(mid) < 0.0) == rising ? lo : hi) = mid;
  }
  const double xh = 0.5 * (lo + hi);
  pnf::StrategyProfile p;
  p.g = pnf::make_topology(pnf::topology::TwoRing{n_h, k_hi, k_lo}, n);
  for (int i = 0; i < n; ++i) p.x.push_back(i < n_h ? xh : low_of(xh));
  return p;
}

}  // namespace construct

#endif  // PNF_TESTS_CONSTRUCTIONS_HPP
