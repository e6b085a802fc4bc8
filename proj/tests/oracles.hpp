#ifndef PNF_TESTS_ORACLES_HPP
#define PNF_TESTS_ORACLES_HPP

// Reference computations written without the library's solvers: fixed-count
// bisection on the derivative of the payoff and brute-force enumeration of
// every outbound subset. Slow, and only meant for small n.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "pnf/model.hpp"

namespace oracle {

inline double v(double y, double beta) { return beta * std::log1p(y); }
inline double vp(double y, double beta) { return beta / (1.0 + y); }

// argmax_z v((z^rho + s)^(1/rho)) - c z by bisection on the derivative over
// [0, beta/c], which contains every maximizer.
inline double best_z(double s, double c, double rho, double beta) {
  if (s == 0.0 && vp(0.0, beta) <= c) return 0.0;
  double lo = 0.0;
  double hi = beta / c;
  for (int it = 0; it < 300; ++it) {
    const double z = 0.5 * (lo + hi);
    const double X = std::pow(std::pow(z, rho) + s, 1.0 / rho);
    const double slope = vp(X, beta) * std::pow(X / z, 1.0 - rho) - c;
    (slope > 0.0 ? lo : hi) = z;
  }
  return 0.5 * (lo + hi);
}

inline double content_value(double s, double c, double rho, double beta) {
  const double z = best_z(s, c, rho, beta);
  return v(std::pow(std::pow(z, rho) + s, 1.0 / rho), beta) - c * z;
}

// x-bar for log1p: beta / (1 + x) = c.
inline double x_bar(double c, double beta) { return beta / c - 1.0; }

struct Choice {
  double utility = -1e300;
  double z = 0.0;
  unsigned mask = 0;  // bit j: subscribe to j
};

// Best outbound subset of user i over all 2^(n-1) subsets, production
// re-optimized for each.
inline Choice brute_best(const pnf::StrategyProfile& p, std::size_t i, const pnf::GameConfig& cfg) {
  const std::size_t n = p.size();
  const double beta = cfg.benefit.scale;
  Choice best;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (mask & (1u << i)) continue;
    double s = 0.0;
    int links = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const bool out = mask & (1u << j);
      links += out;
      if (j != i && (out || p.g(j, i))) s += std::pow(p.x[j], cfg.rho);
    }
    const double u = content_value(s, cfg.c, cfg.rho, beta) - cfg.gamma * links;
    if (u > best.utility) best = {u, best_z(s, cfg.c, cfg.rho, beta), mask};
  }
  return best;
}

inline double current_utility(const pnf::StrategyProfile& p, std::size_t i,
                              const pnf::GameConfig& cfg) {
  double s = std::pow(p.x[i], cfg.rho);
  int links = 0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (j == i) continue;
    links += p.g(i, j);
    if (p.g(i, j) || p.g(j, i)) s += std::pow(p.x[j], cfg.rho);
  }
  return v(std::pow(s, 1.0 / cfg.rho), cfg.benefit.scale) - cfg.c * p.x[i] - cfg.gamma * links;
}

// Strict equilibrium by enumeration: no mutual links, positive productions at
// most x-bar, each production at its optimum, and no subset doing better.
inline bool strict(const pnf::StrategyProfile& p, const pnf::GameConfig& cfg) {
  const std::size_t n = p.size();
  const double beta = cfg.benefit.scale;
  for (std::size_t i = 0; i < n; ++i) {
    double friends = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (p.g(i, j) && p.g(j, i)) return false;
      if (p.g(i, j) || p.g(j, i)) friends += std::pow(p.x[j], cfg.rho);
    }
    if (!(p.x[i] > 0.0) || p.x[i] > x_bar(cfg.c, beta) + 1e-8) return false;
    if (std::abs(p.x[i] - best_z(friends, cfg.c, cfg.rho, beta)) > 1e-8) return false;
    if (brute_best(p, i, cfg).utility > current_utility(p, i, cfg) + 1e-9) return false;
  }
  return true;
}

// Damped Jacobi iteration of the first-order conditions on a fixed graph.
inline std::vector<double> fixed_point(const pnf::SubscriptionMatrix& g, const pnf::GameConfig& cfg,
                                       int iters = 20000) {
  const std::size_t n = g.size();
  std::vector<double> x(n, x_bar(cfg.c, cfg.benefit.scale));
  for (int it = 0; it < iters; ++it) {
    std::vector<double> next(n);
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i && (g(i, j) || g(j, i))) s += std::pow(x[j], cfg.rho);
      next[i] = 0.5 * x[i] + 0.5 * best_z(s, cfg.c, cfg.rho, cfg.benefit.scale);
      diff = std::max(diff, std::abs(next[i] - x[i]));
    }
    x = next;
    if (diff < 1e-13) break;
  }
  return x;
}

}  // namespace oracle

#endif  // PNF_TESTS_ORACLES_HPP
