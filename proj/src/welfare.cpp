#include "pnf/welfare.hpp"

#include <cmath>
#include <string>

namespace pnf {

std::optional<double> OptimalPrices::t_mid() const {
  if (!t_lo || !t_hi) return std::nullopt;
  return 0.5 * (*t_lo + *t_hi);
}

SocialOptimum social_optimum(const GameConfig& config, const SolverSettings& settings) {
  config.validate();
  SocialOptimum out;
  const double half = 0.5 * config.gamma;
  for (int d = 0; d <= config.n - 2; ++d) {
    const double dq = delta_q(d, config, settings);
    if (dq > half) ++out.d_opt;
    if (std::abs(dq - half) <= 1e-9) out.boundary_tie = true;
  }
  out.x_opt = planner_production(out.d_opt, config, settings);
  out.welfare_per_user = symmetric_welfare({out.x_opt, out.d_opt}, config) / config.n;
  const double spread = std::pow(1.0 + out.d_opt, 1.0 / config.rho);
  out.foc_residual = std::abs(spread * config.benefit.derivative(spread * out.x_opt) - config.c);

  const auto prices = optimal_prices(out.d_opt, out.x_opt, config, settings);
  out.p_opt = prices.p_opt;
  out.p_paper = prices.p_paper;
  out.t_lo = prices.t_lo;
  out.t_hi = prices.t_hi;
  return out;
}

OptimalPrices optimal_prices(int d_opt, double x_opt, const GameConfig& config,
                             const SolverSettings& settings) {
  config.validate();
  if (d_opt < 0 || d_opt > config.n - 1)
    throw ConfigError("optimal degree " + std::to_string(d_opt) + " outside [0, n-1]");
  OptimalPrices out;
  if (d_opt == 0) return out;

  // Symmetric private condition v'(X)(1+d)^((1-rho)/rho) = c - p d, with the
  // planner condition (1+d)^(1/rho) v'(X) = c, gives c/(1+d) = c - p d.
  out.p_opt = config.c / (1.0 + d_opt);
  out.p_paper = config.c * d_opt / (1.0 + d_opt);
  const double c_eff = config.c - out.p_opt * d_opt;
  const double transfer = out.p_opt * x_opt + config.gamma;
  if (d_opt < config.n - 1)
    out.t_lo = delta_r(d_opt, x_opt, c_eff, config, settings) - transfer;
  out.t_hi = delta_r(d_opt - 1, x_opt, c_eff, config, settings) - transfer;
  return out;
}

StrategyProfile optimum_profile(const GameConfig& config, const SocialOptimum& optimum) {
  const int n = config.n;
  const int d = optimum.d_opt;
  if ((n * d) % 2 != 0) {
    throw TopologyError("no " + std::to_string(d) + "-regular graph on n = " + std::to_string(n) +
                        " users (n*d must be even); nearest feasible n: " +
                        std::to_string(n - 1) + " or " + std::to_string(n + 1));
  }
  StrategyProfile profile;
  profile.g = make_topology(topology::Regular{d}, static_cast<std::size_t>(n));
  profile.x.assign(static_cast<std::size_t>(n), optimum.x_opt);
  return profile;
}

EquilibriumReport verify_priced_equilibrium(const GameConfig& config, const SocialOptimum& optimum,
                                            double t, const SolverSettings& settings) {
  const auto profile = optimum_profile(config, optimum);
  return verify_strict_nash(profile, config, PricingScheme{optimum.p_opt, t}, settings);
}

WelfareGap welfare_gap(const StrategyProfile& profile, const GameConfig& config,
                       const SolverSettings& settings) {
  WelfareGap out;
  out.w_profile = social_welfare(profile, config);
  out.w_opt = social_optimum(config, settings).welfare_per_user * config.n;
  out.gap = out.w_opt - out.w_profile;
  return out;
}

std::vector<PricingRow> pricing_sweep(const GameConfig& base, const std::vector<double>& gammas,
                                      const SolverSettings& settings) {
  std::vector<PricingRow> rows;
  for (double gamma : gammas) {
    GameConfig config = base;
    config.gamma = gamma;
    PricingRow row;
    row.gamma = gamma;
    row.optimum = social_optimum(config, settings);
    if (row.optimum.t_lo && row.optimum.t_hi)
      row.t_mid = 0.5 * (*row.optimum.t_lo + *row.optimum.t_hi);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pnf
