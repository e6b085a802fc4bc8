#ifndef PNF_WELFARE_HPP
#define PNF_WELFARE_HPP

#include <optional>
#include <vector>

#include "pnf/equilibrium.hpp"

namespace pnf {

struct OptimalPrices {
  double p_opt = 0.0;    // makes the planner production privately optimal
  double p_paper = 0.0;  // c d / (1+d), reported alongside
  std::optional<double> t_lo;  // absent at d = n-1
  std::optional<double> t_hi;  // absent at d = 0

  std::optional<double> t_mid() const;
};

struct SocialOptimum {
  int d_opt = 0;
  double x_opt = 0.0;
  double welfare_per_user = 0.0;
  double p_opt = 0.0;
  double p_paper = 0.0;
  std::optional<double> t_lo;
  std::optional<double> t_hi;
  double foc_residual = 0.0;
  // some delta_q(d) sits within 1e-9 of gamma/2, so the optimal degree is not unique
  bool boundary_tie = false;
};

// The optimal degree is the number of d in 0..n-2 with delta_q(d) > gamma/2
// (delta_q is decreasing), produced at the planner level x#(d).
SocialOptimum social_optimum(const GameConfig& config, const SolverSettings& settings = {});

// Prices sustaining (x, d) under the priced utility. p_opt = c/(1+d) sets
// the private first-order condition at the planner production; the t-range
// compares one more or one fewer friend at effective cost c - p d.
OptimalPrices optimal_prices(int d_opt, double x_opt, const GameConfig& config,
                             const SolverSettings& settings = {});

/// Builds (x#, d#) on regular(d#) and verifies it under pricing (p_opt, t).
/// Throws TopologyError when n d# is odd.
EquilibriumReport verify_priced_equilibrium(const GameConfig& config, const SocialOptimum& optimum,
                                            double t, const SolverSettings& settings = {});

/// The realized optimum used by verify_priced_equilibrium.
StrategyProfile optimum_profile(const GameConfig& config, const SocialOptimum& optimum);

struct WelfareGap {
  double w_profile = 0.0;
  double w_opt = 0.0;
  double gap = 0.0;
};

WelfareGap welfare_gap(const StrategyProfile& profile, const GameConfig& config,
                       const SolverSettings& settings = {});

struct PricingRow {
  double gamma = 0.0;
  SocialOptimum optimum;
  std::optional<double> t_mid;
};

std::vector<PricingRow> pricing_sweep(const GameConfig& base, const std::vector<double>& gammas,
                                      const SolverSettings& settings = {});

}  // namespace pnf

#endif  // PNF_WELFARE_HPP
