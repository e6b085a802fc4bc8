#include "pnf/numerics.hpp"

#include <cmath>
#include <string>

namespace pnf {

Root solve_decreasing_root(const std::function<double(double)>& fn, double target,
                           const SolverSettings& settings, double start) {
  if (!(settings.abs_tol > 0.0)) throw SolverError("abs_tol must be positive");
  if (!(start > 0.0) || !std::isfinite(start)) start = 1.0;

  const auto eval = [&](double x) {
    const double y = fn(x);
    if (std::isnan(y) || y == -kInf)
      throw NumericError("non-finite function value at x = " + std::to_string(x));
    return y;
  };

  const double f0 = eval(0.0);
  if (f0 == target) return Root{0.0, 0.0, 0.0, 0};
  if (f0 < target)
    throw NoRootError("no root: f(0) = " + std::to_string(f0) + " is already below target " +
                      std::to_string(target));

  double lo = 0.0;
  double hi = start;
  double f_lo = f0;
  double f_hi = eval(hi);
  int doublings = 0;
  while (f_hi > target) {
    if (++doublings > settings.max_bracket_doublings)
      throw NoRootError("no root bracketed after " + std::to_string(settings.max_bracket_doublings) +
                        " doublings");
    lo = hi;
    f_lo = f_hi;
    hi *= 2.0;
    f_hi = eval(hi);
  }

  int iters = 0;
  while (hi - lo > settings.abs_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // adjacent doubles
    if (++iters > settings.max_bisection_iters)
      throw SolverError("bisection did not reach tolerance in " +
                        std::to_string(settings.max_bisection_iters) + " iterations");
    const double f_mid = eval(mid);
    if (f_mid > target) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  // final secant step inside the bracket; falls back to the midpoint
  double x = 0.5 * (lo + hi);
  if (std::isfinite(f_lo) && f_lo > f_hi) {
    const double s = lo + (f_lo - target) * (hi - lo) / (f_lo - f_hi);
    if (s >= lo && s <= hi) x = s;
  }
  return Root{x, lo, hi, iters};
}

double max_production(const GameConfig& config, const SolverSettings& settings) {
  const auto& v = config.benefit;
  if (!(config.c > 0.0)) throw ConfigError("production cost c must be positive");
  if (!(v.alpha() > config.c))
    throw ConfigError("network not socially valuable: v'(0) = " + std::to_string(v.alpha()) +
                      " must exceed c = " + std::to_string(config.c));
  return solve_decreasing_root([&](double x) { return v.derivative(x); }, config.c, settings).x;
}

namespace {

void check_rho(double rho) {
  if (!(rho > 0.0 && rho < 1.0))
    throw ConfigError("diversity parameter rho must lie in (0, 1), got " + std::to_string(rho));
}

}  // namespace

double best_production(double friends_aggregate, double c_eff, const GameConfig& config,
                       const SolverSettings& settings) {
  check_rho(config.rho);
  if (!(friends_aggregate >= 0.0)) throw SolverError("friends' aggregate must be nonnegative");
  if (!(c_eff > 0.0))
    throw SolverError("effective marginal cost " + std::to_string(c_eff) +
                      " is not positive: production is unbounded");
  const double rho = config.rho;
  const auto& v = config.benefit;
  if (friends_aggregate == 0.0) {
    if (v.alpha() <= c_eff) return 0.0;
    return solve_decreasing_root([&](double z) { return v.derivative(z); }, c_eff, settings).x;
  }
  const auto e = [&](double z) {
    if (z <= 0.0) return kInf;
    const double X = std::pow(std::pow(z, rho) + friends_aggregate, 1.0 / rho);
    return v.derivative(X) * std::pow(X / z, 1.0 - rho);
  };
  return solve_decreasing_root(e, c_eff, settings).x;
}

double optimal_content_utility(double friends_aggregate, double c_eff, const GameConfig& config,
                               const SolverSettings& settings) {
  const double z = best_production(friends_aggregate, c_eff, config, settings);
  const double X = std::pow(std::pow(z, config.rho) + friends_aggregate, 1.0 / config.rho);
  return config.benefit.value(X) - c_eff * z;
}

SymmetricSolution symmetric_production(int d, const GameConfig& config,
                                       const SolverSettings& settings) {
  check_rho(config.rho);
  if (d < 0 || d > config.n - 1)
    throw ConfigError("degree " + std::to_string(d) + " outside [0, n-1]");
  const double rho = config.rho;
  const double spread = std::pow(1.0 + d, 1.0 / rho);
  const double multiplier = config.exponent == ExponentConvention::appendix
                                ? std::pow(1.0 + d, 1.0 - rho)
                                : std::pow(1.0 + d, (1.0 - rho) / rho);
  const auto& v = config.benefit;
  if (!(v.alpha() * multiplier > config.c))
    throw ConfigError("v'(0) must exceed c for a positive symmetric production");
  const double x = solve_decreasing_root(
                       [&](double x) { return v.derivative(spread * x) * multiplier; }, config.c,
                       settings)
                       .x;
  return {x, spread * x};
}

double delta_r(int friends, double friend_production, double c_eff, const GameConfig& config,
               const SolverSettings& settings) {
  check_rho(config.rho);
  if (friends < 0) throw ConfigError("friend count must be nonnegative");
  if (!(friend_production >= 0.0)) throw ConfigError("friend production must be nonnegative");
  const double unit = std::pow(friend_production, config.rho);
  return optimal_content_utility((friends + 1) * unit, c_eff, config, settings) -
         optimal_content_utility(friends * unit, c_eff, config, settings);
}

double planner_production(int d, const GameConfig& config, const SolverSettings& settings) {
  check_rho(config.rho);
  if (d < 0 || d > config.n - 1)
    throw ConfigError("degree " + std::to_string(d) + " outside [0, n-1]");
  const double spread = std::pow(1.0 + d, 1.0 / config.rho);
  const auto& v = config.benefit;
  if (!(spread * v.alpha() > config.c))
    throw ConfigError("v'(0) must exceed c for a positive planner production");
  return solve_decreasing_root([&](double x) { return spread * v.derivative(spread * x); },
                               config.c, settings)
      .x;
}

double planner_content_utility(int d, const GameConfig& config, const SolverSettings& settings) {
  const double x = planner_production(d, config, settings);
  return config.benefit.value(std::pow(1.0 + d, 1.0 / config.rho) * x) - config.c * x;
}

double delta_q(int d, const GameConfig& config, const SolverSettings& settings) {
  if (d < 0 || d > config.n - 2)
    throw ConfigError("delta_q degree " + std::to_string(d) + " outside [0, n-2]");
  return planner_content_utility(d + 1, config, settings) -
         planner_content_utility(d, config, settings);
}

}  // namespace pnf
