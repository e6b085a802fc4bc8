#ifndef PNF_NUMERICS_HPP
#define PNF_NUMERICS_HPP

#include <functional>

#include "pnf/model.hpp"

namespace pnf {

/// Root not bracketed, or bisection did not reach tolerance.
class SolverError : public Error {
 public:
  using Error::Error;
};

class NoRootError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// NaN or -inf returned by the function being solved.
class NumericError : public SolverError {
 public:
  using SolverError::SolverError;
};

struct SolverSettings {
  double abs_tol = 1e-10;
  int max_bracket_doublings = 200;
  int max_bisection_iters = 200;
};

struct Root {
  double x = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;

  double width() const { return hi - lo; }
};

// Finds x >= 0 with fn(x) = target for a continuous strictly decreasing fn.
// fn(0) may be +inf. The upper end is found by doubling from `start`, then
// the bracket is bisected to abs_tol. Returns x = 0 when fn(0) == target.
Root solve_decreasing_root(const std::function<double(double)>& fn, double target,
                           const SolverSettings& settings = {}, double start = 1.0);

/// x-bar, the autarkic production level: v'(x-bar) = c.
double max_production(const GameConfig& config, const SolverSettings& settings = {});

// Optimal own production given friends' aggregate s = sum x_j^rho at marginal
// cost c_eff: solves e(z, (z^rho + s)^(1/rho)) = c_eff. Returns 0 when s = 0
// and v'(0) <= c_eff. Throws SolverError when c_eff <= 0 (no finite optimum).
double best_production(double friends_aggregate, double c_eff, const GameConfig& config,
                       const SolverSettings& settings = {});

/// Largest content utility reachable with friends' aggregate s at cost c_eff:
/// max_z v((z^rho + s)^(1/rho)) - c_eff z.
double optimal_content_utility(double friends_aggregate, double c_eff, const GameConfig& config,
                               const SolverSettings& settings = {});

struct SymmetricSolution {
  double x = 0.0;          // x^s(d)
  double perceived = 0.0;  // X^s(d) = (1+d)^(1/rho) x^s(d)
};

/// Symmetric production at common degree d.
SymmetricSolution symmetric_production(int d, const GameConfig& config,
                                       const SolverSettings& settings = {});

// Content-utility gain for a user with `friends` friends (each producing
// `friend_production`) from one more such friend, own production
// re-optimized at cost c_eff on both sides.
double delta_r(int friends, double friend_production, double c_eff, const GameConfig& config,
               const SolverSettings& settings = {});

/// Planner production x#(d): (1+d)^(1/rho) v'((1+d)^(1/rho) x) = c.
double planner_production(int d, const GameConfig& config, const SolverSettings& settings = {});

/// q(d) = v((1+d)^(1/rho) x#(d)) - c x#(d).
double planner_content_utility(int d, const GameConfig& config,
                               const SolverSettings& settings = {});

/// q(d+1) - q(d), for 0 <= d <= n-2.
double delta_q(int d, const GameConfig& config, const SolverSettings& settings = {});

}  // namespace pnf

#endif  // PNF_NUMERICS_HPP
