#ifndef PNF_EQUILIBRIUM_HPP
#define PNF_EQUILIBRIUM_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pnf/model.hpp"
#include "pnf/numerics.hpp"

namespace pnf {

/// Production iteration exceeded its sweep budget.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Utility margin separating a profitable deviation from numerical noise.
inline constexpr double kStrictnessMargin = 1e-9;
/// Allowed gap between a user's production and its first-order optimum.
inline constexpr double kProductionTolerance = 1e-8;

struct FixedPointSettings {
  double tolerance = 1e-11;
  int max_sweeps = 10000;
  double damping = 0.5;
  SolverSettings solver{1e-13, 200, 200};
};

// Solves the simultaneous first-order conditions x_i = z_i(x_-i) for a fixed
// subscription graph by damped Gauss-Seidel; the damping factor is halved
// when a sweep overshoots (residual grows and most steps change sign). Starts from x-bar unless `initial` is
// given. Throws ConvergenceError after max_sweeps.
std::vector<double> production_fixed_point(const SubscriptionMatrix& g, const GameConfig& config,
                                           const FixedPointSettings& settings = {},
                                           const std::vector<double>* initial = nullptr);

struct BestResponse {
  double x = 0.0;                     // +inf when production is unbounded
  std::vector<std::size_t> outbound;  // sorted ascending
  double utility = 0.0;               // +inf when unbounded
};

// Exact best response of user i to the others' strategies. Without a price on
// content, utility depends on the outbound set only through its size and the
// aggregate of the targets' x^rho, so the best set of each size is the top
// producers (ties to the lower index). With a content price the set also
// matters through the targets' total production; candidates are then grouped
// by production level and every count vector over levels is enumerated.
BestResponse best_response(std::size_t i, const StrategyProfile& profile, const GameConfig& config,
                           const std::optional<PricingScheme>& pricing = std::nullopt,
                           const SolverSettings& settings = {});

enum class Verdict { strict_equilibrium, not_equilibrium };
enum class WitnessKind { production, link_set };
// Link deviations by how the outbound count changes.
enum class WitnessDirection { none, add, drop, swap };

struct DeviationWitness {
  std::size_t user = 0;
  WitnessKind kind = WitnessKind::production;
  WitnessDirection direction = WitnessDirection::none;
  double new_x = 0.0;
  std::vector<std::size_t> new_outbound;
  double utility_gain = 0.0;
  std::string reason;
};

enum class ProfileClass { symmetric, asymmetric, none };

struct Classification {
  ProfileClass kind = ProfileClass::none;
  int levels = 0;  // distinct production levels
  int n_h = 0;     // users at the top level
  double x_hi = 0.0;
  std::optional<double> x_lo;  // only with exactly two levels
  std::optional<int> k_hi;     // subscriptions of each high producer to highs, if uniform
  std::optional<int> k_lo;     // subscriptions of each low producer to highs, if uniform
  std::optional<int> degree;   // common degree of a symmetric profile
  bool degrees_equal = false;
  // Two levels, uniform k_hi and k_lo, and every subscription points at a
  // high producer.
  bool two_type = false;
};

struct EquilibriumReport {
  Verdict verdict = Verdict::not_equilibrium;
  std::vector<DeviationWitness> witnesses;
  Classification classification;
  bool priced = false;
  PricingScheme pricing{};
};

// Strict-Nash check. A profile passes iff no user has a deviation gaining
// more than kStrictnessMargin and every production sits within
// kProductionTolerance of its unique first-order optimum. Mutual links, zero
// productions and (without pricing) productions above x-bar are rejected
// outright with their own witnesses.
EquilibriumReport verify_strict_nash(const StrategyProfile& profile, const GameConfig& config,
                                     const std::optional<PricingScheme>& pricing = std::nullopt,
                                     const SolverSettings& settings = {});

struct GammaInterval {
  int d = 0;
  double gamma_lo = 0.0;
  double gamma_hi = kInf;
  double x_s = 0.0;
  double X_s = 0.0;

  double width() const { return gamma_hi - gamma_lo; }
};

/// Link-cost interval sustaining the symmetric profile (x^s(d), d):
/// gamma_lo = delta_r(d, x^s(d)) (0 at d = n-1) and
/// gamma_hi = delta_r(d-1, x^s(d)) (+inf at d = 0).
GammaInterval gamma_region(int d, const GameConfig& config, const SolverSettings& settings = {});

struct GammaTable {
  std::vector<GammaInterval> rows;  // d = 0..n-1
  double mean_width = 0.0;          // over d = 1..n-2
};

GammaTable gamma_region_table(const GameConfig& config, const SolverSettings& settings = {});

Classification classify_profile(const StrategyProfile& profile, const GameConfig& config);

struct AuditCheck {
  std::string name;
  bool passed = true;
  bool applicable = true;
  std::string detail;  // the violating users, when failed
};

// Necessary conditions for an asymmetric equilibrium: link structure of high
// and low producers, the x-bar bound and perceived-content balance, the
// three user types, and influencer dominance in two-type profiles.
std::vector<AuditCheck> structural_audit(const StrategyProfile& profile, const GameConfig& config,
                                         const SolverSettings& settings = {});

bool audit_passed(const std::vector<AuditCheck>& checks);

struct SearchSettings {
  int max_sweeps = 2000;
  double density_lo = 0.1;
  double density_hi = 0.5;
  SolverSettings solver{};
};

struct SearchResult {
  StrategyProfile profile;
  EquilibriumReport report;
  int sweeps = 0;
  double initial_density = 0.0;
};

// Monte-Carlo equilibrium search: a random profile (link density uniform in
// [density_lo, density_hi], everyone at x-bar) evolves by asynchronous exact
// best responses in a seeded random order. A link change is taken only when
// it gains more than kStrictnessMargin. After a sweep without link changes the
// productions are settled at their fixed point; a sweep that changes nothing
// ends the run and the profile is returned only if it verifies as strict.
std::optional<SearchResult> search_equilibrium(const GameConfig& config, std::uint64_t seed,
                                               const SearchSettings& settings = {});

struct ScalingRow {
  int n = 0;
  std::uint64_t seed = 0;
  bool found = false;        // a verified asymmetric equilibrium
  bool symmetric = false;    // verified, but symmetric
  int n_h = 0;
  double fraction = 0.0;
  double x_hi = 0.0;
  std::optional<double> x_lo;
  std::optional<int> k_hi;
  std::optional<int> k_lo;
  bool two_type = false;
  bool audit_passed = false;
  double welfare_per_user = 0.0;
};

struct ScalingSummary {
  int n = 0;
  int found = 0;
  double mean_fraction = 0.0;
  double min_fraction = 0.0;
};

struct ScalingResult {
  std::vector<ScalingRow> rows;  // ordered by (n, seed)
  std::vector<ScalingSummary> per_n;
};

// Runs search_equilibrium for seeds 0..seeds_per_n-1 at each population size
// in n_list, with every other parameter taken from `base`. Seeds run in
// parallel when `threads` > 1; rows are merged in seed order.
ScalingResult influencer_scaling(const GameConfig& base, const std::vector<int>& n_list,
                                 int seeds_per_n, const SearchSettings& settings = {},
                                 int threads = 1);

const char* to_string(Verdict v);
const char* to_string(WitnessKind k);
const char* to_string(WitnessDirection d);
const char* to_string(ProfileClass c);

}  // namespace pnf

#endif  // PNF_EQUILIBRIUM_HPP
