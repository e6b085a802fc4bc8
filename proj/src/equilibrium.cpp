#include "pnf/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <random>
#include <sstream>

namespace pnf {

namespace {

double power(double x, double rho) { return x > 0.0 ? std::pow(x, rho) : 0.0; }

double level_tolerance(double x) { return 1e-8 * std::max(1.0, std::abs(x)); }

}  // namespace

std::vector<double> production_fixed_point(const SubscriptionMatrix& g, const GameConfig& config,
                                           const FixedPointSettings& settings,
                                           const std::vector<double>* initial) {
  const auto gbar = friend_closure(g);
  const std::size_t n = g.size();
  std::vector<double> x;
  if (initial != nullptr) {
    if (initial->size() != n) throw ProfileError("initial production has the wrong size");
    x = *initial;
  }

  std::vector<std::vector<std::size_t>> friends(n);
  for (std::size_t i = 0; i < n; ++i) friends[i] = gbar.neighbors(i);

  if (initial == nullptr) {
    // in-place sweeps drift off the symmetric solution of a regular graph
    const bool regular = std::all_of(friends.begin(), friends.end(),
                                     [&](const auto& f) { return f.size() == friends[0].size(); });
    x.assign(n, regular && n > 0
                    ? symmetric_production(static_cast<int>(friends[0].size()), config, settings.solver).x
                    : max_production(config, settings.solver));
  }

  double omega = settings.damping;
  double previous = kInf;
  double residual = kInf;
  std::vector<double> step(n, 0.0);
  for (int sweep = 0; sweep < settings.max_sweeps; ++sweep) {
    residual = 0.0;
    std::size_t flips = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (auto j : friends[i]) s += power(x[j], config.rho);
      const double delta = best_production(s, config.c, config, settings.solver) - x[i];
      residual = std::max(residual, std::abs(delta));
      if (delta * step[i] < 0.0) ++flips;
      step[i] = delta;
      x[i] += omega * delta;
    }
    if (residual <= settings.tolerance) return x;
    // overshooting: the residual grows while most users reverse direction
    if (residual > previous && 2 * flips > n) omega = std::max(omega * 0.5, 1.0 / 64.0);
    previous = residual;
  }
  throw ConvergenceError("production fixed point did not converge in " +
                             std::to_string(settings.max_sweeps) + " sweeps (residual " +
                             std::to_string(residual) + ")",
                         residual);
}

namespace {

struct Option {
  std::size_t k = 0;  // links to candidates
  double x = 0.0;
  double utility = -kInf;
  std::vector<std::size_t> outbound;
};

// Everything about user i's situation that the other users fix.
struct UserContext {
  std::size_t user = 0;
  std::vector<std::size_t> inbound;     // users subscribing to i
  std::vector<std::size_t> candidates;  // possible new targets, best producers first
  double inbound_aggregate = 0.0;
  double inbound_production = 0.0;
  double link_price = 0.0;  // gamma + t
  PricingScheme pricing{};
  // With gamma + t < 0 a subscription pays for itself, so linking back to
  // every inbound subscriber is optimal.
  bool resubscribe = false;
};

UserContext make_context(std::size_t i, const StrategyProfile& profile, const GameConfig& config,
                         const PricingScheme& pricing) {
  UserContext ctx;
  ctx.user = i;
  ctx.pricing = pricing;
  ctx.link_price = config.gamma + pricing.t;
  ctx.resubscribe = ctx.link_price < 0.0;
  const auto& g = profile.g;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (j == i) continue;
    if (g(j, i)) {
      ctx.inbound.push_back(j);
      ctx.inbound_aggregate += power(profile.x[j], config.rho);
      ctx.inbound_production += profile.x[j];
    } else {
      ctx.candidates.push_back(j);
    }
  }
  std::stable_sort(ctx.candidates.begin(), ctx.candidates.end(),
                   [&](std::size_t a, std::size_t b) { return profile.x[a] > profile.x[b]; });
  return ctx;
}

struct Evaluation {
  double x = 0.0;
  double utility = 0.0;
};

// Utility of linking to a candidate set with the given x^rho aggregate, total
// production and size, own production re-optimized.
Evaluation evaluate(const UserContext& ctx, double aggregate, double production, std::size_t k,
                    const GameConfig& config, const SolverSettings& settings) {
  const double p = ctx.pricing.p;
  const double t = ctx.pricing.t;
  const double friends = static_cast<double>(ctx.inbound.size() + k);
  const double c_eff = config.c - p * friends;
  const double s = ctx.inbound_aggregate + aggregate;
  const double in = static_cast<double>(ctx.inbound.size());
  const double links = static_cast<double>(k) + (ctx.resubscribe ? in : 0.0);
  if (!(c_eff > 0.0)) {
    if (config.benefit.unbounded()) return {kInf, kInf};
    throw SolverError("effective production cost is not positive");
  }
  const double z = best_production(s, c_eff, config, settings);
  const double X = std::pow(power(z, config.rho) + s, 1.0 / config.rho);
  const double u = config.benefit.value(X) - config.c * z -
                   p * (ctx.inbound_production + production) + p * z * friends -
                   ctx.link_price * links + t * in;
  return {z, u};
}

std::vector<std::size_t> finish_outbound(const UserContext& ctx, std::vector<std::size_t> chosen) {
  if (ctx.resubscribe) chosen.insert(chosen.end(), ctx.inbound.begin(), ctx.inbound.end());
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

struct Deviations {
  std::vector<std::optional<Option>> by_k;  // best option per candidate-link count
  Option best;
};

constexpr std::size_t kMaxPricedCombinations = std::size_t{1} << 20;

// Best option for every outbound size. Sizes whose utility provably cannot
// exceed `floor` may be skipped (left empty).
Deviations enumerate_deviations(const UserContext& ctx, const StrategyProfile& profile,
                                const GameConfig& config, const SolverSettings& settings,
                                double floor) {
  const auto& x = profile.x;
  const std::size_t m = ctx.candidates.size();
  Deviations out;
  out.by_k.resize(m + 1);

  const auto consider = [&](Option opt) {
    if (opt.utility > out.best.utility) out.best = opt;
    auto& slot = out.by_k[opt.k];
    if (!slot || opt.utility > slot->utility) slot = std::move(opt);
  };

  if (ctx.pricing.p == 0.0) {
    std::vector<double> prefix(m + 1, 0.0);
    for (std::size_t r = 0; r < m; ++r)
      prefix[r + 1] = prefix[r] + power(x[ctx.candidates[r]], config.rho);

    // Content utility is increasing in the aggregate, so linking everyone
    // bounds what any larger set can earn before link costs.
    double ceiling = kInf;
    if (ctx.link_price > 0.0) {
      ceiling = optimal_content_utility(ctx.inbound_aggregate + prefix[m], config.c, config,
                                        settings) +
                ctx.pricing.t * static_cast<double>(ctx.inbound.size());
    }
    for (std::size_t k = 0; k <= m; ++k) {
      if (k > 0 && ceiling - ctx.link_price * static_cast<double>(k) <
                       std::min(out.best.utility, floor))
        break;
      const auto ev = evaluate(ctx, prefix[k], 0.0, k, config, settings);
      std::vector<std::size_t> chosen(ctx.candidates.begin(),
                                      ctx.candidates.begin() + static_cast<std::ptrdiff_t>(k));
      consider(Option{k, ev.x, ev.utility, finish_outbound(ctx, std::move(chosen))});
    }
    return out;
  }

  // Priced: group candidates into production levels.
  std::vector<std::vector<std::size_t>> levels;
  for (auto j : ctx.candidates) {
    if (!levels.empty() && std::abs(x[levels.back().front()] - x[j]) <= 1e-12 * std::max(1.0, x[j]))
      levels.back().push_back(j);
    else
      levels.push_back({j});
  }
  for (auto& level : levels) std::sort(level.begin(), level.end());

  std::size_t combinations = 1;
  for (const auto& level : levels) {
    combinations *= level.size() + 1;
    if (combinations > kMaxPricedCombinations)
      throw SolverError("priced best response: too many distinct production levels to enumerate");
  }

  std::vector<std::size_t> counts(levels.size(), 0);
  for (std::size_t combo = 0; combo < combinations; ++combo) {
    std::size_t rest = combo;
    double aggregate = 0.0;
    double production = 0.0;
    std::size_t k = 0;
    for (std::size_t l = 0; l < levels.size(); ++l) {
      counts[l] = rest % (levels[l].size() + 1);
      rest /= levels[l].size() + 1;
      const double xl = x[levels[l].front()];
      aggregate += static_cast<double>(counts[l]) * power(xl, config.rho);
      production += static_cast<double>(counts[l]) * xl;
      k += counts[l];
    }
    const auto ev = evaluate(ctx, aggregate, production, k, config, settings);
    if (out.by_k[k] && !(ev.utility > out.by_k[k]->utility)) continue;
    std::vector<std::size_t> chosen;
    for (std::size_t l = 0; l < levels.size(); ++l)
      chosen.insert(chosen.end(), levels[l].begin(),
                    levels[l].begin() + static_cast<std::ptrdiff_t>(counts[l]));
    consider(Option{k, ev.x, ev.utility, finish_outbound(ctx, std::move(chosen))});
  }
  return out;
}

}  // namespace

BestResponse best_response(std::size_t i, const StrategyProfile& profile, const GameConfig& config,
                           const std::optional<PricingScheme>& pricing,
                           const SolverSettings& settings) {
  profile.validate();
  if (i >= profile.size()) throw ProfileError("user index out of range");
  const auto ctx = make_context(i, profile, config, pricing.value_or(PricingScheme{}));
  auto dev = enumerate_deviations(ctx, profile, config, settings, -kInf);
  return BestResponse{dev.best.x, std::move(dev.best.outbound), dev.best.utility};
}

namespace {

struct CurrentChoice {
  std::size_t k = 0;  // links to candidates
  std::vector<std::size_t> outbound;
  double utility = 0.0;      // as played
  double optimal_x = 0.0;    // first-order optimum for the current links
  double optimal_utility = 0.0;
};

CurrentChoice current_choice(const UserContext& ctx, const StrategyProfile& profile,
                             const GameConfig& config, const SolverSettings& settings) {
  const std::size_t i = ctx.user;
  CurrentChoice cur;
  cur.outbound = profile.g.outbound(i);
  double aggregate = 0.0;
  double production = 0.0;
  std::size_t mutual = 0;
  for (auto j : cur.outbound) {
    if (profile.g(j, i)) {
      ++mutual;
      continue;
    }
    aggregate += power(profile.x[j], config.rho);
    production += profile.x[j];
    ++cur.k;
  }

  const double p = ctx.pricing.p;
  const double t = ctx.pricing.t;
  const double friends = static_cast<double>(ctx.inbound.size() + cur.k);
  const double links = static_cast<double>(cur.outbound.size());
  const double in = static_cast<double>(ctx.inbound.size());
  const double s = ctx.inbound_aggregate + aggregate;
  const auto payoff = [&](double z) {
    const double X = std::pow(power(z, config.rho) + s, 1.0 / config.rho);
    return config.benefit.value(X) - config.c * z - p * (ctx.inbound_production + production) +
           p * z * friends - ctx.link_price * links + t * in;
  };
  cur.utility = payoff(profile.x[i]);
  const double c_eff = config.c - p * friends;
  if (c_eff > 0.0) {
    cur.optimal_x = best_production(s, c_eff, config, settings);
    cur.optimal_utility = payoff(cur.optimal_x);
  } else {
    cur.optimal_x = kInf;
    cur.optimal_utility = kInf;
  }
  (void)mutual;
  return cur;
}

std::string describe(const std::vector<std::size_t>& users) {
  std::ostringstream os;
  os << '[';
  for (std::size_t r = 0; r < users.size(); ++r) os << (r ? "," : "") << users[r];
  os << ']';
  return os.str();
}

}  // namespace

EquilibriumReport verify_strict_nash(const StrategyProfile& profile, const GameConfig& config,
                                     const std::optional<PricingScheme>& pricing,
                                     const SolverSettings& settings) {
  config.validate();
  profile.validate();
  if (profile.size() != static_cast<std::size_t>(config.n))
    throw ProfileError("profile has " + std::to_string(profile.size()) + " users, config has n = " +
                       std::to_string(config.n));

  EquilibriumReport report;
  report.priced = pricing.has_value();
  report.pricing = pricing.value_or(PricingScheme{});
  const auto& price = report.pricing;
  const double x_bar = max_production(config, settings);
  const auto& g = profile.g;

  for (std::size_t i = 0; i < profile.size(); ++i) {
    const auto ctx = make_context(i, profile, config, price);
    const auto cur = current_choice(ctx, profile, config, settings);

    // immediate rejections
    std::vector<std::size_t> mutual;
    for (auto j : cur.outbound)
      if (g(j, i)) mutual.push_back(j);
    // rejected even when links are free: dropping the duplicate ties, so the
    // current strategy is not the unique best response
    if (!mutual.empty()) {
      DeviationWitness w;
      w.user = i;
      w.kind = WitnessKind::link_set;
      w.direction = WitnessDirection::drop;
      w.new_x = profile.x[i];
      for (auto j : cur.outbound)
        if (!g(j, i)) w.new_outbound.push_back(j);
      w.utility_gain = std::max(0.0, ctx.link_price) * static_cast<double>(mutual.size());
      w.reason = "mutual link to " + describe(mutual) + " is paid twice";
      report.witnesses.push_back(std::move(w));
    }

    const auto production_witness = [&](std::string reason) {
      DeviationWitness w;
      w.user = i;
      w.kind = WitnessKind::production;
      w.new_x = cur.optimal_x;
      w.new_outbound = cur.outbound;
      w.utility_gain = cur.optimal_utility - cur.utility;
      w.reason = std::move(reason);
      report.witnesses.push_back(std::move(w));
    };
    if (profile.x[i] <= 0.0) {
      production_witness("zero production");
    } else if (!report.priced && profile.x[i] > x_bar + kProductionTolerance) {
      production_witness("production above x-bar");
    } else if (!(std::abs(profile.x[i] - cur.optimal_x) <= kProductionTolerance)) {
      production_witness(std::isinf(cur.optimal_x) ? "unbounded production"
                                                   : "production off its first-order optimum");
    }

    const auto dev = enumerate_deviations(ctx, profile, config, settings,
                                          cur.utility + kStrictnessMargin);
    const auto link_witness = [&](const Option& opt, WitnessDirection dir, double gain) {
      DeviationWitness w;
      w.user = i;
      w.kind = WitnessKind::link_set;
      w.direction = dir;
      w.new_x = opt.x;
      w.new_outbound = opt.outbound;
      w.utility_gain = gain;
      w.reason = std::string(to_string(dir)) + " links" +
                 (std::isinf(opt.x) ? " with unbounded production" : "");
      report.witnesses.push_back(std::move(w));
    };
    const Option* best_add = nullptr;
    const Option* best_drop = nullptr;
    for (std::size_t k = 0; k < dev.by_k.size(); ++k) {
      if (!dev.by_k[k]) continue;
      const Option& opt = *dev.by_k[k];
      if (k < cur.k && (!best_drop || opt.utility > best_drop->utility)) best_drop = &opt;
      if (k > cur.k && (!best_add || opt.utility > best_add->utility)) best_add = &opt;
    }
    if (best_drop && best_drop->utility - cur.utility > kStrictnessMargin)
      link_witness(*best_drop, WitnessDirection::drop, best_drop->utility - cur.utility);
    if (best_add && best_add->utility - cur.utility > kStrictnessMargin)
      link_witness(*best_add, WitnessDirection::add, best_add->utility - cur.utility);
    if (cur.k < dev.by_k.size() && dev.by_k[cur.k]) {
      const Option& same = *dev.by_k[cur.k];
      if (same.utility - cur.optimal_utility > kStrictnessMargin)
        link_witness(same, WitnessDirection::swap, same.utility - cur.utility);
    }
  }

  report.verdict =
      report.witnesses.empty() ? Verdict::strict_equilibrium : Verdict::not_equilibrium;
  report.classification = classify_profile(profile, config);
  return report;
}

GammaInterval gamma_region(int d, const GameConfig& config, const SolverSettings& settings) {
  config.validate();
  const auto sym = symmetric_production(d, config, settings);
  GammaInterval out;
  out.d = d;
  out.x_s = sym.x;
  out.X_s = sym.perceived;
  out.gamma_lo = d == config.n - 1 ? 0.0 : delta_r(d, sym.x, config.c, config, settings);
  out.gamma_hi = d == 0 ? kInf : delta_r(d - 1, sym.x, config.c, config, settings);
  return out;
}

GammaTable gamma_region_table(const GameConfig& config, const SolverSettings& settings) {
  GammaTable table;
  double total = 0.0;
  int count = 0;
  for (int d = 0; d < config.n; ++d) {
    table.rows.push_back(gamma_region(d, config, settings));
    if (d >= 1 && d <= config.n - 2) {
      total += table.rows.back().width();
      ++count;
    }
  }
  table.mean_width = count > 0 ? total / count : 0.0;
  return table;
}

namespace {

// Users grouped by production level, highest level first.
std::vector<std::vector<std::size_t>> production_levels(const std::vector<double>& x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] > x[b]; });
  std::vector<std::vector<std::size_t>> levels;
  for (auto i : order) {
    if (!levels.empty() && x[levels.back().front()] - x[i] <= level_tolerance(x[i]))
      levels.back().push_back(i);
    else
      levels.push_back({i});
  }
  for (auto& level : levels) std::sort(level.begin(), level.end());
  return levels;
}

}  // namespace

Classification classify_profile(const StrategyProfile& profile, const GameConfig& config) {
  (void)config;
  profile.validate();
  Classification out;
  const std::size_t n = profile.size();
  if (n == 0) return out;

  const auto gbar = friend_closure(profile.g);
  const std::size_t d0 = gbar.degree(0);
  out.degrees_equal = true;
  for (std::size_t i = 1; i < n; ++i)
    if (gbar.degree(i) != d0) out.degrees_equal = false;

  const auto levels = production_levels(profile.x);
  out.levels = static_cast<int>(levels.size());
  out.n_h = static_cast<int>(levels.front().size());
  out.x_hi = profile.x[levels.front().front()];
  if (levels.size() == 1) {
    out.kind = ProfileClass::symmetric;
    if (out.degrees_equal) out.degree = static_cast<int>(d0);
    return out;
  }
  out.kind = ProfileClass::asymmetric;
  if (levels.size() != 2) return out;

  out.x_lo = profile.x[levels[1].front()];
  std::vector<bool> high(n, false);
  for (auto i : levels[0]) high[i] = true;
  const auto uniform_count = [&](const std::vector<std::size_t>& group) -> std::optional<int> {
    std::optional<int> k;
    for (auto i : group) {
      int count = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (high[j] && profile.g(i, j)) ++count;
      if (k && *k != count) return std::nullopt;
      k = count;
    }
    return k;
  };
  out.k_hi = uniform_count(levels[0]);
  out.k_lo = uniform_count(levels[1]);

  bool only_to_high = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (profile.g(i, j) && !high[j]) only_to_high = false;
  out.two_type = out.k_hi.has_value() && out.k_lo.has_value() && only_to_high;
  return out;
}

std::vector<AuditCheck> structural_audit(const StrategyProfile& profile, const GameConfig& config,
                                         const SolverSettings& settings) {
  config.validate();
  profile.validate();
  const std::size_t n = profile.size();
  const auto gbar = friend_closure(profile.g);
  const auto& g = profile.g;
  const auto levels = production_levels(profile.x);
  std::vector<bool> high(n, false);
  for (auto i : levels.front()) high[i] = true;
  const double x_hi = profile.x[levels.front().front()];
  const auto cls = classify_profile(profile, config);
  const bool asymmetric = cls.kind == ProfileClass::asymmetric;

  std::vector<AuditCheck> checks;
  const auto pair = [](std::size_t a, std::size_t b) {
    return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
  };
  const auto add = [&](std::string name, bool applicable, std::string failure) {
    AuditCheck c;
    c.name = std::move(name);
    c.applicable = applicable;
    c.passed = !applicable || failure.empty();
    if (!c.passed) c.detail = std::move(failure);
    checks.push_back(std::move(c));
  };

  {  // somebody is missing a friend
    bool complete = true;
    for (std::size_t i = 0; i < n && complete; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && !gbar(i, j)) {
          complete = false;
          break;
        }
    add("not_complete", asymmetric, complete ? "friend graph is complete" : "");
  }
  {
    std::string fail;
    for (std::size_t j = 0; j < n && fail.empty(); ++j) {
      if (high[j]) continue;
      bool subscribes = false;
      for (std::size_t i = 0; i < n; ++i)
        if (high[i] && g(j, i)) subscribes = true;
      if (!subscribes) fail = "low producer " + std::to_string(j) + " subscribes to no high producer";
    }
    add("low_subscribes_to_high", asymmetric, fail);
  }
  add("at_least_two_high_producers", asymmetric,
      levels.front().size() >= 2 ? "" : "only user " + std::to_string(levels.front().front()) +
                                            " is at the top production level");
  {
    std::string fail;
    for (std::size_t i = 0; i < n && fail.empty(); ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (high[i] && !high[j] && g(i, j)) {
          fail = "high producer subscribes to low producer " + pair(i, j);
          break;
        }
    add("high_never_subscribes_to_low", asymmetric, fail);
  }
  {
    std::string fail;
    for (auto i : levels.front()) {
      bool misses = false;
      for (auto k : levels.front())
        if (k != i && !gbar(i, k)) misses = true;
      if (!misses) {
        fail = "high producer " + std::to_string(i) + " is friends with every other high producer";
        break;
      }
    }
    add("high_misses_a_high", asymmetric, fail);
  }
  const double x_bar = max_production(config, settings);
  add("top_production_below_x_bar", asymmetric,
      x_hi < x_bar ? "" : "top production " + std::to_string(x_hi) + " >= x-bar");
  {
    std::vector<double> Xr(n);
    for (std::size_t i = 0; i < n; ++i)
      Xr[i] = std::pow(perceived_content(profile.x, gbar, i, config.rho), config.rho);
    const double bound = std::pow(x_hi, config.rho);
    std::string fail;
    for (std::size_t i = 0; i < n && fail.empty(); ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (high[i] && !high[j] && std::abs(Xr[i] - Xr[j]) >= bound) {
          fail = "|X^rho| gap " + std::to_string(std::abs(Xr[i] - Xr[j])) + " >= x_hi^rho " +
                 std::to_string(bound) + " for " + pair(i, j);
          break;
        }
    add("balance_bound", asymmetric, fail);
  }
  {  // a low producer that follows another low producer follows every high one
    std::string fail;
    for (std::size_t j = 0; j < n && fail.empty(); ++j) {
      if (high[j]) continue;
      bool follows_low = false;
      bool follows_all_high = true;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == j) continue;
        if (!high[k] && g(j, k)) follows_low = true;
        if (high[k] && !g(j, k)) follows_all_high = false;
      }
      if (follows_low && !follows_all_high)
        fail = "low producer " + std::to_string(j) +
               " subscribes to a low producer without subscribing to all high producers";
    }
    add("three_user_types", asymmetric, fail);
  }
  {
    const bool applicable = asymmetric && cls.two_type;
    std::string fail;
    if (applicable) {
      double min_high = kInf;
      double max_low = -kInf;
      std::size_t out_high = 0;
      std::size_t out_low = std::numeric_limits<std::size_t>::max();
      for (std::size_t i = 0; i < n; ++i) {
        const double u = utility(profile, i, config);
        if (high[i]) {
          min_high = std::min(min_high, u);
          out_high = std::max(out_high, g.outbound_count(i));
        } else {
          max_low = std::max(max_low, u);
          out_low = std::min(out_low, g.outbound_count(i));
        }
      }
      if (!(min_high > max_low))
        fail = "influencer utility " + std::to_string(min_high) + " <= subscriber utility " +
               std::to_string(max_low);
      add("influencer_utility_dominates", true, fail);
      add("influencer_fewer_subscriptions", true,
          out_high < out_low ? "" : "an influencer keeps " + std::to_string(out_high) +
                                        " subscriptions, a subscriber " + std::to_string(out_low));
    } else {
      add("influencer_utility_dominates", false, "");
      add("influencer_fewer_subscriptions", false, "");
    }
  }
  return checks;
}

bool audit_passed(const std::vector<AuditCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.passed; });
}

std::optional<SearchResult> search_equilibrium(const GameConfig& config, std::uint64_t seed,
                                               const SearchSettings& settings) {
  config.validate();
  const std::size_t n = static_cast<std::size_t>(config.n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  SearchResult result;
  result.initial_density =
      settings.density_lo + (settings.density_hi - settings.density_lo) * unit(rng);
  auto& profile = result.profile;
  profile.g = SubscriptionMatrix(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && unit(rng) < result.initial_density) profile.g.set(i, j, true);
  profile.x.assign(n, max_production(config, settings.solver));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const PricingScheme none{};
  FixedPointSettings polish;
  polish.solver = settings.solver;
  polish.damping = 1.0;

  for (int sweep = 1; sweep <= settings.max_sweeps; ++sweep) {
    std::shuffle(order.begin(), order.end(), rng);
    bool links_changed = false;
    double moved = 0.0;
    for (auto i : order) {
      const auto ctx = make_context(i, profile, config, none);
      const auto cur = current_choice(ctx, profile, config, settings.solver);
      const auto dev = enumerate_deviations(ctx, profile, config, settings.solver,
                                            cur.optimal_utility + kStrictnessMargin);
      if (dev.best.utility > cur.optimal_utility + kStrictnessMargin &&
          dev.best.outbound != cur.outbound) {
        for (std::size_t j = 0; j < n; ++j) profile.g.set(i, j, false);
        for (auto j : dev.best.outbound) profile.g.set(i, j, true);
        moved = std::max(moved, std::abs(dev.best.x - profile.x[i]));
        profile.x[i] = dev.best.x;
        links_changed = true;
      } else {
        moved = std::max(moved, std::abs(cur.optimal_x - profile.x[i]));
        profile.x[i] = cur.optimal_x;
      }
    }
    result.sweeps = sweep;
    if (links_changed) continue;
    if (moved > 1e-9) {
      try {
        profile.x = production_fixed_point(profile.g, config, polish, &profile.x);
      } catch (const ConvergenceError&) {
        // plain best-response sweeps keep going
      }
      continue;
    }
    result.report = verify_strict_nash(profile, config, std::nullopt, settings.solver);
    if (result.report.verdict == Verdict::strict_equilibrium) return result;
    return std::nullopt;
  }
  return std::nullopt;
}

ScalingResult influencer_scaling(const GameConfig& base, const std::vector<int>& n_list,
                                 int seeds_per_n, const SearchSettings& settings, int threads) {
  struct Job {
    int n;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (int n : n_list)
    for (int s = 0; s < seeds_per_n; ++s) jobs.push_back({n, static_cast<std::uint64_t>(s)});

  const auto run = [&](const Job& job) {
    GameConfig config = base;
    config.n = job.n;
    ScalingRow row;
    row.n = job.n;
    row.seed = job.seed;
    const auto found = search_equilibrium(config, job.seed, settings);
    if (!found) return row;
    const auto& cls = found->report.classification;
    row.welfare_per_user = social_welfare(found->profile, config) / job.n;
    if (cls.kind != ProfileClass::asymmetric) {
      row.symmetric = true;
      return row;
    }
    row.found = true;
    row.n_h = cls.n_h;
    row.fraction = static_cast<double>(cls.n_h) / job.n;
    row.x_hi = cls.x_hi;
    row.x_lo = cls.x_lo;
    row.k_hi = cls.k_hi;
    row.k_lo = cls.k_lo;
    row.two_type = cls.two_type;
    row.audit_passed = audit_passed(structural_audit(found->profile, config, settings.solver));
    return row;
  };

  ScalingResult result;
  result.rows.resize(jobs.size());
  if (threads <= 1) {
    for (std::size_t r = 0; r < jobs.size(); ++r) result.rows[r] = run(jobs[r]);
  } else {
    for (std::size_t start = 0; start < jobs.size(); start += static_cast<std::size_t>(threads)) {
      std::vector<std::future<ScalingRow>> batch;
      const std::size_t stop = std::min(jobs.size(), start + static_cast<std::size_t>(threads));
      for (std::size_t r = start; r < stop; ++r)
        batch.push_back(std::async(std::launch::async, run, jobs[r]));
      for (std::size_t r = start; r < stop; ++r) result.rows[r] = batch[r - start].get();
    }
  }

  for (int n : n_list) {
    ScalingSummary s;
    s.n = n;
    double total = 0.0;
    s.min_fraction = kInf;
    for (const auto& row : result.rows) {
      if (row.n != n || !row.found) continue;
      ++s.found;
      total += row.fraction;
      s.min_fraction = std::min(s.min_fraction, row.fraction);
    }
    s.mean_fraction = s.found > 0 ? total / s.found : 0.0;
    if (s.found == 0) s.min_fraction = 0.0;
    result.per_n.push_back(s);
  }
  return result;
}

const char* to_string(Verdict v) {
  return v == Verdict::strict_equilibrium ? "strict_equilibrium" : "not_equilibrium";
}

const char* to_string(WitnessKind k) {
  return k == WitnessKind::production ? "production" : "link_set";
}

const char* to_string(WitnessDirection d) {
  switch (d) {
    case WitnessDirection::add: return "add";
    case WitnessDirection::drop: return "drop";
    case WitnessDirection::swap: return "swap";
    case WitnessDirection::none: break;
  }
  return "none";
}

const char* to_string(ProfileClass c) {
  switch (c) {
    case ProfileClass::symmetric: return "symmetric";
    case ProfileClass::asymmetric: return "asymmetric";
    case ProfileClass::none: break;
  }
  return "none";
}

}  // namespace pnf
