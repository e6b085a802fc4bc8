#include "pnf/model.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace pnf {

double BenefitSpec::value(double y) const { return scale * std::log1p(y); }

double BenefitSpec::derivative(double y) const { return scale / (1.0 + y); }

double BenefitSpec::second_derivative(double y) const { return -scale / ((1.0 + y) * (1.0 + y)); }

void GameConfig::validate() const {
  if (n < 3) throw ConfigError("population n must be at least 3, got " + std::to_string(n));
  if (!(rho > 0.0 && rho < 1.0))
    throw ConfigError("diversity parameter rho must lie in (0, 1), got " + std::to_string(rho));
  if (!(c > 0.0) || !std::isfinite(c))
    throw ConfigError("production cost c must be positive, got " + std::to_string(c));
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw ConfigError("link cost gamma must be nonnegative, got " + std::to_string(gamma));
  if (!(benefit.scale > 0.0) || !std::isfinite(benefit.scale))
    throw ConfigError("benefit scale must be positive");
  if (!(benefit.alpha() > c))
    throw ConfigError("network not socially valuable: v'(0) = " + std::to_string(benefit.alpha()) +
                      " must exceed c = " + std::to_string(c));
}

SubscriptionMatrix SubscriptionMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  SubscriptionMatrix g(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size())
      throw ProfileError("subscription matrix is not square: row " + std::to_string(i) + " has " +
                         std::to_string(rows[i].size()) + " entries, expected " +
                         std::to_string(rows.size()));
    for (std::size_t j = 0; j < rows.size(); ++j) {
      int v = rows[i][j];
      if (v != 0 && v != 1)
        throw ProfileError("subscription entries must be 0 or 1");
      g.set(i, j, v == 1);
    }
  }
  return g;
}

std::vector<std::size_t> SubscriptionMatrix::outbound(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < n_; ++j)
    if ((*this)(i, j)) out.push_back(j);
  return out;
}

std::vector<std::size_t> SubscriptionMatrix::inbound(std::size_t i) const {
  std::vector<std::size_t> in;
  for (std::size_t j = 0; j < n_; ++j)
    if ((*this)(j, i)) in.push_back(j);
  return in;
}

std::size_t SubscriptionMatrix::outbound_count(std::size_t i) const {
  std::size_t k = 0;
  for (std::size_t j = 0; j < n_; ++j) k += (*this)(i, j);
  return k;
}

std::size_t SubscriptionMatrix::inbound_count(std::size_t i) const {
  std::size_t k = 0;
  for (std::size_t j = 0; j < n_; ++j) k += (*this)(j, i);
  return k;
}

std::size_t SubscriptionMatrix::link_count() const {
  std::size_t k = 0;
  for (auto c : cells_) k += c;
  return k;
}

bool SubscriptionMatrix::has_mutual_link() const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if ((*this)(i, j) && (*this)(j, i)) return true;
  return false;
}

void SubscriptionMatrix::validate() const {
  for (std::size_t i = 0; i < n_; ++i)
    if ((*this)(i, i))
      throw ProfileError("self-subscription at user " + std::to_string(i) +
                         " (diagonal must be zero)");
}

std::vector<std::vector<int>> SubscriptionMatrix::rows() const {
  std::vector<std::vector<int>> out(n_, std::vector<int>(n_, 0));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out[i][j] = (*this)(i, j) ? 1 : 0;
  return out;
}

std::size_t FriendGraph::degree(std::size_t i) const {
  std::size_t d = 0;
  for (std::size_t j = 0; j < n_; ++j) d += (*this)(i, j);
  return d;
}

std::vector<std::size_t> FriendGraph::neighbors(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < n_; ++j)
    if ((*this)(i, j)) out.push_back(j);
  return out;
}

bool FriendGraph::is_symmetric() const {
  for (std::size_t i = 0; i < n_; ++i) {
    if ((*this)(i, i)) return false;
    for (std::size_t j = i + 1; j < n_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  }
  return true;
}

void StrategyProfile::validate() const {
  if (g.size() != x.size())
    throw ProfileError("production vector has " + std::to_string(x.size()) +
                       " entries but subscription matrix is " + std::to_string(g.size()) + "x" +
                       std::to_string(g.size()));
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] >= 0.0) || !std::isfinite(x[i]))
      throw ProfileError("production of user " + std::to_string(i) +
                         " must be a finite nonnegative number");
  g.validate();
}

FriendGraph friend_closure(const SubscriptionMatrix& g) {
  g.validate();
  const std::size_t n = g.size();
  FriendGraph out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out.cells_[i * n + j] = (g(i, j) || g(j, i)) ? 1 : 0;
  return out;
}

FriendGraph friend_closure(const FriendGraph& g) {
  const std::size_t n = g.size();
  FriendGraph out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out.cells_[i * n + j] = (g(i, j) || g(j, i)) ? 1 : 0;
  return out;
}

namespace {

void check_rho(double rho) {
  if (!(rho > 0.0 && rho < 1.0))
    throw ConfigError("diversity parameter rho must lie in (0, 1), got " + std::to_string(rho));
}

struct Consumption {
  double X = 0.0;
  double friends_production = 0.0;
  std::size_t friends = 0;
};

Consumption consumption(const StrategyProfile& profile, const FriendGraph& gbar, std::size_t i,
                        double rho) {
  Consumption out;
  double others = 0.0;
  for (std::size_t j = 0; j < gbar.size(); ++j) {
    if (!gbar(i, j)) continue;
    others += std::pow(profile.x[j], rho);
    out.friends_production += profile.x[j];
    ++out.friends;
  }
  // exact for users whose friends supply nothing
  out.X = others > 0.0 ? std::pow(std::pow(profile.x[i], rho) + others, 1.0 / rho) : profile.x[i];
  return out;
}

void check_user(const StrategyProfile& profile, std::size_t i) {
  if (i >= profile.size())
    throw ProfileError("user index " + std::to_string(i) + " out of range for population " +
                       std::to_string(profile.size()));
}

}  // namespace

double perceived_content(std::span<const double> x, const FriendGraph& gbar, std::size_t i,
                         double rho) {
  check_rho(rho);
  if (i >= x.size() || gbar.size() != x.size())
    throw ProfileError("user index or graph size does not match production vector");
  double others = 0.0;
  for (std::size_t j = 0; j < gbar.size(); ++j)
    if (gbar(i, j)) others += std::pow(x[j], rho);
  return others > 0.0 ? std::pow(std::pow(x[i], rho) + others, 1.0 / rho) : x[i];
}

double marginal_benefit(double x_i, double X_i, const BenefitSpec& benefit, double rho) {
  check_rho(rho);
  if (x_i <= 0.0) return X_i <= 0.0 ? benefit.alpha() : kInf;
  return benefit.derivative(X_i) * std::pow(X_i / x_i, 1.0 - rho);
}

double content_utility(const StrategyProfile& profile, std::size_t i, const GameConfig& config) {
  check_user(profile, i);
  check_rho(config.rho);
  const auto gbar = friend_closure(profile.g);
  const auto cons = consumption(profile, gbar, i, config.rho);
  return config.benefit.value(cons.X) - config.c * profile.x[i];
}

double utility(const StrategyProfile& profile, std::size_t i, const GameConfig& config) {
  return content_utility(profile, i, config) -
         config.gamma * static_cast<double>(profile.g.outbound_count(i));
}

double priced_utility(const StrategyProfile& profile, std::size_t i, const GameConfig& config,
                      const PricingScheme& pricing) {
  check_user(profile, i);
  check_rho(config.rho);
  const auto gbar = friend_closure(profile.g);
  const auto cons = consumption(profile, gbar, i, config.rho);
  const double out = static_cast<double>(profile.g.outbound_count(i));
  const double in = static_cast<double>(profile.g.inbound_count(i));
  return config.benefit.value(cons.X) - config.c * profile.x[i] -
         pricing.p * cons.friends_production +
         pricing.p * profile.x[i] * static_cast<double>(cons.friends) -
         (config.gamma + pricing.t) * out + pricing.t * in;
}

double social_welfare(const StrategyProfile& profile, const GameConfig& config) {
  check_rho(config.rho);
  const auto gbar = friend_closure(profile.g);
  double w = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const auto cons = consumption(profile, gbar, i, config.rho);
    w += config.benefit.value(cons.X) - config.c * profile.x[i] -
         config.gamma * static_cast<double>(profile.g.outbound_count(i));
  }
  return w;
}

double symmetric_welfare(const SymmetricProfile& s, const GameConfig& config) {
  check_rho(config.rho);
  const double X = std::pow(1.0 + s.d, 1.0 / config.rho) * s.x;
  return config.n *
         (config.benefit.value(X) - config.c * s.x - 0.5 * s.d * config.gamma);
}

namespace {

void link(SubscriptionMatrix& g, int i, int j) { g.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j), true); }

void circulant(SubscriptionMatrix& g, int n, int k) {
  for (int i = 0; i < n; ++i)
    for (int s = 1; s <= k; ++s) link(g, i, (i + s) % n);
}

}  // namespace

SubscriptionMatrix make_topology(const TopologySpec& spec, int n) {
  if (n < 1) throw TopologyError("topology needs at least one node");
  SubscriptionMatrix g(static_cast<std::size_t>(n));
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, topology::Empty>) {
        } else if constexpr (std::is_same_v<T, topology::Complete>) {
          for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) link(g, i, j);
        } else if constexpr (std::is_same_v<T, topology::Star>) {
          for (int i = 1; i < n; ++i) link(g, i, 0);
        } else if constexpr (std::is_same_v<T, topology::Line>) {
          for (int i = 0; i + 1 < n; ++i) link(g, i, i + 1);
        } else if constexpr (std::is_same_v<T, topology::Ring>) {
          if (t.k < 0 || 2 * t.k > n - 1)
            throw TopologyError("ring(k) needs 0 <= 2k <= n-1, got k=" + std::to_string(t.k) +
                                ", n=" + std::to_string(n));
          circulant(g, n, t.k);
        } else if constexpr (std::is_same_v<T, topology::Regular>) {
          if (t.d < 0 || t.d > n - 1)
            throw TopologyError("regular(d) needs 0 <= d <= n-1, got d=" + std::to_string(t.d));
          if ((static_cast<long>(n) * t.d) % 2 != 0)
            throw TopologyError("regular(" + std::to_string(t.d) + ") on " + std::to_string(n) +
                                " nodes violates handshake parity: n*d = " +
                                std::to_string(static_cast<long>(n) * t.d) + " is odd");
          circulant(g, n, t.d / 2);
          if (t.d % 2 == 1)
            for (int i = 0; i < n / 2; ++i) link(g, i, i + n / 2);
        } else if constexpr (std::is_same_v<T, topology::TwoRing>) {
          if (t.n_h < 2 || t.n_h > n)
            throw TopologyError("two_ring needs 2 <= n_h <= n, got n_h=" + std::to_string(t.n_h));
          if (t.k_hi < 0 || 2 * t.k_hi > t.n_h - 1)
            throw TopologyError("two_ring needs 0 <= 2 k_hi <= n_h-1");
          if (t.k_lo < 1 || t.k_lo > t.n_h)
            throw TopologyError("two_ring needs 1 <= k_lo <= n_h");
          for (int i = 0; i < t.n_h; ++i)
            for (int s = 1; s <= t.k_hi; ++s) link(g, i, (i + s) % t.n_h);
          for (int j = t.n_h; j < n; ++j) {
            const int m = j - t.n_h;
            for (int s = 0; s < t.k_lo; ++s) link(g, j, (m + s) % t.n_h);
          }
        } else if constexpr (std::is_same_v<T, topology::Random>) {
          if (!(t.density >= 0.0 && t.density <= 1.0))
            throw TopologyError("random density must lie in [0, 1]");
          std::mt19937_64 rng(t.seed);
          std::bernoulli_distribution coin(t.density);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              if (i != j && coin(rng)) link(g, i, j);
        }
      },
      spec);
  return g;
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

int to_int(const std::string& s) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw TopologyError("bad integer in topology spec: '" + s + "'");
  }
}

double to_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw TopologyError("bad number in topology spec: '" + s + "'");
  }
}

}  // namespace

TopologySpec parse_topology(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.empty()) throw TopologyError("empty topology spec");
  const auto& kind = parts[0];
  const auto arity = [&](std::size_t want) {
    if (parts.size() != want + 1)
      throw TopologyError("topology '" + kind + "' takes " + std::to_string(want) +
                          " parameter(s): '" + text + "'");
  };
  if (kind == "empty" || kind == "complete" || kind == "star" || kind == "line") {
    arity(0);
    if (kind == "empty") return topology::Empty{};
    if (kind == "complete") return topology::Complete{};
    if (kind == "star") return topology::Star{};
    return topology::Line{};
  }
  if (kind == "ring") {
    arity(1);
    return topology::Ring{to_int(parts[1])};
  }
  if (kind == "regular") {
    arity(1);
    return topology::Regular{to_int(parts[1])};
  }
  if (kind == "two_ring") {
    arity(3);
    return topology::TwoRing{to_int(parts[1]), to_int(parts[2]), to_int(parts[3])};
  }
  if (kind == "random") {
    arity(2);
    return topology::Random{to_double(parts[1]), static_cast<std::uint64_t>(to_int(parts[2]))};
  }
  throw TopologyError("unknown topology '" + kind + "'");
}

std::string to_string(const TopologySpec& spec) {
  return std::visit(
      [](const auto& t) -> std::string {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, topology::Empty>) return "empty";
        if constexpr (std::is_same_v<T, topology::Complete>) return "complete";
        if constexpr (std::is_same_v<T, topology::Star>) return "star";
        if constexpr (std::is_same_v<T, topology::Line>) return "line";
        if constexpr (std::is_same_v<T, topology::Ring>) return "ring:" + std::to_string(t.k);
        if constexpr (std::is_same_v<T, topology::Regular>) return "regular:" + std::to_string(t.d);
        if constexpr (std::is_same_v<T, topology::TwoRing>)
          return "two_ring:" + std::to_string(t.n_h) + ":" + std::to_string(t.k_hi) + ":" +
                 std::to_string(t.k_lo);
        if constexpr (std::is_same_v<T, topology::Random>) {
          char buf[64];
          std::snprintf(buf, sizeof buf, "random:%.12g:%llu", t.density,
                        static_cast<unsigned long long>(t.seed));
          return buf;
        }
      },
      spec);
}

}  // namespace pnf
