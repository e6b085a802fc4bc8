#ifndef PNF_MODEL_HPP
#define PNF_MODEL_HPP

// Game primitives for production and network formation with heterogeneous
// content: user i picks a production level x_i >= 0 and a set of outbound
// subscriptions; friendship is the symmetric closure of subscriptions and
// content flows both ways across a friendship.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace pnf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid game parameters (population, costs, diversity, benefit).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed strategy profile (shape, diagonal, negative production).
class ProfileError : public Error {
 public:
  using Error::Error;
};

/// Infeasible topology request, e.g. odd n*d for a d-regular graph.
class TopologyError : public Error {
 public:
  using Error::Error;
};

/// Malformed JSON input.
class ParseError : public Error {
 public:
  using Error::Error;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class BenefitKind { log1p };

// v(y) = scale * log(1 + y). v(0) = 0, increasing, strictly concave and
// v'(y) -> 0, so the production problem always has an interior optimum
// whenever v'(0) exceeds the marginal cost.
struct BenefitSpec {
  BenefitKind kind = BenefitKind::log1p;
  double scale = 1.0;

  double value(double y) const;
  double derivative(double y) const;
  double second_derivative(double y) const;
  /// v'(0), the largest marginal benefit.
  double alpha() const { return derivative(0.0); }
  bool unbounded() const { return true; }
};

// Symmetric first-order condition multiplier. The default follows from the
// marginal benefit definition, (1+d)^((1-rho)/rho); `appendix` reproduces the
// alternative (1+d)^(1-rho) for side-by-side comparison.
enum class ExponentConvention { marginal_benefit, appendix };

struct GameConfig {
  int n = 10;
  double c = 0.1;
  double gamma = 0.5;
  double rho = 0.8;
  BenefitSpec benefit{};
  ExponentConvention exponent = ExponentConvention::marginal_benefit;

  /// Throws ConfigError unless n >= 3, 0 < rho < 1, c > 0, gamma >= 0,
  /// scale > 0 and v'(0) > c.
  void validate() const;
};

/// Per-unit content price p and per-subscription transfer t. Either may be
/// negative (a subsidy).
struct PricingScheme {
  double p = 0.0;
  double t = 0.0;
};

// Directed 0/1 subscription matrix, row-major. g(i, j) == 1 iff i subscribes
// to j.
class SubscriptionMatrix {
 public:
  SubscriptionMatrix() = default;
  explicit SubscriptionMatrix(std::size_t n) : n_(n), cells_(n * n, 0) {}

  /// Builds from nested rows; throws ProfileError if not square or not 0/1.
  static SubscriptionMatrix from_rows(const std::vector<std::vector<int>>& rows);

  std::size_t size() const { return n_; }
  bool operator()(std::size_t i, std::size_t j) const { return cells_[i * n_ + j] != 0; }
  void set(std::size_t i, std::size_t j, bool on) { cells_[i * n_ + j] = on ? 1 : 0; }

  std::vector<std::size_t> outbound(std::size_t i) const;
  std::vector<std::size_t> inbound(std::size_t i) const;
  std::size_t outbound_count(std::size_t i) const;
  std::size_t inbound_count(std::size_t i) const;
  std::size_t link_count() const;
  bool has_mutual_link() const;

  /// Throws ProfileError on a nonzero diagonal entry.
  void validate() const;

  std::vector<std::vector<int>> rows() const;

  bool operator==(const SubscriptionMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> cells_;
};

// Undirected friendship: gbar_ij = max(g_ij, g_ji).
class FriendGraph {
 public:
  FriendGraph() = default;
  explicit FriendGraph(std::size_t n) : n_(n), cells_(n * n, 0) {}

  std::size_t size() const { return n_; }
  bool operator()(std::size_t i, std::size_t j) const { return cells_[i * n_ + j] != 0; }
  std::size_t degree(std::size_t i) const;
  std::vector<std::size_t> neighbors(std::size_t i) const;
  bool is_symmetric() const;

  bool operator==(const FriendGraph&) const = default;

 private:
  friend FriendGraph friend_closure(const SubscriptionMatrix& g);
  friend FriendGraph friend_closure(const FriendGraph& g);
  std::size_t n_ = 0;
  std::vector<std::uint8_t> cells_;
};

struct StrategyProfile {
  std::vector<double> x;
  SubscriptionMatrix g;

  std::size_t size() const { return x.size(); }
  /// Throws ProfileError on size mismatch, negative or non-finite production,
  /// or a nonzero diagonal.
  void validate() const;
};

/// Common production x and common degree d.
struct SymmetricProfile {
  double x = 0.0;
  int d = 0;
};

FriendGraph friend_closure(const SubscriptionMatrix& g);
/// Closure of an already symmetric graph is the graph itself.
FriendGraph friend_closure(const FriendGraph& g);

/// X_i = (x_i^rho + sum over friends x_j^rho)^(1/rho).
double perceived_content(std::span<const double> x, const FriendGraph& gbar, std::size_t i,
                         double rho);

/// e(x_i, X_i) = v'(X_i) (X_i / x_i)^(1-rho). At x_i = 0 returns v'(0) when
/// X_i = 0 (isolated) and +infinity when friends supply content.
double marginal_benefit(double x_i, double X_i, const BenefitSpec& benefit, double rho);

/// v(X_i) - c x_i - gamma |N_i(g)|. Link cost is charged on outbound
/// subscriptions only.
double utility(const StrategyProfile& profile, std::size_t i, const GameConfig& config);

/// v(X_i) - c x_i.
double content_utility(const StrategyProfile& profile, std::size_t i, const GameConfig& config);

// Subscriber pays gamma + t per outbound link and p per unit of each friend's
// content; the subscribed side receives t per inbound subscription and
// p x_i from each friend. With p = t = 0 this is `utility`.
double priced_utility(const StrategyProfile& profile, std::size_t i, const GameConfig& config,
                      const PricingScheme& pricing);

/// Sum of utilities.
double social_welfare(const StrategyProfile& profile, const GameConfig& config);

/// n [v((1+d)^(1/rho) x) - c x - (d/2) gamma] for a symmetric profile
/// without mutual links.
double symmetric_welfare(const SymmetricProfile& s, const GameConfig& config);

// Topologies. Orientation: peripheral or lower-index nodes sponsor links,
// spokes subscribe to the center and subscribers to influencers. Rings are
// circulant with every node sponsoring its k successors.
namespace topology {
struct Empty {};
struct Complete {};
struct Star {};
struct Line {};
struct Ring {
  int k = 1;
};
struct Regular {
  int d = 2;
};
struct TwoRing {
  int n_h = 2;
  int k_hi = 0;
  int k_lo = 1;
};
struct Random {
  double density = 0.3;
  std::uint64_t seed = 0;
};
}  // namespace topology

using TopologySpec = std::variant<topology::Empty, topology::Complete, topology::Star,
                                  topology::Line, topology::Ring, topology::Regular,
                                  topology::TwoRing, topology::Random>;

SubscriptionMatrix make_topology(const TopologySpec& spec, int n);

/// Parses "star", "ring:2", "regular:4", "two_ring:4:1:2", "random:0.3:7".
TopologySpec parse_topology(const std::string& text);
std::string to_string(const TopologySpec& spec);

}  // namespace pnf

#endif  // PNF_MODEL_HPP
