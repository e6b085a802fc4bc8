#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "constructions.hpp"
#include "oracles.hpp"
#include "pnf/equilibrium.hpp"

using namespace pnf;

namespace {

GameConfig cfg(int n, double rho, double gamma, double c = 0.1) {
  GameConfig config;
  config.n = n;
  config.rho = rho;
  config.c = c;
  config.gamma = gamma;
  return config;
}

StrategyProfile on_graph(const SubscriptionMatrix& g, const GameConfig& config) {
  return {production_fixed_point(g, config), g};
}

StrategyProfile symmetric_ring(int n, int d, const GameConfig& config) {
  StrategyProfile p;
  p.g = make_topology(topology::Regular{d}, n);
  p.x.assign(static_cast<std::size_t>(n), symmetric_production(d, config).x);
  return p;
}

bool has_direction(const EquilibriumReport& r, WitnessDirection d) {
  return std::any_of(r.witnesses.begin(), r.witnesses.end(),
                     [&](const DeviationWitness& w) { return w.direction == d; });
}

const AuditCheck& check_named(const std::vector<AuditCheck>& checks, const std::string& name) {
  const auto it = std::find_if(checks.begin(), checks.end(),
                               [&](const AuditCheck& c) { return c.name == name; });
  REQUIRE(it != checks.end());
  return *it;
}

}  // namespace

TEST_CASE("production fixed point") {
  const auto config = cfg(6, 0.8, 0.5);
  for (double x : production_fixed_point(SubscriptionMatrix(6), config))
    CHECK(std::abs(x - 9.0) <= 1e-9);

  const double xs = symmetric_production(5, config).x;
  for (double x : production_fixed_point(make_topology(topology::Complete{}, 6), config))
    CHECK(std::abs(x - xs) <= 1e-8);

  const auto star_cfg = cfg(5, 0.8, 0.5);
  const auto star = make_topology(topology::Star{}, 5);
  const auto x = production_fixed_point(star, star_cfg);
  const auto expect = oracle::fixed_point(star, star_cfg);
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(x[i] - expect[i]) <= 1e-8);
  for (std::size_t i = 2; i < 5; ++i) CHECK(std::abs(x[i] - x[1]) <= 1e-9);
  CHECK(x[0] < x[1]);

  SUBCASE("random graphs satisfy every first-order condition") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 20; ++t) {
      const auto g = make_topology(topology::Random{0.3, rng()}, 7);
      const auto c7 = cfg(7, 0.6, 0.5);
      const auto xs7 = production_fixed_point(g, c7);
      const auto gbar = friend_closure(g);
      for (std::size_t i = 0; i < 7; ++i) {
        double s = 0.0;
        for (auto j : gbar.neighbors(i)) s += std::pow(xs7[j], 0.6);
        CHECK(std::abs(xs7[i] - oracle::best_z(s, 0.1, 0.6, 1.0)) <= 1e-8);
        CHECK(xs7[i] > 0.0);
        CHECK(xs7[i] <= 9.0 + 1e-9);
      }
    }
  }
}

TEST_CASE("best response") {
  const auto config = cfg(5, 0.8, 0.3);
  SUBCASE("nothing to buy") {
    StrategyProfile p{{1.0, 0.0, 0.0, 0.0, 0.0}, SubscriptionMatrix(5)};
    const auto br = best_response(0, p, config);
    CHECK(std::abs(br.x - 9.0) <= 1e-9);
    CHECK(br.outbound.empty());
  }
  SUBCASE("free links reach every producer") {
    auto free = cfg(5, 0.8, 0.0);
    StrategyProfile p{{1.0, 2.0, 0.0, 3.0, 4.0}, SubscriptionMatrix(5)};
    p.g.set(4, 0, true);
    const auto br = best_response(0, p, free);
    CHECK(br.outbound == std::vector<std::size_t>{1, 3});
  }
  SUBCASE("agrees with subset enumeration") {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 40; ++t) {
      const int n = 3 + static_cast<int>(rng() % 4);
      auto c = cfg(n, 0.3 + 0.6 * u(rng), 0.05 + 0.6 * u(rng));
      StrategyProfile p;
      p.g = make_topology(topology::Random{0.4 * u(rng), rng()}, n);
      for (int i = 0; i < n; ++i) p.x.push_back(9.0 * u(rng));
      for (int i = 0; i < n; ++i) {
        const auto br = best_response(static_cast<std::size_t>(i), p, c);
        const auto ref = oracle::brute_best(p, static_cast<std::size_t>(i), c);
        CHECK(std::abs(br.utility - ref.utility) <= 1e-8);
        CHECK(std::abs(br.x - ref.z) <= 1e-7);
      }
    }
  }
}

TEST_CASE("strict Nash verification") {
  const auto base = cfg(10, 0.8, 0.5);
  SUBCASE("symmetric profile inside its link-cost interval") {
    for (int d = 1; d <= 8; ++d) {
      if ((10 * d) % 2) continue;
      const auto region = gamma_region(d, base);
      auto inside = base;
      inside.gamma = 0.5 * (region.gamma_lo + region.gamma_hi);
      const auto p = symmetric_ring(10, d, inside);
      const auto r = verify_strict_nash(p, inside);
      CHECK(r.verdict == Verdict::strict_equilibrium);
      CHECK(r.witnesses.empty());
      CHECK(r.classification.kind == ProfileClass::symmetric);
      CHECK(r.classification.degree == d);

      auto cheap = base;
      cheap.gamma = 0.9 * region.gamma_lo;
      const auto r2 = verify_strict_nash(p, cheap);
      CHECK(r2.verdict == Verdict::not_equilibrium);
      CHECK(has_direction(r2, WitnessDirection::add));

      auto dear = base;
      dear.gamma = 1.1 * region.gamma_hi;
      CHECK(has_direction(verify_strict_nash(p, dear), WitnessDirection::drop));
    }
  }
  SUBCASE("star is rejected") {
    const auto c5 = cfg(5, 0.8, 0.5);
    const auto p = on_graph(make_topology(topology::Star{}, 5), c5);
    CHECK(verify_strict_nash(p, c5).verdict == Verdict::not_equilibrium);
  }
  SUBCASE("immediate rejections") {
    const auto c4 = cfg(4, 0.8, 0.5);
    StrategyProfile mutual{std::vector<double>(4, 9.0), SubscriptionMatrix(4)};
    mutual.g.set(0, 1, true);
    mutual.g.set(1, 0, true);
    const auto r = verify_strict_nash(mutual, c4);
    CHECK(r.verdict == Verdict::not_equilibrium);
    CHECK(r.witnesses.front().reason.find("mutual") != std::string::npos);

    // links too dear to matter, even for a user producing nothing
    auto dear = c4;
    dear.gamma = 3.0;
    StrategyProfile zero{{9.0, 9.0, 0.0, 9.0}, SubscriptionMatrix(4)};
    const auto r_zero = verify_strict_nash(zero, dear);
    REQUIRE(r_zero.witnesses.size() == 1);
    CHECK(r_zero.witnesses.front().user == 2);
    CHECK(r_zero.witnesses.front().reason == "zero production");

    StrategyProfile above{{9.5, 9.0, 9.0, 9.0}, SubscriptionMatrix(4)};
    const auto r_above = verify_strict_nash(above, dear);
    REQUIRE(r_above.witnesses.size() == 1);
    CHECK(r_above.witnesses.front().reason == "production above x-bar");

    StrategyProfile off{{8.0, 9.0, 9.0, 9.0}, SubscriptionMatrix(4)};
    const auto r_off = verify_strict_nash(off, dear);
    REQUIRE(r_off.witnesses.size() == 1);
    CHECK(r_off.witnesses.front().kind == WitnessKind::production);
    CHECK(std::abs(r_off.witnesses.front().new_x - 9.0) <= 1e-9);

    StrategyProfile isolated{std::vector<double>(4, 9.0), SubscriptionMatrix(4)};
    CHECK(verify_strict_nash(isolated, dear).verdict == Verdict::strict_equilibrium);
  }
  SUBCASE("every witness gains more than the margin") {
    std::mt19937_64 rng(61);
    for (int t = 0; t < 20; ++t) {
      const auto c = cfg(6, 0.7, 0.2);
      const auto p = on_graph(make_topology(topology::Random{0.3, rng()}, 6), c);
      for (const auto& w : verify_strict_nash(p, c).witnesses) CHECK(w.utility_gain > kStrictnessMargin);
    }
  }
}

TEST_CASE("link-cost regions") {
  for (double rho : {0.5, 0.8}) {
    const auto table = gamma_region_table(cfg(10, rho, 0.5));
    REQUIRE(table.rows.size() == 10);
    CHECK(table.rows[9].gamma_lo == 0.0);
    CHECK(std::isinf(table.rows[0].gamma_hi));
    for (int d = 0; d < 10; ++d) {
      CHECK(table.rows[d].gamma_lo < table.rows[d].gamma_hi);
      if (d > 0) CHECK(table.rows[d].gamma_hi < table.rows[d - 1].gamma_lo);
    }
    CHECK(table.mean_width > 0.0);
  }
  CHECK(gamma_region_table(cfg(10, 0.9, 0.5)).mean_width <
        gamma_region_table(cfg(10, 0.5, 0.5)).mean_width);
}

TEST_CASE("classification") {
  const auto config = cfg(6, 0.8, 0.5);
  const auto ring = symmetric_ring(6, 2, config);
  const auto c = classify_profile(ring, config);
  CHECK(c.kind == ProfileClass::symmetric);
  CHECK(c.degree == 2);
  CHECK(c.degrees_equal);

  StrategyProfile two{{5.0, 5.0, 2.0, 2.0, 2.0, 2.0}, make_topology(topology::TwoRing{2, 0, 1}, 6)};
  const auto c2 = classify_profile(two, config);
  CHECK(c2.kind == ProfileClass::asymmetric);
  CHECK(c2.n_h == 2);
  CHECK(c2.x_lo == 2.0);
  CHECK(c2.k_hi == 0);
  CHECK(c2.k_lo == 1);
  CHECK(c2.two_type);

  StrategyProfile three{{5.0, 5.0, 3.0, 2.0, 2.0, 2.0}, SubscriptionMatrix(6)};
  const auto c3 = classify_profile(three, config);
  CHECK(c3.kind == ProfileClass::asymmetric);
  CHECK(c3.levels == 3);
  CHECK_FALSE(c3.x_lo.has_value());
  CHECK_FALSE(c3.two_type);
}

TEST_CASE("structural audit") {
  const auto c5 = cfg(5, 0.8, 0.5);
  SUBCASE("star breaks the balance bound") {
    const auto p = on_graph(make_topology(topology::Star{}, 5), c5);
    const auto checks = structural_audit(p, c5);
    CHECK_FALSE(check_named(checks, "balance_bound").passed);
    CHECK_FALSE(audit_passed(checks));
  }
  SUBCASE("line fails") {
    const auto p = on_graph(make_topology(topology::Line{}, 5), c5);
    CHECK_FALSE(audit_passed(structural_audit(p, c5)));
  }
  SUBCASE("constructed two-type equilibrium passes everything") {
    const auto config = cfg(20, 0.9, 0.108);
    const auto p = construct::two_type(20, 10, 1, 9, config, 0.9, 1.1);
    const auto report = verify_strict_nash(p, config);
    CHECK(report.verdict == Verdict::strict_equilibrium);
    CHECK(report.classification.kind == ProfileClass::asymmetric);
    CHECK(report.classification.two_type);
    CHECK(report.classification.n_h == 10);
    CHECK(report.classification.k_hi == 1);
    CHECK(report.classification.k_lo == 9);
    CHECK(*report.classification.x_lo < report.classification.x_hi);
    const auto checks = structural_audit(p, config);
    for (const auto& check : checks) {
      INFO(check.name << ": " << check.detail);
      CHECK(check.passed);
    }
  }
  SUBCASE("the same structure outside its cost window is rejected") {
    auto config = cfg(20, 0.9, 0.2);
    const auto p = construct::two_type(20, 10, 1, 9, config, 0.9, 1.1);
    CHECK(verify_strict_nash(p, config).verdict == Verdict::not_equilibrium);
  }
}

TEST_CASE("search") {
  SUBCASE("expensive links leave everyone isolated") {
    const auto config = cfg(8, 0.8, 2.5);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto r = search_equilibrium(config, seed);
      REQUIRE(r.has_value());
      CHECK(r->profile.g.link_count() == 0);
      for (double x : r->profile.x) CHECK(std::abs(x - 9.0) <= 1e-8);
    }
  }
  SUBCASE("nearly free links give the complete network") {
    const auto config = cfg(8, 0.8, 1e-6);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto r = search_equilibrium(config, seed);
      REQUIRE(r.has_value());
      CHECK(r->report.classification.degree == 7);
      CHECK(r->profile.g.link_count() == 28);
    }
  }
  SUBCASE("deterministic per seed") {
    const auto config = cfg(7, 0.7, 0.35);
    SearchSettings s;
    s.max_sweeps = 100;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto a = search_equilibrium(config, seed, s);
      const auto b = search_equilibrium(config, seed, s);
      REQUIRE(a.has_value() == b.has_value());
      if (a) {
        CHECK(a->profile.x == b->profile.x);
        CHECK(a->profile.g == b->profile.g);
      }
    }
  }
  SUBCASE("found equilibria respect the basic lemmas") {
    const auto config = cfg(6, 0.6, 0.2);
    SearchSettings s;
    s.max_sweeps = 300;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto r = search_equilibrium(config, seed, s);
      if (!r) continue;
      CHECK_FALSE(r->profile.g.has_mutual_link());
      for (double x : r->profile.x) {
        CHECK(x > 0.0);
        CHECK(x <= 9.0 + 1e-8);
      }
      CHECK(oracle::strict(r->profile, config));
      if (r->report.classification.kind == ProfileClass::symmetric)
        CHECK(r->report.classification.degrees_equal);
    }
  }
}

TEST_CASE("scaling harness") {
  auto config = cfg(8, 0.8, 2.5);
  SearchSettings s;
  s.max_sweeps = 50;
  const auto serial = influencer_scaling(config, {6, 8}, 3, s, 1);
  const auto parallel = influencer_scaling(config, {6, 8}, 3, s, 3);
  REQUIRE(serial.rows.size() == 6);
  for (std::size_t k = 0; k < serial.rows.size(); ++k) {
    CHECK(serial.rows[k].n == parallel.rows[k].n);
    CHECK(serial.rows[k].seed == parallel.rows[k].seed);
    CHECK(serial.rows[k].symmetric == parallel.rows[k].symmetric);
    CHECK_FALSE(serial.rows[k].found);
  }
  CHECK(serial.rows[0].n == 6);
  CHECK(serial.rows[3].n == 8);
  REQUIRE(serial.per_n.size() == 2);
  CHECK(serial.per_n[0].found == 0);
}
