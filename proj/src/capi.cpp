#include "pnf/pnf.h"

#include <cstdlib>
#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include "pnf/serialize.hpp"

#ifndef PNF_VERSION
#define PNF_VERSION "0.0.0"
#endif

struct pnf_config {
  pnf::GameConfig value;
};

struct pnf_profile {
  pnf::StrategyProfile value;
};

struct pnf_report {
  pnf::EquilibriumReport value;
  std::optional<std::vector<pnf::AuditCheck>> audit;
};

namespace {

thread_local std::string last_error;

pnf_status fail(pnf_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs fn, mapping library exceptions onto status codes.
template <typename Fn>
pnf_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    fn();
    return PNF_OK;
  } catch (const pnf::ConfigError& e) {
    return fail(PNF_ERR_CONFIG, e.what());
  } catch (const pnf::ProfileError& e) {
    return fail(PNF_ERR_PROFILE, e.what());
  } catch (const pnf::TopologyError& e) {
    return fail(PNF_ERR_TOPOLOGY, e.what());
  } catch (const pnf::ParseError& e) {
    return fail(PNF_ERR_PARSE, e.what());
  } catch (const pnf::NoRootError& e) {
    return fail(PNF_ERR_NO_ROOT, e.what());
  } catch (const pnf::NumericError& e) {
    return fail(PNF_ERR_NUMERIC, e.what());
  } catch (const pnf::SolverError& e) {
    return fail(PNF_ERR_SOLVER, e.what());
  } catch (const pnf::ConvergenceError& e) {
    return fail(PNF_ERR_CONVERGENCE, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(PNF_ERR_PARSE, e.what());
  } catch (const std::exception& e) {
    return fail(PNF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PNF_ERR_INTERNAL, "unknown exception");
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(const pnf::json& j, char** out) { *out = duplicate(j.dump(2) + "\n"); }

#define PNF_REQUIRE(cond, msg) \
  if (!(cond)) return fail(PNF_ERR_ARGUMENT, msg)

}  // namespace

extern "C" {

const char* pnf_version(void) { return PNF_VERSION; }

const char* pnf_status_name(pnf_status status) {
  switch (status) {
    case PNF_OK: return "ok";
    case PNF_ERR_CONFIG: return "config";
    case PNF_ERR_PROFILE: return "profile";
    case PNF_ERR_TOPOLOGY: return "topology";
    case PNF_ERR_PARSE: return "parse";
    case PNF_ERR_NO_ROOT: return "no_root";
    case PNF_ERR_NUMERIC: return "numeric";
    case PNF_ERR_SOLVER: return "solver";
    case PNF_ERR_CONVERGENCE: return "convergence";
    case PNF_ERR_ARGUMENT: return "argument";
    case PNF_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* pnf_last_error(void) { return last_error.c_str(); }

void pnf_string_free(char* s) { std::free(s); }

pnf_status pnf_config_create(int n, double rho, double c, double gamma, double benefit_scale,
                             pnf_config** out) {
  PNF_REQUIRE(out, "null output pointer");
  return guarded([&] {
    pnf::GameConfig config;
    config.n = n;
    config.rho = rho;
    config.c = c;
    config.gamma = gamma;
    config.benefit.scale = benefit_scale;
    config.validate();
    *out = new pnf_config{config};
  });
}

pnf_status pnf_config_from_json(const char* text, pnf_config** out) {
  PNF_REQUIRE(text && out, "null argument");
  return guarded([&] { *out = new pnf_config{pnf::config_from_json(pnf::parse_json(text))}; });
}

pnf_status pnf_config_to_json(const pnf_config* config, char** out) {
  PNF_REQUIRE(config && out, "null argument");
  return guarded([&] { emit(pnf::config_to_json(config->value), out); });
}

pnf_status pnf_config_set_gamma(pnf_config* config, double gamma) {
  PNF_REQUIRE(config, "null config");
  return guarded([&] {
    auto next = config->value;
    next.gamma = gamma;
    next.validate();
    config->value = next;
  });
}

pnf_status pnf_config_set_n(pnf_config* config, int n) {
  PNF_REQUIRE(config, "null config");
  return guarded([&] {
    auto next = config->value;
    next.n = n;
    next.validate();
    config->value = next;
  });
}

pnf_status pnf_config_set_appendix_exponent(pnf_config* config, int enabled) {
  PNF_REQUIRE(config, "null config");
  config->value.exponent =
      enabled ? pnf::ExponentConvention::appendix : pnf::ExponentConvention::marginal_benefit;
  return PNF_OK;
}

void pnf_config_free(pnf_config* config) { delete config; }

pnf_status pnf_profile_from_json(const char* text, pnf_profile** out) {
  PNF_REQUIRE(text && out, "null argument");
  return guarded([&] { *out = new pnf_profile{pnf::profile_from_json(pnf::parse_json(text))}; });
}

pnf_status pnf_profile_from_topology(const pnf_config* config, const char* topology,
                                     pnf_profile** out) {
  PNF_REQUIRE(config && topology && out, "null argument");
  return guarded([&] {
    pnf::StrategyProfile p;
    p.g = pnf::make_topology(pnf::parse_topology(topology), config->value.n);
    p.x = pnf::production_fixed_point(p.g, config->value);
    *out = new pnf_profile{std::move(p)};
  });
}

pnf_status pnf_profile_to_json(const pnf_profile* profile, char** out) {
  PNF_REQUIRE(profile && out, "null argument");
  return guarded([&] { emit(pnf::profile_to_json(profile->value), out); });
}

pnf_status pnf_profile_size(const pnf_profile* profile, size_t* out) {
  PNF_REQUIRE(profile && out, "null argument");
  *out = profile->value.size();
  return PNF_OK;
}

void pnf_profile_free(pnf_profile* profile) { delete profile; }

pnf_status pnf_max_production(const pnf_config* config, double* out) {
  PNF_REQUIRE(config && out, "null argument");
  return guarded([&] { *out = pnf::max_production(config->value); });
}

pnf_status pnf_symmetric_production(const pnf_config* config, int d, double* x_s, double* X_s) {
  PNF_REQUIRE(config && x_s && X_s, "null argument");
  return guarded([&] {
    const auto s = pnf::symmetric_production(d, config->value);
    *x_s = s.x;
    *X_s = s.perceived;
  });
}

pnf_status pnf_gamma_region(const pnf_config* config, int d, double* gamma_lo, double* gamma_hi) {
  PNF_REQUIRE(config && gamma_lo && gamma_hi, "null argument");
  return guarded([&] {
    const auto r = pnf::gamma_region(d, config->value);
    *gamma_lo = r.gamma_lo;
    *gamma_hi = r.gamma_hi;
  });
}

pnf_status pnf_utility(const pnf_config* config, const pnf_profile* profile, size_t user,
                       double* out) {
  PNF_REQUIRE(config && profile && out, "null argument");
  PNF_REQUIRE(user < profile->value.size(), "user index out of range");
  return guarded([&] { *out = pnf::utility(profile->value, user, config->value); });
}

pnf_status pnf_social_welfare(const pnf_config* config, const pnf_profile* profile, double* out) {
  PNF_REQUIRE(config && profile && out, "null argument");
  return guarded([&] { *out = pnf::social_welfare(profile->value, config->value); });
}

pnf_status pnf_welfare_gap(const pnf_config* config, const pnf_profile* profile,
                           double* w_profile, double* w_opt, double* gap) {
  PNF_REQUIRE(config && profile && w_profile && w_opt && gap, "null argument");
  return guarded([&] {
    const auto g = pnf::welfare_gap(profile->value, config->value);
    *w_profile = g.w_profile;
    *w_opt = g.w_opt;
    *gap = g.gap;
  });
}

pnf_status pnf_verify(const pnf_config* config, const pnf_profile* profile, pnf_report** out) {
  PNF_REQUIRE(config && profile && out, "null argument");
  return guarded([&] {
    if (profile->value.size() != static_cast<std::size_t>(config->value.n))
      throw pnf::ProfileError("profile has " + std::to_string(profile->value.size()) +
                              " users but the config has n = " + std::to_string(config->value.n));
    auto report = pnf::verify_strict_nash(profile->value, config->value);
    auto audit = pnf::structural_audit(profile->value, config->value);
    *out = new pnf_report{std::move(report), std::move(audit)};
  });
}

pnf_status pnf_verify_priced(const pnf_config* config, const pnf_profile* profile, double p,
                             double t, pnf_report** out) {
  PNF_REQUIRE(config && profile && out, "null argument");
  return guarded([&] {
    auto report =
        pnf::verify_strict_nash(profile->value, config->value, pnf::PricingScheme{p, t});
    *out = new pnf_report{std::move(report), std::nullopt};
  });
}

pnf_status pnf_verify_priced_optimum(const pnf_config* config, double t, pnf_report** out) {
  PNF_REQUIRE(config && out, "null argument");
  return guarded([&] {
    const auto optimum = pnf::social_optimum(config->value);
    *out = new pnf_report{pnf::verify_priced_equilibrium(config->value, optimum, t), std::nullopt};
  });
}

int pnf_report_is_equilibrium(const pnf_report* report) {
  return report && report->value.verdict == pnf::Verdict::strict_equilibrium;
}

size_t pnf_report_witness_count(const pnf_report* report) {
  return report ? report->value.witnesses.size() : 0;
}

pnf_status pnf_report_to_json(const pnf_report* report, char** out) {
  PNF_REQUIRE(report && out, "null argument");
  return guarded([&] {
    auto j = pnf::report_to_json(report->value);
    if (report->audit) {
      j["audit"] = pnf::audit_to_json(*report->audit);
      j["audit_passed"] = pnf::audit_passed(*report->audit);
    }
    emit(j, out);
  });
}

void pnf_report_free(pnf_report* report) { delete report; }

pnf_status pnf_search(const pnf_config* config, uint64_t seed, int max_sweeps, int* found,
                      char** out) {
  PNF_REQUIRE(config && found && out, "null argument");
  PNF_REQUIRE(max_sweeps > 0, "max_sweeps must be positive");
  return guarded([&] {
    pnf::SearchSettings settings;
    settings.max_sweeps = max_sweeps;
    const auto result = pnf::search_equilibrium(config->value, seed, settings);
    pnf::json j;
    j["seed"] = seed;
    j["found"] = result.has_value();
    if (result) {
      j["result"] = pnf::search_result_to_json(*result);
      const auto audit = pnf::structural_audit(result->profile, config->value);
      j["audit"] = pnf::audit_to_json(audit);
      j["audit_passed"] = pnf::audit_passed(audit);
      j["welfare_per_user"] =
          pnf::real(pnf::social_welfare(result->profile, config->value) / config->value.n);
    }
    *found = result ? 1 : 0;
    emit(j, out);
  });
}

pnf_status pnf_gamma_table_json(const pnf_config* config, char** out) {
  PNF_REQUIRE(config && out, "null argument");
  return guarded([&] {
    const auto table = pnf::gamma_region_table(config->value);
    pnf::json j;
    j["rows"] = pnf::gamma_table_to_json(table);
    j["mean_width"] = pnf::real(table.mean_width);
    emit(j, out);
  });
}

pnf_status pnf_social_optimum_json(const pnf_config* config, char** out) {
  PNF_REQUIRE(config && out, "null argument");
  return guarded([&] { emit(pnf::optimum_to_json(pnf::social_optimum(config->value)), out); });
}

pnf_status pnf_pricing_sweep_json(const pnf_config* config, const double* gammas, size_t count,
                                  char** out) {
  PNF_REQUIRE(config && out && (gammas || count == 0), "null argument");
  return guarded([&] {
    const std::vector<double> grid(gammas, gammas + count);
    emit(pnf::pricing_rows_to_json(pnf::pricing_sweep(config->value, grid)), out);
  });
}

pnf_status pnf_scaling_json(const pnf_config* config, const int* n_list, size_t count,
                            int seeds_per_n, int max_sweeps, int threads, char** out) {
  PNF_REQUIRE(config && out && (n_list || count == 0), "null argument");
  PNF_REQUIRE(seeds_per_n >= 0 && max_sweeps > 0 && threads >= 1, "invalid run size");
  return guarded([&] {
    pnf::SearchSettings settings;
    settings.max_sweeps = max_sweeps;
    const std::vector<int> ns(n_list, n_list + count);
    emit(pnf::scaling_to_json(
             pnf::influencer_scaling(config->value, ns, seeds_per_n, settings, threads)),
         out);
  });
}

}  // extern "C"
