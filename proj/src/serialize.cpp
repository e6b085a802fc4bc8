#include "pnf/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace pnf {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_real(const std::optional<double>& v) { return v ? format_real(*v) : ""; }

json real(double v) {
  if (!std::isfinite(v)) return format_real(v);
  return std::strtod(format_real(v).c_str(), nullptr);
}

json real(const std::optional<double>& v) { return v ? real(*v) : json(nullptr); }

namespace {

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

double read_real(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  const auto& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw ParseError(std::string("field \"") + key + "\" is not a number");
}

}  // namespace

json config_to_json(const GameConfig& config) {
  json j;
  j["n"] = config.n;
  j["rho"] = real(config.rho);
  j["c"] = real(config.c);
  j["gamma"] = real(config.gamma);
  j["benefit"] = {{"kind", "log1p"}, {"scale", real(config.benefit.scale)}};
  j["exponent"] = config.exponent == ExponentConvention::appendix ? "appendix" : "marginal_benefit";
  return j;
}

GameConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  GameConfig config;
  if (!j.contains("n") || !j.at("n").is_number_integer())
    throw ParseError("config field \"n\" must be an integer");
  config.n = j.at("n").get<int>();
  config.rho = read_real(j, "rho");
  config.c = read_real(j, "c");
  config.gamma = read_real(j, "gamma");
  if (j.contains("benefit")) {
    const auto& b = j.at("benefit");
    if (!b.is_object()) throw ParseError("\"benefit\" must be an object");
    if (b.contains("kind") && b.at("kind") != "log1p")
      throw ConfigError("unknown benefit kind " + b.at("kind").dump());
    if (b.contains("scale")) config.benefit.scale = read_real(b, "scale");
  }
  if (j.contains("exponent")) {
    const auto& e = j.at("exponent");
    if (e == "appendix")
      config.exponent = ExponentConvention::appendix;
    else if (e != "marginal_benefit")
      throw ConfigError("unknown exponent convention " + e.dump());
  }
  config.validate();
  return config;
}

json profile_to_json(const StrategyProfile& profile) {
  json j;
  j["x"] = json::array();
  for (double v : profile.x) j["x"].push_back(real(v));
  j["g"] = profile.g.rows();
  return j;
}

StrategyProfile profile_from_json(const json& j) {
  if (!j.is_object() || !j.contains("x") || !j.contains("g"))
    throw ParseError("profile must be an object with \"x\" and \"g\"");
  const auto& jx = j.at("x");
  const auto& jg = j.at("g");
  if (!jx.is_array() || !jg.is_array()) throw ParseError("\"x\" and \"g\" must be arrays");
  StrategyProfile profile;
  for (const auto& v : jx) {
    if (!v.is_number()) throw ParseError("\"x\" entries must be numbers");
    profile.x.push_back(v.get<double>());
  }
  std::vector<std::vector<int>> rows;
  for (const auto& row : jg) {
    if (!row.is_array()) throw ParseError("\"g\" must be an array of rows");
    std::vector<int> r;
    for (const auto& v : row) {
      if (!v.is_number_integer()) throw ParseError("\"g\" entries must be 0 or 1");
      r.push_back(v.get<int>());
    }
    rows.push_back(std::move(r));
  }
  profile.g = SubscriptionMatrix::from_rows(rows);
  profile.validate();
  return profile;
}

json classification_to_json(const Classification& c) {
  json j;
  j["kind"] = to_string(c.kind);
  j["levels"] = c.levels;
  j["n_h"] = c.n_h;
  j["x_hi"] = real(c.x_hi);
  j["x_lo"] = real(c.x_lo);
  j["k_hi"] = opt(c.k_hi);
  j["k_lo"] = opt(c.k_lo);
  j["degree"] = opt(c.degree);
  j["degrees_equal"] = c.degrees_equal;
  j["two_type"] = c.two_type;
  return j;
}

json report_to_json(const EquilibriumReport& report) {
  json j;
  j["verdict"] = to_string(report.verdict);
  j["priced"] = report.priced;
  if (report.priced) j["pricing"] = {{"p", real(report.pricing.p)}, {"t", real(report.pricing.t)}};
  j["classification"] = classification_to_json(report.classification);
  j["witnesses"] = json::array();
  for (const auto& w : report.witnesses) {
    json jw;
    jw["user"] = w.user;
    jw["kind"] = to_string(w.kind);
    jw["direction"] = to_string(w.direction);
    jw["new_x"] = real(w.new_x);
    jw["new_outbound"] = w.new_outbound;
    jw["utility_gain"] = real(w.utility_gain);
    jw["reason"] = w.reason;
    j["witnesses"].push_back(std::move(jw));
  }
  return j;
}

json audit_to_json(const std::vector<AuditCheck>& checks) {
  json j = json::array();
  for (const auto& c : checks)
    j.push_back({{"name", c.name},
                 {"passed", c.passed},
                 {"applicable", c.applicable},
                 {"detail", c.detail}});
  return j;
}

json gamma_table_to_json(const GammaTable& table) {
  json j = json::array();
  for (const auto& r : table.rows)
    j.push_back({{"d", r.d},
                 {"x_s", real(r.x_s)},
                 {"X_s", real(r.X_s)},
                 {"gamma_lo", real(r.gamma_lo)},
                 {"gamma_hi", real(r.gamma_hi)}});
  return j;
}

json optimum_to_json(const SocialOptimum& o) {
  json j;
  j["d_opt"] = o.d_opt;
  j["x_opt"] = real(o.x_opt);
  j["welfare_per_user"] = real(o.welfare_per_user);
  j["p_opt"] = real(o.p_opt);
  j["p_paper"] = real(o.p_paper);
  j["t_lo"] = real(o.t_lo);
  j["t_hi"] = real(o.t_hi);
  j["foc_residual"] = real(o.foc_residual);
  j["boundary_tie"] = o.boundary_tie;
  return j;
}

json pricing_rows_to_json(const std::vector<PricingRow>& rows) {
  json j = json::array();
  for (const auto& r : rows)
    j.push_back({{"gamma", real(r.gamma)},
                 {"d_opt", r.optimum.d_opt},
                 {"x_opt", real(r.optimum.x_opt)},
                 {"welfare_per_user", real(r.optimum.welfare_per_user)},
                 {"p_opt", real(r.optimum.p_opt)},
                 {"p_paper", real(r.optimum.p_paper)},
                 {"t_lo", real(r.optimum.t_lo)},
                 {"t_hi", real(r.optimum.t_hi)},
                 {"t_mid", real(r.t_mid)}});
  return j;
}

json scaling_to_json(const ScalingResult& result) {
  json j;
  j["rows"] = json::array();
  for (const auto& r : result.rows)
    j["rows"].push_back({{"n", r.n},
                         {"seed", r.seed},
                         {"found", r.found},
                         {"symmetric", r.symmetric},
                         {"n_h", r.n_h},
                         {"fraction", real(r.fraction)},
                         {"x_hi", real(r.x_hi)},
                         {"x_lo", real(r.x_lo)},
                         {"k_hi", opt(r.k_hi)},
                         {"k_lo", opt(r.k_lo)},
                         {"two_type", r.two_type},
                         {"audit_passed", r.audit_passed},
                         {"welfare_per_user", real(r.welfare_per_user)}});
  j["per_n"] = json::array();
  for (const auto& s : result.per_n)
    j["per_n"].push_back({{"n", s.n},
                          {"found", s.found},
                          {"mean_fraction", real(s.mean_fraction)},
                          {"min_fraction", real(s.min_fraction)}});
  return j;
}

json search_result_to_json(const SearchResult& result) {
  json j;
  j["sweeps"] = result.sweeps;
  j["initial_density"] = real(result.initial_density);
  j["profile"] = profile_to_json(result.profile);
  j["report"] = report_to_json(result.report);
  return j;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace pnf
