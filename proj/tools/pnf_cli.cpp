// Command-line front end. Talks to the library only through the C API.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pnf/pnf.h"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotEquilibrium = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitUsage = 64;

// Carries a process exit code out of a failed API call.
struct Failure {
  int code;
  std::string message;
};

int exit_code(pnf_status s) {
  switch (s) {
    case PNF_OK: return kExitOk;
    case PNF_ERR_CONFIG:
    case PNF_ERR_PROFILE:
    case PNF_ERR_TOPOLOGY:
    case PNF_ERR_PARSE:
    case PNF_ERR_ARGUMENT: return kExitConfig;
    default: return kExitSolver;
  }
}

void check(pnf_status s) {
  if (s != PNF_OK)
    throw Failure{exit_code(s), std::string(pnf_status_name(s)) + " error: " + pnf_last_error()};
}

json take_json(char* text) {
  std::unique_ptr<char, decltype(&pnf_string_free)> guard(text, pnf_string_free);
  return json::parse(text);
}

struct ConfigDeleter {
  void operator()(pnf_config* c) const { pnf_config_free(c); }
};
struct ProfileDeleter {
  void operator()(pnf_profile* p) const { pnf_profile_free(p); }
};
struct ReportDeleter {
  void operator()(pnf_report* r) const { pnf_report_free(r); }
};
using ConfigPtr = std::unique_ptr<pnf_config, ConfigDeleter>;
using ProfilePtr = std::unique_ptr<pnf_profile, ProfileDeleter>;
using ReportPtr = std::unique_ptr<pnf_report, ReportDeleter>;

struct Options {
  int n = 10;
  double rho = 0.8;
  double c = 0.1;
  double gamma = 0.5;
  std::string benefit = "log1p";
  bool appendix_exponent = false;
  std::string out;
  std::string format;  // empty: the command's default
  int seeds = 10;
  std::vector<int> n_list{20, 40, 80};
  std::string profile;
  std::string topology;
  int max_sweeps = 2000;
  int threads = 1;
  double gamma_min = 0.05;
  double gamma_max = 2.0;
  int steps = 40;
  std::optional<double> p;
  std::optional<double> t;
};

double benefit_scale(const std::string& spec) {
  if (spec == "log1p") return 1.0;
  if (spec.rfind("log1p:", 0) == 0) {
    try {
      std::size_t used = 0;
      const double s = std::stod(spec.substr(6), &used);
      if (used == spec.size() - 6) return s;
    } catch (const std::exception&) {
    }
  }
  throw Failure{kExitConfig, "unknown benefit \"" + spec + "\" (expected log1p or log1p:<scale>)"};
}

ConfigPtr make_config(const Options& o, int n) {
  pnf_config* raw = nullptr;
  check(pnf_config_create(n, o.rho, o.c, o.gamma, benefit_scale(o.benefit), &raw));
  ConfigPtr config(raw);
  check(pnf_config_set_appendix_exponent(config.get(), o.appendix_exponent ? 1 : 0));
  return config;
}

std::string fmt(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
  return buf;
}

double rounded(double v) { return std::strtod(fmt(v).c_str(), nullptr); }

// Rows share the field order of `header`; CSV or a JSON array of objects.
std::string render_rows(const std::vector<std::string>& header, const json& rows,
                        const std::string& format) {
  if (format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      json o;
      for (const auto& h : header) o[h] = r.contains(h) ? r.at(h) : json(nullptr);
      arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
  }
  std::ostringstream os;
  for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < header.size(); ++k)
      os << (k ? "," : "") << (r.contains(header[k]) ? fmt(r.at(header[k])) : "");
    os << "\n";
  }
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitConfig, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kExitConfig, "cannot write " + path};
  out << text;
  if (!out) throw Failure{kExitConfig, "failed writing " + path};
}

json manifest(const std::string& command, const pnf_config* config, const json& seeds,
              const std::vector<std::string>& argv, const json& extra) {
  char* text = nullptr;
  check(pnf_config_to_json(config, &text));
  json m;
  m["command"] = command;
  m["tool_version"] = pnf_version();
  m["config"] = take_json(text);
  m["seeds"] = seeds;
  m["conventions"] = {
      {"exponent", m["config"]["exponent"]},
      {"pricing",
       "subscriber pays gamma+t per outbound subscription and p per unit of each friend's "
       "content; the subscribed user receives t per inbound subscription and p*x_i from each "
       "friend"}};
  m["parameters"] = extra;
  m["argv"] = argv;
  return m;
}

void deliver(const Options& o, const std::string& body, const json& man) {
  if (o.out.empty()) {
    std::cout << body;
    return;
  }
  write_file(o.out, body);
  write_file(o.out + ".manifest.json", man.dump(2) + "\n");
}

int run_gamma_regions(const Options& o, const std::vector<std::string>& argv) {
  auto config = make_config(o, o.n);
  char* text = nullptr;
  check(pnf_gamma_table_json(config.get(), &text));
  const auto table = take_json(text);
  const auto body = render_rows({"d", "x_s", "X_s", "gamma_lo", "gamma_hi"}, table["rows"], o.format);
  deliver(o, body, manifest("gamma-regions", config.get(), json::array(), argv,
                            {{"format", o.format}, {"mean_width", table["mean_width"]}}));
  return kExitOk;
}

int run_verify(const Options& o, const std::vector<std::string>& argv, bool n_given) {
  if (o.profile.empty() == o.topology.empty())
    throw Failure{kExitUsage, "verify needs exactly one of --profile and --topology"};
  pnf_profile* raw = nullptr;
  ConfigPtr config;
  if (!o.profile.empty()) {
    check(pnf_profile_from_json(read_file(o.profile).c_str(), &raw));
  } else {
    config = make_config(o, o.n);
    check(pnf_profile_from_topology(config.get(), o.topology.c_str(), &raw));
  }
  ProfilePtr profile(raw);
  std::size_t size = 0;
  check(pnf_profile_size(profile.get(), &size));
  if (n_given && static_cast<std::size_t>(o.n) != size)
    throw Failure{kExitConfig, "--n " + std::to_string(o.n) + " does not match the profile size " +
                                   std::to_string(size)};
  if (!config) config = make_config(o, static_cast<int>(size));

  pnf_report* rep = nullptr;
  if (o.p || o.t)
    check(pnf_verify_priced(config.get(), profile.get(), o.p.value_or(0.0), o.t.value_or(0.0), &rep));
  else
    check(pnf_verify(config.get(), profile.get(), &rep));
  ReportPtr report(rep);
  char* text = nullptr;
  check(pnf_report_to_json(report.get(), &text));
  json body = take_json(text);
  double welfare = 0.0;
  check(pnf_social_welfare(config.get(), profile.get(), &welfare));
  body["social_welfare"] = rounded(welfare);
  char* ptext = nullptr;
  check(pnf_profile_to_json(profile.get(), &ptext));
  body["profile"] = take_json(ptext);

  std::string rendered = body.dump(2) + "\n";
  if (o.format == "csv")
    rendered = render_rows({"user", "kind", "direction", "new_x", "utility_gain", "reason"},
                           body["witnesses"], o.format);
  deliver(o, rendered,
          manifest("verify", config.get(), json::array(), argv,
                   {{"format", o.format}, {"profile", o.profile}, {"topology", o.topology}, {"p", o.p ? json(*o.p) : json(nullptr)},
                    {"t", o.t ? json(*o.t) : json(nullptr)}}));
  return pnf_report_is_equilibrium(report.get()) ? kExitOk : kExitNotEquilibrium;
}

const std::vector<std::string> kScalingHeader{"n", "seed", "n_h", "fraction", "x_hi", "x_lo", "k_hi", "k_lo"};

json scaling_row(int n, const json& run) {
  const auto& cls = run["result"]["report"]["classification"];
  const int n_h = cls["n_h"].get<int>();
  return {{"n", n},
          {"seed", run["seed"]},
          {"n_h", n_h},
          {"fraction", rounded(static_cast<double>(n_h) / n)},
          {"x_hi", cls["x_hi"]},
          {"x_lo", cls["x_lo"]},
          {"k_hi", cls["k_hi"]},
          {"k_lo", cls["k_lo"]}};
}

int run_search(const Options& o, const std::vector<std::string>& argv) {
  if (o.seeds < 0) throw Failure{kExitUsage, "--seeds must be nonnegative"};
  auto config = make_config(o, o.n);
  json runs = json::array();
  json rows = json::array();
  int found = 0;
  int asymmetric = 0;
  for (int s = 0; s < o.seeds; ++s) {
    int hit = 0;
    char* text = nullptr;
    check(pnf_search(config.get(), static_cast<uint64_t>(s), o.max_sweeps, &hit, &text));
    auto run = take_json(text);
    if (hit) {
      ++found;
      if (run["result"]["report"]["classification"]["kind"] == "asymmetric") {
        ++asymmetric;
        rows.push_back(scaling_row(o.n, run));
      }
    }
    runs.push_back(std::move(run));
  }
  std::string body;
  if (o.format == "csv") {
    body = render_rows(kScalingHeader, rows, "csv");
  } else {
    json j;
    j["seeds"] = o.seeds;
    j["equilibria"] = found;
    j["asymmetric"] = asymmetric;
    j["runs"] = runs;
    body = j.dump(2) + "\n";
  }
  json seeds = json::array();
  for (int s = 0; s < o.seeds; ++s) seeds.push_back(s);
  deliver(o, body,
          manifest("search", config.get(), seeds, argv,
                   {{"format", o.format}, {"max_sweeps", o.max_sweeps}}));
  std::cerr << "search: " << found << " equilibria, " << asymmetric << " asymmetric, over "
            << o.seeds << " seeds\n";
  return kExitOk;
}

const std::vector<std::string> kPricingHeader{"gamma",   "d_opt", "x_opt", "welfare_per_user", "p_opt",
                                              "p_paper", "t_lo",  "t_hi",  "t_mid"};

int run_optimum(const Options& o, const std::vector<std::string>& argv) {
  auto config = make_config(o, o.n);
  char* text = nullptr;
  check(pnf_social_optimum_json(config.get(), &text));
  json opt = take_json(text);
  std::string body;
  int code = kExitOk;
  if (o.format == "csv") {
    json row = opt;
    row["gamma"] = o.gamma;
    if (!opt["t_lo"].is_null() && !opt["t_hi"].is_null())
      row["t_mid"] = rounded(0.5 * (opt["t_lo"].get<double>() + opt["t_hi"].get<double>()));
    body = render_rows(kPricingHeader, json::array({row}), "csv");
  } else {
    if (o.t) {
      pnf_report* rep = nullptr;
      check(pnf_verify_priced_optimum(config.get(), *o.t, &rep));
      ReportPtr report(rep);
      char* rtext = nullptr;
      check(pnf_report_to_json(report.get(), &rtext));
      opt["priced_check"] = take_json(rtext);
      if (!pnf_report_is_equilibrium(report.get())) code = kExitNotEquilibrium;
    }
    body = opt.dump(2) + "\n";
  }
  deliver(o, body,
          manifest("optimum", config.get(), json::array(), argv,
                   {{"format", o.format}, {"t", o.t ? json(*o.t) : json(nullptr)}}));
  return code;
}

int run_pricing_sweep(const Options& o, const std::vector<std::string>& argv) {
  if (o.steps < 1) throw Failure{kExitUsage, "--steps must be at least 1"};
  auto config = make_config(o, o.n);
  std::vector<double> grid;
  for (int k = 0; k <= o.steps; ++k)
    grid.push_back(o.gamma_min + (o.gamma_max - o.gamma_min) * k / o.steps);
  char* text = nullptr;
  check(pnf_pricing_sweep_json(config.get(), grid.data(), grid.size(), &text));
  const auto rows = take_json(text);
  deliver(o, render_rows(kPricingHeader, rows, o.format),
          manifest("pricing-sweep", config.get(), json::array(), argv,
                   {{"format", o.format},
                    {"gamma_min", o.gamma_min},
                    {"gamma_max", o.gamma_max},
                    {"steps", o.steps}}));
  return kExitOk;
}

int run_scaling(const Options& o, const std::vector<std::string>& argv) {
  if (o.n_list.empty()) throw Failure{kExitUsage, "--n-list must not be empty"};
  auto config = make_config(o, o.n_list.front());
  char* text = nullptr;
  check(pnf_scaling_json(config.get(), o.n_list.data(), o.n_list.size(), o.seeds, o.max_sweeps,
                         o.threads, &text));
  const auto result = take_json(text);
  json rows = json::array();
  for (const auto& r : result["rows"])
    if (r["found"].get<bool>()) rows.push_back(r);
  json seeds = json::array();
  for (int s = 0; s < o.seeds; ++s) seeds.push_back(s);
  deliver(o, render_rows(kScalingHeader, rows, o.format),
          manifest("scaling", config.get(), seeds, argv,
                   {{"format", o.format},
                    {"n_list", o.n_list},
                    {"max_sweeps", o.max_sweeps},
                    {"per_n", result["per_n"]}}));
  for (const auto& s : result["per_n"])
    std::cerr << "scaling: n=" << s["n"] << " asymmetric equilibria " << s["found"] << "\n";
  return kExitOk;
}

void add_model_flags(CLI::App* sub, Options& o, bool with_n = true) {
  if (with_n) sub->add_option("--n", o.n, "population size");
  sub->add_option("--rho", o.rho, "content diversity parameter in (0,1)");
  sub->add_option("--c", o.c, "marginal production cost");
  sub->add_option("--gamma", o.gamma, "cost per subscription");
  sub->add_option("--benefit", o.benefit, "benefit function, log1p[:scale]");
  sub->add_flag("--appendix-exponent", o.appendix_exponent,
                "use (1+d)^(1-rho) in the symmetric first-order condition");
  sub->add_option("--out", o.out, "output path (stdout if omitted)");
}

void add_format(CLI::App* sub, Options& o) {
  sub->add_option("--format", o.format, "csv (default) or json")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  CLI::App app{"Production and network formation with heterogeneous content"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pnf_version()));
  Options o;

  auto* gamma_regions = app.add_subcommand("gamma-regions", "link-cost intervals of symmetric equilibria");
  add_model_flags(gamma_regions, o);
  add_format(gamma_regions, o);

  auto* verify = app.add_subcommand("verify", "strict-Nash check of a profile file");
  add_model_flags(verify, o);
  auto* profile_opt =
      verify->add_option("--profile", o.profile, "profile JSON {\"x\": [...], \"g\": [[...]]}");
  verify->add_option("--topology", o.topology,
                     "star, line, ring:k, regular:d, two_ring:n_h:k_hi:k_lo, random:density:seed;"
                     " productions solved to their fixed point")
      ->excludes(profile_opt);
  verify->add_option("--p", o.p, "content price");
  verify->add_option("--t", o.t, "subscription transfer");
  verify->add_option("--format", o.format, "json (full report, default) or csv (one row per witness)")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* search = app.add_subcommand("search", "seeded best-response search for equilibria");
  add_model_flags(search, o);
  search->add_option("--seeds", o.seeds, "number of seeds, run as 0..seeds-1");
  search->add_option("--max-sweeps", o.max_sweeps, "sweep budget per seed");
  search->add_option("--format", o.format, "json (full reports, default) or csv")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* optimum = app.add_subcommand("optimum", "social optimum and its sustaining prices");
  add_model_flags(optimum, o);
  optimum->add_option("--t", o.t, "also verify the priced optimum at this transfer (json only)");
  optimum->add_option("--format", o.format, "json (default) or csv")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* pricing = app.add_subcommand("pricing-sweep", "optimum and prices over a link-cost grid");
  add_model_flags(pricing, o);
  add_format(pricing, o);
  pricing->add_option("--gamma-min", o.gamma_min, "first link cost");
  pricing->add_option("--gamma-max", o.gamma_max, "last link cost");
  pricing->add_option("--steps", o.steps, "grid intervals");

  auto* scaling = app.add_subcommand("scaling", "influencer fraction across population sizes");
  add_model_flags(scaling, o, false);
  add_format(scaling, o);
  scaling->add_option("--n-list", o.n_list, "population sizes")->delimiter(',');
  scaling->add_option("--seeds", o.seeds, "seeds per population size");
  scaling->add_option("--max-sweeps", o.max_sweeps, "sweep budget per seed");
  scaling->add_option("--threads", o.threads, "parallel seeds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  if (o.format.empty()) o.format = search->parsed() || optimum->parsed() || verify->parsed() ? "json" : "csv";

  try {
    if (gamma_regions->parsed()) return run_gamma_regions(o, args);
    if (verify->parsed()) return run_verify(o, args, verify->get_option("--n")->count() > 0);
    if (search->parsed()) return run_search(o, args);
    if (optimum->parsed()) return run_optimum(o, args);
    if (pricing->parsed()) return run_pricing_sweep(o, args);
    if (scaling->parsed()) return run_scaling(o, args);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    if (f.code == kExitUsage) std::cerr << "\n" << app.help();
    return f.code;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed library output: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitUsage;
}
