#ifndef PNF_SERIALIZE_HPP
#define PNF_SERIALIZE_HPP

// JSON and CSV encodings shared by the C API and the command-line tool.
// Reals are rounded to 12 significant digits so repeated runs give
// byte-identical files; non-finite values become the strings "inf", "-inf"
// and "nan".

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pnf/equilibrium.hpp"
#include "pnf/welfare.hpp"

namespace pnf {

using json = nlohmann::ordered_json;

json real(double v);
json real(const std::optional<double>& v);
/// "%.12g", with "inf"/"-inf"/"nan" and "" for a missing value.
std::string format_real(double v);
std::string format_real(const std::optional<double>& v);

json config_to_json(const GameConfig& config);
/// Throws ParseError on a malformed document and ConfigError on invalid values.
GameConfig config_from_json(const json& j);

json profile_to_json(const StrategyProfile& profile);
/// Throws ParseError on a malformed document and ProfileError on an invalid profile.
StrategyProfile profile_from_json(const json& j);

json classification_to_json(const Classification& c);
json report_to_json(const EquilibriumReport& report);
json audit_to_json(const std::vector<AuditCheck>& checks);
json gamma_table_to_json(const GammaTable& table);
json optimum_to_json(const SocialOptimum& optimum);
json pricing_rows_to_json(const std::vector<PricingRow>& rows);
json scaling_to_json(const ScalingResult& result);
json search_result_to_json(const SearchResult& result);

json parse_json(const std::string& text);

}  // namespace pnf

#endif  // PNF_SERIALIZE_HPP
