#ifndef WAVELAB_SCENARIO_HPP
#define WAVELAB_SCENARIO_HPP

#include <cstdint>
#include <map>
#include <string>
#include <variant>

namespace wavelab {

inline constexpr const char* kVersion = "0.1.0";

// Config format: one [scenario] section, flat `key = value` lines, `#`
// comments. Values are typed by parsing order: integer, then real, then
// string.
using ConfigValue = std::variant<int64_t, double, std::string>;

struct Scenario {
  std::string name = "scenario";
  std::string kind;
  std::map<std::string, ConfigValue> params;
  std::string output_dir;
};

/// Throws ConfigParseError with the offending line on malformed input.
Scenario parse_scenario_file(const std::string& path);
Scenario parse_scenario_text(const std::string& text);

struct ScenarioOutcome {
  int exit_code = 0;  // 0 ok, 2 config error, 3 diagnostic assertion failed
  std::string message;
};

/// Run a scenario config and write series.csv, summary.json and meta.json
/// into its output directory (WAVELAB_OUT overrides). Partial outputs are
/// kept when a diagnostic assertion fails.
ScenarioOutcome run_scenario(const std::string& config_path);

/// Catalog of the scenario kinds; machine mode emits JSON.
std::string list_scenarios(bool as_json);

}  // namespace wavelab

#endif
