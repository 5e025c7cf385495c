#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sgq/complexes.hpp"
#include "sgq/rational.hpp"
#include "sgq/report.hpp"

namespace sgq {

// Global run configuration handed to every scenario. Scenario-specific
// parameters arrive as strings and are parsed on demand.
struct ScenarioParams {
  Window window;
  int moment_sign = 1;
  std::string odd_side = "left";
  std::map<std::string, std::string> params;

  std::string get(const std::string& key, const std::string& fallback) const;
  int get_int(const std::string& key, int fallback) const;
  Rational get_rational(const std::string& key,
                        const Rational& fallback) const;
};

struct Scenario {
  std::string name;
  std::string description;
  std::string anchor;
  std::vector<std::string> keys;  // accepted --param names
  std::function<std::vector<CheckReport>(const ScenarioParams&)> run;
};

// Built once, alphabetically ordered by name.
const std::vector<Scenario>& scenario_registry();

// Throws UnknownScenario.
const Scenario& find_scenario(const std::string& name);

// Validates all names up front, runs the scenarios on up to jobs worker
// threads and returns every report sorted by its label.
std::vector<CheckReport> run_scenarios(const std::vector<std::string>& names,
                                       const ScenarioParams& p, int jobs);

}  // namespace sgq
