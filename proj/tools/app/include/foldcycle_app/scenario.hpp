#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "foldcycle/flow.hpp"
#include "foldcycle/unfold.hpp"

namespace foldcycle::app {

struct Scenario {
  std::string name;
  PiecewiseField field;
  std::optional<UnfoldingParams> unfold;
  IntegratorConfig integrator;
  Window window{0.0, 0.1};
  std::string outputs = ".";
  std::vector<double> scan_b;
  int samples = 40;  // abscissas for delta-dump

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Polynomial as an array of [i, j, coefficient] triples.
Poly2 poly_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::json poly_to_json(const Poly2& p);

Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& path);

/// Every field spelled out with defaults filled in and terms sorted.
nlohmann::json normalized_json(const Scenario& s);

/// Field the run commands act on: unfolded and shifted when an unfold block
/// is present, the raw field otherwise.
PiecewiseField effective_field(const Scenario& s);

}  // namespace foldcycle::app
