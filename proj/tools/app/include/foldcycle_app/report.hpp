#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "foldcycle/cycles.hpp"

namespace foldcycle::app {

nlohmann::json to_json(const MonodromyData& d);
nlohmann::json to_json(const LyapunovEstimate& e);
nlohmann::json to_json(const PerturbationPolys& p);
nlohmann::json to_json(const LadderReport& r);
nlohmann::json to_json(const Lemma1Report& r);
nlohmann::json to_json(const V2LimitReport& r);
nlohmann::json to_json(const SigmaSegment& s);
nlohmann::json to_json(const LimitCycle& c);
nlohmann::json to_json(const CensusReport& r);
nlohmann::json to_json(const ScanTable& t);
nlohmann::json to_json(const UnfoldingParams& p);
nlohmann::json to_json(const ReturnSample& s);

enum class Status { Ok, Mismatch, Error };
std::string_view to_string(Status s);

nlohmann::json run_report(const std::string& scenario, const std::string& command, Status status,
                          const std::vector<std::string>& diagnostics, nlohmann::json payload);

/// C-locale, 17 significant digits; NaN is written as "nan".
std::string format_number(double v);

std::string delta_csv(const std::vector<ReturnSample>& samples);
std::string scan_csv(const ScanTable& t);

}  // namespace foldcycle::app
