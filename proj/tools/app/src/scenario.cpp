#include "foldcycle_app/scenario.hpp"

#include <fstream>
#include <set>

namespace foldcycle::app {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); }

void allow_keys(const json& obj, const std::set<std::string>& keys, const std::string& where) {
  if (!obj.is_object()) bad(where + " must be an object");
  for (const auto& [k, v] : obj.items()) {
    if (!keys.count(k)) bad("unknown key '" + k + "' in " + where);
  }
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) bad(where + " must be a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where + " must be an integer");
  return j.get<int>();
}

std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) bad(where + " must be an array");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, where));
  return out;
}

SmoothField smooth_from_json(const json& j, const std::string& where) {
  allow_keys(j, {"X", "Y"}, where);
  if (!j.contains("X") || !j.contains("Y")) bad(where + " needs X and Y");
  return {poly_from_json(j.at("X"), where + ".X"), poly_from_json(j.at("Y"), where + ".Y")};
}

}  // namespace

Poly2 poly_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) bad(where + " must be a nonempty array of [i, j, coefficient]");
  std::vector<Term<double>> terms;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 3) bad(where + ": each term is [i, j, coefficient]");
    const int i = integer(t[0], where + " exponent");
    const int e = integer(t[1], where + " exponent");
    terms.push_back({i, e, number(t[2], where + " coefficient")});
  }
  return Poly2::from_terms(terms);
}

json poly_to_json(const Poly2& p) {
  json out = json::array();
  for (const auto& t : p.to_terms()) out.push_back({t.i, t.j, t.coeff});
  // An all-zero component still needs one entry to stay a valid scenario.
  if (out.empty()) out.push_back({0, 0, 0.0});
  return out;
}

Scenario scenario_from_json(const json& j) {
  allow_keys(j, {"name", "field", "unfold", "integrator", "window", "outputs", "scan_b", "samples"}, "scenario");
  Scenario s;
  if (!j.contains("name") || !j.at("name").is_string()) bad("scenario needs a string 'name'");
  s.name = j.at("name").get<std::string>();
  if (s.name.empty() || s.name.find('/') != std::string::npos) bad("scenario name must be a nonempty file stem");

  if (!j.contains("field")) bad("scenario needs a 'field'");
  const json& f = j.at("field");
  allow_keys(f, {"upper", "lower"}, "field");
  if (!f.contains("upper") || !f.contains("lower")) bad("field needs 'upper' and 'lower'");
  s.field = {smooth_from_json(f.at("upper"), "field.upper"), smooth_from_json(f.at("lower"), "field.lower")};

  if (j.contains("unfold")) {
    const json& u = j.at("unfold");
    allow_keys(u, {"k", "lambda", "epsilon", "b", "shift"}, "unfold");
    UnfoldingParams p;
    if (u.contains("k")) p.k = integer(u.at("k"), "unfold.k");
    if (u.contains("lambda")) p.lambda = numbers(u.at("lambda"), "unfold.lambda");
    if (u.contains("epsilon")) p.epsilon = number(u.at("epsilon"), "unfold.epsilon");
    if (u.contains("b")) p.b = number(u.at("b"), "unfold.b");
    if (u.contains("shift")) {
      if (!u.at("shift").is_string()) bad("unfold.shift must be a string");
      p.shift = parse_shift_convention(u.at("shift").get<std::string>());
    }
    s.unfold = p;
  }

  if (j.contains("integrator")) {
    const json& c = j.at("integrator");
    allow_keys(c, {"rel_tol", "abs_tol", "max_step", "event_tol", "departure_eta", "departure_t_min", "max_time"},
               "integrator");
    auto set = [&](const char* key, double& dst) {
      if (c.contains(key)) dst = number(c.at(key), std::string("integrator.") + key);
    };
    set("rel_tol", s.integrator.rel_tol);
    set("abs_tol", s.integrator.abs_tol);
    set("max_step", s.integrator.max_step);
    set("event_tol", s.integrator.event_tol);
    set("departure_eta", s.integrator.departure_eta);
    set("departure_t_min", s.integrator.departure_t_min);
    set("max_time", s.integrator.max_time);
    s.integrator.validate();
  }

  if (j.contains("window")) {
    const json& w = j.at("window");
    allow_keys(w, {"center", "radius"}, "window");
    if (w.contains("center")) s.window.center = number(w.at("center"), "window.center");
    if (w.contains("radius")) s.window.radius = number(w.at("radius"), "window.radius");
  }
  if (!(s.window.radius > 0.0)) bad("window.radius must be positive");

  if (j.contains("outputs")) {
    if (!j.at("outputs").is_string()) bad("outputs must be a directory path string");
    s.outputs = j.at("outputs").get<std::string>();
  }
  if (j.contains("scan_b")) s.scan_b = numbers(j.at("scan_b"), "scan_b");
  if (j.contains("samples")) {
    s.samples = integer(j.at("samples"), "samples");
    if (s.samples < 3) bad("samples must be at least 3");
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open scenario file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    bad("scenario " + path.string() + " is not valid JSON: " + e.what());
  }
  return scenario_from_json(j);
}

json normalized_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["field"] = {{"upper", {{"X", poly_to_json(s.field.upper.X)}, {"Y", poly_to_json(s.field.upper.Y)}}},
                {"lower", {{"X", poly_to_json(s.field.lower.X)}, {"Y", poly_to_json(s.field.lower.Y)}}}};
  if (s.unfold) {
    j["unfold"] = {{"k", s.unfold->k},
                   {"lambda", s.unfold->lambda},
                   {"epsilon", s.unfold->epsilon},
                   {"b", s.unfold->b},
                   {"shift", std::string(to_string(s.unfold->shift))}};
  }
  const IntegratorConfig& c = s.integrator;
  j["integrator"] = {{"rel_tol", c.rel_tol},     {"abs_tol", c.abs_tol},
                     {"max_step", c.max_step},   {"event_tol", c.event_tol},
                     {"departure_eta", c.departure_eta}, {"departure_t_min", c.departure_t_min},
                     {"max_time", c.max_time}};
  j["window"] = {{"center", s.window.center}, {"radius", s.window.radius}};
  j["outputs"] = s.outputs;
  j["scan_b"] = s.scan_b;
  j["samples"] = s.samples;
  return j;
}

PiecewiseField effective_field(const Scenario& s) {
  if (!s.unfold) return s.field;
  if (s.unfold->k == 1) return apply_shift(s.field, s.unfold->b, s.unfold->shift);
  return unfolded_field(s.field, *s.unfold);
}

}  // namespace foldcycle::app
