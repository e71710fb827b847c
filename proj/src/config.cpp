#include "hbtdit/config.hpp"

#include <cmath>
#include <functional>
#include <map>

#include <json.hpp>

#include "hbtdit/errors.hpp"

namespace hbtdit {
namespace {

using nlohmann::json;
using Setter = std::function<void(ScenarioConfig&, const json&, const std::string&)>;

double get_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ParseError(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ParseError(key, "must be finite");
  return x;
}

double get_positive(const json& v, const std::string& key) {
  const double x = get_number(v, key);
  if (!(x > 0.0)) throw ParseError(key, "must be positive");
  return x;
}

double get_non_negative(const json& v, const std::string& key) {
  const double x = get_number(v, key);
  if (!(x >= 0.0)) throw ParseError(key, "must be non-negative");
  return x;
}

long long get_integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ParseError(key, "expected an integer");
  return v.get<long long>();
}

bool get_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ParseError(key, "expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ParseError(key, "expected a string");
  return v.get<std::string>();
}

const std::map<std::string, Setter>& top_level_setters() {
  static const std::map<std::string, Setter> setters = {
      {"scenario", [](auto& c, const json& v, const auto& k) { c.scenario = get_string(v, k); }},
      {"t_c_fs", [](auto& c, const json& v, const auto& k) { c.t_c_fs = get_positive(v, k); }},
      {"t_pulse_fs", [](auto& c, const json& v, const auto& k) { c.t_pulse_fs = get_positive(v, k); }},
      {"pulse_durations_fs",
       [](auto& c, const json& v, const auto& k) {
         if (!v.is_array() || v.empty()) throw ParseError(k, "expected a non-empty array of numbers");
         c.pulse_durations_fs.clear();
         for (std::size_t i = 0; i < v.size(); ++i)
           c.pulse_durations_fs.push_back(get_positive(v[i], k + "[" + std::to_string(i) + "]"));
       }},
      {"distance_cm", [](auto& c, const json& v, const auto& k) { c.distance_cm = get_positive(v, k); }},
      {"flight_time_ns", [](auto& c, const json& v, const auto& k) { c.flight_time_ns = get_positive(v, k); }},
      {"mass_multiplier", [](auto& c, const json& v, const auto& k) { c.mass_multiplier = get_positive(v, k); }},
      {"grid_points",
       [](auto& c, const json& v, const auto& k) {
         const auto n = get_integer(v, k);
         if (n < 2) throw ParseError(k, "must be at least 2");
         c.grid_points = static_cast<std::size_t>(n);
       }},
      {"window_min_ns", [](auto& c, const json& v, const auto& k) { c.window_min_ns = get_positive(v, k); }},
      {"window_max_ns", [](auto& c, const json& v, const auto& k) { c.window_max_ns = get_positive(v, k); }},
      {"reduction",
       [](auto& c, const json& v, const auto& k) {
         c.reduction = get_string(v, k);
         if (c.reduction != "marginal" && c.reduction != "slice")
           throw ParseError(k, "expected \"marginal\" or \"slice\"");
       }},
      {"polarization",
       [](auto& c, const json& v, const auto& k) {
         c.polarization = get_string(v, k);
         if (c.polarization != "polarized" && c.polarization != "unpolarized")
           throw ParseError(k, "expected \"polarized\" or \"unpolarized\"");
       }},
      {"quadrature",
       [](auto& c, const json& v, const auto& k) {
         if (!v.is_object()) throw ParseError(k, "expected an object");
         for (const auto& [key, value] : v.items()) {
           const std::string field = k + "." + key;
           if (key == "initial_samples") {
             const auto n = get_integer(value, field);
             if (n < 8) throw ParseError(field, "must be at least 8");
             c.quad.initial_samples_per_slit = static_cast<int>(n);
           } else if (key == "tolerance") {
             c.quad.refinement_tolerance = get_positive(value, field);
           } else if (key == "max_doublings") {
             const auto n = get_integer(value, field);
             if (n < 1 || n > 24) throw ParseError(field, "must be in [1, 24]");
             c.quad.max_doublings = static_cast<int>(n);
           } else {
             throw ParseError(field, "unknown key");
           }
         }
       }},
      {"exact_pairs", [](auto& c, const json& v, const auto& k) { c.exact_pairs = get_bool(v, k); }},
      {"exact_cap",
       [](auto& c, const json& v, const auto& k) {
         const auto n = get_integer(v, k);
         if (n < 2) throw ParseError(k, "must be at least 2");
         c.exact_cap = static_cast<int>(n);
       }},
      {"slit_fs", [](auto& c, const json& v, const auto& k) { c.slit_fs = get_positive(v, k); }},
      {"slit_gap_fs", [](auto& c, const json& v, const auto& k) { c.slit_gap_fs = get_non_negative(v, k); }},
      {"sweep_flight_min_ns", [](auto& c, const json& v, const auto& k) { c.sweep_flight_min_ns = get_positive(v, k); }},
      {"sweep_flight_max_ns", [](auto& c, const json& v, const auto& k) { c.sweep_flight_max_ns = get_positive(v, k); }},
      {"sweep_points",
       [](auto& c, const json& v, const auto& k) {
         const auto n = get_integer(v, k);
         if (n < 1) throw ParseError(k, "must be at least 1");
         c.sweep_points = static_cast<int>(n);
       }},
      {"sweep_grid_points",
       [](auto& c, const json& v, const auto& k) {
         const auto n = get_integer(v, k);
         if (n < 2) throw ParseError(k, "must be at least 2");
         c.sweep_grid_points = static_cast<std::size_t>(n);
       }},
      {"error_pairs",
       [](auto& c, const json& v, const auto& k) {
         if (!v.is_array()) throw ParseError(k, "expected an array of [i, j] pairs");
         c.error_pairs.clear();
         for (std::size_t i = 0; i < v.size(); ++i) {
           const std::string field = k + "[" + std::to_string(i) + "]";
           if (!v[i].is_array() || v[i].size() != 2) throw ParseError(field, "expected [i, j]");
           const auto a = get_integer(v[i][0], field);
           const auto b = get_integer(v[i][1], field);
           if (a < 1 || b < 1 || a == b) throw ParseError(field, "indices must be distinct and one-based");
           c.error_pairs.emplace_back(static_cast<int>(a), static_cast<int>(b));
         }
       }},
      {"rep_rate_mhz", [](auto& c, const json& v, const auto& k) { c.rep_rate_mhz = get_non_negative(v, k); }},
      {"window_ps", [](auto& c, const json& v, const auto& k) { c.window_ps = get_positive(v, k); }},
      {"acq_time_s", [](auto& c, const json& v, const auto& k) { c.acq_time_s = get_non_negative(v, k); }},
      {"eta1_rate_mhz", [](auto& c, const json& v, const auto& k) { c.eta1_rate_mhz = get_non_negative(v, k); }},
      {"eta2_rate_mhz", [](auto& c, const json& v, const auto& k) { c.eta2_rate_mhz = get_non_negative(v, k); }},
      {"mean_eta", [](auto& c, const json& v, const auto& k) { c.mean_eta = get_positive(v, k); }},
      {"electron_pulse_fs", [](auto& c, const json& v, const auto& k) { c.electron_pulse_fs = get_positive(v, k); }},
      {"p_incoh0", [](auto& c, const json& v, const auto& k) { c.p_incoh0 = get_positive(v, k); }},
      {"decohere_intervals",
       [](auto& c, const json& v, const auto& k) {
         const auto n = get_integer(v, k);
         if (n < 3 || n > 8) throw ParseError(k, "must be in [3, 8]");
         c.decohere_intervals = static_cast<int>(n);
       }},
      {"output_dir", [](auto& c, const json& v, const auto& k) { c.output_dir = get_string(v, k); }},
      {"svg", [](auto& c, const json& v, const auto& k) { c.svg = get_bool(v, k); }},
  };
  return setters;
}

}  // namespace

SourceSpec ScenarioConfig::source() const {
  SourceSpec s;
  s.coherence_time = t_c_fs * constants::fs;
  s.pulse_duration = t_pulse_fs * constants::fs;
  s.params = params();
  return s;
}

PhysicalParams ScenarioConfig::params() const {
  return PhysicalParams::electron(distance_cm * constants::cm, flight_time_ns * constants::ns,
                                  mass_multiplier);
}

DetectionGrid ScenarioConfig::grid_for_slit(double a, const PhysicalParams& p) const {
  if (window_min_ns || window_max_ns) {
    const auto fallback = default_detection_grid(a, p, grid_points);
    DetectionGrid g{window_min_ns ? *window_min_ns * constants::ns : fallback.t_min,
                    window_max_ns ? *window_max_ns * constants::ns : fallback.t_max, grid_points};
    g.validate();
    return g;
  }
  return default_detection_grid(a, p, grid_points);
}

void ScenarioConfig::validate() const {
  if (t_pulse_fs < t_c_fs) throw ParseError("t_pulse_fs", "pulse shorter than coherence time");
  for (std::size_t i = 0; i < pulse_durations_fs.size(); ++i)
    if (pulse_durations_fs[i] < t_c_fs)
      throw ParseError("pulse_durations_fs[" + std::to_string(i) + "]", "pulse shorter than coherence time");
  if (window_min_ns && window_max_ns && !(*window_min_ns < *window_max_ns))
    throw ParseError("window_max_ns", "must exceed window_min_ns");
  if (!(sweep_flight_min_ns <= sweep_flight_max_ns))
    throw ParseError("sweep_flight_max_ns", "must not be below sweep_flight_min_ns");
  if (eta1_rate_mhz + eta2_rate_mhz > rep_rate_mhz * (1.0 + 1e-12))
    throw ParseError("eta2_rate_mhz", "single- plus two-electron pulse rates exceed the repetition rate");
  try {
    params();
  } catch (const DomainError& e) {
    throw ParseError("distance_cm", e.what());
  }
}

ScenarioConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("", "config must be a JSON object");
  ScenarioConfig config;
  const auto& setters = top_level_setters();
  for (const auto& [key, value] : doc.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ParseError(key, "unknown key");
    it->second(config, value, key);
  }
  config.validate();
  return config;
}

std::string resolved_config_json(const ScenarioConfig& c, bool pretty) {
  json j;
  j["scenario"] = c.scenario;
  j["t_c_fs"] = c.t_c_fs;
  j["t_pulse_fs"] = c.t_pulse_fs;
  j["pulse_durations_fs"] = c.pulse_durations_fs;
  j["distance_cm"] = c.distance_cm;
  j["flight_time_ns"] = c.flight_time_ns;
  j["mass_multiplier"] = c.mass_multiplier;
  j["grid_points"] = c.grid_points;
  j["window_min_ns"] = c.window_min_ns ? json(*c.window_min_ns) : json(nullptr);
  j["window_max_ns"] = c.window_max_ns ? json(*c.window_max_ns) : json(nullptr);
  j["reduction"] = c.reduction;
  j["polarization"] = c.polarization;
  j["quadrature"] = {{"initial_samples", c.quad.initial_samples_per_slit},
                     {"tolerance", c.quad.refinement_tolerance},
                     {"max_doublings", c.quad.max_doublings}};
  j["exact_pairs"] = c.exact_pairs;
  j["exact_cap"] = c.exact_cap;
  j["slit_fs"] = c.slit_fs ? *c.slit_fs : 0.5 * c.t_c_fs;
  j["slit_gap_fs"] = c.slit_gap_fs ? *c.slit_gap_fs : (c.slit_fs ? *c.slit_fs : 0.5 * c.t_c_fs);
  j["sweep_flight_min_ns"] = c.sweep_flight_min_ns;
  j["sweep_flight_max_ns"] = c.sweep_flight_max_ns;
  j["sweep_points"] = c.sweep_points;
  j["sweep_grid_points"] = c.sweep_grid_points;
  j["error_pairs"] = json::array();
  for (const auto& [a, b] : c.error_pairs) j["error_pairs"].push_back({a, b});
  j["rep_rate_mhz"] = c.rep_rate_mhz;
  j["window_ps"] = c.window_ps;
  j["acq_time_s"] = c.acq_time_s;
  j["eta1_rate_mhz"] = c.eta1_rate_mhz;
  j["eta2_rate_mhz"] = c.eta2_rate_mhz;
  j["mean_eta"] = c.mean_eta;
  j["electron_pulse_fs"] = c.electron_pulse_fs;
  j["p_incoh0"] = c.p_incoh0 ? json(*c.p_incoh0) : json(nullptr);
  j["decohere_intervals"] = c.decohere_intervals;
  j["output_dir"] = c.output_dir;
  j["svg"] = c.svg;

  const double exact_n = 2.0 * c.t_pulse_fs / c.t_c_fs;
  j["derived"] = {{"n_intervals", std::max(2L, std::lround(exact_n))},
                  {"slot_fs", 0.5 * c.t_c_fs},
                  {"kinetic_energy_ev", kinetic_energy_ev(c.params())}};
  return pretty ? j.dump(2) : j.dump();
}

}  // namespace hbtdit
