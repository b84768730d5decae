#pragma once

// Scenario files: INI text with a [scenario] section (link, Eve, pattern and
// code fields) and an optional [experiment] section selecting a study and its
// grids. Doubles are written in shortest round-trip form.

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "satsec/errors.hpp"
#include "satsec/linkdesign.hpp"
#include "satsec/units.hpp"

namespace satsec {

struct Experiment {
  std::string study;  // capacity | region | tradeoff | spatial; empty when unset
  std::vector<double> gamma_grid;
  std::vector<double> snr_grid_db;
  std::vector<double> rho_sac_grid;
  std::vector<double> theta_grid_deg;
  std::vector<double> rho_E_grid_km;
  std::optional<double> gamma_g0;
  std::optional<DvbS2Frame> frame;
  ExponentMode mode = ExponentMode::Tightest;
};

struct ScenarioFile {
  Scenario scenario;
  Experiment experiment;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& field, const std::string& raw) {
  const std::string v = trim(raw);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError(field, "expected a number, got '" + raw + "'");
  return out;
}

inline long parse_integer(const std::string& field, const std::string& raw) {
  const std::string v = trim(raw);
  long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError(field, "expected an integer, got '" + raw + "'");
  return out;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
  return parts;
}

}  // namespace detail

/// Grid text: "lo:hi:count" for an evenly spaced grid, otherwise a comma list.
inline std::vector<double> parse_grid(const std::string& field, const std::string& text) {
  const std::string t = detail::trim(text);
  if (t.empty()) throw ConfigError(field, "grid is empty");
  if (t.find(':') != std::string::npos) {
    const auto p = detail::split(t, ':');
    if (p.size() != 3) throw ConfigError(field, "range grid must be 'lo:hi:count'");
    const long count = detail::parse_integer(field, p[2]);
    if (count < 1) throw ConfigError(field, "grid count must be >= 1");
    return linspace(detail::parse_number(field, p[0]), detail::parse_number(field, p[1]), static_cast<std::size_t>(count));
  }
  std::vector<double> out;
  for (const auto& item : detail::split(t, ',')) out.push_back(detail::parse_number(field, item));
  return out;
}

inline std::string format_grid(const std::vector<double>& grid) {
  std::string out;
  for (std::size_t i = 0; i < grid.size(); ++i) out += (i ? "," : "") + format_double(grid[i]);
  return out;
}

/// Mask text: comma list of angle_deg:gain_dB pairs.
inline std::vector<MaskPoint> parse_mask(const std::string& text) {
  std::vector<MaskPoint> out;
  for (const auto& item : detail::split(detail::trim(text), ',')) {
    const auto p = detail::split(item, ':');
    if (p.size() != 2) throw ConfigError("scenario.mask", "mask entries must be 'angle_deg:gain_dB'");
    out.push_back({detail::parse_number("scenario.mask", p[0]), detail::parse_number("scenario.mask", p[1])});
  }
  return out;
}

inline std::string format_mask(const std::vector<MaskPoint>& mask) {
  std::string out;
  for (std::size_t i = 0; i < mask.size(); ++i)
    out += (i ? "," : "") + format_double(mask[i].angle_deg) + ":" + format_double(mask[i].gain_db);
  return out;
}

inline ExponentMode parse_mode(const std::string& s) {
  if (s == "tightest") return ExponentMode::Tightest;
  if (s == "literal-min") return ExponentMode::LiteralMin;
  throw ConfigError("experiment.mode", "expected 'tightest' or 'literal-min', got '" + s + "'");
}

inline const char* mode_name(ExponentMode m) { return m == ExponentMode::Tightest ? "tightest" : "literal-min"; }

/// Field setters shared by the file reader and the command line.
inline void set_scenario_field(Scenario& s, const std::string& key, const std::string& value) {
  const std::string field = "scenario." + key;
  auto num = [&] { return detail::parse_number(field, value); };
  if (key == "name") s.name = detail::trim(value);
  else if (key == "rho_B_km") s.rho_B_km = num();
  else if (key == "rho_E_km") s.rho_E_km = num();
  else if (key == "theta_E_deg") s.theta_E_deg = num();
  else if (key == "r") s.r = num();
  else if (key == "mu_dB") s.mu_dB = num();
  else if (key == "gamma_n_dB") s.gamma_n_dB = num();
  else if (key == "theta_3dB_deg") s.pattern.theta_3dB_deg = num();
  else if (key == "pattern") {
    const auto v = detail::trim(value);
    if (v == "bessel") s.pattern.kind = AntennaPattern::Kind::BesselLobes;
    else if (v == "mask") s.pattern.kind = AntennaPattern::Kind::RegulatoryMask;
    else throw ConfigError(field, "expected 'bessel' or 'mask', got '" + v + "'");
  } else if (key == "mask") s.pattern.mask = parse_mask(value);
  else if (key == "reference_unit_km") s.reference_unit_km = num();
  else if (key == "n") s.n = detail::parse_integer(field, value);
  else if (key == "rho") s.rho = num();
  else if (key == "rho_sac") s.rho_sac = num();
  else if (key == "epsilon_B") s.epsilon_B = num();
  else if (key == "E_s") s.E_s = num();
  else if (key == "n_B") s.n_B = num();
  else if (key == "reference") {
    const auto v = detail::trim(value);
    s.reference_never = v == "never";
    s.reference_deg.reset();
    if (!s.reference_never && !v.empty()) s.reference_deg = num();
  } else
    throw ConfigError(field, "unknown field");
}

inline void set_experiment_field(Experiment& e, const std::string& key, const std::string& value) {
  const std::string field = "experiment." + key;
  const auto v = detail::trim(value);
  if (key == "study") {
    if (v != "capacity" && v != "region" && v != "tradeoff" && v != "spatial")
      throw ConfigError(field, "expected capacity, region, tradeoff or spatial, got '" + v + "'");
    e.study = v;
  } else if (key == "gamma_grid") e.gamma_grid = parse_grid(field, v);
  else if (key == "snr_grid_db") e.snr_grid_db = parse_grid(field, v);
  else if (key == "rho_sac_grid") e.rho_sac_grid = parse_grid(field, v);
  else if (key == "theta_grid_deg") e.theta_grid_deg = parse_grid(field, v);
  else if (key == "rho_E_grid_km") e.rho_E_grid_km = parse_grid(field, v);
  else if (key == "gamma_g0") e.gamma_g0 = detail::parse_number(field, v);
  else if (key == "frame") {
    try {
      e.frame = parse_frame(v);
    } catch (const ConfigError& err) {
      throw ConfigError(field, err.what());
    }
  } else if (key == "mode") e.mode = parse_mode(v);
  else
    throw ConfigError(field, "unknown field");
}

namespace detail {

// Maps a validation message to the scenario key it is about, by its first word.
inline std::string scenario_field_of(const std::string& message) {
  static const std::map<std::string, std::string> keys{
      {"rho_B_km", "rho_B_km"},     {"rho_E_km", "rho_E_km"},   {"theta_E_deg", "theta_E_deg"},
      {"path-loss", "r"},           {"mu", "mu_dB"},            {"gamma_n", "gamma_n_dB"},
      {"theta_3dB_deg", "theta_3dB_deg"}, {"regulatory", "mask"}, {"reference_unit_km", "reference_unit_km"},
      {"n", "n"},                   {"rho", "rho"},             {"rho_sac", "rho_sac"},
      {"epsilon_B", "epsilon_B"},   {"E_s", "E_s"},             {"n_B", "n_B"},
      {"reference", "reference"}};
  const auto it = keys.find(message.substr(0, message.find(' ')));
  return it == keys.end() ? "scenario" : "scenario." + it->second;
}

}  // namespace detail

/// Validates the scenario and rethrows domain errors as ConfigError naming the key.
inline void check_scenario(const Scenario& s) {
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw ConfigError(detail::scenario_field_of(e.what()), e.what());
  }
}

inline ScenarioFile parse_scenario_text(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("file", e.message() + " at line " + std::to_string(e.line()));
  }

  ScenarioFile out;
  bool have_scenario = false;
  for (const auto& [section, body] : tree) {
    if (section == "scenario") {
      have_scenario = true;
      // pattern kind first so a mask given before it is not lost
      if (auto kind = body.get_optional<std::string>("pattern")) set_scenario_field(out.scenario, "pattern", *kind);
      for (const auto& [key, node] : body) set_scenario_field(out.scenario, key, node.data());
    } else if (section == "experiment") {
      for (const auto& [key, node] : body) set_experiment_field(out.experiment, key, node.data());
    } else if (body.empty()) {
      throw ConfigError(section, "key outside any section");
    } else {
      throw ConfigError(section, "unknown section");
    }
  }
  if (!have_scenario) throw ConfigError("scenario", "missing [scenario] section");
  check_scenario(out.scenario);
  return out;
}

inline ScenarioFile read_scenario_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_scenario_text(ss.str());
}

inline std::string write_scenario_text(const Scenario& s, const Experiment* e = nullptr) {
  std::string out = "[scenario]\n";
  auto kv = [&out](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
  kv("name", s.name);
  kv("rho_B_km", format_double(s.rho_B_km));
  kv("rho_E_km", format_double(s.rho_E_km));
  kv("theta_E_deg", format_double(s.theta_E_deg));
  kv("r", format_double(s.r));
  kv("mu_dB", format_double(s.mu_dB));
  kv("gamma_n_dB", format_double(s.gamma_n_dB));
  kv("pattern", s.pattern.kind == AntennaPattern::Kind::BesselLobes ? "bessel" : "mask");
  kv("theta_3dB_deg", format_double(s.pattern.theta_3dB_deg));
  if (!s.pattern.mask.empty()) kv("mask", format_mask(s.pattern.mask));
  kv("reference_unit_km", format_double(s.reference_unit_km));
  kv("n", std::to_string(s.n));
  kv("rho", format_double(s.rho));
  kv("rho_sac", format_double(s.rho_sac));
  kv("epsilon_B", format_double(s.epsilon_B));
  kv("E_s", format_double(s.E_s));
  kv("n_B", format_double(s.n_B));
  if (s.reference_never) kv("reference", "never");
  else if (s.reference_deg) kv("reference", format_double(*s.reference_deg));

  if (e && !e->study.empty()) {
    out += "\n[experiment]\n";
    kv("study", e->study);
    if (!e->gamma_grid.empty()) kv("gamma_grid", format_grid(e->gamma_grid));
    if (!e->snr_grid_db.empty()) kv("snr_grid_db", format_grid(e->snr_grid_db));
    if (!e->rho_sac_grid.empty()) kv("rho_sac_grid", format_grid(e->rho_sac_grid));
    if (!e->theta_grid_deg.empty()) kv("theta_grid_deg", format_grid(e->theta_grid_deg));
    if (!e->rho_E_grid_km.empty()) kv("rho_E_grid_km", format_grid(e->rho_E_grid_km));
    if (e->gamma_g0) kv("gamma_g0", format_double(*e->gamma_g0));
    if (e->frame) kv("frame", frame_name(*e->frame));
    kv("mode", mode_name(e->mode));
  }
  return out;
}

}  // namespace satsec
