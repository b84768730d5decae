#pragma once

// Scenario orchestration: named link scenarios, frame presets and the region,
// trade-off, spatial and capacity studies with their CSV renderings.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <system_error>
#include <vector>

#include "satsec/errors.hpp"
#include "satsec/exponents.hpp"
#include "satsec/geometry.hpp"
#include "satsec/infotheory.hpp"
#include "satsec/units.hpp"

namespace satsec {

/// One link configuration. Gains are kept in the external dB form so that a
/// scenario serializes and parses back bit-exactly.
struct Scenario {
  std::string name = "scenario";

  double rho_B_km = 35786.0;
  double rho_E_km = 1200.0;
  double theta_E_deg = 0.0;
  double r = 2.0;

  double mu_dB = 0.0;       // 20 log10 of the amplitude ratio Eve/Bob
  double gamma_n_dB = 0.0;  // 10 log10 of the noise power ratio Eve/Bob

  AntennaPattern pattern = AntennaPattern::bessel(5.0);
  double reference_unit_km = 1.0;

  long n = 16200;
  double rho = 1.0 / 3.0;
  double rho_sac = 0.18;
  double epsilon_B = 0.0;

  double E_s = 1.0;
  double n_B = 1.0;

  /// Published threshold angle this scenario is compared against, if any.
  std::optional<double> reference_deg;
  /// The published verdict is "never degraded".
  bool reference_never = false;

  LinkGeometry geometry() const { return {rho_B_km, rho_E_km, theta_E_deg, r}; }
  EveSystem eve() const { return {amplitude_from_db(mu_dB), power_from_db(gamma_n_dB)}; }

  void validate() const {
    geometry().validate();
    eve().validate();
    pattern.validate();
    if (!(reference_unit_km > 0.0) || !std::isfinite(reference_unit_km))
      throw DomainError("reference_unit_km must be > 0");
    if (n <= 0) throw DomainError("n must be positive");
    if (!(rho > 0.0 && rho <= 1.0)) throw DomainError("rho must be in (0, 1]");
    if (!(rho_sac >= 0.0 && rho_sac <= rho)) throw DomainError("rho_sac must be in [0, rho]");
    if (!(epsilon_B >= 0.0 && epsilon_B <= 1.0)) throw DomainError("epsilon_B must be in [0, 1]");
    if (!(E_s > 0.0) || !std::isfinite(E_s)) throw DomainError("E_s must be > 0");
    if (!(n_B > 0.0) || !std::isfinite(n_B)) throw DomainError("n_B must be > 0");
    if (reference_never && reference_deg) throw DomainError("reference is either an angle or 'never'");
  }
};

enum class DvbS2Frame { Short, Medium };

struct DvbS2Preset {
  DvbS2Frame frame;
  long n;
  double rho;
};

inline DvbS2Preset dvbs2(DvbS2Frame frame) {
  return frame == DvbS2Frame::Short ? DvbS2Preset{frame, 16200, 1.0 / 3.0} : DvbS2Preset{frame, 32400, 1.0 / 3.0};
}

inline DvbS2Frame parse_frame(const std::string& s) {
  if (s == "short") return DvbS2Frame::Short;
  if (s == "medium") return DvbS2Frame::Medium;
  throw ConfigError("frame", "expected 'short' or 'medium', got '" + s + "'");
}

inline const char* frame_name(DvbS2Frame f) { return f == DvbS2Frame::Short ? "short" : "medium"; }

// ---------------------------------------------------------------------------
// Presets

namespace detail {

inline Scenario geo_preset(const char* name, double theta_3dB, double mu_linear, double rho_E, double ref) {
  Scenario s;
  s.name = name;
  s.rho_B_km = 35786.0;
  s.rho_E_km = rho_E;
  s.r = 2.0;
  s.mu_dB = amplitude_to_db(mu_linear);
  s.gamma_n_dB = 0.0;
  s.pattern = AntennaPattern::bessel(theta_3dB);
  s.reference_deg = ref;
  return s;
}

inline Scenario uav_preset(const char* name, double rho_E, double r, std::optional<double> ref) {
  Scenario s;
  s.name = name;
  s.rho_B_km = 15000.0;
  s.rho_E_km = rho_E;
  s.r = r;
  s.mu_dB = amplitude_to_db(0.05);
  s.gamma_n_dB = power_to_db(3.0);
  s.pattern = AntennaPattern::bessel(5.0);
  s.reference_deg = ref;
  s.reference_never = !ref;
  return s;
}

}  // namespace detail

/// GEO Bob with LEO (1200 km) and MEO (15000 km) Eves, and MEO Bob with UAV
/// Eves. Reference angles are attached by Eve distance: the nearer Eve needs
/// the wider angular separation.
inline std::vector<Scenario> table_presets() {
  using detail::geo_preset;
  using detail::uav_preset;
  return {
      geo_preset("geo-bw5-mu0-leo", 5.0, 1.0, 1200.0, 13.0),
      geo_preset("geo-bw5-mu0-meo", 5.0, 1.0, 15000.0, 7.0),
      geo_preset("geo-bw5-mu6-leo", 5.0, 2.0, 1200.0, 18.0),
      geo_preset("geo-bw5-mu6-meo", 5.0, 2.0, 15000.0, 10.0),
      geo_preset("geo-bw10-mu0-leo", 10.0, 1.0, 1200.0, 26.0),
      geo_preset("geo-bw10-mu0-meo", 10.0, 1.0, 15000.0, 15.0),
      geo_preset("geo-bw10-mu6-leo", 10.0, 2.0, 1200.0, 28.0),
      geo_preset("geo-bw10-mu6-meo", 10.0, 2.0, 15000.0, 20.0),
      uav_preset("uav-low", 1.0, 3.0, std::nullopt),
      uav_preset("uav-medium", 5.0, 2.0, 18.0),
      uav_preset("uav-high", 10.0, 2.0, 12.0),
  };
}

inline Scenario find_preset(const std::string& name) {
  for (auto& s : table_presets())
    if (s.name == name) return s;
  throw ConfigError("preset", "unknown preset '" + name + "'");
}

// ---------------------------------------------------------------------------
// Studies

struct RegionRow {
  std::string scenario;
  DegradationResult result;
  std::optional<double> reference_deg;
  bool reference_never = false;

  /// theta* - reference, when both are angles.
  std::optional<double> residual_deg() const {
    if (!reference_deg || result.never_degraded()) return std::nullopt;
    return result.theta_star_deg - *reference_deg;
  }

  /// Verdict agrees with the reference and the residual is within tolerance.
  bool matches(double tolerance_deg) const {
    if (reference_never) return result.never_degraded();
    if (!reference_deg) return true;
    const auto res = residual_deg();
    return res && std::abs(*res) <= tolerance_deg;
  }
};

inline RegionRow run_region(const Scenario& s, const DegradationSearch& search = {}) {
  s.validate();
  DegradationSearch opt = search;
  opt.reference_unit_km = s.reference_unit_km;
  return {s.name, degradation_angle(s.pattern, s.eve(), s.geometry(), opt), s.reference_deg, s.reference_never};
}

inline std::vector<RegionRow> run_region_study(std::span<const Scenario> scenarios,
                                               const DegradationSearch& search = {}) {
  std::vector<RegionRow> out;
  out.reserve(scenarios.size());
  for (const auto& s : scenarios) out.push_back(run_region(s, search));
  return out;
}

struct TradeoffRow {
  double rho_sac = 0.0;
  double rho_s = 0.0;
  LeakageBound leak;
};

/// Sacrifice-rate sweep for one frame; grid points must lie in [0, rho].
inline std::vector<TradeoffRow> run_tradeoff(const DvbS2Preset& preset, double gamma_g0, double n_B,
                                             std::span<const double> rho_sac_grid,
                                             ExponentMode mode = ExponentMode::Tightest) {
  if (!(gamma_g0 >= 0.0) || !std::isfinite(gamma_g0)) throw DomainError("gamma_g0 must be >= 0");
  const BpskAwgn eve{gamma_g0, n_B};
  eve.validate();
  std::vector<TradeoffRow> out;
  out.reserve(rho_sac_grid.size());
  for (double x : rho_sac_grid) {
    if (!(x >= 0.0 && x <= preset.rho + 1e-12)) throw DomainError("rho_sac grid must lie in [0, rho]");
    out.push_back({x, preset.rho - x, sacrifice_exponent(x, preset.n, eve, mode)});
  }
  return out;
}

/// Spatial leakage over theta at the scenario's rho_E, or over the
/// rho_E x theta product when rho_E_grid is non-empty (rho_E outer).
inline std::vector<SpatialRow> run_spatial_map(const Scenario& s, std::span<const double> theta_grid_deg,
                                               std::span<const double> rho_E_grid_km = {},
                                               ExponentMode mode = ExponentMode::Tightest) {
  s.validate();
  const SpatialSettings cfg{s.rho_sac, s.n, s.n_B, mode, s.reference_unit_km};
  if (rho_E_grid_km.empty()) return spatial_leakage(s.pattern, s.eve(), s.geometry(), theta_grid_deg, cfg);
  std::vector<SpatialRow> out;
  for (double rho_E : rho_E_grid_km) {
    auto g = s.geometry();
    g.rho_E_km = rho_E;
    auto rows = spatial_leakage(s.pattern, s.eve(), g, theta_grid_deg, cfg);
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Grids and CSV

/// `count` evenly spaced points from lo to hi inclusive.
inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count == 0) throw DomainError("grid needs at least one point");
  if (count == 1) return {lo};
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  v.back() = hi;
  return v;
}

inline std::string capacity_csv(std::span<const CapacityCell> cells) {
  std::string out = "gamma_g0,snr_db,cs_bits\n";
  for (const auto& c : cells)
    out += format_double(c.gamma_g0) + "," + format_double(c.snr_db) + "," + format_double(c.cs_bits) + "\n";
  return out;
}

inline const char* verdict_name(DegradationResult::Verdict v) {
  switch (v) {
    case DegradationResult::Verdict::WholeRegion: return "whole-region";
    case DegradationResult::Verdict::Threshold: return "threshold";
    case DegradationResult::Verdict::NeverDegraded: return "never-degraded";
  }
  return "?";
}

inline std::string region_csv(std::span<const RegionRow> rows) {
  std::string out = "scenario,verdict,theta_star_deg,first_crossing_deg,reference_deg,residual_deg\n";
  for (const auto& r : rows) {
    const bool never = r.result.never_degraded();
    out += r.scenario + "," + verdict_name(r.result.verdict) + ",";
    out += (never ? "" : format_double(r.result.theta_star_deg)) + ",";
    out += (never ? "" : format_double(r.result.first_crossing_deg)) + ",";
    out += (r.reference_never ? "never" : r.reference_deg ? format_double(*r.reference_deg) : "") + ",";
    const auto res = r.residual_deg();
    out += (res ? format_double(*res) : "") + "\n";
  }
  return out;
}

inline std::string tradeoff_csv(std::span<const TradeoffRow> rows) {
  std::string out = "rho_sac,s_star,exponent_bits,bound,rho_s\n";
  for (const auto& r : rows)
    out += format_double(r.rho_sac) + "," + format_double(r.leak.s_star) + "," + format_double(r.leak.exponent_bits) +
           "," + format_double(r.leak.reported_bound()) + "," + format_double(r.rho_s) + "\n";
  return out;
}

inline std::string spatial_csv(std::span<const SpatialRow> rows, bool with_distance) {
  std::string out = with_distance ? "rho_E_km," : "";
  out += "theta_deg,gamma_g0,exponent_bits,bound,guaranteed\n";
  for (const auto& r : rows) {
    if (with_distance) out += format_double(r.rho_E_km) + ",";
    out += format_double(r.theta_deg) + "," + format_double(r.gamma_g0) + "," + format_double(r.exponent_bits) + "," +
           format_double(r.bound) + "," + (r.guaranteed ? "1" : "0") + "\n";
  }
  return out;
}

/// Writes via a sibling temporary file and a rename, so readers never see a
/// partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot move output into place at '" + path.string() + "'");
  }
}

}  // namespace satsec
