#pragma once

#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <system_error>

namespace satsec {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kLn2 = std::numbers::ln2;
inline constexpr double kLog2e = std::numbers::log2e;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// Gains in dB are amplitude gains for mu and the mask (20 log10), power ratios
// for gamma_n and SNR (10 log10).
inline double amplitude_from_db(double db) { return std::pow(10.0, db / 20.0); }
inline double amplitude_to_db(double amplitude) { return 20.0 * std::log10(amplitude); }
inline double power_from_db(double db) { return std::pow(10.0, db / 10.0); }
inline double power_to_db(double power) { return 10.0 * std::log10(power); }

/// Noise parameter n_B for a given E_s/n_B in dB. This is the single place
/// where SNR and noise level are converted.
inline double noise_from_snr_db(double snr_db, double symbol_energy = 1.0) {
  return symbol_energy / power_from_db(snr_db);
}
inline double snr_db_from_noise(double n_B, double symbol_energy = 1.0) {
  return power_to_db(symbol_energy / n_B);
}

/// Shortest decimal representation that parses back to the same double.
inline std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return std::to_string(value);
  return std::string(buf, ptr);
}

}  // namespace satsec
