#pragma once

// Satellite wiretap geometry: antenna pattern, path-loss ratio and the
// regularized Eve coefficient gamma_g0 that decides stochastic degradation.

#include <algorithm>
#include <cmath>
#include <vector>

#include "satsec/errors.hpp"
#include "satsec/units.hpp"

namespace satsec {

/// Alice at the origin, Bob on the reference axis (theta_B = 0).
struct LinkGeometry {
  double rho_B_km = 0.0;
  double rho_E_km = 0.0;
  double theta_E_deg = 0.0;
  double r = 2.0;  // path-loss exponent of Eve's channel

  void validate() const {
    if (!(rho_B_km > 0.0) || !std::isfinite(rho_B_km)) throw DomainError("rho_B_km must be > 0");
    if (!(rho_E_km > 0.0) || !std::isfinite(rho_E_km)) throw DomainError("rho_E_km must be > 0");
    if (!(theta_E_deg >= 0.0 && theta_E_deg <= 90.0)) throw DomainError("theta_E_deg must be in [0, 90]");
    if (!(r >= 2.0) || !std::isfinite(r)) throw DomainError("path-loss exponent r must be >= 2");
  }
};

struct MaskPoint {
  double angle_deg;
  double gain_db;  // amplitude gain relative to boresight
};

/// Rotationally symmetric transmit pattern, normalized to 1 at boresight.
struct AntennaPattern {
  enum class Kind { BesselLobes, RegulatoryMask };

  Kind kind = Kind::BesselLobes;
  double theta_3dB_deg = 5.0;
  std::vector<MaskPoint> mask;

  static AntennaPattern bessel(double theta_3dB_deg) {
    AntennaPattern p;
    p.kind = Kind::BesselLobes;
    p.theta_3dB_deg = theta_3dB_deg;
    p.validate();
    return p;
  }

  static AntennaPattern regulatory_mask(std::vector<MaskPoint> points, double theta_3dB_deg = 0.0) {
    AntennaPattern p;
    p.kind = Kind::RegulatoryMask;
    p.theta_3dB_deg = theta_3dB_deg;
    p.mask = std::move(points);
    p.validate();
    return p;
  }

  void validate() const {
    if (kind == Kind::BesselLobes) {
      if (!(theta_3dB_deg > 0.0 && theta_3dB_deg < 90.0))
        throw DomainError("theta_3dB_deg must be in (0, 90)");
      return;
    }
    if (mask.empty()) throw DomainError("regulatory mask needs at least one point");
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (!std::isfinite(mask[i].angle_deg) || !std::isfinite(mask[i].gain_db))
        throw DomainError("regulatory mask entries must be finite");
      if (i > 0 && !(mask[i].angle_deg > mask[i - 1].angle_deg))
        throw DomainError("regulatory mask must be sorted by strictly increasing angle");
    }
  }
};

/// Eve's capability envelope, collapsed to worst-case constants.
struct EveSystem {
  double mu = 1.0;       // antenna amplitude ratio Eve/Bob
  double gamma_n = 1.0;  // noise power ratio Eve/Bob

  void validate() const {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("mu must be finite and > 0");
    if (!(gamma_n > 0.0) || !std::isfinite(gamma_n)) throw DomainError("gamma_n must be finite and > 0");
  }
};

/// Regularized scalar wiretap channel: Bob sees X + noise, Eve sees gamma_g0 X + noise,
/// both with the same noise level n_B.
struct WiretapChannel {
  double gamma_g0 = 0.0;
  double n_B = 1.0;

  bool degraded() const { return gamma_g0 < 1.0; }
};

inline constexpr double kAmplitudeFloor = 1e-12;

namespace detail {

// J1(x)/(2x) + 36 J3(x)/x^3. Small x uses the Taylor expansion 1 - 5x^2/64 + 19x^4/7680.
inline double bessel_lobes(double x) {
  if (x < 1e-3) {
    const double x2 = x * x;
    return 1.0 - 5.0 * x2 / 64.0 + 19.0 * x2 * x2 / 7680.0;
  }
  return std::cyl_bessel_j(1.0, x) / (2.0 * x) + 36.0 * std::cyl_bessel_j(3.0, x) / (x * x * x);
}

inline double mask_gain_db(const std::vector<MaskPoint>& mask, double theta_deg) {
  if (theta_deg <= mask.front().angle_deg) return mask.front().gain_db;
  if (theta_deg >= mask.back().angle_deg) return mask.back().gain_db;
  auto hi = std::upper_bound(mask.begin(), mask.end(), theta_deg,
                             [](double t, const MaskPoint& p) { return t < p.angle_deg; });
  auto lo = hi - 1;
  const double w = (theta_deg - lo->angle_deg) / (hi->angle_deg - lo->angle_deg);
  return lo->gain_db + w * (hi->gain_db - lo->gain_db);
}

}  // namespace detail

/// Amplitude |alpha(theta)| of the transmit pattern, floored at 1e-12 so that
/// pattern nulls stay finite in dB.
inline double antenna_amplitude(const AntennaPattern& pattern, double theta_deg) {
  if (!(theta_deg >= 0.0 && theta_deg <= 90.0))
    throw DomainError("antenna angle must be in [0, 90] degrees");
  double a;
  if (pattern.kind == AntennaPattern::Kind::BesselLobes) {
    const double k = 2.0712 / std::sin(deg_to_rad(pattern.theta_3dB_deg));
    a = std::abs(detail::bessel_lobes(k * std::sin(deg_to_rad(theta_deg))));
  } else {
    a = amplitude_from_db(detail::mask_gain_db(pattern.mask, theta_deg));
  }
  return std::max(a, kAmplitudeFloor);
}

/// beta = sqrt(rho_B^2 / rho_E^r), distances expressed in multiples of
/// reference_unit_km before exponentiation (kilometers by default).
inline double path_loss_ratio(const LinkGeometry& geom, double reference_unit_km = 1.0) {
  geom.validate();
  const double rb = geom.rho_B_km / reference_unit_km;
  const double re = geom.rho_E_km / reference_unit_km;
  // log form keeps r = 3 at large distances away from overflow
  return std::exp(std::log(rb) - 0.5 * geom.r * std::log(re));
}

inline double channel_coefficient(const AntennaPattern& pattern, const EveSystem& eve,
                                  const LinkGeometry& geom, double reference_unit_km = 1.0) {
  eve.validate();
  return antenna_amplitude(pattern, geom.theta_E_deg) * eve.mu * path_loss_ratio(geom, reference_unit_km);
}

inline WiretapChannel regularize(double gamma_g, const EveSystem& eve, double n_B) {
  if (!(eve.gamma_n > 0.0)) throw DomainError("gamma_n must be > 0");
  return WiretapChannel{gamma_g / std::sqrt(eve.gamma_n), n_B};
}

struct DegradationResult {
  enum class Verdict { WholeRegion, Threshold, NeverDegraded };

  Verdict verdict = Verdict::NeverDegraded;
  // Infimum of the angle beyond which gamma_g0 < 1 holds up to 90 degrees.
  double theta_star_deg = 90.0;
  // First angle at which the main lobe falls below the threshold. Equals
  // theta_star_deg unless a side lobe re-enters the non-degraded zone.
  double first_crossing_deg = 90.0;

  bool never_degraded() const { return verdict == Verdict::NeverDegraded; }
};

struct DegradationSearch {
  double scan_step_deg = 0.005;
  double bisection_tol_deg = 1e-9;
  double reference_unit_km = 1.0;
};

/// Envelope threshold angle of the degraded region for an Eve placed at
/// (geom.rho_E_km, r); geom.theta_E_deg is ignored.
inline DegradationResult degradation_angle(const AntennaPattern& pattern, const EveSystem& eve,
                                           LinkGeometry geom, const DegradationSearch& opt = {}) {
  pattern.validate();
  eve.validate();
  geom.theta_E_deg = 0.0;
  geom.validate();
  const double scale = eve.mu * path_loss_ratio(geom, opt.reference_unit_km) / std::sqrt(eve.gamma_n);
  auto margin = [&](double theta) { return antenna_amplitude(pattern, theta) * scale - 1.0; };

  auto refine = [&](double bad, double good) {
    // margin(bad) >= 0, margin(good) < 0
    while (std::abs(good - bad) > opt.bisection_tol_deg) {
      const double mid = 0.5 * (bad + good);
      (margin(mid) >= 0.0 ? bad : good) = mid;
    }
    return good;
  };

  DegradationResult out;
  if (margin(90.0) >= 0.0) return out;  // never degraded at the far edge

  const int steps = static_cast<int>(std::ceil(90.0 / opt.scan_step_deg));
  std::vector<double> grid(steps + 1);
  for (int i = 0; i <= steps; ++i) grid[i] = std::min(90.0, i * opt.scan_step_deg);

  // last non-degraded grid point scanning down from 90
  int last_bad = -1;
  for (int i = steps; i >= 0; --i) {
    if (margin(grid[i]) >= 0.0) {
      last_bad = i;
      break;
    }
  }
  if (last_bad < 0) {
    out.verdict = DegradationResult::Verdict::WholeRegion;
    out.theta_star_deg = 0.0;
    out.first_crossing_deg = 0.0;
    return out;
  }
  out.verdict = DegradationResult::Verdict::Threshold;
  out.theta_star_deg = refine(grid[last_bad], grid[last_bad + 1]);
  if (out.theta_star_deg <= opt.bisection_tol_deg) {
    // only the boresight point itself sits on the threshold
    out.verdict = DegradationResult::Verdict::WholeRegion;
    out.theta_star_deg = out.first_crossing_deg = 0.0;
    return out;
  }

  int first_good = 0;
  while (margin(grid[first_good]) >= 0.0) ++first_good;
  out.first_crossing_deg = refine(grid[first_good - 1], grid[first_good]);
  return out;
}

}  // namespace satsec
