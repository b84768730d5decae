#pragma once

// Finite-length secrecy exponents. psi and E0 are in nats; exponents and
// bounds are in bits so that bound == 2^(-n * exponent).

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "satsec/errors.hpp"
#include "satsec/geometry.hpp"
#include "satsec/infotheory.hpp"
#include "satsec/optimize.hpp"
#include "satsec/quadrature.hpp"
#include "satsec/units.hpp"

namespace satsec {

/// Upper end of the admissible s-interval; 1/(1-s) blows up at s = 1.
inline constexpr double kSMax = 1.0 - 1e-6;
/// Lower end used by the literal-min mode; s = 0 itself is excluded.
inline constexpr double kSMin = 1e-6;
/// Reported bounds are floored here so CSV output never underflows to 0.
inline constexpr double kBoundFloor = 1e-300;

/// (n, k_n, k_n') plus the reliability code rate. epsilon_B is opaque metadata.
struct CodeParams {
  long n = 0;
  long k = 0;
  long k_prime = 0;
  double rho = 1.0;
  double epsilon_B = 0.0;

  double rho_sac() const { return static_cast<double>(k_prime) / static_cast<double>(n); }
  double rho_s() const { return rho - rho_sac(); }

  void validate() const {
    if (n <= 0) throw DomainError("block length n must be positive");
    if (k < 0 || k_prime < 0) throw DomainError("k and k_prime must be non-negative");
    if (!(rho >= 0.0)) throw DomainError("rho must be >= 0");
    if (static_cast<double>(k + k_prime) > n * rho + 1e-9)
      throw DomainError("k + k_prime exceeds the codebook budget n * rho");
    if (!(epsilon_B >= 0.0 && epsilon_B <= 1.0)) throw DomainError("epsilon_B must be in [0, 1]");
  }
};

struct LeakageBound {
  double exponent_bits = 0.0;
  double bound = 1.0;  // 2^(-n * exponent_bits), unfloored
  double s_star = 0.0;
  bool grid_fallback = false;

  double reported_bound() const { return std::max(bound, kBoundFloor); }
};

enum class ExponentMode {
  Tightest,   // supremum over s of the exponent: the tightest bound in the family
  LiteralMin  // minimum over s in [kSMin, kSMax], as the formula is printed
};

// ---------------------------------------------------------------------------
// psi(s) = log sum_{x,z} q(x) W(z|x)^{1+s} (sum_x q(x) W(z|x))^{-s}

inline double psi(double s, const DiscreteChannel& ch, std::span<const double> q) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("psi requires 0 < s < 1");
  detail::check_distribution(q, ch.inputs());
  double acc = 0.0;
  for (std::size_t z = 0; z < ch.outputs(); ++z) {
    double pz = 0.0;
    for (std::size_t x = 0; x < ch.inputs(); ++x) pz += q[x] * ch(x, z);
    if (pz <= 0.0) continue;
    for (std::size_t x = 0; x < ch.inputs(); ++x) {
      const double w = ch(x, z);
      if (q[x] > 0.0 && w > 0.0) acc += q[x] * w * std::pow(w / pz, s);
    }
  }
  return std::log(acc);
}

inline double psi(double s, const DiscreteChannel& ch) {
  const auto q = uniform_distribution(ch.inputs());
  return psi(s, ch, q);
}

namespace detail {

// log cosh y = log1p(2 sinh^2(y/2)), accurate as y -> 0
inline double log_cosh_small(double y) {
  if (y > 300.0) return y - kLn2 + std::log1p(std::exp(-2.0 * y));
  const double h = std::sinh(0.5 * y);
  return std::log1p(2.0 * h * h);
}

// (1+t)^{1+s} + (1-t)^{1+s} - 2 for 0 <= t < 1, without the O(t) cancellation
inline double two_point_moment(double t, double s) {
  if (t < 0.05) {
    // 2 * sum over even k >= 2 of binom(1+s, k) t^k
    double c = (1.0 + s) * s / 2.0;
    double tk = t * t;
    double acc = c * tk;
    for (int k = 4; k <= 24; k += 2) {
      c *= (1.0 + s - (k - 2)) * (1.0 + s - (k - 1)) / ((k - 1.0) * k);
      tk *= t * t;
      acc += c * tk;
    }
    return 2.0 * acc;
  }
  return (1.0 + t) * std::expm1(s * std::log1p(t)) + (1.0 - t) * std::expm1(s * std::log1p(-t));
}

// (1-s) log cosh(p y) - log cosh(y) with p = 1/(1-s); below p y = 0.02 the
// log cosh series is collected by powers of y so that (1-s) p^{2k} - 1 = p^{2k-1} - 1
// is formed exactly.
inline double e0_exponent_small(double y, double s, double p) {
  if (p * y >= 0.02) return (1.0 - s) * log_cosh_small(p * y) - log_cosh_small(y);
  static constexpr double c[] = {1.0 / 2, -1.0 / 12, 1.0 / 45, -17.0 / 2520, 31.0 / 14175};
  const double lp = -std::log1p(-s);  // log p
  const double y2 = y * y;
  double yk = y2;
  double acc = 0.0;
  for (int k = 1; k <= 5; ++k) {
    acc += c[k - 1] * yk * std::expm1((2 * k - 1) * lp);
    yk *= y2;
  }
  return acc;
}

}  // namespace detail

/// psi under uniform BPSK input, evaluated as log1p of a small correction so
/// the s -> 0 limit keeps its relative precision.
inline double psi(double s, const BpskAwgn& ch) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("psi requires 0 < s < 1");
  ch.validate();
  if (ch.amplitude == 0.0) return 0.0;
  // For z >= 0 with d = log W(z|+1) - log W(z|-1) = 2 a z / n_B:
  //   log(W+/Wbar) = ln2 - log1p(e^-d),  log(W-/Wbar) = ln2 - d - log1p(e^-d)
  auto f = [&](double z) {
    const double d = 2.0 * ch.amplitude * z / ch.n_B;
    // W(z|+-1) = Wbar (1 +- tanh(d/2))
    if (d < 2.0) return 0.25 * (ch.density(z, +1) + ch.density(z, -1)) * detail::two_point_moment(std::tanh(0.5 * d), s);
    const double up = kLn2 - std::log1p(std::exp(-d));
    return 0.5 * ch.density(z, +1) * std::expm1(s * up) + 0.5 * ch.density(z, -1) * std::expm1(s * (up - d));
  };
  // even integrand
  const auto r = integrate(f, 0.0, ch.integration_half_width(), {1e-15, 1e-9}, {ch.amplitude}, "psi");
  return std::log1p(2.0 * r.value);
}

// ---------------------------------------------------------------------------
// E0(s) = log sum_z (sum_x q(x) W(z|x)^{1/(1-s)})^{1-s}

inline void check_e0_domain(double s) {
  if (!(s >= 0.0)) throw DomainError("E0 requires s >= 0");
  if (s > kSMax) throw DomainError("E0 requires s <= 1 - 1e-6");
}

inline double e0(double s, const DiscreteChannel& ch, std::span<const double> q) {
  check_e0_domain(s);
  detail::check_distribution(q, ch.inputs());
  if (s == 0.0) return 0.0;
  const double p = 1.0 / (1.0 - s);
  double acc = 0.0;
  for (std::size_t z = 0; z < ch.outputs(); ++z) {
    // log-domain inner sum to survive large p
    double lmax = -std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < ch.inputs(); ++x)
      if (q[x] > 0.0 && ch(x, z) > 0.0) lmax = std::max(lmax, std::log(ch(x, z)));
    if (lmax == -std::numeric_limits<double>::infinity()) continue;
    double inner = 0.0;
    for (std::size_t x = 0; x < ch.inputs(); ++x)
      if (q[x] > 0.0 && ch(x, z) > 0.0) inner += q[x] * std::exp(p * (std::log(ch(x, z)) - lmax));
    acc += std::exp(lmax + (1.0 - s) * std::log(inner));
  }
  return std::log(acc);
}

inline double e0(double s, const DiscreteChannel& ch) {
  const auto q = uniform_distribution(ch.inputs());
  return e0(s, ch, q);
}

/// E0 under uniform BPSK input; by symmetry this is also the maximum over
/// input distributions.
inline double e0(double s, const BpskAwgn& ch) {
  check_e0_domain(s);
  ch.validate();
  if (s == 0.0 || ch.amplitude == 0.0) return 0.0;
  const double p = 1.0 / (1.0 - s);
  // With d = 2 a z / n_B >= 0 the integrand (sum_x W^p / 2)^{1-s} - Wbar reduces to
  //   Wbar * expm1((1-s) log1p(e^{-p d}) - log1p(e^{-d}) + s ln2),
  // rearranged so that no two O(1) terms cancel when s is small.
  auto f = [&](double z) {
    const double d = 2.0 * ch.amplitude * z / ch.n_B;
    const double wbar = 0.5 * (ch.density(z, +1) + ch.density(z, -1));
    // small d: the same quantity is (1-s) log cosh(p d/2) - log cosh(d/2), free of O(d) cancellation
    const double g = d < 2.0 ? detail::e0_exponent_small(0.5 * d, s, p)
                             : std::log1p(std::expm1(-(p - 1.0) * d) / (1.0 + std::exp(d))) +
                                   s * (kLn2 - std::log1p(std::exp(-p * d)));
    return wbar * std::expm1(g);
  };
  const auto r = integrate(f, 0.0, ch.integration_half_width(), {1e-15, 1e-9}, {ch.amplitude}, "e0");
  return std::log1p(2.0 * r.value);
}

// ---------------------------------------------------------------------------

/// Renyi entropy H_{1+s} in bits.
inline double renyi_entropy(std::span<const double> dist, double s) {
  if (dist.empty()) throw DomainError("Renyi entropy of an empty distribution");
  if (!(s > 0.0 && s < 1.0)) throw DomainError("Renyi order requires 0 < s < 1");
  double sum = 0.0;
  double total = 0.0;
  for (double p : dist) {
    if (!(p >= 0.0)) throw DomainError("probabilities must be >= 0");
    total += p;
    if (p > 0.0) sum += std::pow(p, 1.0 + s);
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("seed distribution must sum to 1");
  return std::max(0.0, -std::log2(sum) / s);
}

/// log2 of (1/s) 2^{-s h} e^{n E0(s)}, h = sacrificed entropy in bits
/// (k' for uniform sacrifice randomness, H_{1+s}(L) otherwise).
template <class Channel>
double log2_leakage_bound(double s, long n, double sacrificed_bits, const Channel& ch) {
  return -std::log2(s) - s * sacrificed_bits + static_cast<double>(n) * e0(s, ch) * kLog2e;
}

/// Hash-averaged leakage bound at a fixed s; valid for every s in (0, 1).
template <class Channel>
double leakage_bound_at(double s, const CodeParams& params, const Channel& ch,
                        std::optional<double> sacrificed_entropy_bits = std::nullopt) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("leakage bound requires 0 < s < 1");
  params.validate();
  const double h = sacrificed_entropy_bits.value_or(static_cast<double>(params.k_prime));
  return std::exp2(log2_leakage_bound(s, params.n, h, ch));
}

namespace detail {

inline constexpr std::array<double, 27> kSGrid = {
    1e-6, 1e-5, 1e-4, 1e-3, 3e-3, 0.01, 0.02, 0.035, 0.05, 0.075, 0.1, 0.125, 0.15, 0.2,
    0.25, 0.3,  0.35, 0.4,  0.45, 0.5,  0.6,  0.7,   0.8,  0.9,   0.95, 0.99,  kSMax};

}  // namespace detail

/// Optimizes s rho_sac + log2(s)/n - E0(s) log2(e) over s in (0, 1 - 1e-6].
/// The objective is concave in s: a 27-point bracket scan, then golden-section
/// refinement around the three best points. Non-finite values switch to a
/// dense 1000-point scan and set grid_fallback.
template <class Channel>
LeakageBound sacrifice_exponent(double rho_sac, long n, const Channel& ch,
                                ExponentMode mode = ExponentMode::Tightest) {
  if (n <= 0) throw DomainError("block length n must be positive");
  if (!(rho_sac >= 0.0) || !std::isfinite(rho_sac)) throw DomainError("rho_sac must be >= 0");
  const double inv_n = 1.0 / static_cast<double>(n);
  auto objective = [&](double s) { return s * rho_sac + std::log2(s) * inv_n - e0(s, ch) * kLog2e; };

  const auto& grid = detail::kSGrid;
  std::array<double, grid.size()> values{};
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = objective(grid[i]);

  auto finish = [&](double s, double e, bool fallback) {
    LeakageBound out;
    out.s_star = s;
    out.exponent_bits = e;
    out.bound = std::exp2(-static_cast<double>(n) * e);
    out.grid_fallback = fallback;
    return out;
  };

  if (mode == ExponentMode::LiteralMin) {
    // concave objective: the minimum sits on an end of the interval
    const auto it = std::min_element(values.begin(), values.end());
    return finish(grid[it - values.begin()], *it, false);
  }

  std::array<std::size_t, grid.size()> order{};
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::partial_sort(order.begin(), order.begin() + 3, order.end(),
                    [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  double best_s = grid[order[0]];
  double best_e = values[order[0]];
  bool ok = std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
  for (int restart = 0; restart < 3 && ok; ++restart) {
    const std::size_t i = order[restart];
    const double lo = i == 0 ? grid[0] : grid[i - 1];
    const double hi = i + 1 == grid.size() ? grid.back() : grid[i + 1];
    const auto opt = golden_section_max(objective, lo, hi, 1e-9 * hi);
    if (!std::isfinite(opt.value)) {
      ok = false;
      break;
    }
    if (opt.value > best_e) {
      best_e = opt.value;
      best_s = opt.x;
    }
  }
  if (ok) return finish(best_s, best_e, false);

  best_e = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 1000; ++i) {
    const double s = std::min(kSMax, i / 1000.0);
    const double e = objective(s);
    if (std::isfinite(e) && e > best_e) {
      best_e = e;
      best_s = s;
    }
  }
  return finish(best_s, best_e, true);
}

template <class Channel>
LeakageBound sacrifice_exponent(const CodeParams& params, const Channel& ch,
                                ExponentMode mode = ExponentMode::Tightest) {
  params.validate();
  return sacrifice_exponent(params.rho_sac(), params.n, ch, mode);
}

// ---------------------------------------------------------------------------

struct SpatialRow {
  double theta_deg = 0.0;
  double rho_E_km = 0.0;
  double gamma_g0 = 0.0;
  double exponent_bits = 0.0;
  double bound = 1.0;  // reported value, clamped to [kBoundFloor, 1]
  bool guaranteed = false;
};

struct SpatialSettings {
  double rho_sac = 0.18;
  long n = 16200;
  double n_B = 1.0;
  ExponentMode mode = ExponentMode::Tightest;
  double reference_unit_km = 1.0;
};

/// Leakage bound along a grid of Eve angles at fixed distance. Placements
/// outside the degraded region, or with a vacuous bound, report bound 1 and
/// no guarantee.
inline std::vector<SpatialRow> spatial_leakage(const AntennaPattern& pattern, const EveSystem& eve,
                                               LinkGeometry geom, std::span<const double> theta_grid_deg,
                                               const SpatialSettings& cfg) {
  std::vector<SpatialRow> out;
  out.reserve(theta_grid_deg.size());
  for (double theta : theta_grid_deg) {
    if (!(theta >= 0.0 && theta <= 90.0)) throw DomainError("theta grid must lie in [0, 90] degrees");
    geom.theta_E_deg = theta;
    const auto ch = regularize(channel_coefficient(pattern, eve, geom, cfg.reference_unit_km), eve, cfg.n_B);
    const auto lb = sacrifice_exponent(cfg.rho_sac, cfg.n, BpskAwgn{ch.gamma_g0, ch.n_B}, cfg.mode);
    SpatialRow row;
    row.theta_deg = theta;
    row.rho_E_km = geom.rho_E_km;
    row.gamma_g0 = ch.gamma_g0;
    row.exponent_bits = lb.exponent_bits;
    row.guaranteed = ch.degraded() && lb.bound < 1.0;
    row.bound = row.guaranteed ? lb.reported_bound() : 1.0;
    out.push_back(row);
  }
  return out;
}

}  // namespace satsec
