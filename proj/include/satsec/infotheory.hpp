#pragma once

// Mutual information and secrecy capacity for the BPSK-input Gaussian wiretap
// channel, plus exact discrete-channel counterparts used by the codec oracle.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "satsec/errors.hpp"
#include "satsec/quadrature.hpp"
#include "satsec/units.hpp"

namespace satsec {

/// Real-valued BPSK over AWGN: y = +-amplitude + N(0, n_B).
struct BpskAwgn {
  double amplitude = 1.0;
  double n_B = 1.0;

  void validate() const {
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw DomainError("amplitude must be >= 0");
    if (!(n_B > 0.0) || !std::isfinite(n_B)) throw DomainError("n_B must be > 0");
  }

  double sigma() const { return std::sqrt(n_B); }

  /// log W(y | x) for x in {+1, -1}.
  double log_density(double y, int x) const {
    const double d = y - x * amplitude;
    return -d * d / (2.0 * n_B) - 0.5 * std::log(2.0 * kPi * n_B);
  }

  double density(double y, int x) const { return std::exp(log_density(y, x)); }

  /// Half-width of the integration window around the origin: twelve standard
  /// deviations beyond the outer mean leave tail mass below 1e-32.
  double integration_half_width() const { return amplitude + 12.0 * sigma(); }
};

/// Row-stochastic transition matrix W[x][z].
class DiscreteChannel {
 public:
  DiscreteChannel() = default;

  explicit DiscreteChannel(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {
    if (rows_.empty() || rows_.front().empty()) throw DomainError("channel matrix must be non-empty");
    const std::size_t outputs = rows_.front().size();
    for (const auto& row : rows_) {
      if (row.size() != outputs) throw DomainError("channel rows must have equal length");
      double sum = 0.0;
      for (double p : row) {
        if (!(p >= 0.0)) throw DomainError("channel entries must be >= 0");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-12) throw DomainError("channel rows must sum to 1");
    }
  }

  static DiscreteChannel bsc(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("crossover must be in [0, 1]");
    return DiscreteChannel({{1.0 - p, p}, {p, 1.0 - p}});
  }

  std::size_t inputs() const { return rows_.size(); }
  std::size_t outputs() const { return rows_.empty() ? 0 : rows_.front().size(); }
  double operator()(std::size_t x, std::size_t z) const { return rows_[x][z]; }
  const std::vector<double>& row(std::size_t x) const { return rows_[x]; }

 private:
  std::vector<std::vector<double>> rows_;
};

namespace detail {

inline void check_distribution(std::span<const double> q, std::size_t expected) {
  if (q.size() != expected) throw DomainError("input distribution size does not match channel inputs");
  double sum = 0.0;
  for (double p : q) {
    if (!(p >= 0.0)) throw DomainError("probabilities must be >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw DomainError("input distribution must sum to 1");
}

// log(exp(a) + exp(b)) without overflow
inline double log_add_exp(double a, double b) {
  const double m = std::max(a, b);
  if (m == -INFINITY) return m;
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

inline double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

}  // namespace detail

inline std::vector<double> uniform_distribution(std::size_t n) { return std::vector<double>(n, 1.0 / n); }

/// I(X;Y) in bits for uniform BPSK input, absolute error <= abs_tol.
inline double bpsk_mi(const BpskAwgn& ch, double abs_tol = 1e-8) {
  ch.validate();
  if (ch.amplitude == 0.0) return 0.0;
  // By symmetry I = E_{Y|x=+1}[ln 2 - log(1 + exp(-2 a Y / n_B))] nats.
  const double a = ch.amplitude;
  const double s = ch.sigma();
  auto f = [&](double y) { return ch.density(y, +1) * (kLn2 - detail::softplus(-2.0 * a * y / ch.n_B)); };
  const auto r = integrate(f, a - 12.0 * s, a + 12.0 * s, {abs_tol * kLn2, 0.0}, {0.0, a}, "bpsk_mi");
  return std::clamp(r.value / kLn2, 0.0, 1.0);
}

/// C_s = (I(X;Y) - I(X;Z))_+ with Bob at amplitude 1 and Eve at gamma_g0, equal noise.
inline double secrecy_capacity(double gamma_g0, double n_B, double abs_tol = 1e-8) {
  if (!(gamma_g0 >= 0.0)) throw DomainError("gamma_g0 must be >= 0");
  if (!(n_B > 0.0)) throw DomainError("n_B must be > 0");
  if (gamma_g0 >= 1.0) return 0.0;
  const double cs = bpsk_mi({1.0, n_B}, abs_tol / 2) - bpsk_mi({gamma_g0, n_B}, abs_tol / 2);
  return std::max(cs, 0.0);
}

struct CapacityCell {
  double gamma_g0;
  double snr_db;
  double cs_bits;
};

/// Row-major table over gamma_grid x snr_grid with E_s = 1.
inline std::vector<CapacityCell> capacity_surface(std::span<const double> gamma_grid,
                                                  std::span<const double> snr_grid_db) {
  if (gamma_grid.empty() || snr_grid_db.empty()) throw DomainError("capacity grids must be non-empty");
  for (double g : gamma_grid)
    if (!(g >= 0.0 && g <= 1.2)) throw DomainError("gamma_g0 grid must lie in [0, 1.2]");
  for (double snr : snr_grid_db)
    if (!(snr >= -10.0 && snr <= 20.0)) throw DomainError("SNR grid must lie in [-10, 20] dB");

  std::vector<CapacityCell> out;
  out.reserve(gamma_grid.size() * snr_grid_db.size());
  for (double g : gamma_grid)
    for (double snr : snr_grid_db) out.push_back({g, snr, secrecy_capacity(g, noise_from_snr_db(snr))});
  return out;
}

/// Exact I(X;Z) in bits by direct summation.
inline double discrete_mi(const DiscreteChannel& ch, std::span<const double> q) {
  detail::check_distribution(q, ch.inputs());
  double mi = 0.0;
  for (std::size_t z = 0; z < ch.outputs(); ++z) {
    double pz = 0.0;
    for (std::size_t x = 0; x < ch.inputs(); ++x) pz += q[x] * ch(x, z);
    for (std::size_t x = 0; x < ch.inputs(); ++x) {
      const double w = ch(x, z);
      if (q[x] > 0.0 && w > 0.0) mi += q[x] * w * std::log2(w / pz);
    }
  }
  return std::max(mi, 0.0);
}

inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

/// Standard normal upper tail Q(x).
inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

/// Hard-decision (sign) quantization of the Gaussian channel: a BSC with
/// crossover Q(amplitude / sigma). Oracle-only surrogate.
inline DiscreteChannel hard_decision(const BpskAwgn& ch) {
  ch.validate();
  return DiscreteChannel::bsc(q_function(ch.amplitude / ch.sigma()));
}

}  // namespace satsec
