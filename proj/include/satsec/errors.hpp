#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace satsec {

/// Argument outside the domain of an operation (angles, s-interval, probabilities).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical routine did not reach its requested tolerance.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved_tolerance)
      : std::runtime_error(what + " (achieved tolerance " + format(achieved_tolerance) + ")"),
        achieved_(achieved_tolerance) {}

  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  static std::string format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
  }

  double achieved_;
};

/// Malformed or inconsistent configuration; field() names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// An exhaustive computation would exceed its enumeration budget.
class SizeGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace satsec
