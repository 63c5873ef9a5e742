#pragma once

#include <cmath>
#include <limits>

namespace rachload {

/// Probability stored as its natural logarithm. Probability zero is the
/// distinguished state log = -inf, which absorbs under multiplication.
class LogProb {
 public:
  constexpr LogProb() noexcept = default;  // zero

  static constexpr LogProb zero() noexcept { return LogProb(); }
  static constexpr LogProb one() noexcept { return from_log(0.0); }
  static constexpr LogProb from_log(double log_value) noexcept {
    LogProb p;
    p.log_ = log_value;
    return p;
  }
  static LogProb from_linear(double p) noexcept {
    return p > 0.0 ? from_log(std::log(p)) : zero();
  }

  constexpr bool is_zero() const noexcept { return log_ == kNegInf; }
  constexpr double log() const noexcept { return log_; }
  double linear() const noexcept { return is_zero() ? 0.0 : std::exp(log_); }

  friend constexpr LogProb operator*(LogProb a, LogProb b) noexcept {
    if (a.is_zero() || b.is_zero()) return zero();
    return from_log(a.log_ + b.log_);
  }
  LogProb& operator*=(LogProb other) noexcept { return *this = *this * other; }

  friend LogProb operator+(LogProb a, LogProb b) noexcept {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.log_ < b.log_) std::swap(a, b);
    return from_log(a.log_ + std::log1p(std::exp(b.log_ - a.log_)));
  }
  LogProb& operator+=(LogProb other) noexcept { return *this = *this + other; }

  friend constexpr bool operator==(LogProb, LogProb) = default;
  friend constexpr auto operator<=>(LogProb a, LogProb b) noexcept { return a.log_ <=> b.log_; }

 private:
  static constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  double log_ = kNegInf;
};

/// base^exponent in log domain with 0^0 = 1.
inline LogProb log_power(double base, int exponent) noexcept {
  if (exponent == 0) return LogProb::one();
  if (base <= 0.0) return LogProb::zero();
  return LogProb::from_log(exponent * std::log(base));
}

}  // namespace rachload
