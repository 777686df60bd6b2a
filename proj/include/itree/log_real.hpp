#ifndef ITREE_LOG_REAL_HPP
#define ITREE_LOG_REAL_HPP

#include <cmath>
#include <compare>
#include <limits>

namespace itree {

/// Signed real stored as sign and natural log of the magnitude.
class LogReal {
public:
  LogReal() = default;

  static LogReal zero() { return {}; }
  static LogReal one() { return from_log(0.0); }
  /// exp(log_magnitude) with the given sign.
  static LogReal from_log(double log_magnitude, int sign = 1);
  static LogReal from_double(double x);

  int sign() const { return sign_; }
  /// -inf for zero.
  double log_magnitude() const {
    return sign_ == 0 ? -std::numeric_limits<double>::infinity() : log_;
  }
  bool is_zero() const { return sign_ == 0; }
  /// Nearest double; overflows to +-inf and underflows to 0.
  double to_double() const;

  LogReal operator-() const;
  friend LogReal operator*(const LogReal &a, const LogReal &b);
  friend LogReal operator/(const LogReal &a, const LogReal &b);
  friend LogReal operator+(const LogReal &a, const LogReal &b);
  friend LogReal operator-(const LogReal &a, const LogReal &b);
  LogReal &operator*=(const LogReal &o) { return *this = *this * o; }
  LogReal &operator/=(const LogReal &o) { return *this = *this / o; }
  LogReal &operator+=(const LogReal &o) { return *this = *this + o; }
  LogReal &operator-=(const LogReal &o) { return *this = *this - o; }

  /// Real power of a positive value; 0^0 = 1, 0^e = 0 for e > 0.
  /// Negative bases and negative powers of zero throw std::domain_error.
  LogReal pow(double e) const;

  friend bool operator==(const LogReal &a, const LogReal &b);
  friend std::partial_ordering operator<=>(const LogReal &a, const LogReal &b);

private:
  int sign_ = 0;
  double log_ = 0.0;
};

/// Running log-sum-exp with compensated accumulation. Terms of either sign.
class LogSum {
public:
  void add(const LogReal &x);
  void add_log(double log_magnitude) { add(LogReal::from_log(log_magnitude)); }
  LogReal value() const;
  std::size_t terms() const { return terms_; }

private:
  struct Side {
    double max = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    double carry = 0.0;
    void add(double log_magnitude);
    double log_total() const;
  };
  Side pos_, neg_;
  std::size_t terms_ = 0;
};

/// ln C(n, k) for real 0 <= k <= n. Keeps full relative accuracy for huge n
/// by splitting off the Stirling remainder of each factorial.
double log_choose(double n, double k);

/// ln x! = lgamma(x + 1).
double log_factorial(double x);

/// x^e in the log domain with 0^0 = 1; throws on 0 raised to a negative power.
double log_pow(double x, double e);

} // namespace itree

#endif // ITREE_LOG_REAL_HPP
