#include "itree/log_real.hpp"

#include <stdexcept>

namespace itree {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;

// lgamma(x + 1) minus its Stirling main term (x + 1/2) ln x - x + ln(2 pi)/2.
double stirling_remainder(double x) {
  if (x < 16.0)
    return std::lgamma(x + 1.0) - ((x + 0.5) * std::log(x) - x + kHalfLog2Pi);
  const double r = 1.0 / x;
  const double r2 = r * r;
  return r * (1.0 / 12 - r2 * (1.0 / 360 - r2 * (1.0 / 1260 - r2 / 1680)));
}

} // namespace

LogReal LogReal::from_log(double log_magnitude, int sign) {
  LogReal r;
  if (sign == 0 || log_magnitude == -std::numeric_limits<double>::infinity())
    return r;
  if (std::isnan(log_magnitude))
    throw std::domain_error("LogReal: NaN magnitude");
  r.sign_ = sign > 0 ? 1 : -1;
  r.log_ = log_magnitude;
  return r;
}

LogReal LogReal::from_double(double x) {
  if (std::isnan(x))
    throw std::domain_error("LogReal: NaN");
  if (x == 0.0)
    return {};
  return from_log(std::log(std::fabs(x)), x > 0 ? 1 : -1);
}

double LogReal::to_double() const {
  return sign_ == 0 ? 0.0 : sign_ * std::exp(log_);
}

LogReal LogReal::operator-() const {
  LogReal r = *this;
  r.sign_ = -r.sign_;
  return r;
}

LogReal operator*(const LogReal &a, const LogReal &b) {
  if (a.sign_ == 0 || b.sign_ == 0)
    return {};
  return LogReal::from_log(a.log_ + b.log_, a.sign_ * b.sign_);
}

LogReal operator/(const LogReal &a, const LogReal &b) {
  if (b.sign_ == 0)
    throw std::domain_error("LogReal: division by zero");
  if (a.sign_ == 0)
    return {};
  return LogReal::from_log(a.log_ - b.log_, a.sign_ * b.sign_);
}

LogReal operator+(const LogReal &a, const LogReal &b) {
  if (a.sign_ == 0)
    return b;
  if (b.sign_ == 0)
    return a;
  const LogReal &hi = a.log_ >= b.log_ ? a : b;
  const LogReal &lo = a.log_ >= b.log_ ? b : a;
  const double d = lo.log_ - hi.log_;
  if (hi.sign_ == lo.sign_)
    return LogReal::from_log(hi.log_ + std::log1p(std::exp(d)), hi.sign_);
  if (d == 0.0)
    return {};
  return LogReal::from_log(hi.log_ + std::log1p(-std::exp(d)), hi.sign_);
}

LogReal operator-(const LogReal &a, const LogReal &b) { return a + (-b); }

LogReal LogReal::pow(double e) const {
  if (sign_ < 0)
    throw std::domain_error("LogReal::pow: negative base");
  if (sign_ == 0) {
    if (e == 0.0)
      return one();
    if (e > 0.0)
      return {};
    throw std::domain_error("LogReal::pow: zero to a negative power");
  }
  return from_log(log_ * e);
}

bool operator==(const LogReal &a, const LogReal &b) {
  return a.sign_ == b.sign_ && (a.sign_ == 0 || a.log_ == b.log_);
}

std::partial_ordering operator<=>(const LogReal &a, const LogReal &b) {
  if (a.sign_ != b.sign_)
    return a.sign_ <=> b.sign_;
  if (a.sign_ == 0)
    return std::partial_ordering::equivalent;
  return a.sign_ > 0 ? a.log_ <=> b.log_ : b.log_ <=> a.log_;
}

void LogSum::Side::add(double x) {
  if (x == -std::numeric_limits<double>::infinity())
    return;
  if (x > max) {
    const double scale = std::exp(max - x);
    sum *= scale;
    carry *= scale;
    max = x;
  }
  // Neumaier compensated add of exp(x - max)
  const double term = std::exp(x - max);
  const double t = sum + term;
  if (std::fabs(sum) >= std::fabs(term))
    carry += (sum - t) + term;
  else
    carry += (term - t) + sum;
  sum = t;
}

double LogSum::Side::log_total() const {
  const double s = sum + carry;
  if (s <= 0.0)
    return -std::numeric_limits<double>::infinity();
  return max + std::log(s);
}

void LogSum::add(const LogReal &x) {
  ++terms_;
  if (x.sign() > 0)
    pos_.add(x.log_magnitude());
  else if (x.sign() < 0)
    neg_.add(x.log_magnitude());
}

LogReal LogSum::value() const {
  return LogReal::from_log(pos_.log_total()) -
         LogReal::from_log(neg_.log_total());
}

double log_factorial(double x) {
  if (!(x >= 0.0))
    throw std::domain_error("log_factorial: negative argument");
  return std::lgamma(x + 1.0);
}

double log_choose(double n, double k) {
  if (std::isnan(n) || std::isnan(k) || k < 0.0 || k > n)
    throw std::domain_error("log_choose: need 0 <= k <= n");
  double m = n - k;
  if (k > m)
    std::swap(k, m);
  if (k == 0.0)
    return 0.0;
  if (n < 16.0)
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m + 1.0);
  // Stirling main terms combine exactly; only the small remainders are left.
  return k * std::log(n) - (m + 0.5) * std::log1p(-k / n) -
         (k + 0.5) * std::log(k) - kHalfLog2Pi + stirling_remainder(n) -
         stirling_remainder(k) - stirling_remainder(m);
}

double log_pow(double x, double e) {
  return LogReal::from_double(x).pow(e).log_magnitude();
}

} // namespace itree
