#include "itree/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "itree/trees.hpp"

namespace itree {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;

void check_p(double p) {
  if (!(p > 0 && p < 1))
    throw std::domain_error("p must lie in (0, 1)");
}

double log_b(double p) { return -std::log1p(-p); }

double choose2(double x) { return x * (x - 1) / 2; }

} // namespace

LogReal log_expected_trees(double n, double p, std::uint64_t k) {
  check_p(p);
  const double kd = static_cast<double>(k);
  if (k < 1 || kd > n)
    throw std::domain_error("log_expected_trees: need 1 <= k <= n");
  const double v = log_choose(n, kd) + (kd - 2) * std::log(kd) +
                   (kd - 1) * std::log(p) +
                   (choose2(kd) - kd + 1) * std::log1p(-p);
  return LogReal::from_log(v);
}

double gamma(double n, double p, double k) {
  check_p(p);
  if (!(k > 1))
    throw std::domain_error("gamma: need k > 1");
  return -kHalfLog2Pi + k * std::log(n) + k - 2.5 * std::log(k) +
         (k - 1) * std::log(p / (1 - p)) - choose2(k) * log_b(p);
}

double gamma_derivative(double n, double p, double k) {
  check_p(p);
  if (!(k > 0))
    throw std::domain_error("gamma_derivative: need k > 0");
  return std::log(n) + 1 - 2.5 / k + std::log(p / (1 - p)) -
         (k - 0.5) * log_b(p);
}

double k_star(double n, double p) {
  check_p(p);
  const double lb = log_b(p);
  return 2 / lb * (std::log(n * p) + 1 + 1.5 * lb);
}

double gamma_argmax(double n, double p) {
  check_p(p);
  // gamma' is concave with its peak here.
  double lo = std::max(std::sqrt(2.5 / log_b(p)), 1.0);
  double hi = std::max(k_star(n, p), lo);
  if (gamma_derivative(n, p, lo) <= 0)
    return lo;
  if (gamma_derivative(n, p, hi) > 0)
    throw BracketError("gamma_argmax: gamma' still positive at k_star");
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gamma_derivative(n, p, mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

KHat solve_k_hat(double n, double p) {
  check_p(p);
  if (!(n * p > 1))
    throw BracketError("solve_k_hat: need np > 1");
  KHat out;
  out.k_star = k_star(n, p);
  out.argmax = gamma_argmax(n, p);
  double lo = std::max(out.argmax, std::nextafter(1.0, 2.0));
  double hi = out.k_star;
  const double glo = gamma(n, p, lo), ghi = gamma(n, p, hi);
  if (!(glo > 0 && ghi < 0)) {
    std::ostringstream msg;
    msg << "solve_k_hat: no sign change on [" << lo << ", " << hi
        << "], gamma = " << glo << ", " << ghi << " (n=" << n << ", p=" << p
        << ")";
    throw BracketError(msg.str());
  }
  double root = lo, groot = glo;
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = gamma(n, p, mid);
    if (std::fabs(gm) < std::fabs(groot)) {
      root = mid;
      groot = gm;
    }
    if (std::fabs(gm) <= kRootTolerance * 1e-3 || mid == lo || mid == hi)
      break;
    (gm > 0 ? lo : hi) = mid;
  }
  out.root = root;
  out.gamma_at_root = groot;
  out.closed_form = 2 * (1 + std::log(n * p)) / log_b(p) +
                    3 * std::log(p) / (2 * std::log(n * p)) + 3;
  out.gap = out.closed_form - out.root;
  return out;
}

Threshold g_threshold(double n, double p, double delta) {
  check_p(p);
  if (!(n * p > 1))
    throw std::domain_error("g_threshold: need np > 1");
  Threshold t;
  t.raw = 2 * (1 + std::log(n * p)) / log_b(p) + delta;
  const double fl = std::floor(t.raw);
  t.value = static_cast<std::int64_t>(fl);
  const double frac = t.raw - fl;
  t.near_tie = frac < kNearTie || frac > 1 - kNearTie;
  return t;
}

double default_w(double n) { return std::pow(std::log(n), 0.25); }

PartitionPoints partition_points(double n, double p, double k, double w) {
  check_p(p);
  if (!(w > 0))
    throw std::domain_error("partition_points: need w > 0");
  const double lb = log_b(p);
  PartitionPoints pts;
  pts.ell_star = (2 * std::log(n * p) - 2 * std::log(4 * std::numbers::e * k)) / lb;
  pts.k_minus_w_over_p = k - w / p;
  pts.k_minus_half_over_p = k - 1 / (2 * p);
  pts.ell_1 = (2 * std::log(n) - 16 * std::log(std::log(n))) / lb;
  pts.ell_2 = k - 3 * (1 - p) / p;
  pts.ordered = 2 <= pts.ell_star && pts.ell_star <= pts.k_minus_w_over_p &&
                pts.k_minus_w_over_p <= pts.k_minus_half_over_p &&
                pts.k_minus_half_over_p <= k - 1;
  return pts;
}

MomentProfile profile(double n, double p) {
  const auto kh = solve_k_hat(n, p);
  MomentProfile m;
  m.n = n;
  m.p = p;
  m.b = 1 / (1 - p);
  m.k_star = kh.k_star;
  m.k_hat = kh.root;
  m.epsilon = kh.k_star - kh.root;
  m.k_hat_closed_form = kh.closed_form;
  const auto pts = partition_points(n, p, kh.root, default_w(n));
  m.ell_star = pts.ell_star;
  m.ell_1 = pts.ell_1;
  m.ell_2 = pts.ell_2;
  return m;
}

double log_overlap_fraction(double n, double k, double ell) {
  return log_choose(k, ell) + log_choose(n - k, k - ell) - log_choose(n, k);
}

double log_part1_summand(double n, double p, double k, double ell) {
  check_p(p);
  return std::log(k) +
         ell * (1 + 2 * std::log(k) + (1 - ell / 2) * std::log1p(-p) -
                std::log(n) - std::log(ell) - std::log(p));
}

double log_hat_F(double n, double p, double k, double ell) {
  check_p(p);
  return log_overlap_fraction(n, k, ell) + choose2(ell) * log_b(p) +
         log_pow(k - ell, k - 2) + log_pow(ell + 1, k - ell - 1) -
         (k - 3) * std::log(k);
}

double log_H(double p, double k, double ell, double r) {
  check_p(p);
  const double f = f_piecewise(k, ell, r).log_magnitude();
  return r * std::log((1 - p) / p) + log_choose(ell, ell - r) +
         std::log(ell - r) + (r - 1) * std::log(ell) + 2 * f;
}

double part3_r_star(double p, double k, double ell) {
  const double beta = p * (k - ell);
  const double lambda = std::cbrt(std::pow(beta * ell * p / std::numbers::e, 2));
  return std::clamp(ell - lambda / p, 0.0, ell - 1);
}

double log_part3_summand(double n, double p, double k, double ell) {
  return log_overlap_fraction(n, k, ell) + choose2(ell) * log_b(p) +
         std::log(ell) + log_H(p, k, ell, part3_r_star(p, k, ell)) -
         2 * (k - 2) * std::log(k);
}

double part4_r_hat(double p, double k, double ell) {
  return ell * (1 - p * (k - ell) / ((1 - p) * std::numbers::e));
}

double log_part4_summand(double n, double p, double k, double ell) {
  check_p(p);
  const double r = part4_r_hat(p, k, ell);
  const double g =
      r * std::log((1 - p) / p) + f_piecewise(k, ell, r).log_magnitude();
  return log_overlap_fraction(n, k, ell) + choose2(ell) * log_b(p) +
         std::log(ell) + g - (k - 2) * std::log(k);
}

double log_hat_I(double n, double p, double k, double ell) {
  check_p(p);
  return log_overlap_fraction(n, k, ell) - (k - 2) * std::log(k) +
         choose2(ell) * log_b(p) + std::log(ell) +
         ell * std::log((1 - p) / p) + log_pow(ell + 1, k - ell - 1) +
         log_pow(k - ell, k - ell - 2) +
         ell * (k - ell) * p / (std::numbers::e * (1 - p));
}

double log_large_part1(double n, double p, double k, double ell) {
  check_p(p);
  return log_overlap_fraction(n, k, ell) + choose2(ell) * log_b(p) +
         std::log(ell) + std::max(0.0, (ell - 1) * std::log((1 - p) / p));
}

double log_large_part3(double n, double p, double k, double ell) {
  check_p(p);
  const double s = k - ell;
  double best = -std::numeric_limits<double>::infinity();
  for (double r = 0; r < ell; r += 1)
    best = std::max(best, f1(k, ell, r, p).log_magnitude());
  return log_choose(k, s) + log_choose(n - k, s) + s * k * std::log1p(-p) +
         s * std::log(k) -
         log_expected_trees(n, p, static_cast<std::uint64_t>(k))
             .log_magnitude() +
         best;
}

std::string part_name(Part part) {
  switch (part) {
  case Part::p1:
    return "1";
  case Part::p2:
    return "2";
  case Part::p3:
    return "3";
  case Part::p4:
    return "4";
  case Part::l1:
    return "L1";
  case Part::l2:
    return "L2";
  case Part::l3:
    return "L3";
  }
  return "?";
}

VarianceBound variance_ratio_bound(double n, double p, std::size_t k,
                                   double w) {
  check_p(p);
  if (k < 2 || static_cast<double>(k) > n)
    throw std::domain_error("variance_ratio_bound: need 2 <= k <= n");
  VarianceBound vb;
  vb.n = n;
  vb.p = p;
  vb.k = k;
  vb.w = w;
  const double kd = static_cast<double>(k);
  vb.points = partition_points(n, p, kd, w);
  vb.regime = p < 1 / (2 * std::log(n)) ? Regime::small_p : Regime::large_p;

  std::vector<Part> order;
  if (vb.regime == Regime::small_p)
    order = {Part::p1, Part::p2, Part::p3, Part::p4};
  else
    order = {Part::l1, Part::l2, Part::l3};
  std::vector<LogSum> sums(order.size());
  std::vector<std::size_t> counts(order.size(), 0);

  const auto &pts = vb.points;
  const double part2_end = std::floor(pts.k_minus_w_over_p);
  const double large_mid_end = kd - 2 * (1 - p) / p;
  for (std::size_t ell = 2; ell + 1 <= k; ++ell) {
    const double l = static_cast<double>(ell);
    std::size_t slot;
    double v;
    if (vb.regime == Regime::small_p) {
      if (l <= pts.ell_star) {
        slot = 0;
        v = log_part1_summand(n, p, kd, l);
      } else if (l <= part2_end) {
        slot = 1;
        v = log_hat_F(n, p, kd, l);
      } else if (l <= pts.k_minus_half_over_p) {
        slot = 2;
        v = log_part3_summand(n, p, kd, l);
      } else {
        slot = 3;
        v = log_part4_summand(n, p, kd, l);
      }
    } else {
      if (l <= pts.ell_1) {
        slot = 0;
        v = log_large_part1(n, p, kd, l);
      } else if (l <= large_mid_end) {
        slot = 1;
        v = log_hat_F(n, p, kd, l);
      } else {
        slot = 2;
        v = log_large_part3(n, p, kd, l);
      }
    }
    vb.rows.push_back({order[slot], ell, v});
    sums[slot].add_log(v);
    ++counts[slot];
  }

  LogSum total;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const LogReal s = sums[i].value();
    vb.parts.push_back({order[i], counts[i], s});
    total.add(s);
  }
  vb.total = total.value();
  return vb;
}

VarianceBound variance_ratio_bound(double n, double p, std::size_t k) {
  return variance_ratio_bound(n, p, k, default_w(n));
}

} // namespace itree
