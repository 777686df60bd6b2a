#ifndef ITREE_MOMENTS_HPP
#define ITREE_MOMENTS_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "itree/log_real.hpp"

namespace itree {

/// E X_k = C(n,k) k^(k-2) p^(k-1) (1-p)^(C(k,2)-k+1). Needs 1 <= k <= n,
/// 0 < p < 1.
LogReal log_expected_trees(double n, double p, std::uint64_t k);

/// Stirling form of ln E X_k at real k > 1.
double gamma(double n, double p, double k);
double gamma_derivative(double n, double p, double k);

/// (2 / ln b)(ln(np) + 1 + 1.5 ln b), b = 1/(1-p).
double k_star(double n, double p);

/// Maximiser of gamma: the sign change of gamma' past the maximum of gamma'.
double gamma_argmax(double n, double p);

/// Root tolerance on |gamma(k_hat)|.
inline constexpr double kRootTolerance = 1e-9;

struct KHat {
  double root = 0;
  /// 2 log_b(enp) + 3 ln p / (2 ln(np)) + 3.
  double closed_form = 0;
  /// closed_form - root
  double gap = 0;
  double k_star = 0;
  double argmax = 0;
  double gamma_at_root = 0;
};

class BracketError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bisection for gamma = 0 on [argmax, k_star]. Throws BracketError when
/// gamma does not change sign there.
KHat solve_k_hat(double n, double p);

/// Within this distance of an integer the floor is flagged as unstable.
inline constexpr double kNearTie = 1e-6;

struct Threshold {
  std::int64_t value = 0;
  double raw = 0;
  bool near_tie = false;
};

/// floor(2 log_b(enp) + delta). Needs np > 1.
Threshold g_threshold(double n, double p, double delta);

struct PartitionPoints {
  double ell_star = 0;
  double k_minus_w_over_p = 0;
  double k_minus_half_over_p = 0;
  double ell_1 = 0;
  double ell_2 = 0;
  /// 2 <= ell_star <= k - w/p <= k - 1/(2p) <= k - 1
  bool ordered = false;
};

/// (ln n)^(1/4)
double default_w(double n);

PartitionPoints partition_points(double n, double p, double k, double w);

struct MomentProfile {
  double n = 0;
  double p = 0;
  double b = 0;
  double k_star = 0;
  double epsilon = 0;
  double k_hat = 0;
  double k_hat_closed_form = 0;
  /// Partition points evaluated at k = k_hat.
  double ell_star = 0;
  double ell_1 = 0;
  double ell_2 = 0;

  Threshold g(double delta) const { return g_threshold(n, p, delta); }
};

MomentProfile profile(double n, double p);

// Per-overlap summands, natural log, for the ratio F_l / (E X_k)^2.

/// ln[C(k,l) C(n-k,k-l) / C(n,k)]
double log_overlap_fraction(double n, double k, double ell);
/// g(l) = ln k + l(1 + 2 ln k + (1 - l/2) ln(1-p) - ln n - ln l - ln p)
double log_part1_summand(double n, double p, double k, double ell);
/// ln F-hat_l
double log_hat_F(double n, double p, double k, double ell);
/// ln H(k, l, r) at real r.
double log_H(double p, double k, double ell, double r);
double part3_r_star(double p, double k, double ell);
double log_part3_summand(double n, double p, double k, double ell);
double part4_r_hat(double p, double k, double ell);
/// Part-4 summand through f at r-hat.
double log_part4_summand(double n, double p, double k, double ell);
/// Part-4 summand in closed form.
double log_hat_I(double n, double p, double k, double ell);
double log_large_part1(double n, double p, double k, double ell);
double log_large_part3(double n, double p, double k, double ell);

enum class Regime { small_p, large_p };
enum class Part { p1, p2, p3, p4, l1, l2, l3 };

std::string part_name(Part part);

struct VarianceRow {
  Part part = Part::p1;
  std::size_t ell = 0;
  double log_summand = 0;
};

struct PartSum {
  Part part = Part::p1;
  std::size_t count = 0;
  LogReal sum;
};

struct VarianceBound {
  double n = 0;
  double p = 0;
  std::size_t k = 0;
  double w = 0;
  Regime regime = Regime::small_p;
  PartitionPoints points;
  std::vector<VarianceRow> rows;
  /// Parts of the active regime in order; empty parts have count 0.
  std::vector<PartSum> parts;
  LogReal total;
};

/// Bound on sum_{l=2}^{k-1} F_l / (E X_k)^2. Small-p regime (p < 1/(2 ln n))
/// uses parts 1-4, otherwise L1-L3.
VarianceBound variance_ratio_bound(double n, double p, std::size_t k,
                                   double w);
VarianceBound variance_ratio_bound(double n, double p, std::size_t k);

} // namespace itree

#endif // ITREE_MOMENTS_HPP
