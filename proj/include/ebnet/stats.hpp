#pragma once

#include <span>
#include <vector>

namespace ebnet::stats {

double log_choose(long n, long k);

/// P(X >= k) for X ~ Binomial(n, p), exact.
double binomial_upper_tail(long k, long n, double p = 0.5);

/// Two-sided Fisher exact test of x1/n1 vs x2/n2: total hypergeometric
/// probability of tables no more likely than the observed one.
double fisher_exact_two_sided(long x1, long n1, long x2, long n2);

/// Holm step-down adjusted p-values (monotone, capped at 1), original order.
std::vector<double> holm_adjust(std::span<const double> p);

/// Benjamini-Hochberg step-up adjusted p-values (monotone, capped at 1).
std::vector<double> bh_adjust(std::span<const double> p);

/// One-sided Wilcoxon signed-rank p-value for H1: median(diffs) > 0. Zero
/// differences are dropped; normal approximation with tie and continuity
/// correction. Returns 1 when no non-zero difference remains.
double wilcoxon_signed_rank_greater(std::span<const double> diffs);

/// Upper tail of the standard normal.
double normal_upper_tail(double z);

}  // namespace ebnet::stats
