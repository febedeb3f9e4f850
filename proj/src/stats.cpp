#include "ebnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ebnet/error.hpp"

namespace ebnet::stats {

double log_choose(long n, long k) {
  if (k < 0 || k > n) return -INFINITY;
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

double binomial_upper_tail(long k, long n, double p) {
  if (n < 0) throw InvalidArgument("negative trial count");
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  double total = 0.0;
  for (long i = k; i <= n; ++i)
    total += std::exp(log_choose(n, i) + static_cast<double>(i) * lp + static_cast<double>(n - i) * lq);
  return std::min(1.0, total);
}

double fisher_exact_two_sided(long x1, long n1, long x2, long n2) {
  if (x1 < 0 || x2 < 0 || x1 > n1 || x2 > n2) throw InvalidArgument("invalid contingency table");
  const long total = n1 + n2;
  const long successes = x1 + x2;
  const long lo = std::max(0L, successes - n2);
  const long hi = std::min(successes, n1);
  const double log_denom = log_choose(total, successes);
  auto log_prob = [&](long a) { return log_choose(n1, a) + log_choose(n2, successes - a) - log_denom; };
  const double observed = log_prob(x1);
  // Relative tolerance matching R's fisher.test.
  const double cutoff = observed + std::log1p(1e-7);
  double p = 0.0;
  for (long a = lo; a <= hi; ++a) {
    const double lp = log_prob(a);
    if (lp <= cutoff) p += std::exp(lp);
  }
  return std::min(1.0, p);
}

namespace {

std::vector<std::size_t> ascending_order(std::span<const double> p) {
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  return order;
}

}  // namespace

std::vector<double> holm_adjust(std::span<const double> p) {
  const auto m = p.size();
  std::vector<double> out(m);
  const auto order = ascending_order(p);
  double running = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double adj = std::min(1.0, static_cast<double>(m - i) * p[order[i]]);
    running = std::max(running, adj);
    out[order[i]] = running;
  }
  return out;
}

std::vector<double> bh_adjust(std::span<const double> p) {
  const auto m = p.size();
  std::vector<double> out(m);
  const auto order = ascending_order(p);
  double running = 1.0;
  for (std::size_t i = m; i-- > 0;) {
    const double adj = std::min(1.0, static_cast<double>(m) / static_cast<double>(i + 1) * p[order[i]]);
    running = std::min(running, adj);
    out[order[i]] = running;
  }
  return out;
}

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double wilcoxon_signed_rank_greater(std::span<const double> diffs) {
  std::vector<double> nz;
  for (double d : diffs)
    if (d != 0.0) nz.push_back(d);
  const auto n = nz.size();
  if (n == 0) return 1.0;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return std::abs(nz[a]) < std::abs(nz[b]); });
  std::vector<double> rank(n);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::abs(nz[order[j + 1]]) == std::abs(nz[order[i]])) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  double w_plus = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (nz[i] > 0.0) w_plus += rank[i];
  const double dn = static_cast<double>(n);
  const double mean = dn * (dn + 1.0) / 4.0;
  const double var = dn * (dn + 1.0) * (2.0 * dn + 1.0) / 24.0 - tie_term / 48.0;
  if (var <= 0.0) return w_plus > mean ? 0.0 : 1.0;
  const double z = (w_plus - mean - 0.5) / std::sqrt(var);
  return normal_upper_tail(z);
}

}  // namespace ebnet::stats
