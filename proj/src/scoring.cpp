#include "ebnet/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "counting.hpp"
#include "ebnet/error.hpp"

namespace ebnet {

ScoreKind ScoreKind::parse(const std::string& text) {
  std::string t;
  for (char c : text) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "ll") return ll();
  if (t == "bic") return bic();
  if (t == "aic") return aic();
  if (t == "k2") return k2();
  if (t == "bde" || t == "bdeu") return bde();
  if (t.rfind("bde:", 0) == 0) {
    double ess = 0.0;
    try {
      ess = std::stod(t.substr(4));
    } catch (const std::exception&) {
      throw InvalidArgument("bad equivalent sample size in '" + text + "'");
    }
    if (!(ess > 0.0)) throw InvalidArgument("equivalent sample size must be positive");
    return bde(ess);
  }
  throw InvalidArgument("unknown score '" + text + "'");
}

std::string ScoreKind::name() const {
  switch (type) {
    case ScoreType::LL: return "ll";
    case ScoreType::BIC: return "bic";
    case ScoreType::AIC: return "aic";
    case ScoreType::BDE: return ess == 1.0 ? "bde" : "bde:" + std::to_string(ess);
    case ScoreType::K2: return "k2";
  }
  return "?";
}

std::size_t FamilyScorer::KeyHash::operator()(const Key& k) const noexcept {
  std::size_t h = static_cast<std::size_t>(k.child) * 0x9e3779b97f4a7c15ULL;
  for (int p : k.parents) h = (h ^ static_cast<std::size_t>(p + 1)) * 0x100000001b3ULL;
  return h;
}

FamilyScorer::FamilyScorer(const Dataset& data, ScoreKind kind, std::size_t cache_capacity)
    : data_(data), kind_(kind), capacity_(std::max<std::size_t>(cache_capacity, 1)) {
  if ((kind.type == ScoreType::BDE || kind.type == ScoreType::K2) && !data.is_discrete())
    throw InvalidArgument("score requires discrete data");
  if (kind.type == ScoreType::BDE && !(kind.ess > 0.0))
    throw InvalidArgument("equivalent sample size must be positive");
}

double FamilyScorer::family(int child, std::span<const int> parents) const {
  Key key{child, std::vector<int>(parents.begin(), parents.end())};
  {
    std::lock_guard lock(mutex_);
    if (auto it = index_.find(key); it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      ++hits_;
      return it->second->second;
    }
  }
  const double value = compute(child, parents);
  std::lock_guard lock(mutex_);
  if (index_.find(key) == index_.end()) {
    lru_.emplace_front(key, value);
    index_.emplace(std::move(key), lru_.begin());
    if (lru_.size() > capacity_) {
      index_.erase(lru_.back().first);
      lru_.pop_back();
    }
  }
  return value;
}

std::size_t FamilyScorer::cache_size() const {
  std::lock_guard lock(mutex_);
  return lru_.size();
}

std::size_t FamilyScorer::cache_hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

std::size_t FamilyScorer::free_parameters(int child, std::span<const int> parents) const {
  if (!data_.is_discrete()) return parents.size() + 2;
  std::size_t q = 1;
  for (int p : parents) q *= static_cast<std::size_t>(data_.cardinality(static_cast<std::size_t>(p)));
  return static_cast<std::size_t>(data_.cardinality(static_cast<std::size_t>(child)) - 1) * q;
}

double FamilyScorer::family_log_likelihood(int child, std::span<const int> parents) const {
  if (data_.is_discrete()) {
    std::size_t q = 0;
    const auto counts = detail::family_counts(data_, child, parents, q);
    const auto r = static_cast<std::size_t>(data_.cardinality(static_cast<std::size_t>(child)));
    // sum_jk N_jk log N_jk - sum_j N_j log N_j, accumulated in long double so
    // Markov-equivalent structures agree to ~1e-12.
    long double total = 0.0L;
    for (std::size_t j = 0; j < q; ++j) {
      std::uint64_t nj = 0;
      for (std::size_t k = 0; k < r; ++k) {
        const auto c = counts[j * r + k];
        if (c > 0) total += static_cast<long double>(c) * std::log(static_cast<long double>(c));
        nj += c;
      }
      if (nj > 0) total -= static_cast<long double>(nj) * std::log(static_cast<long double>(nj));
    }
    return static_cast<double>(total);
  }
  const auto fit = detail::ols(data_, child, parents);
  const double m = static_cast<double>(data_.num_rows());
  const auto y = data_.values(static_cast<std::size_t>(child));
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= m;
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  const double variance = std::max(fit.rss / m, 1e-12 * std::max(1.0, ss / m));
  return -0.5 * m * (std::log(2.0 * M_PI * variance) + 1.0);
}

double FamilyScorer::compute(int child, std::span<const int> parents) const {
  const double m = static_cast<double>(data_.num_rows());
  switch (kind_.type) {
    case ScoreType::LL: return family_log_likelihood(child, parents);
    case ScoreType::BIC:
      return family_log_likelihood(child, parents) -
             0.5 * std::log(m) * static_cast<double>(free_parameters(child, parents));
    case ScoreType::AIC:
      return family_log_likelihood(child, parents) - static_cast<double>(free_parameters(child, parents));
    case ScoreType::BDE:
    case ScoreType::K2: {
      std::size_t q = 0;
      const auto counts = detail::family_counts(data_, child, parents, q);
      const auto r = static_cast<std::size_t>(data_.cardinality(static_cast<std::size_t>(child)));
      const double a_jk = kind_.type == ScoreType::K2 ? 1.0 : kind_.ess / static_cast<double>(q * r);
      const double a_j = a_jk * static_cast<double>(r);
      long double total = 0.0L;
      const long double lg_ajk = std::lgamma(static_cast<long double>(a_jk));
      const long double lg_aj = std::lgamma(static_cast<long double>(a_j));
      for (std::size_t j = 0; j < q; ++j) {
        std::uint64_t nj = 0;
        for (std::size_t k = 0; k < r; ++k) {
          const auto c = counts[j * r + k];
          if (c > 0) total += std::lgamma(static_cast<long double>(a_jk) + c) - lg_ajk;
          nj += c;
        }
        if (nj > 0) total += lg_aj - std::lgamma(static_cast<long double>(a_j) + static_cast<long double>(nj));
      }
      return static_cast<double>(total);
    }
  }
  return 0.0;
}

FitnessValue score(const Dag& dag, const FamilyScorer& scorer) {
  if (dag.size() != scorer.num_variables()) throw InvalidArgument("dag size does not match dataset");
  FitnessValue fv;
  fv.per_node.reserve(static_cast<std::size_t>(dag.size()));
  long double total = 0.0L;
  for (int v = 0; v < dag.size(); ++v) {
    const double s = scorer.family(v, dag.parents(v));
    fv.per_node.push_back(s);
    total += s;
  }
  fv.total = static_cast<double>(total);
  return fv;
}

FitnessValue score(const Dag& dag, const Dataset& data, ScoreKind kind) {
  FamilyScorer scorer(data, kind, 64);
  return score(dag, scorer);
}

double discrete_derivative(Edge e, const Dag& x, const FamilyScorer& scorer) {
  if (x.has_edge(e)) throw InvalidArgument("edge already present");
  if (x.creates_cycle(e.parent, e.child)) throw InvalidArgument("edge creates a cycle");
  const auto& before = x.parents(e.child);
  std::vector<int> after(before);
  after.insert(std::lower_bound(after.begin(), after.end(), e.parent), e.parent);
  return scorer.family(e.child, after) - scorer.family(e.child, before);
}

double discrete_derivative(Edge e, const Dag& x, const Dataset& data, ScoreKind kind) {
  FamilyScorer scorer(data, kind, 16);
  return discrete_derivative(e, x, scorer);
}

}  // namespace ebnet
