#include "lshe/estimator.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include <spdlog/spdlog.h>

namespace lshe {

namespace {

void require_probability(double p) {
  if (p == 0.0) throw std::domain_error("estimator undefined at p=0");
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::domain_error("estimator undefined at p=" + std::to_string(p) + " (need 0 < p <= 1)");
  }
}

}  // namespace

CliqueCounts solve_clique_counts(const ComponentProfile& profile, double p) {
  require_probability(p);
  const double n1 = static_cast<double>(profile.count(1));
  const double n2 = static_cast<double>(profile.count(2));
  const double n3 = static_cast<double>(profile.count(3));
  const double q = 1.0 - p;

  CliqueCounts out;
  out.triples = n3 / (p * p * (3.0 - 2.0 * p));
  out.pairs = (n2 - out.triples * 3.0 * q * q * p) / p;
  out.singletons = n1 - out.pairs * 2.0 * q - out.triples * 3.0 * q * q;
  return out;
}

double lshe(const ComponentProfile& profile, double p) {
  require_probability(p);
  const double q = 1.0 - p;
  const double pair_coef = (2.0 * p - 1.0) / p;
  const double triple_coef = (1.0 - 6.0 * q * q * p) / (p * p * (3.0 - 2.0 * p));
  return static_cast<double>(profile.count(1)) + static_cast<double>(profile.count(2)) * pair_coef +
         static_cast<double>(profile.count(3)) * triple_coef +
         static_cast<double>(profile.count_at_least(4));
}

VarianceCoefficients variance_coefficients(double p) {
  require_probability(p);
  const double q = 1.0 - p;
  VarianceCoefficients c;
  c.triples = q * q * (3.0 * p * p - p + 1.0) / (p * p * (3.0 - 2.0 * p));
  c.pairs = q / p;
  return c;
}

double lshe_variance(double pairs, double triples, double p) {
  const VarianceCoefficients c = variance_coefficients(p);
  if (pairs < 0.0 || triples < 0.0) {
    spdlog::warn("negative plug-in clique counts (n2*={}, n3*={}) clamped to 0 for the variance", pairs,
                 triples);
  }
  return c.triples * std::max(triples, 0.0) + c.pairs * std::max(pairs, 0.0);
}

}  // namespace lshe
