#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace pzk::stats {

/// Exact non-negative fraction, always reduced.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational of(std::int64_t num, std::int64_t den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;

  friend Rational operator+(Rational a, Rational b);
  friend Rational operator*(Rational a, Rational b);
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct Interval {
  double low = 0;
  double high = 0;
};

/// Normal-approximation interval p +- z sqrt(p(1-p)/n).
Interval wald_interval(std::size_t successes, std::size_t trials, double z = 1.96);
double binomial_sigma(double p, std::size_t trials);

struct ChiSquare {
  double statistic = 0;
  std::size_t dof = 0;
  double p_value = 1;
};

/// Two-sample chi-square homogeneity test on categorical counts. Categories
/// whose expected count falls below 5 are pooled.
ChiSquare two_sample(const std::map<std::string, std::size_t>& a, const std::map<std::string, std::size_t>& b);

/// Upper tail of the chi-square distribution.
double chi2_sf(double x, double dof);

/// Total variation distance between the empirical distributions.
double total_variation(const std::map<std::string, std::size_t>& a, const std::map<std::string, std::size_t>& b);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace pzk::stats
