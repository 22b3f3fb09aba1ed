#include "pzk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "pzk/error.hpp"

namespace pzk::stats {

Rational Rational::of(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw Error(Errc::InvalidArgument, "denominator must be positive");
  const std::int64_t g = std::gcd(num, den);
  return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
}

std::string Rational::str() const { return std::to_string(num) + "/" + std::to_string(den); }

Rational operator+(Rational a, Rational b) {
  const std::int64_t l = std::lcm(a.den, b.den);
  return Rational::of(a.num * (l / a.den) + b.num * (l / b.den), l);
}

Rational operator*(Rational a, Rational b) {
  const auto x = Rational::of(a.num, b.den);
  const auto y = Rational::of(b.num, a.den);
  return Rational::of(x.num * y.num, x.den * y.den);
}

double binomial_sigma(double p, std::size_t trials) {
  return trials == 0 ? 0.0 : std::sqrt(p * (1 - p) / static_cast<double>(trials));
}

Interval wald_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0, 1};
  const double p = static_cast<double>(successes) / static_cast<double>(trials);
  const double h = z * binomial_sigma(p, trials);
  return {std::max(0.0, p - h), std::min(1.0, p + h)};
}

double chi2_sf(double x, double dof) {
  if (dof <= 0) return 1.0;
  if (x <= 0) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), x));
}

ChiSquare two_sample(const std::map<std::string, std::size_t>& a, const std::map<std::string, std::size_t>& b) {
  std::map<std::string, std::pair<double, double>> table;
  double na = 0, nb = 0;
  for (const auto& [k, v] : a) {
    table[k].first += static_cast<double>(v);
    na += static_cast<double>(v);
  }
  for (const auto& [k, v] : b) {
    table[k].second += static_cast<double>(v);
    nb += static_cast<double>(v);
  }
  if (na == 0 || nb == 0) return {};
  const double n = na + nb;
  const double small = std::min(na, nb) / n;

  // Bins with an expected count under 5 on the smaller side are pooled.
  std::vector<std::pair<double, double>> bins;
  std::pair<double, double> pooled{0, 0};
  for (const auto& [k, v] : table) {
    if ((v.first + v.second) * small < 5) {
      pooled.first += v.first;
      pooled.second += v.second;
    } else {
      bins.push_back(v);
    }
  }
  if (pooled.first + pooled.second > 0) {
    if ((pooled.first + pooled.second) * small < 5 && !bins.empty()) {
      auto smallest = std::min_element(bins.begin(), bins.end(), [](const auto& x, const auto& y) {
        return x.first + x.second < y.first + y.second;
      });
      smallest->first += pooled.first;
      smallest->second += pooled.second;
    } else {
      bins.push_back(pooled);
    }
  }
  if (bins.size() < 2) return {};

  ChiSquare out;
  for (const auto& [x, y] : bins) {
    const double total = x + y;
    const double ea = total * na / n;
    const double eb = total * nb / n;
    out.statistic += (x - ea) * (x - ea) / ea + (y - eb) * (y - eb) / eb;
  }
  out.dof = bins.size() - 1;
  out.p_value = chi2_sf(out.statistic, static_cast<double>(out.dof));
  return out;
}

double total_variation(const std::map<std::string, std::size_t>& a, const std::map<std::string, std::size_t>& b) {
  double na = 0, nb = 0;
  for (const auto& [k, v] : a) na += static_cast<double>(v);
  for (const auto& [k, v] : b) nb += static_cast<double>(v);
  if (na == 0 || nb == 0) return na == nb ? 0.0 : 1.0;
  std::map<std::string, double> diff;
  for (const auto& [k, v] : a) diff[k] += static_cast<double>(v) / na;
  for (const auto& [k, v] : b) diff[k] -= static_cast<double>(v) / nb;
  double tv = 0;
  for (const auto& [k, d] : diff) tv += std::abs(d);
  return tv / 2;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(Errc::InvalidArgument, "need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace pzk::stats
