#include "bohm/statistics.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bohm {

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

double compensated_sum(std::span<const double> values) {
  CompensatedSum s;
  for (double v : values) s.add(v);
  return s.value();
}

double mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean of empty sequence");
  return compensated_sum(values) / static_cast<double>(values.size());
}

double population_stddev(std::span<const double> values) {
  const double mu = mean(values);
  CompensatedSum s;
  for (double v : values) s.add((v - mu) * (v - mu));
  return std::sqrt(s.value() / static_cast<double>(values.size()));
}

double chi_square_survival(double x, double dof) {
  if (!(dof > 0.0)) throw std::invalid_argument("chi-square needs dof > 0");
  if (!(x > 0.0)) return 1.0;
  if (std::isinf(x)) return 0.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, x));
}

double chi_square_critical(double alpha, double dof) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("significance must lie in (0, 1)");
  }
  boost::math::chi_squared dist(dof);
  return boost::math::quantile(boost::math::complement(dist, alpha));
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile needs p in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

ChiSquareResult pearson_chi_square(std::span<const double> observed,
                                   std::span<const double> probabilities,
                                   double min_expected) {
  if (observed.size() != probabilities.size() || observed.empty()) {
    throw std::invalid_argument("observed/probability size mismatch");
  }
  const double total = compensated_sum(observed);
  const double norm = compensated_sum(probabilities);
  if (!(norm > 0.0)) throw std::invalid_argument("probabilities sum to zero");

  std::vector<double> pooled_obs;
  std::vector<double> pooled_exp;
  double acc_obs = 0.0;
  double acc_exp = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    acc_obs += observed[k];
    acc_exp += total * probabilities[k] / norm;
    if (acc_exp >= min_expected) {
      pooled_obs.push_back(acc_obs);
      pooled_exp.push_back(acc_exp);
      acc_obs = 0.0;
      acc_exp = 0.0;
    }
  }
  if (acc_exp > 0.0 || acc_obs > 0.0) {
    if (pooled_exp.empty()) {
      pooled_obs.push_back(acc_obs);
      pooled_exp.push_back(acc_exp);
    } else {
      pooled_obs.back() += acc_obs;
      pooled_exp.back() += acc_exp;
    }
  }

  ChiSquareResult result;
  result.cells = pooled_obs.size();
  CompensatedSum stat;
  for (std::size_t k = 0; k < pooled_obs.size(); ++k) {
    const double diff = pooled_obs[k] - pooled_exp[k];
    if (pooled_exp[k] > 0.0) {
      stat.add(diff * diff / pooled_exp[k]);
    } else if (pooled_obs[k] > 0.0) {
      stat.add(std::numeric_limits<double>::infinity());
    }
  }
  result.statistic = stat.value();
  result.dof = static_cast<int>(result.cells) - 1;
  result.p_value =
      result.dof > 0 ? chi_square_survival(result.statistic, result.dof) : 1.0;
  return result;
}

}  // namespace bohm
