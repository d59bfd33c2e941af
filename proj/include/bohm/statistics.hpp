#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bohm {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double compensated_sum(std::span<const double> values);
double mean(std::span<const double> values);
/// Population (not sample-corrected) standard deviation.
double population_stddev(std::span<const double> values);

/// Upper tail P(X > x) of the chi-square distribution.
double chi_square_survival(double x, double dof);
/// x such that P(X > x) = alpha.
double chi_square_critical(double alpha, double dof);
/// Inverse CDF of the standard normal.
double normal_quantile(double p);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  std::size_t cells = 0;  ///< after pooling
};

/// Pearson chi-square of observed counts against cell probabilities.
/// Adjacent cells are pooled left to right until each pooled cell expects at
/// least `min_expected` counts; the last pool absorbs any remainder.
/// Probabilities are renormalized to sum to one.
ChiSquareResult pearson_chi_square(std::span<const double> observed,
                                   std::span<const double> probabilities,
                                   double min_expected = 5.0);

/// Significance level used by every goodness-of-fit check.
inline constexpr double kSignificance = 0.01;

}  // namespace bohm
