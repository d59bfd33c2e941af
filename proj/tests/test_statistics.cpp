#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "bohm/rng.hpp"
#include "bohm/statistics.hpp"
#include "chi_square_oracle.hpp"

using namespace bohm;

TEST_CASE("compensated summation") {
  std::vector<double> v{1e16, 1.0, -1e16, 1.0};
  CHECK(compensated_sum(v) == 2.0);
  std::vector<double> many(100000, 0.1);
  CHECK(compensated_sum(many) == doctest::Approx(10000.0).epsilon(1e-15));
  std::vector<double> w{1, 2, 3, 4};
  CHECK(mean(w) == 2.5);
  CHECK(population_stddev(w) == doctest::Approx(std::sqrt(1.25)));
  std::vector<double> same{3, 3, 3};
  CHECK(population_stddev(same) == 0.0);
}

TEST_CASE("chi-square quantiles agree with the independent oracle") {
  CHECK(testing::even_dof_critical(0.01, 6) == doctest::Approx(16.8119).epsilon(1e-5));
  for (int dof : {2, 4, 6, 10, 20}) {
    for (double alpha : {0.01, 0.05, 0.5}) {
      const double oracle = testing::even_dof_critical(alpha, dof);
      CHECK(chi_square_critical(alpha, dof) == doctest::Approx(oracle).epsilon(1e-10));
      CHECK(chi_square_survival(oracle, dof) == doctest::Approx(alpha).epsilon(1e-10));
    }
  }
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
}

TEST_CASE("Pearson chi-square") {
  const std::vector<double> probs{0.25, 0.25, 0.5};
  const std::vector<double> exact{25, 25, 50};
  const auto r = pearson_chi_square(exact, probs);
  CHECK(r.statistic == 0.0);
  CHECK(r.dof == 2);
  CHECK(r.p_value == doctest::Approx(1.0));
  const std::vector<double> off{30, 20, 50};
  const auto r2 = pearson_chi_square(off, probs);
  CHECK(r2.statistic == doctest::Approx(2.0));
  CHECK(r2.p_value == doctest::Approx(std::exp(-1.0)));

  // Pooling: cells expecting fewer than 5 are merged with neighbours.
  const std::vector<double> p_small{0.01, 0.01, 0.48, 0.5};
  const std::vector<double> o_small{1, 1, 48, 50};
  const auto pooled = pearson_chi_square(o_small, p_small);
  CHECK(pooled.cells == 2);
  CHECK(pooled.dof == 1);
  CHECK(pooled.statistic == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("sample streams are deterministic and uniform") {
  SampleStream a(42, 7), b(42, 7), c(42, 8);
  for (int i = 0; i < 10; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  CHECK(SampleStream(42, 7).uniform() != c.uniform());
  // Uniformity over 20 bins.
  std::vector<double> counts(20, 0.0), probs(20, 0.05);
  SampleStream s(1, 0);
  for (int i = 0; i < 20000; ++i) counts[static_cast<std::size_t>(s.uniform() * 20)] += 1;
  CHECK(pearson_chi_square(counts, probs).p_value > kSignificance);
  // Normal moments.
  SampleStream n(3, 0);
  double m1 = 0, m2 = 0;
  const int N = 100000;
  for (int i = 0; i < N; ++i) {
    const double z = n.normal();
    m1 += z;
    m2 += z * z;
  }
  CHECK(std::abs(m1 / N) < 0.02);
  CHECK(std::abs(m2 / N - 1.0) < 0.02);
}
