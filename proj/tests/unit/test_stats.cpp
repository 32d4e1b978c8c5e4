#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "qra/errors.hpp"
#include "qra/stats.hpp"

using namespace qra;

namespace {

double t_density(double x, double df) {
  const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * std::numbers::pi);
  return c * std::pow(1 + x * x / df, -(df + 1) / 2);
}

// P(T <= t) = 1/2 + integral_0^t density, by composite Simpson.
double t_cdf_quadrature(double t, double df) {
  constexpr int n = 20000;
  const double h = t / n;
  double s = t_density(0, df) + t_density(t, df);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * t_density(i * h, df);
  return 0.5 + s * h / 3;
}

}  // namespace

TEST_SUITE("stats") {
  TEST_CASE("aggregate_seed") {
    CHECK(aggregate_seed({1e-3, 1e-3, 1e-3}) == doctest::Approx(1e-3));
    CHECK(aggregate_seed({1.0, 2.0, 6.0}) == doctest::Approx(3.0));
    CHECK_THROWS_AS(aggregate_seed({}), DataError);
  }

  TEST_CASE("incomplete beta closed forms") {
    for (double x : {0.0, 0.1, 0.5, 0.9, 1.0}) {
      CHECK(regularized_incomplete_beta(1, 1, x) == doctest::Approx(x).epsilon(1e-13));
      CHECK(regularized_incomplete_beta(2, 1, x) == doctest::Approx(x * x).epsilon(1e-13));
      CHECK(regularized_incomplete_beta(1, 3, x) == doctest::Approx(1 - std::pow(1 - x, 3)).epsilon(1e-13));
    }
  }

  TEST_CASE("student t cdf against quadrature") {
    for (double df : {1.0, 3.0, 7.0, 15.0, 30.0}) {
      for (double t : {0.1, 0.7, 1.5, 2.2, 4.0}) {
        CAPTURE(df);
        CAPTURE(t);
        CHECK(student_t_cdf(t, df) == doctest::Approx(t_cdf_quadrature(t, df)).epsilon(1e-9));
        CHECK(student_t_cdf(-t, df) == doctest::Approx(1 - t_cdf_quadrature(t, df)).epsilon(1e-9));
      }
    }
    // df = 1 is Cauchy.
    CHECK(student_t_cdf(1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-13));
    CHECK(student_t_cdf(0.0, 5.0) == doctest::Approx(0.5));
  }

  TEST_CASE("paired t-test") {
    const std::vector<double> a{1.0, 2.0, 3.0, 4.0};
    const TTestResult same = paired_t_test(a, a);
    CHECK(same.t == 0.0);
    CHECK(same.p == 1.0);
    CHECK(same.df == 3);

    const TTestResult shifted = paired_t_test({2.0, 3.0, 4.0}, {1.0, 2.0, 3.0});
    CHECK(shifted.degenerate);
    CHECK(shifted.p == 0.0);

    const std::vector<double> x{5.1, 4.8, 6.0, 5.5, 5.9, 4.4};
    const std::vector<double> y{4.9, 4.9, 5.2, 5.0, 5.3, 4.6};
    std::vector<double> d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
    const double n = static_cast<double>(d.size());
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / n;
    double ss = 0;
    for (double v : d) ss += (v - mean) * (v - mean);
    const double t = mean / std::sqrt(ss / (n - 1) / n);
    const TTestResult r = paired_t_test(x, y);
    CHECK(r.t == doctest::Approx(t).epsilon(1e-12));
    CHECK(r.df == 5);
    CHECK(r.p == doctest::Approx(2 * (1 - t_cdf_quadrature(std::abs(t), 5))).epsilon(1e-8));

    CHECK_THROWS_AS(paired_t_test({1.0}, {2.0}), DataError);
    CHECK_THROWS_AS(paired_t_test({1.0, 2.0}, {2.0}), DataError);
  }

  TEST_CASE("wilcoxon examples") {
    const WilcoxonResult sym = wilcoxon_signed_rank({1.0, -1.0}, {0.0, 0.0});
    CHECK(sym.p == doctest::Approx(1.0));
    CHECK(sym.statistic == doctest::Approx(1.5));

    const WilcoxonResult four = wilcoxon_signed_rank({1.0, 2.0, 3.0, 4.0}, {0.0, 0.0, 0.0, 0.0});
    CHECK(four.exact);
    CHECK(four.statistic == 10.0);
    CHECK(four.p == doctest::Approx(0.125).epsilon(1e-14));

    const WilcoxonResult zeros = wilcoxon_signed_rank({1.0, 2.0}, {1.0, 2.0});
    CHECK(zeros.all_zero);
    CHECK(zeros.p == 1.0);
    CHECK(zeros.n == 0);
  }

  TEST_CASE("property: larger shifts give smaller wilcoxon p") {
    const std::vector<double> noise{0.3, -0.2, 0.5, -0.4, 0.1, -0.6, 0.25, -0.15, 0.45, -0.35};
    double prev = 2.0;
    for (double shift : {0.0, 0.1, 0.2, 0.4, 0.8}) {
      std::vector<double> a(noise.size()), b(noise.size(), 0.0);
      for (std::size_t i = 0; i < noise.size(); ++i) a[i] = noise[i] + shift;
      const double p = wilcoxon_signed_rank(a, b).p;
      CHECK(p <= prev);
      prev = p;
    }
  }

  TEST_CASE("wilcoxon normal approximation for n > 20") {
    constexpr int n = 30;
    std::vector<double> a(n), b(n, 0.0);
    double w_plus = 0.0;
    for (int i = 0; i < n; ++i) {
      const double mag = i + 1;
      const bool positive = i % 3 != 0;
      a[static_cast<std::size_t>(i)] = positive ? mag : -mag;
      if (positive) w_plus += mag;
    }
    const double mu = n * (n + 1) / 4.0;
    const double sigma = std::sqrt(n * (n + 1) * (2 * n + 1) / 24.0);
    const double z = (std::abs(w_plus - mu) - 0.5) / sigma;
    const WilcoxonResult r = wilcoxon_signed_rank(a, b);
    CHECK_FALSE(r.exact);
    CHECK(r.n == n);
    CHECK(r.statistic == w_plus);
    CHECK(r.p == doctest::Approx(std::erfc(z / std::sqrt(2.0))).epsilon(1e-12));
  }
}
