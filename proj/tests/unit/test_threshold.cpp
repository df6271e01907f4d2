#include <doctest.h>

#include "szcov/metrics.hpp"
#include "szcov/threshold.hpp"
#include "unit/test_util.hpp"

using namespace szcov;

TEST_CASE("scalar operators") {
  CHECK(soft_threshold(1.2, 0.5) == doctest::Approx(0.7));
  CHECK(soft_threshold(-0.3, 0.5) == 0.0);
  CHECK(soft_threshold(-1.5, 0.5) == doctest::Approx(-1.0));
  for (double x : {-3.0, -0.1, 0.0, 0.25, 7.5}) CHECK(soft_threshold(x, 0.0) == x);
  CHECK(hard_threshold(0.4, 0.5) == 0.0);
  CHECK(hard_threshold(0.6, 0.5) == 0.6);
  CHECK(hard_threshold(-2.0, 1.0) == -2.0);
  CHECK(hard_threshold(0.5, 0.5) == 0.0);
}

TEST_CASE("operator contract holds on random probes") {
  Rng rng(1);
  std::uniform_real_distribution<double> ux(-10.0, 10.0), ul(0.0, 5.0);
  std::vector<double> probes(100000);
  for (auto& x : probes) x = ux(rng);
  for (auto kind : {ThresholdKind::soft, ThresholdKind::hard})
    for (int rep = 0; rep < 5; ++rep) {
      const ThresholdOperator op(kind, ul(rng));
      const auto check = validate_operator(op, probes);
      CHECK(check.pass);
      CHECK(check.violations == 0);
    }
}

TEST_CASE("validator catches a map violating the proximity condition") {
  const double lambda = 0.5;
  std::vector<double> probes{-4.0, -1.0, 0.7, 3.0};
  const auto check = validate_operator([&](double x) { return std::abs(x) <= lambda ? 0.0 : x + 2 * lambda; },
                                       lambda, probes);
  CHECK_FALSE(check.pass);
  REQUIRE(check.first_violation);
  // x = -4 maps to -3, which passes (i) and (ii) but is 1.0 away from x.
  CHECK(check.first_violation->condition == 3);
  CHECK(check.first_violation->x == -4.0);
  CHECK_THROWS_AS(validate_operator(ThresholdOperator(ThresholdKind::soft, 1.0), {}), InputError);
}

TEST_CASE("matrix thresholding") {
  MatrixXd s(2, 2);
  s << 1, 0.3, 0.3, 1;
  SUBCASE("closed form") {
    MatrixXd expected(2, 2);
    expected << 0.6, 0, 0, 0.6;
    CHECK((apply_threshold(s, ThresholdOperator(ThresholdKind::soft, 0.4)) - expected).norm() < 1e-15);
  }
  SUBCASE("lambda zero is the identity map") {
    CHECK(apply_threshold(s, ThresholdOperator(ThresholdKind::soft, 0.0)) == s);
    CHECK(apply_threshold(s, ThresholdOperator(ThresholdKind::hard, 0.0)) == s);
  }
  SUBCASE("lambda at the sup norm kills everything") {
    CHECK(apply_threshold(s, ThresholdOperator(ThresholdKind::soft, 1.0)).isZero(0.0));
  }
  SUBCASE("diagonal can be excluded") {
    const auto out = apply_threshold(s, ThresholdOperator(ThresholdKind::soft, 0.4, true));
    CHECK(out(0, 0) == 1.0);
    CHECK(out(0, 1) == 0.0);
  }
  CHECK_THROWS_AS(ThresholdOperator(ThresholdKind::hard, -0.1), InputError);
}

TEST_CASE("thresholding preserves symmetry and never increases norms") {
  Rng rng(2);
  std::uniform_real_distribution<double> ul(0.0, 1.5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto data = testing::random_dataset(15, 7, 0.7, rng);
    const auto est = renormalized_covariance(data);
    for (auto kind : {ThresholdKind::soft, ThresholdKind::hard}) {
      const auto out = apply_threshold(est, ThresholdOperator(kind, ul(rng)));
      CHECK(out.sigma == out.sigma.transpose());
      const auto before = norms(est.sigma), after = norms(out.sigma);
      CHECK(after.sup <= before.sup);
      CHECK(after.frobenius <= before.frobenius);
      CHECK(after.l0 <= before.l0);
    }
  }
}
