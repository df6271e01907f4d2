#include <doctest.h>

#include "szcov/mask.hpp"
#include "unit/test_util.hpp"

using namespace szcov;

TEST_CASE("mask rejects non-binary entries and empty rows") {
  MaskMatrix m(2, 2);
  m << 1, 2, 1, 0;
  CHECK_THROWS_AS(ObservationMask{m}, InputError);
  m << 1, 0, 0, 0;
  CHECK_THROWS_AS(ObservationMask{m}, InputError);
  m << 1, 0, 0, 1;
  CHECK_NOTHROW(ObservationMask{m});
}

TEST_CASE("pairwise counts on a fully observed mask") {
  const auto c = pairwise_counts(ObservationMask::all_observed(5, 3));
  CHECK((c.pair.array() == 5).all());
  CHECK((c.singleton.array() == 5).all());
  CHECK(c.samples == 5);
}

TEST_CASE("pairwise counts by hand enumeration") {
  MaskMatrix m(3, 2);
  m << 1, 1, 1, 0, 0, 1;
  const auto c = pairwise_counts(ObservationMask(m));
  MatrixXi64 expected(2, 2);
  expected << 2, 1, 1, 2;
  CHECK(c.pair == expected);
}

TEST_CASE("absent component has zero counts") {
  MaskMatrix m(4, 3);
  m << 1, 0, 1, 1, 0, 0, 0, 0, 1, 1, 0, 1;
  const auto c = pairwise_counts(ObservationMask(m));
  CHECK(c.singleton[1] == 0);
  CHECK((c.pair.row(1).array() == 0).all());
  CHECK((c.pair.col(1).array() == 0).all());
}

TEST_CASE("pairwise counts match the counting oracle on random masks") {
  Rng rng(11);
  std::uniform_int_distribution<Index> dn(1, 20), dd(1, 8);
  std::uniform_real_distribution<double> p(0.1, 0.95);
  for (int trial = 0; trial < 300; ++trial) {
    const ObservationMask mask(testing::random_mask_entries(dn(rng), dd(rng), p(rng), rng));
    const auto c = pairwise_counts(mask);
    CHECK(c.pair == testing::brute_force_pair_counts(mask));
    CHECK(c.pair == c.pair.transpose());
    CHECK(c.pair.diagonal() == c.singleton);
    for (Index l = 0; l < c.dim(); ++l)
      for (Index m = 0; m < c.dim(); ++m)
        CHECK(c.pair(l, m) <= std::min(c.singleton[l], c.singleton[m]));
  }
}

TEST_CASE("adding an observed entry never decreases a count") {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    auto entries = testing::random_mask_entries(12, 6, 0.4, rng);
    const auto before = pairwise_counts(ObservationMask(entries));
    std::uniform_int_distribution<Index> ri(0, 11), rj(0, 5);
    entries(ri(rng), rj(rng)) = 1;
    const auto after = pairwise_counts(ObservationMask(entries));
    CHECK((after.pair.array() >= before.pair.array()).all());
  }
}

TEST_CASE("check_a1 diagnostics") {
  SUBCASE("fully observed passes") {
    const auto r = check_a1(pairwise_counts(ObservationMask::all_observed(10, 4)), 0.1);
    CHECK(r.pass);
    CHECK(r.violations.empty());
  }
  SUBCASE("never co-observed pair fails") {
    MaskMatrix m(4, 3);
    m << 1, 1, 0, 1, 0, 1, 1, 1, 0, 1, 0, 1;
    const auto r = check_a1(pairwise_counts(ObservationMask(m)), 0.05);
    CHECK_FALSE(r.pass);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0] == std::pair<Index, Index>{1, 2});
  }
  SUBCASE("fraction below threshold is listed") {
    CoObservationCounts c;
    c.samples = 100;
    c.pair = MatrixXi64::Constant(8, 8, 100);
    c.pair(3, 7) = c.pair(7, 3) = 4;
    c.singleton = c.pair.diagonal();
    const auto r = check_a1(c, 0.05);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0] == std::pair<Index, Index>{3, 7});
    CHECK(r.min_fraction_seen == doctest::Approx(0.04));
  }
  CHECK_THROWS_AS(check_a1(pairwise_counts(ObservationMask::all_observed(2, 2)), 0.0), InputError);
}

TEST_CASE("generate_mask") {
  SUBCASE("no missingness gives all ones") {
    const auto m = generate_mask(50, 4, MaskDistribution(VectorXd::Zero(4)), 1);
    CHECK((m.entries().array() == 1).all());
  }
  SUBCASE("Bernoulli column means") {
    const auto m = generate_mask(10000, 5, MaskDistribution(VectorXd::Constant(5, 0.5)), 2);
    const VectorXd means = m.as_real().colwise().mean();
    // Rows are conditioned on not being empty: P(present) = 0.5 / (1 - 0.5^5).
    for (Index j = 0; j < 5; ++j) CHECK(std::abs(means[j] - 0.5) < 0.02);
  }
  SUBCASE("deterministic in the seed") {
    const MaskDistribution dist(VectorXd::Constant(6, 0.3));
    CHECK(generate_mask(40, 6, dist, 9) == generate_mask(40, 6, dist, 9));
    CHECK_FALSE(generate_mask(40, 6, dist, 9) == generate_mask(40, 6, dist, 10));
  }
  SUBCASE("marginals converge within a 4 sigma binomial band") {
    VectorXd rho(4);
    rho << 0.0, 0.2, 0.5, 0.75;
    const Index n = 100000;
    const auto m = generate_mask(n, 4, MaskDistribution(rho), 3);
    const VectorXd means = m.as_real().colwise().mean();
    // Resampling empty rows inflates P(present) by 1/(1 - prod rho) = 1 here.
    for (Index j = 0; j < 4; ++j) {
      const double p = 1.0 - rho[j];
      const double sd = std::sqrt(std::max(p * (1 - p), 1e-12) / static_cast<double>(n));
      CHECK(std::abs(means[j] - p) <= 4 * sd + 1e-12);
    }
  }
  CHECK_THROWS_AS(MaskDistribution(VectorXd::Constant(2, 1.0)), InputError);
  CHECK_THROWS_AS(generate_mask(0, 2, MaskDistribution(VectorXd::Zero(2)), 1), InputError);
}

TEST_CASE("sample_rho") {
  const auto r = sample_rho(175, 0.0, 0.75, 4);
  CHECK((r.rho().array() > 0.0).all());
  CHECK((r.rho().array() < 0.75).all());
  CHECK_THROWS_AS(sample_rho(3, 0.5, 0.5, 1), InputError);
  CHECK_THROWS_AS(sample_rho(3, 0.2, 1.0, 1), InputError);
  const auto big = sample_rho(10000, 0.0, 0.75, 5);
  CHECK(std::abs(big.rho().mean() - 0.375) < 0.01);
}
