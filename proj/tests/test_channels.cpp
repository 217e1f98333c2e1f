#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "noonbell/channels.hpp"
#include "test_util.hpp"

using namespace noonbell;

TEST_CASE("binomial pmf") {
  CHECK(binomial_pmf(0, 0.3, 0) == 1.0);
  CHECK(binomial_pmf(1, 0.5, 2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(binomial_pmf(2, 0.25, 4) == doctest::Approx(0.2109375).epsilon(1e-13));
  CHECK_THROWS_AS(binomial_pmf(5, 0.5, 4), std::domain_error);

  double sum = 0.0;
  for (int k = 0; k <= 80; ++k) sum += binomial_pmf(k, 0.37, 80);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("amplitude damping limits") {
  std::mt19937 rng(3);
  const TwoModeDensity rho = testutil::random_density(6, rng);

  SUBCASE("lambda=0 leaves the state unchanged") {
    const TwoModeDensity out = amplitude_damp(rho, 0.0, 0.0);
    CHECK((out.m - rho.m).cwiseAbs().maxCoeff() < 1e-14);
  }

  SUBCASE("lambda=1 empties both modes") {
    const TwoModeDensity out = amplitude_damp(rho, 1.0, 1.0);
    CHECK(out.at(0, 0, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out.m.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("single photon splits by the loss probability") {
    TwoModeDensity one(4);
    one.at(1, 0, 1, 0) = 1.0;
    const double lambda = 0.37;
    const TwoModeDensity out = amplitude_damp(one, lambda, 0.0);
    CHECK(out.at(1, 0, 1, 0) == doctest::Approx(1.0 - lambda).epsilon(1e-13));
    CHECK(out.at(0, 0, 0, 0) == doctest::Approx(lambda).epsilon(1e-13));
  }
}

TEST_CASE("trace preservation and hermiticity") {
  std::mt19937 rng(5);
  for (double lambda : {0.0, 0.1, 0.5, 0.9, 1.0}) {
    const TwoModeDensity rho = testutil::random_density(8, rng);
    const TwoModeDensity out = amplitude_damp(rho, lambda, lambda);
    CHECK(std::abs(out.trace() - rho.trace()) < 1e-9);
    CHECK((out.m - out.m.transpose()).cwiseAbs().maxCoeff() < 1e-12);

    // Positivity: smallest eigenvalue stays non-negative.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.m);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
  }

  // Amplified N00N at full cutoff through the product-form path.
  const FockCutoff cut(40);
  const ProductFormDensity psi = ProductFormDensity::amplified_noon(Gain(0.3), cut);
  for (double lambda : {0.0, 0.1, 0.5, 0.9, 1.0}) {
    const SeparableDensity damped = damp_product_form_separable(psi, cut.nmax, lambda, lambda);
    CHECK(std::abs(damped.trace() - 1.0) < 1e-9);
  }
}

TEST_CASE("damping composes multiplicatively") {
  std::mt19937 rng(9);
  const TwoModeDensity rho = testutil::random_density(7, rng);
  const double l1 = 0.2, l2 = 0.35;
  const TwoModeDensity twice = amplitude_damp(amplitude_damp(rho, l1, l1), l2, l2);
  const double combined = 1.0 - (1.0 - l1) * (1.0 - l2);
  const TwoModeDensity once = amplitude_damp(rho, combined, combined);
  CHECK((twice.m - once.m).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("product-form damping matches the dense channel") {
  const FockCutoff cut(20);
  const ProductFormDensity psi = ProductFormDensity::amplified_noon(Gain(0.3), cut);

  SUBCASE("lambda=0 expands the input") {
    const TwoModeDensity out = damp_product_form(psi, cut.nmax, 0.0, 0.0);
    CHECK((out.m - psi.expand(cut.nmax).m).cwiseAbs().maxCoeff() < 1e-14);
  }

  SUBCASE("lambda=1 is the vacuum projector") {
    const TwoModeDensity out = damp_product_form(psi, cut.nmax, 1.0, 1.0);
    CHECK(out.at(0, 0, 0, 0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(out.m.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-9));
  }

  SUBCASE("agrees with dense damping at lambda=0.2") {
    const TwoModeDensity fast = damp_product_form(psi, cut.nmax, 0.2, 0.2);
    const TwoModeDensity dense = amplitude_damp(psi.expand(cut.nmax), 0.2, 0.2);
    CHECK((fast.m - dense.m).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("loss assignment per measurement") {
  {
    const auto [la, lb] = loss_for_measurement(LossParams{1.0, 1.0, 1.0}, Meas::X, Meas::N);
    CHECK(la == 0.0);
    CHECK(lb == 0.0);
  }
  {
    const auto [la, lb] = loss_for_measurement(LossParams{0.95, 1.0, 0.90}, Meas::X, Meas::N);
    CHECK(la == doctest::Approx(0.145).epsilon(1e-12));
    CHECK(lb == doctest::Approx(0.05).epsilon(1e-12));
  }
  {
    const auto [la, lb] = loss_for_measurement(LossParams{0.806, 1.0, 1.0}, Meas::N, Meas::N);
    CHECK(la == doctest::Approx(0.194).epsilon(1e-12));
    CHECK(lb == doctest::Approx(0.194).epsilon(1e-12));
  }
  CHECK_THROWS_AS(loss_for_measurement(LossParams{1.2, 1.0, 1.0}, Meas::X, Meas::X),
                  std::invalid_argument);
}

TEST_CASE("damping breaks the even-photon parity") {
  const FockCutoff cut(20);
  const ProductFormDensity psi = ProductFormDensity::amplified_noon(Gain(0.3), cut);

  const TwoModeDensity clean = psi.expand(cut.nmax);
  for (int m = 1; m <= cut.nmax; m += 2)
    for (int mp = 0; mp <= cut.nmax; ++mp) CHECK(clean.at(m, mp, m, mp) == 0.0);

  const TwoModeDensity damped = damp_product_form(psi, cut.nmax, 0.25, 0.25);
  double odd_mass = 0.0;
  for (int m = 1; m < cut.nmax; m += 2) odd_mass += damped.at(m, 0, m, 0);
  CHECK(odd_mass > 0.0);
}

TEST_CASE("damp then amplify") {
  const FockCutoff cut(24);
  const Gain gain(0.2);

  SUBCASE("no loss reduces to the standard construction") {
    const SeparableDensity out = damp_then_amplify(1.0, gain, cut);
    const TwoModeDensity expect = TwoModeDensity::from_pure(amplified_noon(gain, cut));
    CHECK((out.expand().m - expect.m).cwiseAbs().maxCoeff() < 1e-8);
  }

  SUBCASE("trace stays one under loss") {
    const SeparableDensity out = damp_then_amplify(0.5, gain, cut);
    CHECK(std::abs(out.trace() - 1.0) < 1e-9);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.expand().m);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
  }
}
