// Acceptance suite: re-derives the headline numbers end to end and checks
// them at fixed tolerances, one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "noonbell/chsh.hpp"
#include "noonbell/oracle.hpp"
#include "test_util.hpp"

using namespace noonbell;

namespace {

int failures = 0;
bool current_ok = true;

void check(bool ok, const char* what, double got, double want, double tol) {
  if (!ok) {
    std::printf("    FAIL detail: %s: got %.6f, want %.6f +- %.6f\n", what, got, want, tol);
    current_ok = false;
  }
}

void expect(const char* what, double got, double want, double tol) {
  check(std::abs(got - want) <= tol, what, got, want, tol);
}

void report(int criterion, const char* title) {
  std::printf("criterion %d [%s]: %s\n", criterion, current_ok ? "PASS" : "FAIL", title);
  if (!current_ok) ++failures;
  current_ok = true;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const FockCutoff kCut(40);
const LossParams kLossless{};

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  QFactorCache cache;

  const BellResult at0 = optimize_thresholds(Gain(0.0), kLossless, kCut, {}, &cache);
  expect("B_opt(zeta=0)", at0.b_value, 2.250, 0.005);

  const BellResult peak = optimized_bell(GainMode::optimized, kLossless, kCut, &cache);
  expect("max B_opt", peak.b_value, 2.423, 0.005);
  expect("argmax zeta", peak.zeta, 0.189, 0.01);
  check(peak.n0 == 0, "optimal n0", peak.n0, 0, 0);
  expect("optimal x0", peak.x0, 0.465, 0.01);

  // Violation boundary in zeta: B_opt crosses 2 between 0.5 and 0.6.
  double lo = 0.5, hi = 0.6;
  for (int i = 0; i < 20; ++i) {
    const double mid = 0.5 * (lo + hi);
    (optimize_thresholds(Gain(mid), kLossless, kCut, {}, &cache).b_value > 2.0 ? lo : hi) = mid;
  }
  expect("violation endpoint zeta", 0.5 * (lo + hi), 0.557, 0.01);

  const double dt = seconds_since(t0);
  check(dt < 120.0, "runtime (s)", dt, 0.0, 120.0);
  report(1, "lossless sweep landmarks");
}

void criterion2() {
  expect("n_tot(0.189)", mean_total_photons(amplified_noon(Gain(0.189), kCut)), 2.22, 0.01);
  expect("n_tot(0.557)", mean_total_photons(amplified_noon(Gain(0.557), kCut)), 4.06, 0.01);
  report(2, "mean photon numbers");
}

void criterion3() {
  const BellResult r = optimize_thresholds(Gain(0.0), kLossless, kCut);
  check(std::abs(r.e_nn + 1.0) <= 1e-9, "E_NN(zeta=0)", r.e_nn, -1.0, 1e-9);
  expect("E_XN(zeta=0)", r.e_xn, 0.561, 0.005);
  expect("E_XX(zeta=0)", r.e_xx, 0.128, 0.005);
  report(3, "zeta=0 correlation components");
}

void criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  expect("eta_N_min (optimized)", min_detector_efficiency(1.0, GainMode::optimized, kCut),
         0.585, 0.005);
  expect("eta_N_min (zeta=0)", min_detector_efficiency(1.0, GainMode::fixed_zero, kCut),
         0.711, 0.005);
  expect("t_min (optimized)", min_transmittance(1.0, 1.0, GainMode::optimized, kCut),
         0.806, 0.005);
  expect("t_min (zeta=0)", min_transmittance(1.0, 1.0, GainMode::fixed_zero, kCut),
         0.840, 0.005);
  expect("t_min (damp before amplify)",
         min_transmittance(1.0, 1.0, GainMode::optimized, kCut, true), 0.791, 0.005);
  const double dt = seconds_since(t0);
  check(dt < 600.0, "runtime (s)", dt, 0.0, 600.0);
  report(4, "loss-tolerance table");
}

void criterion5() {
  QFactorCache cache;
  const double b95 =
      optimized_bell(GainMode::optimized, LossParams{0.95, 0.79, 0.90}, kCut, &cache).b_value;
  check(b95 > 2.0, "B_opt(t=0.95, eta_N=0.79, eta_X=0.90)", b95, 2.0, 0.0);
  const double b89 =
      optimized_bell(GainMode::optimized, LossParams{0.89, 0.79, 0.90}, kCut, &cache).b_value;
  check(b89 <= 2.0, "B_opt(t=0.89, eta_N=0.79, eta_X=0.90)", b89, 2.0, 0.0);
  report(5, "current-technology violation window");
}

void criterion6() {
  std::mt19937 rng(41);

  // QTable symmetry, parity, wide-window orthonormality.
  for (double x0 : {0.465, 1.0, 8.0}) {
    const QTable t = q_table(FockCutoff(20), x0);
    check((t.q - t.q.transpose()).cwiseAbs().maxCoeff() == 0.0, "QTable symmetry", 0, 0, 0);
    for (int n = 0; n <= 20; ++n)
      for (int m = 0; m <= 20; ++m)
        if ((n + m) % 2 == 1) check(t.q(n, m) == 0.0, "QTable parity", t.q(n, m), 0.0, 0.0);
  }
  check((q_table(FockCutoff(20), 8.0).q - Eigen::MatrixXd::Identity(21, 21))
                .cwiseAbs()
                .maxCoeff() < 1e-8,
        "QTable orthonormality", 0, 0, 0);

  // Channel trace preservation and composition.
  for (double lambda : {0.1, 0.5, 0.9}) {
    const TwoModeDensity rho = testutil::random_density(8, rng);
    check(std::abs(amplitude_damp(rho, lambda, lambda).trace() - rho.trace()) < 1e-9,
          "trace preservation", 0, 0, 0);
  }
  {
    const TwoModeDensity rho = testutil::random_density(7, rng);
    const TwoModeDensity twice = amplitude_damp(amplitude_damp(rho, 0.2, 0.2), 0.35, 0.35);
    const double comb = 1.0 - 0.8 * 0.65;
    check((twice.m - amplitude_damp(rho, comb, comb).m).cwiseAbs().maxCoeff() < 1e-9,
          "composition law", 0, 0, 0);
  }

  // Kraus vs binomial matrix elements.
  for (int trial = 0; trial < 10; ++trial) {
    const TwoModeDensity rho = testutil::random_density(10, rng);
    const TwoModeDensity kraus = oracle::damp_via_kraus(
        oracle::damp_via_kraus(rho, 0.3, oracle::Mode::A), 0.3, oracle::Mode::B);
    check((kraus.m - amplitude_damp(rho, 0.3, 0.3).m).cwiseAbs().maxCoeff() <= 1e-10,
          "Kraus equivalence", 0, 0, 0);
  }

  // Dense operator vs closed-form sums.
  {
    const Thresholds thr(1, 0.8);
    const FockCutoff cut(12);
    for (int trial = 0; trial < 10; ++trial) {
      const TwoModeDensity rho = testutil::random_density(cut.nmax, rng);
      using oracle::CorrKind;
      check(std::abs(oracle::expectation(
                         rho, oracle::build_correlation_operator(CorrKind::XX, thr, cut)) -
                     corr_xx(rho, thr.x0)) <= 1e-8,
            "dense vs sum XX", 0, 0, 0);
      check(std::abs(oracle::expectation(
                         rho, oracle::build_correlation_operator(CorrKind::XN, thr, cut)) -
                     corr_xn(rho, thr.x0, thr.n0)) <= 1e-8,
            "dense vs sum XN", 0, 0, 0);
      check(std::abs(oracle::expectation(
                         rho, oracle::build_correlation_operator(CorrKind::NN, thr, cut)) -
                     corr_nn(rho, thr.n0)) <= 1e-8,
            "dense vs sum NN", 0, 0, 0);
    }
  }

  // Swap symmetry of the mixed correlations.
  {
    const BellResult r =
        bell_value(Gain(0.2), Thresholds(0, 0.5), LossParams{0.9, 0.8, 0.95}, kCut);
    check(std::abs(r.e_xn - r.e_nx) <= 1e-9, "swap symmetry", r.e_xn - r.e_nx, 0.0, 1e-9);
  }

  // Cutoff robustness of the landmark numbers.
  {
    QFactorCache cache;
    const FockCutoff big(60);
    const double b0_40 = optimize_thresholds(Gain(0.0), kLossless, kCut, {}, &cache).b_value;
    const double b0_60 = optimize_thresholds(Gain(0.0), kLossless, big, {}, &cache).b_value;
    check(std::abs(b0_40 - b0_60) < 1e-4, "cutoff robustness B_opt(0)", b0_40 - b0_60, 0, 1e-4);
    const double bp_40 =
        bell_value(Gain(0.189), Thresholds(0, 0.465), kLossless, kCut).b_value;
    const double bp_60 = bell_value(Gain(0.189), Thresholds(0, 0.465), kLossless, big).b_value;
    check(std::abs(bp_40 - bp_60) < 1e-4, "cutoff robustness B(0.189)", bp_40 - bp_60, 0, 1e-4);
    const double n_40 = mean_total_photons(amplified_noon(Gain(0.557), kCut));
    const double n_60 = mean_total_photons(amplified_noon(Gain(0.557), big));
    check(std::abs(n_40 - n_60) < 1e-4, "cutoff robustness n_tot", n_40 - n_60, 0, 1e-4);
  }
  report(6, "property suites");
}

void criterion7() {
  const std::vector<double> t_grid{0.86, 0.90, 0.95, 1.0};
  const int threads = 4;
  const BoundaryCurve opt_100 =
      violation_boundary(t_grid, 1.00, GainMode::optimized, kCut, threads);
  const BoundaryCurve opt_95 = violation_boundary(t_grid, 0.95, GainMode::optimized, kCut, threads);
  const BoundaryCurve z0_100 =
      violation_boundary(t_grid, 1.00, GainMode::fixed_zero, kCut, threads);
  const BoundaryCurve z0_95 = violation_boundary(t_grid, 0.95, GainMode::fixed_zero, kCut, threads);

  auto monotone = [&](const BoundaryCurve& c, const char* name) {
    double prev = 0.0;
    for (auto it = c.points.rbegin(); it != c.points.rend(); ++it) {
      // Walking t downward, eta_n_min must not decrease.
      if (!it->eta_n_min) continue;
      check(*it->eta_n_min >= prev - 2e-3, name, *it->eta_n_min, prev, 2e-3);
      prev = std::max(prev, *it->eta_n_min);
    }
  };
  monotone(opt_100, "monotone optimized eta_X=1");
  monotone(opt_95, "monotone optimized eta_X=0.95");
  monotone(z0_100, "monotone zeta=0 eta_X=1");
  monotone(z0_95, "monotone zeta=0 eta_X=0.95");

  for (size_t i = 0; i < t_grid.size(); ++i) {
    // Optimized gain must be at least as loss tolerant as zeta=0.
    if (z0_100.points[i].eta_n_min) {
      check(opt_100.points[i].eta_n_min.has_value(), "optimized present (eta_X=1)", 0, 0, 0);
      if (opt_100.points[i].eta_n_min)
        check(*opt_100.points[i].eta_n_min <= *z0_100.points[i].eta_n_min + 2e-3,
              "optimized below zeta=0 (eta_X=1)", *opt_100.points[i].eta_n_min,
              *z0_100.points[i].eta_n_min, 2e-3);
    }
    if (z0_95.points[i].eta_n_min && opt_95.points[i].eta_n_min)
      check(*opt_95.points[i].eta_n_min <= *z0_95.points[i].eta_n_min + 2e-3,
            "optimized below zeta=0 (eta_X=0.95)", *opt_95.points[i].eta_n_min,
            *z0_95.points[i].eta_n_min, 2e-3);
    // Worse homodyne efficiency demands better photon counters.
    if (opt_100.points[i].eta_n_min && opt_95.points[i].eta_n_min)
      check(*opt_95.points[i].eta_n_min >= *opt_100.points[i].eta_n_min - 2e-3,
            "dashed above solid (optimized)", *opt_95.points[i].eta_n_min,
            *opt_100.points[i].eta_n_min, 2e-3);
    if (z0_100.points[i].eta_n_min && z0_95.points[i].eta_n_min)
      check(*z0_95.points[i].eta_n_min >= *z0_100.points[i].eta_n_min - 2e-3,
            "dashed above solid (zeta=0)", *z0_95.points[i].eta_n_min,
            *z0_100.points[i].eta_n_min, 2e-3);
  }

  // Endpoints must agree with the table values.
  if (opt_100.points.back().eta_n_min)
    expect("boundary endpoint optimized", *opt_100.points.back().eta_n_min, 0.585, 0.005);
  else
    check(false, "boundary endpoint optimized present", 0, 0, 0);
  if (z0_100.points.back().eta_n_min)
    expect("boundary endpoint zeta=0", *z0_100.points.back().eta_n_min, 0.711, 0.005);
  else
    check(false, "boundary endpoint zeta=0 present", 0, 0, 0);

  report(7, "violation-boundary curve shape");
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  std::printf("%s (%d criterion failure%s)\n", failures == 0 ? "ALL PASS" : "FAILED", failures,
              failures == 1 ? "" : "s");
  return failures == 0 ? 0 : 1;
}
