#include "noonbell/chsh.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace noonbell {

LossyEnsemble prepare_lossy_noon(const Gain& gain, const LossParams& loss,
                                 const FockCutoff& cutoff) {
  loss.validate();
  const ProductFormDensity psi = ProductFormDensity::amplified_noon(gain, cutoff);
  LossyEnsemble ens;
  ens.nmax = cutoff.nmax;
  ens.zeta = gain.zeta;
  ens.loss = loss;
  auto damp_for = [&](Meas a, Meas b) {
    const auto [la, lb] = loss_for_measurement(loss, a, b);
    return damp_product_form_separable(psi, cutoff.nmax, la, lb);
  };
  ens.xx = damp_for(Meas::X, Meas::X);
  ens.xn = damp_for(Meas::X, Meas::N);
  ens.nx = damp_for(Meas::N, Meas::X);
  ens.nn = damp_for(Meas::N, Meas::N);
  return ens;
}

LossyEnsemble prepare_damp_then_amplify(double t, const Gain& gain, const FockCutoff& cutoff) {
  const SeparableDensity rho = damp_then_amplify(t, gain, cutoff);
  LossyEnsemble ens;
  ens.nmax = cutoff.nmax;
  ens.zeta = gain.zeta;
  ens.loss = LossParams{t, 1.0, 1.0};
  ens.xx = ens.xn = ens.nx = ens.nn = rho;
  return ens;
}

const Eigen::MatrixXd& QFactorCache::get(int nmax, double x0) {
  const auto key = std::make_pair(nmax, std::llround(x0 * 1e9));
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(key);
  if (it == cache_.end())
    it = cache_.emplace(key, quad_factor(q_table(FockCutoff(nmax), x0))).first;
  return it->second;
}

BellResult bell_value(const LossyEnsemble& ens, const Thresholds& thr, QFactorCache* cache) {
  Eigen::MatrixXd local;
  const Eigen::MatrixXd* mx;
  if (cache) {
    mx = &cache->get(ens.nmax, thr.x0);
  } else {
    local = quad_factor(q_table(FockCutoff(ens.nmax), thr.x0));
    mx = &local;
  }
  const Eigen::VectorXd dn = sign_diag(thr.n0, ens.nmax + 1);

  BellResult res;
  res.e_xx = corr_xx(ens.xx, *mx);
  res.e_xn = corr_xn(ens.xn, *mx, dn);
  res.e_nx = corr_nx(ens.nx, *mx, dn);
  res.e_nn = corr_nn(ens.nn, dn);
  res.b_value = res.e_xx + res.e_xn + res.e_nx - res.e_nn;
  res.zeta = ens.zeta;
  res.n0 = thr.n0;
  res.x0 = thr.x0;
  res.loss = ens.loss;

  // The whole configuration is mode-swap symmetric, so the two mixed
  // correlations must agree and the symmetric CHSH form must hold.
  if (std::abs(res.e_xn - res.e_nx) > 1e-9)
    throw std::logic_error("bell_value: swap symmetry violated");
  if (std::abs(res.b_value - (res.e_xx + 2.0 * res.e_xn - res.e_nn)) > 1e-9)
    throw std::logic_error("bell_value: symmetric CHSH form inconsistent");
  return res;
}

BellResult bell_value(const Gain& gain, const Thresholds& thr, const LossParams& loss,
                      const FockCutoff& cutoff) {
  return bell_value(prepare_lossy_noon(gain, loss, cutoff), thr);
}

namespace {

// Golden-section maximization of a unimodal function on [a, b].
double golden_max(const std::function<double(double)>& f, double a, double b, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

BellResult optimize_thresholds(const LossyEnsemble& ens, const ThresholdSearch& search,
                               QFactorCache* cache) {
  const int d = ens.nmax + 1;

  // e_nn and the N-side traces depend only on n0; precompute per n0.
  std::vector<double> e_nn(search.n0_max + 1), xn_b(search.n0_max + 1), nx_a(search.n0_max + 1);
  std::vector<Eigen::VectorXd> dn(search.n0_max + 1);
  for (int n0 = 0; n0 <= search.n0_max; ++n0) {
    dn[n0] = sign_diag(n0, d);
    e_nn[n0] = corr_nn(ens.nn, dn[n0]);
  }

  double best_b = -std::numeric_limits<double>::infinity();
  int best_n0 = 0;
  double best_x0 = search.x0_lo;

  const int steps = static_cast<int>(std::round((search.x0_hi - search.x0_lo) / search.x0_step));
  for (int i = 0; i <= steps; ++i) {
    const double x0 = search.x0_lo + i * search.x0_step;
    Eigen::MatrixXd local;
    const Eigen::MatrixXd* mx;
    if (cache) {
      mx = &cache->get(ens.nmax, x0);
    } else {
      local = quad_factor(q_table(FockCutoff(ens.nmax), x0));
      mx = &local;
    }
    const double exx = corr_xx(ens.xx, *mx);
    for (int n0 = 0; n0 <= search.n0_max; ++n0) {
      const double b =
          exx + corr_xn(ens.xn, *mx, dn[n0]) + corr_nx(ens.nx, *mx, dn[n0]) - e_nn[n0];
      if (b > best_b) {
        best_b = b;
        best_n0 = n0;
        best_x0 = x0;
      }
    }
  }

  // Refine x0 around the best grid point.
  const double lo = std::max(search.x0_lo, best_x0 - search.x0_step);
  const double hi = std::min(search.x0_hi, best_x0 + search.x0_step);
  const double x0_fine = golden_max(
      [&](double x0) { return bell_value(ens, Thresholds(best_n0, x0)).b_value; }, lo, hi,
      search.x0_tol);
  BellResult fine = bell_value(ens, Thresholds(best_n0, x0_fine), cache);
  if (fine.b_value < best_b) fine = bell_value(ens, Thresholds(best_n0, best_x0), cache);
  return fine;
}

BellResult optimize_thresholds(const Gain& gain, const LossParams& loss, const FockCutoff& cutoff,
                               const ThresholdSearch& search, QFactorCache* cache) {
  return optimize_thresholds(prepare_lossy_noon(gain, loss, cutoff), search, cache);
}

BellResult optimized_bell(GainMode mode, const LossParams& loss, const FockCutoff& cutoff,
                          QFactorCache* cache) {
  if (mode == GainMode::fixed_zero)
    return optimize_thresholds(Gain(0.0), loss, cutoff, {}, cache);
  const double zeta = golden_max(
      [&](double z) { return optimize_thresholds(Gain(z), loss, cutoff, {}, cache).b_value; },
      0.0, 0.6, 1e-4);
  return optimize_thresholds(Gain(zeta), loss, cutoff, {}, cache);
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

SweepSeries sweep_gain(const std::vector<double>& zeta_grid, const LossParams& loss,
                       const FockCutoff& cutoff, int threads) {
  SweepSeries series;
  series.points.resize(zeta_grid.size());
  QFactorCache cache;
  parallel_for(static_cast<int>(zeta_grid.size()), threads, [&](int i) {
    const Gain gain(zeta_grid[i]);
    const BellResult r = optimize_thresholds(gain, loss, cutoff, {}, &cache);
    series.points[i] = {gain.zeta,
                        r.b_value,
                        r.n0,
                        r.x0,
                        mean_total_photons(amplified_noon(gain, cutoff)),
                        r.e_xx,
                        r.e_xn,
                        r.e_nn};
  });
  return series;
}

namespace {

// Bisects f over [lo, hi] for f = 0 given f(lo) < 0 < f(hi); returns the
// midpoint of the final bracket.
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  for (int iter = 0; iter < 40 && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double best_bell_at(GainMode mode, const LossParams& loss, const FockCutoff& cutoff,
                    QFactorCache* cache) {
  return optimized_bell(mode, loss, cutoff, cache).b_value;
}

}  // namespace

double min_detector_efficiency(double eta_x, GainMode mode, const FockCutoff& cutoff) {
  QFactorCache cache;
  auto excess = [&](double eta_n) {
    return best_bell_at(mode, LossParams{1.0, eta_n, eta_x}, cutoff, &cache) - 2.0;
  };
  if (excess(1.0) <= 0.0) throw NoViolation("no violation anywhere: eta_n = 1 gives B <= 2");
  return bisect(excess, 0.0, 1.0, 1e-3);
}

double min_transmittance(double eta_n, double eta_x, GainMode mode, const FockCutoff& cutoff,
                         bool damp_first) {
  QFactorCache cache;
  auto excess = [&](double t) -> double {
    if (!damp_first)
      return best_bell_at(mode, LossParams{t, eta_n, eta_x}, cutoff, &cache) - 2.0;
    auto b_at = [&](double z) {
      return optimize_thresholds(prepare_damp_then_amplify(t, Gain(z), cutoff), {}, &cache)
          .b_value;
    };
    if (mode == GainMode::fixed_zero) return b_at(0.0) - 2.0;
    return b_at(golden_max(b_at, 0.0, 0.6, 1e-4)) - 2.0;
  };
  if (excess(1.0) <= 0.0) throw NoViolation("no violation anywhere: t = 1 gives B <= 2");
  return bisect(excess, 0.0, 1.0, 1e-3);
}

BoundaryCurve violation_boundary(const std::vector<double>& t_grid, double eta_x, GainMode mode,
                                 const FockCutoff& cutoff, int threads) {
  BoundaryCurve curve;
  curve.eta_x = eta_x;
  curve.gain_mode = mode;
  curve.points.resize(t_grid.size());
  QFactorCache cache;
  parallel_for(static_cast<int>(t_grid.size()), threads, [&](int i) {
    const double t = t_grid[i];
    auto excess = [&](double eta_n) {
      return best_bell_at(mode, LossParams{t, eta_n, eta_x}, cutoff, &cache) - 2.0;
    };
    BoundaryPoint pt{t, std::nullopt};
    if (excess(1.0) > 0.0) pt.eta_n_min = bisect(excess, 0.0, 1.0, 1e-3);
    curve.points[i] = pt;
  });
  return curve;
}

}  // namespace noonbell
