#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <optional>

#include "noonbell/measurement.hpp"

namespace noonbell {

/// Raised by boundary searches when the Bell value never exceeds 2 even
/// with perfect parameters.
class NoViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A single evaluation of the CHSH observable together with the settings
/// that produced it.
struct BellResult {
  double b_value;
  double e_xx, e_xn, e_nx, e_nn;
  double zeta;
  int n0;
  double x0;
  LossParams loss;
};

struct SweepPoint {
  double zeta;
  double b_opt;
  int n0_opt;
  double x0_opt;
  double n_tot_mean;
  double e_xx, e_xn, e_nn;
};

struct SweepSeries {
  std::vector<SweepPoint> points;
};

enum class GainMode { fixed_zero, optimized };

struct BoundaryPoint {
  double t;
  std::optional<double> eta_n_min;  // empty when no violation exists at this t
};

struct BoundaryCurve {
  std::vector<BoundaryPoint> points;
  double eta_x;
  GainMode gain_mode;
};

/// Damped copies of the amplified N00N state, one per measurement pairing.
/// The paper assigns detection losses to the channel, so each correlation
/// sees its own pair of per-arm loss probabilities.
struct LossyEnsemble {
  SeparableDensity xx, xn, nx, nn;
  int nmax;
  double zeta;
  LossParams loss;
};

LossyEnsemble prepare_lossy_noon(const Gain& gain, const LossParams& loss,
                                 const FockCutoff& cutoff);

/// Footnote variant: transmission loss hits the bare N00N state before
/// amplification; detectors are ideal.
LossyEnsemble prepare_damp_then_amplify(double t, const Gain& gain, const FockCutoff& cutoff);

/// Cache of quadrature factors I - 2Q(x0) keyed on (nmax, x0 grid index).
/// The threshold search revisits the same coarse x0 grid for every
/// parameter point, so boundary searches reuse these tables.
class QFactorCache {
 public:
  const Eigen::MatrixXd& get(int nmax, double x0);

 private:
  std::map<std::pair<int, long long>, Eigen::MatrixXd> cache_;
  std::mutex mu_;
};

BellResult bell_value(const LossyEnsemble& ens, const Thresholds& thr,
                      QFactorCache* cache = nullptr);

/// Builds the lossy state and evaluates the four CHSH correlations.
BellResult bell_value(const Gain& gain, const Thresholds& thr, const LossParams& loss,
                      const FockCutoff& cutoff);

struct ThresholdSearch {
  int n0_max = 4;
  double x0_lo = 0.01;
  double x0_hi = 3.0;
  double x0_step = 0.01;
  double x0_tol = 1e-5;
};

/// Maximizes the Bell value over (n0, x0): exhaustive n0 scan, coarse x0
/// grid followed by golden-section refinement.
BellResult optimize_thresholds(const LossyEnsemble& ens, const ThresholdSearch& search = {},
                               QFactorCache* cache = nullptr);
BellResult optimize_thresholds(const Gain& gain, const LossParams& loss,
                               const FockCutoff& cutoff, const ThresholdSearch& search = {},
                               QFactorCache* cache = nullptr);

/// Maximal Bell value at given losses, either at zeta = 0 or maximized
/// over the gain by golden-section on [0, 0.6].
BellResult optimized_bell(GainMode mode, const LossParams& loss, const FockCutoff& cutoff,
                          QFactorCache* cache = nullptr);

SweepSeries sweep_gain(const std::vector<double>& zeta_grid, const LossParams& loss,
                       const FockCutoff& cutoff, int threads = 1);

/// Smallest photon-counting efficiency that still violates the CHSH
/// inequality at t = 1, by bisection to 1e-3.
double min_detector_efficiency(double eta_x, GainMode mode, const FockCutoff& cutoff);

/// Smallest channel transmittance that still violates CHSH at ideal
/// detectors. With damp_first the loss precedes amplification.
double min_transmittance(double eta_n, double eta_x, GainMode mode, const FockCutoff& cutoff,
                         bool damp_first = false);

BoundaryCurve violation_boundary(const std::vector<double>& t_grid, double eta_x,
                                 GainMode mode, const FockCutoff& cutoff, int threads = 1);

/// Runs fn(i) for i in [0, n) on the given number of worker threads.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace noonbell
