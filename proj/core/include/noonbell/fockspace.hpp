#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace noonbell {

/// Raised when a Fock-space truncation is too small for the requested
/// accuracy (norm deficit above tolerance, or an untrusted squeeze block).
class InsufficientCutoff : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parametric gain of the two-mode amplifier. Both arms share the same
/// gain and the squeezing phase is zero, so mu and nu are plain reals.
struct Gain {
  double zeta;  // dimensionless gain, >= 0
  double mu;    // cosh(zeta)
  double nu;    // sinh(zeta)

  explicit Gain(double z);
};

/// Largest photon number retained per mode.
struct FockCutoff {
  int nmax;

  explicit FockCutoff(int n);
  int dim() const { return nmax + 1; }
};

/// Real amplitudes of a single-mode state over |0..nmax>.
struct SingleModeCoeffs {
  Eigen::VectorXd c;
  double norm_deficit = 0.0;  // probability mass lost to truncation
};

/// Real amplitudes c(m, m') of a two-mode pure state over |m>_A |m'>_B.
struct TwoModePureState {
  Eigen::MatrixXd c;
  double norm_deficit = 0.0;
};

/// Truncated matrix of the single-mode squeeze operator, <m|S(zeta)|n>.
/// Columns up to interior_block are free of truncation leakage; columns
/// beyond it must not be used.
struct SqueezeMatrix {
  Eigen::MatrixXd s;
  int interior_block;
};

// Norm deficit above this bound rejects a truncated state.
inline constexpr double kNormDeficitTol = 1e-8;

/// Squeezed vacuum S(zeta)|0>: even-photon series, renormalized after
/// truncation with the lost mass recorded in norm_deficit.
SingleModeCoeffs squeezed_vacuum_coeffs(const Gain& gain, const FockCutoff& cutoff);

/// Squeezed two-photon state S(zeta)|2>. The zeta=0 limit returns |2>.
SingleModeCoeffs squeezed_two_photon_coeffs(const Gain& gain, const FockCutoff& cutoff);

/// Amplified two-photon N00N state: symmetrized product of the squeezed
/// vacuum and squeezed two-photon states.
TwoModePureState amplified_noon(const Gain& gain, const FockCutoff& cutoff);

/// Mean total photon number <n_A + n_B> of a normalized pure state.
double mean_total_photons(const TwoModePureState& state);

/// Squeeze-operator matrix computed at an enlarged working cutoff so the
/// returned interior block (columns 0..nmax) is trusted.
SqueezeMatrix squeeze_matrix(const Gain& gain, const FockCutoff& cutoff);

}  // namespace noonbell
