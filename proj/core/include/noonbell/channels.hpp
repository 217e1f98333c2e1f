#pragma once

#include <vector>

#include "noonbell/fockspace.hpp"

namespace noonbell {

/// Dense two-mode density operator rho_{mm'|nn'}, stored as the real
/// symmetric matrix of dimension dim^2 with row index m*dim+m' and column
/// index n*dim+n'. All amplitudes in this engine are real.
struct TwoModeDensity {
  Eigen::MatrixXd m;  // (dim^2) x (dim^2)
  int nmax;

  explicit TwoModeDensity(int nmax_);

  int dim() const { return nmax + 1; }
  double& at(int ma, int mb, int na, int nb) { return m(ma * dim() + mb, na * dim() + nb); }
  double at(int ma, int mb, int na, int nb) const { return m(ma * dim() + mb, na * dim() + nb); }
  double trace() const { return m.trace(); }

  static TwoModeDensity from_pure(const TwoModePureState& psi);
};

/// Per-arm transmittance and detector efficiencies.
struct LossParams {
  double t = 1.0;      // channel transmittance
  double eta_n = 1.0;  // photon-counting efficiency
  double eta_x = 1.0;  // homodyne efficiency

  void validate() const;
};

enum class Meas { N, X };

/// Density operator kept as a sum of two-mode product terms
/// sum_i w_i |uA_i><vA_i| (x) |uB_i><vB_i|.
struct ProductFormDensity {
  struct Term {
    double w;
    Eigen::VectorXd u_a, v_a, u_b, v_b;
  };
  std::vector<Term> terms;

  TwoModeDensity expand(int nmax) const;

  /// |Psi2><Psi2| for the amplified N00N state as four product terms.
  static ProductFormDensity amplified_noon(const Gain& gain, const FockCutoff& cutoff);
};

/// Density operator as a sum of tensor products of dense single-mode
/// factors, sum_i w_i A_i (x) B_i. This is the working representation
/// after amplitude damping, which maps a rank-1 |u><v| to a dense matrix
/// but never mixes the modes.
struct SeparableDensity {
  struct Term {
    double w;
    Eigen::MatrixXd a, b;
  };
  std::vector<Term> terms;
  int nmax = 0;

  double trace() const;
  TwoModeDensity expand() const;
};

/// Binomial probability mass B(k|p,n), evaluated in log space.
double binomial_pmf(int k, double p, int n);

/// Photon-loss channel on both modes with loss probabilities lambda_a,
/// lambda_b. Trace preserving; dense O(dim^5) per mode.
TwoModeDensity amplitude_damp(const TwoModeDensity& rho, double lambda_a, double lambda_b);

/// Damps a single-mode factor |u><v|: out(m,n) = sum_k u(m+k) v(n+k)
/// sqrt(B(k|l,k+m) B(k|l,k+n)).
Eigen::MatrixXd damp_rank_one(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double lambda);

/// Damps a dense single-mode factor the same way.
Eigen::MatrixXd damp_single_mode(const Eigen::MatrixXd& rho1, double lambda);

/// Fast path: damps each product term per mode, keeping the separable form.
SeparableDensity damp_product_form_separable(const ProductFormDensity& state, int nmax,
                                             double lambda_a, double lambda_b);

/// Spec surface of the fast path, expanded to a dense tensor.
TwoModeDensity damp_product_form(const ProductFormDensity& state, int nmax,
                                 double lambda_a, double lambda_b);

/// Effective per-arm loss probabilities for a measurement pairing:
/// lambda = 1 - t*eta_X on an X arm, 1 - t*eta_N on an N arm.
std::pair<double, double> loss_for_measurement(const LossParams& loss, Meas side_a, Meas side_b);

/// Footnote scenario: the bare two-photon N00N state is transmitted first
/// (loss 1-t on both arms) and amplified at the receivers. Returned in
/// separable form; expand() recovers the spec's dense tensor.
SeparableDensity damp_then_amplify(double t, const Gain& gain, const FockCutoff& cutoff);

}  // namespace noonbell
