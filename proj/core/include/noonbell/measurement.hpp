#pragma once

#include "noonbell/channels.hpp"

namespace noonbell {

/// Binning thresholds of the hybrid protocol: photon-count threshold n0
/// and quadrature-modulus threshold x0.
///
/// x0 is expressed in the x = (a + a^dag)/2 quadrature convention. Other
/// homodyne conventions differ by sqrt(2) factors; thresholds quoted here
/// are meaningless outside this normalization.
struct Thresholds {
  int n0 = 0;
  double x0 = 0.0;

  Thresholds(int n0_, double x0_);
};

/// Overlaps q(n, m) = Q_nm(x0) of number states through the quadrature
/// window [-x0, x0].
struct QTable {
  Eigen::MatrixXd q;
  double x0;
};

/// Q_nm(x0) = sqrt(2/pi) int_{-x0}^{x0} e^{-2x^2}
///            H_n(sqrt2 x) H_m(sqrt2 x) / sqrt(2^{n+m} n! m!) dx,
/// by composite Gauss-Legendre quadrature with node count >= n+m+16.
double q_overlap(int n, int m, double x0);

QTable q_table(const FockCutoff& cutoff, double x0);

/// Normalized Hermite functions h_k(y) = H_k(y)/sqrt(2^k k!) for
/// k = 0..kmax, by the three-term recurrence.
Eigen::VectorXd hermite_normalized(int kmax, double y);

// Closed-form correlation sums for a dense two-mode density operator.
// The mode measured by X carries the quadrature threshold x0, the mode
// measured by N the count threshold n0.
double corr_xx(const TwoModeDensity& rho, double x0);
double corr_xn(const TwoModeDensity& rho, double x0, int n0);
double corr_nx(const TwoModeDensity& rho, double x0, int n0);
double corr_nn(const TwoModeDensity& rho, int n0);

// Same correlations on the separable fast path. sign_diag(n0) gives the
// single-mode N factor diag(+1 for n <= n0, -1 above); quad_factor is the
// single-mode X factor I - 2 Q(x0).
Eigen::VectorXd sign_diag(int n0, int dim);
Eigen::MatrixXd quad_factor(const QTable& table);
double corr_xx(const SeparableDensity& rho, const Eigen::MatrixXd& mx);
double corr_xn(const SeparableDensity& rho, const Eigen::MatrixXd& mx, const Eigen::VectorXd& dn);
double corr_nx(const SeparableDensity& rho, const Eigen::MatrixXd& mx, const Eigen::VectorXd& dn);
double corr_nn(const SeparableDensity& rho, const Eigen::VectorXd& dn);

}  // namespace noonbell
