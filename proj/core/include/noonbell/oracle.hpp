#pragma once

#include "noonbell/measurement.hpp"

// Brute-force reference paths used by the test suites to validate the
// analytic implementations. Everything here works on the dense
// tensor-product basis and is restricted to small cutoffs.

namespace noonbell::oracle {

enum class CorrKind { XX, XN, NX, NN };

/// Dense correlation operator on the (nmax+1)^2-dimensional two-mode
/// space, assembled as a Kronecker product of single-mode +-1 factors.
struct DenseOperator {
  Eigen::MatrixXd m;
  int nmax;
};

DenseOperator build_correlation_operator(CorrKind kind, const Thresholds& thr,
                                         const FockCutoff& cutoff);

/// tr(rho op) with rho in the same basis layout as TwoModeDensity.
double expectation(const TwoModeDensity& rho, const DenseOperator& op);

/// Full CHSH operator E_XX + E_XN + E_NX - E_NN.
DenseOperator build_bell_operator(const Thresholds& thr, const FockCutoff& cutoff);

enum class Mode { A, B };

/// Single-mode photon loss as an explicit Kraus sum,
/// K_k = sum_n sqrt(B(k|lambda,n)) |n-k><n|. Guarded to nmax <= 12.
TwoModeDensity damp_via_kraus(const TwoModeDensity& rho, double lambda, Mode mode);

/// Q_nm by adaptive quadrature (GSL QAGS), independent of the fixed-order
/// Gauss-Legendre path.
double q_overlap_reference(int n, int m, double x0);

}  // namespace noonbell::oracle
