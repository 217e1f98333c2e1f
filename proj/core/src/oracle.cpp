#include "noonbell/oracle.hpp"

#include <cmath>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

namespace noonbell::oracle {

namespace {

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const int ra = static_cast<int>(a.rows()), ca = static_cast<int>(a.cols());
  const int rb = static_cast<int>(b.rows()), cb = static_cast<int>(b.cols());
  Eigen::MatrixXd out(ra * rb, ca * cb);
  for (int i = 0; i < ra; ++i)
    for (int j = 0; j < ca; ++j) out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
  return out;
}

Eigen::MatrixXd single_mode_factor(bool is_x, const Thresholds& thr, const FockCutoff& cutoff) {
  if (is_x) return quad_factor(q_table(cutoff, thr.x0));
  return sign_diag(thr.n0, cutoff.dim()).asDiagonal();
}

}  // namespace

DenseOperator build_correlation_operator(CorrKind kind, const Thresholds& thr,
                                         const FockCutoff& cutoff) {
  const bool ax = (kind == CorrKind::XX || kind == CorrKind::XN);
  const bool bx = (kind == CorrKind::XX || kind == CorrKind::NX);
  return {kron(single_mode_factor(ax, thr, cutoff), single_mode_factor(bx, thr, cutoff)),
          cutoff.nmax};
}

double expectation(const TwoModeDensity& rho, const DenseOperator& op) {
  return rho.m.cwiseProduct(op.m.transpose()).sum();
}

DenseOperator build_bell_operator(const Thresholds& thr, const FockCutoff& cutoff) {
  DenseOperator out = build_correlation_operator(CorrKind::XX, thr, cutoff);
  out.m += build_correlation_operator(CorrKind::XN, thr, cutoff).m;
  out.m += build_correlation_operator(CorrKind::NX, thr, cutoff).m;
  out.m -= build_correlation_operator(CorrKind::NN, thr, cutoff).m;
  return out;
}

TwoModeDensity damp_via_kraus(const TwoModeDensity& rho, double lambda, Mode mode) {
  if (rho.nmax > 12) throw std::invalid_argument("damp_via_kraus: nmax must be <= 12");
  const int d = rho.dim();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);

  TwoModeDensity out(rho.nmax);
  for (int k = 0; k < d; ++k) {
    Eigen::MatrixXd kk = Eigen::MatrixXd::Zero(d, d);
    for (int n = k; n < d; ++n) kk(n - k, n) = std::sqrt(binomial_pmf(k, lambda, n));
    const Eigen::MatrixXd full = (mode == Mode::A) ? kron(kk, id) : kron(id, kk);
    out.m += full * rho.m * full.transpose();
  }
  return out;
}

namespace {

struct QIntegrand {
  int n, m;
};

double q_integrand(double x, void* params) {
  const QIntegrand* p = static_cast<QIntegrand*>(params);
  const Eigen::VectorXd h = hermite_normalized(std::max(p->n, p->m), std::sqrt(2.0) * x);
  return std::sqrt(2.0 / M_PI) * std::exp(-2.0 * x * x) * h[p->n] * h[p->m];
}

}  // namespace

double q_overlap_reference(int n, int m, double x0) {
  if (n > 30 || m > 30) throw std::invalid_argument("q_overlap_reference: order must be <= 30");
  QIntegrand params{n, m};
  gsl_function f;
  f.function = &q_integrand;
  f.params = &params;
  gsl_integration_workspace* ws = gsl_integration_workspace_alloc(2000);
  double result = 0.0, abserr = 0.0;
  gsl_error_handler_t* old = gsl_set_error_handler_off();
  gsl_integration_qags(&f, -x0, x0, 1e-12, 1e-11, 2000, ws, &result, &abserr);
  gsl_set_error_handler(old);
  gsl_integration_workspace_free(ws);
  return result;
}

}  // namespace noonbell::oracle
