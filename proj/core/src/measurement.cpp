#include "noonbell/measurement.hpp"

#include <cmath>

#include <gsl/gsl_integration.h>

namespace noonbell {

Thresholds::Thresholds(int n0_, double x0_) : n0(n0_), x0(x0_) {
  if (n0 < 0) throw std::invalid_argument("Thresholds: n0 must be >= 0");
  if (x0 < 0.0) throw std::invalid_argument("Thresholds: x0 must be >= 0");
}

Eigen::VectorXd hermite_normalized(int kmax, double y) {
  Eigen::VectorXd h(kmax + 1);
  h[0] = 1.0;
  if (kmax >= 1) h[1] = std::sqrt(2.0) * y;
  for (int k = 1; k < kmax; ++k)
    h[k + 1] = std::sqrt(2.0 / (k + 1)) * y * h[k] - std::sqrt(k / (k + 1.0)) * h[k - 1];
  return h;
}

namespace {

struct GLRule {
  std::vector<double> x, w;
};

// Composite Gauss-Legendre rule on [-x0, x0]: panels of width <= 4 with
// `nodes` points each. The node count is chosen by the caller to cover the
// polynomial degree of the integrand.
GLRule composite_rule(double x0, int nodes) {
  GLRule rule;
  const int panels = std::max(1, static_cast<int>(std::ceil(2.0 * x0 / 4.0)));
  gsl_integration_glfixed_table* tab = gsl_integration_glfixed_table_alloc(nodes);
  for (int p = 0; p < panels; ++p) {
    const double a = -x0 + 2.0 * x0 * p / panels;
    const double b = -x0 + 2.0 * x0 * (p + 1) / panels;
    for (int i = 0; i < nodes; ++i) {
      double xi, wi;
      gsl_integration_glfixed_point(a, b, i, &xi, &wi, tab);
      rule.x.push_back(xi);
      rule.w.push_back(wi);
    }
  }
  gsl_integration_glfixed_table_free(tab);
  return rule;
}

}  // namespace

double q_overlap(int n, int m, double x0) {
  if (n < 0 || m < 0) throw std::invalid_argument("q_overlap: negative order");
  if (x0 < 0.0) throw std::invalid_argument("q_overlap: x0 must be >= 0");
  if ((n + m) % 2 != 0 || x0 == 0.0) return 0.0;
  const GLRule rule = composite_rule(x0, n + m + 16);
  const int kmax = std::max(n, m);
  double acc = 0.0;
  for (size_t i = 0; i < rule.x.size(); ++i) {
    const double x = rule.x[i];
    const Eigen::VectorXd h = hermite_normalized(kmax, std::sqrt(2.0) * x);
    acc += rule.w[i] * std::exp(-2.0 * x * x) * h[n] * h[m];
  }
  return std::sqrt(2.0 / M_PI) * acc;
}

QTable q_table(const FockCutoff& cutoff, double x0) {
  const int d = cutoff.dim();
  QTable out;
  out.x0 = x0;
  out.q = Eigen::MatrixXd::Zero(d, d);
  if (x0 == 0.0) return out;

  const GLRule rule = composite_rule(x0, 2 * cutoff.nmax + 16);
  const size_t npts = rule.x.size();
  Eigen::MatrixXd h(npts, d);  // weighted Hermite values per node
  for (size_t i = 0; i < npts; ++i) {
    const double x = rule.x[i];
    const double wg = rule.w[i] * std::exp(-2.0 * x * x);
    h.row(i) = wg * hermite_normalized(cutoff.nmax, std::sqrt(2.0) * x).transpose();
  }
  Eigen::MatrixXd hraw(npts, d);
  for (size_t i = 0; i < npts; ++i)
    hraw.row(i) = hermite_normalized(cutoff.nmax, std::sqrt(2.0) * rule.x[i]).transpose();

  const double pref = std::sqrt(2.0 / M_PI);
  for (int n = 0; n < d; ++n)
    for (int m = n; m < d; m += 2) {
      const double v = pref * h.col(n).dot(hraw.col(m));
      out.q(n, m) = v;
      out.q(m, n) = v;
    }
  return out;
}

double corr_xx(const TwoModeDensity& rho, double x0) {
  const int d = rho.dim();
  const QTable qt = q_table(FockCutoff(rho.nmax), x0);
  double acc = 0.0;
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      for (int mp = 0; mp < d; ++mp)
        for (int np = 0; np < d; ++np) {
          const double r = rho.at(m, mp, n, np);
          if (r == 0.0) continue;
          acc += r * (qt.q(n, m) * qt.q(np, mp) - 0.5 * qt.q(n, m) * (mp == np ? 1.0 : 0.0) -
                      0.5 * (m == n ? 1.0 : 0.0) * qt.q(np, mp));
        }
  return 1.0 + 4.0 * acc;
}

double corr_xn(const TwoModeDensity& rho, double x0, int n0) {
  const int d = rho.dim();
  const QTable qt = q_table(FockCutoff(rho.nmax), x0);
  double acc = 0.0;
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) {
      double below = 0.0, above = 0.0;
      for (int mp = 0; mp < d; ++mp)
        (mp <= n0 ? below : above) += rho.at(m, mp, n, mp);
      acc += below * ((m == n ? 1.0 : 0.0) - qt.q(n, m)) + above * qt.q(n, m);
    }
  return 2.0 * acc - 1.0;
}

double corr_nx(const TwoModeDensity& rho, double x0, int n0) {
  const int d = rho.dim();
  TwoModeDensity swapped(rho.nmax);
  for (int ma = 0; ma < d; ++ma)
    for (int mb = 0; mb < d; ++mb)
      for (int na = 0; na < d; ++na)
        for (int nb = 0; nb < d; ++nb) swapped.at(mb, ma, nb, na) = rho.at(ma, mb, na, nb);
  return corr_xn(swapped, x0, n0);
}

double corr_nn(const TwoModeDensity& rho, int n0) {
  const int d = rho.dim();
  double mismatch = 0.0;
  for (int m = 0; m < d; ++m)
    for (int mp = 0; mp < d; ++mp)
      if ((m <= n0) != (mp <= n0)) mismatch += rho.at(m, mp, m, mp);
  return 1.0 - 2.0 * mismatch;
}

Eigen::VectorXd sign_diag(int n0, int dim) {
  Eigen::VectorXd d(dim);
  for (int n = 0; n < dim; ++n) d[n] = (n <= n0) ? 1.0 : -1.0;
  return d;
}

Eigen::MatrixXd quad_factor(const QTable& table) {
  const int d = static_cast<int>(table.q.rows());
  return Eigen::MatrixXd::Identity(d, d) - 2.0 * table.q;
}

namespace {
double tr_prod(const Eigen::MatrixXd& a, const Eigen::MatrixXd& m) {
  return a.cwiseProduct(m.transpose()).sum();
}
double tr_diag(const Eigen::MatrixXd& a, const Eigen::VectorXd& d) {
  return a.diagonal().dot(d);
}
}  // namespace

double corr_xx(const SeparableDensity& rho, const Eigen::MatrixXd& mx) {
  double acc = 0.0;
  for (const auto& t : rho.terms) acc += t.w * tr_prod(t.a, mx) * tr_prod(t.b, mx);
  return acc;
}

double corr_xn(const SeparableDensity& rho, const Eigen::MatrixXd& mx, const Eigen::VectorXd& dn) {
  double acc = 0.0;
  for (const auto& t : rho.terms) acc += t.w * tr_prod(t.a, mx) * tr_diag(t.b, dn);
  return acc;
}

double corr_nx(const SeparableDensity& rho, const Eigen::MatrixXd& mx, const Eigen::VectorXd& dn) {
  double acc = 0.0;
  for (const auto& t : rho.terms) acc += t.w * tr_diag(t.a, dn) * tr_prod(t.b, mx);
  return acc;
}

double corr_nn(const SeparableDensity& rho, const Eigen::VectorXd& dn) {
  double acc = 0.0;
  for (const auto& t : rho.terms) acc += t.w * tr_diag(t.a, dn) * tr_diag(t.b, dn);
  return acc;
}

}  // namespace noonbell
