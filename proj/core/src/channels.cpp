#include "noonbell/channels.hpp"

#include <cmath>

namespace noonbell {

TwoModeDensity::TwoModeDensity(int nmax_) : nmax(nmax_) {
  m = Eigen::MatrixXd::Zero(dim() * dim(), dim() * dim());
}

TwoModeDensity TwoModeDensity::from_pure(const TwoModePureState& psi) {
  const int d = static_cast<int>(psi.c.rows());
  TwoModeDensity rho(d - 1);
  Eigen::VectorXd v(d * d);
  for (int m = 0; m < d; ++m)
    for (int mp = 0; mp < d; ++mp) v[m * d + mp] = psi.c(m, mp);
  rho.m = v * v.transpose();
  return rho;
}

void LossParams::validate() const {
  auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in01(t) || !in01(eta_n) || !in01(eta_x))
    throw std::invalid_argument("LossParams: t, eta_n, eta_x must lie in [0,1]");
}

double binomial_pmf(int k, double p, int n) {
  if (k < 0 || k > n) throw std::domain_error("binomial_pmf: require 0 <= k <= n");
  if (p < 0.0 || p > 1.0) throw std::domain_error("binomial_pmf: p outside [0,1]");
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  const double lg = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return std::exp(lg + k * std::log(p) + (n - k) * std::log1p(-p));
}

namespace {

// g(k, m) = sqrt(B(k | lambda, k + m)) for all k + m <= nmax.
Eigen::MatrixXd damping_amplitudes(int dim, double lambda) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);  // (k, m)
  for (int k = 0; k < dim; ++k)
    for (int m = 0; m + k < dim; ++m) g(k, m) = std::sqrt(binomial_pmf(k, lambda, k + m));
  return g;
}

}  // namespace

Eigen::MatrixXd damp_rank_one(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double lambda) {
  const int d = static_cast<int>(u.size());
  const Eigen::MatrixXd g = damping_amplitudes(d, lambda);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
  for (int k = 0; k < d; ++k)
    for (int m = 0; m + k < d; ++m) {
      const double um = u[m + k] * g(k, m);
      if (um == 0.0) continue;
      for (int n = 0; n + k < d; ++n) out(m, n) += um * v[n + k] * g(k, n);
    }
  return out;
}

Eigen::MatrixXd damp_single_mode(const Eigen::MatrixXd& rho1, double lambda) {
  const int d = static_cast<int>(rho1.rows());
  const Eigen::MatrixXd g = damping_amplitudes(d, lambda);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
  for (int k = 0; k < d; ++k)
    for (int m = 0; m + k < d; ++m)
      for (int n = 0; n + k < d; ++n) out(m, n) += rho1(m + k, n + k) * g(k, m) * g(k, n);
  return out;
}

TwoModeDensity amplitude_damp(const TwoModeDensity& rho, double lambda_a, double lambda_b) {
  const int d = rho.dim();
  const Eigen::MatrixXd ga = damping_amplitudes(d, lambda_a);
  const Eigen::MatrixXd gb = damping_amplitudes(d, lambda_b);

  // The channel factorizes over the modes; damp mode A, then mode B.
  TwoModeDensity mid(rho.nmax);
  for (int mp = 0; mp < d; ++mp)
    for (int np = 0; np < d; ++np)
      for (int k = 0; k < d; ++k)
        for (int m = 0; m + k < d; ++m)
          for (int n = 0; n + k < d; ++n)
            mid.at(m, mp, n, np) += rho.at(m + k, mp, n + k, np) * ga(k, m) * ga(k, n);

  TwoModeDensity out(rho.nmax);
  for (int ma = 0; ma < d; ++ma)
    for (int na = 0; na < d; ++na)
      for (int k = 0; k < d; ++k)
        for (int m = 0; m + k < d; ++m)
          for (int n = 0; n + k < d; ++n)
            out.at(ma, m, na, n) += mid.at(ma, m + k, na, n + k) * gb(k, m) * gb(k, n);
  return out;
}

TwoModeDensity ProductFormDensity::expand(int nmax) const {
  TwoModeDensity out(nmax);
  const int d = nmax + 1;
  for (const Term& t : terms) {
    const Eigen::MatrixXd a = t.u_a * t.v_a.transpose();
    const Eigen::MatrixXd b = t.u_b * t.v_b.transpose();
    for (int ma = 0; ma < d; ++ma)
      for (int na = 0; na < d; ++na) {
        if (a(ma, na) == 0.0) continue;
        for (int mb = 0; mb < d; ++mb)
          for (int nb = 0; nb < d; ++nb)
            out.at(ma, mb, na, nb) += t.w * a(ma, na) * b(mb, nb);
      }
  }
  return out;
}

ProductFormDensity ProductFormDensity::amplified_noon(const Gain& gain, const FockCutoff& cutoff) {
  SingleModeCoeffs phi0 = squeezed_vacuum_coeffs(gain, cutoff);
  SingleModeCoeffs phi2 = squeezed_two_photon_coeffs(gain, cutoff);
  // Renormalize the symmetrized product exactly as amplified_noon() does.
  const double overlap = phi0.c.dot(phi2.c);
  const double norm2 = 1.0 + overlap * overlap;
  const double w = 0.5 / norm2;

  ProductFormDensity out;
  out.terms = {
      {w, phi2.c, phi2.c, phi0.c, phi0.c},
      {w, phi2.c, phi0.c, phi0.c, phi2.c},
      {w, phi0.c, phi2.c, phi2.c, phi0.c},
      {w, phi0.c, phi0.c, phi2.c, phi2.c},
  };
  return out;
}

double SeparableDensity::trace() const {
  double acc = 0.0;
  for (const Term& t : terms) acc += t.w * t.a.trace() * t.b.trace();
  return acc;
}

TwoModeDensity SeparableDensity::expand() const {
  TwoModeDensity out(nmax);
  const int d = nmax + 1;
  for (const Term& t : terms)
    for (int ma = 0; ma < d; ++ma)
      for (int na = 0; na < d; ++na) {
        const double a = t.w * t.a(ma, na);
        if (a == 0.0) continue;
        for (int mb = 0; mb < d; ++mb)
          for (int nb = 0; nb < d; ++nb) out.at(ma, mb, na, nb) += a * t.b(mb, nb);
      }
  return out;
}

SeparableDensity damp_product_form_separable(const ProductFormDensity& state, int nmax,
                                             double lambda_a, double lambda_b) {
  SeparableDensity out;
  out.nmax = nmax;
  out.terms.reserve(state.terms.size());
  for (const ProductFormDensity::Term& t : state.terms)
    out.terms.push_back({t.w, damp_rank_one(t.u_a, t.v_a, lambda_a),
                         damp_rank_one(t.u_b, t.v_b, lambda_b)});
  return out;
}

TwoModeDensity damp_product_form(const ProductFormDensity& state, int nmax,
                                 double lambda_a, double lambda_b) {
  return damp_product_form_separable(state, nmax, lambda_a, lambda_b).expand();
}

std::pair<double, double> loss_for_measurement(const LossParams& loss, Meas side_a, Meas side_b) {
  loss.validate();
  auto lam = [&](Meas m) {
    return 1.0 - loss.t * (m == Meas::X ? loss.eta_x : loss.eta_n);
  };
  return {lam(side_a), lam(side_b)};
}

SeparableDensity damp_then_amplify(double t, const Gain& gain, const FockCutoff& cutoff) {
  if (t < 0.0 || t > 1.0) throw std::invalid_argument("damp_then_amplify: t outside [0,1]");
  const double lambda = 1.0 - t;

  // Bare two-photon N00N state lives on photon numbers <= 2 per mode.
  const int small = 2;
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(small + 1);
  Eigen::VectorXd e2 = Eigen::VectorXd::Zero(small + 1);
  e0[0] = 1.0;
  e2[2] = 1.0;
  const double w = 0.5;
  const ProductFormDensity::Term bare[] = {
      {w, e2, e2, e0, e0}, {w, e2, e0, e0, e2}, {w, e0, e2, e2, e0}, {w, e0, e0, e2, e2}};

  // Damp on the small support, then re-expand each damped factor over the
  // number-state dyads |a><c| and amplify those with the squeeze columns.
  const SqueezeMatrix sq = squeeze_matrix(gain, cutoff);
  if (sq.interior_block < small)
    throw InsufficientCutoff("damp_then_amplify: squeeze block too small");

  SeparableDensity out;
  out.nmax = cutoff.nmax;
  for (const auto& term : bare) {
    const Eigen::MatrixXd da = damp_rank_one(term.u_a, term.v_a, lambda);
    const Eigen::MatrixXd db = damp_rank_one(term.u_b, term.v_b, lambda);
    for (int a = 0; a <= small; ++a)
      for (int c = 0; c <= small; ++c) {
        if (da(a, c) == 0.0) continue;
        for (int b = 0; b <= small; ++b)
          for (int e = 0; e <= small; ++e) {
            if (db(b, e) == 0.0) continue;
            SeparableDensity::Term amp;
            amp.w = term.w * da(a, c) * db(b, e);
            amp.a = sq.s.col(a) * sq.s.col(c).transpose();
            amp.b = sq.s.col(b) * sq.s.col(e).transpose();
            out.terms.push_back(std::move(amp));
          }
      }
  }

  // Truncation makes the amplified trace drift slightly below one.
  const double tr = out.trace();
  if (std::abs(tr - 1.0) > 1e-6)
    throw InsufficientCutoff("damp_then_amplify: trace drift " + std::to_string(tr - 1.0));
  for (auto& term : out.terms) term.w /= tr;
  return out;
}

}  // namespace noonbell
