#include "noonbell/fockspace.hpp"

#include <cmath>
#include <cstdio>

#include <unsupported/Eigen/MatrixFunctions>

namespace noonbell {

Gain::Gain(double z) : zeta(z), mu(std::cosh(z)), nu(std::sinh(z)) {
  if (!(z >= 0.0)) throw std::invalid_argument("Gain: zeta must be >= 0");
}

FockCutoff::FockCutoff(int n) : nmax(n) {
  if (n < 2) throw std::invalid_argument("FockCutoff: nmax must be >= 2");
}

namespace {

// Renormalizes and records the truncated tail mass.
void finalize(SingleModeCoeffs& out) {
  const double norm2 = out.c.squaredNorm();
  out.norm_deficit = 1.0 - norm2;
  if (out.norm_deficit >= kNormDeficitTol) {
    char msg[64];
    std::snprintf(msg, sizeof(msg), "insufficient cutoff: norm deficit %.3e", out.norm_deficit);
    throw InsufficientCutoff(msg);
  }
  out.c /= std::sqrt(norm2);
}

}  // namespace

SingleModeCoeffs squeezed_vacuum_coeffs(const Gain& gain, const FockCutoff& cutoff) {
  SingleModeCoeffs out;
  out.c = Eigen::VectorXd::Zero(cutoff.dim());
  // c[2n] = (1/sqrt(mu)) (-nu/2mu)^n sqrt((2n)!)/n!, built by term ratio.
  double term = 1.0 / std::sqrt(gain.mu);
  out.c[0] = term;
  const double r = -gain.nu / (2.0 * gain.mu);
  for (int n = 1; 2 * n <= cutoff.nmax; ++n) {
    term *= r * std::sqrt(static_cast<double>(2 * n) * (2 * n - 1)) / n;
    out.c[2 * n] = term;
  }
  finalize(out);
  return out;
}

SingleModeCoeffs squeezed_two_photon_coeffs(const Gain& gain, const FockCutoff& cutoff) {
  SingleModeCoeffs out;
  out.c = Eigen::VectorXd::Zero(cutoff.dim());
  if (gain.nu == 0.0) {
    // The series bracket nu - 2n/nu is 0/0 at zeta=0; the limit is |2>.
    out.c[2] = 1.0;
    return out;
  }
  // c[2n] = (1/sqrt(2 mu^3)) (-nu/2mu)^n sqrt((2n)!)/n! [nu - 2n/nu]
  double base = 1.0 / std::sqrt(2.0 * gain.mu * gain.mu * gain.mu);
  out.c[0] = base * gain.nu;
  const double r = -gain.nu / (2.0 * gain.mu);
  for (int n = 1; 2 * n <= cutoff.nmax; ++n) {
    base *= r * std::sqrt(static_cast<double>(2 * n) * (2 * n - 1)) / n;
    out.c[2 * n] = base * (gain.nu - 2.0 * n / gain.nu);
  }
  finalize(out);
  return out;
}

TwoModePureState amplified_noon(const Gain& gain, const FockCutoff& cutoff) {
  const SingleModeCoeffs phi0 = squeezed_vacuum_coeffs(gain, cutoff);
  const SingleModeCoeffs phi2 = squeezed_two_photon_coeffs(gain, cutoff);
  TwoModePureState out;
  out.c = (phi2.c * phi0.c.transpose() + phi0.c * phi2.c.transpose()) / std::sqrt(2.0);
  const double norm2 = out.c.squaredNorm();
  out.norm_deficit = 1.0 - norm2;
  out.c /= std::sqrt(norm2);
  return out;
}

double mean_total_photons(const TwoModePureState& state) {
  const int d = static_cast<int>(state.c.rows());
  double acc = 0.0;
  for (int m = 0; m < d; ++m)
    for (int mp = 0; mp < d; ++mp)
      acc += (m + mp) * state.c(m, mp) * state.c(m, mp);
  return acc;
}

SqueezeMatrix squeeze_matrix(const Gain& gain, const FockCutoff& cutoff) {
  // Work at an enlarged cutoff so truncation leakage stays out of the
  // returned interior block.
  const int wdim = 2 * cutoff.nmax + 9;

  // Generator (zeta/2)(a^2 - a^dag^2) couples n to n+-2, so it is block
  // diagonal over the even and odd photon-number subspaces. Exponentiating
  // the blocks separately keeps odd-parity entries exactly zero.
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(wdim, wdim);
  for (int parity = 0; parity < 2; ++parity) {
    std::vector<int> idx;
    for (int n = parity; n < wdim; n += 2) idx.push_back(n);
    const int b = static_cast<int>(idx.size());
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(b, b);
    for (int i = 0; i + 1 < b; ++i) {
      const int n = idx[i + 1];  // a^2 maps |n> -> |n-2>
      const double amp = 0.5 * gain.zeta * std::sqrt(static_cast<double>(n) * (n - 1));
      gen(i, i + 1) = amp;
      gen(i + 1, i) = -amp;
    }
    const Eigen::MatrixXd eblock = gen.exp();
    for (int i = 0; i < b; ++i)
      for (int j = 0; j < b; ++j) s(idx[i], idx[j]) = eblock(i, j);
  }

  SqueezeMatrix out;
  out.s = s.topLeftCorner(cutoff.dim(), cutoff.dim());

  // A column is trusted while its mass above the returned cutoff is
  // negligible; later columns leak out of the truncated block.
  out.interior_block = -1;
  for (int n = 0; n <= cutoff.nmax; ++n) {
    const double tail = s.col(n).tail(wdim - cutoff.dim()).squaredNorm();
    if (tail >= kNormDeficitTol) break;
    out.interior_block = n;
  }
  if (out.interior_block < 2)
    throw InsufficientCutoff("squeeze_matrix: trusted block smaller than 3 columns");
  return out;
}

}  // namespace noonbell
