#pragma once

#include <random>

#include "noonbell/channels.hpp"

namespace noonbell::testutil {

/// Random positive semidefinite trace-1 density operator, built as G G^T
/// from a Gaussian matrix.
inline TwoModeDensity random_density(int nmax, std::mt19937& rng) {
  const int dd = (nmax + 1) * (nmax + 1);
  std::normal_distribution<double> dist;
  Eigen::MatrixXd g(dd, dd);
  for (int i = 0; i < dd; ++i)
    for (int j = 0; j < dd; ++j) g(i, j) = dist(rng);
  TwoModeDensity rho(nmax);
  rho.m = g * g.transpose();
  rho.m /= rho.m.trace();
  return rho;
}

inline TwoModeDensity vacuum_density(int nmax) {
  TwoModeDensity rho(nmax);
  rho.at(0, 0, 0, 0) = 1.0;
  return rho;
}

}  // namespace noonbell::testutil
