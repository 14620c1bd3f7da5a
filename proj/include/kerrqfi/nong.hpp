#pragma once

#include "kerrqfi/fock.hpp"

namespace kerrqfi {

/// First and second moments of the mode operators.
struct Moments {
  cxd mean_a;   // <a>
  double mean_n;  // <a^dag a>
  cxd mean_a2;  // <a^2>
};

/// Symmetrized quadrature covariance over (x, p) with x = (a + a^dag)/sqrt(2),
/// p = (a - a^dag)/(i sqrt(2)); vacuum variance 1/2.
struct CovarianceMatrix {
  double xx = 0.5, pp = 0.5, xp = 0.0;
  double det() const { return xx * pp - xp * xp; }
  double symplectic_eigenvalue() const;  // nu = sqrt(det)
};

Moments moments(const FockState& state, double leak_tol = default_leak_tol);

CovarianceMatrix covariance(const Moments& m);

// Von Neumann entropy of a single-mode Gaussian state with symplectic
// eigenvalue nu: (nu + 1/2) ln(nu + 1/2) - (nu - 1/2) ln(nu - 1/2), in nats.
double gaussian_entropy(double nu);

// Entropic non-Gaussianity of a pure state: the entropy of the Gaussian
// reference with the same first and second moments.
double nong_entropic(const FockState& state);

// Maximum non-Gaussianity at mean photon number n: the reference-Gaussian
// entropy (n+1) ln(n+1) - n ln n, saturated by the number state |n>.
double max_nong(double n);

// delta / max_nong(n_alpha), in [0, 1].
double nong_normalized(const FockState& state, double n_alpha);

}  // namespace kerrqfi
