#pragma once

#include "kerrqfi/fock.hpp"

namespace kerrqfi {

/// Parameters of a probe U_gamma D(alpha) S(r) |0>, alpha = alpha_mag e^{i phi}.
/// S(r) = exp{(r/2)(a^dag^2 - a^2)}: for r > 0 the x quadrature is stretched
/// (Var x = e^{2r}/2) and p is squeezed; squeezed-vacuum amplitudes carry
/// (+tanh r)^m. This is the convention every formula in the library assumes.
struct ProbeSpec {
  double alpha_mag = 0.0;  // |alpha| >= 0
  double phi = 0.0;        // coherent phase (radians; periodic)
  double r = 0.0;          // squeezing parameter >= 0
  double gamma = 0.0;      // Kerr coupling >= 0
  int dim = 0;             // truncation dimension, 0 = auto

  double n_alpha() const { return alpha_mag * alpha_mag; }
  double n_sq() const;                  // sinh^2 r
  double mean_photons() const;          // sinh^2 r + |alpha|^2
  double squeezing_fraction() const;    // beta = n_sq / N, 0 when N == 0
  int resolved_dim(int cap = 0) const;  // dim, or auto_dim capped at cap (if > 0)

  void validate() const;  // std::domain_error on out-of-range parameters
};

// Wrap an angle into [0, 2pi).
double wrap_angle(double phi);

// Closed-form coherent state, c_n = e^{-|a|^2/2} a^n / sqrt(n!).
FockState coherent(double alpha_mag, double phi, int dim,
                   double leak_tol = default_leak_tol);

// Squeezed vacuum S(r)|0>, even levels only, c_{2m} = (tanh r)^m
// sqrt((2m)!) / (2^m m! sqrt(cosh r)).
FockState squeezed_vacuum(double r, int dim, double leak_tol = default_leak_tol);

// Unitary D(alpha) = exp(alpha a^dag - conj(alpha) a) on the truncated basis,
// built from the eigendecomposition of its Hermitian generator.
Mat displacement_matrix(cxd alpha, int dim);

// D(alpha) S(r) |0> (displacement applied after squeezing). spec.gamma must be 0.
FockState displaced_squeezed(const ProbeSpec& spec, double leak_tol = default_leak_tol);

// Multiply amplitudes by e^{-i gamma n^2}; photon statistics unchanged.
FockState apply_kerr(const FockState& state, double gamma);

// U_gamma D(alpha) S(r) |0>.
FockState build_probe(const ProbeSpec& spec, double leak_tol = default_leak_tol);

}  // namespace kerrqfi
