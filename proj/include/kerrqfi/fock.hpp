#pragma once

#include <Eigen/Dense>
#include <complex>

#include "kerrqfi/errors.hpp"

namespace kerrqfi {

using cxd = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// Default tolerance on probability mass lost to truncation.
inline constexpr double default_leak_tol = 1e-8;

// Truncation dimension keeping the photon-number tails of a probe with
// n_alpha amplitude photons and n_sq squeezing photons below ~1e-12.
// The Poisson part uses mean + 12*sqrt(mean+1) + 25; squeezed-vacuum tails
// decay like t^{2m} with t^2 = n_sq/(n_sq+1) and need their own budget.
int auto_dim(double n_alpha, double n_sq);

/// Pure single-mode state as a finite photon-number amplitude vector.
/// Immutable after construction; norm must lie in [1 - leak_tol, 1].
class FockState {
 public:
  explicit FockState(Vec amplitudes, double leak_tol = default_leak_tol);

  static FockState vacuum(int dim);
  static FockState basis(int dim, int n);

  int dim() const { return static_cast<int>(amps_.size()); }
  const Vec& amplitudes() const { return amps_; }
  cxd amplitude(int n) const { return amps_(n); }
  double norm2() const { return amps_.squaredNorm(); }

  // Zero-padded copy in a larger basis (exact embedding).
  FockState resized(int new_dim) const;

 private:
  Vec amps_;
};

// Probability mass missing from the truncated representation, 1 - ||psi||^2
// (clamped at 0 against rounding).
double leakage(const FockState& state);

// Probability mass in the top k Fock levels, sum_{n >= dim-k} |c_n|^2.
double tail_mass(const FockState& state, int k);

/// Operator on the truncated Fock space, dense matrix or number-basis diagonal.
class FockOperator {
 public:
  enum class Kind { dense, diagonal };

  // hermitian = true is verified (max entrywise |A - A^dag| <= 1e-12).
  static FockOperator dense(Mat entries, bool hermitian);
  static FockOperator diagonal(Vec entries, bool hermitian);

  Kind kind() const { return kind_; }
  int dim() const;
  bool hermitian() const { return hermitian_; }

  Vec apply(const Vec& v) const;
  Mat matrix() const;  // dense copy in the canonical layout
  FockOperator adjoint() const;
  FockOperator compose(const FockOperator& rhs) const;  // (*this) * rhs

 private:
  FockOperator(Kind k, Mat m, Vec d, bool herm);
  Kind kind_;
  Mat dense_;
  Vec diag_;
  bool hermitian_;
};

// Ladder and number operators; A[n-1, n] = sqrt(n).
FockOperator make_annihilation(int dim);
FockOperator make_creation(int dim);
FockOperator make_number(int dim);

// Photon-number-squared phase evolution exp(-i gamma n^2), diagonal.
FockOperator make_kerr(int dim, double gamma);

// <psi|A|psi>. Real to 1e-12 imaginary part when A is hermitian.
cxd expectation(const FockState& state, const FockOperator& op);

// <A^2> - <A>^2 for hermitian A; negative values within 1e-10 clamp to 0.
double variance(const FockState& state, const FockOperator& op);

}  // namespace kerrqfi
