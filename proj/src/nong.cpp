#include "kerrqfi/nong.hpp"

#include <cmath>
#include <sstream>

namespace kerrqfi {

namespace {

// a^2 assembled directly on its band (composing a with itself would cost a
// dense multiply for the same two off-diagonals).
FockOperator annihilation_squared(int dim) {
  Mat m = Mat::Zero(dim, dim);
  for (int n = 2; n < dim; ++n)
    m(n - 2, n) = std::sqrt(static_cast<double>(n) * (n - 1.0));
  return FockOperator::dense(std::move(m), false);
}

}  // namespace

double CovarianceMatrix::symplectic_eigenvalue() const {
  return std::sqrt(std::max(0.0, det()));
}

Moments moments(const FockState& state, double leak_tol) {
  const double leak = leakage(state);
  if (leak > leak_tol) {
    std::ostringstream os;
    os << "moments: state leakage " << leak << " exceeds " << leak_tol;
    throw truncation_error(os.str());
  }
  const int dim = state.dim();
  Moments m;
  m.mean_a = expectation(state, make_annihilation(dim));
  m.mean_n = expectation(state, make_number(dim)).real();
  m.mean_a2 = expectation(state, annihilation_squared(dim));
  if (m.mean_n < std::norm(m.mean_a) - 1e-10) {
    std::ostringstream os;
    os << "moments: <n> = " << m.mean_n << " below |<a>|^2 = " << std::norm(m.mean_a);
    throw inconsistency_error(os.str());
  }
  return m;
}

CovarianceMatrix covariance(const Moments& m) {
  const double re_a = m.mean_a.real(), im_a = m.mean_a.imag();
  CovarianceMatrix s;
  s.xx = 0.5 + m.mean_a2.real() + m.mean_n - 2.0 * re_a * re_a;
  s.pp = 0.5 - m.mean_a2.real() + m.mean_n - 2.0 * im_a * im_a;
  s.xp = m.mean_a2.imag() - 2.0 * re_a * im_a;
  if (s.det() < 0.25 - 1e-9) {
    std::ostringstream os;
    os << "covariance: det " << s.det() << " violates the uncertainty bound 1/4";
    throw inconsistency_error(os.str());
  }
  return s;
}

double gaussian_entropy(double nu) {
  if (nu < 0.5 - 1e-9) throw std::domain_error("gaussian_entropy: nu must be >= 1/2");
  if (nu <= 0.5) return 0.0;
  const double up = nu + 0.5, dn = nu - 0.5;
  return up * std::log(up) - dn * std::log(dn);
}

double nong_entropic(const FockState& state) {
  const CovarianceMatrix s = covariance(moments(state));
  const double nu = s.symplectic_eigenvalue();
  if (nu < 0.5 - 1e-9) {
    std::ostringstream os;
    os << "nong_entropic: symplectic eigenvalue " << nu << " below 1/2";
    throw inconsistency_error(os.str());
  }
  if (nu <= 0.5) return 0.0;
  return gaussian_entropy(nu);
}

double max_nong(double n) {
  if (n <= 0) throw std::domain_error("max_nong: n must be > 0");
  return (n + 1.0) * std::log(n + 1.0) - n * std::log(n);
}

double nong_normalized(const FockState& state, double n_alpha) {
  if (n_alpha <= 0) throw std::domain_error("nong_normalized: n_alpha must be > 0");
  const double ratio = nong_entropic(state) / max_nong(n_alpha);
  if (ratio > 1.0 + 1e-9) {
    std::ostringstream os;
    os << "nong_normalized: ratio " << ratio << " above 1";
    throw inconsistency_error(os.str());
  }
  return std::max(0.0, ratio);
}

}  // namespace kerrqfi
