#include "kerrqfi/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kerrqfi {

int auto_dim(double n_alpha, double n_sq) {
  if (n_alpha < 0 || n_sq < 0) throw std::domain_error("auto_dim: negative photon number");
  double dim = n_alpha + 12.0 * std::sqrt(n_alpha + 1.0) + 25.0;
  if (n_sq > 0) {
    const double t2 = n_sq / (n_sq + 1.0);
    const double m = std::ceil(std::log(1e-12 * (1.0 - t2)) / std::log(t2)) + 8.0;
    dim += 2.0 * m;
  }
  return std::max(64, static_cast<int>(std::ceil(dim)));
}

FockState::FockState(Vec amplitudes, double leak_tol) : amps_(std::move(amplitudes)) {
  if (amps_.size() < 2) throw std::invalid_argument("FockState: dim must be >= 2");
  const double n2 = amps_.squaredNorm();
  if (n2 > 1.0 + 1e-12 || n2 < 1.0 - leak_tol) {
    std::ostringstream os;
    os << "FockState: squared norm " << n2 << " outside [1 - " << leak_tol
       << ", 1]; truncation too aggressive or vector not normalized";
    throw truncation_error(os.str());
  }
}

FockState FockState::vacuum(int dim) { return basis(dim, 0); }

FockState FockState::basis(int dim, int n) {
  if (dim < 2) throw std::invalid_argument("FockState: dim must be >= 2");
  if (n < 0 || n >= dim) throw std::invalid_argument("FockState: basis index out of range");
  Vec v = Vec::Zero(dim);
  v(n) = 1.0;
  return FockState(std::move(v));
}

FockState FockState::resized(int new_dim) const {
  if (new_dim < dim()) throw std::invalid_argument("FockState::resized: shrinking not supported");
  Vec v = Vec::Zero(new_dim);
  v.head(dim()) = amps_;
  FockState out = FockState(std::move(v), 1.0);  // norm unchanged, skip re-check
  return out;
}

double leakage(const FockState& state) {
  return std::max(0.0, 1.0 - state.norm2());
}

double tail_mass(const FockState& state, int k) {
  if (k < 0 || k > state.dim()) throw std::invalid_argument("tail_mass: bad k");
  return state.amplitudes().tail(k).squaredNorm();
}

FockOperator::FockOperator(Kind k, Mat m, Vec d, bool herm)
    : kind_(k), dense_(std::move(m)), diag_(std::move(d)), hermitian_(herm) {}

FockOperator FockOperator::dense(Mat entries, bool hermitian) {
  if (entries.rows() != entries.cols() || entries.rows() < 2)
    throw std::invalid_argument("FockOperator: entries must be square, dim >= 2");
  if (hermitian) {
    const double dev = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    if (dev > 1e-12) {
      std::ostringstream os;
      os << "FockOperator: hermitian flag set but max |A - A^dag| = " << dev;
      throw std::invalid_argument(os.str());
    }
  }
  return FockOperator(Kind::dense, std::move(entries), Vec(), hermitian);
}

FockOperator FockOperator::diagonal(Vec entries, bool hermitian) {
  if (entries.size() < 2) throw std::invalid_argument("FockOperator: dim >= 2 required");
  if (hermitian) {
    const double dev = entries.imag().cwiseAbs().maxCoeff();
    if (dev > 1e-12)
      throw std::invalid_argument("FockOperator: hermitian diagonal must be real");
  }
  return FockOperator(Kind::diagonal, Mat(), std::move(entries), hermitian);
}

int FockOperator::dim() const {
  return kind_ == Kind::dense ? static_cast<int>(dense_.rows())
                              : static_cast<int>(diag_.size());
}

Vec FockOperator::apply(const Vec& v) const {
  if (v.size() != dim()) throw std::invalid_argument("FockOperator::apply: dimension mismatch");
  if (kind_ == Kind::dense) return dense_ * v;
  return diag_.cwiseProduct(v);
}

Mat FockOperator::matrix() const {
  if (kind_ == Kind::dense) return dense_;
  return Mat(diag_.asDiagonal());
}

FockOperator FockOperator::adjoint() const {
  if (kind_ == Kind::dense) return FockOperator(Kind::dense, dense_.adjoint(), Vec(), hermitian_);
  return FockOperator(Kind::diagonal, Mat(), diag_.conjugate(), hermitian_);
}

FockOperator FockOperator::compose(const FockOperator& rhs) const {
  if (dim() != rhs.dim()) throw std::invalid_argument("FockOperator::compose: dimension mismatch");
  if (kind_ == Kind::diagonal && rhs.kind_ == Kind::diagonal)
    return FockOperator(Kind::diagonal, Mat(), diag_.cwiseProduct(rhs.diag_), false);
  return FockOperator(Kind::dense, matrix() * rhs.matrix(), Vec(), false);
}

FockOperator make_annihilation(int dim) {
  if (dim < 2) throw std::invalid_argument("make_annihilation: dim must be >= 2");
  Mat a = Mat::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return FockOperator::dense(std::move(a), false);
}

FockOperator make_creation(int dim) { return make_annihilation(dim).adjoint(); }

FockOperator make_number(int dim) {
  if (dim < 2) throw std::invalid_argument("make_number: dim must be >= 2");
  Vec d(dim);
  for (int n = 0; n < dim; ++n) d(n) = static_cast<double>(n);
  return FockOperator::diagonal(std::move(d), true);
}

FockOperator make_kerr(int dim, double gamma) {
  if (dim < 2) throw std::invalid_argument("make_kerr: dim must be >= 2");
  Vec d(dim);
  for (int n = 0; n < dim; ++n)
    d(n) = std::polar(1.0, -gamma * static_cast<double>(n) * static_cast<double>(n));
  return FockOperator::diagonal(std::move(d), false);
}

cxd expectation(const FockState& state, const FockOperator& op) {
  if (state.dim() != op.dim()) throw std::invalid_argument("expectation: dimension mismatch");
  return state.amplitudes().dot(op.apply(state.amplitudes()));
}

double variance(const FockState& state, const FockOperator& op) {
  if (!op.hermitian()) throw std::invalid_argument("variance: operator must be hermitian");
  if (state.dim() != op.dim()) throw std::invalid_argument("variance: dimension mismatch");
  const Vec w = op.apply(state.amplitudes());
  const double m1 = state.amplitudes().dot(w).real();
  const double m2 = w.squaredNorm();  // <A^2> for hermitian A
  double var = m2 - m1 * m1;
  if (var < -1e-10) {
    std::ostringstream os;
    os << "variance: negative beyond tolerance (" << var << ")";
    throw inconsistency_error(os.str());
  }
  return std::max(0.0, var);
}

}  // namespace kerrqfi
