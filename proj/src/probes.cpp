#include "kerrqfi/probes.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace kerrqfi {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double mean_photon_number(const Vec& v) {
  double n = 0.0;
  for (int k = 1; k < v.size(); ++k) n += k * std::norm(v(k));
  return n;
}

[[noreturn]] void throw_truncation(const char* what, double value, double tol, int dim) {
  std::ostringstream os;
  os << what << ": " << value << " exceeds tolerance " << tol << " at dim " << dim
     << "; increase the truncation dimension";
  throw truncation_error(os.str());
}

}  // namespace

double wrap_angle(double phi) {
  double w = std::fmod(phi, two_pi);
  if (w < 0) w += two_pi;
  return w;
}

double ProbeSpec::n_sq() const {
  const double s = std::sinh(r);
  return s * s;
}

double ProbeSpec::mean_photons() const { return n_sq() + n_alpha(); }

double ProbeSpec::squeezing_fraction() const {
  const double n = mean_photons();
  return n > 0 ? n_sq() / n : 0.0;
}

int ProbeSpec::resolved_dim(int cap) const {
  int d = dim > 0 ? dim : auto_dim(n_alpha(), n_sq());
  if (cap > 0) d = std::min(d, cap);
  return d;
}

void ProbeSpec::validate() const {
  if (alpha_mag < 0) throw std::domain_error("ProbeSpec: alpha_mag must be >= 0");
  if (r < 0) throw std::domain_error("ProbeSpec: r must be >= 0");
  if (gamma < 0) throw std::domain_error("ProbeSpec: gamma must be >= 0");
  if (dim < 0 || dim == 1) throw std::domain_error("ProbeSpec: dim must be 0 (auto) or >= 2");
  if (!(std::isfinite(alpha_mag) && std::isfinite(phi) && std::isfinite(r) &&
        std::isfinite(gamma)))
    throw std::domain_error("ProbeSpec: parameters must be finite");
}

FockState coherent(double alpha_mag, double phi, int dim, double leak_tol) {
  if (alpha_mag < 0) throw std::domain_error("coherent: alpha_mag must be >= 0");
  if (dim < 2) throw std::invalid_argument("coherent: dim must be >= 2");
  Vec c(dim);
  double radial = std::exp(-0.5 * alpha_mag * alpha_mag);
  c(0) = radial;
  for (int n = 1; n < dim; ++n) {
    radial *= alpha_mag / std::sqrt(static_cast<double>(n));
    c(n) = radial * std::polar(1.0, n * phi);
  }
  const double leak = std::max(0.0, 1.0 - c.squaredNorm());
  if (leak > leak_tol) throw_truncation("coherent: leakage", leak, leak_tol, dim);
  return FockState(std::move(c), leak_tol);
}

FockState squeezed_vacuum(double r, int dim, double leak_tol) {
  if (r < 0) throw std::domain_error("squeezed_vacuum: r must be >= 0");
  if (dim < 2) throw std::invalid_argument("squeezed_vacuum: dim must be >= 2");
  Vec c = Vec::Zero(dim);
  const double t = std::tanh(r);
  double amp = 1.0 / std::sqrt(std::cosh(r));
  c(0) = amp;
  for (int m = 1; 2 * m < dim; ++m) {
    amp *= t * std::sqrt(2.0 * m - 1.0) / std::sqrt(2.0 * m);
    c(2 * m) = amp;
  }
  const double leak = std::max(0.0, 1.0 - c.squaredNorm());
  if (leak > leak_tol) throw_truncation("squeezed_vacuum: leakage", leak, leak_tol, dim);
  FockState state(std::move(c), leak_tol);
  const double n_sq = std::sinh(r) * std::sinh(r);
  const double n = mean_photon_number(state.amplitudes());
  if (std::abs(n - n_sq) > 1e-8 * std::max(1.0, n_sq))
    throw_truncation("squeezed_vacuum: mean photon error", std::abs(n - n_sq), 1e-8, dim);
  return state;
}

Mat displacement_matrix(cxd alpha, int dim) {
  if (dim < 2) throw std::invalid_argument("displacement_matrix: dim must be >= 2");
  // alpha a^dag - conj(alpha) a = i H with H hermitian; D = V e^{i diag} V^dag.
  Mat h = Mat::Zero(dim, dim);
  const cxd minus_i(0.0, -1.0);
  for (int n = 1; n < dim; ++n) {
    const double root = std::sqrt(static_cast<double>(n));
    h(n, n - 1) = minus_i * alpha * root;           // -i alpha a^dag
    h(n - 1, n) = std::conj(h(n, n - 1));
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  if (es.info() != Eigen::Success)
    throw inconsistency_error("displacement_matrix: eigendecomposition failed");
  Vec phases(dim);
  for (int k = 0; k < dim; ++k) phases(k) = std::polar(1.0, es.eigenvalues()(k));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

FockState displaced_squeezed(const ProbeSpec& spec, double leak_tol) {
  spec.validate();
  if (spec.gamma != 0.0)
    throw std::invalid_argument("displaced_squeezed: spec.gamma must be 0 (use build_probe)");
  const int dim = spec.resolved_dim();
  FockState sq = squeezed_vacuum(spec.r, dim, leak_tol);
  if (spec.alpha_mag == 0.0) return sq;

  const cxd alpha = std::polar(spec.alpha_mag, spec.phi);
  Vec v = displacement_matrix(alpha, dim) * sq.amplitudes();
  FockState state(std::move(v), leak_tol);

  // The truncated displacement is exactly unitary, so corruption shows up at
  // the basis edge and in the energy balance rather than in the norm.
  const double tail = tail_mass(state, 4);
  if (tail > leak_tol) throw_truncation("displaced_squeezed: edge mass", tail, leak_tol, dim);
  const double n_expected = spec.mean_photons();
  const double n = mean_photon_number(state.amplitudes());
  if (std::abs(n - n_expected) > 1e-6 * std::max(1.0, n_expected))
    throw_truncation("displaced_squeezed: mean photon error", std::abs(n - n_expected), 1e-6, dim);
  return state;
}

FockState apply_kerr(const FockState& state, double gamma) {
  if (gamma == 0.0) return state;
  Vec v = state.amplitudes();
  for (int n = 0; n < v.size(); ++n)
    v(n) *= std::polar(1.0, -gamma * static_cast<double>(n) * static_cast<double>(n));
  return FockState(std::move(v), 1.0);  // unit phases, norm preserved
}

FockState build_probe(const ProbeSpec& spec, double leak_tol) {
  spec.validate();
  ProbeSpec gaussian = spec;
  gaussian.gamma = 0.0;
  gaussian.dim = spec.resolved_dim();
  return apply_kerr(displaced_squeezed(gaussian, leak_tol), spec.gamma);
}

}  // namespace kerrqfi
