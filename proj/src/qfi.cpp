#include "kerrqfi/qfi.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace kerrqfi {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

Mat generator_matrix(Task task, int dim) {
  Mat g = Mat::Zero(dim, dim);
  if (task == Task::displacement) {
    for (int n = 1; n < dim; ++n) {
      const double root = std::sqrt(static_cast<double>(n));
      g(n - 1, n) = root;
      g(n, n - 1) = root;
    }
  } else {
    for (int n = 2; n < dim; ++n) {
      const double root = 0.5 * std::sqrt(static_cast<double>(n) * (n - 1.0));
      g(n - 2, n) = root;
      g(n, n - 2) = root;
    }
  }
  return g;
}

// 4 * Var(G) on a raw amplitude vector; no validity checks.
double qfi_raw(const Vec& amps, const Mat& g) {
  const Vec w = g * amps;
  const double m1 = amps.dot(w).real();
  const double m2 = w.squaredNorm();
  return 4.0 * std::max(0.0, m2 - m1 * m1);
}

// Maximize f on [lo, hi] by golden-section search; returns {x, f(x)}.
std::pair<double, double> golden_max(const std::function<double(double)>& f, double lo,
                                     double hi, double tol) {
  constexpr double inv_gr = 0.6180339887498949;  // 1/golden ratio
  double a = lo, b = hi;
  double c = b - inv_gr * (b - a);
  double d = a + inv_gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_gr * (b - a);
      fd = f(d);
    }
  }
  const double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

// Phase family of probes at fixed (alpha_mag, r, gamma, dim):
// U_gamma D(|a| e^{i phi}) S(r)|0> = K e^{i phi n} D(|a|) e^{-i phi n} S(r)|0>,
// so the phase enters only through cheap diagonal twiddles. For r = 0 the
// coherent expansion is used directly and no matrix exponential is needed.
class PhaseFamily {
 public:
  PhaseFamily(const ProbeSpec& base, int dim, double leak_tol)
      : dim_(dim), gamma_(base.gamma), leak_tol_(leak_tol), coherent_only_(base.r == 0.0) {
    if (coherent_only_) {
      radial_ = coherent(base.alpha_mag, 0.0, dim, leak_tol).amplitudes();
    } else {
      sq_ = squeezed_vacuum(base.r, dim, leak_tol).amplitudes();
      if (base.alpha_mag > 0.0) disp_ = displacement_matrix(base.alpha_mag, dim);
      alpha_zero_ = base.alpha_mag == 0.0;
    }
  }

  FockState at(double phi) const {
    Vec v;
    if (coherent_only_) {
      v = radial_;
      for (int n = 1; n < dim_; ++n) v(n) *= std::polar(1.0, n * phi);
    } else if (alpha_zero_) {
      v = sq_;
    } else {
      Vec rotated = sq_;
      for (int n = 1; n < dim_; ++n) rotated(n) *= std::polar(1.0, -n * phi);
      v = disp_ * rotated;
      for (int n = 1; n < dim_; ++n) v(n) *= std::polar(1.0, n * phi);
    }
    if (gamma_ != 0.0)
      for (int n = 1; n < dim_; ++n)
        v(n) *= std::polar(1.0, -gamma_ * static_cast<double>(n) * static_cast<double>(n));
    return FockState(std::move(v), leak_tol_);
  }

 private:
  int dim_;
  double gamma_;
  double leak_tol_;
  bool coherent_only_;
  bool alpha_zero_ = false;
  Vec radial_;  // coherent radial amplitudes (r == 0 path)
  Vec sq_;      // squeezed vacuum amplitudes
  Mat disp_;    // D(|alpha|)
};

struct PhaseScan {
  double phi, value, grid_max;
};

// Coarse grid over [0, 2pi) plus golden-section refinement around the best
// grid point. Ties resolve to the lowest phi; the result is >= every grid value.
PhaseScan scan_phase(const std::function<double(double)>& f, const QfiOptions& opts) {
  const int m = std::max(64, opts.phi_grid);
  const double step = two_pi / m;
  double best_phi = 0.0, best = -1.0;
  for (int k = 0; k < m; ++k) {
    const double v = f(k * step);
    if (v > best) {
      best = v;
      best_phi = k * step;
    }
  }
  const double grid_max = best;
  auto [phi_ref, val_ref] = golden_max(f, best_phi - step, best_phi + step, opts.refine_tol);
  if (val_ref > best) {
    best = val_ref;
    best_phi = phi_ref;
  }
  return {wrap_angle(best_phi), best, grid_max};
}

ProbeSpec spec_from_split(double n, double beta, double gamma) {
  ProbeSpec spec;
  spec.alpha_mag = std::sqrt(std::max(0.0, n * (1.0 - beta)));
  spec.r = std::asinh(std::sqrt(std::max(0.0, n * beta)));
  spec.gamma = gamma;
  return spec;
}

}  // namespace

const char* to_string(Task task) {
  return task == Task::displacement ? "displacement" : "squeezing";
}

Task parse_task(const std::string& name) {
  if (name == "displacement") return Task::displacement;
  if (name == "squeezing") return Task::squeezing;
  throw std::invalid_argument("unknown task '" + name + "' (displacement|squeezing)");
}

FockOperator task_generator(Task task, int dim) {
  return FockOperator::dense(generator_matrix(task, dim), true);
}

double qfi_pure(const FockState& probe, Task task, const QfiOptions& opts) {
  const double leak = leakage(probe);
  if (leak > opts.leak_tol) {
    std::ostringstream os;
    os << "qfi_pure: probe leakage " << leak << " exceeds " << opts.leak_tol;
    throw truncation_error(os.str());
  }
  const int dim = probe.dim();
  const Mat g = generator_matrix(task, dim);
  const Vec w = g * probe.amplitudes();

  // The squeezing generator shifts support by 2, so mass of G|psi> piled up
  // at the basis edge signals an under-dimensioned probe.
  const double wn = w.squaredNorm();
  if (wn > 0) {
    const int k = std::min(4, dim);
    const double edge = w.tail(k).squaredNorm() / wn;
    if (edge > opts.leak_tol) {
      std::ostringstream os;
      os << "qfi_pure: generator edge mass " << edge << " exceeds " << opts.leak_tol
         << " at dim " << dim;
      throw truncation_error(os.str());
    }
  }

  const double m1 = probe.amplitudes().dot(w).real();
  const double value = 4.0 * std::max(0.0, wn - m1 * m1);

  if (opts.verify_truncation) {
    const int big = static_cast<int>(std::ceil(1.25 * dim));
    const double check = qfi_raw(probe.resized(big).amplitudes(), generator_matrix(task, big));
    if (std::abs(check - value) > 1e-8 * std::max(1.0, std::abs(value))) {
      std::ostringstream os;
      os << "qfi_pure: value changed from " << value << " to " << check
         << " when enlarging dim by 25%";
      throw truncation_error(os.str());
    }
  }
  return value;
}

double gaussian_qfi_displacement(double n, double beta) {
  if (n < 0) throw std::domain_error("gaussian_qfi_displacement: n must be >= 0");
  if (beta < 0 || beta > 1)
    throw std::domain_error("gaussian_qfi_displacement: beta must be in [0, 1]");
  const double nsq = n * beta;
  return 4.0 + 8.0 * nsq + 8.0 * std::sqrt(nsq * (1.0 + nsq));
}

double gaussian_qfi_squeezing_max(double n) {
  if (n < 0) throw std::domain_error("gaussian_qfi_squeezing_max: n must be >= 0");
  return 8.0 * n * n + 8.0 * n + 2.0;
}

double gaussian_qfi_squeezing(double n_alpha, double n_sq, double phi) {
  if (n_alpha < 0 || n_sq < 0)
    throw std::domain_error("gaussian_qfi_squeezing: photon numbers must be >= 0");
  const double ch = 1.0 + 2.0 * n_sq;                        // cosh 2r
  const double sh = 2.0 * std::sqrt(n_sq * (1.0 + n_sq));    // sinh 2r
  return 2.0 * ch * ch + 4.0 * n_alpha * (ch + sh * std::cos(2.0 * phi));
}

double gaussian_qfi_squeezing_opt(double n_alpha, double n_sq) {
  return gaussian_qfi_squeezing(n_alpha, n_sq, 0.0);
}

double kerr_coherent_qfi_displacement(double n, double phi, double gamma) {
  if (n < 0) throw std::domain_error("kerr_coherent_qfi_displacement: n must be >= 0");
  const double s1 = std::sin(gamma), s2 = std::sin(2.0 * gamma), s4 = std::sin(4.0 * gamma);
  const double e1 = std::exp(-4.0 * n * s1 * s1);
  const double e2 = std::exp(-2.0 * n * s2 * s2);
  return 4.0 + 8.0 * n *
                   (1.0 - e1 - e1 * std::cos(2.0 * (gamma - phi + n * s2)) +
                    e2 * std::cos(4.0 * gamma - 2.0 * phi + n * s4));
}

double kerr_coherent_qfi_squeezing(double n, double phi, double gamma) {
  if (n < 0) throw std::domain_error("kerr_coherent_qfi_squeezing: n must be >= 0");
  const double s4 = std::sin(4.0 * gamma), s8 = std::sin(8.0 * gamma);
  const double e1 = std::exp(-2.0 * n * (1.0 - std::cos(4.0 * gamma)));
  const double e2 = std::exp(-n * (1.0 - std::cos(8.0 * gamma)));
  return 2.0 + 2.0 * n *
                   (2.0 + n -
                    n * e1 * (1.0 + std::cos(2.0 * (4.0 * gamma - 2.0 * phi + n * s4))) +
                    n * e2 * std::cos(16.0 * gamma - 4.0 * phi + n * s8));
}

QfiResult optimize_phase(const ProbeSpec& spec, Task task, const QfiOptions& opts) {
  spec.validate();
  const int dim = spec.resolved_dim(opts.dim_cap);
  const PhaseFamily family(spec, dim, opts.leak_tol);
  QfiOptions point_opts = opts;
  point_opts.verify_truncation = false;
  auto f = [&](double phi) { return qfi_pure(family.at(phi), task, point_opts); };

  const PhaseScan scan = scan_phase(f, opts);

  QfiResult result;
  result.value = scan.value;
  result.optimal_phi = scan.phi;
  result.grid_max = scan.grid_max;
  result.probe = spec;
  result.probe.phi = scan.phi;
  result.probe.dim = dim;
  result.dim_used = dim;
  result.truncation_leakage = leakage(family.at(scan.phi));

  if (opts.verify_truncation) {
    ProbeSpec big = result.probe;
    big.dim = static_cast<int>(std::ceil(1.25 * dim));
    const double check = qfi_pure(build_probe(big, opts.leak_tol), task, point_opts);
    if (std::abs(check - result.value) > 1e-8 * std::max(1.0, std::abs(result.value))) {
      std::ostringstream os;
      os << "optimize_phase: value changed from " << result.value << " to " << check
         << " when rebuilding at 1.25x dim";
      throw truncation_error(os.str());
    }
  }
  return result;
}

QfiResult optimize_phase_and_fraction(double n, double gamma, Task task,
                                      const QfiOptions& opts) {
  if (n < 0) throw std::domain_error("optimize_phase_and_fraction: n must be >= 0");
  const int m = std::max(41, opts.beta_grid);

  auto eval_beta = [&](double beta) {
    return optimize_phase(spec_from_split(n, beta, gamma), task, opts);
  };

  QfiResult best;
  best.value = -1.0;
  double best_beta = 0.0, grid_max = -1.0;
  for (int j = 0; j < m; ++j) {
    const double beta = static_cast<double>(j) / (m - 1);
    QfiResult r = eval_beta(beta);
    if (r.value > best.value) {
      best = r;
      best_beta = beta;
    }
  }
  grid_max = best.value;

  const double step = 1.0 / (m - 1);
  const double lo = std::max(0.0, best_beta - step);
  const double hi = std::min(1.0, best_beta + step);
  auto [beta_ref, val_ref] =
      golden_max([&](double b) { return eval_beta(b).value; }, lo, hi, opts.refine_tol);
  if (val_ref > best.value) {
    best = eval_beta(beta_ref);
    best_beta = beta_ref;
  }

  best.optimal_beta = best_beta;
  best.grid_max = grid_max;
  return best;
}

double qfi_finite_difference_check(const ProbeSpec& spec, Task task, double dlambda,
                                   double lambda0) {
  if (!(dlambda >= 1e-6 && dlambda <= 1e-2))
    throw std::domain_error("qfi_finite_difference_check: dlambda must be in [1e-6, 1e-2]");
  spec.validate();

  // Room for the shifted states: displacement moves alpha by O(lambda),
  // squeezing rescales quadratures by e^{2 lambda}.
  const double shift = std::abs(lambda0) + dlambda;
  double n_alpha_eff = spec.n_alpha(), n_sq_eff = spec.n_sq();
  if (task == Task::displacement) {
    const double a = std::sqrt(n_alpha_eff) + 2.0 * shift + 1.0;
    n_alpha_eff = a * a;
  } else {
    const double scale = std::exp(4.0 * shift);
    n_alpha_eff = (n_alpha_eff + 1.0) * scale;
    n_sq_eff = (n_sq_eff + 1.0) * scale;
  }
  const int dim = std::max(spec.resolved_dim(), auto_dim(n_alpha_eff, n_sq_eff));

  ProbeSpec wide = spec;
  wide.dim = dim;
  const Vec psi = build_probe(wide).amplitudes();

  Eigen::SelfAdjointEigenSolver<Mat> es(generator_matrix(task, dim));
  if (es.info() != Eigen::Success)
    throw inconsistency_error("qfi_finite_difference_check: eigendecomposition failed");
  auto evolve = [&](double lambda) -> Vec {
    Vec phases(dim);
    for (int k = 0; k < dim; ++k) phases(k) = std::polar(1.0, -lambda * es.eigenvalues()(k));
    return es.eigenvectors() * phases.cwiseProduct(es.eigenvectors().adjoint() * psi);
  };

  const Vec a = evolve(lambda0);
  const Vec b = evolve(lambda0 + dlambda);
  for (const Vec* v : {&a, &b}) {
    const double edge = v->tail(std::min(4, dim)).squaredNorm();
    if (edge > default_leak_tol) {
      std::ostringstream os;
      os << "qfi_finite_difference_check: evolved state leaks (edge mass " << edge << ")";
      throw truncation_error(os.str());
    }
  }
  const double fidelity = std::abs(a.dot(b));
  return 8.0 * (1.0 - fidelity) / (dlambda * dlambda);
}

}  // namespace kerrqfi
