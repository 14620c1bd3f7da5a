#pragma once

#include <optional>
#include <string>

#include "kerrqfi/probes.hpp"

namespace kerrqfi {

/// Which unitary parameter is being estimated. The generators are
/// G_d = a^dag + a (displacement) and G_s = (a^dag^2 + a^2)/2 (squeezing).
enum class Task { displacement, squeezing };

const char* to_string(Task task);
Task parse_task(const std::string& name);

// The Hermitian generator of the task's unitary family at the given dimension.
FockOperator task_generator(Task task, int dim);

struct QfiOptions {
  double leak_tol = default_leak_tol;
  bool verify_truncation = false;  // recompute at 1.25x dim and compare
  int dim_cap = 0;                 // cap on auto-chosen dimensions, 0 = none
  int phi_grid = 96;               // coarse phase grid points (>= 64)
  int beta_grid = 41;              // coarse squeezing-fraction grid (>= 41)
  double refine_tol = 1e-7;        // refinement bracket width
};

struct QfiResult {
  double value = 0.0;
  std::optional<double> optimal_phi;
  std::optional<double> optimal_beta;
  ProbeSpec probe;
  double truncation_leakage = 0.0;
  int dim_used = 0;
  double grid_max = 0.0;  // best coarse-grid value seen by an optimizer
};

// QFI of a pure probe under the task's unitary family: 4 * Var(G).
// Parameter-value independent by construction. Preconditions: probe leakage
// and the edge mass of G|psi> within leak_tol.
double qfi_pure(const FockState& probe, Task task, const QfiOptions& opts = {});

// Closed form for displacement estimation with a displaced squeezed probe of
// N photons and squeezing fraction beta: 4 + 8 N beta + 8 sqrt(N beta (1 + N beta)).
double gaussian_qfi_displacement(double n, double beta);

// Fixed-energy maximum for squeezing estimation, 8N^2 + 8N + 2 (squeezed vacuum).
double gaussian_qfi_squeezing_max(double n);

// Squeezing-estimation QFI of a displaced squeezed probe (n_alpha amplitude
// photons, n_sq squeezing photons, coherent phase phi):
// 2 cosh^2(2r) + 4 n_alpha (cosh 2r + sinh 2r cos 2phi). Phase-optimal at phi = 0.
double gaussian_qfi_squeezing(double n_alpha, double n_sq, double phi);
double gaussian_qfi_squeezing_opt(double n_alpha, double n_sq);

// Closed form for Kerr-evolved coherent probes (N photons, phase phi,
// Kerr coupling gamma), displacement estimation. Equals 4 at gamma = 0.
double kerr_coherent_qfi_displacement(double n, double phi, double gamma);

// Same probe family, squeezing estimation. Equals 2 + 4N at gamma = 0.
double kerr_coherent_qfi_squeezing(double n, double phi, double gamma);

// Maximize the QFI over the coherent phase phi in [0, 2pi) at fixed
// (alpha_mag, r, gamma): coarse grid then golden-section refinement; the
// result is never below any coarse-grid value. spec.phi is ignored.
QfiResult optimize_phase(const ProbeSpec& spec, Task task, const QfiOptions& opts = {});

// Maximize over (beta, phi) at fixed total photon number n and coupling gamma.
QfiResult optimize_phase_and_fraction(double n, double gamma, Task task,
                                      const QfiOptions& opts = {});

// Independent QFI estimate from fidelity curvature,
// 8 (1 - |<psi_l | psi_{l+dl}>|) / dl^2 with U_l = exp(-i l G) built by
// exponentiation. lambda0 shifts the base point; the result must not depend on it.
double qfi_finite_difference_check(const ProbeSpec& spec, Task task, double dlambda,
                                   double lambda0 = 0.0);

}  // namespace kerrqfi
