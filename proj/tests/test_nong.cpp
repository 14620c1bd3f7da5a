#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kerrqfi/nong.hpp"
#include "kerrqfi/probes.hpp"
#include "oracles.hpp"

using namespace kerrqfi;

namespace {

ProbeSpec kerr_coherent_spec(double n, double gamma) {
  ProbeSpec spec;
  spec.alpha_mag = std::sqrt(n);
  spec.gamma = gamma;
  return spec;
}

// Moments of U_gamma |alpha> in closed form: the number distribution is
// Poissonian and the phases telescope into coherent overlaps.
Moments kerr_coherent_moments(double n, double phi, double gamma) {
  const cxd alpha = std::polar(std::sqrt(n), phi);
  Moments m;
  m.mean_a = alpha * std::polar(1.0, -gamma) * std::exp(n * (std::polar(1.0, -2 * gamma) - 1.0));
  m.mean_a2 = alpha * alpha * std::polar(1.0, -4 * gamma) *
              std::exp(n * (std::polar(1.0, -4 * gamma) - 1.0));
  m.mean_n = n;
  return m;
}

}  // namespace

TEST_CASE("moments of reference states") {
  const Moments vac = moments(FockState::vacuum(16));
  CHECK(std::abs(vac.mean_a) == 0.0);
  CHECK(vac.mean_n == 0.0);
  CHECK(std::abs(vac.mean_a2) == 0.0);

  const cxd alpha = std::polar(1.3, 0.4);
  const Moments coh = moments(coherent(1.3, 0.4, 72));
  CHECK(std::abs(coh.mean_a - alpha) < 1e-8);
  CHECK(coh.mean_n == doctest::Approx(std::norm(alpha)).epsilon(1e-8));
  CHECK(std::abs(coh.mean_a2 - alpha * alpha) < 1e-8);

  // squeezed vacuum: <a^2> = +cosh r sinh r under this library's convention
  const double r = 0.8;
  const Moments sq = moments(squeezed_vacuum(r, auto_dim(0, std::sinh(r) * std::sinh(r))));
  CHECK(std::abs(sq.mean_a) < 1e-12);
  CHECK(sq.mean_n == doctest::Approx(std::sinh(r) * std::sinh(r)).epsilon(1e-10));
  CHECK(sq.mean_a2.real() == doctest::Approx(std::cosh(r) * std::sinh(r)).epsilon(1e-10));
  CHECK(std::abs(sq.mean_a2.imag()) < 1e-12);
}

TEST_CASE("kerr-coherent moments match the telescoped closed form") {
  const double n = 2.0, phi = 0.6, gamma = 0.05;
  ProbeSpec spec = kerr_coherent_spec(n, gamma);
  spec.phi = phi;
  const Moments numeric = moments(build_probe(spec));
  const Moments analytic = kerr_coherent_moments(n, phi, gamma);
  CHECK(std::abs(numeric.mean_a - analytic.mean_a) < 1e-10);
  CHECK(std::abs(numeric.mean_a2 - analytic.mean_a2) < 1e-10);
  CHECK(numeric.mean_n == doctest::Approx(n).epsilon(1e-10));
}

TEST_CASE("covariance assembly") {
  const CovarianceMatrix vac = covariance(Moments{cxd(0, 0), 0.0, cxd(0, 0)});
  CHECK(vac.xx == doctest::Approx(0.5));
  CHECK(vac.pp == doctest::Approx(0.5));
  CHECK(vac.xp == doctest::Approx(0.0));

  const CovarianceMatrix coh = covariance(moments(coherent(1.7, 2.1, 96)));
  CHECK(coh.xx == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(coh.pp == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(std::abs(coh.xp) < 1e-8);

  // isotropic covariance for number-state moments
  const CovarianceMatrix fock = covariance(Moments{cxd(0, 0), 4.0, cxd(0, 0)});
  CHECK(fock.xx == doctest::Approx(4.5));
  CHECK(fock.pp == doctest::Approx(4.5));

  CHECK_THROWS_AS(covariance(Moments{cxd(0, 0), 0.0, cxd(0.4, 0)}), inconsistency_error);
  CHECK_THROWS_AS(moments(coherent(3.0, 0.0, 24, 1.0)), truncation_error);
}

TEST_CASE("entropic non-Gaussianity vanishes on Gaussian probes") {
  CHECK(nong_entropic(coherent(1.9, 0.7, 96)) <= 1e-9);

  ProbeSpec ds;
  ds.alpha_mag = 1.1;
  ds.r = 0.7;
  ds.phi = 0.9;
  CHECK(nong_entropic(build_probe(ds)) <= 1e-9);

  // 20 seeded random Gaussian probes
  for (int i = 0; i < 20; ++i) {
    ProbeSpec spec;
    spec.alpha_mag = oracles::uniform(0, 2);
    spec.phi = oracles::uniform(0, 6.28);
    spec.r = oracles::uniform(0, 1.2);
    CHECK(nong_entropic(build_probe(spec)) <= 1e-9);
  }
}

TEST_CASE("kerr interaction generates non-Gaussianity") {
  const FockState probe = build_probe(kerr_coherent_spec(2.0, 0.05));
  const double delta = nong_entropic(probe);
  CHECK(delta > 0.0);

  // dual-formula oracle: entropy from the effective thermal occupation
  const CovarianceMatrix sigma = covariance(moments(probe));
  const double nu = sigma.symplectic_eigenvalue();
  const double nbar = nu - 0.5;
  const double via_thermal = (nbar + 1.0) * std::log(nbar + 1.0) - nbar * std::log(nbar);
  CHECK(std::abs(delta - via_thermal) < 1e-10);

  // independent value from the analytic moments
  const CovarianceMatrix ana = covariance(kerr_coherent_moments(2.0, 0.0, 0.05));
  CHECK(delta == doctest::Approx(gaussian_entropy(ana.symplectic_eigenvalue())).epsilon(1e-9));
}

TEST_CASE("non-Gaussianity is invariant under phase-space rotation") {
  const FockState probe = build_probe(kerr_coherent_spec(1.5, 0.07));
  const double base = nong_entropic(probe);
  for (double theta : {0.4, 1.9, 4.4}) {
    Vec rotated = probe.amplitudes();
    for (int n = 0; n < rotated.size(); ++n) rotated(n) *= std::polar(1.0, n * theta);
    CHECK(nong_entropic(FockState(rotated)) == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("normalized measure") {
  CHECK(nong_normalized(coherent(1.4, 0.0, 80), 1.96) <= 1e-9);

  // the number state saturates the fixed-energy maximum
  const FockState fock3 = FockState::basis(64, 3);
  CHECK(nong_normalized(fock3, 3.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(max_nong(3.0) == doctest::Approx(4.0 * std::log(4.0) - 3.0 * std::log(3.0)).epsilon(1e-12));

  const double ratio = nong_normalized(build_probe(kerr_coherent_spec(2.0, 0.05)), 2.0);
  CHECK(ratio > 0.0);
  CHECK(ratio < 1.0);

  CHECK_THROWS_AS(nong_normalized(fock3, 0.0), std::domain_error);
  CHECK_THROWS_AS(max_nong(0.0), std::domain_error);
  CHECK_THROWS_AS(gaussian_entropy(0.3), std::domain_error);
}
