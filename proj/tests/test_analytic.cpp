#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ghostfringe/analytic.hpp"
#include "ghostfringe/quadrature.hpp"
#include "ghostfringe/rng.hpp"

using namespace ghostfringe;
using std::numbers::pi;

namespace {

OpticalSetup default_setup() { return OpticalSetup{}; }

DoubleSlitMask mask_C(double center = 0.0, double width = 0.0) {
  return DoubleSlitMask{Arm::C, center, 0.69e-3, width};
}
DoubleSlitMask mask_T(double center = 0.0, double width = 0.0) {
  return DoubleSlitMask{Arm::T, center, 0.57e-3, width};
}

// Independent route: Simpson quadrature of the normalized Fourier transform
// of the source intensity profile.
double spectrum_by_quadrature(const OpticalSetup& setup, double nu) {
  const int n = 4000;  // panels (even)
  double lo, hi;
  auto profile = [&](double x) -> double {
    if (setup.source.shape == SourceShape::uniform) return 1.0;
    const double s = setup.source_rms_width();
    return std::exp(-x * x / (2.0 * s * s));
  };
  if (setup.source.shape == SourceShape::uniform) {
    lo = -setup.source_full_width() / 2.0;
    hi = -lo;
  } else {
    lo = -8.0 * setup.source_rms_width();
    hi = -lo;
  }
  const double h = (hi - lo) / n;
  double num = 0.0, den = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + h * i;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double p = profile(x);
    num += w * p * std::cos(2.0 * pi * nu * x);  // profile even -> FT real
    den += w * p;
  }
  return num / den;
}

}  // namespace

TEST_CASE("source spectrum: frozen values for the hard-edge profile") {
  auto s = default_setup();
  const double lz = s.lambda_z();
  // frozen: mpmath sinc(pi*delta/l_coh), 30 digits
  CHECK(source_spectrum(s, 20e-6 / lz) == doctest::Approx(0.997826299475165).epsilon(1e-12));
  CHECK(source_spectrum(s, 60e-6 / lz) == doctest::Approx(0.980538570976575).epsilon(1e-12));
  CHECK(source_spectrum(s, 300e-6 / lz) == doctest::Approx(0.577628242596891).epsilon(1e-12));
  CHECK(source_spectrum(s, 570e-6 / lz) == doctest::Approx(-0.0350114491043917).epsilon(1e-12));
  CHECK(source_spectrum(s, 630e-6 / lz) == doctest::Approx(-0.122610747913078).epsilon(1e-12));
  CHECK(source_spectrum(s, 690e-6 / lz) == doctest::Approx(-0.181954461932436).epsilon(1e-12));
}

TEST_CASE("source spectrum matches direct quadrature of the profile transform") {
  auto s = default_setup();
  const double lz = s.lambda_z();
  for (double delta : {0.0, 35e-6, 110e-6, 470e-6, 820e-6}) {
    CHECK(source_spectrum(s, delta / lz) ==
          doctest::Approx(spectrum_by_quadrature(s, delta / lz)).epsilon(1e-9));
  }
  auto g = s;
  g.source.shape = SourceShape::gaussian;
  for (double delta : {0.0, 90e-6, 300e-6, 550e-6}) {
    CHECK(source_spectrum(g, delta / lz) ==
          doctest::Approx(spectrum_by_quadrature(g, delta / lz)).epsilon(5e-8));
  }
}

TEST_CASE("source spectrum: normalization, parity, first zero") {
  auto s = default_setup();
  CHECK(source_spectrum(s, 0.0) == 1.0);
  const double lz = s.lambda_z();
  const double nu0 = 0.55e-3 / lz;  // slit offset of one coherence length
  CHECK(std::abs(source_spectrum(s, nu0)) < 1e-15);
  CHECK(source_spectrum(s, 0.9 * nu0) > 0.0);
  CHECK(source_spectrum(s, 1.1 * nu0) < 0.0);
  for (double delta : {13e-6, 222e-6, 601e-6}) {
    CHECK(source_spectrum(s, delta / lz) == source_spectrum(s, -delta / lz));
  }
  auto g = s;
  g.source.shape = SourceShape::gaussian;
  // frozen: mpmath, exp(-2 (pi sigma nu)^2); at one coherence length exactly 1/e
  CHECK(source_spectrum(g, 300e-6 / lz) == doctest::Approx(0.742657238904439).epsilon(1e-12));
  CHECK(source_spectrum(g, 550e-6 / lz) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("propagation phasor: unit modulus and frozen reference points") {
  auto s = default_setup();
  CHECK(propagation_phase(s, 0.0, 0.0) == std::complex<double>(1.0, 0.0));
  CHECK(propagation_phase(s, 0.0, 3.3e-3) == std::complex<double>(1.0, 0.0));

  // frozen: mpmath, phase = pi x^2/(lambda z) - 2 pi x_d x/(lambda f) at
  // double-rounded inputs, 30-digit evaluation
  {
    auto b = propagation_phase(s, 2.85e-4, 0.0);
    CHECK(b.real() == doctest::Approx(-0.837462975417086).epsilon(1e-12));
    CHECK(b.imag() == doctest::Approx(-0.546494066578551).epsilon(1e-12));
  }
  {
    auto b = propagation_phase(s, -3.45e-4, 1.0e-4);
    CHECK(b.real() == doctest::Approx(0.962796321091682).epsilon(1e-12));
    CHECK(b.imag() == doctest::Approx(0.270228133421232).epsilon(1e-12));
  }

  Xoshiro256pp rng(7, 0);
  for (int i = 0; i < 200; ++i) {
    const double xs = (rng.uniform() - 0.5) * 2e-3;
    const double xd = (rng.uniform() - 0.5) * 4e-3;
    CHECK(std::abs(std::abs(propagation_phase(s, xs, xd)) - 1.0) < 1e-12);
  }
}

TEST_CASE("pair amplitude magnitudes set by the source spectrum") {
  auto s = default_setup();
  auto mc = mask_C(), mt = mask_T();
  // corresponding pair, offset 60 um
  CHECK(std::abs(g1_pair(s, mc, mt, 0, 0, 0.0, 0.0)) ==
        doctest::Approx(0.980538570976575).epsilon(1e-12));
  CHECK(std::abs(g1_pair(s, mc, mt, 1, 1, 0.0, 0.0)) ==
        doctest::Approx(0.980538570976575).epsilon(1e-12));
  // cross pair, offset 630 um
  CHECK(std::abs(g1_pair(s, mc, mt, 0, 1, 0.0, 0.0)) ==
        doctest::Approx(0.122610747913078).epsilon(1e-12));
  CHECK_THROWS_AS(g1_pair(s, mc, mt, 2, 0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("finite slit width multiplies the detector-coordinate aperture factor") {
  auto s = default_setup();
  // frozen: mpmath sinc(pi a x_d/(lambda f)), a = 55 um, x_d = 0.7 mm
  CHECK(slit_aperture_factor(s, 55e-6, 0.7e-3) ==
        doctest::Approx(0.937729135253632).epsilon(1e-12));
  CHECK(slit_aperture_factor(s, 0.0, 0.7e-3) == 1.0);
  auto mc = mask_C(0.0, 55e-6), mt = mask_T(0.0, 55e-6);
  const double ratio = std::abs(g1_pair(s, mc, mt, 0, 0, 0.7e-3, 0.0)) /
                       std::abs(g1_pair(s, mask_C(), mask_T(), 0, 0, 0.7e-3, 0.0));
  CHECK(ratio == doctest::Approx(0.937729135253632).epsilon(1e-12));
}

TEST_CASE("four-path vs two-path at the central fringe, reference geometry") {
  auto s = default_setup();
  auto mc = mask_C(), mt = mask_T();
  const double two = correlation(s, mc, mt, 0.0, 0.0, PathMode::two_path);
  const double four = correlation(s, mc, mt, 0.0, 0.0, PathMode::four_path);
  // frozen: mpmath ((2 S60 + 2 S630)/(2 S60))^2; the cross pairs are NOT
  // negligible for the hard-edge profile at this geometry
  CHECK(four / two == doctest::Approx(0.765547497160524).epsilon(1e-9));
}

TEST_CASE("cross pairs vanish exactly when their offsets hit spectrum zeros") {
  auto s = default_setup();
  DoubleSlitMask mc{Arm::C, 0.0, 0.55e-3, 0.0};  // (d_C + d_T)/2 = l_coh
  DoubleSlitMask mt{Arm::T, 0.0, 0.55e-3, 0.0};
  for (double xc : {0.0, 0.3e-3}) {
    for (double xt : {0.0, -0.2e-3}) {
      const double two = correlation(s, mc, mt, xc, xt, PathMode::two_path);
      const double four = correlation(s, mc, mt, xc, xt, PathMode::four_path);
      CHECK(four == doctest::Approx(two).epsilon(1e-14));
    }
  }
}

TEST_CASE("with flat spectrum the four-path map factorizes into two Young patterns") {
  auto s = default_setup();
  s.source.coherence_length = 1e3;  // spectrum ~ 1 over the whole geometry
  auto mc = mask_C(), mt = mask_T();
  for (double xc : {0.0, 0.11e-3, -0.37e-3}) {
    for (double xt : {0.05e-3, -0.21e-3}) {
      const double map4 = correlation(s, mc, mt, xc, xt, PathMode::four_path);
      const double young_c = first_order_intensity(s, mc, xc, Illumination::laser);
      const double young_t = first_order_intensity(s, mt, xt, Illumination::laser);
      CHECK(map4 == doctest::Approx(young_c * young_t).epsilon(1e-9));
    }
  }
}

TEST_CASE("correlation is nonnegative and symmetric under swapping the arms") {
  auto s = default_setup();
  Xoshiro256pp rng(11, 0);
  for (int i = 0; i < 200; ++i) {
    DoubleSlitMask mc{Arm::C, (rng.uniform() - 0.5) * 1e-3, 0.3e-3 + rng.uniform() * 0.6e-3, 0.0};
    DoubleSlitMask mt{Arm::T, (rng.uniform() - 0.5) * 1e-3, 0.3e-3 + rng.uniform() * 0.6e-3, 0.0};
    const double xc = (rng.uniform() - 0.5) * 3e-3;
    const double xt = (rng.uniform() - 0.5) * 3e-3;
    for (auto mode : {PathMode::two_path, PathMode::four_path}) {
      const double v = correlation(s, mc, mt, xc, xt, mode);
      CHECK(v >= 0.0);
      DoubleSlitMask mc_sw{Arm::C, mt.center, mt.separation, mt.slit_width};
      DoubleSlitMask mt_sw{Arm::T, mc.center, mc.separation, mc.slit_width};
      const double w = correlation(s, mc_sw, mt_sw, xt, xc, mode);
      CHECK(w == doctest::Approx(v).epsilon(1e-12));
    }
  }
}

TEST_CASE("sensing phase: zeros, frozen periods, translation covariance") {
  auto s = default_setup();
  CHECK(sensing_phase(s, 0.0, 0.69e-3, 0.0, 0.57e-3, 0.0, 0.0) == 0.0);

  const double dC = 0.69e-3, dT = 0.57e-3;
  // diagonal x_C = x_T = u: phase slope gives period lambda f/(d_C - d_T)
  const double u = 1e-4;
  const double slope_diag = sensing_phase(s, 0, dC, 0, dT, u, u) / u;
  CHECK(2.0 * pi / std::abs(slope_diag) == doctest::Approx(1.63333333333333e-3).epsilon(1e-12));
  // anti-diagonal x_C = -x_T = u: period lambda f/(d_C + d_T)
  const double slope_anti = sensing_phase(s, 0, dC, 0, dT, u, -u) / u;
  CHECK(2.0 * pi / std::abs(slope_anti) == doctest::Approx(1.55555555555556e-4).epsilon(1e-12));
  // scanning the T mask center: period lambda z/d_T
  const double slope_mask = sensing_phase(s, 0, dC, u, dT, 0, 0) / u;
  CHECK(2.0 * pi / std::abs(slope_mask) == doctest::Approx(1.20350877192982e-4).epsilon(1e-12));

  // translating both masks rigidly in the ratio d_T/d_C leaves the phase unchanged
  Xoshiro256pp rng(3, 0);
  for (int i = 0; i < 100; ++i) {
    const double XbarC = (rng.uniform() - 0.5) * 1e-3;
    const double XbarT = (rng.uniform() - 0.5) * 1e-3;
    const double xc = (rng.uniform() - 0.5) * 2e-3;
    const double xt = (rng.uniform() - 0.5) * 2e-3;
    const double delta = (rng.uniform() - 0.5) * 1e-3;
    const double a = sensing_phase(s, XbarC, dC, XbarT, dT, xc, xt);
    const double b = sensing_phase(s, XbarC + delta * dT / dC, dC, XbarT + delta, dT, xc, xt);
    CHECK(b == doctest::Approx(a).epsilon(1e-9));
  }
}

TEST_CASE("correlation along a detector scan is periodic with lambda f/d") {
  auto s = default_setup();
  auto mc = mask_C(), mt = mask_T();
  const double period_T = s.wavelength * s.focal_length / mt.separation;
  const double period_C = s.wavelength * s.focal_length / mc.separation;
  for (auto mode : {PathMode::two_path, PathMode::four_path}) {
    for (double xt : {-0.4e-3, 0.0, 0.13e-3}) {
      const double a = correlation(s, mc, mt, 0.2e-3, xt, mode);
      const double b = correlation(s, mc, mt, 0.2e-3, xt + period_T, mode);
      CHECK(b == doctest::Approx(a).epsilon(1e-9));
    }
    for (double xc : {-0.3e-3, 0.07e-3}) {
      const double a = correlation(s, mc, mt, xc, 0.1e-3, mode);
      const double b = correlation(s, mc, mt, xc + period_C, 0.1e-3, mode);
      CHECK(b == doctest::Approx(a).epsilon(1e-9));
    }
  }
}

TEST_CASE("mask-scan fringe maxima are spaced by lambda z/d_T") {
  auto s = default_setup();
  auto mc = mask_C();
  // fine scan of the T-mask center, detectors fixed at the optical axis
  const int n = 1101;
  const double lo = -0.45e-3, hi = 0.45e-3;
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1);
    y[i] = correlation(s, mc, mask_T(x), 0.0, 0.0, PathMode::two_path);
  }
  std::vector<double> maxima;
  for (int i = 1; i + 1 < n; ++i) {
    if (y[i] > y[i - 1] && y[i] > y[i + 1] && y[i] > 0.05) {
      maxima.push_back(lo + (hi - lo) * i / (n - 1));
    }
  }
  REQUIRE(maxima.size() >= 4);
  for (std::size_t i = 1; i < maxima.size(); ++i) {
    CHECK(maxima[i] - maxima[i - 1] == doctest::Approx(1.20350877192982e-4).epsilon(0.02));
  }
}

TEST_CASE("first-order intensity: laser Young pattern vs chaotic washout") {
  auto s = default_setup();
  auto mt = mask_T();
  // laser: full-visibility fringes with period lambda f/d
  const double period = s.wavelength * s.focal_length / mt.separation;
  double lo = 1e300, hi = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double v = first_order_intensity(s, mt, i * period / 20000.0, Illumination::laser);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK((hi - lo) / (hi + lo) > 0.999999);
  CHECK(first_order_intensity(s, mt, period, Illumination::laser) ==
        doctest::Approx(first_order_intensity(s, mt, 0.0, Illumination::laser)).epsilon(1e-9));

  // chaotic: residual visibility equals |spectrum(d/lambda z)|
  lo = 1e300, hi = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double v = first_order_intensity(s, mt, i * period / 20000.0, Illumination::chaotic);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  // frozen: mpmath |sinc(pi 0.57/0.55)|
  CHECK((hi - lo) / (hi + lo) == doctest::Approx(0.0350114491043917).epsilon(1e-5));

  // narrow mask (d = l_coh/10): fringes survive
  DoubleSlitMask narrow{Arm::T, 0.0, 55e-6, 0.0};
  const double p2 = s.wavelength * s.focal_length / narrow.separation;
  lo = 1e300, hi = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double v = first_order_intensity(s, narrow, i * p2 / 20000.0, Illumination::chaotic);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double vis = (hi - lo) / (hi + lo);
  CHECK(vis > 0.9);
  CHECK(vis == doctest::Approx(source_spectrum(s, narrow.separation / s.lambda_z())).epsilon(1e-5));
}

TEST_CASE("detector aperture averaging reduces fringe visibility predictably") {
  auto s = default_setup();
  auto mc = mask_C(), mt = mask_T();
  DetectorSpec det_C{0.0, 50e-6}, det_T{0.0, 50e-6};
  // apertured value at the center is an average over a fringe: below the peak
  const double point = correlation(s, mc, mt, 0.0, 0.0, PathMode::two_path);
  const double avg = correlation_apertured(s, mc, mt, det_C, det_T, PathMode::two_path);
  CHECK(avg < point);
  CHECK(avg > 0.8 * point);
  // zero-width apertures reduce to the point evaluation exactly
  DetectorSpec p0{0.33e-3, 0.0};
  CHECK(correlation_apertured(s, mc, mt, p0, p0, PathMode::two_path) ==
        correlation(s, mc, mt, 0.33e-3, 0.33e-3, PathMode::two_path));
}

TEST_CASE("Gauss-Legendre rule matches known 5-point constants and integrates exactly") {
  auto r = gauss_legendre(5);
  CHECK(r.nodes[2] == 0.0);
  CHECK(r.nodes[4] == doctest::Approx(0.906179845938664).epsilon(1e-14));
  CHECK(r.weights[2] == doctest::Approx(128.0 / 225.0).epsilon(1e-14));
  // degree-9 polynomial integrated exactly by the 5-point rule
  auto f = [](double x) { return ((((9 * x + 3) * x - 7) * x + 2) * x + 1) * x * x * x * x * x - x * x + 0.5; };
  double acc = 0.0;
  for (int i = 0; i < 5; ++i) acc += r.weights[i] * f(r.nodes[i]);
  // exact: int_-1^1 f = 2*(9/11? ...) computed analytically: only even powers survive
  // f has terms 9x^9+3x^8-7x^7+2x^6+x^5 -x^2 +1/2 -> integral = 2*(3/9 + 2/7 - 1/3 + 1/2)
  const double exact = 2.0 * (3.0 / 9.0 + 2.0 / 7.0 - 1.0 / 3.0 + 0.5);
  CHECK(acc == doctest::Approx(exact).epsilon(1e-14));
}
