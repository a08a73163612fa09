#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "ghostfringe/geometry.hpp"

using namespace ghostfringe;

TEST_CASE("slit positions are exactly center -/+ separation/2") {
  DoubleSlitMask m{Arm::T, 0.1e-3, 0.2e-3, 0.0};
  auto p = slit_positions(m);
  CHECK(p[0] == 0.0);
  CHECK(p[1] == 0.1e-3 + 0.1e-3);

  DoubleSlitMask centered{Arm::T, 0.0, 0.57e-3, 0.0};
  auto q = slit_positions(centered);
  CHECK(q[0] == -0.57e-3 / 2.0);
  CHECK(q[1] == 0.57e-3 / 2.0);
  CHECK(q[0] == -q[1]);
}

TEST_CASE("invalid parameters are rejected with the field named") {
  DoubleSlitMask zero_sep{Arm::C, 0.0, 0.0, 0.0};
  CHECK_THROWS_WITH_AS(zero_sep.validate(), doctest::Contains("separation"),
                       std::invalid_argument);

  DoubleSlitMask overlapping{Arm::T, 0.0, 50e-6, 60e-6};
  CHECK_THROWS_AS(overlapping.validate(), std::invalid_argument);

  OpticalSetup bad_z;
  bad_z.z = -1.0;
  CHECK_THROWS_WITH_AS(bad_z.validate(), doctest::Contains("setup.z"), std::invalid_argument);

  OpticalSetup bad_wl;
  bad_wl.wavelength = 0.0;
  CHECK_THROWS_WITH_AS(bad_wl.validate(), doctest::Contains("wavelength"), std::invalid_argument);

  DetectorSpec det;
  det.aperture_width = -1e-6;
  CHECK_THROWS_AS(det.validate(), std::invalid_argument);

  ScanGrid g;
  g.start = 1e-3;
  g.stop = 0.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = ScanGrid{};
  g.n_points = 1;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("scan grid endpoints and step") {
  ScanGrid g{ScanAxis::detector_T, -1e-3, 1e-3, 5};
  CHECK(g.point(0) == doctest::Approx(-1e-3).epsilon(1e-15));
  CHECK(g.point(4) == doctest::Approx(1e-3).epsilon(1e-15));
  CHECK(g.step() == doctest::Approx(0.5e-3).epsilon(1e-15));
}

TEST_CASE("derived source width follows the coherence-length convention") {
  OpticalSetup s;  // defaults: uniform, l_coh = 0.55 mm, lambda z = 6.86e-8 m^2
  // frozen: mpmath, lambda*z/l_coh
  CHECK(s.source_full_width() == doctest::Approx(1.24727272727273e-4).epsilon(1e-12));
  OpticalSetup g = s;
  g.source.shape = SourceShape::gaussian;
  // frozen: mpmath, lambda*z/(sqrt(2)*pi*l_coh)
  CHECK(g.source_rms_width() == doctest::Approx(2.80734996765352e-5).epsilon(1e-12));
}

TEST_CASE("coherence regime report for the reference geometry") {
  OpticalSetup setup;
  DoubleSlitMask mask_C{Arm::C, 0.0, 0.69e-3, 0.0};
  DoubleSlitMask mask_T{Arm::T, 0.0, 0.57e-3, 0.0};

  auto r = validate_coherence_regime(setup, mask_C, mask_T);
  CHECK(r.first_order_suppressed_C);
  CHECK(r.first_order_suppressed_T);
  CHECK(r.pair_correlated_low);   // |x_1C - x_1T| = 60 um
  CHECK(r.pair_correlated_high);  // |x_2C - x_2T| = 60 um
  CHECK(r.second_order_regime());
  CHECK(r.offset_low == doctest::Approx(60e-6).epsilon(1e-12));
  CHECK(r.offset_high == doctest::Approx(60e-6).epsilon(1e-12));
}

TEST_CASE("narrow masks are not first-order suppressed") {
  OpticalSetup setup;
  DoubleSlitMask mask_C{Arm::C, 0.0, 55e-6, 0.0};  // l_coh / 10
  DoubleSlitMask mask_T{Arm::T, 0.0, 55e-6, 0.0};
  auto r = validate_coherence_regime(setup, mask_C, mask_T);
  CHECK_FALSE(r.first_order_suppressed_C);
  CHECK_FALSE(r.first_order_suppressed_T);
  CHECK_FALSE(r.second_order_regime());
}

TEST_CASE("displacing mask T by five coherence lengths breaks pair correlation") {
  OpticalSetup setup;
  DoubleSlitMask mask_C{Arm::C, 0.0, 0.69e-3, 0.0};
  DoubleSlitMask mask_T{Arm::T, 5.0 * 0.55e-3, 0.57e-3, 0.0};
  auto r = validate_coherence_regime(setup, mask_C, mask_T);
  CHECK_FALSE(r.pair_correlated_low);
  CHECK_FALSE(r.pair_correlated_high);
  CHECK(r.first_order_suppressed_C);  // separations unchanged
  CHECK(r.first_order_suppressed_T);
}
