#include "ghostfringe/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace ghostfringe {

namespace {

void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(field) + ": must be strictly positive and finite (got " +
                                std::to_string(v) + ")");
  }
}

void require_finite(double v, const char* field) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(field) + ": must be finite");
  }
}

}  // namespace

double OpticalSetup::source_full_width() const {
  if (source.shape == SourceShape::uniform) return lambda_z() / source.coherence_length;
  return 8.0 * source_rms_width();
}

double OpticalSetup::source_rms_width() const {
  return lambda_z() / (std::sqrt(2.0) * std::numbers::pi * source.coherence_length);
}

void OpticalSetup::validate() const {
  require_positive(wavelength, "setup.wavelength");
  require_positive(z, "setup.z");
  require_positive(focal_length, "setup.focal_length");
  require_positive(source.coherence_length, "setup.coherence_length");
}

void DoubleSlitMask::validate() const {
  const std::string name = std::string("mask_") + arm_name(label);
  require_finite(center, (name + ".center").c_str());
  if (!(separation > 0.0) || !std::isfinite(separation)) {
    throw std::invalid_argument(name + ".separation: must be strictly positive (got " +
                                std::to_string(separation) + ")");
  }
  if (slit_width < 0.0 || !std::isfinite(slit_width)) {
    throw std::invalid_argument(name + ".slit_width: must be >= 0");
  }
  if (!(separation > slit_width)) {
    throw std::invalid_argument(name + ": separation must exceed slit_width (slits must not overlap)");
  }
}

std::array<double, 2> slit_positions(const DoubleSlitMask& mask) {
  return {mask.center - mask.separation / 2.0, mask.center + mask.separation / 2.0};
}

void DetectorSpec::validate() const {
  require_finite(position, "detector.position");
  if (aperture_width < 0.0 || !std::isfinite(aperture_width)) {
    throw std::invalid_argument("detector.aperture_width: must be >= 0");
  }
}

std::string scan_axis_name(ScanAxis axis) {
  switch (axis) {
    case ScanAxis::mask_T_center: return "mask_T_center";
    case ScanAxis::mask_C_center: return "mask_C_center";
    case ScanAxis::detector_C: return "detector_C";
    case ScanAxis::detector_T: return "detector_T";
    case ScanAxis::detector_2d: return "detector_2d";
  }
  return "?";
}

void ScanGrid::validate() const {
  require_finite(start, "scan.start");
  require_finite(stop, "scan.stop");
  if (!(stop > start)) throw std::invalid_argument("scan: stop must exceed start");
  if (n_points < 2) throw std::invalid_argument("scan.points: need at least 2 points");
}

RegimeReport validate_coherence_regime(const OpticalSetup& setup, const DoubleSlitMask& mask_C,
                                       const DoubleSlitMask& mask_T, double suppression_factor,
                                       double correlation_factor) {
  setup.validate();
  mask_C.validate();
  mask_T.validate();

  const double lcoh = setup.source.coherence_length;
  RegimeReport r;
  r.dC_over_lcoh = mask_C.separation / lcoh;
  r.dT_over_lcoh = mask_T.separation / lcoh;
  r.first_order_suppressed_C = mask_C.separation >= suppression_factor * lcoh;
  r.first_order_suppressed_T = mask_T.separation >= suppression_factor * lcoh;

  const auto pc = slit_positions(mask_C);
  const auto pt = slit_positions(mask_T);
  r.offset_low = std::abs(pc[0] - pt[0]);
  r.offset_high = std::abs(pc[1] - pt[1]);
  r.pair_correlated_low = r.offset_low <= correlation_factor * lcoh;
  r.pair_correlated_high = r.offset_high <= correlation_factor * lcoh;
  return r;
}

}  // namespace ghostfringe
