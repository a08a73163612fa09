#pragma once

// Geometry and parameter types for the two-arm double-slit correlation setup.
// All lengths are in meters, angles in radians, stored as doubles.

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace ghostfringe {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

enum class SourceShape { uniform, gaussian };

// Spatially incoherent quasi-monochromatic source, characterized by the
// transverse coherence length it produces at the mask plane.
//
// Width conventions (see README):
//   uniform  - hard-edge profile of full width D = lambda*z/coherence_length,
//              so |g1| = |sinc(pi*dx/coherence_length)| has its first zero at
//              dx = coherence_length.
//   gaussian - intensity profile exp(-x^2/(2 sigma^2)) with
//              sigma = lambda*z/(sqrt(2)*pi*coherence_length), so |g1| drops
//              to 1/e at dx = coherence_length.
struct SourceProfile {
  SourceShape shape = SourceShape::uniform;
  double coherence_length = 0.55e-3;
};

enum class Arm { C, T };

inline const char* arm_name(Arm a) { return a == Arm::C ? "C" : "T"; }

// Symmetric two-arm layout: source -> (distance z) -> mask -> lens (focal
// length f, detector in its back focal plane), identical in both arms.
struct OpticalSetup {
  double wavelength = 980e-9;
  double z = 70e-3;
  double focal_length = 200e-3;
  SourceProfile source;

  double wavenumber() const { return 2.0 * std::numbers::pi / wavelength; }
  double omega() const { return kSpeedOfLight * wavenumber(); }
  double lambda_z() const { return wavelength * z; }

  // Full width of the uniform profile; for gaussian, the sampled span (8 sigma).
  double source_full_width() const;
  // RMS width of the gaussian intensity profile (meaningless for uniform).
  double source_rms_width() const;

  void validate() const;  // throws std::invalid_argument naming the field
};

struct DoubleSlitMask {
  Arm label = Arm::T;
  double center = 0.0;      // midpoint between the two slit centers
  double separation = 0.57e-3;  // center-to-center distance d
  double slit_width = 55e-6;    // a; 0 means ideal point slits

  void validate() const;
};

// Slit center positions, low then high: center -/+ separation/2.
std::array<double, 2> slit_positions(const DoubleSlitMask& mask);

struct DetectorSpec {
  double position = 0.0;
  double aperture_width = 50e-6;  // top-hat slit in front of the detector; 0 = point

  void validate() const;
};

enum class ScanAxis { mask_T_center, mask_C_center, detector_C, detector_T, detector_2d };

std::string scan_axis_name(ScanAxis axis);

struct ScanGrid {
  ScanAxis axis = ScanAxis::mask_T_center;
  double start = -0.45e-3;
  double stop = 0.65e-3;
  int n_points = 161;

  double step() const { return (stop - start) / (n_points - 1); }
  double point(int i) const { return start + step() * i; }

  void validate() const;
};

// Advisory classification of the coherence regime; thresholds are the
// conventional factors used for the soft inequalities "d >~ l_coh" and
// "|offset| <~ l_coh".
inline constexpr double kSuppressionFactor = 0.9;  // d >= 0.9 l_coh suppresses first-order fringes
inline constexpr double kCorrelationFactor = 0.5;  // |x_aC - x_aT| <= 0.5 l_coh keeps pair coherent

struct RegimeReport {
  bool first_order_suppressed_C = false;  // d_C vs l_coh
  bool first_order_suppressed_T = false;  // d_T vs l_coh
  bool pair_correlated_low = false;   // slit 1 of C vs slit 1 of T
  bool pair_correlated_high = false;  // slit 2 of C vs slit 2 of T
  // measured ratios, for reporting
  double dC_over_lcoh = 0.0;
  double dT_over_lcoh = 0.0;
  double offset_low = 0.0;   // |x_1C - x_1T|
  double offset_high = 0.0;  // |x_2C - x_2T|

  bool second_order_regime() const {
    return first_order_suppressed_C && first_order_suppressed_T &&
           pair_correlated_low && pair_correlated_high;
  }
};

RegimeReport validate_coherence_regime(const OpticalSetup& setup,
                                       const DoubleSlitMask& mask_C,
                                       const DoubleSlitMask& mask_T,
                                       double suppression_factor = kSuppressionFactor,
                                       double correlation_factor = kCorrelationFactor);

}  // namespace ghostfringe
