#pragma once

// Fringe extraction and inversion: fit A·G(x)·[1 + V cos(2πx/Λ + φ)] + B to a
// 1D scan (G a gaussian envelope), then turn periods and phase shifts into
// slit-separation and displacement estimates.

#include <span>
#include <stdexcept>
#include <string>

#include "ghostfringe/geometry.hpp"

namespace ghostfringe {

struct NoFringeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IncompatiblePeriodsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FringeFit {
  double period = 0.0;           // Λ [m]
  double period_stderr = 0.0;    // [m]
  double phase_offset = 0.0;     // φ at x = 0, wrapped to (-pi, pi]
  double phase_stderr = 0.0;
  double visibility = 0.0;       // V in [0, 1]
  double envelope_center = 0.0;  // [m]
  double center_stderr = 0.0;
  double envelope_width = 0.0;   // gaussian sigma [m]
  double amplitude = 0.0;        // A, in input units
  double baseline = 0.0;         // B, in input units
  double residual_rms = 0.0;     // in input units
  double spectral_snr = 0.0;     // periodogram peak SNR used by the gate
  int iterations = 0;
};

// What was scanned, fixing which geometric law maps a period to a separation.
enum class FringeAxis {
  mask_C_center,          // d_C = lambda z / period
  mask_T_center,          // d_T = lambda z / period
  detector_C,             // d_C = lambda f / period
  detector_T,             // d_T = lambda f / period
  detector_diagonal,      // |d_C - d_T| = lambda f / period
  detector_antidiagonal,  // d_C + d_T = lambda f / period
};

struct SensingEstimate {
  double d_estimate = 0.0;  // separation (or sum/difference) implied by the period [m]
  double d_variance = 0.0;
  double shift_estimate = 0.0;  // transverse fringe displacement [m]
  double shift_variance = 0.0;
  double d_shift_covariance = 0.0;  // period and phase estimates are treated as independent
};

// Least-squares fringe fit. positions must be strictly increasing, >= 8 points
// covering >= 1.5 periods. The period estimate is invariant under affine
// rescaling of values. Throws NoFringeError when the discrete spectrum shows
// no significant interior peak, NonConvergenceError after 200 iterations.
FringeFit fit_fringe(std::span<const double> positions, std::span<const double> values);

// Fringe displacement of b relative to a, positive along the scan coordinate:
// wrapped phase difference times Λ/2π, unwrapped to the branch closest to the
// envelope-center displacement. Antisymmetric. Throws IncompatiblePeriodsError
// unless the two periods agree within mutual 3 sigma.
double fringe_shift(const FringeFit& a, const FringeFit& b);

// Period -> separation via the law selected by the axis (see FringeAxis).
SensingEstimate invert_period(double period, double period_stderr, const OpticalSetup& setup,
                              FringeAxis axis);

// Full remote-sensing readout from a reference scan and a displaced scan:
// separation from the reference period, displacement from the fringe shift.
SensingEstimate sense_pair(const FringeFit& reference, const FringeFit& displaced,
                           const OpticalSetup& setup, FringeAxis axis);

}  // namespace ghostfringe
