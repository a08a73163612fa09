#pragma once

// Closed-form model of second-order (intensity-fluctuation) interference for
// chaotic light crossing two distant double-slit masks, one per arm of a
// balanced beam-splitter setup, with detectors in the lens focal planes.
//
// The correlated part of <dI_C dI_T> is |g1_total|^2 where g1_total sums
// per-slit-pair amplitudes: each pair contributes the product of the two
// propagation phasors and the source spectrum evaluated at the slit offset.

#include <complex>

#include "ghostfringe/geometry.hpp"

namespace ghostfringe {

enum class PathMode { two_path, four_path };
enum class Illumination { chaotic, laser };

// Normalized Fourier transform of the source intensity profile evaluated at
// spatial frequency nu [1/m]; real, even, spectrum(0) = 1.
double source_spectrum(const OpticalSetup& setup, double nu);

// Unit-modulus free-space + lens phasor for a slit at x_slit observed at
// x_det in the focal plane: exp(i (pi x_slit^2/(lambda z) - 2 pi x_det x_slit/(lambda f))).
std::complex<double> propagation_phase(const OpticalSetup& setup, double x_slit, double x_det);

// Finite slit width: top-hat aperture factor in the detector coordinate,
// normalized to 1 at x_det = 0 (quadratic phase treated constant over a slit).
double slit_aperture_factor(const OpticalSetup& setup, double slit_width, double x_det);

// Amplitude contributed by the pair (slit alpha of mask C, slit beta of mask T);
// alpha, beta in {0, 1} select low/high slit. Includes both arms' aperture factors.
std::complex<double> g1_pair(const OpticalSetup& setup, const DoubleSlitMask& mask_C,
                             const DoubleSlitMask& mask_T, int alpha, int beta, double x_C,
                             double x_T);

// Sum of pair amplitudes: two_path keeps the corresponding pairs (1,1)+(2,2);
// four_path adds the cross pairs (1,2)+(2,1).
std::complex<double> g1_total(const OpticalSetup& setup, const DoubleSlitMask& mask_C,
                              const DoubleSlitMask& mask_T, double x_C, double x_T, PathMode mode);

// |g1_total|^2 at point detectors (raw, unnormalized).
double correlation(const OpticalSetup& setup, const DoubleSlitMask& mask_C,
                   const DoubleSlitMask& mask_T, double x_C, double x_T, PathMode mode);

// Same, averaged over each detector's top-hat aperture (9-pt Gauss-Legendre per arm).
double correlation_apertured(const OpticalSetup& setup, const DoubleSlitMask& mask_C,
                             const DoubleSlitMask& mask_T, const DetectorSpec& det_C,
                             const DetectorSpec& det_T, PathMode mode);

// Relative phase between the two corresponding-pair amplitudes:
// (k/z)(XbarT dT - XbarC dC) - (k/f)(x_T dT - x_C dC).  Governs fringe
// position; linear in every argument.
double sensing_phase(const OpticalSetup& setup, double Xbar_C, double d_C, double Xbar_T,
                     double d_T, double x_C, double x_T);

// Mean intensity behind one mask at a point detector (arbitrary scale).
// laser: fully coherent illumination, |B_1 + B_2|^2 Young pattern.
// chaotic: 2 + 2 Re[S(d/lambda z) B_1^* B_2], fringes damped by the spectrum.
double first_order_intensity(const OpticalSetup& setup, const DoubleSlitMask& mask, double x_det,
                             Illumination illumination);

double first_order_intensity_apertured(const OpticalSetup& setup, const DoubleSlitMask& mask,
                                       const DetectorSpec& det, Illumination illumination);

}  // namespace ghostfringe
