#include "ghostfringe/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "ghostfringe/quadrature.hpp"

namespace ghostfringe {

namespace {
const QuadratureRule& aperture_rule() {
  static const QuadratureRule rule = gauss_legendre(9);
  return rule;
}
}  // namespace

double source_spectrum(const OpticalSetup& setup, double nu) {
  switch (setup.source.shape) {
    case SourceShape::uniform: {
      // hard edge of full width D: sinc(pi nu D), first zero where the slit
      // offset nu*lambda*z equals the coherence length
      const double width = setup.source_full_width();
      return sinc(std::numbers::pi * nu * width);
    }
    case SourceShape::gaussian: {
      const double sigma = setup.source_rms_width();
      const double arg = std::numbers::pi * sigma * nu;
      return std::exp(-2.0 * arg * arg);
    }
  }
  return 0.0;
}

std::complex<double> propagation_phase(const OpticalSetup& setup, double x_slit, double x_det) {
  const double lz = setup.lambda_z();
  const double lf = setup.wavelength * setup.focal_length;
  const double phase = std::numbers::pi * x_slit * x_slit / lz -
                       2.0 * std::numbers::pi * x_det * x_slit / lf;
  return std::polar(1.0, phase);
}

double slit_aperture_factor(const OpticalSetup& setup, double slit_width, double x_det) {
  if (slit_width <= 0.0) return 1.0;
  const double lf = setup.wavelength * setup.focal_length;
  return sinc(std::numbers::pi * slit_width * x_det / lf);
}

std::complex<double> g1_pair(const OpticalSetup& setup, const DoubleSlitMask& mask_C,
                             const DoubleSlitMask& mask_T, int alpha, int beta, double x_C,
                             double x_T) {
  if (alpha < 0 || alpha > 1 || beta < 0 || beta > 1) {
    throw std::invalid_argument("g1_pair: slit indices must be 0 or 1");
  }
  const auto pc = slit_positions(mask_C);
  const auto pt = slit_positions(mask_T);
  const double xc_slit = pc[alpha];
  const double xt_slit = pt[beta];
  const double spectrum = source_spectrum(setup, (xc_slit - xt_slit) / setup.lambda_z());
  const std::complex<double> amp = std::conj(propagation_phase(setup, xc_slit, x_C)) *
                                   propagation_phase(setup, xt_slit, x_T) * spectrum;
  return amp * slit_aperture_factor(setup, mask_C.slit_width, x_C) *
         slit_aperture_factor(setup, mask_T.slit_width, x_T);
}

std::complex<double> g1_total(const OpticalSetup& setup, const DoubleSlitMask& mask_C,
                              const DoubleSlitMask& mask_T, double x_C, double x_T,
                              PathMode mode) {
  std::complex<double> total = g1_pair(setup, mask_C, mask_T, 0, 0, x_C, x_T) +
                               g1_pair(setup, mask_C, mask_T, 1, 1, x_C, x_T);
  if (mode == PathMode::four_path) {
    total += g1_pair(setup, mask_C, mask_T, 0, 1, x_C, x_T) +
             g1_pair(setup, mask_C, mask_T, 1, 0, x_C, x_T);
  }
  return total;
}

double correlation(const OpticalSetup& setup, const DoubleSlitMask& mask_C,
                   const DoubleSlitMask& mask_T, double x_C, double x_T, PathMode mode) {
  return std::norm(g1_total(setup, mask_C, mask_T, x_C, x_T, mode));
}

double correlation_apertured(const OpticalSetup& setup, const DoubleSlitMask& mask_C,
                             const DoubleSlitMask& mask_T, const DetectorSpec& det_C,
                             const DetectorSpec& det_T, PathMode mode) {
  const auto& rule = aperture_rule();
  return aperture_average(
      [&](double xc) {
        return aperture_average(
            [&](double xt) { return correlation(setup, mask_C, mask_T, xc, xt, mode); },
            det_T.position, det_T.aperture_width, rule);
      },
      det_C.position, det_C.aperture_width, rule);
}

double sensing_phase(const OpticalSetup& setup, double Xbar_C, double d_C, double Xbar_T,
                     double d_T, double x_C, double x_T) {
  const double k = setup.wavenumber();
  return k / setup.z * (Xbar_T * d_T - Xbar_C * d_C) -
         k / setup.focal_length * (x_T * d_T - x_C * d_C);
}

double first_order_intensity(const OpticalSetup& setup, const DoubleSlitMask& mask, double x_det,
                             Illumination illumination) {
  const auto pos = slit_positions(mask);
  const std::complex<double> b1 = propagation_phase(setup, pos[0], x_det);
  const std::complex<double> b2 = propagation_phase(setup, pos[1], x_det);
  const double w = slit_aperture_factor(setup, mask.slit_width, x_det);
  if (illumination == Illumination::laser) {
    return w * w * std::norm(b1 + b2);
  }
  const double spectrum = source_spectrum(setup, mask.separation / setup.lambda_z());
  return w * w * (2.0 + 2.0 * spectrum * (std::conj(b1) * b2).real());
}

double first_order_intensity_apertured(const OpticalSetup& setup, const DoubleSlitMask& mask,
                                       const DetectorSpec& det, Illumination illumination) {
  return aperture_average(
      [&](double x) { return first_order_intensity(setup, mask, x, illumination); }, det.position,
      det.aperture_width, aperture_rule());
}

}  // namespace ghostfringe
