#pragma once

// Monte Carlo speckle engine: circular complex Gaussian source fields drawn
// per realization, propagated source -> mask -> lens -> focal plane by direct
// paraxial double sums. Grids are small enough that direct summation beats
// any FFT bookkeeping; the inner loop is a complex MAC with a unit-phasor
// recurrence.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "ghostfringe/geometry.hpp"

namespace ghostfringe {

struct SourceGrid {
  std::vector<double> positions;          // uniform, ascending [m]
  std::vector<double> amplitude_weights;  // sqrt(intensity) per point
  double spacing = 0.0;

  std::size_t size() const { return positions.size(); }
};

// Uniform grid across the source support: the full hard-edge width, or
// +-4 sigma for the gaussian profile. Enforces n >= 128 and
// spacing <= width/64 so the profile and its transform are resolved.
SourceGrid make_source_grid(const OpticalSetup& setup, int n_points = 1024);

// Single on-axis emitter of unit weight: the spatially coherent fixture.
// Because the one point radiates a clean spherical wave, running it through
// the same propagation path reproduces laser illumination exactly.
SourceGrid point_source_grid();

struct SourceRealization {
  SourceGrid grid;
  std::vector<std::complex<double>> field;
  std::uint64_t seed = 0;
  std::uint64_t realization_index = 0;
};

// Independent circular complex Gaussian per grid point, <|E_m|^2> = w_m^2.
// Stream identity is (seed, realization_index): any subset of realizations
// can be drawn in any order, on any thread, with identical results.
SourceRealization sample_source(const SourceGrid& grid, std::uint64_t seed,
                                std::uint64_t realization_index);

// Deterministic pass with field = amplitude weights (no fluctuations).
SourceRealization coherent_source(const SourceGrid& grid);

// Source field with the quadratic free-space phase folded in:
// h_s = E_s exp(i k x_s^2 / 2z). Everything downstream only needs this
// combination, so it is computed once per realization.
struct PreparedRealization {
  std::vector<std::complex<double>> h;
  double x0 = 0.0;       // first grid point
  double spacing = 0.0;  // uniform grid step
};

PreparedRealization prepare(const OpticalSetup& setup, const SourceRealization& realization);

// Quadrature nodes across the open parts of a mask.
struct SlitNodes {
  std::vector<double> positions;
  std::vector<double> weights;  // [m]; a point slit contributes weight 1

  std::size_t size() const { return positions.size(); }
};

// Gauss-Legendre nodes per slit. The per-slit order starts at 8 and grows
// with the worst-case phase span across the slit (source edge, quadratic
// mask phase, detector positions up to max_abs_detector), so oscillatory
// integrands stay resolved; point slits get one unit-weight node each.
SlitNodes slit_nodes(const OpticalSetup& setup, const DoubleSlitMask& mask,
                     double max_abs_detector = 1.5e-3);

// Same for a single clear aperture (Siegert fixtures, no-mask checks).
SlitNodes aperture_nodes(const OpticalSetup& setup, double center, double width,
                         double max_abs_detector = 1.5e-3);

// Mask-plane amplitude at each node: exp(i k x_m^2 / 2z) sum_s h_s
// exp(-i k x_m x_s / z). Throws if the source grid undersamples the fastest
// phase across the geometry (> pi/2 advance per sample).
std::vector<std::complex<double>> slit_amplitudes(const OpticalSetup& setup,
                                                  const PreparedRealization& prepared,
                                                  const SlitNodes& nodes);

// Lens + focal-plane kernel applied to precomputed node amplitudes:
// E(x_d) = sum_m w_m amp_m exp(-i k x_d x_m / f).
std::complex<double> field_from_amplitudes(const OpticalSetup& setup, const SlitNodes& nodes,
                                           std::span<const std::complex<double>> amplitudes,
                                           double x_detector);

// Convenience composition of the above for a single detector position.
std::complex<double> field_at_detector(const SourceRealization& realization,
                                       const OpticalSetup& setup, const DoubleSlitMask& mask,
                                       double x_detector);

struct DetectorSample {
  double I_C = 0.0;
  double I_T = 0.0;
};

// Both arms see the same source field (balanced splitter, constant factors
// dropped); point detectors at x_C and x_T.
DetectorSample run_realization(const SourceRealization& realization, const OpticalSetup& setup,
                               const DoubleSlitMask& mask_C, const DoubleSlitMask& mask_T,
                               double x_C, double x_T);

}  // namespace ghostfringe
