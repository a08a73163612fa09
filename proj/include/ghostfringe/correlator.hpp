#pragma once

// Streaming intensity-correlation estimator over a set of scan points.
// Raw moment sums (not Welford) so that partial accumulators merge by plain
// addition; catastrophic cancellation is handled upstream by normalizing
// intensities to O(1) with a pilot scale before accumulation.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ghostfringe {

struct CorrelationResult {
  std::int64_t n = 0;
  double mean_IC = 0.0;
  double mean_IT = 0.0;
  double fluct_corr = 0.0;     // <IC IT> - <IC><IT>
  double fluct_corr_se = 0.0;  // jackknife standard error (NaN without blocks)
  double normalized = 0.0;     // fluct_corr / (<IC><IT>)
  double normalized_se = 0.0;  // jackknife standard error (NaN without blocks)
};

class CorrelationAccumulator {
 public:
  CorrelationAccumulator() = default;
  explicit CorrelationAccumulator(std::size_t n_points);

  std::size_t size() const { return sum_ic_.size(); }
  std::int64_t count() const { return n_; }

  // One realization: a sample per scan point.
  void accumulate(std::span<const double> I_C, std::span<const double> I_T);

  // One realization in map mode: samples on the two detector grids, the scan
  // points being all pairs (i, j) in row-major order i * |I_T| + j.
  void accumulate_outer(std::span<const double> I_C, std::span<const double> I_T);

  void merge(const CorrelationAccumulator& other);  // plain sum; shapes must match

  // Point estimate without error bars; throws on n < 2.
  CorrelationResult finalize_point(std::size_t p) const;
  std::vector<CorrelationResult> finalize() const;

  // raw sums, exposed for the jackknife
  double sum_ic(std::size_t p) const { return sum_ic_[p]; }
  double sum_it(std::size_t p) const { return sum_it_[p]; }
  double sum_icit(std::size_t p) const { return sum_icit_[p]; }
  double sum_ic2(std::size_t p) const { return sum_ic2_[p]; }
  double sum_it2(std::size_t p) const { return sum_it2_[p]; }

 private:
  std::int64_t n_ = 0;
  std::vector<double> sum_ic_, sum_it_, sum_icit_, sum_ic2_, sum_it2_;
};

// Fixed set of contiguous realization blocks; which thread fills which block
// does not affect the result, and the final reduction is a deterministic
// pairwise tree over block indices. Also the unit of the jackknife.
class BlockedCorrelator {
 public:
  BlockedCorrelator(std::size_t n_points, int n_blocks);

  int n_blocks() const { return static_cast<int>(blocks_.size()); }
  CorrelationAccumulator& block(int b) { return blocks_[b]; }
  const CorrelationAccumulator& block(int b) const { return blocks_[b]; }

  CorrelationAccumulator merged() const;

  // Point estimates from the merged sums plus leave-one-block-out jackknife
  // standard errors for fluct_corr and normalized.
  std::vector<CorrelationResult> finalize() const;

 private:
  std::vector<CorrelationAccumulator> blocks_;
};

// Sum a row-major (n_C x n_T) map over the T axis: the bucket-detector reading
// behind arm T as a function of x_C.
std::vector<double> bucket_integrate(std::span<const double> map, int n_C, int n_T);

// (max - min) / (max + min) over a sampled trace.
double trace_visibility(std::span<const double> values);

}  // namespace ghostfringe
