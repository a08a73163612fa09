#include "ghostfringe/correlator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ghostfringe {

namespace {

struct PointSums {
  std::int64_t n;
  double ic, it, icit;
};

// mean/covariance estimate from raw sums at one point
CorrelationResult from_sums(const PointSums& s) {
  if (s.n < 2) throw std::runtime_error("correlator: need at least 2 realizations to estimate a correlation");
  CorrelationResult r;
  r.n = s.n;
  const double inv_n = 1.0 / static_cast<double>(s.n);
  r.mean_IC = s.ic * inv_n;
  r.mean_IT = s.it * inv_n;
  r.fluct_corr = s.icit * inv_n - r.mean_IC * r.mean_IT;
  const double denom = r.mean_IC * r.mean_IT;
  r.normalized = denom != 0.0 ? r.fluct_corr / denom : std::numeric_limits<double>::quiet_NaN();
  r.fluct_corr_se = std::numeric_limits<double>::quiet_NaN();
  r.normalized_se = std::numeric_limits<double>::quiet_NaN();
  return r;
}

}  // namespace

CorrelationAccumulator::CorrelationAccumulator(std::size_t n_points)
    : sum_ic_(n_points, 0.0),
      sum_it_(n_points, 0.0),
      sum_icit_(n_points, 0.0),
      sum_ic2_(n_points, 0.0),
      sum_it2_(n_points, 0.0) {}

void CorrelationAccumulator::accumulate(std::span<const double> I_C, std::span<const double> I_T) {
  if (I_C.size() != size() || I_T.size() != size())
    throw std::invalid_argument("correlator: sample arrays do not match the number of scan points");
  for (std::size_t p = 0; p < size(); ++p) {
    const double c = I_C[p], t = I_T[p];
    sum_ic_[p] += c;
    sum_it_[p] += t;
    sum_icit_[p] += c * t;
    sum_ic2_[p] += c * c;
    sum_it2_[p] += t * t;
  }
  ++n_;
}

void CorrelationAccumulator::accumulate_outer(std::span<const double> I_C, std::span<const double> I_T) {
  if (I_C.size() * I_T.size() != size())
    throw std::invalid_argument("correlator: detector grids do not match the number of scan points");
  std::size_t p = 0;
  for (const double c : I_C) {
    for (const double t : I_T) {
      sum_ic_[p] += c;
      sum_it_[p] += t;
      sum_icit_[p] += c * t;
      sum_ic2_[p] += c * c;
      sum_it2_[p] += t * t;
      ++p;
    }
  }
  ++n_;
}

void CorrelationAccumulator::merge(const CorrelationAccumulator& other) {
  if (other.size() != size())
    throw std::invalid_argument("correlator: cannot merge accumulators of different sizes");
  for (std::size_t p = 0; p < size(); ++p) {
    sum_ic_[p] += other.sum_ic_[p];
    sum_it_[p] += other.sum_it_[p];
    sum_icit_[p] += other.sum_icit_[p];
    sum_ic2_[p] += other.sum_ic2_[p];
    sum_it2_[p] += other.sum_it2_[p];
  }
  n_ += other.n_;
}

CorrelationResult CorrelationAccumulator::finalize_point(std::size_t p) const {
  if (p >= size()) throw std::out_of_range("correlator: scan point index out of range");
  return from_sums({n_, sum_ic_[p], sum_it_[p], sum_icit_[p]});
}

std::vector<CorrelationResult> CorrelationAccumulator::finalize() const {
  std::vector<CorrelationResult> out(size());
  for (std::size_t p = 0; p < size(); ++p) out[p] = finalize_point(p);
  return out;
}

BlockedCorrelator::BlockedCorrelator(std::size_t n_points, int n_blocks) {
  if (n_blocks < 1) throw std::invalid_argument("correlator: need at least one block");
  blocks_.assign(static_cast<std::size_t>(n_blocks), CorrelationAccumulator(n_points));
}

CorrelationAccumulator BlockedCorrelator::merged() const {
  // pairwise tree by block index: the reduction order (and thus rounding) is
  // fixed no matter how many threads filled the blocks
  std::vector<CorrelationAccumulator> level(blocks_.begin(), blocks_.end());
  while (level.size() > 1) {
    std::vector<CorrelationAccumulator> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      level[i].merge(level[i + 1]);
      next.push_back(std::move(level[i]));
    }
    if (level.size() % 2 == 1) next.push_back(std::move(level.back()));
    level = std::move(next);
  }
  return level.empty() ? CorrelationAccumulator(0) : std::move(level.front());
}

std::vector<CorrelationResult> BlockedCorrelator::finalize() const {
  const CorrelationAccumulator total = merged();
  std::vector<CorrelationResult> out = total.finalize();

  std::vector<int> occupied;
  for (int b = 0; b < n_blocks(); ++b)
    if (blocks_[b].count() > 0) occupied.push_back(b);
  const int B = static_cast<int>(occupied.size());
  if (B < 2) return out;  // error bars stay NaN

  std::vector<double> jf(B), jn(B);
  for (std::size_t p = 0; p < total.size(); ++p) {
    bool usable = true;
    for (int i = 0; i < B && usable; ++i) {
      const CorrelationAccumulator& blk = blocks_[occupied[i]];
      const PointSums rest{total.count() - blk.count(),
                           total.sum_ic(p) - blk.sum_ic(p),
                           total.sum_it(p) - blk.sum_it(p),
                           total.sum_icit(p) - blk.sum_icit(p)};
      if (rest.n < 2) {
        usable = false;
        break;
      }
      const CorrelationResult r = from_sums(rest);
      jf[i] = r.fluct_corr;
      jn[i] = r.normalized;
      if (!std::isfinite(jn[i])) usable = false;
    }
    if (!usable) continue;
    auto jackknife_se = [B](const std::vector<double>& v) {
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= B;
      double ss = 0.0;
      for (double x : v) ss += (x - mean) * (x - mean);
      return std::sqrt(ss * (B - 1) / static_cast<double>(B));
    };
    out[p].fluct_corr_se = jackknife_se(jf);
    out[p].normalized_se = jackknife_se(jn);
  }
  return out;
}

std::vector<double> bucket_integrate(std::span<const double> map, int n_C, int n_T) {
  if (n_C < 1 || n_T < 1 || map.size() != static_cast<std::size_t>(n_C) * static_cast<std::size_t>(n_T))
    throw std::invalid_argument("correlator: map size does not match the detector grids");
  std::vector<double> bucket(static_cast<std::size_t>(n_C), 0.0);
  for (int i = 0; i < n_C; ++i)
    for (int j = 0; j < n_T; ++j) bucket[i] += map[static_cast<std::size_t>(i) * n_T + j];
  return bucket;
}

double trace_visibility(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("correlator: empty trace");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double denom = *hi + *lo;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (*hi - *lo) / denom;
}

}  // namespace ghostfringe
