#include "ghostfringe/fringe.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace ghostfringe {

namespace {

// Parameters: A, center, kappa, V, period, phase, baseline. The envelope is
// exp(-0.5 kappa (u-c)^2) with kappa = 1/width^2; a flat envelope is the
// interior point kappa = 0 rather than a width pushed to a bound, which keeps
// the optimizer out of the slow crawl along the width direction.
constexpr int kNumParams = 7;
constexpr int kMaxIterations = 200;
constexpr double kStepTolerance = 1e-10;
constexpr int kOversample = 8;  // periodogram frequency oversampling

using Params = std::array<double, kNumParams>;

struct Model {
  // everything in scaled coordinates: u in [-1, 1], values in [0, 1]
  double operator()(const Params& p, double u) const {
    const double du = u - p[1];
    const double g = std::exp(-0.5 * p[2] * du * du);
    return p[0] * g * (1.0 + p[3] * std::cos(2.0 * M_PI * u / p[4] + p[5])) + p[6];
  }
  void jacobian_row(const Params& p, double u, double* row) const {
    const double du = u - p[1];
    const double g = std::exp(-0.5 * p[2] * du * du);
    const double theta = 2.0 * M_PI * u / p[4] + p[5];
    const double ct = std::cos(theta), st = std::sin(theta);
    const double osc = 1.0 + p[3] * ct;
    row[0] = g * osc;
    row[1] = p[0] * g * osc * p[2] * du;
    row[2] = -0.5 * p[0] * g * osc * du * du;
    row[3] = p[0] * g * ct;
    row[4] = p[0] * g * p[3] * st * 2.0 * M_PI * u / (p[4] * p[4]);
    row[5] = -p[0] * g * p[3] * st;
    row[6] = 1.0;
  }
};

// dense solve with partial pivoting; a is destroyed; returns false if singular
template <std::size_t N>
bool solve_inplace(std::array<std::array<double, N>, N>& a,
                   std::array<std::array<double, N>, N>& rhs, int n_rhs) {
  for (std::size_t col = 0; col < N; ++col) {
    int piv = col;
    for (std::size_t r = col + 1; r < N; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) < 1e-300) return false;
    std::swap(a[piv], a[col]);
    std::swap(rhs[piv], rhs[col]);
    const double inv = 1.0 / a[col][col];
    for (std::size_t r = 0; r < N; ++r) {
      if (r == col) continue;
      const double factor = a[r][col] * inv;
      if (factor == 0.0) continue;
      for (std::size_t c = col; c < N; ++c) a[r][c] -= factor * a[col][c];
      for (int c = 0; c < n_rhs; ++c) rhs[r][c] -= factor * rhs[col][c];
    }
  }
  for (std::size_t r = 0; r < N; ++r) {
    const double inv = 1.0 / a[r][r];
    for (int c = 0; c < n_rhs; ++c) rhs[r][c] *= inv;
  }
  return true;
}

constexpr int kTrendDegree = 4;

// least-squares polynomial trend: the envelope's low-frequency bulk
bool trend_poly(const std::vector<double>& u, const std::vector<double>& v,
                std::array<double, kTrendDegree + 1>& coef) {
  std::array<std::array<double, kTrendDegree + 1>, kTrendDegree + 1> normal{};
  std::array<std::array<double, kTrendDegree + 1>, kTrendDegree + 1> rhs{};
  for (std::size_t i = 0; i < u.size(); ++i) {
    double basis[kTrendDegree + 1];
    basis[0] = 1.0;
    for (int j = 1; j <= kTrendDegree; ++j) basis[j] = basis[j - 1] * u[i];
    for (int a = 0; a <= kTrendDegree; ++a) {
      rhs[a][0] += basis[a] * v[i];
      for (int b = a; b <= kTrendDegree; ++b) normal[a][b] += basis[a] * basis[b];
    }
  }
  for (int a = 0; a <= kTrendDegree; ++a)
    for (int b = 0; b < a; ++b) normal[a][b] = normal[b][a];
  if (!solve_inplace<kTrendDegree + 1>(normal, rhs, 1)) return false;
  for (int j = 0; j <= kTrendDegree; ++j) coef[j] = rhs[j][0];
  return true;
}

double eval_poly(const std::array<double, kTrendDegree + 1>& coef, double u) {
  double basis = 1.0, y = coef[0];
  for (int j = 1; j <= kTrendDegree; ++j) {
    basis *= u;
    y += coef[j] * basis;
  }
  return y;
}

// removes the trend so the periodogram peak is the fringe, not spectral leakage
std::vector<double> detrended(const std::vector<double>& u, const std::vector<double>& v) {
  std::array<double, kTrendDegree + 1> coef{};
  std::vector<double> out(v);
  if (!trend_poly(u, v, coef)) return out;  // fall back to raw values
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = v[i] - eval_poly(coef, u[i]);
  return out;
}

double wrap_pi(double phi) {
  phi = std::remainder(phi, 2.0 * M_PI);
  if (phi <= -M_PI) phi += 2.0 * M_PI;  // land on (-pi, pi]
  return phi;
}

struct Periodogram {
  double period;  // in scaled units
  double phase;   // cosine phase at u = 0
  double snr;
};

// discrete spectrum of the mean-subtracted trace over an oversampled frequency
// grid; the peak initializes the period and gates fringe detection
Periodogram spectrum_peak(const std::vector<double>& u, const std::vector<double>& v) {
  const std::size_t n = u.size();
  const double span = u.back() - u.front();
  double min_step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < n; ++i) min_step = std::min(min_step, u[i] - u[i - 1]);
  const double f_nyquist = 0.5 / min_step;

  const int k_min = kOversample;  // f = 1/span: longer periods are not fringes
  const int k_max = static_cast<int>(std::floor(kOversample * span * f_nyquist));
  if (k_max <= k_min + 2) throw NoFringeError("fringe fit: scan too short to resolve any fringe");

  const std::vector<double> d = detrended(u, v);
  std::vector<double> power(static_cast<std::size_t>(k_max) + 1, 0.0);
  std::vector<double> re(power.size(), 0.0), im(power.size(), 0.0);
  for (int k = k_min; k <= k_max; ++k) {
    const double f = static_cast<double>(k) / (kOversample * span);
    double c = 0.0, s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double arg = 2.0 * M_PI * f * u[i];
      c += d[i] * std::cos(arg);
      s += d[i] * std::sin(arg);
    }
    re[k] = c;
    im[k] = s;
    power[k] = c * c + s * s;
  }

  int k_peak = k_min;
  for (int k = k_min; k <= k_max; ++k)
    if (power[k] > power[k_peak]) k_peak = k;

  // a peak hugging the low-frequency band edge is residual envelope leakage
  if (k_peak <= k_min + 1) throw NoFringeError("fringe fit: no spectral peak above the envelope band");

  double floor_sum = 0.0;
  int floor_count = 0;
  for (int k = k_min; k <= k_max; ++k) {
    if (std::abs(k - k_peak) <= 3 * kOversample) continue;
    floor_sum += power[k];
    ++floor_count;
  }
  const double noise_floor = floor_count > 0 ? floor_sum / floor_count : 0.0;
  const double snr = noise_floor > 0.0 ? std::sqrt(power[k_peak] / noise_floor)
                                       : std::numeric_limits<double>::infinity();
  if (snr < 3.0) throw NoFringeError("fringe fit: spectral peak SNR below 3");

  // parabolic refinement of the peak bin
  double k_refined = k_peak;
  if (k_peak > k_min && k_peak < k_max) {
    const double pm = power[k_peak - 1], p0 = power[k_peak], pp = power[k_peak + 1];
    const double denom = pm - 2.0 * p0 + pp;
    if (denom < 0.0) k_refined += 0.5 * (pm - pp) / denom;
  }
  const double f_peak = k_refined / (kOversample * span);

  Periodogram out;
  out.period = 1.0 / f_peak;
  // v - mean ~ a cos(2 pi f u + phi) gives sum(d cos), sum(d sin) ~ (n a/2) e^{-i phi}
  out.phase = std::atan2(-im[k_peak], re[k_peak]);
  out.snr = snr;
  return out;
}

struct LmOutcome {
  Params p;
  double cost = 0.0;
  int iterations = 0;
};

// damped least squares with the step projected onto box bounds; with
// throw_on_max false a hit of the iteration cap returns the current point
// (used for the fringe-free baseline, where an unconverged, too-high cost can
// only bias the gate toward accepting a fringe that is really there)
LmOutcome run_lm(const std::vector<double>& u, const std::vector<double>& w, Params p,
                 const Params& lo, const Params& hi, bool throw_on_max = true) {
  const std::size_t n = u.size();
  const Model model;
  auto cost_of = [&](const Params& q) {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = model(q, u[i]) - w[i];
      c += e * e;
    }
    return c;
  };

  // exact re-solve of the conditionally linear parameters (amplitude, fringe
  // quadrature coefficients, baseline) at fixed envelope and period; collapses
  // the long narrow valleys those directions form with the envelope shape
  auto linear_refresh = [&](Params& q, double& q_cost) {
    const bool fringe_free = hi[3] <= lo[3];
    const int m = fringe_free ? 2 : 4;
    std::array<std::array<double, 4>, 4> normal{};
    std::array<std::array<double, 4>, 4> rhs{};
    for (std::size_t i = 0; i < n; ++i) {
      const double du = u[i] - q[1];
      const double g = std::exp(-0.5 * q[2] * du * du);
      double basis[4] = {g, 1.0, 0.0, 0.0};
      if (!fringe_free) {
        const double theta = 2.0 * M_PI * u[i] / q[4];
        basis[1] = g * std::cos(theta);
        basis[2] = g * std::sin(theta);
        basis[3] = 1.0;
      }
      for (int a = 0; a < m; ++a) {
        rhs[a][0] += basis[a] * w[i];
        for (int b = a; b < m; ++b) normal[a][b] += basis[a] * basis[b];
      }
    }
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < a; ++b) normal[a][b] = normal[b][a];
      for (int b = m; b < 4; ++b) normal[a][b] = 0.0;
    }
    for (int a = m; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) normal[a][b] = a == b ? 1.0 : 0.0;
      rhs[a][0] = 0.0;
    }
    if (!solve_inplace(normal, rhs, 1) || !(rhs[0][0] > 0.0)) return;
    Params c = q;
    c[0] = std::clamp(rhs[0][0], lo[0], hi[0]);
    if (fringe_free) {
      c[6] = std::clamp(rhs[1][0], lo[6], hi[6]);
    } else {
      const double v_raw = std::hypot(rhs[1][0], rhs[2][0]) / rhs[0][0];
      c[3] = std::clamp(v_raw, lo[3], hi[3]);
      c[5] = std::clamp(std::atan2(-rhs[2][0], rhs[1][0]), lo[5], hi[5]);
      c[6] = std::clamp(rhs[3][0], lo[6], hi[6]);
      if (c[3] != v_raw) {
        // visibility clamp engaged: re-solve amplitude and baseline with the
        // oscillation locked to the bound, otherwise the pair is inconsistent.
        // The quadrature phase is no longer jointly optimal under the clamp,
        // so the incumbent phase competes as a second candidate; overwriting
        // it unconditionally would keep undoing the main loop's phase steps
        const double phase_atan = c[5];
        double best_cost = std::numeric_limits<double>::infinity();
        Params best = c;
        for (const double phase : {phase_atan, q[5]}) {
          Params t = c;
          t[5] = std::clamp(phase, lo[5], hi[5]);
          std::array<std::array<double, 2>, 2> n2{};
          std::array<std::array<double, 2>, 2> r2{};
          for (std::size_t i = 0; i < n; ++i) {
            const double du = u[i] - t[1];
            const double g = std::exp(-0.5 * t[2] * du * du);
            const double b0 = g * (1.0 + t[3] * std::cos(2.0 * M_PI * u[i] / t[4] + t[5]));
            n2[0][0] += b0 * b0;
            n2[0][1] += b0;
            n2[1][1] += 1.0;
            r2[0][0] += b0 * w[i];
            r2[1][0] += w[i];
          }
          n2[1][0] = n2[0][1];
          if (!solve_inplace(n2, r2, 1)) continue;
          t[0] = std::clamp(r2[0][0], lo[0], hi[0]);
          t[6] = std::clamp(r2[1][0], lo[6], hi[6]);
          const double t_cost = cost_of(t);
          if (t_cost < best_cost) {
            best_cost = t_cost;
            best = t;
          }
        }
        if (!std::isfinite(best_cost)) return;
        c = best;
      }
    }
    const double c_cost = cost_of(c);
    if (c_cost < q_cost) {
      q = c;
      q_cost = c_cost;
    }
  };

  // parabolic step on the projected cost along one nonlinear direction
  // (linear parameters re-solved at each trial point). Gauss-Newton curvature
  // badly underestimates the true curvature of these directions whenever the
  // data's envelope is not gaussian, and the resulting poor gain ratios keep
  // the damping high and throttle them to a crawl; the projected line search
  // is immune to that
  auto projected_polish = [&](Params& q, double& q_cost, int idx, double h_scale) {
    if (hi[idx] <= lo[idx]) return;
    auto projected = [&](double value) {
      Params c = q;
      c[idx] = std::clamp(value, lo[idx], hi[idx]);
      double cc = cost_of(c);
      linear_refresh(c, cc);
      return std::pair<double, Params>(cc, c);
    };
    // successive parabolic refinement with a shrinking probe: the first pass
    // can only place the vertex to about 1e-3 of the probe width, which is
    // far too coarse once the minimum is close
    double h = std::max(1e-3 * std::abs(q[idx]), h_scale);
    for (int round = 0; round < 3; ++round, h *= 1.0 / 16.0) {
      const double x0 = q[idx];
      const double mid = q_cost;
      const auto [cm, qm] = projected(x0 - h);
      const auto [cp, qp] = projected(x0 + h);
      if (cm < q_cost) {
        q = qm;
        q_cost = cm;
      }
      if (cp < q_cost) {
        q = qp;
        q_cost = cp;
      }
      const double denom = cm - 2.0 * mid + cp;  // curvature of the projection
      if (denom > 0.0) {
        double vertex = x0 + 0.5 * h * (cm - cp) / denom;
        vertex = std::clamp(vertex, x0 - 50.0 * h, x0 + 50.0 * h);
        const auto [cv, qv] = projected(vertex);
        if (cv < q_cost) {
          q = qv;
          q_cost = cv;
        }
      }
    }
  };
  // center, envelope curvature, and period are the truly nonlinear directions;
  // phase is conditionally linear only while the visibility is interior, so it
  // gets polished too for the visibility-at-bound regime
  auto polish_all = [&](Params& q, double& q_cost) {
    projected_polish(q, q_cost, 2, 1e-4);
    projected_polish(q, q_cost, 4, 1e-6);
    projected_polish(q, q_cost, 1, 1e-4);
    projected_polish(q, q_cost, 5, 1e-5);
  };

  // below this, residuals are double-precision noise and the fit is exact
  const double cost_floor = static_cast<double>(n) * 1e-26;

  double cost = cost_of(p);
  linear_refresh(p, cost);
  polish_all(p, cost);
  double lambda = 1e-3;
  double nu = 2.0;
  bool converged = cost <= cost_floor;
  int iterations = 0;
  bool model_dirty = true;

  std::array<std::array<double, kNumParams>, kNumParams> hess{}, work{};
  Params grad{};

  for (int iter = 0; iter < kMaxIterations && !converged; ++iter) {
    iterations = iter + 1;
    if (model_dirty) {
      for (auto& r : hess) r.fill(0.0);
      grad.fill(0.0);
      double row[kNumParams];
      for (std::size_t i = 0; i < n; ++i) {
        model.jacobian_row(p, u[i], row);
        const double e = model(p, u[i]) - w[i];
        for (int a = 0; a < kNumParams; ++a) {
          grad[a] += row[a] * e;
          for (int b = a; b < kNumParams; ++b) hess[a][b] += row[a] * row[b];
        }
      }
      for (int a = 0; a < kNumParams; ++a)
        for (int b = 0; b < a; ++b) hess[a][b] = hess[b][a];
      model_dirty = false;

      // scale-free first-order condition: cosine between each free Jacobian
      // column and the residual; bound-blocked directions do not count
      double gmax = 0.0;
      for (int a = 0; a < kNumParams; ++a) {
        if (hi[a] <= lo[a] || hess[a][a] <= 1e-30) continue;
        if (p[a] <= lo[a] && grad[a] > 0.0) continue;
        if (p[a] >= hi[a] && grad[a] < 0.0) continue;
        gmax = std::max(gmax, std::abs(grad[a]) / std::sqrt(hess[a][a] * std::max(cost, 1e-300)));
      }
      if (gmax < 1e-8) {
        converged = true;
        break;
      }
    }

    auto damped = hess;
    for (int a = 0; a < kNumParams; ++a)
      damped[a][a] += lambda * std::max(hess[a][a], 1e-12);
    work.fill({});
    for (int a = 0; a < kNumParams; ++a) work[a][0] = -grad[a];
    if (!solve_inplace(damped, work, 1)) {
      lambda = std::min(lambda * nu, 1e14);
      nu *= 2.0;
      continue;
    }
    Params trial;
    double step = 0.0, predicted = 0.0;
    for (int a = 0; a < kNumParams; ++a) {
      trial[a] = std::clamp(p[a] + work[a][0], lo[a], hi[a]);
      const double d = trial[a] - p[a];
      step = std::max(step, std::abs(d) / (std::abs(p[a]) + 1e-3));
      predicted += d * (lambda * std::max(hess[a][a], 1e-12) * d - grad[a]);
    }
    if (step < kStepTolerance) {
      converged = true;  // trust region collapsed onto a stationary point
      break;
    }
    const double trial_cost = cost_of(trial);
    if (trial_cost < cost) {
      // gain-ratio damping control (Nielsen): smooth adaptation beats the
      // fixed up/down factors in curved, nearly degenerate valleys
      const double rho = (cost - trial_cost) / std::max(predicted, 1e-300);
      const double shrink = 1.0 - std::pow(2.0 * std::clamp(rho, 0.0, 1.0) - 1.0, 3);
      lambda = std::max(lambda * std::max(1.0 / 3.0, shrink), 1e-14);
      nu = 2.0;
      p = trial;
      cost = trial_cost;
      linear_refresh(p, cost);
      polish_all(p, cost);
      model_dirty = true;
      if (cost <= cost_floor) converged = true;
    } else {
      lambda = std::min(lambda * nu, 1e14);
      nu *= 2.0;
      if (lambda >= 1e14) {
        // damping exhausted: no direction improves, treat as stationary
        converged = true;
        break;
      }
    }
  }
  if (!converged && throw_on_max)
    throw NonConvergenceError("fringe fit: no convergence within 200 iterations");
  return {p, cost, iterations};
}

}  // namespace

FringeFit fit_fringe(std::span<const double> positions, std::span<const double> values) {
  const std::size_t n = positions.size();
  if (n != values.size()) throw std::invalid_argument("fringe fit: positions and values differ in length");
  if (n < 8) throw std::invalid_argument("fringe fit: need at least 8 points");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(positions[i]) || !std::isfinite(values[i]))
      throw std::invalid_argument("fringe fit: non-finite input");
    if (i > 0 && positions[i] <= positions[i - 1])
      throw std::invalid_argument("fringe fit: positions must be strictly increasing");
  }

  // scale x to [-1, 1] and values to [0, 1]; conditions the normal equations
  // and makes the estimates exactly invariant under affine value rescaling
  const double x_mid = 0.5 * (positions.front() + positions.back());
  const double x_scale = 0.5 * (positions.back() - positions.front());
  const auto [vmin_it, vmax_it] = std::minmax_element(values.begin(), values.end());
  const double v_lo = *vmin_it, v_hi = *vmax_it;
  const double v_range = v_hi - v_lo;
  const double v_typical = std::max({std::abs(v_lo), std::abs(v_hi), 1e-300});
  if (v_range <= 1e-9 * v_typical) throw NoFringeError("fringe fit: trace is flat");

  std::vector<double> u(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = (positions[i] - x_mid) / x_scale;
    w[i] = (values[i] - v_lo) / v_range;
  }

  // the envelope amplitude is kept nonnegative, so a trace whose smooth bulk
  // is a dip (e.g. after a negative rescaling) is fitted upside down and the
  // outputs are mapped back; a flat or monotone trend fits either way up
  bool flipped = false;
  {
    std::array<double, kTrendDegree + 1> coef{};
    if (trend_poly(u, w, coef)) {
      double q_min = std::numeric_limits<double>::infinity(), q_max = -q_min;
      for (std::size_t i = 0; i < n; ++i) {
        const double q = eval_poly(coef, u[i]);
        q_min = std::min(q_min, q);
        q_max = std::max(q_max, q);
      }
      const double q_first = eval_poly(coef, u.front());
      const double q_last = eval_poly(coef, u.back());
      const double bump = q_max - std::max(q_first, q_last);
      const double dip = std::min(q_first, q_last) - q_min;
      flipped = dip > bump;
    }
  }
  if (flipped)
    for (double& wi : w) wi = 1.0 - wi;

  const Periodogram pg = spectrum_peak(u, w);

  // initial envelope from the centroid of the (nonnegative) trace
  double mass = 0.0, centroid = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mass += w[i];
    centroid += u[i] * w[i];
  }
  centroid = mass > 0.0 ? centroid / mass : 0.0;
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) var += (u[i] - centroid) * (u[i] - centroid) * w[i];
  var = mass > 0.0 ? var / mass : 1.0;

  double min_step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < n; ++i) min_step = std::min(min_step, u[i] - u[i - 1]);

  const double kappa0 = 1.0 / std::max(var, min_step * min_step);

  Params p;
  p[1] = centroid;
  p[2] = std::min(kappa0, 100.0);
  p[3] = 0.5;
  p[4] = pg.period;
  p[5] = pg.phase;
  p[6] = 0.0;
  p[0] = std::max(0.1, 1.0 / (1.0 + p[3]));

  const double kappa_max = 16.0 / (min_step * min_step);
  const Params lo = {1e-8, -4.0, 0.0, 0.0, 1.9 * min_step, -3.0 * M_PI, -2.0};
  const Params hi = {1e4, 4.0, kappa_max, 1.0, 4.0, 3.0 * M_PI, 3.0};
  for (int j = 0; j < kNumParams; ++j) p[j] = std::clamp(p[j], lo[j], hi[j]);

  const LmOutcome full = run_lm(u, w, p, lo, hi);

  // second gate: a fringe-free envelope must explain the data markedly worse,
  // or the spectral peak was leakage from a smooth structure
  {
    Params p0 = p;
    p0[3] = 0.0;
    Params lo0 = lo, hi0 = hi;
    lo0[3] = hi0[3] = 0.0;       // visibility pinned to zero
    lo0[4] = hi0[4] = p[4];      // period and phase are inert without a fringe
    lo0[5] = hi0[5] = p[5];
    const LmOutcome fringeless = run_lm(u, w, p0, lo0, hi0, false);
    const double floor = static_cast<double>(n) * 1e-24;
    const bool explained_without_fringe =
        fringeless.cost <= floor || fringeless.cost < 9.0 * std::max(full.cost, floor);
    if (explained_without_fringe)
      throw NoFringeError("fringe fit: a fringe-free envelope explains the trace (model SNR below 3)");
  }

  p = full.p;
  const double cost = full.cost;
  const int iterations = full.iterations;
  const Model model;

  // covariance from the undamped normal equations at the solution
  std::array<std::array<double, kNumParams>, kNumParams> hess{}, work{};
  {
    double row[kNumParams];
    for (std::size_t i = 0; i < n; ++i) {
      model.jacobian_row(p, u[i], row);
      for (int a = 0; a < kNumParams; ++a)
        for (int b = a; b < kNumParams; ++b) hess[a][b] += row[a] * row[b];
    }
    for (int a = 0; a < kNumParams; ++a)
      for (int b = 0; b < a; ++b) hess[a][b] = hess[b][a];
  }
  work.fill({});
  for (int a = 0; a < kNumParams; ++a) work[a][a] = 1.0;
  auto lhs = hess;
  const bool invertible = solve_inplace(lhs, work, kNumParams);
  const double dof = static_cast<double>(n) - kNumParams;
  const double sigma2 = dof > 0 ? cost / dof : 0.0;
  auto variance = [&](int a) {
    return invertible ? std::max(0.0, sigma2 * work[a][a]) : std::numeric_limits<double>::quiet_NaN();
  };

  FringeFit fit;
  fit.period = p[4] * x_scale;
  fit.period_stderr = std::sqrt(variance(4)) * x_scale;
  fit.visibility = p[3];
  fit.envelope_center = x_mid + p[1] * x_scale;
  fit.center_stderr = std::sqrt(variance(1)) * x_scale;
  fit.envelope_width = p[2] > 0.0 ? x_scale / std::sqrt(p[2])
                                  : std::numeric_limits<double>::infinity();
  fit.amplitude = (flipped ? -p[0] : p[0]) * v_range;
  fit.baseline = (flipped ? 1.0 - p[6] : p[6]) * v_range + v_lo;
  fit.residual_rms = std::sqrt(cost / static_cast<double>(n)) * v_range;
  fit.spectral_snr = pg.snr;
  fit.iterations = iterations;

  // phase back at x = 0: theta = 2 pi u/period' + phi' with u = (x - x_mid)/s
  const double dphi_dperiod = 2.0 * M_PI * x_mid / (x_scale * p[4] * p[4]);
  fit.phase_offset = wrap_pi(p[5] - 2.0 * M_PI * x_mid / (x_scale * p[4]));
  const double cov_phase_period = invertible ? sigma2 * work[5][4] : std::numeric_limits<double>::quiet_NaN();
  fit.phase_stderr = std::sqrt(std::max(
      0.0, variance(5) + dphi_dperiod * dphi_dperiod * variance(4) + 2.0 * dphi_dperiod * cov_phase_period));
  return fit;
}

double fringe_shift(const FringeFit& a, const FringeFit& b) {
  const double tol = 3.0 * std::hypot(a.period_stderr, b.period_stderr) +
                     1e-6 * 0.5 * (a.period + b.period);
  if (std::abs(a.period - b.period) > tol)
    throw IncompatiblePeriodsError("fringe shift: the two fits have incompatible periods");
  const double period = 0.5 * (a.period + b.period);
  // b displaced by +s means phi_b = phi_a - 2 pi s / period
  const double s0 = -(b.phase_offset - a.phase_offset) * period / (2.0 * M_PI);
  const double wrapped = s0 - period * std::round(s0 / period);  // (-P/2, P/2], odd at the edges
  const double dc = b.envelope_center - a.envelope_center;
  return wrapped + period * std::round((dc - wrapped) / period);
}

SensingEstimate invert_period(double period, double period_stderr, const OpticalSetup& setup,
                              FringeAxis axis) {
  if (!(period > 0.0) || !std::isfinite(period))
    throw std::invalid_argument("invert_period: period must be positive and finite");
  setup.validate();
  const bool mask_scan = axis == FringeAxis::mask_C_center || axis == FringeAxis::mask_T_center;
  const double lever = mask_scan ? setup.wavelength * setup.z : setup.wavelength * setup.focal_length;
  SensingEstimate est;
  est.d_estimate = lever / period;
  const double rel = period_stderr / period;
  est.d_variance = est.d_estimate * est.d_estimate * rel * rel;
  est.shift_estimate = 0.0;
  est.shift_variance = 0.0;
  return est;
}

SensingEstimate sense_pair(const FringeFit& reference, const FringeFit& displaced,
                           const OpticalSetup& setup, FringeAxis axis) {
  SensingEstimate est = invert_period(reference.period, reference.period_stderr, setup, axis);
  est.shift_estimate = fringe_shift(reference, displaced);
  const double period = 0.5 * (reference.period + displaced.period);
  const double scale = period / (2.0 * M_PI);
  est.shift_variance = scale * scale * (reference.phase_stderr * reference.phase_stderr +
                                        displaced.phase_stderr * displaced.phase_stderr);
  est.d_shift_covariance = 0.0;
  return est;
}

}  // namespace ghostfringe
