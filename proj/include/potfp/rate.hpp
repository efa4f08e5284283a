#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "potfp/equilibria.hpp"
#include "potfp/simulate.hpp"

namespace potfp {

struct RateCertificate {
  XProfile x_star;
  double tau = 0.0;
  double c = 0.0;
  double lock_margin = 0.0;
};

inline double distance_to_ne(const XProfile& x,
                             const std::vector<EquilibriumRecord>& equilibria,
                             Metric metric = Metric::euclidean) {
  if (equilibria.empty())
    throw EmptyEquilibriumList("distance to an empty equilibrium set");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& rec : equilibria)
    best = std::min(best, distance(x, rec.profile, metric));
  return best;
}

namespace detail {

// Maximize f on [a, b] by golden-section, to absolute argument tolerance.
template <class F>
double golden_max(F&& f, double a, double b, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  return std::max(f(a), f(b));
}

}  // namespace detail

// Certificate per the lock-time construction: c = e^tau * sup over [0, tau]
// of d(x(t), x_star), the sup located per segment on a 1000-point grid and
// sharpened by golden-section around the grid maximum.
inline RateCertificate rate_certificate(const Trajectory& traj,
                                        Metric metric = Metric::euclidean) {
  LockTime lock = detect_lock_time(traj);
  RateCertificate cert;
  cert.x_star = lock.x_star;
  cert.tau = lock.tau;
  cert.lock_margin = traj.lock_margin;

  double sup = distance(traj.segments.front().x_start, lock.x_star, metric);
  for (const auto& seg : traj.segments) {
    if (seg.t_start >= lock.tau) break;  // the locked segment itself decays
    auto f = [&](double t) { return distance(seg.at(t), lock.x_star, metric); };
    constexpr int kGrid = 1000;
    double best_t = seg.t_start, best_f = -1.0;
    for (int j = 0; j <= kGrid; ++j) {
      const double t =
          seg.t_start + (seg.t_end - seg.t_start) * j / kGrid;
      const double v = f(t);
      if (v > best_f) {
        best_f = v;
        best_t = t;
      }
    }
    const double h = (seg.t_end - seg.t_start) / kGrid;
    const double lo = std::max(seg.t_start, best_t - h);
    const double hi = std::min(seg.t_end, best_t + h);
    sup = std::max(sup, detail::golden_max(f, lo, hi, 1e-10));
  }
  cert.c = std::exp(cert.tau) * sup;
  return cert;
}

struct BoundCheck {
  bool ok = false;
  double worst_slack = 0.0;  // max over the grid of d(x(t),NE) - c e^{-t}
};

inline BoundCheck verify_bound(const Trajectory& traj,
                               const RateCertificate& cert,
                               const std::vector<EquilibriumRecord>& equilibria,
                               double tol = default_tolerances().equilibrium,
                               Metric metric = Metric::euclidean) {
  BoundCheck res;
  res.worst_slack = -std::numeric_limits<double>::infinity();
  for (double t : sample_times(traj)) {
    const double d = distance_to_ne(traj.at(t), equilibria, metric);
    res.worst_slack = std::max(res.worst_slack, d - cert.c * std::exp(-t));
  }
  res.ok = res.worst_slack <= tol;
  return res;
}

struct DecayFit {
  double lambda = 0.0;
  double r_squared = 0.0;
};

// Least-squares slope of log d(x(t), x_star) against t on samples after
// t_from; none when fewer than 10 samples carry a usable positive distance.
// Distances below 1e-10 are excluded: there the vertex-relative coordinates
// round at machine precision and the log samples would bias the slope.
inline std::optional<DecayFit> fit_decay(const Trajectory& traj, double t_from,
                                         Metric metric = Metric::euclidean) {
  if (!traj.limit) return std::nullopt;
  std::vector<double> ts, ys;
  for (double t : sample_times(traj)) {
    if (t < t_from) continue;
    const double d = distance(traj.at(t), *traj.limit, metric);
    if (d <= 1e-10) continue;
    ts.push_back(t);
    ys.push_back(std::log(d));
  }
  if (ts.size() < 10) return std::nullopt;
  const double n = static_cast<double>(ts.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sy += ys[i];
    stt += ts[i] * ts[i];
    sty += ts[i] * ys[i];
  }
  const double denom = n * stt - st * st;
  if (denom == 0.0) return std::nullopt;
  const double slope = (n * sty - st * sy) / denom;
  const double intercept = (sy - slope * st) / n;
  double ss_res = 0.0, ss_tot = 0.0;
  const double ybar = sy / n;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double e = ys[i] - (intercept + slope * ts[i]);
    ss_res += e * e;
    ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
  }
  DecayFit fit;
  fit.lambda = -slope;
  fit.r_squared = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return fit;
}

// Max deviation from exact exponential decay after the lock time:
// sup over post-lock samples of |d(x(t),x*) - d(x(tau),x*) e^{tau - t}|.
inline double post_lock_deviation(const Trajectory& traj,
                                  Metric metric = Metric::euclidean) {
  LockTime lock = detect_lock_time(traj);
  const double d_tau = distance(traj.at(lock.tau), lock.x_star, metric);
  double worst = 0.0;
  for (double t : sample_times(traj)) {
    if (t < lock.tau) continue;
    const double d = distance(traj.at(t), lock.x_star, metric);
    worst = std::max(worst, std::abs(d - d_tau * std::exp(lock.tau - t)));
  }
  return worst;
}

}  // namespace potfp
