#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "potfp/equilibria.hpp"
#include "potfp/potential.hpp"

namespace potfp {

enum class SimStatus { Converged, MixedEquilibriumReached, HorizonReached };

inline const char* to_string(SimStatus s) {
  switch (s) {
    case SimStatus::Converged: return "Converged";
    case SimStatus::MixedEquilibriumReached: return "MixedEquilibriumReached";
    default: return "HorizonReached";
  }
}

// One exponential arc: x(t) = target + (x_start - target) e^{-(t - t_start)}.
struct Segment {
  double t_start = 0.0;
  double t_end = 0.0;
  XProfile x_start;
  XProfile target;                  // the active best-response vertex b
  std::vector<int> target_actions;  // 0-based action per player

  XProfile at(double t) const {
    const double s = std::exp(-(t - t_start));
    XProfile x = target;
    for (std::size_t i = 0; i < x.coords.size(); ++i)
      for (std::size_t k = 0; k < x.coords[i].size(); ++k)
        x.coords[i][k] += (x_start.coords[i][k] - target.coords[i][k]) * s;
    return x;
  }
};

struct PlayerSwitch {
  int player = 0;                // 0-based
  std::vector<int> before, after;  // argmax sets around the event
};

struct SwitchEvent {
  double time = 0.0;
  std::vector<PlayerSwitch> changes;
};

struct Trajectory {
  std::vector<Segment> segments;
  std::vector<SwitchEvent> events;
  SimStatus status = SimStatus::HorizonReached;
  std::optional<XProfile> limit;
  double horizon = 0.0;
  double lock_margin = 0.0;  // from the final lock certification (Converged)

  XProfile at(double t) const {
    if (segments.empty()) {
      if (limit) return *limit;  // captured at t = 0
      throw Error("empty trajectory");
    }
    for (const auto& seg : segments)
      if (t <= seg.t_end || &seg == &segments.back()) return seg.at(t);
    return segments.back().at(t);
  }
};

struct SimOptions {
  Tolerances tol{};
  int lock_samples = 200;        // samples for the in-run lock certification
  std::uint64_t lock_seed = 1;
  double conv_dist = 1e-9;       // d(x(horizon), x*) below which we declare
                                 // convergence in the locked segment
  int max_events = 100000;
};

inline XProfile segment_solution(const XProfile& x0, const XProfile& b,
                                 double dt) {
  const double s = std::exp(-dt);
  XProfile x = b;
  for (std::size_t i = 0; i < x.coords.size(); ++i)
    for (std::size_t k = 0; k < x.coords[i].size(); ++k)
      x.coords[i][k] += (x0.coords[i][k] - b.coords[i][k]) * s;
  return x;
}

namespace detail {

// Point on the arc parameterized by s = e^{-dt} in [0, 1]; avoids exp/log.
inline XProfile arc_at_s(const XProfile& x0, const XProfile& b, double s) {
  XProfile x = b;
  for (std::size_t i = 0; i < x.coords.size(); ++i)
    for (std::size_t k = 0; k < x.coords[i].size(); ++k)
      x.coords[i][k] += (x0.coords[i][k] - b.coords[i][k]) * s;
  return x;
}

// Along an arc, U(y_i^k, x_{-i}(s)) is a polynomial in s of degree <= N-1.
// Recover monomial coefficients per player/action by sampling the arc at N
// nodes and solving the (tiny, well-conditioned) Vandermonde system.
struct GapPolys {
  // coeffs[i](k, m): coefficient of s^m in player i's action-k value.
  std::vector<Eigen::MatrixXd> coeffs;

  GapPolys(const PotentialGame& pg, const XProfile& x0, const XProfile& b) {
    const int n = pg.game.n_players;
    std::vector<double> nodes(n);
    for (int m = 0; m < n; ++m)
      nodes[m] = n == 1 ? 0.0 : static_cast<double>(m) / (n - 1);
    Eigen::MatrixXd vand(n, n);
    for (int r = 0; r < n; ++r)
      for (int m = 0; m < n; ++m) vand(r, m) = std::pow(nodes[r], m);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(vand);

    std::vector<std::vector<std::vector<double>>> samples(n);
    for (int r = 0; r < n; ++r) {
      SimplexProfile sp = to_simplex(arc_at_s(x0, b, nodes[r]),
                                     1e-9 /* arc rounding slack */);
      for (int i = 0; i < n; ++i) {
        auto av = action_values(pg.potential, pg.game.action_counts, i,
                                sp.weights);
        samples[i].push_back(std::move(av));
      }
    }
    coeffs.resize(n);
    for (int i = 0; i < n; ++i) {
      const int ki = pg.game.action_counts[i];
      Eigen::MatrixXd rhs(n, ki);
      for (int r = 0; r < n; ++r)
        for (int k = 0; k < ki; ++k) rhs(r, k) = samples[i][r][k];
      coeffs[i] = lu.solve(rhs).transpose();  // ki x n
    }
  }

  // g_{i,k}(s) = value(b_i) - value(k), by Horner on the coefficient diff.
  double gap(int player, int b_action, int other, double s) const {
    const auto& c = coeffs[player];
    double acc = 0.0;
    for (int m = static_cast<int>(c.cols()) - 1; m >= 0; --m)
      acc = acc * s + (c(b_action, m) - c(other, m));
    return acc;
  }
};

struct SwitchHit {
  double dt = 0.0;
  std::vector<int> players;  // players whose argmax set changes
};

// First argmax change along the arc from x0 toward vertex b, searched in
// s = e^{-dt} over [e^{-duration}, 1).  Gaps that vanish at s = 1 (a tie at
// the segment start) are "armed": the scan first finds where the gap becomes
// decisively positive just below s = 1 and only then looks for the next sign
// change, so the root cluster at the start is skipped.
inline std::optional<SwitchHit> locate_switch(const PotentialGame& pg,
                                              const XProfile& x0,
                                              const std::vector<int>& b_actions,
                                              const XProfile& b,
                                              double duration,
                                              double time_tol) {
  if (duration <= time_tol) return std::nullopt;
  const double arm_tol = default_tolerances().tie;
  GapPolys polys(pg, x0, b);
  const double s_min = std::exp(-duration);

  constexpr int kGrid = 64;
  std::vector<double> grid(kGrid + 1);
  for (int j = 0; j <= kGrid; ++j)
    grid[j] = s_min + (1.0 - s_min) * j / kGrid;  // ascending; grid[64] = 1

  double best_s = -1.0;  // largest root s* over all gaps
  std::vector<std::pair<int, double>> roots;  // (player, root s)

  for (int i = 0; i < pg.game.n_players; ++i) {
    for (int k = 0; k < pg.game.action_counts[i]; ++k) {
      if (k == b_actions[i]) continue;
      auto g = [&](double s) { return polys.gap(i, b_actions[i], k, s); };

      // Build the descending scan list below the "decisively positive"
      // anchor.
      std::vector<double> scan;
      double anchor = 1.0;
      if (g(1.0) > arm_tol) {
        for (int j = kGrid - 1; j >= 0; --j) scan.push_back(grid[j]);
      } else {
        // Tied (or worse) at the start: refine the top subinterval to find
        // where the gap opens, then continue on the coarse grid.
        anchor = -1.0;
        int fine_at = -1;
        for (int m = kGrid - 1; m >= 0; --m) {
          const double s =
              grid[kGrid - 1] + (1.0 - grid[kGrid - 1]) * m / kGrid;
          if (g(s) > arm_tol) {
            anchor = s;
            fine_at = m;
            break;
          }
        }
        if (anchor < 0.0) {
          // Never opens near the start; look further down the coarse grid.
          int j = kGrid - 1;
          while (j >= 0 && g(grid[j]) <= arm_tol) --j;
          if (j < 0) continue;  // gap hovers at/below zero: no usable crossing
          anchor = grid[j];
          for (int jj = j - 1; jj >= 0; --jj) scan.push_back(grid[jj]);
        } else {
          for (int m = fine_at - 1; m >= 0; --m)
            scan.push_back(grid[kGrid - 1] +
                           (1.0 - grid[kGrid - 1]) * m / kGrid);
          for (int j = kGrid - 2; j >= 0; --j) scan.push_back(grid[j]);
        }
      }

      double hi = anchor;  // g(hi) > 0
      double root = -1.0;
      for (double lo : scan) {
        if (g(lo) <= 0.0) {
          // Bisect [lo, hi] down to time precision |ln(hi/lo)| <= time_tol.
          while (std::log(hi / lo) > time_tol) {
            const double mid = 0.5 * (lo + hi);
            if (g(mid) <= 0.0)
              lo = mid;
            else
              hi = mid;
          }
          root = 0.5 * (lo + hi);
          break;
        }
        hi = lo;
      }
      if (root < 0.0) continue;
      roots.emplace_back(i, root);
      best_s = std::max(best_s, root);
    }
  }
  if (best_s < 0.0) return std::nullopt;

  SwitchHit hit;
  hit.dt = -std::log(best_s);
  for (auto [player, s] : roots) {
    const double dt = -std::log(s);
    if (dt <= hit.dt + time_tol &&
        std::find(hit.players.begin(), hit.players.end(), player) ==
            hit.players.end())
      hit.players.push_back(player);
  }
  std::sort(hit.players.begin(), hit.players.end());
  return hit;
}

// Forward-consistent tie resolution: among the argmax product's vertices (in
// lexicographic order), pick the first whose own flow immediately confirms it
// — the best response at a point probed slightly along the arc toward the
// candidate is the candidate itself.  Falls back to the lexicographically
// smallest candidate if none confirms.
inline std::vector<int> select_tie_target(const PotentialGame& pg,
                                          const XProfile& x,
                                          const BestResponseSet& br,
                                          const Tolerances& tol) {
  const int n = pg.game.n_players;
  std::vector<int> first;
  for (int i = 0; i < n; ++i) first.push_back(br.actions[i][0]);
  // The probe classifies with a machine-precision tolerance: just past the
  // tie the winning gap is of order slope * dt, often far below the
  // structural tie tolerance, yet its sign is exact arithmetic on the arc.
  // The step escalates in case the gap grows slower than first order.
  constexpr double kProbeTie = 1e-14;
  for (double dt_probe = std::max(1e-7, 10.0 * tol.time); dt_probe <= 1e-3;
       dt_probe *= 100.0) {
    std::vector<std::size_t> idx(n, 0);
    for (;;) {
      std::vector<int> cand(n);
      for (int i = 0; i < n; ++i) cand[i] = br.actions[i][idx[i]];
      XProfile b = vertex_profile(pg.game, cand);
      XProfile probe = segment_solution(x, b, dt_probe);
      BestResponseSet pbr = best_response_set(pg, probe, kProbeTie);
      if (pbr.singleton() && pbr.vertex_actions() == cand) return cand;
      int i = n - 1;
      while (i >= 0 && ++idx[i] == br.actions[i].size()) idx[i--] = 0;
      if (i < 0) break;
    }
  }
  return first;
}

}  // namespace detail

// First time in (0, duration] at which some player's argmax set changes along
// the arc from x0 toward b; none if the best response stays put.
inline std::optional<double> next_switch_time(
    const PotentialGame& pg, const XProfile& x0, const XProfile& b,
    double duration, double time_tol = default_tolerances().time) {
  BestResponseSet br = best_response_set(pg, x0, default_tolerances().tie);
  if (!br.singleton())
    throw DegenerateSegment("argmax at the segment start is not a singleton");
  auto hit = detail::locate_switch(pg, x0, br.vertex_actions(), b, duration,
                                   time_tol);
  if (!hit) return std::nullopt;
  return hit->dt;
}

inline Trajectory simulate_fp(const PotentialGame& pg, const XProfile& x0,
                              double horizon = 50.0,
                              const SimOptions& opts = SimOptions{}) {
  if (pg.potential.size() != pg.game.joint_count())
    throw NonPotentialInput("potential tensor size mismatch");
  validate_x(x0, opts.tol.simplex);

  Trajectory traj;
  traj.horizon = horizon;
  double t = 0.0;
  XProfile x = x0;

  for (;;) {
    BestResponseSet br = best_response_set(pg, x, opts.tol.tie);
    std::vector<int> b_actions;
    if (br.singleton()) {
      b_actions = br.vertex_actions();
    } else {
      if (is_nash(pg, x, opts.tol.equilibrium)) {
        traj.status = SimStatus::MixedEquilibriumReached;
        traj.limit = x;
        return traj;
      }
      b_actions = detail::select_tie_target(pg, x, br, opts.tol);
    }
    XProfile b = vertex_profile(pg.game, b_actions);

    auto hit = detail::locate_switch(pg, x, b_actions, b, horizon - t,
                                     opts.tol.time);
    if (!hit) {
      traj.segments.push_back(Segment{t, horizon, x, b, b_actions});
      XProfile x_end = segment_solution(x, b, horizon - t);
      bool locked = false;
      try {
        EquilibriumRecord rec = classify_equilibrium(pg, b, opts.tol.equilibrium);
        if (rec.kind == EqKind::pure && rec.strict) {
          const double tail = distance(x_end, b);
          LockCheck lock = verify_local_br_lock(
              pg, b, std::max(tail, 1e-12), opts.lock_samples, opts.lock_seed);
          if (lock.ok && tail < opts.conv_dist) {
            locked = true;
            traj.lock_margin = lock.min_margin;
          }
        }
      } catch (const NotAnEquilibrium&) {
      }
      if (locked) {
        traj.status = SimStatus::Converged;
        traj.limit = b;
      } else {
        traj.status = SimStatus::HorizonReached;
      }
      return traj;
    }

    const double te = t + hit->dt;
    traj.segments.push_back(Segment{t, te, x, b, b_actions});
    x = segment_solution(x, b, hit->dt);

    SwitchEvent ev;
    ev.time = te;
    BestResponseSet after = best_response_set(pg, x, opts.tol.tie);
    for (int p : hit->players)
      ev.changes.push_back(PlayerSwitch{p, {b_actions[p]}, after.actions[p]});
    traj.events.push_back(std::move(ev));
    t = te;

    if (t >= horizon - opts.tol.time) {
      traj.status = SimStatus::HorizonReached;
      return traj;
    }
    if (static_cast<int>(traj.events.size()) > opts.max_events)
      throw Error("switch event cap exceeded; dynamics look Zeno");
  }
}

struct LockTime {
  double tau = 0.0;
  XProfile x_star;
};

// tau is the start of the final (locked) segment; afterwards the flow is
// exactly x_dot = -(x - x_star).
inline LockTime detect_lock_time(const Trajectory& traj) {
  if (traj.status != SimStatus::Converged)
    throw NotConverged("lock time requires a Converged trajectory");
  return LockTime{traj.segments.back().t_start, traj.segments.back().target};
}

// Sampling grid used by CSV export, bound checks, and decay fits: both
// endpoints of every segment plus points_per_segment interior points.
inline std::vector<double> sample_times(const Trajectory& traj,
                                        int points_per_segment = 200) {
  std::vector<double> ts;
  for (const auto& seg : traj.segments) {
    const int m = points_per_segment + 1;
    for (int j = 0; j <= m; ++j)
      ts.push_back(seg.t_start + (seg.t_end - seg.t_start) * j / m);
  }
  return ts;
}

}  // namespace potfp
