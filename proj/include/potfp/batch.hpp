#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>
#include <vector>

#include "potfp/equilibria.hpp"
#include "potfp/potential.hpp"
#include "potfp/rate.hpp"
#include "potfp/rng.hpp"
#include "potfp/simulate.hpp"

namespace potfp {

struct BatchConfig {
  std::vector<std::vector<int>> shapes = {{2, 2}};  // cycled across games
  int n_games = 100;
  int n_inits = 20;
  std::uint64_t seed = 1;
  double horizon = 50.0;
  Tolerances tol{};
  int lock_samples = 1000;  // per-equilibrium neighborhood certification
  int jobs = 1;
};

struct RunRecord {
  int game_index = 0;
  int init_index = 0;
  SimStatus status = SimStatus::HorizonReached;
  bool pure_limit = false;
  int n_segments = 0;
  int n_events = 0;
  double tau = 0.0;
  double c = 0.0;
  double lock_margin = 0.0;
  bool bound_ok = false;
  double worst_slack = 0.0;
  double post_lock_dev = 0.0;
  double min_ascent = 0.0;  // most negative within-segment potential step
  bool fit_ok = false;
  double lambda = 0.0;
  double r_squared = 0.0;
};

struct LockCertification {
  std::vector<int> vertex;  // 0-based actions of the strict pure NE
  bool ok = false;
  double radius = 0.0;
  double margin = 0.0;
};

struct GameRecord {
  int game_index = 0;
  std::vector<int> shape;
  std::uint64_t game_seed = 0;
  int n_equilibria = 0;
  int n_pure = 0;
  int n_strict = 0;
  bool all_regular = false;
  bool locks_ok = false;
  std::vector<LockCertification> locks;
  std::vector<RunRecord> runs;
};

struct BatchResult {
  BatchConfig config;
  std::vector<GameRecord> games;
};

// Uniform initial condition on X: per player, a uniform draw from the full
// simplex pushed through the coordinate map.
inline XProfile sample_x0(const std::vector<int>& counts,
                          std::mt19937_64& eng) {
  SimplexProfile s;
  for (int c : counts)
    s.weights.push_back(draw_simplex(eng, static_cast<std::size_t>(c)));
  return from_simplex(s);
}

// Certify the best-response lock around a strict pure equilibrium, shrinking
// the radius (starting from half the distance to the nearest other
// equilibrium) until every sample confirms the lock.
inline LockCertification certify_lock(
    const PotentialGame& pg, const EquilibriumRecord& eq,
    const std::vector<EquilibriumRecord>& all, int n_samples,
    std::uint64_t seed) {
  LockCertification cert;
  for (const auto& s : eq.support) cert.vertex.push_back(s[0]);
  double r = 0.25;
  for (const auto& other : all) {
    const double d = distance(eq.profile, other.profile);
    if (d > 1e-9) r = std::min(r, d / 2.0);
  }
  for (int attempt = 0; attempt < 60; ++attempt) {
    LockCheck chk = verify_local_br_lock(pg, eq.profile, r, n_samples, seed);
    if (chk.ok) {
      cert.ok = true;
      cert.radius = r;
      cert.margin = chk.min_margin;
      return cert;
    }
    r *= 0.5;
  }
  return cert;
}

namespace detail {

inline RunRecord analyze_run(const PotentialGame& pg, const Trajectory& traj,
                             const std::vector<EquilibriumRecord>& eqs,
                             const Tolerances& tol, int game_index,
                             int init_index) {
  RunRecord run;
  run.game_index = game_index;
  run.init_index = init_index;
  run.status = traj.status;
  run.n_segments = static_cast<int>(traj.segments.size());
  run.n_events = static_cast<int>(traj.events.size());

  // Within-segment potential monotonicity on the standard sampling grid.
  double min_ascent = 0.0;
  for (const auto& seg : traj.segments) {
    constexpr int kSamples = 201;
    double prev = 0.0;
    for (int j = 0; j <= kSamples; ++j) {
      const double t =
          seg.t_start + (seg.t_end - seg.t_start) * j / kSamples;
      const double u = expected_potential(pg, seg.at(t));
      if (j > 0) min_ascent = std::min(min_ascent, u - prev);
      prev = u;
    }
  }
  run.min_ascent = min_ascent;

  if (traj.status == SimStatus::Converged) {
    run.pure_limit = true;  // the locked target is a vertex by construction
    RateCertificate cert = rate_certificate(traj);
    run.tau = cert.tau;
    run.c = cert.c;
    run.lock_margin = cert.lock_margin;
    BoundCheck bound = verify_bound(traj, cert, eqs, tol.equilibrium);
    run.bound_ok = bound.ok;
    run.worst_slack = bound.worst_slack;
    run.post_lock_dev = post_lock_deviation(traj);
    if (auto fit = fit_decay(traj, cert.tau)) {
      run.fit_ok = true;
      run.lambda = fit->lambda;
      run.r_squared = fit->r_squared;
    }
  }
  return run;
}

inline GameRecord analyze_game(const BatchConfig& cfg, int g) {
  GameRecord rec;
  rec.game_index = g;
  rec.shape = cfg.shapes[g % cfg.shapes.size()];
  rec.game_seed = substream(cfg.seed, "game", static_cast<std::uint64_t>(g))();
  PotentialGame pg = sample_potential_game(rec.shape, rec.game_seed);

  std::vector<EquilibriumRecord> eqs = enumerate_all_nash(pg);
  rec.n_equilibria = static_cast<int>(eqs.size());
  rec.all_regular = true;
  rec.locks_ok = true;
  for (const auto& eq : eqs) {
    if (eq.kind == EqKind::pure) ++rec.n_pure;
    if (eq.strict) ++rec.n_strict;
    if (!eq.regular) rec.all_regular = false;
  }
  int eq_idx = 0;
  for (const auto& eq : eqs) {
    ++eq_idx;
    if (!(eq.kind == EqKind::pure && eq.strict)) continue;
    const std::uint64_t lock_seed =
        substream(cfg.seed, "lock",
                  static_cast<std::uint64_t>(g) * 1000 + eq_idx)();
    LockCertification lc =
        certify_lock(pg, eq, eqs, cfg.lock_samples, lock_seed);
    if (!lc.ok) rec.locks_ok = false;
    rec.locks.push_back(std::move(lc));
  }

  for (int j = 0; j < cfg.n_inits; ++j) {
    auto eng = substream(cfg.seed, "init",
                         static_cast<std::uint64_t>(g) * 100000 + j);
    XProfile x0 = sample_x0(pg.game.action_counts, eng);
    SimOptions opts;
    opts.tol = cfg.tol;
    opts.lock_seed = substream(cfg.seed, "run-lock",
                               static_cast<std::uint64_t>(g) * 100000 + j)();
    Trajectory traj = simulate_fp(pg, x0, cfg.horizon, opts);
    rec.runs.push_back(detail::analyze_run(pg, traj, eqs, cfg.tol, g, j));
  }
  return rec;
}

}  // namespace detail

inline BatchResult run_batch(const BatchConfig& cfg) {
  BatchResult result;
  result.config = cfg;
  result.games.resize(cfg.n_games);
  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    for (int g = 0; g < cfg.n_games; ++g)
      result.games[g] = detail::analyze_game(cfg, g);
  } else {
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w)
      workers.emplace_back([&, w] {
        for (int g = w; g < cfg.n_games; g += jobs)
          result.games[g] = detail::analyze_game(cfg, g);
      });
    for (auto& t : workers) t.join();
  }
  return result;
}

}  // namespace potfp
