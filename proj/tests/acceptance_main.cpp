// Acceptance gate: one pass/fail line per criterion, exit code = #failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "euler_oracle.hpp"
#include "fixtures.hpp"
#include "potfp/potfp.hpp"

using namespace potfp;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int g_failures = 0;

void report(int index, const std::string& name, bool ok,
            const std::string& detail) {
  std::printf("criterion %d (%s): %s%s%s\n", index, name.c_str(),
              ok ? "PASS" : "FAIL", detail.empty() ? "" : " -- ",
              detail.c_str());
  if (!ok) ++g_failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return buf;
}

// --- criterion 1: hand-derived fixtures on the 2x2 identity coordination game
void criterion_fixtures() {
  const auto t0 = Clock::now();
  auto pg = fixtures::identity_coordination();
  bool ok = true;
  std::string detail;

  {
    Trajectory traj = simulate_fp(pg, XProfile{{{0.2}, {0.3}}});
    RateCertificate cert = rate_certificate(traj);
    const bool here = traj.status == SimStatus::Converged &&
                      traj.limit.has_value() &&
                      traj.limit->coords[0][0] == 0.0 &&
                      traj.limit->coords[1][0] == 0.0 &&
                      std::abs(cert.tau) <= 1e-9 &&
                      std::abs(cert.c - std::sqrt(0.13)) <= 1e-9;
    if (!here) {
      ok = false;
      detail += "x0=(0.2,0.3): " + fmt("tau=%.3e c=%.12f; ", cert.tau, cert.c);
    }
  }
  {
    Trajectory traj = simulate_fp(pg, XProfile{{{0.4}, {0.7}}});
    const bool here =
        traj.status == SimStatus::Converged && traj.events.size() == 1 &&
        std::abs(traj.events[0].time - std::log(1.2)) <= 1e-9 &&
        traj.limit.has_value() && traj.limit->coords[0][0] == 1.0 &&
        traj.limit->coords[1][0] == 1.0;
    if (!here) {
      ok = false;
      detail += "x0=(0.4,0.7): events=" + std::to_string(traj.events.size()) +
                "; ";
    }
  }
  {
    Trajectory traj = simulate_fp(pg, XProfile{{{0.4}, {0.6}}});
    const bool here =
        traj.status == SimStatus::MixedEquilibriumReached &&
        traj.limit.has_value() &&
        std::abs(traj.limit->coords[0][0] - 0.5) <= 1e-9 &&
        std::abs(traj.limit->coords[1][0] - 0.5) <= 1e-9 &&
        !traj.segments.empty() &&
        std::abs(traj.segments.back().t_end - std::log(1.2)) <= 1e-9;
    if (!here) {
      ok = false;
      detail += std::string("x0=(0.4,0.6): status=") + to_string(traj.status) +
                "; ";
    }
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= 1.0) {
    ok = false;
    detail += fmt("runtime %.2fs >= 1s", elapsed);
  }
  report(1, "fixture exactness", ok, detail);
}

// --- criteria 2,3,4,5,8,9 all quantify over one shared batch
struct BatchFindings {
  BatchResult result;
  double elapsed = 0.0;
};

BatchFindings run_acceptance_batch() {
  BatchConfig cfg;
  cfg.shapes = {{2, 2}, {2, 3}, {3, 2}, {3, 3}, {2, 2, 2}};
  cfg.n_games = 100;
  cfg.n_inits = 20;
  cfg.seed = 1;
  cfg.horizon = 50.0;
  cfg.lock_samples = 1000;
  const auto t0 = Clock::now();
  BatchFindings f;
  f.result = run_batch(cfg);
  f.elapsed = seconds_since(t0);
  return f;
}

void criterion_bound(const BatchFindings& f) {
  bool ok = true;
  std::string detail;
  int checked = 0;
  double worst_dev = 0.0;
  for (const auto& game : f.result.games)
    for (const auto& run : game.runs) {
      if (run.status != SimStatus::Converged) continue;
      ++checked;
      worst_dev = std::max(worst_dev, run.post_lock_dev);
      if (!run.bound_ok) {
        ok = false;
        detail = "bound violated at game " + std::to_string(run.game_index) +
                 " init " + std::to_string(run.init_index);
      }
    }
  if (worst_dev > 1e-12) {
    ok = false;
    detail += fmt("max post-lock deviation %.3e; ", worst_dev);
  }
  if (f.elapsed >= 120.0) {
    ok = false;
    detail += fmt("batch runtime %.1fs >= 120s", f.elapsed);
  }
  if (ok)
    detail = std::to_string(checked) + " runs, " +
             fmt("max dev %.2e, %.1fs", worst_dev, f.elapsed);
  report(2, "certificate bound on 100x20 batch", ok, detail);
}

void criterion_pure_convergence(const BatchFindings& f) {
  int converged = 0, mixed = 0, horizon = 0, total = 0;
  for (const auto& game : f.result.games)
    for (const auto& run : game.runs) {
      ++total;
      if (run.status == SimStatus::Converged && run.pure_limit)
        ++converged;
      else if (run.status == SimStatus::MixedEquilibriumReached)
        ++mixed;
      else
        ++horizon;
    }
  const bool ok = total == 2000 && converged == 2000;
  report(3, "pure convergence statistics", ok,
         std::to_string(converged) + "/" + std::to_string(total) +
             " converged pure, " + std::to_string(mixed) + " mixed, " +
             std::to_string(horizon) + " horizon");
}

void criterion_regularity(const BatchFindings& f) {
  int regular = 0;
  for (const auto& game : f.result.games)
    if (game.all_regular) ++regular;
  const bool ok = regular == static_cast<int>(f.result.games.size());
  report(4, "all sampled games regular", ok,
         std::to_string(regular) + "/" +
             std::to_string(f.result.games.size()) + " games");
}

void criterion_locks(const BatchFindings& f) {
  bool ok = true;
  int n_locks = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  std::string detail;
  for (const auto& game : f.result.games) {
    if (static_cast<int>(game.locks.size()) != game.n_strict) ok = false;
    for (const auto& lock : game.locks) {
      ++n_locks;
      min_margin = std::min(min_margin, lock.margin);
      if (!lock.ok || !(lock.margin > 0.0)) {
        ok = false;
        detail = "lock failed at game " + std::to_string(game.game_index);
      }
    }
  }
  if (n_locks == 0) {
    ok = false;
    detail = "no strict equilibria certified";
  }
  if (ok)
    detail = std::to_string(n_locks) + " locks, " +
             fmt("min margin %.3e", min_margin);
  report(5, "best-response locks at strict equilibria", ok, detail);
}

void criterion_euler(void) {
  const std::vector<std::vector<int>> shapes = {
      {2, 2}, {2, 3}, {3, 2}, {3, 3}};
  double worst = 0.0;
  bool ok = true;
  for (int i = 0; i < 50; ++i) {
    PotentialGame pg = sample_potential_game(shapes[i % shapes.size()],
                                             1000 + static_cast<std::uint64_t>(i));
    auto eng = substream(2026, "euler", static_cast<std::uint64_t>(i));
    XProfile x0 = sample_x0(pg.game.action_counts, eng);
    Trajectory traj = simulate_fp(pg, x0, 10.0);
    oracle::EulerPath path = oracle::euler_fp(pg, x0, 10.0, 1e-4);
    const double gap = oracle::sup_gap(path, traj);
    worst = std::max(worst, gap);
    if (gap > 1e-3) ok = false;
  }
  report(6, "Euler oracle agreement", ok,
         fmt("sup gap %.3e over 50 games", worst));
}

void criterion_potential_machinery(void) {
  bool ok = true;
  std::string detail;

  double worst = 0.0;
  const std::vector<std::vector<int>> shapes = {{2, 2}, {3, 3}, {2, 2, 2}};
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
    for (const auto& shape : shapes) {
      PotentialGame pg = sample_potential_game(shape, seed);
      PotentialGame re = extract_potential(pg.game);
      const double shift = pg.potential[0] - re.potential[0];
      for (std::size_t fidx = 0; fidx < pg.potential.size(); ++fidx)
        worst = std::max(
            worst, std::abs(re.potential[fidx] + shift - pg.potential[fidx]));
    }
  if (worst > 1e-10) {
    ok = false;
    detail += fmt("round-trip deviation %.3e; ", worst);
  }

  bool pennies_rejected = false;
  double violation = 0.0;
  try {
    extract_potential(fixtures::matching_pennies());
  } catch (const NotPotentialGame& e) {
    pennies_rejected = true;
    violation = e.max_violation;
  }
  if (!pennies_rejected || !(violation > 0.0)) {
    ok = false;
    detail += "matching pennies not rejected; ";
  }

  const bool dims = param_dim({2, 2}) == 9 && param_dim({3, 3}) == 16 &&
                    param_dim({2, 2, 2}) == 22;
  if (!dims) {
    ok = false;
    detail += "param_dim mismatch; ";
  }
  if (ok)
    detail = fmt("round-trip %.2e, ", worst) +
             fmt("pennies violation %.1f, dims 9/16/22", violation);
  report(7, "potential machinery", ok, detail);
}

void criterion_ascent(const BatchFindings& f) {
  double min_ascent = 0.0;
  for (const auto& game : f.result.games)
    for (const auto& run : game.runs)
      min_ascent = std::min(min_ascent, run.min_ascent);
  const bool ok = min_ascent >= -1e-10;
  report(8, "potential ascent along segments", ok,
         fmt("min step %.3e", min_ascent));
}

void criterion_rate_fit(const BatchFindings& f) {
  bool ok = true;
  double worst = 0.0;
  int fitted = 0;
  std::string detail;
  for (const auto& game : f.result.games)
    for (const auto& run : game.runs) {
      if (run.status != SimStatus::Converged) continue;
      if (!run.fit_ok) {
        ok = false;
        detail = "no fit at game " + std::to_string(run.game_index) +
                 " init " + std::to_string(run.init_index);
        continue;
      }
      ++fitted;
      worst = std::max(worst, std::abs(run.lambda - 1.0));
    }
  if (worst > 1e-6) ok = false;
  if (detail.empty())
    detail = std::to_string(fitted) + " fits, " +
             fmt("max |lambda-1| %.3e", worst);
  report(9, "post-lock decay rate", ok, detail);
}

}  // namespace

int main() {
  criterion_fixtures();
  BatchFindings batch = run_acceptance_batch();
  criterion_bound(batch);
  criterion_pure_convergence(batch);
  criterion_regularity(batch);
  criterion_locks(batch);
  criterion_euler();
  criterion_potential_machinery();
  criterion_ascent(batch);
  criterion_rate_fit(batch);
  std::printf("%d/9 criteria passed\n", 9 - g_failures);
  return g_failures;
}
