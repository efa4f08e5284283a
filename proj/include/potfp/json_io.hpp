#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "potfp/batch.hpp"
#include "potfp/equilibria.hpp"
#include "potfp/potential.hpp"
#include "potfp/rate.hpp"
#include "potfp/simulate.hpp"

// File formats.  Action and player indices are 1-based in every file; the
// in-memory API is 0-based throughout.

namespace potfp {

inline nlohmann::json game_to_json(const Game& g,
                                   const Tensor* potential = nullptr) {
  nlohmann::json j;
  j["players"] = g.n_players;
  j["actions"] = g.action_counts;
  j["utilities"] = g.utilities;
  if (potential) j["potential"] = *potential;
  return j;
}

inline Game game_from_json(const nlohmann::json& j) {
  if (!j.contains("players") || !j.contains("actions") ||
      !j.contains("utilities"))
    throw IOFailure("game JSON needs players, actions, utilities");
  return validate_game(j["players"].get<int>(),
                       j["actions"].get<std::vector<int>>(),
                       j["utilities"].get<std::vector<Tensor>>());
}

// Builds the potential-equipped game: a stored "potential" field is verified,
// otherwise one is extracted (throwing NotPotentialGame if none exists).
inline PotentialGame potential_game_from_json(
    const nlohmann::json& j,
    double tol = default_tolerances().potential_check) {
  Game g = game_from_json(j);
  if (j.contains("potential")) {
    Tensor p = j["potential"].get<Tensor>();
    PotentialCheck chk = check_exact_potential(g, p, tol);
    if (!chk.ok)
      throw NotPotentialGame(
          "stored potential fails the deviation identity by " +
              std::to_string(chk.max_violation),
          chk.max_violation);
    return PotentialGame{std::move(g), std::move(p)};
  }
  return extract_potential(g, tol);
}

inline nlohmann::json x_to_json(const XProfile& x) {
  return nlohmann::json(x.coords);
}

inline nlohmann::json equilibrium_to_json(const EquilibriumRecord& rec) {
  nlohmann::json j;
  j["x"] = rec.profile.coords;
  j["kind"] = rec.kind == EqKind::pure ? "pure" : "mixed";
  j["strict"] = rec.strict;
  j["quasi_strict"] = rec.quasi_strict;
  j["regular"] = rec.regular;
  std::vector<std::vector<int>> support_1based;
  for (const auto& s : rec.support) {
    std::vector<int> v;
    for (int a : s) v.push_back(a + 1);
    support_1based.push_back(std::move(v));
  }
  j["support"] = support_1based;
  return j;
}

inline nlohmann::json equilibria_to_json(
    const std::vector<EquilibriumRecord>& eqs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& rec : eqs) arr.push_back(equilibrium_to_json(rec));
  return arr;
}

inline nlohmann::json certificate_to_json(const RateCertificate& cert,
                                          SimStatus status) {
  nlohmann::json j;
  j["x_star"] = cert.x_star.coords;
  j["tau"] = cert.tau;
  j["c"] = cert.c;
  j["lock_margin"] = cert.lock_margin;
  j["status"] = to_string(status);
  return j;
}

inline nlohmann::json events_to_json(const Trajectory& traj) {
  nlohmann::json j;
  j["status"] = to_string(traj.status);
  if (traj.limit) j["limit"] = traj.limit->coords;
  nlohmann::json evs = nlohmann::json::array();
  for (const auto& ev : traj.events) {
    nlohmann::json e;
    e["time"] = ev.time;
    nlohmann::json changes = nlohmann::json::array();
    for (const auto& ch : ev.changes) {
      nlohmann::json c;
      c["player"] = ch.player + 1;
      std::vector<int> before, after;
      for (int a : ch.before) before.push_back(a + 1);
      for (int a : ch.after) after.push_back(a + 1);
      c["before"] = before;
      c["after"] = after;
      changes.push_back(std::move(c));
    }
    e["changes"] = std::move(changes);
    evs.push_back(std::move(e));
  }
  j["events"] = std::move(evs);
  return j;
}

// CSV columns: t, segment_id, the flattened X coordinates (player-major;
// column xP_A holds player P's weight on action A, A = 2..K_P), U(x), and
// d(x, NE) against the supplied equilibrium list.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                                 const PotentialGame& pg,
                                 const std::vector<EquilibriumRecord>& eqs,
                                 int points_per_segment = 200) {
  os << "t,segment_id";
  for (int i = 0; i < pg.game.n_players; ++i)
    for (int k = 2; k <= pg.game.action_counts[i]; ++k)
      os << ",x" << (i + 1) << "_" << k;
  os << ",U,d_ne\n";
  os << std::setprecision(17);
  int seg_id = 0;
  for (const auto& seg : traj.segments) {
    ++seg_id;
    const int m = points_per_segment + 1;
    for (int j = 0; j <= m; ++j) {
      const double t = seg.t_start + (seg.t_end - seg.t_start) * j / m;
      XProfile x = seg.at(t);
      os << t << "," << seg_id;
      for (const auto& xi : x.coords)
        for (double v : xi) os << "," << v;
      os << "," << expected_potential(pg, x) << ","
         << distance_to_ne(x, eqs) << "\n";
    }
  }
}

inline double quantile(std::vector<double> v, double p) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const double pos = p * (v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

inline nlohmann::json run_to_json(const RunRecord& r) {
  nlohmann::json j;
  j["game"] = r.game_index;
  j["init"] = r.init_index;
  j["status"] = to_string(r.status);
  j["segments"] = r.n_segments;
  j["events"] = r.n_events;
  j["min_ascent"] = r.min_ascent;
  if (r.status == SimStatus::Converged) {
    j["tau"] = r.tau;
    j["c"] = r.c;
    j["bound_ok"] = r.bound_ok;
    j["worst_slack"] = r.worst_slack;
    j["post_lock_dev"] = r.post_lock_dev;
    if (r.fit_ok) {
      j["lambda"] = r.lambda;
      j["r_squared"] = r.r_squared;
    }
  }
  return j;
}

inline nlohmann::json write_batch_summary(const BatchResult& res) {
  nlohmann::json j;
  int total = 0, converged = 0, mixed = 0, horizon = 0, bound_fail = 0;
  int regular_games = 0, locks_failed = 0;
  std::vector<double> taus, cs;
  nlohmann::json runs = nlohmann::json::array();
  nlohmann::json games = nlohmann::json::array();
  for (const auto& g : res.games) {
    nlohmann::json gj;
    gj["game"] = g.game_index;
    gj["shape"] = g.shape;
    gj["seed"] = g.game_seed;
    gj["n_equilibria"] = g.n_equilibria;
    gj["n_pure"] = g.n_pure;
    gj["n_strict"] = g.n_strict;
    gj["all_regular"] = g.all_regular;
    gj["locks_ok"] = g.locks_ok;
    games.push_back(std::move(gj));
    if (g.all_regular) ++regular_games;
    if (!g.locks_ok) ++locks_failed;
    for (const auto& r : g.runs) {
      ++total;
      switch (r.status) {
        case SimStatus::Converged:
          ++converged;
          taus.push_back(r.tau);
          cs.push_back(r.c);
          if (!r.bound_ok) ++bound_fail;
          break;
        case SimStatus::MixedEquilibriumReached: ++mixed; break;
        default: ++horizon; break;
      }
      runs.push_back(run_to_json(r));
    }
  }
  j["n_games"] = static_cast<int>(res.games.size());
  j["n_runs"] = total;
  j["fraction_converged_pure"] =
      total ? static_cast<double>(converged) / total : 0.0;
  j["n_mixed_equilibrium_reached"] = mixed;
  j["n_horizon_reached"] = horizon;
  j["n_bound_failures"] = bound_fail;
  j["fraction_regular"] =
      res.games.empty() ? 0.0
                        : static_cast<double>(regular_games) / res.games.size();
  j["n_lock_failures"] = locks_failed;
  nlohmann::json q;
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const std::string key = std::to_string(static_cast<int>(p * 100));
    q["tau"][key] = quantile(taus, p);
    q["c"][key] = quantile(cs, p);
  }
  j["quantiles"] = q;
  j["games"] = std::move(games);
  j["runs"] = std::move(runs);
  return j;
}

inline void save_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream os(path);
  if (!os) throw IOFailure("cannot open " + path + " for writing");
  os << j.dump(2) << "\n";
  if (!os) throw IOFailure("write failed for " + path);
}

inline nlohmann::json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IOFailure("cannot open " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IOFailure("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

}  // namespace potfp
