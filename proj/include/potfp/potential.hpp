#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "potfp/game.hpp"
#include "potfp/rng.hpp"

namespace potfp {

// A game together with an exact potential tensor: every player's unilateral
// utility difference equals the corresponding potential difference.
struct PotentialGame {
  Game game;
  Tensor potential;  // same flat layout as the utility tensors
};

struct PotentialCheck {
  bool ok = false;
  double max_violation = 0.0;
};

// Maximum over all players i, opponent profiles y_{-i}, and action pairs of
// |[u_i(k1,y_{-i}) - u_i(k2,y_{-i})] - [u(k1,y_{-i}) - u(k2,y_{-i})]|.
inline PotentialCheck check_exact_potential(const Game& g,
                                            const Tensor& candidate,
                                            double tol) {
  const std::size_t k = g.joint_count();
  if (candidate.size() != k)
    throw DimensionMismatch("candidate potential has " +
                            std::to_string(candidate.size()) +
                            " entries, expected " + std::to_string(k));
  double worst = 0.0;
  std::size_t stride = 1;
  for (int i = g.n_players - 1; i >= 0; --i) {
    const std::size_t ki = static_cast<std::size_t>(g.action_counts[i]);
    const Tensor& ui = g.utilities[i];
    for (std::size_t f = 0; f < k; ++f) {
      if ((f / stride) % ki != 0) continue;  // enumerate y_i = 0 bases once
      for (std::size_t k1 = 0; k1 + 1 < ki; ++k1)
        for (std::size_t k2 = k1 + 1; k2 < ki; ++k2) {
          const std::size_t a = f + k1 * stride, b = f + k2 * stride;
          const double du_i = ui[a] - ui[b];
          const double du = candidate[a] - candidate[b];
          worst = std::max(worst, std::abs(du_i - du));
        }
    }
    stride *= ki;
  }
  return {worst <= tol, worst};
}

// Builds the potential by telescoping unilateral deviations along the
// player-by-player path from the reference profile y0 = (1,...,1), fixing
// u(y0) = 0, then verifies the exact-potential identity.
inline PotentialGame extract_potential(
    const Game& g, double tol = default_tolerances().potential_check) {
  const std::size_t k = g.joint_count();
  Tensor p(k, 0.0);
  // Strides for flat indexing: stride[i] = product of counts after player i.
  std::vector<std::size_t> stride(g.n_players, 1);
  for (int i = g.n_players - 2; i >= 0; --i)
    stride[i] = stride[i + 1] * static_cast<std::size_t>(g.action_counts[i + 1]);
  for_each_joint(g.action_counts, [&](const std::vector<int>& y) {
    // Walk y0 -> (y_1,0,..) -> (y_1,y_2,0,..) -> ... -> y; step i changes only
    // player i, so the potential increment is player i's utility difference.
    double val = 0.0;
    std::size_t prefix = 0;  // flat index of (y_1..y_{i-1}, 0, ..., 0)
    for (int i = 0; i < g.n_players; ++i) {
      const std::size_t with_yi =
          prefix + static_cast<std::size_t>(y[i]) * stride[i];
      val += g.utilities[i][with_yi] - g.utilities[i][prefix];
      prefix = with_yi;
    }
    p[prefix] = val;
  });
  PotentialCheck chk = check_exact_potential(g, p, tol);
  if (!chk.ok)
    throw NotPotentialGame("no exact potential: deviation identity violated by " +
                               std::to_string(chk.max_violation),
                           chk.max_violation);
  return PotentialGame{g, std::move(p)};
}

// Dimension of the space of potential games with the given action counts:
// (sum_i prod_{j != i} K_j) + N + K - 1.
inline long long param_dim(const std::vector<int>& counts) {
  const long long n = static_cast<long long>(counts.size());
  long long k = 1;
  for (int c : counts) k *= c;
  long long dummy = 0;
  for (int c : counts) dummy += k / c;
  return dummy + n + k - 1;
}

// Random potential game: potential tensor w with i.i.d. standard normal
// entries plus per-player dummy tensors q_i(y_{-i}); u_i = w + q_i.  The
// construction is an exact potential game by design, and deterministic for a
// fixed seed.
inline PotentialGame sample_potential_game(const std::vector<int>& counts,
                                           std::uint64_t seed) {
  const int n = static_cast<int>(counts.size());
  const std::size_t k = joint_count(counts);
  auto weng = substream(seed, "potential", 0);
  Tensor w(k);
  for (auto& v : w) v = draw_normal(weng);

  std::vector<std::size_t> stride(n, 1);
  for (int i = n - 2; i >= 0; --i)
    stride[i] = stride[i + 1] * static_cast<std::size_t>(counts[i + 1]);

  std::vector<Tensor> utilities(n);
  for (int i = 0; i < n; ++i) {
    auto qeng = substream(seed, "dummy", static_cast<std::uint64_t>(i));
    Tensor q(k / static_cast<std::size_t>(counts[i]));
    for (auto& v : q) v = draw_normal(qeng);
    Tensor ui(k);
    for (std::size_t f = 0; f < k; ++f) {
      // Index of y_{-i}: drop player i's digit from the flat index.
      const std::size_t hi = f / (stride[i] * static_cast<std::size_t>(counts[i]));
      const std::size_t lo = f % stride[i];
      ui[f] = w[f] + q[hi * stride[i] + lo];
    }
    utilities[i] = std::move(ui);
  }
  Game g = validate_game(n, counts, std::move(utilities));
  return PotentialGame{std::move(g), std::move(w)};
}

// Expected potential U(T(x)) by direct multilinear evaluation.
inline double expected_potential(const PotentialGame& pg, const XProfile& x) {
  SimplexProfile s = to_simplex(x);
  return eval_tensor(pg.potential, pg.game.action_counts, s.weights);
}

// Potential values per pure action of one player against x_{-i}:
// entry k is U(y_i^k, x_{-i}).
inline std::vector<double> action_potentials(const PotentialGame& pg,
                                             int player, const XProfile& x) {
  SimplexProfile s = to_simplex(x);
  return action_values(pg.potential, pg.game.action_counts, player, s.weights);
}

// Per-player expansion of U: U(x) = sum_k sigma_i^k U(y_i^k, x_{-i}).
// Must agree with expected_potential for every player.
inline double expected_potential_via_player(const PotentialGame& pg, int player,
                                            const XProfile& x) {
  SimplexProfile s = to_simplex(x);
  std::vector<double> a =
      action_values(pg.potential, pg.game.action_counts, player, s.weights);
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += s.weights[player][k] * a[k];
  return acc;
}

}  // namespace potfp
