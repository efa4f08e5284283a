#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "potfp/config.hpp"
#include "potfp/errors.hpp"

namespace potfp {

// Flat row-major tensor over joint pure strategies; the last player's action
// index varies fastest.
using Tensor = std::vector<double>;

struct Game {
  int n_players = 0;
  std::vector<int> action_counts;   // K_1..K_N
  std::vector<Tensor> utilities;    // one tensor per player, each of size K

  std::size_t joint_count() const {
    std::size_t k = 1;
    for (int c : action_counts) k *= static_cast<std::size_t>(c);
    return k;
  }
};

// Joint mixed strategy as full per-player probability vectors.
struct SimplexProfile {
  std::vector<std::vector<double>> weights;  // weights[i] has K_i entries
};

// Reduced coordinates: per player, the weights on actions 2..K_i (the first
// weight is implied by normalization).
struct XProfile {
  std::vector<std::vector<double>> coords;  // coords[i] has K_i - 1 entries
};

inline std::size_t joint_count(const std::vector<int>& counts) {
  std::size_t k = 1;
  for (int c : counts) k *= static_cast<std::size_t>(c);
  return k;
}

// Flat index of a joint pure profile (0-based actions, last player fastest).
inline std::size_t flat_index(const std::vector<int>& counts,
                              const std::vector<int>& y) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < counts.size(); ++i)
    idx = idx * static_cast<std::size_t>(counts[i]) +
          static_cast<std::size_t>(y[i]);
  return idx;
}

// Iterate all joint pure profiles in flat order; fn receives the 0-based
// action vector.
inline void for_each_joint(const std::vector<int>& counts,
                           const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> y(counts.size(), 0);
  for (;;) {
    fn(y);
    int i = static_cast<int>(counts.size()) - 1;
    while (i >= 0 && ++y[i] == counts[i]) y[i--] = 0;
    if (i < 0) break;
  }
}

inline Game validate_game(int n_players, std::vector<int> action_counts,
                          std::vector<Tensor> utilities) {
  if (n_players < 2)
    throw InvalidCounts("need at least 2 players, got " +
                        std::to_string(n_players));
  if (static_cast<int>(action_counts.size()) != n_players)
    throw DimensionMismatch("expected " + std::to_string(n_players) +
                            " action counts, got " +
                            std::to_string(action_counts.size()));
  for (int c : action_counts)
    if (c < 2)
      throw InvalidCounts("every player needs at least 2 actions, got " +
                          std::to_string(c));
  const std::size_t k = joint_count(action_counts);
  if (utilities.size() != static_cast<std::size_t>(n_players))
    throw DimensionMismatch("expected " + std::to_string(n_players) +
                            " utility tensors, got " +
                            std::to_string(utilities.size()));
  for (const auto& t : utilities)
    if (t.size() != k)
      throw DimensionMismatch("utility tensor has " +
                              std::to_string(t.size()) + " entries, expected " +
                              std::to_string(k));
  return Game{n_players, std::move(action_counts), std::move(utilities)};
}

inline int kappa(const Game& g) {
  int k = 0;
  for (int c : g.action_counts) k += c - 1;
  return k;
}

inline void validate_x(const XProfile& x, double tol) {
  for (const auto& xi : x.coords) {
    double sum = 0.0;
    for (double v : xi) {
      if (v < -tol || v > 1.0 + tol)
        throw OutOfPolytope("coordinate " + std::to_string(v) +
                            " outside [0,1]");
      sum += v;
    }
    if (sum > 1.0 + tol)
      throw OutOfPolytope("player coordinates sum to " + std::to_string(sum) +
                          " > 1");
  }
}

inline SimplexProfile to_simplex(const XProfile& x,
                                 double tol = default_tolerances().simplex) {
  validate_x(x, tol);
  SimplexProfile s;
  s.weights.reserve(x.coords.size());
  for (const auto& xi : x.coords) {
    std::vector<double> w(xi.size() + 1);
    double rest = std::accumulate(xi.begin(), xi.end(), 0.0);
    w[0] = 1.0 - rest;
    std::copy(xi.begin(), xi.end(), w.begin() + 1);
    s.weights.push_back(std::move(w));
  }
  return s;
}

inline XProfile from_simplex(const SimplexProfile& s,
                             double tol = default_tolerances().simplex) {
  XProfile x;
  x.coords.reserve(s.weights.size());
  for (const auto& w : s.weights) {
    double sum = 0.0;
    for (double v : w) {
      if (v < -tol)
        throw InvalidSimplex("negative weight " + std::to_string(v));
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol)
      throw InvalidSimplex("weights sum to " + std::to_string(sum));
    x.coords.emplace_back(w.begin() + 1, w.end());
  }
  return x;
}

// XProfile putting all mass on the joint pure profile y (0-based actions).
inline XProfile vertex_profile(const Game& g, const std::vector<int>& y) {
  if (y.size() != static_cast<std::size_t>(g.n_players))
    throw DimensionMismatch("profile has " + std::to_string(y.size()) +
                            " entries for " + std::to_string(g.n_players) +
                            " players");
  XProfile x;
  x.coords.reserve(y.size());
  for (int i = 0; i < g.n_players; ++i) {
    if (y[i] < 0 || y[i] >= g.action_counts[i])
      throw IndexOutOfRange("action " + std::to_string(y[i]) +
                            " out of range for player " + std::to_string(i));
    std::vector<double> xi(g.action_counts[i] - 1, 0.0);
    if (y[i] > 0) xi[y[i] - 1] = 1.0;
    x.coords.push_back(std::move(xi));
  }
  return x;
}

// Multilinear evaluation of a flat tensor against per-player weight vectors:
// contracts the trailing axis repeatedly until a scalar remains.
inline double eval_tensor(const Tensor& t, const std::vector<int>& counts,
                          const std::vector<std::vector<double>>& weights) {
  std::vector<double> cur(t);
  for (int i = static_cast<int>(counts.size()) - 1; i >= 0; --i) {
    const auto& w = weights[i];
    const std::size_t kc = static_cast<std::size_t>(counts[i]);
    const std::size_t rows = cur.size() / kc;
    std::vector<double> next(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      double acc = 0.0;
      const double* row = cur.data() + r * kc;
      for (std::size_t k = 0; k < kc; ++k) acc += row[k] * w[k];
      next[r] = acc;
    }
    cur.swap(next);
  }
  return cur[0];
}

// Vector over player i's pure actions of the tensor contracted against all
// other players' weights: entry k is the value when player i plays action k
// for sure.  Trailing players are folded first; then leading axes are folded
// one at a time, leaving player i's axis intact.
inline std::vector<double> action_values(
    const Tensor& t, const std::vector<int>& counts, int player,
    const std::vector<std::vector<double>>& weights) {
  std::vector<double> cur(t);
  for (int i = static_cast<int>(counts.size()) - 1; i > player; --i) {
    const auto& w = weights[i];
    const std::size_t kc = static_cast<std::size_t>(counts[i]);
    const std::size_t rows = cur.size() / kc;
    std::vector<double> next(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      double acc = 0.0;
      const double* row = cur.data() + r * kc;
      for (std::size_t k = 0; k < kc; ++k) acc += row[k] * w[k];
      next[r] = acc;
    }
    cur.swap(next);
  }
  // cur now has shape K_0 × … × K_player; contract the leading axis down to
  // player's axis.
  for (int i = 0; i < player; ++i) {
    const auto& w = weights[i];
    const std::size_t kc = static_cast<std::size_t>(counts[i]);
    const std::size_t stride = cur.size() / kc;
    std::vector<double> next(stride, 0.0);
    for (std::size_t k = 0; k < kc; ++k) {
      const double* blk = cur.data() + k * stride;
      for (std::size_t r = 0; r < stride; ++r) next[r] += w[k] * blk[r];
    }
    cur.swap(next);
  }
  return cur;
}

inline double expected_utility(const Game& g, int player,
                               const SimplexProfile& s) {
  if (player < 0 || player >= g.n_players)
    throw IndexOutOfRange("player " + std::to_string(player));
  return eval_tensor(g.utilities[player], g.action_counts, s.weights);
}

// --- XProfile vector helpers -------------------------------------------------

inline std::vector<double> flatten(const XProfile& x) {
  std::vector<double> v;
  for (const auto& xi : x.coords) v.insert(v.end(), xi.begin(), xi.end());
  return v;
}

inline XProfile unflatten(const std::vector<int>& counts,
                          const std::vector<double>& v) {
  XProfile x;
  std::size_t pos = 0;
  for (int c : counts) {
    if (pos + (c - 1) > v.size())
      throw DimensionMismatch("flat vector too short for action counts");
    x.coords.emplace_back(v.begin() + pos, v.begin() + pos + (c - 1));
    pos += c - 1;
  }
  if (pos != v.size())
    throw DimensionMismatch("flat vector too long for action counts");
  return x;
}

inline double distance(const XProfile& a, const XProfile& b,
                       Metric metric = Metric::euclidean) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.coords.size(); ++i)
    for (std::size_t k = 0; k < a.coords[i].size(); ++k) {
      double d = std::abs(a.coords[i][k] - b.coords[i][k]);
      if (metric == Metric::euclidean)
        acc += d * d;
      else
        acc = std::max(acc, d);
    }
  return metric == Metric::euclidean ? std::sqrt(acc) : acc;
}

}  // namespace potfp
