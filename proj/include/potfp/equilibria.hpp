#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "potfp/potential.hpp"
#include "potfp/rng.hpp"

namespace potfp {

// Per-player argmax sets of U(y_i^k, x_{-i}); the product face they induce
// is a singleton vertex exactly when every set is.
struct BestResponseSet {
  std::vector<std::vector<int>> actions;  // 0-based, sorted

  bool singleton() const {
    for (const auto& a : actions)
      if (a.size() != 1) return false;
    return true;
  }
  std::vector<int> vertex_actions() const {
    std::vector<int> v;
    v.reserve(actions.size());
    for (const auto& a : actions) v.push_back(a[0]);
    return v;
  }
};

enum class EqKind { pure, mixed };

struct EquilibriumRecord {
  XProfile profile;
  EqKind kind = EqKind::pure;
  bool strict = false;
  bool quasi_strict = false;
  bool regular = false;
  std::vector<std::vector<int>> support;  // 0-based actions per player
};

inline std::vector<int> pure_best_responses(const PotentialGame& pg, int player,
                                            const XProfile& x, double tie_tol) {
  std::vector<double> a = action_potentials(pg, player, x);
  const double best = *std::max_element(a.begin(), a.end());
  std::vector<int> out;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] >= best - tie_tol) out.push_back(static_cast<int>(k));
  return out;
}

inline BestResponseSet best_response_set(
    const PotentialGame& pg, const XProfile& x,
    double tie_tol = default_tolerances().tie) {
  BestResponseSet br;
  br.actions.reserve(pg.game.n_players);
  for (int i = 0; i < pg.game.n_players; ++i)
    br.actions.push_back(pure_best_responses(pg, i, x, tie_tol));
  return br;
}

inline bool is_nash(const PotentialGame& pg, const XProfile& x,
                    double tol = default_tolerances().equilibrium) {
  SimplexProfile s = to_simplex(x);
  for (int i = 0; i < pg.game.n_players; ++i) {
    std::vector<double> a =
        action_values(pg.potential, pg.game.action_counts, i, s.weights);
    double mixed = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) mixed += s.weights[i][k] * a[k];
    for (double ak : a)
      if (ak > mixed + tol) return false;
  }
  return true;
}

namespace detail {

// Tensor value with selected players pinned to pure actions, the rest at the
// given weights.
inline double pinned_value(const Tensor& t, const std::vector<int>& counts,
                           std::vector<std::vector<double>> weights,
                           const std::vector<std::pair<int, int>>& pins) {
  for (auto [i, k] : pins) {
    std::fill(weights[i].begin(), weights[i].end(), 0.0);
    weights[i][k] = 1.0;
  }
  return eval_tensor(t, counts, weights);
}

}  // namespace detail

inline EquilibriumRecord classify_equilibrium(
    const PotentialGame& pg, const XProfile& x,
    double tol = default_tolerances().equilibrium) {
  const Tolerances& dt = default_tolerances();
  if (!is_nash(pg, x, tol))
    throw NotAnEquilibrium("profile is not a Nash equilibrium at tol " +
                           std::to_string(tol));
  EquilibriumRecord rec;
  rec.profile = x;

  SimplexProfile s = to_simplex(x);
  bool pure = true;
  for (int i = 0; i < pg.game.n_players; ++i) {
    std::vector<int> supp;
    for (std::size_t k = 0; k < s.weights[i].size(); ++k)
      if (s.weights[i][k] > dt.support_zero) supp.push_back(static_cast<int>(k));
    if (supp.size() != 1) pure = false;
    rec.support.push_back(std::move(supp));
  }
  rec.kind = pure ? EqKind::pure : EqKind::mixed;

  rec.quasi_strict = true;
  for (int i = 0; i < pg.game.n_players; ++i) {
    std::vector<int> br = pure_best_responses(pg, i, x, tol);
    for (int k : br)
      if (!std::binary_search(rec.support[i].begin(), rec.support[i].end(), k))
        rec.quasi_strict = false;
  }

  if (pure) {
    // Strict: every unilateral deviation strictly loses; for pure profiles
    // this coincides with quasi-strictness.
    rec.strict = true;
    for (int i = 0; i < pg.game.n_players && rec.strict; ++i) {
      std::vector<double> a = action_potentials(pg, i, x);
      const int yi = rec.support[i][0];
      for (std::size_t k = 0; k < a.size(); ++k)
        if (static_cast<int>(k) != yi && a[yi] <= a[k] + tol) rec.strict = false;
    }
    rec.regular = rec.strict;
    return rec;
  }

  // Mixed: regular when quasi-strict and the Hessian of U restricted to the
  // support's tangent space is nonsingular.  Tangent directions for player i
  // move mass from the first support action to each other support action;
  // same-player blocks vanish by multilinearity.
  rec.strict = false;
  if (!rec.quasi_strict) {
    rec.regular = false;
    return rec;
  }
  std::vector<int> mixers;
  for (int i = 0; i < pg.game.n_players; ++i)
    if (rec.support[i].size() >= 2) mixers.push_back(i);
  int dim = 0;
  std::vector<int> offset(mixers.size());
  for (std::size_t m = 0; m < mixers.size(); ++m) {
    offset[m] = dim;
    dim += static_cast<int>(rec.support[mixers[m]].size()) - 1;
  }
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t mi = 0; mi < mixers.size(); ++mi)
    for (std::size_t mj = mi + 1; mj < mixers.size(); ++mj) {
      const int i = mixers[mi], j = mixers[mj];
      const auto& si = rec.support[i];
      const auto& sj = rec.support[j];
      for (std::size_t a = 1; a < si.size(); ++a)
        for (std::size_t b = 1; b < sj.size(); ++b) {
          auto pv = [&](int ka, int kb) {
            return detail::pinned_value(pg.potential, pg.game.action_counts,
                                        s.weights, {{i, ka}, {j, kb}});
          };
          const double v = pv(si[a], sj[b]) - pv(si[a], sj[0]) -
                           pv(si[0], sj[b]) + pv(si[0], sj[0]);
          h(offset[mi] + static_cast<int>(a) - 1,
            offset[mj] + static_cast<int>(b) - 1) = v;
          h(offset[mj] + static_cast<int>(b) - 1,
            offset[mi] + static_cast<int>(a) - 1) = v;
        }
    }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(h);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
  rec.regular = smin > 0.0 && smax / smin < dt.cond_limit;
  return rec;
}

inline std::vector<EquilibriumRecord> enumerate_pure_nash(
    const PotentialGame& pg, double tol = default_tolerances().equilibrium) {
  std::vector<EquilibriumRecord> out;
  const auto& counts = pg.game.action_counts;
  for_each_joint(counts, [&](const std::vector<int>& y) {
    const std::size_t base = flat_index(counts, y);
    std::size_t stride = 1;
    bool nash = true;
    for (int i = pg.game.n_players - 1; i >= 0 && nash; --i) {
      const std::size_t ki = static_cast<std::size_t>(counts[i]);
      const std::size_t root = base - static_cast<std::size_t>(y[i]) * stride;
      for (std::size_t k = 0; k < ki; ++k)
        if (pg.potential[root + k * stride] > pg.potential[base] + tol) {
          nash = false;
          break;
        }
      stride *= ki;
    }
    if (nash) out.push_back(classify_equilibrium(pg, vertex_profile(pg.game, y), tol));
  });
  return out;
}

namespace detail {

// Face critical-point system for a support combination: unknowns are the
// on-support weights; equations are per-player indifference across the
// support plus normalization.  Square by construction.  Newton with a
// rank-revealing QR solves it; for 2 players the system is affine, so one
// step is exact.
struct SupportSystem {
  const PotentialGame& pg;
  const std::vector<std::vector<int>>& support;
  int dim = 0;
  std::vector<int> offset;  // unknown offset per player

  explicit SupportSystem(const PotentialGame& p,
                         const std::vector<std::vector<int>>& s)
      : pg(p), support(s) {
    offset.resize(support.size());
    for (std::size_t i = 0; i < support.size(); ++i) {
      offset[i] = dim;
      dim += static_cast<int>(support[i].size());
    }
  }

  std::vector<std::vector<double>> weights(const Eigen::VectorXd& z) const {
    std::vector<std::vector<double>> w(support.size());
    for (std::size_t i = 0; i < support.size(); ++i) {
      w[i].assign(pg.game.action_counts[i], 0.0);
      for (std::size_t a = 0; a < support[i].size(); ++a)
        w[i][support[i][a]] = z(offset[i] + static_cast<int>(a));
    }
    return w;
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& z) const {
    auto w = weights(z);
    Eigen::VectorXd f(dim);
    int row = 0;
    for (std::size_t i = 0; i < support.size(); ++i) {
      std::vector<double> a = action_values(
          pg.potential, pg.game.action_counts, static_cast<int>(i), w);
      for (std::size_t k = 1; k < support[i].size(); ++k)
        f(row++) = a[support[i][k]] - a[support[i][0]];
      double sum = 0.0;
      for (std::size_t k = 0; k < support[i].size(); ++k)
        sum += z(offset[i] + static_cast<int>(k));
      f(row++) = sum - 1.0;
    }
    return f;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& z) const {
    auto w = weights(z);
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(dim, dim);
    int row = 0;
    for (std::size_t i = 0; i < support.size(); ++i) {
      for (std::size_t k = 1; k < support[i].size(); ++k) {
        for (std::size_t j = 0; j < support.size(); ++j) {
          if (j == i) continue;  // own-weight derivative vanishes
          for (std::size_t m = 0; m < support[j].size(); ++m) {
            const int ii = static_cast<int>(i), jj = static_cast<int>(j);
            const double d =
                pinned_value(pg.potential, pg.game.action_counts, w,
                             {{ii, support[i][k]}, {jj, support[j][m]}}) -
                pinned_value(pg.potential, pg.game.action_counts, w,
                             {{ii, support[i][0]}, {jj, support[j][m]}});
            jac(row, offset[j] + static_cast<int>(m)) = d;
          }
        }
        ++row;
      }
      for (std::size_t k = 0; k < support[i].size(); ++k)
        jac(row, offset[i] + static_cast<int>(k)) = 1.0;
      ++row;
    }
    return jac;
  }
};

inline std::optional<Eigen::VectorXd> solve_face(const SupportSystem& sys,
                                                 Eigen::VectorXd z,
                                                 double residual_tol) {
  Eigen::VectorXd f = sys.residual(z);
  for (int it = 0; it < 50; ++it) {
    if (f.lpNorm<Eigen::Infinity>() <= 1e-13) break;
    Eigen::VectorXd step = sys.jacobian(z).colPivHouseholderQr().solve(-f);
    double alpha = 1.0;
    for (int back = 0; back < 8; ++back) {
      Eigen::VectorXd zn = z + alpha * step;
      Eigen::VectorXd fn = sys.residual(zn);
      if (fn.norm() < f.norm() || back == 7) {
        z = zn;
        f = fn;
        break;
      }
      alpha *= 0.5;
    }
  }
  if (f.lpNorm<Eigen::Infinity>() > residual_tol) return std::nullopt;
  return z;
}

}  // namespace detail

// Solve one support face; returns the interior Nash profile on it, if any.
inline std::optional<XProfile> solve_support(
    const PotentialGame& pg, const std::vector<std::vector<int>>& support) {
  const Tolerances& dt = default_tolerances();
  detail::SupportSystem sys(pg, support);

  std::vector<Eigen::VectorXd> starts;
  Eigen::VectorXd bary(sys.dim);
  for (std::size_t i = 0; i < support.size(); ++i)
    for (std::size_t k = 0; k < support[i].size(); ++k)
      bary(sys.offset[i] + static_cast<int>(k)) =
          1.0 / static_cast<double>(support[i].size());
  starts.push_back(bary);
  if (pg.game.n_players > 2) {
    // Multilinear system: add deterministic Dirichlet restarts.
    std::uint64_t combo_hash = 0;
    for (const auto& s : support)
      for (int a : s) combo_hash = combo_hash * 131 + static_cast<std::uint64_t>(a + 1);
    for (int r = 0; r < 8; ++r) {
      auto eng = substream(0x5eed5eedULL, "face-start",
                           combo_hash * 16 + static_cast<std::uint64_t>(r));
      Eigen::VectorXd z(sys.dim);
      for (std::size_t i = 0; i < support.size(); ++i) {
        auto w = draw_simplex(eng, support[i].size());
        for (std::size_t k = 0; k < w.size(); ++k)
          z(sys.offset[i] + static_cast<int>(k)) = w[k];
      }
      starts.push_back(z);
    }
  }

  for (const auto& z0 : starts) {
    auto sol = detail::solve_face(sys, z0, dt.solver_residual);
    if (!sol) continue;
    bool interior = true;
    for (int k = 0; k < sys.dim; ++k)
      if ((*sol)(k) < dt.support_zero || (*sol)(k) > 1.0 + dt.simplex)
        interior = false;
    if (!interior) continue;
    SimplexProfile s;
    s.weights = sys.weights(*sol);
    for (auto& w : s.weights) {
      double sum = std::accumulate(w.begin(), w.end(), 0.0);
      for (auto& v : w) v /= sum;
    }
    XProfile x = from_simplex(s);
    if (!is_nash(pg, x, dt.equilibrium)) continue;
    return x;
  }
  return std::nullopt;
}

// Support enumeration over all non-pure support combinations.  max_support
// caps the per-player support size (0 = no cap).
inline std::vector<EquilibriumRecord> enumerate_mixed_nash(
    const PotentialGame& pg, int max_support = 0) {
  if (pg.game.joint_count() > 64)
    throw TooLarge("support enumeration capped at 64 joint profiles, game has " +
                   std::to_string(pg.game.joint_count()));
  const int n = pg.game.n_players;
  std::vector<EquilibriumRecord> out;

  std::vector<std::uint32_t> masks(n, 1);
  auto mask_to_support = [&](int i) {
    std::vector<int> s;
    for (int k = 0; k < pg.game.action_counts[i]; ++k)
      if (masks[i] & (1u << k)) s.push_back(k);
    return s;
  };
  for (;;) {
    std::vector<std::vector<int>> support(n);
    bool all_singleton = true;
    bool capped = false;
    for (int i = 0; i < n; ++i) {
      support[i] = mask_to_support(i);
      if (support[i].size() > 1) all_singleton = false;
      if (max_support > 0 &&
          static_cast<int>(support[i].size()) > max_support)
        capped = true;
    }
    if (!all_singleton && !capped) {
      auto x = solve_support(pg, support);
      if (x) {
        bool dup = false;
        for (const auto& r : out)
          if (distance(r.profile, *x) < 1e-8) dup = true;
        if (!dup) out.push_back(classify_equilibrium(pg, *x));
      }
    }
    // Odometer over per-player masks.
    int i = n - 1;
    while (i >= 0) {
      ++masks[i];
      if (masks[i] < (1u << pg.game.action_counts[i])) break;
      masks[i] = 1;
      --i;
    }
    if (i < 0) break;
  }
  std::sort(out.begin(), out.end(),
            [](const EquilibriumRecord& a, const EquilibriumRecord& b) {
              if (a.support != b.support) return a.support < b.support;
              return flatten(a.profile) < flatten(b.profile);
            });
  return out;
}

inline std::vector<EquilibriumRecord> enumerate_all_nash(
    const PotentialGame& pg) {
  std::vector<EquilibriumRecord> all = enumerate_pure_nash(pg);
  std::vector<EquilibriumRecord> mixed = enumerate_mixed_nash(pg);
  all.insert(all.end(), mixed.begin(), mixed.end());
  return all;
}

struct LockCheck {
  bool ok = false;
  double min_margin = 0.0;
};

// Samples the X-ball around a strict pure equilibrium (intersected with X)
// and verifies the equilibrium vertex is the unique best response throughout.
inline LockCheck verify_local_br_lock(const PotentialGame& pg,
                                      const XProfile& x_star, double radius,
                                      int n_samples, std::uint64_t seed) {
  const Tolerances& dt = default_tolerances();
  EquilibriumRecord rec;
  try {
    rec = classify_equilibrium(pg, x_star);
  } catch (const NotAnEquilibrium&) {
    throw NotStrictPure("profile is not an equilibrium");
  }
  if (rec.kind != EqKind::pure || !rec.strict)
    throw NotStrictPure("lock check requires a strict pure equilibrium");
  std::vector<int> target;
  for (const auto& s : rec.support) target.push_back(s[0]);

  const std::vector<double> center = flatten(x_star);
  const int dim = static_cast<int>(center.size());
  auto eng = substream(seed, "br-lock", 0);
  auto in_x = [&](const std::vector<double>& v) {
    std::size_t pos = 0;
    for (int c : pg.game.action_counts) {
      double sum = 0.0;
      for (int k = 0; k < c - 1; ++k) {
        const double w = v[pos + k];
        if (w < 0.0 || w > 1.0) return false;
        sum += w;
      }
      if (sum > 1.0) return false;
      pos += c - 1;
    }
    return true;
  };

  LockCheck res;
  res.ok = true;
  res.min_margin = std::numeric_limits<double>::infinity();
  long attempts = 0;
  const long max_attempts = 20000L * std::max(n_samples, 1);
  for (int s = 0; s < n_samples; ++s) {
    std::vector<double> pt;
    do {
      if (++attempts > max_attempts)
        throw Error("ball sampling rejection cap exceeded");
      pt = draw_ball(eng, static_cast<std::size_t>(dim), radius);
      for (int k = 0; k < dim; ++k) pt[k] += center[k];
    } while (!in_x(pt));
    XProfile x = unflatten(pg.game.action_counts, pt);
    for (int i = 0; i < pg.game.n_players; ++i) {
      std::vector<double> a = action_potentials(pg, i, x);
      double second = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < a.size(); ++k)
        if (static_cast<int>(k) != target[i]) second = std::max(second, a[k]);
      const double margin = a[target[i]] - second;
      res.min_margin = std::min(res.min_margin, margin);
      if (margin <= dt.tie) res.ok = false;
    }
  }
  return res;
}

}  // namespace potfp
