#pragma once

#include "potfp/game.hpp"
#include "potfp/potential.hpp"

namespace fixtures {

// 2x2 identity coordination: both players get 1 when actions match.  The
// common payoff tensor is itself an exact potential, giving
// U(x) = (1 - x_1)(1 - x_2) + x_1 x_2 in reduced coordinates.
inline potfp::PotentialGame identity_coordination() {
  potfp::Tensor common{1, 0, 0, 1};
  potfp::Game g = potfp::validate_game(2, {2, 2}, {common, common});
  return potfp::PotentialGame{std::move(g), common};
}

// 2x2 matching pennies: zero-sum, admits no exact potential.
inline potfp::Game matching_pennies() {
  return potfp::validate_game(2, {2, 2}, {{1, -1, -1, 1}, {-1, 1, 1, -1}});
}

// Coordination with payoffs 2 on (1,1) and 1 on (2,2): the mixed equilibrium
// puts weight 1/3 on action 1 (so x = 2/3 for both players).
inline potfp::PotentialGame asym_coordination() {
  potfp::Tensor common{2, 0, 0, 1};
  potfp::Game g = potfp::validate_game(2, {2, 2}, {common, common});
  return potfp::PotentialGame{std::move(g), common};
}

// All payoffs equal: every profile is an equilibrium, none strict.
inline potfp::PotentialGame constant_game() {
  potfp::Tensor zero{0, 0, 0, 0};
  potfp::Game g = potfp::validate_game(2, {2, 2}, {zero, zero});
  return potfp::PotentialGame{std::move(g), zero};
}

// Separable common-interest game w(y) = a(y_1) + b(y_2) with action 1
// strictly dominant for both players; unique equilibrium (1,1), no mixed.
inline potfp::PotentialGame dominant_game() {
  potfp::Tensor common{2, 1, 1, 0};
  potfp::Game g = potfp::validate_game(2, {2, 2}, {common, common});
  return potfp::PotentialGame{std::move(g), common};
}

}  // namespace fixtures
