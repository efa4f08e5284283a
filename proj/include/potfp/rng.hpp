#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace potfp {

// Deterministic named substreams: derive an independent engine from a master
// seed, a tag and an index, so "game 17" or "init 3 of game 17" is
// reproducible regardless of how many draws other streams consumed.
inline std::mt19937_64 substream(std::uint64_t seed, std::string_view tag,
                                 std::uint64_t index) {
  // FNV-1a over the tag, then mix with seed and index via splitmix64 steps.
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 1099511628211ull;
  }
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  std::uint64_t s = mix(seed ^ mix(h) ^ mix(index * 0xd1342543de82ef95ull + 1));
  return std::mt19937_64(s);
}

inline double draw_normal(std::mt19937_64& eng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return n(eng);
}

// Uniform sample from the standard (K-1)-simplex, i.e. Dirichlet(1,...,1).
inline std::vector<double> draw_simplex(std::mt19937_64& eng, std::size_t k) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(k);
  double sum = 0.0;
  for (auto& v : w) {
    v = e(eng);
    sum += v;
  }
  for (auto& v : w) v /= sum;
  return w;
}

// Uniform point in the closed Euclidean ball of given radius in dim
// dimensions: isotropic direction times radius * u^(1/dim).
inline std::vector<double> draw_ball(std::mt19937_64& eng, std::size_t dim,
                                     double radius) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> v(dim);
  double norm2 = 0.0;
  for (auto& c : v) {
    c = n(eng);
    norm2 += c * c;
  }
  double norm = std::sqrt(norm2);
  if (norm == 0.0) return std::vector<double>(dim, 0.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double r = radius * std::pow(u01(eng), 1.0 / static_cast<double>(dim));
  for (auto& c : v) c *= r / norm;
  return v;
}

}  // namespace potfp
