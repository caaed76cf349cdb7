#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "charclass/gralg.hpp"

namespace charclass::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(0x5eed5eedULL);
  return engine;
}

inline bool coin() { return std::uniform_int_distribution<int>(0, 1)(rng()) == 1; }

inline int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

// Uniformly random element of the degree-d part (in normal form).
inline Poly random_homogeneous(const Presentation& a, int d) {
  std::vector<Monomial> terms;
  for (const auto& m : a.basis(d)) {
    if (coin()) terms.push_back(m);
  }
  return Poly::from_terms(std::move(terms));
}

inline F2Matrix random_matrix(std::size_t rows, std::size_t cols) {
  F2Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, coin());
  }
  return m;
}

}  // namespace charclass::testing
