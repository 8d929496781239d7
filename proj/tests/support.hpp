#pragma once

#include <random>
#include <string>
#include <vector>

#include "toricres/exactmath.hpp"

namespace trtest {

inline tr::IVec iv(std::initializer_list<long> xs) {
  tr::IVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

inline tr::QVec qv(std::initializer_list<long> xs) {
  tr::QVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

inline tr::IMat im(std::initializer_list<std::initializer_list<long>> rows) {
  tr::IMat m;
  for (auto r : rows) m.push_back(iv(r));
  return m;
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(unsigned long seed) : gen(seed) {}
  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen); }
  tr::IVec vec(std::size_t n, long lo, long hi) {
    tr::IVec v;
    for (std::size_t i = 0; i < n; ++i) v.emplace_back(uniform(lo, hi));
    return v;
  }
};

// Determinant by cofactor expansion, independent of the library's elimination.
inline tr::Int cofactor_det(const tr::IMat& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  tr::Int s = 0;
  for (std::size_t j = 0; j < n; ++j) {
    tr::IMat minor;
    for (std::size_t i = 1; i < n; ++i) {
      tr::IVec row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(row);
    }
    tr::Int c = m[0][j] * cofactor_det(minor);
    s += (j % 2 == 0) ? c : tr::Int(-c);
  }
  return s;
}

}  // namespace trtest
