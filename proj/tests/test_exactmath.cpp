#include <functional>

#include "doctest.h"
#include "support.hpp"
#include "toricres/exactmath.hpp"

using namespace tr;
using namespace trtest;

namespace {

// gcd of all k x k minors of a rows x cols matrix.
Int minor_gcd(const IMat& m, std::size_t k) {
  const std::size_t rows = m.size(), cols = m[0].size();
  Int g = 0;
  std::vector<std::size_t> ri, ci;
  std::function<void(std::size_t)> pick_cols;
  std::function<void(std::size_t)> pick_rows = [&](std::size_t start) {
    if (ri.size() == k) {
      pick_cols(0);
      return;
    }
    for (std::size_t i = start; i < rows; ++i) {
      ri.push_back(i);
      pick_rows(i + 1);
      ri.pop_back();
    }
  };
  pick_cols = [&](std::size_t start) {
    if (ci.size() == k) {
      IMat sub;
      for (auto i : ri) {
        IVec row;
        for (auto j : ci) row.push_back(m[i][j]);
        sub.push_back(row);
      }
      g = gcd(g, cofactor_det(sub));
      return;
    }
    for (std::size_t j = start; j < cols; ++j) {
      ci.push_back(j);
      pick_cols(j + 1);
      ci.pop_back();
    }
  };
  pick_rows(0);
  return g;
}

bool oracle_basis_part(const IMat& m) { return m.size() <= m[0].size() && minor_gcd(m, m.size()) == 1; }

IMat mul(const IMat& a, const IMat& b) {
  IMat c(a.size(), IVec(b[0].size(), Int(0)));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

}  // namespace

TEST_CASE("floor_ceil examples") {
  CHECK(floor_ceil(Rat(3, 2)) == std::pair<Int, Int>(1, 2));
  CHECK(floor_ceil(Rat(-3, 2)) == std::pair<Int, Int>(-2, -1));
  CHECK(floor_ceil(Rat(2)) == std::pair<Int, Int>(2, 2));
}

TEST_CASE("floor_ceil shifts with integers") {
  Rng rng(11);
  for (int t = 0; t < 500; ++t) {
    Rat r(rng.uniform(-50, 50), rng.uniform(1, 9));
    r.canonicalize();
    Int n = rng.uniform(-20, 20);
    auto [f, c] = floor_ceil(r);
    auto [f2, c2] = floor_ceil(r + n);
    CHECK(f2 == f + n);
    CHECK(c2 == c + n);
    CHECK(Rat(f) <= r);
    CHECK(r <= Rat(c));
    CHECK((c - f == 0 || c - f == 1));
  }
}

TEST_CASE("hermite normal form examples") {
  auto id = im({{1, 0}, {0, 1}});
  auto h = hermite_normal_form(id);
  CHECK(h.H == id);
  CHECK(h.U == id);
  CHECK(hermite_normal_form(im({{0, 1}, {1, 0}})).H == id);
  CHECK(hermite_normal_form(im({{2, 0}, {0, 3}})).H == im({{2, 0}, {0, 3}}));
}

TEST_CASE("hermite normal form is U*M with U unimodular") {
  Rng rng(12);
  for (int t = 0; t < 300; ++t) {
    std::size_t r = rng.uniform(1, 4), c = rng.uniform(1, 4);
    IMat m;
    for (std::size_t i = 0; i < r; ++i) m.push_back(rng.vec(c, -5, 5));
    auto h = hermite_normal_form(m);
    CHECK(abs(cofactor_det(h.U)) == 1);
    CHECK(mul(h.U, m) == h.H);
    // echelon shape with positive pivots and reduced entries above them
    std::size_t last = 0;
    bool zero_seen = false;
    for (std::size_t i = 0; i < r; ++i) {
      std::size_t p = 0;
      while (p < c && h.H[i][p] == 0) ++p;
      if (p == c) {
        zero_seen = true;
        continue;
      }
      CHECK_FALSE(zero_seen);
      if (i > 0) CHECK(p > last);
      last = p;
      CHECK(h.H[i][p] > 0);
      for (std::size_t k = 0; k < i; ++k) {
        CHECK(h.H[k][p] >= 0);
        CHECK(h.H[k][p] < h.H[i][p]);
      }
    }
  }
}

TEST_CASE("is_lattice_basis_part examples") {
  CHECK(is_lattice_basis_part(im({{1, 0}, {0, 1}})));
  CHECK(is_lattice_basis_part(im({{1, 1}, {1, 2}})));
  CHECK_FALSE(is_lattice_basis_part(im({{1, 0}, {0, 2}})));
}

TEST_CASE("is_lattice_basis_part agrees with the minor oracle, exhaustive 2x2 and 1x3") {
  for (long a = -3; a <= 3; ++a)
    for (long b = -3; b <= 3; ++b)
      for (long c = -3; c <= 3; ++c)
        for (long d = -3; d <= 3; ++d) {
          if ((a == 0 && b == 0) || (c == 0 && d == 0)) continue;
          IMat m = im({{a, b}, {c, d}});
          CHECK(is_lattice_basis_part(m) == oracle_basis_part(m));
        }
  for (long a = -3; a <= 3; ++a)
    for (long b = -3; b <= 3; ++b)
      for (long c = -3; c <= 3; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        IMat m = im({{a, b, c}});
        CHECK(is_lattice_basis_part(m) == oracle_basis_part(m));
      }
}

TEST_CASE("is_lattice_basis_part agrees with the minor oracle, sampled dims <= 3") {
  Rng rng(13);
  for (int t = 0; t < 3000; ++t) {
    std::size_t r = rng.uniform(1, 3), c = rng.uniform(r, 3);
    IMat m;
    for (std::size_t i = 0; i < r; ++i) {
      IVec v;
      do v = rng.vec(c, -3, 3);
      while (is_zero(v));
      m.push_back(v);
    }
    CHECK(is_lattice_basis_part(m) == oracle_basis_part(m));
  }
}

TEST_CASE("elementary divisors match determinantal divisors") {
  Rng rng(14);
  for (int t = 0; t < 500; ++t) {
    std::size_t r = rng.uniform(1, 3), c = rng.uniform(1, 3);
    IMat m;
    for (std::size_t i = 0; i < r; ++i) m.push_back(rng.vec(c, -3, 3));
    auto ed = elementary_divisors(m);
    Int prod = 1;
    for (std::size_t k = 1; k <= std::min(r, c); ++k) {
      Int g = minor_gcd(m, k);
      if (g == 0) {
        CHECK(ed.size() < k);
        break;
      }
      REQUIRE(ed.size() >= k);
      prod *= ed[k - 1];
      CHECK(prod == g);
    }
  }
}

TEST_CASE("solve_exact examples") {
  CHECK(*solve_exact(im({{1, 0}, {0, 1}}), QVec{Rat(3), Rat(-1, 2)}) == QVec{Rat(3), Rat(-1, 2)});
  CHECK(*solve_exact(im({{2}}), QVec{Rat(1)}) == QVec{Rat(1, 2)});
  CHECK(*solve_exact(im({{1, 1}, {1, -1}}), QVec{Rat(2), Rat(0)}) == QVec{Rat(1), Rat(1)});
  CHECK_FALSE(solve_exact(im({{1, 1}, {1, 1}}), QVec{Rat(1), Rat(2)}).has_value());
}

TEST_CASE("solve_exact matches Cramer's rule") {
  Rng rng(15);
  for (int t = 0; t < 300; ++t) {
    std::size_t n = rng.uniform(1, 3);
    IMat a;
    for (std::size_t i = 0; i < n; ++i) a.push_back(rng.vec(n, -4, 4));
    Int det = cofactor_det(a);
    if (det == 0) continue;
    QVec b;
    for (std::size_t i = 0; i < n; ++i) b.emplace_back(rng.uniform(-5, 5));
    auto x = solve_exact(a, b);
    REQUIRE(x.has_value());
    for (std::size_t j = 0; j < n; ++j) {
      // Cramer with integer right-hand side
      IMat aj = a;
      for (std::size_t i = 0; i < n; ++i) aj[i][j] = b[i].get_num();
      Rat expect(cofactor_det(aj), det);
      expect.canonicalize();
      CHECK((*x)[j] == expect);
    }
  }
}

TEST_CASE("integer kernel is saturated") {
  auto k = integer_kernel(im({{2, 4, 6}}), 3);
  CHECK(k.size() == 2);
  for (const auto& v : k) CHECK(2 * v[0] + 4 * v[1] + 6 * v[2] == 0);
  CHECK(is_lattice_basis_part(k));
}

TEST_CASE("unimodular inverse") {
  auto inv = unimodular_inverse(im({{1, 1}, {2, 3}}));
  REQUIRE(inv.has_value());
  CHECK(*inv == im({{3, -1}, {-2, 1}}));
  CHECK_FALSE(unimodular_inverse(im({{1, 0}, {0, 2}})).has_value());
}
