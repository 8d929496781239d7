#include "toricres/exactmath.hpp"

#include <algorithm>
#include <sstream>

#include "toricres/errors.hpp"

namespace tr {

std::pair<Int, Int> floor_ceil(const Rat& r) { return {floor_of(r), ceil_of(r)}; }

Int floor_of(const Rat& r) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Int ceil_of(const Rat& r) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

bool is_integer(const Rat& r) { return r.get_den() == 1; }

Int dot(const IVec& a, const IVec& b) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rat dot(const IVec& a, const QVec& b) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += Rat(a[i]) * b[i];
  return s;
}

Rat dot(const QVec& a, const QVec& b) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

IVec add(const IVec& a, const IVec& b) {
  IVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

IVec sub(const IVec& a, const IVec& b) {
  IVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

IVec scale(const Int& c, const IVec& a) {
  IVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

QVec add(const QVec& a, const QVec& b) {
  QVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

QVec sub(const QVec& a, const QVec& b) {
  QVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

QVec scale(const Rat& c, const QVec& a) {
  QVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

IVec zero_ivec(std::size_t n) { return IVec(n, Int(0)); }

IVec unit_ivec(std::size_t n, std::size_t i) {
  IVec v(n, Int(0));
  v[i] = 1;
  return v;
}

QVec to_qvec(const IVec& v) {
  QVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i];
  return r;
}

bool is_zero(const IVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

bool is_zero(const QVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
}

Int content(const IVec& v) {
  Int g = 0;
  for (const auto& x : v) g = gcd(g, x);
  return g;
}

IVec primitive(const IVec& v) {
  Int g = content(v);
  if (g == 0 || g == 1) return v;
  IVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] / g;
  return r;
}

Int common_denominator(const QVec& v) {
  Int l = 1;
  for (const auto& x : v) l = lcm(l, Int(x.get_den()));
  return l;
}

IVec primitive(const QVec& v) {
  Int l = common_denominator(v);
  IVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = Int(v[i] * l);
  return primitive(r);
}

IVec to_ivec(const QVec& v) {
  IVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!is_integer(v[i])) throw InvariantViolation("to_ivec: non-integral entry " + v[i].get_str());
    r[i] = v[i].get_num();
  }
  return r;
}

namespace {

std::size_t column_count(const IMat& M) { return M.empty() ? 0 : M[0].size(); }

IMat identity(std::size_t n) {
  IMat I(n, IVec(n, Int(0)));
  for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

void row_axpy(IVec& target, const Int& q, const IVec& source) {
  for (std::size_t j = 0; j < target.size(); ++j) target[j] -= q * source[j];
}

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Reduced row echelon form over Q; returns the pivot columns.
std::vector<std::size_t> rref(QMat& A, std::size_t n) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < A.size(); ++c) {
    std::size_t p = r;
    while (p < A.size() && A[p][c] == 0) ++p;
    if (p == A.size()) continue;
    std::swap(A[p], A[r]);
    Rat inv = 1 / A[r][c];
    for (auto& x : A[r]) x *= inv;
    for (std::size_t i = 0; i < A.size(); ++i) {
      if (i == r || A[i][c] == 0) continue;
      Rat f = A[i][c];
      for (std::size_t j = 0; j < A[i].size(); ++j) A[i][j] -= f * A[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  A.resize(r);
  return pivots;
}

QMat to_qmat(const IMat& M) {
  QMat Q;
  Q.reserve(M.size());
  for (const auto& row : M) Q.push_back(to_qvec(row));
  return Q;
}

}  // namespace

HermiteResult hermite_normal_form(const IMat& M) {
  const std::size_t m = M.size();
  const std::size_t n = column_count(M);
  HermiteResult res{M, identity(m)};
  IMat& H = res.H;
  IMat& U = res.U;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    while (true) {
      std::size_t best = m;
      for (std::size_t i = r; i < m; ++i) {
        if (H[i][c] != 0 && (best == m || abs(H[i][c]) < abs(H[best][c]))) best = i;
      }
      if (best == m) break;
      std::swap(H[best], H[r]);
      std::swap(U[best], U[r]);
      bool done = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (H[i][c] == 0) continue;
        Int q = floor_div(H[i][c], H[r][c]);
        row_axpy(H[i], q, H[r]);
        row_axpy(U[i], q, U[r]);
        if (H[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (H[r][c] == 0) continue;
    if (H[r][c] < 0) {
      for (auto& x : H[r]) x = -x;
      for (auto& x : U[r]) x = -x;
    }
    for (std::size_t i = 0; i < r; ++i) {
      Int q = floor_div(H[i][c], H[r][c]);
      if (q == 0) continue;
      row_axpy(H[i], q, H[r]);
      row_axpy(U[i], q, U[r]);
    }
    ++r;
  }
  return res;
}

std::vector<Int> elementary_divisors(const IMat& M) {
  IMat A = M;
  const std::size_t m = A.size();
  const std::size_t n = column_count(A);
  std::vector<Int> out;
  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    while (true) {
      std::size_t bi = m, bj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (A[i][j] != 0 && (bi == m || abs(A[i][j]) < abs(A[bi][bj]))) bi = i, bj = j;
      if (bi == m) return out;
      std::swap(A[bi], A[t]);
      for (auto& row : A) std::swap(row[bj], row[t]);
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        Int q = floor_div(A[i][t], A[t][t]);
        row_axpy(A[i], q, A[t]);
        if (A[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        Int q = floor_div(A[t][j], A[t][t]);
        for (std::size_t i = 0; i < m; ++i) A[i][j] -= q * A[i][t];
        if (A[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      // The pivot must divide the remaining block; otherwise fold a row in and retry.
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (A[i][j] % A[t][t] != 0) {
            for (std::size_t k = 0; k < n; ++k) A[t][k] += A[i][k];
            divides = false;
            break;
          }
      if (divides) break;
    }
    out.push_back(abs(A[t][t]));
  }
  return out;
}

bool is_lattice_basis_part(const IMat& vectors) {
  if (vectors.empty()) return true;
  auto d = elementary_divisors(vectors);
  if (d.size() != vectors.size()) return false;
  return std::all_of(d.begin(), d.end(), [](const Int& x) { return x == 1; });
}

std::size_t rank(const QMat& M) {
  if (M.empty()) return 0;
  QMat A = M;
  return rref(A, A[0].size()).size();
}

std::size_t rank(const IMat& M) { return rank(to_qmat(M)); }

Int determinant(const IMat& M) {
  const std::size_t n = M.size();
  QMat A = to_qmat(M);
  Rat det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && A[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(A[p], A[c]);
      det = -det;
    }
    det *= A[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (A[i][c] == 0) continue;
      Rat f = A[i][c] / A[c][c];
      for (std::size_t j = c; j < n; ++j) A[i][j] -= f * A[c][j];
    }
  }
  return det.get_num();
}

std::optional<IMat> unimodular_inverse(const IMat& M) {
  const std::size_t n = M.size();
  if (abs(determinant(M)) != 1) return std::nullopt;
  QMat A(n, QVec(2 * n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) A[i][j] = M[i][j];
    A[i][n + i] = 1;
  }
  rref(A, n);
  IMat inv(n, IVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!is_integer(A[i][n + j])) return std::nullopt;
      inv[i][j] = A[i][n + j].get_num();
    }
  return inv;
}

std::optional<QVec> solve_exact(const QMat& A, const QVec& b) {
  const std::size_t n = A.empty() ? 0 : A[0].size();
  QMat aug;
  aug.reserve(A.size());
  for (std::size_t i = 0; i < A.size(); ++i) {
    QVec row = A[i];
    row.push_back(b[i]);
    aug.push_back(std::move(row));
  }
  auto pivots = rref(aug, n + 1);
  if (!pivots.empty() && pivots.back() == n) return std::nullopt;
  QVec x(n, Rat(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug[r][n];
  return x;
}

std::optional<QVec> solve_exact(const IMat& A, const QVec& b) { return solve_exact(to_qmat(A), b); }

IMat transpose(const IMat& M, std::size_t cols) {
  IMat T(cols, IVec(M.size()));
  for (std::size_t i = 0; i < M.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) T[j][i] = M[i][j];
  return T;
}

IMat integer_kernel(const IMat& A, std::size_t n) {
  if (A.empty()) return identity(n);
  auto hr = hermite_normal_form(transpose(A, n));
  IMat K;
  for (std::size_t i = 0; i < n; ++i)
    if (is_zero(hr.H[i])) K.push_back(hr.U[i]);
  return K;
}

IMat canonical_row_basis(const IMat& rows, std::size_t n) {
  QMat A = to_qmat(rows);
  rref(A, n);
  IMat out;
  out.reserve(A.size());
  for (const auto& r : A) out.push_back(primitive(r));
  return out;
}

QVec project_out(const QVec& v, const IMat& basis) {
  if (basis.empty()) return v;
  const std::size_t k = basis.size();
  QMat gram(k, QVec(k));
  QVec rhs(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) gram[i][j] = Rat(dot(basis[i], basis[j]));
    rhs[i] = dot(basis[i], v);
  }
  auto coeff = solve_exact(gram, rhs);
  if (!coeff) throw InvariantViolation("project_out: dependent basis");
  QVec r = v;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < r.size(); ++j) r[j] -= (*coeff)[i] * basis[i][j];
  return r;
}

std::string to_string(const IVec& v, const char* sep) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? sep : "") << v[i].get_str();
  return os.str();
}

std::string to_string(const QVec& v, const char* sep) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? sep : "") << v[i].get_str();
  return os.str();
}

std::string to_string(const Rat& r) { return r.get_str(); }

}  // namespace tr
