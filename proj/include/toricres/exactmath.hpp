#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tr {

using Int = mpz_class;
using Rat = mpq_class;
using IVec = std::vector<Int>;
using QVec = std::vector<Rat>;
using IMat = std::vector<IVec>;
using QMat = std::vector<QVec>;

// (floor(r), ceil(r)).
std::pair<Int, Int> floor_ceil(const Rat& r);
Int floor_of(const Rat& r);
Int ceil_of(const Rat& r);
bool is_integer(const Rat& r);

Int dot(const IVec& a, const IVec& b);
Rat dot(const IVec& a, const QVec& b);
Rat dot(const QVec& a, const QVec& b);

IVec add(const IVec& a, const IVec& b);
IVec sub(const IVec& a, const IVec& b);
IVec scale(const Int& c, const IVec& a);
QVec add(const QVec& a, const QVec& b);
QVec sub(const QVec& a, const QVec& b);
QVec scale(const Rat& c, const QVec& a);

IVec zero_ivec(std::size_t n);
IVec unit_ivec(std::size_t n, std::size_t i);
QVec to_qvec(const IVec& v);
bool is_zero(const IVec& v);
bool is_zero(const QVec& v);

// gcd of the entries (0 for the zero vector).
Int content(const IVec& v);
// v divided by its content; the zero vector is returned unchanged.
IVec primitive(const IVec& v);
// The primitive integer vector on the ray through v (v must be nonzero for a ray).
IVec primitive(const QVec& v);
// Least common multiple of the denominators.
Int common_denominator(const QVec& v);
// Exact conversion; throws if some entry is not an integer.
IVec to_ivec(const QVec& v);

// Row-style Hermite normal form: H = U * M with U unimodular, H in row echelon form,
// positive pivots and entries above each pivot reduced into [0, pivot).
struct HermiteResult {
  IMat H;
  IMat U;
};
HermiteResult hermite_normal_form(const IMat& M);

// Nonzero elementary divisors of M, in divisibility order.
std::vector<Int> elementary_divisors(const IMat& M);

// True iff the rows extend to a basis of Z^n.
bool is_lattice_basis_part(const IMat& vectors);

std::size_t rank(const IMat& M);
std::size_t rank(const QMat& M);
Int determinant(const IMat& M);
// Inverse of a square matrix with determinant +-1.
std::optional<IMat> unimodular_inverse(const IMat& M);

// Some x with A x = b, free variables set to zero; none when inconsistent.
std::optional<QVec> solve_exact(const IMat& A, const QVec& b);
std::optional<QVec> solve_exact(const QMat& A, const QVec& b);

// Saturated basis of {x in Z^n : A x = 0}; n is the column count.
IMat integer_kernel(const IMat& A, std::size_t n);

// Canonical basis of the row span: reduced row echelon rows scaled to primitive integers.
IMat canonical_row_basis(const IMat& rows, std::size_t n);

// Orthogonal projection of v onto the complement of span(basis); basis rows independent.
QVec project_out(const QVec& v, const IMat& basis);

IMat transpose(const IMat& M, std::size_t cols);

std::string to_string(const IVec& v, const char* sep = ",");
std::string to_string(const QVec& v, const char* sep = ",");
std::string to_string(const Rat& r);

}  // namespace tr
