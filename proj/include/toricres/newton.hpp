#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "toricres/exactmath.hpp"
#include "toricres/polytope.hpp"

namespace tr {

// The coefficient field: Q when p == 0, otherwise F_p with elements stored as integers in [0, p).
struct Field {
  unsigned long p = 0;

  static Field rationals() { return {}; }
  static Field prime(unsigned long p);

  bool is_rational() const { return p == 0; }
  Rat reduce(const Rat& a) const;
  Rat inverse(const Rat& a) const;
  Rat div(const Rat& a, const Rat& b) const { return reduce(a * inverse(b)); }
  std::string str() const;
  friend bool operator==(const Field& a, const Field& b) { return a.p == b.p; }
};

using Exponent = std::vector<int>;

// Sparse polynomial in n variables; no zero coefficients are stored.
class MultiPoly {
 public:
  MultiPoly() = default;
  MultiPoly(Field f, std::size_t n) : field_(f), n_(n) {}

  static MultiPoly constant(Field f, std::size_t n, const Rat& c);
  static MultiPoly variable(Field f, std::size_t n, std::size_t i);
  static MultiPoly monomial(Field f, const Exponent& e, const Rat& c);

  const Field& field() const { return field_; }
  std::size_t nvars() const { return n_; }
  const std::map<Exponent, Rat>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rat coeff(const Exponent& e) const;
  Rat constant_term() const { return coeff(Exponent(n_, 0)); }
  void add_term(const Exponent& e, const Rat& c);
  std::vector<Exponent> support() const;
  // Largest total degree; -1 for zero.
  int total_degree() const;
  int degree_in(std::size_t var) const;

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  MultiPoly scaled(const Rat& c) const;
  MultiPoly pow(unsigned k) const;

  // Terms of total degree < order.
  MultiPoly truncated(int order) const;
  // Product truncated below total degree order.
  static MultiPoly mul_trunc(const MultiPoly& a, const MultiPoly& b, int order);
  // Inverse of a unit modulo total degree order.
  MultiPoly inverse_trunc(int order) const;

  // Replaces variable var by q.
  MultiPoly substitute(std::size_t var, const MultiPoly& q) const;
  MultiPoly substitute_trunc(std::size_t var, const MultiPoly& q, int order) const;
  // Exact division by the monomial x^e; every term must be divisible.
  MultiPoly divide_monomial(const Exponent& e) const;
  // Componentwise minimum exponent of the support.
  Exponent monomial_content() const;
  // Coefficient of var^k as a polynomial in the remaining variables (same arity, var exponent 0).
  MultiPoly coefficient_in(std::size_t var, int k) const;

  std::string str(const std::vector<std::string>& names) const;

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.field_ == b.field_ && a.n_ == b.n_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

 private:
  Field field_;
  std::size_t n_ = 0;
  std::map<Exponent, Rat> terms_;
};

// Parses sums of terms built from rationals, declared variable names, '*', '^', '+', '-' and
// parentheses. Positions in errors are reported relative to (line, column0).
MultiPoly parse_poly(const std::string& text, const std::vector<std::string>& names, Field f, int line = 1,
                     int column0 = 1);

// A unit times a product of factors with multiplicities.
struct FactoredPoly {
  MultiPoly unit;
  std::vector<std::pair<MultiPoly, unsigned>> factors;
  MultiPoly expand() const;
};

PseudoPolytope newton_polyhedron(const MultiPoly& phi);

struct OrdIn {
  std::optional<Rat> ord;  // none stands for infinity (phi == 0)
  MultiPoly initial;
};
OrdIn ord_in(const QVec& w, const MultiPoly& phi);
// Sum of the terms whose exponents lie on the face of the Newton polyhedron cut out by w.
MultiPoly partial_sum(const QVec& w, const MultiPoly& phi);

struct WeierstrassData {
  bool is_type = false;
  std::optional<Exponent> top;  // the z-top vertex
  int z_height = 0;
  int z_order = 0;              // ord_z
};
WeierstrassData weierstrass_data(std::size_t z, const MultiPoly& phi);

// phi = unit * x^monomial * z^b * poly with poly a z-Weierstrass polynomial, modulo total degree order.
struct WeierstrassForm {
  MultiPoly unit;
  Exponent monomial;  // includes the z^b part
  MultiPoly poly;
  int order = 0;
};
WeierstrassForm weierstrass_normalize(std::size_t z, const MultiPoly& phi, int order);

struct SimpleWitness {
  bool simple = false;
  std::string reason;  // empty when simple
};
SimpleWitness is_z_simple(std::size_t z, const MultiPoly& phi);

struct RemovableFace {
  Exponent other;   // the far endpoint of the compact edge from the top vertex
  Exponent slope;   // c(F): chi = lambda x^slope
  Rat lambda;
  MultiPoly chi;
};
// Removable compact edges through the top vertex h f_z, sorted by (weight of slope, slope).
std::vector<RemovableFace> removable_faces(std::size_t z, const MultiPoly& phi);

struct EliminationStep {
  RemovableFace face;
  MultiPoly after;
};
struct Elimination {
  MultiPoly chi0;
  MultiPoly result;  // phi with z replaced by z - chi0
  std::vector<EliminationStep> steps;
  int order = 0;
};
// Greedy removal of removable edges of weight below order.
Elimination eliminate_removable(std::size_t z, const MultiPoly& psi, int order);

enum class FactorKind { coordinate, smooth, main };
FactorKind classify_factor(std::size_t z, const MultiPoly& omega);

FactoredPoly main_factor(std::size_t z, const FactoredPoly& phi);

// z = g(x) with omega(x, g) = 0 modulo total degree order; omega must have a unit z-derivative.
MultiPoly implicit_root(std::size_t z, const MultiPoly& omega, int order);

struct InvData {
  int inv = 0;
  std::optional<std::size_t> inv2;  // only when inv == 0
  std::vector<std::string> warnings;
};
InvData inv_inv2(std::size_t z, const FactoredPoly& phi, int order);

// A non-smooth factor with an edge whose initial form has a simple root lifting to a smooth branch.
std::optional<std::string> smooth_branch_diagnostic(std::size_t z, const MultiPoly& omega);

struct Tilt {
  std::vector<Rat> alpha;  // alpha[x] for x != z, alpha[z] = 0
  MultiPoly tilted;        // phi(x' + alpha z, z)
  int h = 0;               // ord(phi)
};
Tilt generic_tilt(std::size_t z, const MultiPoly& phi);

// conv(rho(a)) + orthant of the x-hyperplane over support points with a_z < h; none if empty.
std::optional<PseudoPolytope> rho_projection(std::size_t z, int h, const MultiPoly& phi);

// u x^alpha - v x^beta = w x^gamma with u, v, w units, checked modulo total degree order;
// returns whether alpha and beta are comparable. Throws PreconditionError if the identity fails.
bool monotonicity_check(const MultiPoly& u, const Exponent& alpha, const MultiPoly& v, const Exponent& beta,
                        const MultiPoly& w, const Exponent& gamma, int order);

std::string exponent_str(const Exponent& e);

}  // namespace tr
