#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "toricres/exactmath.hpp"

namespace tr {

struct ConeFace;

// A rational polyhedral cone in R^d, held in both generator and inequality form.
//
// Canonical data: the lineality space C n (-C) as a reduced row basis, the extreme rays
// projected orthogonally off the lineality space and made primitive, the facet normals
// (primitive, projected off the equation space) and the equations spanning span(C)^perp.
// Two cones are equal iff their canonical data agree, so == and < are structural.
class Cone {
 public:
  Cone() = default;

  static Cone zero(std::size_t d);
  static Cone whole(std::size_t d);
  // The nonnegative orthant spanned by the standard basis.
  static Cone orthant(std::size_t d);
  // convcone of the given vectors.
  static Cone from_generators(std::size_t d, const IMat& gens);
  // convcone(rays) + span(lineality).
  static Cone from_rays(std::size_t d, const IMat& rays, const IMat& lineality = {});
  // {x : <a,x> >= 0 for a in ineqs, <e,x> = 0 for e in eqs}.
  static Cone from_inequalities(std::size_t d, const IMat& ineqs, const IMat& eqs = {});

  std::size_t ambient_dim() const { return d_; }
  std::size_t dim() const { return d_ - equations_.size(); }
  const IMat& rays() const { return rays_; }
  const IMat& lineality() const { return lineality_; }
  const IMat& facets() const { return facets_; }
  const IMat& equations() const { return equations_; }

  bool is_strongly_convex() const { return lineality_.empty(); }
  bool is_simplicial() const;
  bool is_regular() const;

  bool contains(const IVec& x) const;
  bool contains(const QVec& x) const;
  bool contains(const Cone& other) const;
  bool in_relint(const QVec& x) const;
  // Sum of the rays; lies in the relative interior.
  IVec relint_point() const;

  Cone dual() const;
  Cone intersect(const Cone& other) const;
  Cone sum(const Cone& other) const;
  Cone minimal_face() const;
  // C n w^perp for w in the dual cone.
  Cone face_of(const QVec& w) const;
  // The face of C whose relative interior contains p (p must lie in C).
  Cone carrier_face(const QVec& p) const;
  bool is_face_of(const Cone& S) const;
  std::vector<ConeFace> faces() const;

  // Sum of the primitive edge generators; defined for regular cones only.
  IVec barycenter() const;

  std::string str() const;

  friend bool operator==(const Cone& a, const Cone& b) {
    return a.d_ == b.d_ && a.lineality_ == b.lineality_ && a.rays_ == b.rays_;
  }
  friend bool operator!=(const Cone& a, const Cone& b) { return !(a == b); }
  friend bool operator<(const Cone& a, const Cone& b);

 private:
  static Cone from_canonical_generators(std::size_t d, const IMat& rays, const IMat& lineality);
  Cone face_from_rays(const std::vector<std::size_t>& ray_indices) const;

  std::size_t d_ = 0;
  IMat rays_;
  IMat lineality_;
  IMat facets_;
  IMat equations_;
};

struct ConeFace {
  Cone cone;
  // Some w in the dual cone with cone = C n w^perp.
  IVec witness;
};

// Face spanned by the edges of S not in F. S must be simplicial and F a face of S.
Cone opposite_face(const Cone& F, const Cone& S);

}  // namespace tr
