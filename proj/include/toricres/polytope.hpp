#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "toricres/cone.hpp"
#include "toricres/fan.hpp"

namespace tr {

struct PolytopeFace;

// conv(points) + convcone(recession) in R^d, handled through its homogenization cone
// cone({(x, 1)} u {(y, 0)}) in R^(d+1).
//
// The minimal faces are translates of the lineality space L of the recession cone; each is
// represented by its unique point orthogonal to L. The normal cone of a minimal face is the
// projection of the matching face of the dual homogenization cone.
class PseudoPolytope {
 public:
  PseudoPolytope() = default;
  PseudoPolytope(std::size_t d, const std::vector<QVec>& points, const IMat& recession);

  std::size_t ambient_dim() const { return d_; }
  // Representatives of the minimal faces, sorted.
  const std::vector<QVec>& vertices() const { return vertices_; }
  // c(S): number of minimal faces.
  std::size_t characteristic_number() const { return vertices_.size(); }
  const Cone& stab() const { return stab_; }
  const Cone& homogenization() const { return homog_; }
  // Generators of stab: its rays and both signs of its lineality basis.
  IMat recession_generators() const;

  bool contains(const QVec& x) const;
  // min over S of <w, .>; w must lie in the dual of stab.
  Rat ord(const QVec& w) const;
  PolytopeFace face_at(const QVec& w) const;
  // Normal cone of the i-th minimal face.
  const Cone& vertex_normal_cone(std::size_t i) const { return normal_cones_[i]; }
  Fan normal_fan() const;

  friend bool operator==(const PseudoPolytope& a, const PseudoPolytope& b) {
    return a.d_ == b.d_ && a.vertices_ == b.vertices_ && a.stab_ == b.stab_;
  }

 private:
  std::size_t d_ = 0;
  std::vector<QVec> vertices_;
  Cone stab_;
  Cone homog_;
  std::vector<Cone> normal_cones_;
};

struct PolytopeFace {
  std::vector<QVec> vertices;  // minimal-face representatives in the face
  Cone recession;              // stab of the face
  QVec witness;
  Cone normal_cone;
};

PseudoPolytope minkowski_sum(const PseudoPolytope& s, const PseudoPolytope& t);
// S + (dual of delta): the chart polytope over the cone delta.
PseudoPolytope chart_polytope(const PseudoPolytope& s, const Cone& delta);

// Sorted set of <b_H, v> over the minimal faces.
std::vector<Rat> height_set(const Cone& H, const PseudoPolytope& t);
Rat height(const Cone& H, const PseudoPolytope& t);
Int denominator(const PseudoPolytope& t);

struct PairHeight {
  std::vector<Rat> values;          // sorted height set of the pair
  Rat height;
  std::vector<std::size_t> skeleton;  // indices into S.vertices()
};

// Height data of the pair (phi, S): minimal faces whose normal cone meets some maximal
// cone of phi in full dimension.
PairHeight pair_height(const Cone& H, const Fan& phi, const PseudoPolytope& s);

struct Levels {
  Fan pi;
  Fan sigma;
};
Levels levels(const Cone& H, const Fan& phi, const PseudoPolytope& s, const Rat& h);

struct GProfile {
  bool weierstrass = false;
  bool simple = false;
  std::optional<QVec> top;  // the G-top minimal face when of G-Weierstrass type
  Rat height;
};
GProfile polytope_G_profile(const PseudoPolytope& s, const Cone& G);

}  // namespace tr
