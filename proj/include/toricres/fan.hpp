#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toricres/cone.hpp"

namespace tr {

// A finite face-closed collection of cones in which any two cones meet in a common face.
// Cones are kept sorted by their canonical order; the maximal cones are cached.
class Fan {
 public:
  Fan() = default;

  // Face-closes the maximal cones and checks the fan axioms; throws PreconditionError
  // naming the offending pair.
  static Fan from_maximal(std::size_t d, const std::vector<Cone>& cones);
  // Face closure without the pairwise check; for cone sets already known to form a fan.
  static Fan from_maximal_trusted(std::size_t d, const std::vector<Cone>& cones);
  // The faces of a single cone.
  static Fan face_fan(const Cone& c);

  std::size_t ambient_dim() const { return d_; }
  // Largest dimension of a cone; 0 for the empty fan.
  std::size_t dim() const;
  const std::vector<Cone>& cones() const { return cones_; }
  const std::vector<Cone>& maximal() const { return maximal_; }
  bool empty() const { return cones_.empty(); }

  bool has(const Cone& c) const;
  // Primitive generators of the one-dimensional cones, sorted.
  IMat rays() const;
  std::vector<Cone> cones_of_dim(std::size_t k) const;
  bool is_flat() const;
  bool is_regular() const;
  bool support_contains(const QVec& x) const;
  // The cone whose relative interior holds x; none when x is outside the support.
  std::optional<Cone> carrier(const QVec& x) const;
  // Cones containing c (the star of c).
  std::vector<Cone> star_of(const Cone& c) const;
  // Cones contained in the given cone.
  Fan restricted_to(const Cone& region) const;
  // Cones contained in some maximal cone of the given fan.
  Fan restricted_to(const Fan& region) const;

  std::string str() const;

  friend bool operator==(const Fan& a, const Fan& b) { return a.d_ == b.d_ && a.cones_ == b.cones_; }
  friend bool operator!=(const Fan& a, const Fan& b) { return !(a == b); }

 private:
  std::size_t d_ = 0;
  std::vector<Cone> cones_;
  std::vector<Cone> maximal_;
};

// Checks the fan axioms on an explicit cone collection; when face_close is set the
// collection is first closed under faces.
Fan validate_fan(std::size_t d, const std::vector<Cone>& cones, bool face_close);

// Every cone of sigma lies in some cone of phi.
bool is_subdivision(const Fan& sigma, const Fan& phi);
// |sigma| = |phi|, decided cone by cone (full-dimensional pieces and interior walls).
bool same_support(const Fan& sigma, const Fan& phi);
// The support of sigma contains the cone.
bool support_contains(const Fan& sigma, const Cone& c);

// All intersections of one cone from each fan. An empty list gives {whole space}.
Fan real_intersection(const std::vector<Fan>& fans, std::size_t d);

// Star subdivision with center F; sigma regular, F in sigma.
Fan star_subdivision(const Fan& sigma, const Cone& F);
// Left fold of star_subdivision; each center must be regular of dim >= 2 and belong to
// the current fan, otherwise PreconditionError naming the 1-based step.
Fan iterated_star(const Fan& sigma, const std::vector<Cone>& centers);

// Data of an H-simple fan: chambers sorted by the H-order, skeleton walls, and the
// structure constants c(i, E) for the edges E of the support other than H.
struct HSimpleProfile {
  Cone H;
  Cone support;
  std::vector<Cone> chambers;   // index 0 holds chamber 1
  std::vector<Cone> skeleton;   // skeleton[0] = H^op, skeleton[i] = chambers[i-1] n chambers[i]
  IMat edges;                   // primitive generators of the support edges other than H
  std::vector<std::vector<Rat>> constants;  // constants[i][e] = c(i+1, edges[e])

  std::size_t size() const { return chambers.size(); }
  // c(i, E) with 1-based i.
  Rat constant(std::size_t i, const IVec& edge) const;
};

// Profile of sigma with respect to the edge H of its support; none when sigma is not
// H-simple. Throws PreconditionError when |sigma| is not a regular cone or H is not an edge.
std::optional<HSimpleProfile> h_simple_profile(const Fan& sigma, const Cone& H);

// Support of the fan when it is a single cone (the cone generated by all rays and
// lineality), after checking that the fan covers it.
Cone support_cone(const Fan& sigma);

// Text form: "FAN dim=<d> rays=<k> cones=<m>", then "RAY <i>: <d integers>" with 0-based
// indices into the sorted rays, then "CONE: <ray indices>" per maximal cone.
std::string fan_text(const Fan& sigma);
Fan parse_fan_text(const std::string& text);

}  // namespace tr
