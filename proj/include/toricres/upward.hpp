#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "toricres/cone.hpp"
#include "toricres/fan.hpp"
#include "toricres/polytope.hpp"

namespace tr {

struct HBoundaries {
  std::vector<Cone> upper;
  std::vector<Cone> lower;
};

// Facets of delta through which the lines x + R b_H leave delta upwards (upper) or
// downwards (lower).
HBoundaries h_boundaries(const Cone& delta, const Cone& H);

// One chart of an admissible pair: a maximal cone delta of phi, the polytope S + delta^v
// and the H-simple profile of its normal fan.
struct Chart {
  Cone delta;
  PseudoPolytope polytope;
  HSimpleProfile profile;
};

// Checks that (H, phi) is admissible for S: phi flat and regular, H a ray of phi contained
// in every maximal cone, |phi| inside the normal fan support, and every chart H-simple.
// Throws PreconditionError naming the first offending cone.
std::vector<Chart> check_admissible(const Cone& H, const Fan& phi, const PseudoPolytope& s);

struct CharacteristicData {
  Cone H;
  IMat edges;                           // rays of phi other than H, sorted
  std::vector<Rat> gamma;               // parallel to edges
  std::size_t m = 0;                    // sum of ceilings
  std::size_t m_bar = 0;                // sum of floors
  std::vector<std::size_t> fractional;  // indices of edges with non-integral gamma
  std::vector<Rat> h_of;                // level h(E) for fractional edges, 0 elsewhere
  Rat height;
  std::vector<Rat> values;              // height set of the pair
};

// Requires a positive pair height.
CharacteristicData characteristic_function(const Cone& H, const Fan& phi, const PseudoPolytope& s);

// Edge indices E(1..m): integer slots edge by edge in edge order, then the fractional
// edges by h descending (edge order on ties).
std::vector<std::size_t> compatible_mapping(const CharacteristicData& data);

struct BasicSubdivisionRecord {
  Cone H;
  Fan phi;
  std::size_t m = 0;
  IMat E;                                // E[i-1] = b_E(i)
  IMat edges;                            // distinct entries of E, sorted
  std::vector<std::vector<std::size_t>> s;  // s[i][e] for i = 0..m
  std::vector<Cone> F;                   // F[i-1] = F(i)
  std::vector<Cone> G;                   // G[i-1] = G(i)
  std::vector<Cone> H_seq;               // H_seq[i-1] = H(i), i = 1..m+1
  Fan omega;
  std::vector<Fan> parts;                // Omega(i)
  std::vector<std::vector<Cone>> open_parts;  // Omega°(i)
};

BasicSubdivisionRecord basic_subdivision(const Cone& H, const Fan& phi, const IMat& E);

struct HeightReport {
  Rat outer;
  std::vector<Rat> levels;  // height(H(i), Omega(i), S), i = 1..m+1
};

// Throws InvariantViolation unless every level is below the outer height and levels
// i <= m_bar vanish.
HeightReport height_inequality_check(const BasicSubdivisionRecord& rec, std::size_t m_bar,
                                     const PseudoPolytope& s);

struct LevelTrace {
  std::size_t depth = 0;
  Cone H;
  Rat height;
  std::size_t m = 0;
  std::size_t m_bar = 0;
};

struct UsdNode {
  Cone H;
  Fan phi;
  Rat height;
  std::size_t m = 0;
  std::size_t m_bar = 0;
  std::optional<BasicSubdivisionRecord> basic;
  std::size_t M = 0;
  std::vector<std::size_t> M_prefix;  // M(0..m+1)
  std::vector<UsdNode> children;
};

struct LowerPart {
  std::size_t index = 0;       // I(Gamma)
  Fan psi;                     // Psi(Gamma)
  std::vector<Cone> psi_open;  // Psi°(Gamma), sorted
};

struct UpwardSubdivisionRecord {
  Cone H;
  Fan phi;
  std::size_t M = 0;
  std::vector<Cone> centers;
  Fan sigma_star;
  std::vector<LevelTrace> trace;  // preorder over the recursion
  UsdNode root;
  std::map<IVec, LowerPart> lower;  // keyed by the primitive generator of Gamma
};

// Builds the recursion, checks strict height descent at every node and that the result
// subdivides both phi and the normal fan of S.
UpwardSubdivisionRecord upward_subdivision(const Cone& H, const Fan& phi, const PseudoPolytope& s);

// The lower parts held in the record, after checking their partition properties.
const std::map<IVec, LowerPart>& lower_parts(const UpwardSubdivisionRecord& rec);

// The free ray owning theta through the open lower parts.
IVec owner_of(const UpwardSubdivisionRecord& rec, const Cone& theta);

struct HardHeightReport {
  std::size_t checked = 0;     // cones with dim Lambda = dim Delta - 1
  std::size_t equalities = 0;
  std::size_t constant = 0;    // cones with dim Lambda = dim Delta
};

HardHeightReport hard_height_check(const UpwardSubdivisionRecord& rec, const PseudoPolytope& s);

}  // namespace tr
