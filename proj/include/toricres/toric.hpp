#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "toricres/cone.hpp"
#include "toricres/fan.hpp"
#include "toricres/newton.hpp"
#include "toricres/upward.hpp"

namespace tr {

// The affine chart of a maximal regular cone: chart variable u_i is the character of the
// dual basis vector of edges[i], and x maps to prod_i u_i^<edges[i], f_x>.
struct ToricChart {
  std::size_t id = 0;
  Cone delta;
  IMat edges;  // primitive generators, in the order of delta.rays()
  IMat dual;   // dual[i] pairs to 1 with edges[i] and to 0 with the others
};

// One chart per maximal cone, in the fan's order of maximal cones.
std::vector<ToricChart> charts(const Fan& sigma);

// Variable names u1..ud.
std::vector<std::string> chart_variable_names(std::size_t d);

// "x=u1*u2^2 z=u1*u2^3" for the untranslated chart.
std::string chart_substitution_str(const ToricChart& chart, const std::vector<std::string>& names);

// Pullback to the local coordinates u_i - c_i at the point with chart values c:
// x -> prod_i (u_i + c_i)^<edges[i], f_x>.
MultiPoly pullback(const ToricChart& chart, const std::vector<Rat>& c, const MultiPoly& phi);
FactoredPoly pullback(const ToricChart& chart, const std::vector<Rat>& c, const FactoredPoly& phi);

// The face of delta spanned by the edges with c_i == 0.
Cone point_face(const ToricChart& chart, const std::vector<Rat>& c);

struct LocalFrame {
  IVec gamma;             // owner of theta among the free rays
  Cone delta;             // least maximal cone of Psi(gamma) containing theta + gamma
  std::size_t z_bar = 0;  // index of gamma among delta's edges
};

// Frame for a point whose orbit cone theta has relative interior in the open orthant.
LocalFrame chart_local_frame(const UpwardSubdivisionRecord& rec, const Cone& theta);

// For every ray of sigma, the ids of the charts whose cone has it as an edge.
std::map<IVec, std::vector<std::size_t>> divisor_ledger(const std::vector<ToricChart>& cs);

}  // namespace tr
