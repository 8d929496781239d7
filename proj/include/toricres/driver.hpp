#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "toricres/newton.hpp"
#include "toricres/toric.hpp"
#include "toricres/upward.hpp"

namespace tr {

struct Problem {
  Field field = Field::rationals();
  std::vector<std::string> vars;
  std::size_t z = 0;
  FactoredPoly phi;
  int order = 16;
  std::vector<Rat> values{1, -1, 2};

  // Product of the factors, without the unit.
  MultiPoly core() const;
};

struct ProblemOverrides {
  std::optional<Field> field;
  std::optional<std::string> z;
  std::optional<int> order;
  std::optional<std::vector<Rat>> values;
};

// Line-oriented problem file: field, vars, z, unit, factor lines and # comments.
Problem parse_problem(const std::string& text, const ProblemOverrides& overrides = {});
std::string problem_text(const Problem& p);

// "1,-1,2" -> values; zero is rejected since off-face chart values must be nonzero.
std::vector<Rat> parse_values(const std::string& text);
// "Q" or "Fp:<p>".
Field parse_field(const std::string& text);

struct CheckReport {
  WeierstrassData weierstrass;
  SimpleWitness simple;
  std::vector<RemovableFace> removable;  // on the main factor
  std::optional<InvData> inv;            // when of Weierstrass type
  std::string str(const std::vector<std::string>& names) const;
};
CheckReport check_problem(const Problem& p);

std::string newton_report(const Problem& p);

// The upward subdivision of the face fan of the orthant for H = the z-axis and S = the
// Newton polyhedron of the problem.
UpwardSubdivisionRecord problem_usd(const Problem& p);
std::string usd_report(const Problem& p, const UpwardSubdivisionRecord& rec, const std::vector<ToricChart>& cs);

// Extracts and re-validates the FAN block of a usd report (or of a plain fan file).
std::string export_fan(const std::string& report);

struct Branch {
  Cone theta;
  IVec gamma;
  std::size_t chart = 0;
  std::vector<Rat> values;  // chart values c_i, zero exactly on the edges of theta
  Problem local;            // chart variables, z = the translated gamma variable
  bool weierstrass = false;
  InvData inv;
  std::string verdict;      // "ok" or the failed conclusion
};

struct StepReport {
  InvData before;
  UpwardSubdivisionRecord rec;
  std::vector<ToricChart> charts;
  std::vector<Branch> branches;
  std::size_t outer = 0;       // cones of the subdivision not meeting the open orthant
  std::size_t violations = 0;
  std::string str(const Problem& p) const;
};

// Checks the hypotheses (PreconditionError with the locus otherwise), subdivides, and
// evaluates every sampled fiber point. Failed conclusions are counted, not thrown.
StepReport subdivision_step(const Problem& p);

// Splits pulled-back factors into coordinate, unit and remaining parts; the unit is kept
// modulo total degree order.
FactoredPoly local_factors(const FactoredPoly& pulled, int order);

enum class Adversary { exhaustive, worst };

struct GameState {
  std::size_t id = 0;
  std::size_t depth = 0;
  std::optional<std::size_t> parent;
  std::string via;     // branch description leading here
  Problem problem;
  InvData inv;
  bool weierstrass = false;
  std::string action;  // win, tilt, eliminate, recenter, subdivide, stop
  std::string detail;
};

struct GameTrace {
  Adversary adversary = Adversary::exhaustive;
  std::vector<GameState> states;
  bool won = false;
  std::string stop_reason;  // empty when won
  std::size_t violations = 0;
  std::size_t max_depth = 0;
  std::string str(const Problem& p, std::size_t max_steps) const;
};

GameTrace play_game(const Problem& p, Adversary adversary, std::size_t max_steps);

}  // namespace tr
