// Acceptance run: one PASS/FAIL line per criterion, each with its own time budget.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "support.hpp"
#include "toricres/driver.hpp"
#include "toricres/errors.hpp"

using namespace tr;
using namespace trtest;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Check {
  Outcome& out;
  void operator()(bool cond, const std::string& what) {
    if (!cond && out.ok) out.detail = "first failure: " + what;
    if (!cond) out.ok = false;
  }
};

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<std::string> XZ{"x", "z"};

MultiPoly P(const std::string& s, const std::vector<std::string>& names = XZ, Field f = Field::rationals()) {
  return parse_poly(s, names, f);
}

Cone ray(const IVec& g) { return Cone::from_rays(g.size(), {g}); }

Problem problem_of(const MultiPoly& phi, const std::vector<std::string>& names) {
  Problem p;
  p.field = phi.field();
  p.vars = names;
  p.z = names.size() - 1;
  p.phi = FactoredPoly{MultiPoly::constant(phi.field(), names.size(), 1), {{phi, 1}}};
  return p;
}

// Random polynomial with a pure power of z so that it is of Weierstrass type.
MultiPoly random_weierstrass(Rng& rng, std::size_t n, int max_exp) {
  MultiPoly r(Field::rationals(), n);
  Exponent top(n, 0);
  top[n - 1] = static_cast<int>(rng.uniform(2, max_exp));
  r.add_term(top, 1);
  const long terms = rng.uniform(1, 3);
  for (long t = 0; t < terms; ++t) {
    Exponent e;
    for (std::size_t i = 0; i < n; ++i) e.push_back(static_cast<int>(rng.uniform(0, max_exp)));
    e[n - 1] = static_cast<int>(rng.uniform(0, top[n - 1] - 1));
    if (std::all_of(e.begin(), e.end(), [](int a) { return a == 0; })) continue;
    r.add_term(e, rng.uniform(1, 4));
  }
  return r;
}

std::size_t affine_dim(const std::vector<QVec>& pts, const Cone& rec) {
  QMat m;
  for (std::size_t i = 1; i < pts.size(); ++i) m.push_back(sub(pts[i], pts[0]));
  for (const auto& r : rec.rays()) m.push_back(to_qvec(r));
  for (const auto& l : rec.lineality()) m.push_back(to_qvec(l));
  return m.empty() ? 0 : rank(m);
}

void walk(const UsdNode& node, const PseudoPolytope& s, Check& check, std::size_t& nodes) {
  ++nodes;
  if (node.basic) {
    try {
      const HeightReport hr = height_inequality_check(*node.basic, node.m_bar, s);
      for (std::size_t i = 0; i < hr.levels.size(); ++i) {
        check(hr.levels[i] < hr.outer, "height did not descend at level " + std::to_string(i + 1));
        if (i + 1 <= node.m_bar) check(hr.levels[i] == 0, "level below mbar has nonzero height");
      }
    } catch (const InvariantViolation& e) {
      check(false, e.what());
    }
  }
  for (const auto& child : node.children) {
    check(child.height < node.height, "child height " + to_string(child.height) + " not below " + to_string(node.height));
    walk(child, s, check, nodes);
  }
}

Outcome criterion1() {
  Outcome out;
  Check check{out};
  Problem p = problem_of(P("z^2 + x^3"), XZ);
  check(check_problem(p).str(XZ) == "weierstrass=yes simple=yes removable=none inv=2\n", "check line");
  auto rec = problem_usd(p);
  const IMat rays = rec.sigma_star.rays();
  const std::set<IVec> got(rays.begin(), rays.end());
  const std::set<IVec> want{iv({1, 0}), iv({1, 1}), iv({2, 3}), iv({1, 2}), iv({0, 1})};
  check(got == want, "ray set");
  check(rec.sigma_star.maximal().size() == 4, "four maximal cones");
  StepReport r = subdivision_step(p);
  check(r.violations == 0, "step violations");
  check(!r.branches.empty(), "no branches");
  for (const auto& b : r.branches) check(b.weierstrass && b.inv.inv == 0, "branch with inv != 0");
  if (out.ok) out.detail = std::to_string(r.branches.size()) + " branches, inv 0 everywhere";
  return out;
}

Outcome criterion2() {
  Outcome out;
  Check check{out};
  // The standard cone, a skew regular cone in dim 3, and a 3-dim regular cone inside R^4.
  const std::vector<IMat> bases{im({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}), im({{1, 0, 0}, {1, 1, 0}, {1, 1, 1}}),
                                im({{1, 0, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}})};
  for (const auto& b : bases) {
    const std::size_t d = b[0].size();
    const Cone S = Cone::from_rays(d, b);
    const Fan fs = Fan::face_fan(S);
    auto two = [&](const IVec& u, const IVec& v) { return Cone::from_rays(d, {u, v}); };
    const Cone F1 = two(b[0], b[2]), F2 = two(b[1], b[2]);
    const Cone G1 = two(add(b[0], b[2]), b[1]), G2 = two(add(b[1], b[2]), b[0]);
    const Fan left = iterated_star(fs, {F1, F2, G1});
    const Fan right = iterated_star(fs, {F2, F1, G2});
    check(left == right, "the two iterated star subdivisions differ");
    check(iterated_star(fs, {F1, F2}) != iterated_star(fs, {F2, F1}), "intermediate fans coincide");
    check(left.rays().size() == 6, "ray count is not 3 + 3");
    check(left.is_regular(), "result not regular");
  }
  if (out.ok) out.detail = "3 cones, both sides equal";
  return out;
}

Outcome criterion3() {
  Outcome out;
  Check check{out};
  Rng rng(2024);
  std::size_t instances = 0, nodes = 0, attempts = 0;
  while (instances < 60 && attempts < 5000) {
    ++attempts;
    const std::size_t n = instances % 2 == 0 ? 2 : 3;
    MultiPoly phi = random_weierstrass(rng, n, 6);
    if (!is_z_simple(n - 1, phi).simple) continue;
    ++instances;
    const PseudoPolytope s = newton_polyhedron(phi);
    const Fan phi_fan = Fan::face_fan(Cone::orthant(n));
    try {
      auto rec = upward_subdivision(ray(unit_ivec(n, n - 1)), phi_fan, s);
      walk(rec.root, s, check, nodes);
      const Fan target = real_intersection({s.normal_fan(), phi_fan}, n);
      check(is_subdivision(rec.sigma_star, target), "result does not subdivide the normal fan meet");
      check(same_support(rec.sigma_star, phi_fan), "support changed");
      check(rec.sigma_star.is_regular(), "result not regular");
    } catch (const std::exception& e) {
      check(false, std::string("exception: ") + e.what());
    }
  }
  check(instances >= 50, "fewer than 50 simple instances");
  if (out.ok) out.detail = std::to_string(instances) + " instances, " + std::to_string(nodes) + " nodes";
  return out;
}

Outcome criterion4() {
  Outcome out;
  Check check{out};
  Rng rng(77);
  std::vector<MultiPoly> inputs{P("z^2 + x^3")};
  std::size_t attempts = 0;
  while (inputs.size() < 21 && attempts < 2000) {
    ++attempts;
    const std::size_t n = inputs.size() % 2 == 0 ? 2 : 3;
    MultiPoly phi = random_weierstrass(rng, n, 5);
    if (is_z_simple(n - 1, phi).simple) inputs.push_back(phi);
  }
  check(inputs.size() == 21, "not enough instances");
  std::size_t checked = 0, equalities = 0;
  for (const auto& phi : inputs) {
    const std::size_t n = phi.nvars();
    const PseudoPolytope s = newton_polyhedron(phi);
    try {
      auto rec = upward_subdivision(ray(unit_ivec(n, n - 1)), Fan::face_fan(Cone::orthant(n)), s);
      HardHeightReport r = hard_height_check(rec, s);
      checked += r.checked;
      equalities += r.equalities;
    } catch (const std::exception& e) {
      check(false, std::string("violation: ") + e.what());
    }
  }
  check(checked > 0, "no cones with dim Lambda = dim Delta - 1");
  if (out.ok) out.detail = std::to_string(checked) + " cones checked, " + std::to_string(equalities) + " equalities";
  return out;
}

Outcome criterion5() {
  Outcome out;
  Check check{out};
  Rng rng(5);
  std::size_t cones = 0, polys = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = static_cast<std::size_t>(2 + t % 3);
    IMat gens;
    const long k = rng.uniform(1, static_cast<long>(d) + 2);
    for (long i = 0; i < k; ++i) gens.push_back(rng.vec(d, -3, 3));
    const Cone c = Cone::from_generators(d, gens);
    ++cones;
    const Cone dual = c.dual();
    check(dual.dual() == c, "dual involution");
    std::set<Cone> images;
    const auto faces = c.faces();
    for (const auto& f : faces) {
      IMat span = f.cone.rays();
      for (const auto& l : f.cone.lineality()) span.push_back(l);
      const Cone perp = span.empty() ? Cone::whole(d) : Cone::from_inequalities(d, {}, span);
      const Cone fstar = dual.intersect(perp);
      check(fstar.is_face_of(dual), "dual face is not a face");
      check(f.cone.dim() + fstar.dim() == d, "face dimensions not complementary");
      images.insert(fstar);
    }
    check(images.size() == faces.size() && faces.size() == dual.faces().size(), "face map not bijective");
  }
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = static_cast<std::size_t>(2 + t % 3);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < d; ++i) names.push_back("v" + std::to_string(i));
    auto rand_poly = [&]() {
      MultiPoly r(Field::rationals(), d);
      const long terms = rng.uniform(1, 4);
      for (long i = 0; i < terms; ++i) {
        Exponent e;
        for (std::size_t j = 0; j < d; ++j) e.push_back(static_cast<int>(rng.uniform(0, 4)));
        r.add_term(e, rng.uniform(1, 3));
      }
      return r;
    };
    const MultiPoly f = rand_poly(), g = rand_poly();
    const PseudoPolytope s = newton_polyhedron(f), u = newton_polyhedron(g);
    ++polys;
    const Fan nf = s.normal_fan();
    check(s.characteristic_number() == nf.maximal().size(), "c(S) differs from the number of maximal normal cones");
    for (const auto& cone : nf.cones()) {
      const PolytopeFace face = s.face_at(to_qvec(cone.relint_point()));
      check(face.normal_cone == cone, "normal cone of the face differs");
      check(affine_dim(face.vertices, face.recession) + cone.dim() == d, "face and normal cone dims");
    }
    const PseudoPolytope sum = minkowski_sum(s, u);
    check(sum.normal_fan() == real_intersection({nf, u.normal_fan()}, d), "Minkowski normal fan");
    check(newton_polyhedron(f * g) == sum, "Newton polyhedron of a product");
  }
  if (out.ok) out.detail = std::to_string(cones) + " cones, " + std::to_string(polys) + " polyhedra";
  return out;
}

Outcome criterion6() {
  Outcome out;
  Check check{out};
  struct Case {
    MultiPoly psi;
    MultiPoly chi0;
    MultiPoly after;
  };
  const Field f2 = Field::prime(2);
  const std::vector<Case> cases{
      {P("(z + x)^2 + x^5"), P("x"), P("z^2 + x^5")},
      {P("(z + x + x^2)^3"), P("x + x^2"), P("z^3")},
      {P("(z + x)^2", XZ, f2), P("x", XZ, f2), P("z^2", XZ, f2)},
  };
  check(!removable_faces(1, cases[2].psi).empty(), "F2 square not detected as removable");
  for (const auto& c : cases) {
    std::optional<MultiPoly> first;
    for (int order : {8, 9, 10}) {
      const Elimination e = eliminate_removable(1, c.psi, order);
      check(e.chi0 == c.chi0, "chi0 = " + e.chi0.str(XZ) + " at order " + std::to_string(order));
      check(e.result.truncated(8) == c.after, "result " + e.result.str(XZ));
      check(removable_faces(1, e.result).empty(), "removable faces remain");
      // Direct substitution oracle.
      const MultiPoly shift = MultiPoly::variable(c.psi.field(), 2, 1) - c.chi0;
      check(c.psi.substitute(1, shift) == c.after, "substitution oracle");
      if (first) check(e.chi0 == *first, "chi0 not stable");
      first = e.chi0;
    }
  }
  if (out.ok) out.detail = "3 cases stable at O = 8, 9, 10";
  return out;
}

Outcome criterion7() {
  Outcome out;
  Check check{out};
  Problem p = problem_of(P("z"), XZ);
  p.phi.factors = {{P("z"), 1}, {P("z + x"), 1}, {P("z + 2*x"), 1}};
  const InvData before = inv_inv2(1, p.phi, p.order);
  check(before.inv == 0 && before.inv2 && *before.inv2 == 3, "inv/inv2 before");
  StepReport r = subdivision_step(p);
  check(r.violations == 0, "step violations");
  std::size_t max_inv2 = 0;
  for (const auto& b : r.branches) {
    check(b.weierstrass && b.inv.inv == 0, "branch inv != 0");
    check(b.inv.inv2 && *b.inv.inv2 <= 2, "branch inv2 > 2");
    if (b.inv.inv2) max_inv2 = std::max(max_inv2, *b.inv.inv2);
  }
  if (out.ok) out.detail = std::to_string(r.branches.size()) + " branches, max inv2 " + std::to_string(max_inv2);
  return out;
}

Outcome criterion8() {
  Outcome out;
  Check check{out};
  std::size_t evaluated = 0;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(TORICRES_CORPUS_DIR))
    if (entry.path().extension() == ".prob") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    Problem p;
    try {
      p = parse_problem(read(path));
    } catch (const ParseError&) {
      continue;
    }
    try {
      GameTrace t = play_game(p, Adversary::exhaustive, 6);
      for (const auto& s : t.states) {
        if (!s.weierstrass) continue;
        ++evaluated;
        check(s.inv.inv != 1, path.filename().string() + " state " + std::to_string(s.id) + " has inv 1");
      }
    } catch (const InvariantViolation& e) {
      check(false, path.filename().string() + ": " + e.what());
    }
  }
  Rng rng(8);
  std::size_t tilts = 0;
  while (tilts < 50) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform(2, 3));
    MultiPoly phi(Field::rationals(), n);
    const long terms = rng.uniform(1, 4);
    for (long i = 0; i < terms; ++i) {
      Exponent e;
      for (std::size_t j = 0; j < n; ++j) e.push_back(static_cast<int>(rng.uniform(0, 3)));
      phi.add_term(e, rng.uniform(-3, 3));
    }
    int ord = -1;
    for (const auto& [e, c] : phi.terms()) {
      int deg = 0;
      for (int a : e) deg += a;
      ord = ord < 0 ? deg : std::min(ord, deg);
    }
    if (phi.is_zero() || ord > 4) continue;
    ++tilts;
    try {
      const Tilt t = generic_tilt(n - 1, phi);
      const WeierstrassData wd = weierstrass_data(n - 1, t.tilted);
      Exponent want(n, 0);
      want[n - 1] = ord;
      check(t.h == ord, "tilt reports the wrong order");
      check(wd.is_type && wd.top && *wd.top == want, "tilted polynomial lacks top vertex h f_z");
    } catch (const std::exception& e) {
      check(false, std::string("tilt failed: ") + e.what());
    }
  }
  if (out.ok) out.detail = std::to_string(evaluated) + " corpus states, " + std::to_string(tilts) + " tilts";
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    double budget;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{{1, 5, criterion1},   {2, 1, criterion2},  {3, 120, criterion3},
                                        {4, 120, criterion4}, {5, 60, criterion5}, {6, 5, criterion6},
                                        {7, 10, criterion7},  {8, 30, criterion8}};
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= c.budget) {
      o.ok = false;
      o.detail += "; over the " + std::to_string(static_cast<int>(c.budget)) + " s budget";
    }
    if (!o.ok) ++failed;
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << "CRITERION " << c.id << ": " << (o.ok ? "PASS" : "FAIL") << " (" << o.detail << "; " << secs << " s)";
    std::cout << line.str() << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
