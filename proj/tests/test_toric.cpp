#include "doctest.h"
#include "support.hpp"
#include "toricres/errors.hpp"
#include "toricres/toric.hpp"

using namespace tr;
using namespace trtest;

namespace {

const std::vector<std::string> XZ{"x", "z"};
const std::vector<std::string> XYZ{"x", "y", "z"};

Cone ray(const IVec& g) { return Cone::from_rays(g.size(), {g}); }

UpwardSubdivisionRecord usd_of(const MultiPoly& phi) {
  const std::size_t n = phi.nvars();
  return upward_subdivision(ray(unit_ivec(n, n - 1)), Fan::face_fan(Cone::orthant(n)), newton_polyhedron(phi));
}

MultiPoly random_poly(Rng& rng, std::size_t n, int max_exp, int terms) {
  MultiPoly r(Field::rationals(), n);
  for (int t = 0; t < terms; ++t) {
    Exponent e;
    for (std::size_t i = 0; i < n; ++i) e.push_back(static_cast<int>(rng.uniform(0, max_exp)));
    r.add_term(e, rng.uniform(1, 3));
  }
  return r;
}

// Exponents of the pullback at c = 0: a -> (<b_i, a>)_i.
Exponent chart_exponent(const ToricChart& c, const Exponent& a) {
  Exponent out;
  for (const auto& b : c.edges) {
    long s = 0;
    for (std::size_t j = 0; j < a.size(); ++j) s += b[j].get_si() * a[j];
    out.push_back(static_cast<int>(s));
  }
  return out;
}

}  // namespace

TEST_CASE("charts of the orthant") {
  auto cs = charts(Fan::face_fan(Cone::orthant(2)));
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].edges == im({{0, 1}, {1, 0}}));
  const MultiPoly phi = parse_poly("z^2 + x^3", XZ, Field::rationals());
  // Edges are sorted, so u1 carries z and u2 carries x.
  CHECK(pullback(cs[0], {0, 0}, phi) == parse_poly("u1^2 + u2^3", chart_variable_names(2), Field::rationals()));
  CHECK(chart_substitution_str(cs[0], XZ) == "x=u2 z=u1");

  Fan bad = Fan::from_maximal(2, {Cone::from_rays(2, im({{1, 0}, {1, 2}}))});
  CHECK_THROWS_AS(charts(bad), PreconditionError);
}

TEST_CASE("cusp charts and pullbacks") {
  const MultiPoly phi = parse_poly("z^2 + x^3", XZ, Field::rationals());
  auto rec = usd_of(phi);
  auto cs = charts(rec.sigma_star);
  CHECK(cs.size() == 4);
  const auto U = chart_variable_names(2);
  bool found = false;
  for (const auto& c : cs) {
    // dual basis oracle: edges * dual^T = identity
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) CHECK(dot(c.edges[i], c.dual[j]) == (i == j ? 1 : 0));
    if (c.delta == Cone::from_rays(2, im({{1, 1}, {2, 3}}))) {
      found = true;
      CHECK(chart_substitution_str(c, XZ) == "x=u1*u2^2 z=u1*u2^3");
      CHECK(pullback(c, {0, 0}, phi) == parse_poly("u1^2*u2^6*(1 + u1)", U, Field::rationals()));
    }
  }
  CHECK(found);
  auto ledger = divisor_ledger(cs);
  CHECK(ledger.size() == 5);
  CHECK(ledger.at(iv({2, 3})).size() == 2);
  CHECK(ledger.at(iv({1, 0})).size() == 1);
}

TEST_CASE("local frames of the cusp") {
  auto rec = usd_of(parse_poly("z^2 + x^3", XZ, Field::rationals()));
  std::size_t framed = 0;
  for (const auto& theta : rec.sigma_star.cones()) {
    const IVec w = theta.relint_point();
    if (w[0] <= 0 || w[1] <= 0) {
      CHECK_THROWS_AS(chart_local_frame(rec, theta), PreconditionError);
      continue;
    }
    auto fr = chart_local_frame(rec, theta);
    CHECK(rec.sigma_star.maximal().end() !=
          std::find(rec.sigma_star.maximal().begin(), rec.sigma_star.maximal().end(), fr.delta));
    CHECK(fr.delta.contains(theta));
    CHECK(fr.delta.rays()[fr.z_bar] == fr.gamma);
    CHECK(rec.lower.at(fr.gamma).psi.has(theta));
    CHECK(theta.is_face_of(fr.delta));
    ++framed;
  }
  CHECK(framed == 7);
  auto fr = chart_local_frame(rec, ray(iv({2, 3})));
  CHECK(fr.gamma == iv({1, 2}));
  CHECK(fr.delta == Cone::from_rays(2, im({{1, 2}, {2, 3}})));
  auto top = chart_local_frame(rec, Cone::from_rays(2, im({{0, 1}, {1, 2}})));
  CHECK(top.gamma == iv({0, 1}));
}

TEST_CASE("pullback properties") {
  Rng rng(41);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform(2, 3));
    const auto& names = n == 2 ? XZ : XYZ;
    MultiPoly phi = random_poly(rng, n, 4, 3);
    if (!is_z_simple(n - 1, phi).simple) continue;
    auto rec = usd_of(phi);
    for (const auto& c : charts(rec.sigma_star)) {
      // unimodular consistency on generators: sum_i <b_i, f_x> dual_i = f_x
      for (std::size_t x = 0; x < n; ++x) {
        IVec back = zero_ivec(n);
        for (std::size_t i = 0; i < n; ++i) back = add(back, scale(c.edges[i][x], c.dual[i]));
        CHECK(back == unit_ivec(n, x));
      }
      // Newton compatibility at the chart origin.
      std::vector<QVec> pts;
      for (const auto& e : phi.support()) {
        QVec q;
        for (int a : chart_exponent(c, e)) q.emplace_back(a);
        pts.push_back(q);
      }
      IMat orth;
      for (std::size_t i = 0; i < n; ++i) orth.push_back(unit_ivec(n, i));
      const std::vector<Rat> zero(n, Rat(0));
      CHECK(newton_polyhedron(pullback(c, zero, phi)) == PseudoPolytope(n, pts, orth));

      // Translated pullbacks expand prod (u_i + c_i)^k densely; keep them small.
      long spread = 0;
      for (std::size_t x = 0; x < n; ++x) {
        long col = 0;
        for (std::size_t i = 0; i < n; ++i) col += c.edges[i][x].get_si();
        spread = std::max(spread, col);
      }
      if (spread * (phi.total_degree() + 4) > 40) continue;

      // Multiplicativity and factor structure.
      MultiPoly g = random_poly(rng, n, 2, 2);
      std::vector<Rat> vals;
      for (std::size_t i = 0; i < n; ++i) vals.emplace_back(rng.uniform(0, 1) ? rng.uniform(1, 2) : 0);
      CHECK(pullback(c, vals, phi * g) == pullback(c, vals, phi) * pullback(c, vals, g));
      FactoredPoly fp{MultiPoly::constant(Field::rationals(), n, 3), {{phi, 2}, {g, 1}}};
      CHECK(pullback(c, vals, fp).expand() == pullback(c, vals, fp.expand()));

      // Order and initial forms along directions of the point face.
      const Cone theta = point_face(c, vals);
      if (theta.dim() == 0) continue;
      const IVec th = theta.relint_point();
      QVec chart_w;
      for (std::size_t i = 0; i < n; ++i) chart_w.emplace_back(dot(th, c.dual[i]));
      auto before = ord_in(to_qvec(th), phi);
      auto after = ord_in(chart_w, pullback(c, vals, phi));
      CHECK(*before.ord == *after.ord);
      CHECK(after.initial == pullback(c, vals, before.initial));
    }
    (void)names;
  }
}
