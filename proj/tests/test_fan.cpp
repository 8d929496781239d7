#include "doctest.h"
#include "support.hpp"
#include "toricres/errors.hpp"
#include "toricres/fan.hpp"

using namespace tr;
using namespace trtest;

namespace {

Cone C(std::size_t d, std::initializer_list<std::initializer_list<long>> rays) {
  return Cone::from_rays(d, im(rays));
}

Fan quadrant_split(long a, long b) {
  return Fan::from_maximal(2, {C(2, {{1, 0}, {a, b}}), C(2, {{a, b}, {0, 1}})});
}

}  // namespace

TEST_CASE("validate_fan") {
  Fan q = Fan::face_fan(Cone::orthant(2));
  CHECK(q.cones().size() == 4);
  CHECK_THROWS_AS(validate_fan(2, {Cone::orthant(2), C(2, {{1, 1}})}, false), PreconditionError);
  Fan two = validate_fan(2, {Cone::orthant(2), C(2, {{0, 1}, {-1, 0}})}, true);
  CHECK(two.maximal().size() == 2);
  CHECK(two.cones().size() == 6);
  CHECK_THROWS_AS(Fan::from_maximal(2, {Cone::orthant(2), C(2, {{1, 1}, {-1, 1}})}), PreconditionError);
}

TEST_CASE("subdivision checks") {
  Fan q = Fan::face_fan(Cone::orthant(2));
  CHECK(is_subdivision(q, q));
  CHECK(is_subdivision(quadrant_split(1, 1), q));
  CHECK_FALSE(is_subdivision(quadrant_split(1, 1), quadrant_split(1, 2)));
  CHECK(same_support(quadrant_split(1, 1), q));
  CHECK_FALSE(same_support(Fan::face_fan(C(2, {{1, 0}, {1, 1}})), q));
}

TEST_CASE("real intersection") {
  Fan q = Fan::face_fan(Cone::orthant(2));
  CHECK(real_intersection({q, q}, 2) == q);
  CHECK(real_intersection({q, quadrant_split(1, 1)}, 2) == quadrant_split(1, 1));
  Fan w = real_intersection({}, 2);
  CHECK(w.maximal().size() == 1);
  CHECK(w.maximal()[0] == Cone::whole(2));
}

TEST_CASE("real intersection is the coarsest common refinement on random 2-dim fans") {
  Rng rng(31);
  for (int t = 0; t < 30; ++t) {
    auto split = [&]() {
      long a = rng.uniform(1, 4), b = rng.uniform(1, 4);
      return quadrant_split(a, b);
    };
    Fan s = split(), p = split();
    Fan r = real_intersection({s, p}, 2);
    CHECK(is_subdivision(r, s));
    CHECK(is_subdivision(r, p));
    CHECK(same_support(r, s));
    // the common refinement of s and p refines r
    Fan both = real_intersection({r, s, p}, 2);
    CHECK(both == r);
  }
}

TEST_CASE("star subdivision") {
  Fan q = Fan::face_fan(Cone::orthant(2));
  CHECK(star_subdivision(q, C(2, {{1, 0}})) == q);
  Fan s = star_subdivision(q, Cone::orthant(2));
  CHECK(s.rays() == im({{0, 1}, {1, 0}, {1, 1}}));
  CHECK(s.maximal().size() == 2);
  CHECK_THROWS_AS(star_subdivision(q, C(2, {{1, 1}})), PreconditionError);
  Fan o = Fan::face_fan(Cone::orthant(3));
  Fan s3 = star_subdivision(o, C(3, {{1, 0, 0}, {0, 1, 0}}));
  CHECK(s3.rays().size() == 4);
  CHECK(same_support(s3, o));
  CHECK(s3.is_regular());
  CHECK(s3.is_flat());
}

TEST_CASE("iterated star subdivision errors name the step") {
  Fan q = Fan::face_fan(Cone::orthant(2));
  CHECK(iterated_star(q, {}) == q);
  try {
    iterated_star(q, {Cone::orthant(2), Cone::orthant(2)});
    FAIL("expected an error");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("step 2") != std::string::npos);
  }
}

TEST_CASE("two center orders give the same fan") {
  IVec b1 = iv({1, 0, 0}), b2 = iv({0, 1, 0}), b3 = iv({0, 0, 1});
  Fan fs = Fan::face_fan(Cone::orthant(3));
  Cone F1 = Cone::from_rays(3, {b1, b3}), F2 = Cone::from_rays(3, {b2, b3});
  Cone G1 = Cone::from_rays(3, {add(b1, b3), b2}), G2 = Cone::from_rays(3, {add(b2, b3), b1});
  Fan a = iterated_star(fs, {F1, F2, G1});
  Fan b = iterated_star(fs, {F2, F1, G2});
  CHECK(a == b);
  CHECK(a.rays().size() == 6);
}

TEST_CASE("h-simple profile of the cusp fan") {
  Fan cusp = Fan::from_maximal(2, {C(2, {{1, 0}, {2, 3}}), C(2, {{2, 3}, {0, 1}})});
  Cone H = C(2, {{0, 1}});
  auto prof = h_simple_profile(cusp, H);
  REQUIRE(prof.has_value());
  CHECK(prof->size() == 2);
  CHECK(prof->chambers[0] == C(2, {{1, 0}, {2, 3}}));
  CHECK(prof->constant(1, iv({1, 0})) == 0);
  CHECK(prof->constant(2, iv({1, 0})) == Rat(3, 2));
  Fan bad = Fan::from_maximal(2, {C(2, {{1, 0}, {1, 2}})});
  CHECK_THROWS_AS(h_simple_profile(bad, C(2, {{1, 0}})), PreconditionError);
}

TEST_CASE("h-simple profiles on random 2-dim fans are ordered and monotone") {
  Rng rng(32);
  for (int t = 0; t < 20; ++t) {
    Fan f = Fan::face_fan(Cone::orthant(2));
    int steps = rng.uniform(0, 4);
    for (int s = 0; s < steps; ++s) {
      auto two = f.cones_of_dim(2);
      f = star_subdivision(f, two[rng.uniform(0, two.size() - 1)]);
    }
    for (const auto& h : im({{1, 0}, {0, 1}})) {
      auto prof = h_simple_profile(f, Cone::from_rays(2, {h}));
      REQUIRE(prof.has_value());
      for (std::size_t i = 0; i + 1 < prof->size(); ++i) {
        Cone a = prof->chambers[i].sum(prof->H), b = prof->chambers[i + 1].sum(prof->H);
        CHECK(a.contains(b));
        CHECK(a != b);
      }
      for (std::size_t e = 0; e < prof->edges.size(); ++e) CHECK(prof->constants[0][e] == 0);
    }
  }
}

TEST_CASE("Example 10.4: the six-cone fan is not an iterated star subdivision by one center") {
  IVec b1 = iv({1, 0, 0}), b2 = iv({0, 1, 0}), b3 = iv({0, 0, 1});
  IVec b12 = add(b1, b2), b13 = add(b1, b3), b23 = add(b2, b3), b123 = add(b12, b3);
  std::vector<Cone> T = {Cone::from_rays(3, {b1, b12, b13}),  Cone::from_rays(3, {b2, b23, b12}),
                         Cone::from_rays(3, {b3, b13, b23}),  Cone::from_rays(3, {b123, b12, b13}),
                         Cone::from_rays(3, {b123, b23, b12}), Cone::from_rays(3, {b123, b13, b23})};
  Fan phi = Fan::from_maximal(3, T);
  Fan fs = Fan::face_fan(Cone::orthant(3));
  CHECK(phi.is_regular());
  CHECK(is_subdivision(phi, fs));
  CHECK(same_support(phi, fs));
  for (const auto& F : fs.cones_of_dim(2)) CHECK_FALSE(is_subdivision(phi, star_subdivision(fs, F)));
  CHECK_FALSE(is_subdivision(phi, star_subdivision(fs, Cone::orthant(3))));
}

TEST_CASE("fan text round trip") {
  Fan quad = Fan::face_fan(Cone::orthant(3));
  const std::string text = fan_text(quad);
  CHECK(text == "FAN dim=3 rays=3 cones=1\nRAY 0: 0 0 1\nRAY 1: 0 1 0\nRAY 2: 1 0 0\nCONE: 0 1 2\n");
  CHECK(parse_fan_text(text) == quad);
  Fan star = star_subdivision(quad, Cone::orthant(3));
  CHECK(parse_fan_text(fan_text(star)) == star);
  CHECK_THROWS_AS(fan_text(Fan::face_fan(Cone::whole(2))), PreconditionError);
  CHECK_THROWS_AS(parse_fan_text("FAN dim=2 rays=0 cones=0\nextra\n"), ParseError);
  CHECK_THROWS_AS(parse_fan_text("RAY 0: 1 0\n"), ParseError);
}
