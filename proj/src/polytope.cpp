#include "toricres/polytope.hpp"

#include <algorithm>
#include <set>

#include "toricres/errors.hpp"

namespace tr {

namespace {

IMat generators_of(const Cone& c) {
  IMat g = c.rays();
  for (const auto& l : c.lineality()) {
    g.push_back(l);
    g.push_back(scale(Int(-1), l));
  }
  return g;
}

Cone project_first(const Cone& c, std::size_t d) {
  IMat g;
  for (const auto& v : generators_of(c)) g.emplace_back(v.begin(), v.begin() + d);
  return Cone::from_generators(d, g);
}

IVec homogenize(const QVec& x) {
  Int den = common_denominator(x);
  IVec v;
  for (const auto& c : x) v.push_back(Int(c * den));
  v.push_back(den);
  return v;
}

}  // namespace

PseudoPolytope::PseudoPolytope(std::size_t d, const std::vector<QVec>& points, const IMat& recession) : d_(d) {
  if (points.empty()) throw PreconditionError("pseudo polytope needs at least one point");
  IMat gens;
  for (const auto& p : points) {
    if (p.size() != d) throw PreconditionError("pseudo polytope: point has wrong length");
    gens.push_back(homogenize(p));
  }
  for (const auto& y : recession) {
    IVec g = y;
    g.push_back(0);
    gens.push_back(std::move(g));
  }
  homog_ = Cone::from_generators(d + 1, gens);
  stab_ = recession.empty() ? Cone::zero(d) : Cone::from_generators(d, recession);
  Cone dual = homog_.dual();
  std::vector<std::pair<QVec, IVec>> reps;
  for (const auto& r : homog_.rays()) {
    if (r[d] == 0) continue;
    QVec v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = Rat(r[i], r[d]);
    for (auto& x : v) x.canonicalize();
    reps.emplace_back(std::move(v), r);
  }
  std::sort(reps.begin(), reps.end());
  for (const auto& [v, r] : reps) {
    vertices_.push_back(v);
    normal_cones_.push_back(project_first(dual.face_of(to_qvec(r)), d));
  }
}

IMat PseudoPolytope::recession_generators() const { return generators_of(stab_); }

bool PseudoPolytope::contains(const QVec& x) const { return homog_.contains(homogenize(x)); }

Rat PseudoPolytope::ord(const QVec& w) const {
  if (!stab_.dual().contains(w)) throw PreconditionError("ord: weight outside the dual of the recession cone");
  Rat best = dot(w, vertices_[0]);
  for (const auto& v : vertices_) best = std::min(best, dot(w, v));
  return best;
}

PolytopeFace PseudoPolytope::face_at(const QVec& w) const {
  Rat m = ord(w);
  PolytopeFace f;
  f.witness = w;
  f.recession = stab_.face_of(w);
  std::optional<Cone> normal;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (dot(w, vertices_[i]) != m) continue;
    f.vertices.push_back(vertices_[i]);
    normal = normal ? normal->intersect(normal_cones_[i]) : normal_cones_[i];
  }
  IMat eqs = generators_of(f.recession);
  f.normal_cone = eqs.empty() ? *normal : normal->intersect(Cone::from_inequalities(d_, {}, eqs));
  return f;
}

Fan PseudoPolytope::normal_fan() const { return Fan::from_maximal_trusted(d_, normal_cones_); }

PseudoPolytope minkowski_sum(const PseudoPolytope& s, const PseudoPolytope& t) {
  if (s.ambient_dim() != t.ambient_dim()) throw PreconditionError("minkowski sum: ambient mismatch");
  std::vector<QVec> pts;
  for (const auto& a : s.vertices())
    for (const auto& b : t.vertices()) pts.push_back(add(a, b));
  IMat rec = s.recession_generators();
  for (const auto& y : t.recession_generators()) rec.push_back(y);
  return PseudoPolytope(s.ambient_dim(), pts, rec);
}

PseudoPolytope chart_polytope(const PseudoPolytope& s, const Cone& delta) {
  return PseudoPolytope(s.ambient_dim(), s.vertices(), generators_of(delta.dual()));
}

std::vector<Rat> height_set(const Cone& H, const PseudoPolytope& t) {
  if (H.dim() != 1 || !H.is_strongly_convex()) throw PreconditionError("height: H must be a ray");
  const IVec& b = H.rays()[0];
  for (const auto& l : t.stab().lineality())
    if (dot(b, l) != 0) throw PreconditionError("height: H is not in the span of the normal fan");
  std::set<Rat> vals;
  for (const auto& v : t.vertices()) vals.insert(dot(b, v));
  return {vals.begin(), vals.end()};
}

Rat height(const Cone& H, const PseudoPolytope& t) {
  auto v = height_set(H, t);
  return v.back() - v.front();
}

Int denominator(const PseudoPolytope& t) {
  IMat basis = integer_kernel(t.stab().lineality(), t.ambient_dim());
  Int den = 1;
  for (const auto& v : t.vertices())
    for (const auto& w : basis) den = lcm(den, Int(dot(w, v).get_den()));
  return den;
}

PairHeight pair_height(const Cone& H, const Fan& phi, const PseudoPolytope& s) {
  if (!phi.has(H) || H.dim() != 1) throw PreconditionError("pair height: H is not a ray of the fan");
  Cone support = s.stab().dual();
  for (const auto& m : phi.maximal())
    if (!support.contains(m)) throw PreconditionError("pair height: fan leaves the normal fan support");
  const IVec& b = H.rays()[0];
  PairHeight res;
  std::set<Rat> vals;
  for (std::size_t i = 0; i < s.vertices().size(); ++i) {
    bool hit = std::any_of(phi.maximal().begin(), phi.maximal().end(), [&](const Cone& m) {
      return s.vertex_normal_cone(i).intersect(m).dim() == m.dim();
    });
    if (!hit) continue;
    res.skeleton.push_back(i);
    vals.insert(dot(b, s.vertices()[i]));
  }
  if (vals.empty()) throw InvariantViolation("pair height: empty skeleton");
  res.values.assign(vals.begin(), vals.end());
  res.height = res.values.back() - res.values.front();
  return res;
}

Levels levels(const Cone& H, const Fan& phi, const PseudoPolytope& s, const Rat& h) {
  PairHeight ph = pair_height(H, phi, s);
  if (!std::binary_search(ph.values.begin(), ph.values.end(), h))
    throw PreconditionError("levels: value is not in the height set");
  const IVec& b = H.rays()[0];
  std::vector<Cone> pi, sig;
  for (auto i : ph.skeleton) {
    Rat v = dot(b, s.vertices()[i]);
    if (v < h) continue;
    for (const auto& m : phi.maximal()) {
      Cone c = s.vertex_normal_cone(i).intersect(m);
      if (c.dim() != m.dim()) continue;
      if (v == h) pi.push_back(c);
      sig.push_back(std::move(c));
    }
  }
  std::size_t d = s.ambient_dim();
  return {Fan::from_maximal_trusted(d, pi), Fan::from_maximal_trusted(d, sig)};
}

GProfile polytope_G_profile(const PseudoPolytope& s, const Cone& G) {
  Fan nf = s.normal_fan();
  Cone support = s.stab().dual();
  if (!support.is_regular()) throw PreconditionError("G profile: normal fan support is not a regular cone");
  if (G.dim() != 1 || !G.is_face_of(support)) throw PreconditionError("G profile: G is not an edge of the support");
  GProfile prof;
  prof.weierstrass = nf.has(opposite_face(G, support));
  prof.simple = prof.weierstrass && h_simple_profile(nf, G).has_value();
  auto vals = height_set(G, s);
  prof.height = vals.back() - vals.front();
  if (prof.weierstrass) {
    const IVec& b = G.rays()[0];
    for (const auto& v : s.vertices()) {
      if (dot(b, v) != vals.back()) continue;
      if (prof.top) throw InvariantViolation("G profile: G-top minimal face is not unique");
      prof.top = v;
    }
  }
  return prof;
}

}  // namespace tr
