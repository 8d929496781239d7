#include "toricres/upward.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "toricres/errors.hpp"

namespace tr {

namespace {

const IVec& generator(const Cone& ray) { return ray.rays()[0]; }

Cone ray_of(const IVec& v) { return Cone::from_rays(v.size(), {primitive(v)}); }

// <b_H, v> of the vertex minimizing (<p, v>, <b_H, v>) lexicographically.
Rat lexmin_height(const PseudoPolytope& s, const QVec& p, const IVec& bH) {
  std::optional<std::pair<Rat, Rat>> best;
  for (const auto& v : s.vertices()) {
    std::pair<Rat, Rat> key{dot(p, v), dot(bH, v)};
    if (!best || key < *best) best = key;
  }
  return best->second;
}

CharacteristicData characteristic_from_charts(const Cone& H, const Fan& phi, const PseudoPolytope& s,
                                              const std::vector<Chart>& charts) {
  PairHeight ph = pair_height(H, phi, s);
  if (ph.height <= 0) throw PreconditionError("characteristic function: the pair height is not positive");
  const IVec& bH = generator(H);
  CharacteristicData data;
  data.H = H;
  data.height = ph.height;
  data.values = ph.values;
  for (const auto& r : phi.rays())
    if (r != bH) data.edges.push_back(r);
  const Rat& top = ph.values.back();

  std::vector<std::optional<Rat>> gamma(data.edges.size());
  for (const auto& ch : charts) {
    Rat chart_top = dot(bH, ch.polytope.vertices()[0]);
    for (const auto& v : ch.polytope.vertices()) chart_top = std::max(chart_top, dot(bH, v));
    if (chart_top != top || ch.profile.size() < 2) continue;
    for (const auto& e : ch.profile.edges) {
      auto it = std::lower_bound(data.edges.begin(), data.edges.end(), e);
      if (it == data.edges.end() || *it != e) throw InvariantViolation("chart edge is not a ray of the fan");
      auto& g = gamma[it - data.edges.begin()];
      Rat c = ch.profile.constant(2, e);
      if (g && *g != c) throw InvariantViolation("characteristic function differs between charts");
      g = c;
    }
  }
  bool positive = false;
  for (std::size_t e = 0; e < gamma.size(); ++e) {
    Rat g = gamma[e].value_or(Rat(0));
    if (g < 0) throw InvariantViolation("negative characteristic value");
    if (g > 0) positive = true;
    data.gamma.push_back(g);
    data.m += ceil_of(g).get_ui();
    data.m_bar += floor_of(g).get_ui();
    data.h_of.emplace_back(0);
    if (is_integer(g)) continue;
    data.fractional.push_back(e);
    IVec p = add(data.edges[e], scale(ceil_of(g), bH));
    Rat h = lexmin_height(s, to_qvec(p), bH);
    if (!std::binary_search(ph.values.begin(), ph.values.end(), h) || h == top)
      throw InvariantViolation("level of a fractional edge is out of range");
    data.h_of.back() = h;
  }
  if (!positive) throw InvariantViolation("characteristic function vanishes identically");
  if (data.m - data.m_bar != data.fractional.size()) throw InvariantViolation("m - m_bar differs from #R");
  return data;
}

HeightReport check_heights(const BasicSubdivisionRecord& rec, std::size_t m_bar, const PseudoPolytope& s,
                           const Rat& outer) {
  HeightReport rep;
  rep.outer = outer;
  for (std::size_t i = 0; i < rec.parts.size(); ++i) {
    Rat h = pair_height(rec.H_seq[i], rec.parts[i], s).height;
    if (h >= outer) throw InvariantViolation("height inequality fails at level " + std::to_string(i + 1));
    if (i < m_bar && h != 0) throw InvariantViolation("level " + std::to_string(i + 1) + " has positive height");
    rep.levels.push_back(h);
  }
  return rep;
}

struct Builder {
  const PseudoPolytope& s;
  Int den;
  Fan current;  // phi subdivided by the centers emitted so far
  std::vector<Cone> centers;
  std::vector<LevelTrace> trace;
};

UsdNode build(Builder& b, const Cone& H, const Fan& phi, std::size_t depth, std::map<IVec, LowerPart>& lower) {
  auto charts = check_admissible(H, phi, b.s);
  UsdNode node;
  node.H = H;
  node.phi = phi;
  node.height = pair_height(H, phi, b.s).height;
  if (!is_integer(node.height * b.den)) throw InvariantViolation("height outside (1/den) Z");
  std::size_t slot = b.trace.size();
  b.trace.push_back({depth, H, node.height, 0, 0});
  if (node.height == 0) {
    node.M_prefix = {0};
    lower.clear();
    lower[generator(H)] = {1, phi, phi.cones()};
    return node;
  }

  CharacteristicData data = characteristic_from_charts(H, phi, b.s, charts);
  node.m = data.m;
  node.m_bar = data.m_bar;
  b.trace[slot].m = data.m;
  b.trace[slot].m_bar = data.m_bar;
  IMat E;
  for (auto e : compatible_mapping(data)) E.push_back(data.edges[e]);
  BasicSubdivisionRecord rec = basic_subdivision(H, phi, E);
  check_heights(rec, data.m_bar, b.s, node.height);
  for (const auto& f : rec.F) b.centers.push_back(f);
  b.current = iterated_star(b.current, rec.F);

  lower.clear();
  node.M_prefix = {node.m};
  for (std::size_t mu = 1; mu <= node.m + 1; ++mu) {
    std::map<IVec, LowerPart> sub;
    Fan region = b.current.restricted_to(rec.parts[mu - 1]);
    UsdNode child = build(b, rec.H_seq[mu - 1], region, depth + 1, sub);
    if (child.height >= node.height) throw InvariantViolation("height does not descend");
    node.M_prefix.push_back(node.M_prefix.back() + child.M);
    for (auto& [g, part] : sub) {
      part.index = mu - 1 + node.M_prefix[mu - 1] - node.m + part.index;
      if (mu <= node.m) {
        const Cone& G = rec.G[mu - 1];
        std::vector<Cone> kept;
        for (auto& theta : part.psi_open) {
          auto carrier = rec.omega.carrier(to_qvec(theta.relint_point()));
          if (!carrier) throw InvariantViolation("cone outside the basic subdivision");
          if (carrier->contains(G)) kept.push_back(std::move(theta));
        }
        part.psi_open = std::move(kept);
      }
      if (!lower.emplace(g, std::move(part)).second) throw InvariantViolation("free ray owned twice");
    }
    node.children.push_back(std::move(child));
  }
  node.M = node.M_prefix.back();
  node.basic = std::move(rec);
  return node;
}

void check_record(const UpwardSubdivisionRecord& rec, const PseudoPolytope& s) {
  const IVec& bH = generator(rec.H);
  for (std::size_t i = 0; i < rec.centers.size(); ++i) {
    const Cone& f = rec.centers[i];
    auto carrier = rec.phi.carrier(to_qvec(f.relint_point()));
    if (f.dim() != 2 || !carrier || !carrier->contains(rec.H))
      throw InvariantViolation("center " + std::to_string(i + 1) + " is not admissible");
  }
  if (!is_subdivision(rec.sigma_star, rec.phi)) throw InvariantViolation("result does not subdivide the fan");
  for (const auto& theta : rec.sigma_star.maximal()) {
    bool inside = false;
    for (std::size_t v = 0; v < s.vertices().size() && !inside; ++v) inside = s.vertex_normal_cone(v).contains(theta);
    if (!inside) throw InvariantViolation("result does not subdivide the normal fan: " + theta.str());
  }

  std::vector<bool> seen(rec.M + 1, false);
  std::set<Cone> max_cones, open_cones;
  std::size_t max_total = 0, open_total = 0;
  for (const auto& [g, part] : rec.lower) {
    if (part.index < 1 || part.index > rec.M + 1 || seen[part.index - 1])
      throw InvariantViolation("enumeration of free rays is not bijective");
    seen[part.index - 1] = true;
    for (const auto& c : part.psi.maximal()) max_cones.insert(c), ++max_total;
    for (const auto& c : part.psi_open) open_cones.insert(c), ++open_total;
    bool self = std::binary_search(part.psi_open.begin(), part.psi_open.end(), ray_of(g));
    if (self != (g == bH)) throw InvariantViolation("free ray membership in its own open part");
  }
  if (rec.lower.size() != rec.M + 1 || rec.lower.at(bH).index != rec.M + 1)
    throw InvariantViolation("enumeration does not end at H");
  std::set<Cone> star_max(rec.sigma_star.maximal().begin(), rec.sigma_star.maximal().end());
  if (max_total != max_cones.size() || max_cones != star_max)
    throw InvariantViolation("lower parts do not partition the maximal cones");
  std::set<Cone> star_all(rec.sigma_star.cones().begin(), rec.sigma_star.cones().end());
  if (open_total != open_cones.size() || open_cones != star_all)
    throw InvariantViolation("open lower parts do not partition the fan");
}

}  // namespace

HBoundaries h_boundaries(const Cone& delta, const Cone& H) {
  if (H.dim() != 1 || !H.is_strongly_convex()) throw PreconditionError("H-boundaries: H must be a ray");
  const IVec& bH = generator(H);
  for (const auto& e : delta.equations())
    if (dot(e, bH) != 0) throw PreconditionError("H-boundaries: H is not in the span of the cone");
  HBoundaries res;
  for (const auto& n : delta.facets()) {
    Int t = dot(n, bH);
    if (t == 0) continue;
    Cone facet = delta.face_of(to_qvec(n));
    (t < 0 ? res.upper : res.lower).push_back(std::move(facet));
  }
  std::sort(res.upper.begin(), res.upper.end());
  std::sort(res.lower.begin(), res.lower.end());
  return res;
}

std::vector<Chart> check_admissible(const Cone& H, const Fan& phi, const PseudoPolytope& s) {
  if (phi.empty() || !phi.is_flat() || !phi.is_regular())
    throw PreconditionError("admissible pair: fan is not flat and regular");
  if (H.dim() != 1 || !phi.has(H)) throw PreconditionError("admissible pair: H is not a ray of the fan");
  Cone support = s.stab().dual();
  std::vector<Chart> charts;
  for (const auto& delta : phi.maximal()) {
    if (!delta.contains(H)) throw PreconditionError("admissible pair: " + delta.str() + " misses H");
    if (!support.contains(delta))
      throw PreconditionError("admissible pair: " + delta.str() + " leaves the normal fan support");
    PseudoPolytope t = chart_polytope(s, delta);
    auto prof = h_simple_profile(t.normal_fan(), H);
    if (!prof) throw PreconditionError("admissible pair: chart over " + delta.str() + " is not H-simple");
    charts.push_back({delta, std::move(t), std::move(*prof)});
  }
  return charts;
}

CharacteristicData characteristic_function(const Cone& H, const Fan& phi, const PseudoPolytope& s) {
  return characteristic_from_charts(H, phi, s, check_admissible(H, phi, s));
}

std::vector<std::size_t> compatible_mapping(const CharacteristicData& data) {
  std::vector<std::size_t> E;
  for (std::size_t e = 0; e < data.edges.size(); ++e)
    for (Int k = floor_of(data.gamma[e]); k > 0; --k) E.push_back(e);
  std::vector<std::size_t> tail = data.fractional;
  std::stable_sort(tail.begin(), tail.end(),
                   [&](std::size_t a, std::size_t b) { return data.h_of[a] > data.h_of[b]; });
  E.insert(E.end(), tail.begin(), tail.end());
  return E;
}

BasicSubdivisionRecord basic_subdivision(const Cone& H, const Fan& phi, const IMat& E) {
  if (!phi.is_flat() || !phi.is_regular() || phi.dim() < 2)
    throw PreconditionError("basic subdivision: fan must be flat, regular and of dim >= 2");
  if (H.dim() != 1 || !phi.has(H)) throw PreconditionError("basic subdivision: H is not a ray of the fan");
  for (const auto& c : phi.maximal())
    if (!c.contains(H)) throw PreconditionError("basic subdivision: fan is not starry with center H");
  const IVec& bH = generator(H);
  IMat rays = phi.rays();
  for (const auto& e : E)
    if (e == bH || !std::binary_search(rays.begin(), rays.end(), e))
      throw PreconditionError("basic subdivision: " + to_string(e) + " is not an edge away from H");

  const std::size_t d = phi.ambient_dim();
  BasicSubdivisionRecord rec;
  rec.H = H;
  rec.phi = phi;
  rec.m = E.size();
  rec.E = E;
  rec.edges = E;
  std::sort(rec.edges.begin(), rec.edges.end());
  rec.edges.erase(std::unique(rec.edges.begin(), rec.edges.end()), rec.edges.end());
  rec.s.assign(1, std::vector<std::size_t>(rec.edges.size(), 0));
  IMat tops;
  for (std::size_t i = 1; i <= rec.m; ++i) {
    std::size_t e = std::lower_bound(rec.edges.begin(), rec.edges.end(), E[i - 1]) - rec.edges.begin();
    IVec bG = add(E[i - 1], scale(Int(rec.s[i - 1][e]), bH));
    rec.s.push_back(rec.s[i - 1]);
    ++rec.s[i][e];
    rec.G.push_back(Cone::from_rays(d, {bG}));
    rec.F.push_back(Cone::from_rays(d, {bG, bH}));
    rec.H_seq.push_back(Cone::from_rays(d, {add(bG, bH)}));
    tops.push_back(bG);
  }
  rec.H_seq.push_back(H);
  rec.omega = iterated_star(phi, rec.F);
  if (rec.omega.rays().size() != rays.size() + rec.m) throw InvariantViolation("basic subdivision: ray count");

  for (std::size_t i = 0; i <= rec.m; ++i) {
    Cone key = i < rec.m ? Cone::from_rays(d, {tops[i], generator(rec.H_seq[i])}) : H;
    rec.parts.push_back(Fan::from_maximal_trusted(d, rec.omega.star_of(key)));
    if (i == rec.m) {
      rec.open_parts.push_back(rec.parts.back().cones());
      continue;
    }
    std::vector<Cone> open;
    for (const auto& c : rec.parts.back().cones())
      if (c.contains(rec.G[i])) open.push_back(c);
    rec.open_parts.push_back(std::move(open));
  }
  for (const auto& c : rec.omega.maximal()) {
    std::size_t owners = 0;
    for (const auto& p : rec.parts) owners += std::binary_search(p.maximal().begin(), p.maximal().end(), c);
    if (owners != 1) throw InvariantViolation("basic subdivision: parts do not partition " + c.str());
  }
  return rec;
}

HeightReport height_inequality_check(const BasicSubdivisionRecord& rec, std::size_t m_bar,
                                     const PseudoPolytope& s) {
  Rat outer = pair_height(rec.H, rec.phi, s).height;
  if (outer <= 0) throw PreconditionError("height inequality: the outer height is not positive");
  return check_heights(rec, m_bar, s, outer);
}

UpwardSubdivisionRecord upward_subdivision(const Cone& H, const Fan& phi, const PseudoPolytope& s) {
  Builder b{s, denominator(s), phi, {}, {}};
  UpwardSubdivisionRecord rec;
  rec.H = H;
  rec.phi = phi;
  rec.root = build(b, H, phi, 0, rec.lower);
  rec.M = rec.root.M;
  rec.centers = std::move(b.centers);
  rec.trace = std::move(b.trace);
  if (rec.centers.size() != rec.M) throw InvariantViolation("center count differs from M");
  rec.sigma_star = std::move(b.current);
  if (rec.sigma_star != iterated_star(phi, rec.centers)) throw InvariantViolation("center sequence replay differs");
  check_record(rec, s);
  return rec;
}

const std::map<IVec, LowerPart>& lower_parts(const UpwardSubdivisionRecord& rec) { return rec.lower; }

IVec owner_of(const UpwardSubdivisionRecord& rec, const Cone& theta) {
  for (const auto& [g, part] : rec.lower)
    if (std::binary_search(part.psi_open.begin(), part.psi_open.end(), theta)) return g;
  throw InvariantViolation("cone without an owner: " + theta.str());
}

HardHeightReport hard_height_check(const UpwardSubdivisionRecord& rec, const PseudoPolytope& s) {
  HardHeightReport rep;
  std::map<Cone, std::pair<PseudoPolytope, std::optional<HSimpleProfile>>> charts;
  for (const auto& theta : rec.sigma_star.cones()) {
    QVec q = to_qvec(theta.relint_point());
    auto delta = rec.phi.carrier(q);
    if (!delta) throw InvariantViolation("cone outside the fan: " + theta.str());
    if (!delta->contains(rec.H)) continue;
    auto it = charts.find(*delta);
    if (it == charts.end()) {
      PseudoPolytope t = chart_polytope(s, *delta);
      auto prof = h_simple_profile(t.normal_fan(), rec.H);
      it = charts.emplace(*delta, std::make_pair(std::move(t), std::move(prof))).first;
    }
    const PseudoPolytope& t = it->second.first;
    PolytopeFace face = t.face_at(q);
    const Cone& lambda = face.normal_cone;
    if (!lambda.in_relint(q) || !lambda.contains(theta) || !delta->contains(lambda))
      throw InvariantViolation("carrier of " + theta.str() + " in the normal fan is inconsistent");

    if (lambda.dim() == delta->dim()) {
      IMat omegas = delta->rays();
      for (const auto& l : delta->lineality()) omegas.push_back(l);
      for (const auto& w : omegas)
        for (const auto& v : face.vertices)
          if (dot(w, v) != dot(w, face.vertices[0]))
            throw InvariantViolation("face over " + theta.str() + " is not constant on the span of its cone");
      ++rep.constant;
      continue;
    }
    if (lambda.dim() + 1 != delta->dim()) throw InvariantViolation("carrier dimension drop exceeds one");

    IVec bG = owner_of(rec, theta);
    Cone gamma = ray_of(bG);
    Rat hgt = height(rec.H, t);
    if (hgt <= 0 || !delta->contains(gamma) || theta.contains(gamma))
      throw InvariantViolation("owner of " + theta.str() + " is misplaced");
    Rat lo = dot(bG, face.vertices[0]), hi = lo;
    for (const auto& v : face.vertices) {
      lo = std::min(lo, dot(bG, v));
      hi = std::max(hi, dot(bG, v));
    }
    Rat width = hi - lo;
    if (width > hgt) throw InvariantViolation("hard height inequality fails at " + theta.str());
    const auto& prof = it->second.second;
    if (!prof) throw InvariantViolation("chart over " + delta->str() + " is not H-simple");
    bool integral = prof->size() == 2;
    if (integral)
      for (const auto& c : prof->constants[1]) integral = integral && is_integer(c);
    if ((width == hgt) != integral) throw InvariantViolation("equality criterion fails at " + theta.str());
    if (width == hgt) {
      if (theta != lambda || gamma != rec.H) throw InvariantViolation("equality case at " + theta.str());
      ++rep.equalities;
    }
    ++rep.checked;
  }
  return rep;
}

}  // namespace tr
