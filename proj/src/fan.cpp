#include "toricres/fan.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "toricres/errors.hpp"

namespace tr {

namespace {

std::vector<Cone> dedupe(std::vector<Cone> cs) {
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  return cs;
}

std::vector<Cone> maximal_among(const std::vector<Cone>& cs) {
  std::vector<Cone> out;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    bool maximal = true;
    for (std::size_t j = 0; j < cs.size() && maximal; ++j) {
      if (i == j || cs[j].dim() < cs[i].dim()) continue;
      if (cs[j] != cs[i] && cs[j].contains(cs[i])) maximal = false;
    }
    if (maximal) out.push_back(cs[i]);
  }
  return out;
}

void check_pair(const Cone& a, const Cone& b) {
  Cone m = a.intersect(b);
  if (!m.is_face_of(a) || !m.is_face_of(b))
    throw PreconditionError("fan axiom violated: " + a.str() + " and " + b.str() +
                            " do not meet in a common face");
}

}  // namespace

Fan Fan::from_maximal_trusted(std::size_t d, const std::vector<Cone>& cones) {
  Fan f;
  f.d_ = d;
  auto inputs = dedupe(cones);
  f.maximal_ = maximal_among(inputs);
  std::set<Cone> all;
  for (const auto& c : f.maximal_) {
    if (c.ambient_dim() != d) throw PreconditionError("fan: ambient mismatch");
    for (auto& face : c.faces()) all.insert(std::move(face.cone));
  }
  f.cones_.assign(all.begin(), all.end());
  return f;
}

Fan Fan::from_maximal(std::size_t d, const std::vector<Cone>& cones) {
  auto inputs = dedupe(cones);
  if (inputs.empty()) throw PreconditionError("fan: empty cone collection");
  auto maxi = maximal_among(inputs);
  for (std::size_t i = 0; i < maxi.size(); ++i)
    for (std::size_t j = i + 1; j < maxi.size(); ++j) check_pair(maxi[i], maxi[j]);
  return from_maximal_trusted(d, maxi);
}

Fan Fan::face_fan(const Cone& c) { return from_maximal_trusted(c.ambient_dim(), {c}); }

Fan validate_fan(std::size_t d, const std::vector<Cone>& cones, bool face_close) {
  auto inputs = dedupe(cones);
  if (inputs.empty()) throw PreconditionError("fan: empty cone collection");
  if (!face_close) {
    for (const auto& c : inputs)
      for (const auto& face : c.faces())
        if (!std::binary_search(inputs.begin(), inputs.end(), face.cone))
          throw PreconditionError("fan axiom violated: face " + face.cone.str() + " of " + c.str() +
                                  " is missing");
  }
  auto maxi = maximal_among(inputs);
  for (std::size_t i = 0; i < inputs.size(); ++i)
    for (std::size_t j = i + 1; j < inputs.size(); ++j) check_pair(inputs[i], inputs[j]);
  return Fan::from_maximal_trusted(d, maxi);
}

std::size_t Fan::dim() const {
  std::size_t m = 0;
  for (const auto& c : maximal_) m = std::max(m, c.dim());
  return m;
}

bool Fan::has(const Cone& c) const { return std::binary_search(cones_.begin(), cones_.end(), c); }

IMat Fan::rays() const {
  IMat out;
  for (const auto& c : cones_)
    if (c.dim() == 1 && c.is_strongly_convex()) out.push_back(c.rays()[0]);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Cone> Fan::cones_of_dim(std::size_t k) const {
  std::vector<Cone> out;
  for (const auto& c : cones_)
    if (c.dim() == k) out.push_back(c);
  return out;
}

bool Fan::is_flat() const {
  std::size_t d = dim();
  return std::all_of(maximal_.begin(), maximal_.end(), [d](const Cone& c) { return c.dim() == d; });
}

bool Fan::is_regular() const {
  return std::all_of(maximal_.begin(), maximal_.end(), [](const Cone& c) { return c.is_regular(); });
}

bool Fan::support_contains(const QVec& x) const {
  return std::any_of(maximal_.begin(), maximal_.end(), [&](const Cone& c) { return c.contains(x); });
}

std::optional<Cone> Fan::carrier(const QVec& x) const {
  for (const auto& c : maximal_)
    if (c.contains(x)) return c.carrier_face(x);
  return std::nullopt;
}

std::vector<Cone> Fan::star_of(const Cone& c) const {
  std::vector<Cone> out;
  for (const auto& k : cones_)
    if (k.contains(c)) out.push_back(k);
  return out;
}

Fan Fan::restricted_to(const Cone& region) const {
  std::vector<Cone> keep;
  for (const auto& c : cones_)
    if (region.contains(c)) keep.push_back(c);
  return from_maximal_trusted(d_, keep);
}

Fan Fan::restricted_to(const Fan& region) const {
  std::vector<Cone> keep;
  for (const auto& c : cones_)
    for (const auto& m : region.maximal())
      if (m.contains(c)) {
        keep.push_back(c);
        break;
      }
  return from_maximal_trusted(d_, keep);
}

std::string Fan::str() const {
  std::ostringstream os;
  os << "fan{";
  for (std::size_t i = 0; i < maximal_.size(); ++i) os << (i ? ", " : "") << maximal_[i].str();
  os << "}";
  return os.str();
}

bool is_subdivision(const Fan& sigma, const Fan& phi) {
  for (const auto& c : sigma.maximal()) {
    bool inside = std::any_of(phi.maximal().begin(), phi.maximal().end(),
                              [&](const Cone& m) { return m.contains(c); });
    if (!inside) return false;
  }
  return true;
}

bool support_contains(const Fan& sigma, const Cone& lam) {
  if (sigma.empty()) return false;
  const std::size_t k = lam.dim();
  if (k == 0) return true;
  std::vector<Cone> pieces;
  for (const auto& m : sigma.maximal()) {
    Cone p = lam.intersect(m);
    if (p.dim() == k) pieces.push_back(std::move(p));
  }
  pieces = dedupe(pieces);
  if (pieces.empty()) return false;
  if (pieces.size() == 1) return pieces[0] == lam;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (const auto& f : pieces[i].faces()) {
      if (f.cone.dim() + 1 != k) continue;
      if (!lam.in_relint(to_qvec(f.cone.relint_point()))) continue;
      bool shared = false;
      for (std::size_t j = 0; j < pieces.size() && !shared; ++j)
        if (j != i && f.cone.is_face_of(pieces[j])) shared = true;
      if (!shared) return false;
    }
  }
  return true;
}

bool same_support(const Fan& sigma, const Fan& phi) {
  for (const auto& c : sigma.maximal())
    if (!support_contains(phi, c)) return false;
  for (const auto& c : phi.maximal())
    if (!support_contains(sigma, c)) return false;
  return true;
}

Fan real_intersection(const std::vector<Fan>& fans, std::size_t d) {
  if (fans.empty()) return Fan::face_fan(Cone::whole(d));
  Fan acc = fans[0];
  for (std::size_t i = 1; i < fans.size(); ++i) {
    std::vector<Cone> pieces;
    for (const auto& a : acc.maximal())
      for (const auto& b : fans[i].maximal()) pieces.push_back(a.intersect(b));
    acc = Fan::from_maximal_trusted(d, pieces);
  }
  return acc;
}

Fan star_subdivision(const Fan& sigma, const Cone& F) {
  if (!sigma.has(F)) throw PreconditionError("star subdivision: center " + F.str() + " is not in the fan");
  if (!F.is_regular()) throw PreconditionError("star subdivision: center " + F.str() + " is not regular");
  if (F.dim() == 0) throw PreconditionError("star subdivision: center has dimension 0");
  if (F.dim() == 1) return sigma;
  const std::size_t d = sigma.ambient_dim();
  IVec b = F.barycenter();
  std::vector<Cone> out;
  for (const auto& m : sigma.maximal()) {
    if (!m.contains(F)) {
      out.push_back(m);
      continue;
    }
    if (!m.is_regular()) throw PreconditionError("star subdivision: fan is not regular at " + m.str());
    for (const auto& e : F.rays()) {
      IMat gens{b};
      for (const auto& r : m.rays())
        if (r != e) gens.push_back(r);
      Cone c = Cone::from_rays(d, gens);
      if (!c.is_regular() || c.dim() != m.dim())
        throw InvariantViolation("star subdivision produced a bad cone " + c.str());
      out.push_back(std::move(c));
    }
  }
  Fan res = Fan::from_maximal_trusted(d, out);
  if (res.rays().size() != sigma.rays().size() + 1)
    throw InvariantViolation("star subdivision: ray count did not grow by one");
  return res;
}

Fan iterated_star(const Fan& sigma, const std::vector<Cone>& centers) {
  Fan cur = sigma;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const Cone& F = centers[i];
    if (!cur.has(F) || !F.is_regular() || F.dim() < 2)
      throw PreconditionError("invalid center at step " + std::to_string(i + 1) + ": " + F.str());
    cur = star_subdivision(cur, F);
  }
  return cur;
}

Cone support_cone(const Fan& sigma) {
  if (sigma.empty()) throw PreconditionError("support of an empty fan");
  IMat gens;
  for (const auto& m : sigma.maximal()) {
    for (const auto& r : m.rays()) gens.push_back(r);
    for (const auto& l : m.lineality()) {
      gens.push_back(l);
      gens.push_back(scale(Int(-1), l));
    }
  }
  Cone s = Cone::from_generators(sigma.ambient_dim(), gens);
  if (!support_contains(sigma, s)) throw PreconditionError("fan support is not a convex cone");
  return s;
}

Rat HSimpleProfile::constant(std::size_t i, const IVec& edge) const {
  for (std::size_t e = 0; e < edges.size(); ++e)
    if (edges[e] == edge) return constants.at(i - 1)[e];
  throw PreconditionError("structure constant: not an edge of the support");
}

std::optional<HSimpleProfile> h_simple_profile(const Fan& sigma, const Cone& H) {
  Cone support = support_cone(sigma);
  if (!support.is_regular()) throw PreconditionError("H-simple profile: support is not a regular cone");
  if (H.dim() != 1 || !H.is_face_of(support))
    throw PreconditionError("H-simple profile: H is not an edge of the support");
  const std::size_t n = support.dim();
  for (const auto& c : sigma.cones())
    if (support.in_relint(to_qvec(c.relint_point())) && c.dim() + 1 < n) return std::nullopt;
  Cone hop = opposite_face(H, support);
  if (!sigma.has(hop)) return std::nullopt;

  HSimpleProfile prof;
  prof.H = H;
  prof.support = support;
  prof.chambers = sigma.cones_of_dim(n);
  std::vector<Cone> plus;
  for (const auto& c : prof.chambers) plus.push_back(c.sum(H));
  std::vector<std::size_t> order(prof.chambers.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      bool a = plus[i].contains(plus[j]), b = plus[j].contains(plus[i]);
      if (a == b) throw InvariantViolation("H-order is not a total order on the chambers");
    }
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return plus[i] != plus[j] && plus[i].contains(plus[j]);
  });
  std::vector<Cone> sorted;
  for (auto i : order) sorted.push_back(prof.chambers[i]);
  prof.chambers = std::move(sorted);
  if (!prof.chambers.front().contains(hop)) throw InvariantViolation("first chamber misses H^op");

  prof.skeleton.push_back(hop);
  for (std::size_t i = 1; i < prof.chambers.size(); ++i)
    prof.skeleton.push_back(prof.chambers[i - 1].intersect(prof.chambers[i]));

  const IVec& bH = H.rays()[0];
  for (const auto& r : support.rays())
    if (r != bH) prof.edges.push_back(r);
  prof.constants.assign(prof.chambers.size(), std::vector<Rat>(prof.edges.size(), Rat(0)));
  for (std::size_t i = 1; i < prof.chambers.size(); ++i) {
    const Cone& wall = prof.skeleton[i];
    if (wall.dim() + 1 != n) throw InvariantViolation("skeleton wall has the wrong dimension");
    QVec normal;
    for (const auto& e : wall.equations()) {
      QVec p = project_out(to_qvec(e), support.equations());
      if (!is_zero(p)) {
        normal = std::move(p);
        break;
      }
    }
    Rat nh = dot(bH, normal);
    if (nh == 0) throw InvariantViolation("skeleton wall contains H");
    bool strict = false;
    for (std::size_t e = 0; e < prof.edges.size(); ++e) {
      prof.constants[i][e] = -dot(prof.edges[e], normal) / nh;
      if (prof.constants[i][e] < prof.constants[i - 1][e])
        throw InvariantViolation("structure constants are not monotone");
      if (prof.constants[i][e] > prof.constants[i - 1][e]) strict = true;
    }
    if (!strict) throw InvariantViolation("structure constants do not increase strictly");
  }
  return prof;
}

std::string fan_text(const Fan& sigma) {
  const IMat rays = sigma.rays();
  for (const auto& c : sigma.maximal())
    if (!c.is_strongly_convex()) throw PreconditionError("fan text needs strongly convex cones: " + c.str());
  std::ostringstream os;
  os << "FAN dim=" << sigma.ambient_dim() << " rays=" << rays.size() << " cones=" << sigma.maximal().size() << "\n";
  for (std::size_t i = 0; i < rays.size(); ++i) os << "RAY " << i << ": " << to_string(rays[i], " ") << "\n";
  for (const auto& c : sigma.maximal()) {
    std::vector<std::size_t> idx;
    for (const auto& r : c.rays())
      idx.push_back(static_cast<std::size_t>(std::lower_bound(rays.begin(), rays.end(), r) - rays.begin()));
    std::sort(idx.begin(), idx.end());
    os << "CONE:";
    for (auto i : idx) os << " " << i;
    os << "\n";
  }
  return os.str();
}

Fan parse_fan_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) -> ParseError { return ParseError("fan: " + what, lineno, 1); };
  auto next = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };
  if (!next()) throw fail("empty input");
  std::size_t d = 0, k = 0, m = 0;
  {
    std::istringstream hs(line);
    std::string tag, a, b, c;
    hs >> tag >> a >> b >> c;
    auto field = [&](const std::string& tok, const std::string& key) -> std::size_t {
      if (tok.rfind(key + "=", 0) != 0) throw fail("expected " + key + "=");
      try {
        return std::stoul(tok.substr(key.size() + 1));
      } catch (const std::exception&) {
        throw fail("bad number in " + tok);
      }
    };
    if (tag != "FAN") throw fail("expected FAN header");
    d = field(a, "dim");
    k = field(b, "rays");
    m = field(c, "cones");
  }
  IMat rays;
  for (std::size_t i = 0; i < k; ++i) {
    if (!next()) throw fail("missing RAY line");
    std::istringstream ls(line);
    std::string tag, label;
    ls >> tag >> label;
    if (tag != "RAY" || label != std::to_string(i) + ":") throw fail("expected RAY " + std::to_string(i) + ":");
    IVec r;
    std::string tok;
    while (ls >> tok) {
      Int v;
      if (v.set_str(tok, 10) != 0) throw fail("bad integer " + tok);
      r.push_back(v);
    }
    if (r.size() != d) throw fail("ray has wrong length");
    rays.push_back(r);
  }
  std::vector<Cone> cones;
  for (std::size_t j = 0; j < m; ++j) {
    if (!next()) throw fail("missing CONE line");
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag != "CONE:") throw fail("expected CONE:");
    IMat gens;
    std::string tok;
    while (ls >> tok) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(tok);
      } catch (const std::exception&) {
        throw fail("bad ray index " + tok);
      }
      if (idx >= rays.size()) throw fail("ray index out of range");
      gens.push_back(rays[idx]);
    }
    cones.push_back(Cone::from_generators(d, gens));
  }
  if (next()) throw fail("trailing content");
  return Fan::from_maximal(d, cones);
}

}  // namespace tr
