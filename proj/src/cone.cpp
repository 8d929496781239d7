#include "toricres/cone.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>

#include "toricres/errors.hpp"

namespace tr {

namespace {

class Bits {
 public:
  explicit Bits(std::size_t n = 0) : w_((n + 63) / 64, 0) {}
  void set(std::size_t i) {
    if (i / 64 >= w_.size()) w_.resize(i / 64 + 1, 0);
    w_[i / 64] |= std::uint64_t(1) << (i % 64);
  }
  Bits operator&(const Bits& o) const {
    Bits r;
    r.w_.resize(std::min(w_.size(), o.w_.size()));
    for (std::size_t i = 0; i < r.w_.size(); ++i) r.w_[i] = w_[i] & o.w_[i];
    return r;
  }
  bool subset_of(const Bits& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i) {
      std::uint64_t ow = i < o.w_.size() ? o.w_[i] : 0;
      if (w_[i] & ~ow) return false;
    }
    return true;
  }

 private:
  std::vector<std::uint64_t> w_;
};

struct DDRay {
  IVec v;
  Bits zeros;
};

struct DDResult {
  IMat rays;
  IMat lineality;
};

// Double description for {x : A x >= 0}.
DDResult double_description(std::size_t d, const IMat& A) {
  IMat lin;
  for (std::size_t i = 0; i < d; ++i) lin.push_back(unit_ivec(d, i));
  std::vector<DDRay> rays;
  for (std::size_t k = 0; k < A.size(); ++k) {
    const IVec& a = A[k];
    std::size_t piv = lin.size();
    for (std::size_t i = 0; i < lin.size(); ++i)
      if (dot(a, lin[i]) != 0) {
        piv = i;
        break;
      }
    if (piv < lin.size()) {
      IVec l0 = lin[piv];
      Int s0 = dot(a, l0);
      if (s0 < 0) {
        l0 = scale(Int(-1), l0);
        s0 = -s0;
      }
      IMat nl;
      for (std::size_t i = 0; i < lin.size(); ++i) {
        if (i == piv) continue;
        Int s = dot(a, lin[i]);
        nl.push_back(s == 0 ? lin[i] : primitive(sub(scale(s0, lin[i]), scale(s, l0))));
      }
      lin = std::move(nl);
      for (auto& r : rays) {
        Int s = dot(a, r.v);
        if (s != 0) r.v = primitive(sub(scale(s0, r.v), scale(s, l0)));
        r.zeros.set(k);
      }
      Bits z;
      for (std::size_t j = 0; j < k; ++j) z.set(j);
      rays.push_back({primitive(l0), z});
      continue;
    }
    std::vector<Int> s(rays.size());
    std::vector<std::size_t> pos, neg;
    std::vector<DDRay> next;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      s[i] = dot(a, rays[i].v);
      if (s[i] > 0) pos.push_back(i);
      if (s[i] < 0) neg.push_back(i);
    }
    for (std::size_t p : pos) {
      for (std::size_t n : neg) {
        Bits common = rays[p].zeros & rays[n].zeros;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == n) continue;
          if (common.subset_of(rays[r].zeros)) adjacent = false;
        }
        if (!adjacent) continue;
        IVec v = primitive(add(scale(s[p], rays[n].v), scale(Int(-s[n]), rays[p].v)));
        common.set(k);
        next.push_back({std::move(v), std::move(common)});
      }
    }
    for (std::size_t i = 0; i < rays.size(); ++i) {
      if (s[i] < 0) continue;
      if (s[i] == 0) rays[i].zeros.set(k);
      next.push_back(std::move(rays[i]));
    }
    rays = std::move(next);
  }
  DDResult res;
  res.lineality = std::move(lin);
  for (auto& r : rays) res.rays.push_back(std::move(r.v));
  return res;
}

IMat with_negatives(const IMat& rows) {
  IMat out;
  for (const auto& r : rows) {
    out.push_back(r);
    out.push_back(scale(Int(-1), r));
  }
  return out;
}

IMat canonical_rays(const IMat& rays, const IMat& lineality) {
  std::set<IVec> seen;
  for (const auto& r : rays) {
    IVec p = primitive(project_out(to_qvec(r), lineality));
    if (!is_zero(p)) seen.insert(std::move(p));
  }
  return IMat(seen.begin(), seen.end());
}

}  // namespace

Cone Cone::from_canonical_generators(std::size_t d, const IMat& rays, const IMat& lineality) {
  if (lineality.empty() && rank(rays) == rays.size()) {
    // Simplicial: facet normals come from the inverse Gram matrix.
    Cone c;
    c.d_ = d;
    c.rays_ = rays;
    if (!rays.empty()) c.equations_ = canonical_row_basis(integer_kernel(rays, d), d);
    else
      for (std::size_t i = 0; i < d; ++i) c.equations_.push_back(unit_ivec(d, i));
    const std::size_t k = rays.size();
    QMat gram(k, QVec(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) gram[i][j] = Rat(dot(rays[i], rays[j]));
    std::set<IVec> fac;
    for (std::size_t i = 0; i < k; ++i) {
      QVec e(k, Rat(0));
      e[i] = 1;
      QVec a = *solve_exact(gram, e);
      QVec f(d, Rat(0));
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t t = 0; t < d; ++t) f[t] += a[j] * rays[j][t];
      fac.insert(primitive(f));
    }
    c.facets_.assign(fac.begin(), fac.end());
    return c;
  }
  IMat gens = rays;
  for (const auto& r : with_negatives(lineality)) gens.push_back(r);
  DDResult dual = double_description(d, gens);
  Cone c;
  c.d_ = d;
  c.lineality_ = lineality;
  c.rays_ = rays;
  c.equations_ = canonical_row_basis(dual.lineality, d);
  c.facets_ = canonical_rays(dual.rays, c.equations_);
  return c;
}

Cone Cone::from_generators(std::size_t d, const IMat& gens) {
  for (const auto& g : gens)
    if (g.size() != d) throw PreconditionError("generator has wrong length");
  DDResult h = double_description(d, gens);
  IMat eqs = canonical_row_basis(h.lineality, d);
  IMat fac = canonical_rays(h.rays, eqs);
  IMat rows = fac;
  for (const auto& r : with_negatives(eqs)) rows.push_back(r);
  DDResult v = double_description(d, rows);
  Cone c;
  c.d_ = d;
  c.lineality_ = canonical_row_basis(v.lineality, d);
  c.rays_ = canonical_rays(v.rays, c.lineality_);
  c.equations_ = std::move(eqs);
  c.facets_ = std::move(fac);
  return c;
}

Cone Cone::from_rays(std::size_t d, const IMat& rays, const IMat& lineality) {
  if (lineality.empty() && rank(rays) == rays.size()) {
    IMat canon;
    for (const auto& r : rays) canon.push_back(primitive(r));
    std::sort(canon.begin(), canon.end());
    return from_canonical_generators(d, canon, {});
  }
  IMat gens = rays;
  for (const auto& r : with_negatives(lineality)) gens.push_back(r);
  return from_generators(d, gens);
}

Cone Cone::from_inequalities(std::size_t d, const IMat& ineqs, const IMat& eqs) {
  IMat rows = ineqs;
  for (const auto& r : with_negatives(eqs)) rows.push_back(r);
  for (const auto& r : rows)
    if (r.size() != d) throw PreconditionError("inequality has wrong length");
  DDResult v = double_description(d, rows);
  IMat lin = canonical_row_basis(v.lineality, d);
  return from_canonical_generators(d, canonical_rays(v.rays, lin), lin);
}

Cone Cone::zero(std::size_t d) {
  Cone c;
  c.d_ = d;
  for (std::size_t i = 0; i < d; ++i) c.equations_.push_back(unit_ivec(d, i));
  return c;
}

Cone Cone::whole(std::size_t d) { return zero(d).dual(); }

Cone Cone::orthant(std::size_t d) {
  Cone c;
  c.d_ = d;
  for (std::size_t i = 0; i < d; ++i) c.rays_.push_back(unit_ivec(d, i));
  std::sort(c.rays_.begin(), c.rays_.end());
  c.facets_ = c.rays_;
  return c;
}

bool Cone::is_simplicial() const { return is_strongly_convex() && rays_.size() == dim(); }

bool Cone::is_regular() const { return is_simplicial() && is_lattice_basis_part(rays_); }

bool Cone::contains(const QVec& x) const {
  for (const auto& e : equations_)
    if (dot(e, x) != 0) return false;
  for (const auto& f : facets_)
    if (dot(f, x) < 0) return false;
  return true;
}

bool Cone::contains(const IVec& x) const { return contains(to_qvec(x)); }

bool Cone::contains(const Cone& other) const {
  for (const auto& r : other.rays_)
    if (!contains(r)) return false;
  for (const auto& l : other.lineality_) {
    if (!contains(l) || !contains(scale(Int(-1), l))) return false;
  }
  return true;
}

bool Cone::in_relint(const QVec& x) const {
  for (const auto& e : equations_)
    if (dot(e, x) != 0) return false;
  for (const auto& f : facets_)
    if (dot(f, x) <= 0) return false;
  return true;
}

IVec Cone::relint_point() const {
  IVec s = zero_ivec(d_);
  for (const auto& r : rays_) s = add(s, r);
  return s;
}

Cone Cone::dual() const {
  Cone c;
  c.d_ = d_;
  c.rays_ = facets_;
  c.lineality_ = equations_;
  c.facets_ = rays_;
  c.equations_ = lineality_;
  return c;
}

Cone Cone::intersect(const Cone& other) const {
  if (other.d_ != d_) throw PreconditionError("intersect: ambient mismatch");
  IMat ineqs = facets_;
  ineqs.insert(ineqs.end(), other.facets_.begin(), other.facets_.end());
  IMat eqs = equations_;
  eqs.insert(eqs.end(), other.equations_.begin(), other.equations_.end());
  return from_inequalities(d_, ineqs, eqs);
}

Cone Cone::sum(const Cone& other) const {
  if (other.d_ != d_) throw PreconditionError("sum: ambient mismatch");
  IMat gens = rays_;
  gens.insert(gens.end(), other.rays_.begin(), other.rays_.end());
  IMat lin = lineality_;
  lin.insert(lin.end(), other.lineality_.begin(), other.lineality_.end());
  return from_rays(d_, gens, lin);
}

Cone Cone::minimal_face() const { return from_canonical_generators(d_, {}, lineality_); }

Cone Cone::face_from_rays(const std::vector<std::size_t>& ray_indices) const {
  IMat sub;
  for (auto i : ray_indices) sub.push_back(rays_[i]);
  return from_canonical_generators(d_, sub, lineality_);
}

Cone Cone::face_of(const QVec& w) const {
  for (const auto& l : lineality_)
    if (dot(l, w) != 0) throw PreconditionError("face_of: witness not in the dual cone");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < rays_.size(); ++i) {
    Rat s = dot(rays_[i], w);
    if (s < 0) throw PreconditionError("face_of: witness not in the dual cone");
    if (s == 0) idx.push_back(i);
  }
  return face_from_rays(idx);
}

Cone Cone::carrier_face(const QVec& p) const {
  if (!contains(p)) throw PreconditionError("carrier_face: point outside the cone");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < rays_.size(); ++i) {
    bool keep = true;
    for (const auto& f : facets_)
      if (dot(f, p) == 0 && dot(f, rays_[i]) != 0) {
        keep = false;
        break;
      }
    if (keep) idx.push_back(i);
  }
  return face_from_rays(idx);
}

bool Cone::is_face_of(const Cone& S) const {
  if (S.d_ != d_ || !S.contains(*this)) return false;
  return S.carrier_face(to_qvec(relint_point())) == *this;
}

std::vector<ConeFace> Cone::faces() const {
  const std::size_t nf = facets_.size();
  std::vector<std::vector<bool>> tight(nf, std::vector<bool>(rays_.size()));
  for (std::size_t j = 0; j < nf; ++j)
    for (std::size_t i = 0; i < rays_.size(); ++i) tight[j][i] = dot(facets_[j], rays_[i]) == 0;

  auto closure = [&](const std::vector<std::size_t>& rs) {
    std::vector<std::size_t> t;
    for (std::size_t j = 0; j < nf; ++j) {
      bool all = true;
      for (auto i : rs)
        if (!tight[j][i]) {
          all = false;
          break;
        }
      if (all) t.push_back(j);
    }
    return t;
  };

  std::vector<std::size_t> all_rays(rays_.size());
  for (std::size_t i = 0; i < rays_.size(); ++i) all_rays[i] = i;
  std::map<std::vector<std::size_t>, std::vector<std::size_t>> seen;
  std::vector<std::vector<std::size_t>> queue{closure(all_rays)};
  seen[queue[0]] = all_rays;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const auto T = queue[q];
    const auto rs = seen[T];
    for (std::size_t j = 0; j < nf; ++j) {
      if (std::binary_search(T.begin(), T.end(), j)) continue;
      std::vector<std::size_t> sub;
      for (auto i : rs)
        if (tight[j][i]) sub.push_back(i);
      auto T2 = closure(sub);
      if (seen.count(T2)) continue;
      seen[T2] = sub;
      queue.push_back(T2);
    }
  }
  std::vector<ConeFace> out;
  for (const auto& [T, rs] : seen) {
    IVec w = zero_ivec(d_);
    for (auto j : T) w = add(w, facets_[j]);
    out.push_back({face_from_rays(rs), w});
  }
  std::sort(out.begin(), out.end(), [](const ConeFace& a, const ConeFace& b) { return a.cone < b.cone; });
  return out;
}

IVec Cone::barycenter() const {
  if (!is_regular()) throw PreconditionError("barycenter: cone is not regular: " + str());
  return relint_point();
}

std::string Cone::str() const {
  std::ostringstream os;
  os << "cone(";
  for (std::size_t i = 0; i < rays_.size(); ++i) os << (i ? " " : "") << "(" << to_string(rays_[i]) << ")";
  if (!lineality_.empty()) {
    os << " +lin";
    for (const auto& l : lineality_) os << " (" << to_string(l) << ")";
  }
  os << ")";
  return os.str();
}

bool operator<(const Cone& a, const Cone& b) {
  if (a.d_ != b.d_) return a.d_ < b.d_;
  if (a.dim() != b.dim()) return a.dim() < b.dim();
  if (a.lineality_ != b.lineality_) return a.lineality_ < b.lineality_;
  return a.rays_ < b.rays_;
}

Cone opposite_face(const Cone& F, const Cone& S) {
  if (!S.is_simplicial()) throw PreconditionError("opposite_face: cone is not simplicial");
  if (!F.is_face_of(S)) throw PreconditionError("opposite_face: not a face");
  IMat rest;
  for (const auto& r : S.rays())
    if (!std::binary_search(F.rays().begin(), F.rays().end(), r)) rest.push_back(r);
  return Cone::from_rays(S.ambient_dim(), rest);
}

}  // namespace tr
