#include "toricres/newton.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>

#include "toricres/errors.hpp"

namespace tr {

namespace {

int degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

int x_degree(const Exponent& e, std::size_t z) { return degree(e) - e[z]; }

Exponent exp_add(const Exponent& a, const Exponent& b) {
  Exponent r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

QVec to_q(const Exponent& e) {
  QVec v;
  for (int a : e) v.emplace_back(a);
  return v;
}

void same_ring(const MultiPoly& a, const MultiPoly& b) {
  if (!(a.field() == b.field()) || a.nvars() != b.nvars())
    throw PreconditionError("polynomials live in different rings");
}

std::string rat_str(const Rat& r) {
  std::ostringstream os;
  os << r.get_num();
  if (r.get_den() != 1) os << "/" << r.get_den();
  return os.str();
}

// Keeps the terms whose non-z degree is below xo.
MultiPoly x_trunc(const MultiPoly& a, std::size_t z, int xo) {
  MultiPoly r(a.field(), a.nvars());
  for (const auto& [e, c] : a.terms())
    if (x_degree(e, z) < xo) r.add_term(e, c);
  return r;
}

MultiPoly x_part(const MultiPoly& a, std::size_t z, int k) {
  MultiPoly r(a.field(), a.nvars());
  for (const auto& [e, c] : a.terms())
    if (x_degree(e, z) == k) r.add_term(e, c);
  return r;
}

MultiPoly mul_x_trunc(const MultiPoly& a, const MultiPoly& b, std::size_t z, int xo) {
  MultiPoly r(a.field(), a.nvars());
  for (const auto& [ea, ca] : a.terms()) {
    if (x_degree(ea, z) >= xo) continue;
    for (const auto& [eb, cb] : b.terms()) {
      Exponent e = exp_add(ea, eb);
      if (x_degree(e, z) < xo) r.add_term(e, ca * cb);
    }
  }
  return r;
}

// Terms of z-degree below k.
MultiPoly z_low(const MultiPoly& a, std::size_t z, int k) {
  MultiPoly r(a.field(), a.nvars());
  for (const auto& [e, c] : a.terms())
    if (e[z] < k) r.add_term(e, c);
  return r;
}

Exponent z_power(std::size_t n, std::size_t z, int k) {
  Exponent e(n, 0);
  e[z] = k;
  return e;
}

std::size_t affine_dim(const std::vector<QVec>& pts) {
  if (pts.size() <= 1) return 0;
  QMat diffs;
  for (std::size_t i = 1; i < pts.size(); ++i) diffs.push_back(sub(pts[i], pts[0]));
  return rank(diffs);
}

struct TopEdge {
  Exponent other;
  QVec weight;
};

// Compact edges of the Newton polyhedron from the vertex top.
std::vector<TopEdge> edges_from(const PseudoPolytope& np, const Exponent& top) {
  const QVec tq = to_q(top);
  const auto& verts = np.vertices();
  auto it = std::find(verts.begin(), verts.end(), tq);
  if (it == verts.end()) throw InvariantViolation("top point is not a vertex of the Newton polyhedron");
  const Cone& nt = np.vertex_normal_cone(static_cast<std::size_t>(it - verts.begin()));
  std::vector<TopEdge> out;
  for (std::size_t j = 0; j < verts.size(); ++j) {
    if (verts[j] == tq) continue;
    Cone meet = nt.intersect(np.vertex_normal_cone(j));
    if (meet.dim() + 1 != np.ambient_dim()) continue;
    Exponent b;
    for (const auto& c : verts[j]) b.push_back(static_cast<int>(c.get_num().get_si()));
    out.push_back({b, {}});
    for (const auto& c : meet.relint_point()) out.back().weight.emplace_back(c);
  }
  return out;
}

Rat int_pow(const Rat& a, unsigned k) {
  Rat r = 1;
  for (unsigned i = 0; i < k; ++i) r *= a;
  return r;
}

// Univariate polynomial c[0] + c[1] t + ... evaluated exactly.
Rat eval_uni(const std::vector<Rat>& c, const Rat& t, const Field& f) {
  Rat r = 0;
  for (std::size_t i = c.size(); i-- > 0;) r = f.reduce(r * t + c[i]);
  return r;
}

std::vector<Rat> derive_uni(const std::vector<Rat>& c, const Field& f) {
  std::vector<Rat> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(f.reduce(c[i] * Rat(static_cast<long>(i))));
  return d;
}

std::vector<Int> divisors(Int n) {
  n = abs(n);
  std::vector<Int> out;
  if (n == 0 || n > Int("1000000000000")) return out;
  for (Int d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    if (d * d != n) out.push_back(Int(n / d));
  }
  return out;
}

// Nonzero simple roots in the field, sorted.
std::vector<Rat> simple_roots(const std::vector<Rat>& c, const Field& f) {
  std::vector<Rat> cands;
  if (f.is_rational()) {
    std::size_t lo = 0;
    while (lo < c.size() && c[lo] == 0) ++lo;
    std::size_t hi = c.size();
    while (hi > lo && c[hi - 1] == 0) --hi;
    if (hi - lo < 2) return {};
    Int den = 1;
    for (std::size_t i = lo; i < hi; ++i) den = lcm(den, Int(c[i].get_den()));
    const Int a0 = Int(c[lo] * den), an = Int(c[hi - 1] * den);
    for (const auto& p : divisors(a0))
      for (const auto& q : divisors(an)) {
        Rat r(p, q);
        r.canonicalize();
        cands.push_back(r);
        cands.push_back(-r);
      }
  } else {
    for (unsigned long v = 1; v < f.p; ++v) cands.emplace_back(static_cast<long>(v));
  }
  std::set<Rat> roots;
  const auto d = derive_uni(c, f);
  for (const auto& t : cands)
    if (eval_uni(c, t, f) == 0 && eval_uni(d, t, f) != 0) roots.insert(t);
  return {roots.begin(), roots.end()};
}

void check_z(std::size_t z, const MultiPoly& phi) {
  if (z >= phi.nvars()) throw PreconditionError("z index out of range");
}

bool has_coordinate_divisor(std::size_t z, const MultiPoly& phi) {
  const Exponent m = phi.monomial_content();
  for (std::size_t i = 0; i < m.size(); ++i)
    if (i != z && m[i] > 0) return true;
  return false;
}

}  // namespace

Field Field::prime(unsigned long p) {
  if (p < 2 || mpz_probab_prime_p(Int(p).get_mpz_t(), 30) == 0)
    throw PreconditionError("field characteristic " + std::to_string(p) + " is not prime");
  Field f;
  f.p = p;
  return f;
}

Rat Field::reduce(const Rat& a) const {
  if (p == 0) return a;
  const Int P(p);
  Int num = a.get_num() % P;
  if (num < 0) num += P;
  Int den = a.get_den() % P;
  if (den == 0) throw PreconditionError("division by a multiple of the characteristic");
  Int inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), P.get_mpz_t());
  Int r = (num * inv) % P;
  return Rat(r);
}

Rat Field::inverse(const Rat& a) const {
  Rat r = reduce(a);
  if (r == 0) throw PreconditionError("division by zero in " + str());
  return reduce(Rat(1) / r);
}

std::string Field::str() const { return p == 0 ? "Q" : "F_" + std::to_string(p); }

MultiPoly MultiPoly::constant(Field f, std::size_t n, const Rat& c) {
  MultiPoly r(f, n);
  r.add_term(Exponent(n, 0), c);
  return r;
}

MultiPoly MultiPoly::variable(Field f, std::size_t n, std::size_t i) {
  MultiPoly r(f, n);
  Exponent e(n, 0);
  e.at(i) = 1;
  r.add_term(e, 1);
  return r;
}

MultiPoly MultiPoly::monomial(Field f, const Exponent& e, const Rat& c) {
  MultiPoly r(f, e.size());
  r.add_term(e, c);
  return r;
}

Rat MultiPoly::coeff(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rat(0) : it->second;
}

void MultiPoly::add_term(const Exponent& e, const Rat& c) {
  if (e.size() != n_) throw PreconditionError("exponent has wrong arity");
  for (int a : e)
    if (a < 0) throw PreconditionError("negative exponent");
  Rat v = field_.reduce(c);
  if (v == 0) return;
  auto [it, inserted] = terms_.emplace(e, v);
  if (inserted) return;
  it->second = field_.reduce(it->second + v);
  if (it->second == 0) terms_.erase(it);
}

std::vector<Exponent> MultiPoly::support() const {
  std::vector<Exponent> s;
  for (const auto& [e, c] : terms_) s.push_back(e);
  return s;
}

int MultiPoly::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, degree(e));
  return d;
}

int MultiPoly::degree_in(std::size_t var) const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

MultiPoly MultiPoly::operator-() const { return scaled(-1); }

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  same_ring(*this, o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  same_ring(*this, o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  same_ring(a, b);
  MultiPoly r(a.field_, a.n_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) r.add_term(exp_add(ea, eb), ca * cb);
  return r;
}

MultiPoly MultiPoly::scaled(const Rat& c) const {
  MultiPoly r(field_, n_);
  for (const auto& [e, v] : terms_) r.add_term(e, v * c);
  return r;
}

MultiPoly MultiPoly::pow(unsigned k) const {
  MultiPoly r = constant(field_, n_, 1);
  for (unsigned i = 0; i < k; ++i) r = r * *this;
  return r;
}

MultiPoly MultiPoly::truncated(int order) const {
  MultiPoly r(field_, n_);
  for (const auto& [e, c] : terms_)
    if (degree(e) < order) r.terms_.emplace(e, c);
  return r;
}

MultiPoly MultiPoly::mul_trunc(const MultiPoly& a, const MultiPoly& b, int order) {
  same_ring(a, b);
  MultiPoly r(a.field_, a.n_);
  for (const auto& [ea, ca] : a.terms_) {
    const int da = degree(ea);
    if (da >= order) continue;
    for (const auto& [eb, cb] : b.terms_)
      if (da + degree(eb) < order) r.add_term(exp_add(ea, eb), ca * cb);
  }
  return r;
}

MultiPoly MultiPoly::inverse_trunc(int order) const {
  const Rat c0 = constant_term();
  if (c0 == 0) throw PreconditionError("inverse of a non-unit");
  const Rat ic = field_.inverse(c0);
  // 1/u = ic * sum (-t)^k with t = u * ic - 1.
  MultiPoly t = scaled(ic) - constant(field_, n_, 1);
  MultiPoly neg_t = -t;
  MultiPoly sum = constant(field_, n_, 1);
  MultiPoly power = sum;
  for (int k = 1; k < order; ++k) {
    power = mul_trunc(power, neg_t, order);
    if (power.is_zero()) break;
    sum += power;
  }
  return sum.truncated(order).scaled(ic);
}

MultiPoly MultiPoly::substitute(std::size_t var, const MultiPoly& q) const {
  return substitute_trunc(var, q, -1);
}

MultiPoly MultiPoly::substitute_trunc(std::size_t var, const MultiPoly& q, int order) const {
  same_ring(*this, q);
  if (var >= n_) throw PreconditionError("substitution variable out of range");
  std::map<int, MultiPoly> by_power;
  for (const auto& [e, c] : terms_) {
    Exponent rest = e;
    rest[var] = 0;
    auto [it, ins] = by_power.try_emplace(e[var], field_, n_);
    it->second.add_term(rest, c);
  }
  auto mul = [&](const MultiPoly& a, const MultiPoly& b) { return order < 0 ? a * b : mul_trunc(a, b, order); };
  MultiPoly result(field_, n_);
  MultiPoly power = constant(field_, n_, 1);
  int have = 0;
  for (const auto& [k, coeffs] : by_power) {
    while (have < k) {
      power = mul(power, q);
      ++have;
    }
    result += mul(coeffs, power);
  }
  return order < 0 ? result : result.truncated(order);
}

MultiPoly MultiPoly::divide_monomial(const Exponent& m) const {
  MultiPoly r(field_, n_);
  for (const auto& [e, c] : terms_) {
    Exponent d(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      d[i] = e[i] - m[i];
      if (d[i] < 0) throw PreconditionError("monomial division is not exact");
    }
    r.terms_.emplace(d, c);
  }
  return r;
}

Exponent MultiPoly::monomial_content() const {
  if (terms_.empty()) return Exponent(n_, 0);
  Exponent m = terms_.begin()->first;
  for (const auto& [e, c] : terms_)
    for (std::size_t i = 0; i < n_; ++i) m[i] = std::min(m[i], e[i]);
  return m;
}

MultiPoly MultiPoly::coefficient_in(std::size_t var, int k) const {
  MultiPoly r(field_, n_);
  for (const auto& [e, c] : terms_)
    if (e[var] == k) {
      Exponent rest = e;
      rest[var] = 0;
      r.terms_.emplace(rest, c);
    }
  return r;
}

std::string MultiPoly::str(const std::vector<std::string>& names) const {
  if (names.size() != n_) throw PreconditionError("variable name count mismatch");
  if (terms_.empty()) return "0";
  std::vector<std::pair<Exponent, Rat>> ordered(terms_.begin(), terms_.end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    const int da = degree(a.first), db = degree(b.first);
    if (da != db) return da < db;
    return a.first > b.first;
  });
  std::string out;
  bool first = true;
  for (const auto& [e, c] : ordered) {
    Rat mag = c;
    bool neg = false;
    if (field_.is_rational() && c < 0) {
      neg = true;
      mag = -c;
    }
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < n_; ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += names[i];
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty()) {
      out += rat_str(mag);
    } else if (mag == 1) {
      out += mono;
    } else {
      out += rat_str(mag) + "*" + mono;
    }
  }
  return out;
}

namespace {

class PolyParser {
 public:
  PolyParser(const std::string& text, const std::vector<std::string>& names, Field f, int line, int col0)
      : s_(text), names_(names), f_(f), line_(line), col0_(col0) {}

  MultiPoly parse() {
    MultiPoly r = expr();
    skip();
    if (pos_ < s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return r;
  }

 private:
  const std::string& s_;
  const std::vector<std::string>& names_;
  Field f_;
  int line_;
  int col0_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, col0_ + static_cast<int>(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  MultiPoly expr() {
    MultiPoly r(f_, names_.size());
    bool neg = false;
    if (eat('-'))
      neg = true;
    else
      eat('+');
    MultiPoly t = term();
    r += neg ? -t : t;
    for (;;) {
      if (eat('+'))
        r += term();
      else if (eat('-'))
        r -= term();
      else
        break;
    }
    return r;
  }

  MultiPoly term() {
    MultiPoly r = factor();
    while (eat('*')) r = r * factor();
    return r;
  }

  MultiPoly factor() {
    MultiPoly base = primary();
    if (eat('^')) {
      skip();
      const std::size_t start = pos_;
      Int k = digits();
      if (k > 10000) {
        pos_ = start;
        fail("exponent too large");
      }
      base = base.pow(static_cast<unsigned>(k.get_ui()));
    }
    return base;
  }

  Int digits() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return Int(s_.substr(start, pos_ - start));
  }

  MultiPoly primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of polynomial");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      MultiPoly r = expr();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    if (c == '-') {
      ++pos_;
      return -primary();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Int num = digits();
      Int den = 1;
      if (eat('/')) {
        skip();
        const std::size_t at = pos_;
        den = digits();
        if (den == 0 || (!f_.is_rational() && den % Int(f_.p) == 0)) {
          pos_ = at;
          fail("zero denominator");
        }
      }
      Rat v(num, den);
      v.canonicalize();
      return MultiPoly::constant(f_, names_.size(), v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      auto it = std::find(names_.begin(), names_.end(), name);
      if (it == names_.end()) {
        pos_ = start;
        fail("unknown variable '" + name + "'");
      }
      return MultiPoly::variable(f_, names_.size(), static_cast<std::size_t>(it - names_.begin()));
    }
    fail(std::string("unexpected '") + c + "'");
  }
};

}  // namespace

MultiPoly parse_poly(const std::string& text, const std::vector<std::string>& names, Field f, int line,
                     int column0) {
  return PolyParser(text, names, f, line, column0).parse();
}

MultiPoly FactoredPoly::expand() const {
  MultiPoly r = unit;
  for (const auto& [f, m] : factors) r = r * f.pow(m);
  return r;
}

PseudoPolytope newton_polyhedron(const MultiPoly& phi) {
  if (phi.is_zero()) throw PreconditionError("Newton polyhedron of the zero polynomial");
  std::vector<QVec> pts;
  for (const auto& e : phi.support()) pts.push_back(to_q(e));
  IMat rec;
  for (std::size_t i = 0; i < phi.nvars(); ++i) rec.push_back(unit_ivec(phi.nvars(), i));
  return PseudoPolytope(phi.nvars(), pts, rec);
}

OrdIn ord_in(const QVec& w, const MultiPoly& phi) {
  OrdIn out{std::nullopt, MultiPoly(phi.field(), phi.nvars())};
  for (const auto& c : w)
    if (c < 0) throw PreconditionError("ord: weight must be nonnegative");
  for (const auto& [e, c] : phi.terms()) {
    const Rat v = dot(to_q(e), w);
    if (!out.ord || v < *out.ord) {
      out.ord = v;
      out.initial = MultiPoly(phi.field(), phi.nvars());
    }
    if (v == *out.ord) out.initial.add_term(e, c);
  }
  return out;
}

MultiPoly partial_sum(const QVec& w, const MultiPoly& phi) { return ord_in(w, phi).initial; }

WeierstrassData weierstrass_data(std::size_t z, const MultiPoly& phi) {
  check_z(z, phi);
  if (phi.is_zero()) throw PreconditionError("Weierstrass data of the zero polynomial");
  WeierstrassData out;
  const Exponent ord = phi.monomial_content();
  out.z_order = ord[z];
  for (const auto& e : phi.support()) {
    bool attains = true;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (i != z && e[i] != ord[i]) attains = false;
    if (attains && (!out.top || e[z] < (*out.top)[z])) out.top = e;
  }
  out.is_type = out.top.has_value();
  if (out.top) out.z_height = (*out.top)[z] - out.z_order;
  return out;
}

WeierstrassForm weierstrass_normalize(std::size_t z, const MultiPoly& phi, int order) {
  const WeierstrassData wd = weierstrass_data(z, phi);
  if (!wd.is_type) throw PreconditionError("normalization requested for a polynomial not of Weierstrass type");
  const int h = wd.z_height;
  if (order <= h) throw PreconditionError("truncation order must exceed the z-height");
  const Field f = phi.field();
  const std::size_t n = phi.nvars();
  WeierstrassForm out;
  out.order = order;
  out.monomial = phi.monomial_content();
  const MultiPoly reduced = phi.divide_monomial(out.monomial);

  // Hensel lifting of reduced = P * G in k[[x]][z] from z^h * g0 at x = 0.
  const MultiPoly zh = MultiPoly::monomial(f, z_power(n, z, h), 1);
  const MultiPoly g0 = x_part(reduced, z, 0).divide_monomial(z_power(n, z, h));
  const MultiPoly t = g0.inverse_trunc(h);  // t * g0 = 1 mod z^h
  const MultiPoly s = (MultiPoly::constant(f, n, 1) - t * g0).divide_monomial(z_power(n, z, h));
  MultiPoly P = zh;
  MultiPoly G = g0;
  for (int k = 1; k < order; ++k) {
    const MultiPoly e = x_part(reduced - mul_x_trunc(P, G, z, k + 1), z, k);
    if (e.is_zero()) continue;
    const MultiPoly te = t * e;
    const MultiPoly dP = z_low(te, z, h);
    const MultiPoly q = (te - dP).divide_monomial(z_power(n, z, h));
    P += dP;
    G += s * e + g0 * q;
  }
  if (!x_trunc(reduced - mul_x_trunc(P, G, z, order), z, order).is_zero())
    throw InvariantViolation("Weierstrass lifting failed to reproduce the input");
  out.unit = G.truncated(order);
  out.poly = P.truncated(order);
  const MultiPoly mono = MultiPoly::monomial(f, out.monomial, 1);
  if ((mono * MultiPoly::mul_trunc(out.unit, out.poly, order)).truncated(order) != phi.truncated(order))
    throw InvariantViolation("normalized form does not match the input");
  return out;
}

SimpleWitness is_z_simple(std::size_t z, const MultiPoly& phi) {
  check_z(z, phi);
  const PseudoPolytope np = newton_polyhedron(phi);
  const std::size_t n = phi.nvars();
  std::vector<QVec> verts = np.vertices();
  std::sort(verts.begin(), verts.end(), [z](const QVec& a, const QVec& b) {
    if (a[z] != b[z]) return a[z] > b[z];
    return a < b;
  });

  // Vertex-slope criterion.
  std::string reason;
  for (std::size_t i = 0; i + 1 < verts.size() && reason.empty(); ++i)
    if (verts[i][z] == verts[i + 1][z])
      reason = "vertices (" + to_string(verts[i]) + ") and (" + to_string(verts[i + 1]) + ") share the z-level " +
               to_string(verts[i][z]);
  if (reason.empty() && verts.size() >= 2)
    for (std::size_t x = 0; x < n && reason.empty(); ++x)
      if (x != z && verts[1][x] < verts[0][x])
        reason = "vertex (" + to_string(verts[1]) + ") lies below the top vertex (" + to_string(verts[0]) +
                 ") in coordinate " + std::to_string(x);
  for (std::size_t i = 0; i + 2 < verts.size() && reason.empty(); ++i)
    for (std::size_t x = 0; x < n && reason.empty(); ++x) {
      if (x == z) continue;
      const Rat s1 = (verts[i + 1][x] - verts[i][x]) / (verts[i][z] - verts[i + 1][z]);
      const Rat s2 = (verts[i + 2][x] - verts[i + 1][x]) / (verts[i + 1][z] - verts[i + 2][z]);
      if (s1 > s2)
        reason = "slopes decrease at vertex (" + to_string(verts[i + 1]) + ") in coordinate " + std::to_string(x);
    }

  // Direct test: Weierstrass type and no compact face of dimension >= 2.
  std::string direct;
  if (!weierstrass_data(z, phi).is_type) direct = "not of Weierstrass type";
  if (direct.empty()) {
    const Fan normal = np.normal_fan();
    for (const auto& c : normal.cones()) {
      if (c.dim() + 2 > n) continue;
      const IVec w = c.relint_point();
      if (std::any_of(w.begin(), w.end(), [](const Int& a) { return a <= 0; })) continue;
      const PolytopeFace face = np.face_at(to_qvec(w));
      const std::size_t fd = affine_dim(face.vertices);
      if (fd < 2) continue;
      std::string vs;
      for (const auto& v : face.vertices) vs += (vs.empty() ? "(" : " (") + to_string(v) + ")";
      direct = "compact face conv{" + vs + "} has dimension " + std::to_string(fd);
      break;
    }
  }
  if (reason.empty() != direct.empty())
    throw InvariantViolation("z-simple criteria disagree: '" + reason + "' vs '" + direct + "'");
  return {direct.empty(), direct};
}

std::vector<RemovableFace> removable_faces(std::size_t z, const MultiPoly& phi) {
  const WeierstrassData wd = weierstrass_data(z, phi);
  if (!wd.is_type) throw PreconditionError("removable faces need Weierstrass type");
  if (has_coordinate_divisor(z, phi)) throw PreconditionError("removable faces: a coordinate x != z divides the input");
  std::vector<RemovableFace> out;
  const int h = (*wd.top)[z];
  if (h == 0) return out;
  const Field f = phi.field();
  const std::size_t n = phi.nvars();
  const Rat lc = phi.coeff(*wd.top);
  for (const auto& edge : edges_from(newton_polyhedron(phi), *wd.top)) {
    const int dz = h - edge.other[z];
    Exponent c(n, 0);
    bool integral = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == z) continue;
      if (edge.other[i] % dz != 0) integral = false;
      c[i] = edge.other[i] / dz;
    }
    if (!integral) continue;
    // For h = q * hh with q the largest power of p dividing h, (z + l x^c)^h has
    // z^(h - q) x^(q c) coefficient hh * l^q = hh * l over F_p.
    int q = 1;
    if (!f.is_rational())
      while ((h / q) % static_cast<int>(f.p) == 0) q *= static_cast<int>(f.p);
    const int hh = h / q;
    Exponent probe = c;
    for (auto& a : probe) a *= q;
    probe[z] = h - q;
    Rat lambda = f.div(phi.coeff(probe), lc * Rat(hh));
    if (lambda == 0) continue;
    MultiPoly chi = MultiPoly::monomial(f, c, lambda);
    const MultiPoly target = (MultiPoly::variable(f, n, z) + chi).pow(static_cast<unsigned>(h)).scaled(lc);
    if (ord_in(edge.weight, phi).initial != target) continue;
    out.push_back({edge.other, c, lambda, chi});
  }
  std::sort(out.begin(), out.end(), [](const RemovableFace& a, const RemovableFace& b) {
    const int wa = degree(a.slope), wb = degree(b.slope);
    if (wa != wb) return wa < wb;
    return a.slope < b.slope;
  });
  return out;
}

Elimination eliminate_removable(std::size_t z, const MultiPoly& psi, int order) {
  Elimination out;
  out.order = order;
  out.chi0 = MultiPoly(psi.field(), psi.nvars());
  out.result = psi;
  const MultiPoly zv = MultiPoly::variable(psi.field(), psi.nvars(), z);
  for (int guard = 0;; ++guard) {
    if (guard > 4 * order + 16) throw InvariantViolation("removable-face elimination does not terminate");
    const auto faces = removable_faces(z, out.result);
    if (faces.empty() || degree(faces.front().slope) >= order) break;
    const RemovableFace& face = faces.front();
    out.result = out.result.substitute(z, zv - face.chi);
    out.chi0 += face.chi;
    out.steps.push_back({face, out.result});
  }
  return out;
}

FactorKind classify_factor(std::size_t z, const MultiPoly& omega) {
  check_z(z, omega);
  if (omega.is_zero()) throw PreconditionError("zero factor");
  if (omega.constant_term() != 0) throw PreconditionError("factor has a nonzero constant term");
  if (has_coordinate_divisor(z, omega)) return FactorKind::coordinate;
  if (omega.coeff(z_power(omega.nvars(), z, 1)) != 0) return FactorKind::smooth;
  return FactorKind::main;
}

FactoredPoly main_factor(std::size_t z, const FactoredPoly& phi) {
  const std::size_t n = phi.unit.nvars();
  FactoredPoly out{MultiPoly::constant(phi.unit.field(), n, 1), {}};
  for (const auto& [omega, mult] : phi.factors)
    if (classify_factor(z, omega) == FactorKind::main) out.factors.emplace_back(omega, mult);
  return out;
}

MultiPoly implicit_root(std::size_t z, const MultiPoly& omega, int order) {
  check_z(z, omega);
  const Rat c = omega.coeff(z_power(omega.nvars(), z, 1));
  if (c == 0 || omega.constant_term() != 0) throw PreconditionError("implicit root needs a smooth factor");
  const Rat ic = omega.field().inverse(c);
  MultiPoly g(omega.field(), omega.nvars());
  for (int it = 0; it <= order; ++it) {
    const MultiPoly r = omega.substitute_trunc(z, g, order);
    if (r.is_zero()) break;
    g -= r.scaled(ic);
  }
  if (!omega.substitute_trunc(z, g, order).is_zero()) throw InvariantViolation("implicit root did not converge");
  return g;
}

std::optional<std::string> smooth_branch_diagnostic(std::size_t z, const MultiPoly& omega) {
  check_z(z, omega);
  if (omega.is_zero() || has_coordinate_divisor(z, omega)) return std::nullopt;
  const WeierstrassData wd = weierstrass_data(z, omega);
  if (!wd.is_type || wd.z_order > 0) return std::nullopt;
  const int h = (*wd.top)[z];
  if (h < 2) return std::nullopt;
  const Field f = omega.field();
  const std::size_t n = omega.nvars();
  for (const auto& edge : edges_from(newton_polyhedron(omega), *wd.top)) {
    const int dz = h - edge.other[z];
    Exponent c(n, 0);
    bool integral = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == z) continue;
      if (edge.other[i] % dz != 0) integral = false;
      c[i] = edge.other[i] / dz;
    }
    if (!integral) continue;
    // Edge polynomial: in_w(omega)(x, t x^c) / x^(h c) as a polynomial in t.
    std::vector<Rat> poly(static_cast<std::size_t>(h) + 1, Rat(0));
    const MultiPoly initial = ord_in(edge.weight, omega).initial;
    for (const auto& [e, coef] : initial.terms()) poly[e[z]] = coef;
    for (const auto& t0 : simple_roots(poly, f)) {
      // z = x^c (t0 + z1), with z1 stored in the z slot.
      const MultiPoly sub = MultiPoly::monomial(f, c, 1) *
                            (MultiPoly::constant(f, n, t0) + MultiPoly::variable(f, n, z));
      MultiPoly lifted = omega.substitute(z, sub);
      lifted = lifted.divide_monomial(lifted.monomial_content());
      if (lifted.constant_term() == 0 && lifted.coeff(z_power(n, z, 1)) != 0) {
        Exponent cz = c;
        cz[z] = 0;
        return "factor has a smooth branch z = " + to_string(t0) + "*x^" + exponent_str(cz) + " + ...";
      }
    }
  }
  return std::nullopt;
}

InvData inv_inv2(std::size_t z, const FactoredPoly& phi, int order) {
  const MultiPoly full = phi.expand();
  check_z(z, full);
  if (!weierstrass_data(z, full).is_type) throw PreconditionError("inv needs a polynomial of Weierstrass type");
  InvData out;
  const FactoredPoly main = main_factor(z, phi);
  if (!main.factors.empty()) {
    const MultiPoly psi = main.expand();
    const WeierstrassData wd = weierstrass_data(z, psi);
    if (!wd.is_type || has_coordinate_divisor(z, psi) || wd.z_order != 0)
      throw InvariantViolation("main factor is not of Weierstrass type with top vertex on the z-axis");
    out.inv = wd.z_height;
  }
  if (out.inv == 1) throw InvariantViolation("inv evaluated to 1");
  for (const auto& [omega, mult] : main.factors)
    if (auto w = smooth_branch_diagnostic(z, omega)) out.warnings.push_back(*w + "; inv may be overestimated");
  if (out.inv == 0) {
    std::vector<MultiPoly> roots;
    for (const auto& [omega, mult] : phi.factors) {
      if (classify_factor(z, omega) != FactorKind::smooth) continue;
      MultiPoly g = implicit_root(z, omega, order);
      if (std::find(roots.begin(), roots.end(), g) == roots.end()) roots.push_back(g);
    }
    out.inv2 = roots.size();
  }
  return out;
}

Tilt generic_tilt(std::size_t z, const MultiPoly& phi) {
  check_z(z, phi);
  if (phi.is_zero()) throw PreconditionError("tilt of the zero polynomial");
  const Field f = phi.field();
  const std::size_t n = phi.nvars();
  Tilt out;
  out.h = phi.total_degree();
  for (const auto& [e, c] : phi.terms()) out.h = std::min(out.h, degree(e));
  MultiPoly lowest(f, n);
  for (const auto& [e, c] : phi.terms())
    if (degree(e) == out.h) lowest.add_term(e, c);

  // Candidate values 0, 1, -1, 2, -2, ...; vectors by level then lexicographically in that order.
  std::vector<long> seq{0};
  const long max_level = f.is_rational() ? out.h + 1 : static_cast<long>(f.p / 2);
  for (long l = 1; l <= max_level; ++l) {
    seq.push_back(l);
    seq.push_back(-l);
  }
  std::vector<std::size_t> xs;
  for (std::size_t i = 0; i < n; ++i)
    if (i != z) xs.push_back(i);
  auto level = [](std::size_t k) { return static_cast<long>((k + 1) / 2); };
  std::optional<std::vector<Rat>> alpha;
  for (long L = 0; L <= max_level && !alpha; ++L) {
    const std::size_t width = static_cast<std::size_t>(2 * L + 1);
    std::vector<std::size_t> idx(xs.size(), 0);
    for (bool more = true; more && !alpha;) {
      long top = 0;
      for (auto k : idx) top = std::max(top, level(k));
      if (top == L) {
        std::vector<Rat> a(n, Rat(0));
        for (std::size_t j = 0; j < xs.size(); ++j) a[xs[j]] = f.reduce(Rat(seq[idx[j]]));
        Rat val = 0;
        for (const auto& [e, c] : lowest.terms()) {
          Rat m = c;
          for (std::size_t i = 0; i < n; ++i)
            if (i != z) m *= int_pow(a[i], static_cast<unsigned>(e[i]));
          val = f.reduce(val + m);
        }
        if (val != 0) alpha = a;
      }
      more = false;
      for (std::size_t j = idx.size(); j-- > 0;) {
        if (++idx[j] < width) {
          more = true;
          break;
        }
        idx[j] = 0;
      }
    }
  }
  if (!alpha) throw PreconditionError("generic tilt: no suitable alpha in " + f.str() + "; a field extension is needed");
  out.alpha = *alpha;
  out.tilted = phi;
  const MultiPoly zv = MultiPoly::variable(f, n, z);
  for (std::size_t x : xs)
    if (out.alpha[x] != 0) out.tilted = out.tilted.substitute(x, MultiPoly::variable(f, n, x) + zv.scaled(out.alpha[x]));
  const WeierstrassData wd = weierstrass_data(z, out.tilted);
  if (!wd.is_type || *wd.top != z_power(n, z, out.h)) throw InvariantViolation("tilt did not produce top vertex h f_z");
  return out;
}

std::optional<PseudoPolytope> rho_projection(std::size_t z, int h, const MultiPoly& phi) {
  check_z(z, phi);
  const std::size_t n = phi.nvars();
  std::vector<QVec> pts;
  for (const auto& e : phi.support()) {
    if (e[z] >= h) continue;
    QVec p;
    for (std::size_t i = 0; i < n; ++i)
      if (i != z) p.push_back(Rat(e[i], h - e[z]));
    for (auto& v : p) v.canonicalize();
    pts.push_back(p);
  }
  if (pts.empty()) return std::nullopt;
  IMat rec;
  for (std::size_t i = 0; i + 1 < n; ++i) rec.push_back(unit_ivec(n - 1, i));
  return PseudoPolytope(n - 1, pts, rec);
}

bool monotonicity_check(const MultiPoly& u, const Exponent& alpha, const MultiPoly& v, const Exponent& beta,
                        const MultiPoly& w, const Exponent& gamma, int order) {
  for (const MultiPoly* p : {&u, &v, &w})
    if (p->constant_term() == 0) throw PreconditionError("monotonicity: coefficient is not a unit");
  const Field f = u.field();
  const MultiPoly lhs = MultiPoly::monomial(f, alpha, 1) * u - MultiPoly::monomial(f, beta, 1) * v;
  const MultiPoly rhs = MultiPoly::monomial(f, gamma, 1) * w;
  if (lhs.truncated(order) != rhs.truncated(order)) throw PreconditionError("monotonicity: identity does not hold");
  bool le = true, ge = true;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] > beta[i]) le = false;
    if (alpha[i] < beta[i]) ge = false;
  }
  return le || ge;
}

std::string exponent_str(const Exponent& e) {
  std::string s = "(";
  for (std::size_t i = 0; i < e.size(); ++i) s += (i ? "," : "") + std::to_string(e[i]);
  return s + ")";
}

}  // namespace tr
