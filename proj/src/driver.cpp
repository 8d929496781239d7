#include "toricres/driver.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

#include "toricres/errors.hpp"

namespace tr {

namespace {

bool poly_less(const MultiPoly& a, const MultiPoly& b) { return a.terms() < b.terms(); }

std::string compact(const std::string& s) {
  std::string out;
  for (char ch : s)
    if (ch != ' ') out += ch;
  return out;
}

std::string inv2_str(const InvData& d) { return d.inv2 ? std::to_string(*d.inv2) : "-"; }

std::string values_str(const std::vector<Rat>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + to_string(values[i]);
  return out;
}

FactoredPoly without_unit(const FactoredPoly& phi) {
  FactoredPoly out{MultiPoly::constant(phi.unit.field(), phi.unit.nvars(), 1), phi.factors};
  return out;
}

// Merges equal factors and sorts them.
void canonicalize(FactoredPoly& phi) {
  std::sort(phi.factors.begin(), phi.factors.end(),
            [](const auto& a, const auto& b) { return poly_less(a.first, b.first); });
  std::vector<std::pair<MultiPoly, unsigned>> merged;
  for (auto& [f, m] : phi.factors) {
    if (!merged.empty() && merged.back().first == f)
      merged.back().second += m;
    else
      merged.emplace_back(std::move(f), m);
  }
  phi.factors = std::move(merged);
}

struct Cursor {
  const std::string& line;
  std::size_t pos = 0;
  int lineno;

  void skip_space() {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  }
  bool done() {
    skip_space();
    return pos >= line.size();
  }
  int column() const { return static_cast<int>(pos) + 1; }
  int next_column() {
    skip_space();
    return column();
  }
  std::string word() {
    skip_space();
    const std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
    return line.substr(start, pos - start);
  }
};

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

}  // namespace

MultiPoly Problem::core() const { return without_unit(phi).expand(); }

Field parse_field(const std::string& text) {
  if (text == "Q") return Field::rationals();
  if (text.rfind("Fp:", 0) == 0) {
    Int p;
    if (text.size() == 3 || p.set_str(text.substr(3), 10) != 0 || p < 2 || !p.fits_ulong_p())
      throw ParseError("bad field '" + text + "'", 1, 4);
    return Field::prime(p.get_ui());
  }
  throw ParseError("bad field '" + text + "', expected Q or Fp:<p>", 1, 1);
}

std::vector<Rat> parse_values(const std::string& text) {
  std::vector<Rat> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const std::string tok = text.substr(start, end - start);
    Rat v;
    if (tok.empty() || v.set_str(tok, 10) != 0)
      throw ParseError("bad value '" + tok + "'", 1, static_cast<int>(start) + 1);
    v.canonicalize();
    if (v == 0) throw PreconditionError("sample values must be nonzero");
    out.push_back(v);
    start = end + 1;
  }
  return out;
}

Problem parse_problem(const std::string& text, const ProblemOverrides& overrides) {
  Problem p;
  std::optional<Field> field;
  std::optional<std::string> zname;
  bool have_vars = false;
  struct PolyLine {
    std::string text;
    int line, column;
    unsigned mult;  // 0 marks the unit
  };
  std::vector<PolyLine> polys;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string line = raw.substr(0, raw.find('#'));
    Cursor cur{line, 0, lineno};
    if (cur.done()) continue;
    const int key_col = cur.column();
    const std::string key = cur.word();
    if (key == "field") {
      if (field) throw ParseError("duplicate field line", lineno, key_col);
      const std::string kind = cur.word();
      if (kind == "Q") {
        field = Field::rationals();
      } else if (kind == "Fp") {
        const int col = cur.next_column();
        const std::string arg = cur.word();
        Int prime;
        if (arg.rfind("p=", 0) != 0 || prime.set_str(arg.substr(2), 10) != 0 || prime < 2 || !prime.fits_ulong_p())
          throw ParseError("expected p=<prime>", lineno, col);
        field = Field::prime(prime.get_ui());
      } else {
        throw ParseError("expected Q or Fp", lineno, key_col + 6);
      }
    } else if (key == "vars") {
      if (have_vars) throw ParseError("duplicate vars line", lineno, key_col);
      have_vars = true;
      while (!cur.done()) {
        const int col = cur.next_column();
        const std::string v = cur.word();
        if (!is_identifier(v)) throw ParseError("bad variable name '" + v + "'", lineno, col);
        if (std::find(p.vars.begin(), p.vars.end(), v) != p.vars.end())
          throw ParseError("duplicate variable '" + v + "'", lineno, col);
        p.vars.push_back(v);
      }
      if (p.vars.empty()) throw ParseError("vars needs at least one name", lineno, cur.column());
    } else if (key == "z") {
      if (zname) throw ParseError("duplicate z line", lineno, key_col);
      const int col = cur.next_column();
      zname = cur.word();
      if (zname->empty() || !cur.done()) throw ParseError("expected one variable name", lineno, col);
    } else if (key == "unit") {
      cur.skip_space();
      polys.push_back({line.substr(cur.pos), lineno, cur.column(), 0});
    } else if (key == "factor") {
      const int col = cur.next_column();
      const std::string m = cur.word();
      unsigned mult = 0;
      try {
        std::size_t used = 0;
        mult = static_cast<unsigned>(std::stoul(m, &used));
        if (used != m.size()) throw std::invalid_argument(m);
      } catch (const std::exception&) {
        throw ParseError("expected a positive multiplicity", lineno, col);
      }
      if (mult == 0) throw ParseError("expected a positive multiplicity", lineno, col);
      const int colon = cur.next_column();
      if (cur.word() != ":") throw ParseError("expected ':'", lineno, colon);
      cur.skip_space();
      polys.push_back({line.substr(cur.pos), lineno, cur.column(), mult});
    } else {
      throw ParseError("unknown keyword '" + key + "'", lineno, key_col);
    }
  }
  if (!have_vars) throw ParseError("missing vars line", lineno, 1);
  if (overrides.field) field = overrides.field;
  if (overrides.z) zname = overrides.z;
  p.field = field.value_or(Field::rationals());
  if (!zname) throw ParseError("missing z line", lineno, 1);
  auto zit = std::find(p.vars.begin(), p.vars.end(), *zname);
  if (zit == p.vars.end()) throw PreconditionError("z variable '" + *zname + "' is not declared");
  p.z = static_cast<std::size_t>(zit - p.vars.begin());
  if (overrides.order) p.order = *overrides.order;
  if (p.order < 2) throw PreconditionError("truncation order must be at least 2");
  if (overrides.values) p.values = *overrides.values;

  const std::size_t n = p.vars.size();
  p.phi.unit = MultiPoly::constant(p.field, n, 1);
  bool have_unit = false;
  for (const auto& pl : polys) {
    MultiPoly f = parse_poly(pl.text, p.vars, p.field, pl.line, pl.column);
    if (pl.mult == 0) {
      if (have_unit) throw ParseError("duplicate unit line", pl.line, 1);
      have_unit = true;
      if (f.constant_term() == 0) throw PreconditionError("unit on line " + std::to_string(pl.line) + " vanishes at the origin");
      p.phi.unit = f;
    } else {
      if (f.constant_term() != 0)
        throw PreconditionError("factor on line " + std::to_string(pl.line) + " is a unit");
      p.phi.factors.emplace_back(std::move(f), pl.mult);
    }
  }
  if (p.phi.factors.empty()) throw PreconditionError("problem has no factor lines");
  return p;
}

std::string problem_text(const Problem& p) {
  std::ostringstream os;
  if (p.field.is_rational())
    os << "field Q\n";
  else
    os << "field Fp p=" << p.field.p << "\n";
  os << "vars";
  for (const auto& v : p.vars) os << " " << v;
  os << "\nz " << p.vars[p.z] << "\n";
  if (p.phi.unit != MultiPoly::constant(p.field, p.vars.size(), 1)) os << "unit " << p.phi.unit.str(p.vars) << "\n";
  for (const auto& [f, m] : p.phi.factors) os << "factor " << m << " : " << f.str(p.vars) << "\n";
  return os.str();
}

std::string CheckReport::str(const std::vector<std::string>& names) const {
  std::ostringstream os;
  os << "weierstrass=" << (weierstrass.is_type ? "yes" : "no");
  os << " simple=" << (simple.simple ? "yes" : "no");
  if (!inv) {
    os << " removable=- inv=-\n";
  } else {
    os << " removable=";
    if (removable.empty()) os << "none";
    for (std::size_t i = 0; i < removable.size(); ++i) os << (i ? "," : "") << compact(removable[i].chi.str(names));
    os << " inv=" << inv->inv;
    if (inv->inv == 0) os << " inv2=" << inv2_str(*inv);
    os << "\n";
    for (const auto& w : inv->warnings) os << "WARNING " << w << "\n";
  }
  if (!simple.simple) os << "NOTE " << simple.reason << "\n";
  return os.str();
}

CheckReport check_problem(const Problem& p) {
  CheckReport r;
  const MultiPoly phi = p.core();
  r.weierstrass = weierstrass_data(p.z, phi);
  r.simple = is_z_simple(p.z, phi);
  if (!r.weierstrass.is_type) return r;
  r.inv = inv_inv2(p.z, without_unit(p.phi), p.order);
  const FactoredPoly main = main_factor(p.z, p.phi);
  if (!main.factors.empty()) r.removable = removable_faces(p.z, without_unit(main).expand());
  return r;
}

std::string newton_report(const Problem& p) {
  const PseudoPolytope np = newton_polyhedron(p.core());
  std::ostringstream os;
  os << "NEWTON dim=" << np.ambient_dim() << " vertices=" << np.vertices().size() << "\n";
  for (std::size_t i = 0; i < np.vertices().size(); ++i)
    os << "VERTEX " << i << ": " << to_string(np.vertices()[i], " ") << "\n";
  const auto wd = weierstrass_data(p.z, p.core());
  if (wd.top) os << "TOP " << exponent_str(*wd.top) << "\n";
  return os.str();
}

UpwardSubdivisionRecord problem_usd(const Problem& p) {
  const std::size_t n = p.vars.size();
  const Cone H = Cone::from_rays(n, {unit_ivec(n, p.z)});
  return upward_subdivision(H, Fan::face_fan(Cone::orthant(n)), newton_polyhedron(p.core()));
}

std::string usd_report(const Problem& p, const UpwardSubdivisionRecord& rec, const std::vector<ToricChart>& cs) {
  std::ostringstream os;
  for (const auto& t : rec.trace)
    os << "LEVEL depth=" << t.depth << " H=" << to_string(t.H.rays()[0]) << " height=" << to_string(t.height)
       << " m=" << t.m << " mbar=" << t.m_bar << "\n";
  os << fan_text(rec.sigma_star);
  const IMat rays = rec.sigma_star.rays();
  for (const auto& c : cs) {
    os << "CHART " << c.id << ": rays=";
    for (std::size_t i = 0; i < c.edges.size(); ++i)
      os << (i ? "," : "") << (std::lower_bound(rays.begin(), rays.end(), c.edges[i]) - rays.begin());
    os << " subst " << chart_substitution_str(c, p.vars) << "\n";
  }
  return os.str();
}

std::string export_fan(const std::string& report) {
  std::istringstream in(report);
  std::string line, block;
  bool inside = false;
  while (std::getline(in, line)) {
    if (line.rfind("FAN ", 0) == 0) {
      if (inside) throw ParseError("second FAN block", 1, 1);
      inside = true;
    }
    if (inside && (line.rfind("FAN ", 0) == 0 || line.rfind("RAY ", 0) == 0 || line.rfind("CONE:", 0) == 0))
      block += line + "\n";
  }
  if (!inside) throw ParseError("no FAN block found", 1, 1);
  return fan_text(parse_fan_text(block));
}

FactoredPoly local_factors(const FactoredPoly& pulled, int order) {
  const Field f = pulled.unit.field();
  const std::size_t n = pulled.unit.nvars();
  FactoredPoly out{pulled.unit.truncated(order), {}};
  for (const auto& [omega, m] : pulled.factors) {
    const Exponent content = omega.monomial_content();
    for (std::size_t i = 0; i < n; ++i)
      if (content[i] > 0) out.factors.emplace_back(MultiPoly::variable(f, n, i), static_cast<unsigned>(content[i]) * m);
    MultiPoly rest = omega.divide_monomial(content);
    if (rest.constant_term() != 0)
      out.unit = MultiPoly::mul_trunc(out.unit, rest.truncated(order).pow(m).truncated(order), order);
    else
      out.factors.emplace_back(std::move(rest), m);
  }
  canonicalize(out);
  return out;
}

StepReport subdivision_step(const Problem& p) {
  const MultiPoly phi = p.core();
  const std::size_t n = p.vars.size();
  if (!weierstrass_data(p.z, phi).is_type) throw PreconditionError("hypothesis: not of Weierstrass type in z");
  const SimpleWitness simple = is_z_simple(p.z, phi);
  if (!simple.simple) throw PreconditionError("hypothesis: Newton polyhedron is not z-simple: " + simple.reason);
  StepReport r;
  r.before = inv_inv2(p.z, without_unit(p.phi), p.order);
  if (r.before.inv > 0) {
    const FactoredPoly main = main_factor(p.z, p.phi);
    auto rem = removable_faces(p.z, without_unit(main).expand());
    if (!rem.empty())
      throw PreconditionError("hypothesis: main factor has the removable face z + " + rem.front().chi.str(p.vars));
  } else {
    if (*r.before.inv2 < 2) throw PreconditionError("hypothesis: inv = 0 needs inv2 >= 2");
    const bool z_divides = std::all_of(phi.terms().begin(), phi.terms().end(),
                                       [&](const auto& t) { return t.first[p.z] > 0; });
    if (!z_divides) throw PreconditionError("hypothesis: inv = 0 needs z to divide the polynomial");
  }

  r.rec = problem_usd(p);
  r.charts = charts(r.rec.sigma_star);
  const auto names = chart_variable_names(n);
  for (const auto& theta : r.rec.sigma_star.cones()) {
    const IVec w = theta.relint_point();
    if (std::any_of(w.begin(), w.end(), [](const Int& a) { return a <= 0; })) {
      ++r.outer;
      continue;
    }
    const LocalFrame frame = chart_local_frame(r.rec, theta);
    auto cit = std::find_if(r.charts.begin(), r.charts.end(), [&](const ToricChart& c) { return c.delta == frame.delta; });
    if (cit == r.charts.end()) throw InvariantViolation("frame cone is not a chart: " + frame.delta.str());
    const ToricChart& chart = *cit;
    std::vector<std::size_t> free_edges;
    for (std::size_t i = 0; i < n; ++i)
      if (!theta.contains(chart.edges[i])) free_edges.push_back(i);

    // Odometer over the sample values on the edges off theta.
    std::vector<std::size_t> digit(free_edges.size(), 0);
    while (true) {
      Branch b;
      b.theta = theta;
      b.gamma = frame.gamma;
      b.chart = chart.id;
      b.values.assign(n, Rat(0));
      for (std::size_t k = 0; k < free_edges.size(); ++k) b.values[free_edges[k]] = p.values[digit[k]];
      const FactoredPoly pulled = pullback(chart, b.values, p.phi);
      b.local = p;
      b.local.vars = names;
      b.local.z = frame.z_bar;
      b.local.phi = local_factors(pulled, p.order);
      const MultiPoly local_core = b.local.core();
      b.weierstrass = weierstrass_data(frame.z_bar, local_core).is_type;
      if (!b.weierstrass) {
        b.verdict = "not-weierstrass";
      } else {
        b.inv = inv_inv2(frame.z_bar, without_unit(b.local.phi), p.order);
        if (r.before.inv > 0)
          b.verdict = b.inv.inv < r.before.inv ? "ok" : "inv-not-decreased";
        else if (b.inv.inv != 0)
          b.verdict = "inv-not-zero";
        else
          b.verdict = *b.inv.inv2 < *r.before.inv2 ? "ok" : "inv2-not-decreased";
      }
      if (b.verdict != "ok") ++r.violations;
      r.branches.push_back(std::move(b));

      std::size_t k = 0;
      while (k < digit.size() && ++digit[k] == p.values.size()) digit[k++] = 0;
      if (k == digit.size()) break;
    }
  }
  return r;
}

std::string StepReport::str(const Problem& p) const {
  std::ostringstream os;
  os << "STEP field=" << p.field.str() << " z=" << p.vars[p.z] << " order=" << p.order << " inv=" << before.inv
     << " inv2=" << inv2_str(before) << "\n";
  os << "NOTE fiber points are sampled: chart values off the orbit face range over {" << values_str(p.values)
     << "} only\n";
  const IMat rays = rec.sigma_star.rays();
  auto idx = [&](const IVec& r) { return std::lower_bound(rays.begin(), rays.end(), r) - rays.begin(); };
  for (const auto& c : charts) {
    os << "CHART " << c.id << ": rays=";
    for (std::size_t i = 0; i < c.edges.size(); ++i) os << (i ? "," : "") << idx(c.edges[i]);
    os << " subst " << chart_substitution_str(c, p.vars) << "\n";
  }
  std::size_t ok = 0;
  int max_inv = 0;
  for (const auto& b : branches) {
    os << "BRANCH theta=";
    for (std::size_t i = 0; i < b.theta.rays().size(); ++i) os << (i ? "," : "") << idx(b.theta.rays()[i]);
    os << " gamma=" << idx(b.gamma) << " chart=" << b.chart << " values=" << values_str(b.values)
       << " zbar=" << b.local.vars[b.local.z] << " weierstrass=" << (b.weierstrass ? "yes" : "no");
    if (b.weierstrass) os << " inv=" << b.inv.inv << " inv2=" << inv2_str(b.inv);
    os << " verdict=" << b.verdict << "\n";
    if (b.weierstrass)
      for (const auto& w : b.inv.warnings) os << "WARNING " << w << "\n";
    if (b.verdict == "ok") ++ok;
    max_inv = std::max(max_inv, b.inv.inv);
  }
  os << "SUMMARY branches=" << branches.size() << " ok=" << ok << " violations=" << violations << " outer=" << outer
     << " max_inv=" << max_inv << "\n";
  return os.str();
}

namespace {

std::string factors_str(const Problem& p) {
  std::string out;
  for (std::size_t i = 0; i < p.phi.factors.size(); ++i) {
    const auto& [f, m] = p.phi.factors[i];
    out += (i ? ";" : "") + std::to_string(m) + ":" + compact(f.str(p.vars));
  }
  return out;
}

Problem substitute_all(const Problem& p, std::size_t var, const MultiPoly& q, bool truncate) {
  Problem out = p;
  out.phi.unit = truncate ? p.phi.unit.substitute_trunc(var, q, p.order) : p.phi.unit.substitute(var, q);
  out.phi.factors.clear();
  for (const auto& [f, m] : p.phi.factors)
    out.phi.factors.emplace_back(truncate ? f.substitute_trunc(var, q, p.order) : f.substitute(var, q), m);
  return out;
}

bool z_divides(const Problem& p) {
  return std::any_of(p.phi.factors.begin(), p.phi.factors.end(), [&](const auto& fm) {
    return fm.first == MultiPoly::variable(p.field, p.vars.size(), p.z);
  });
}

// One state of the game: returns the successor problems, or none when the state is terminal.
std::vector<std::pair<std::string, Problem>> advance(GameState& s, std::size_t& violations) {
  const Problem& p = s.problem;
  const MultiPoly core = p.core();
  s.weierstrass = weierstrass_data(p.z, core).is_type;
  if (!s.weierstrass) {
    const Tilt t = generic_tilt(p.z, core);
    Problem q = p;
    std::string d;
    for (std::size_t x = 0; x < p.vars.size(); ++x) {
      if (t.alpha[x] == 0) continue;
      const MultiPoly shift = MultiPoly::variable(p.field, p.vars.size(), x) +
                              MultiPoly::variable(p.field, p.vars.size(), p.z).scaled(t.alpha[x]);
      q = substitute_all(q, x, shift, false);
      d += (d.empty() ? "" : ",") + p.vars[x] + "+=" + to_string(t.alpha[x]) + "*" + p.vars[p.z];
    }
    s.action = "tilt";
    s.detail = d;
    return {{"tilt", q}};
  }
  s.inv = inv_inv2(p.z, without_unit(p.phi), p.order);
  if (s.inv.inv == 0 && *s.inv.inv2 <= 1) {
    s.action = "win";
    return {};
  }
  if (s.inv.inv > 0) {
    const FactoredPoly main = main_factor(p.z, p.phi);
    const MultiPoly psi = without_unit(main).expand();
    if (!removable_faces(p.z, psi).empty()) {
      const Elimination e = eliminate_removable(p.z, psi, p.order);
      const MultiPoly shift = MultiPoly::variable(p.field, p.vars.size(), p.z) - e.chi0;
      s.action = "eliminate";
      s.detail = "chi0=" + compact(e.chi0.str(p.vars));
      Problem q = substitute_all(p, p.z, shift, true);
      for (auto& [f, m] : q.phi.factors)
        if (f.constant_term() != 0) throw InvariantViolation("elimination produced a unit factor");
      return {{"eliminate", q}};
    }
  } else if (!z_divides(p)) {
    // Move the first smooth factor onto z = 0.
    for (const auto& [omega, m] : p.phi.factors) {
      if (classify_factor(p.z, omega) != FactorKind::smooth) continue;
      const MultiPoly g = implicit_root(p.z, omega, p.order);
      const MultiPoly shift = MultiPoly::variable(p.field, p.vars.size(), p.z) + g;
      Problem q = substitute_all(p, p.z, shift, true);
      for (const auto& [f, fm] : q.phi.factors)
        if (f.constant_term() != 0) throw InvariantViolation("recentering produced a unit factor");
      q.phi = local_factors(q.phi, p.order);
      s.action = "recenter";
      s.detail = "root=" + compact(g.str(p.vars));
      return {{"recenter", q}};
    }
    throw InvariantViolation("inv2 >= 2 without smooth factors");
  }
  const SimpleWitness sw = is_z_simple(p.z, core);
  if (!sw.simple) {
    s.action = "stop";
    s.detail = "not z-simple and the auxiliary resolution is out of scope: " + sw.reason;
    return {};
  }
  const StepReport step = subdivision_step(p);
  violations += step.violations;
  s.action = "subdivide";
  s.detail = "branches=" + std::to_string(step.branches.size());
  std::vector<std::pair<std::string, Problem>> out;
  const IMat rays = step.rec.sigma_star.rays();
  for (const auto& b : step.branches) {
    std::string via = "chart=" + std::to_string(b.chart) + ",theta=";
    for (std::size_t i = 0; i < b.theta.rays().size(); ++i)
      via += (i ? "/" : "") + std::to_string(std::lower_bound(rays.begin(), rays.end(), b.theta.rays()[i]) - rays.begin());
    via += ",values=" + values_str(b.values);
    out.emplace_back(via, b.local);
  }
  return out;
}

std::pair<int, int> severity(const Problem& p) {
  const MultiPoly core = p.core();
  if (!weierstrass_data(p.z, core).is_type) return {1 << 20, 0};
  const InvData d = inv_inv2(p.z, without_unit(p.phi), p.order);
  return {d.inv, d.inv2 ? static_cast<int>(*d.inv2) : 0};
}

}  // namespace

GameTrace play_game(const Problem& p, Adversary adversary, std::size_t max_steps) {
  GameTrace t;
  t.adversary = adversary;
  std::deque<std::size_t> queue;
  GameState root;
  root.problem = p;
  t.states.push_back(root);
  queue.push_back(0);
  while (!queue.empty()) {
    const std::size_t id = queue.front();
    queue.pop_front();
    t.max_depth = std::max(t.max_depth, t.states[id].depth);
    if (t.states[id].depth >= max_steps) {
      GameState& s = t.states[id];
      const MultiPoly core = s.problem.core();
      s.weierstrass = weierstrass_data(s.problem.z, core).is_type;
      if (s.weierstrass) s.inv = inv_inv2(s.problem.z, without_unit(s.problem.phi), s.problem.order);
      if (s.weierstrass && s.inv.inv == 0 && *s.inv.inv2 <= 1) {
        s.action = "win";
        continue;
      }
      s.action = "stop";
      s.detail = "max-steps reached";
      if (t.stop_reason.empty()) t.stop_reason = "max-steps reached at state " + std::to_string(id);
      continue;
    }
    auto successors = advance(t.states[id], t.violations);
    if (t.states[id].action == "stop" && t.stop_reason.empty())
      t.stop_reason = "state " + std::to_string(id) + ": " + t.states[id].detail;
    if (successors.empty()) continue;
    std::vector<std::size_t> chosen;
    if (adversary == Adversary::worst && successors.size() > 1) {
      std::size_t best = 0;
      auto best_sev = severity(successors[0].second);
      for (std::size_t i = 1; i < successors.size(); ++i) {
        auto sev = severity(successors[i].second);
        if (sev > best_sev) {
          best_sev = sev;
          best = i;
        }
      }
      chosen.push_back(best);
    } else {
      for (std::size_t i = 0; i < successors.size(); ++i) chosen.push_back(i);
    }
    for (std::size_t i : chosen) {
      GameState s;
      s.id = t.states.size();
      s.depth = t.states[id].depth + 1;
      s.parent = id;
      s.via = successors[i].first;
      s.problem = std::move(successors[i].second);
      t.states.push_back(std::move(s));
      queue.push_back(t.states.back().id);
    }
  }
  t.won = t.stop_reason.empty() && t.violations == 0;
  return t;
}

std::string GameTrace::str(const Problem& p, std::size_t max_steps) const {
  std::ostringstream os;
  os << "GAME adversary=" << (adversary == Adversary::worst ? "worst" : "exhaustive") << " max_steps=" << max_steps
     << " order=" << p.order << " field=" << p.field.str() << "\n";
  os << "NOTE player B is restricted to fiber points with chart values in {" << values_str(p.values)
     << "}; closed points of an algebraically closed field are not enumerated\n";
  for (const auto& s : states) {
    os << "STATE " << s.id << ": depth=" << s.depth << " parent=" << (s.parent ? std::to_string(*s.parent) : "-")
       << " via=" << (s.via.empty() ? "-" : s.via) << " z=" << s.problem.vars[s.problem.z]
       << " weierstrass=" << (s.weierstrass ? "yes" : "no");
    if (s.weierstrass) os << " inv=" << s.inv.inv << " inv2=" << inv2_str(s.inv);
    os << " action=" << s.action;
    if (!s.detail.empty()) os << " " << s.detail;
    os << " factors=" << factors_str(s.problem) << "\n";
  }
  os << "RESULT " << (won ? "win" : "stop") << " states=" << states.size() << " depth=" << max_depth
     << " violations=" << violations;
  if (!stop_reason.empty()) os << " reason=" << stop_reason;
  os << "\n";
  return os.str();
}

}  // namespace tr
