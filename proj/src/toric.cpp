#include "toricres/toric.hpp"

#include <algorithm>

#include "toricres/errors.hpp"

namespace tr {

std::vector<ToricChart> charts(const Fan& sigma) {
  const std::size_t d = sigma.ambient_dim();
  std::vector<ToricChart> out;
  for (const auto& delta : sigma.maximal()) {
    if (delta.dim() != d || !delta.is_regular())
      throw PreconditionError("chart needs a full-dimensional regular cone: " + delta.str());
    ToricChart c;
    c.id = out.size();
    c.delta = delta;
    c.edges = delta.rays();
    auto inv = unimodular_inverse(c.edges);
    if (!inv) throw InvariantViolation("edge matrix of a regular cone is not unimodular: " + delta.str());
    c.dual = transpose(*inv, d);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<std::string> chart_variable_names(std::size_t d) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < d; ++i) names.push_back("u" + std::to_string(i + 1));
  return names;
}

std::string chart_substitution_str(const ToricChart& chart, const std::vector<std::string>& names) {
  const std::size_t d = chart.edges.size();
  const auto us = chart_variable_names(d);
  std::string out;
  for (std::size_t j = 0; j < names.size(); ++j) {
    Exponent e;
    for (std::size_t i = 0; i < d; ++i) e.push_back(static_cast<int>(chart.edges[i][j].get_si()));
    out += (j ? " " : "") + names[j] + "=" + MultiPoly::monomial(Field::rationals(), e, 1).str(us);
  }
  return out;
}

MultiPoly pullback(const ToricChart& chart, const std::vector<Rat>& c, const MultiPoly& phi) {
  const std::size_t d = chart.edges.size();
  if (phi.nvars() != d || c.size() != d) throw PreconditionError("pullback: dimension mismatch");
  const Field f = phi.field();
  std::vector<MultiPoly> shifted;
  for (std::size_t i = 0; i < d; ++i)
    shifted.push_back(MultiPoly::variable(f, d, i) + MultiPoly::constant(f, d, c[i]));
  std::vector<MultiPoly> image;
  for (std::size_t j = 0; j < d; ++j) {
    MultiPoly m = MultiPoly::constant(f, d, 1);
    for (std::size_t i = 0; i < d; ++i) {
      const Int& a = chart.edges[i][j];
      if (a < 0) throw PreconditionError("pullback: chart cone leaves the orthant");
      m = m * shifted[i].pow(static_cast<unsigned>(a.get_ui()));
    }
    image.push_back(std::move(m));
  }
  std::vector<std::map<int, MultiPoly>> powers(d);
  auto power = [&](std::size_t j, int k) -> const MultiPoly& {
    auto it = powers[j].find(k);
    if (it == powers[j].end()) it = powers[j].emplace(k, image[j].pow(static_cast<unsigned>(k))).first;
    return it->second;
  };
  MultiPoly out(f, d);
  for (const auto& [e, coef] : phi.terms()) {
    MultiPoly t = MultiPoly::constant(f, d, coef);
    for (std::size_t j = 0; j < d; ++j)
      if (e[j] > 0) t = t * power(j, e[j]);
    out += t;
  }
  return out;
}

FactoredPoly pullback(const ToricChart& chart, const std::vector<Rat>& c, const FactoredPoly& phi) {
  FactoredPoly out{pullback(chart, c, phi.unit), {}};
  for (const auto& [omega, m] : phi.factors) out.factors.emplace_back(pullback(chart, c, omega), m);
  return out;
}

Cone point_face(const ToricChart& chart, const std::vector<Rat>& c) {
  IMat rays;
  for (std::size_t i = 0; i < chart.edges.size(); ++i)
    if (c.at(i) == 0) rays.push_back(chart.edges[i]);
  return Cone::from_rays(chart.delta.ambient_dim(), rays);
}

LocalFrame chart_local_frame(const UpwardSubdivisionRecord& rec, const Cone& theta) {
  const IVec w = theta.relint_point();
  if (std::any_of(w.begin(), w.end(), [](const Int& a) { return a <= 0; }))
    throw PreconditionError("outer point: " + theta.str() + " does not meet the open orthant");
  LocalFrame out;
  out.gamma = owner_of(rec, theta);
  const Cone gamma = Cone::from_rays(theta.ambient_dim(), {out.gamma});
  const Fan& psi = rec.lower.at(out.gamma).psi;
  std::vector<Cone> candidates;
  for (const auto& delta : psi.maximal())
    if (delta.contains(theta) && delta.contains(gamma)) candidates.push_back(delta);
  if (candidates.empty()) throw InvariantViolation("no chart of the lower part contains " + theta.str());
  out.delta = *std::min_element(candidates.begin(), candidates.end());
  const auto& rays = out.delta.rays();
  out.z_bar = static_cast<std::size_t>(std::find(rays.begin(), rays.end(), out.gamma) - rays.begin());
  if (out.z_bar == rays.size()) throw InvariantViolation("owner is not an edge of its chart");
  return out;
}

std::map<IVec, std::vector<std::size_t>> divisor_ledger(const std::vector<ToricChart>& cs) {
  std::map<IVec, std::vector<std::size_t>> out;
  for (const auto& c : cs)
    for (const auto& e : c.edges) out[e].push_back(c.id);
  return out;
}

}  // namespace tr
