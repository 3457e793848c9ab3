#include "nadegen/valuation.hpp"

#include <algorithm>
#include <optional>

#include "nadegen/errors.hpp"

namespace nadegen {

MonomialSupport::MonomialSupport(ComponentSet components, std::vector<Exponent> exponents)
    : components_(std::move(components)), exponents_(std::move(exponents)) {
  if (!std::is_sorted(components_.begin(), components_.end()) ||
      std::adjacent_find(components_.begin(), components_.end()) != components_.end()) {
    throw ValidationError("monomial support index set must be sorted and duplicate-free");
  }
  if (exponents_.empty()) throw ValidationError("empty monomial support");
  for (const auto& beta : exponents_) {
    if (beta.size() != components_.size()) {
      throw ValidationError("exponent vector length does not match the index set");
    }
    if (std::any_of(beta.begin(), beta.end(), [](std::int64_t e) { return e < 0; })) {
      throw ValidationError("negative entry in exponent vector");
    }
  }
  std::sort(exponents_.begin(), exponents_.end());
  exponents_.erase(std::unique(exponents_.begin(), exponents_.end()), exponents_.end());
}

MonomialSupport MonomialSupport::monomial(ComponentSet components, Exponent beta) {
  return MonomialSupport(std::move(components), {std::move(beta)});
}

MonomialSupport MonomialSupport::uniformizer(const Face& face) {
  return monomial(face.components, face.multiplicities);
}

MonomialSupport minkowski_sum(const MonomialSupport& a, const MonomialSupport& b) {
  if (a.components() != b.components()) throw ValidationError("index-set mismatch in Minkowski sum");
  std::vector<Exponent> out;
  out.reserve(a.exponents().size() * b.exponents().size());
  for (const auto& alpha : a.exponents()) {
    for (const auto& beta : b.exponents()) {
      Exponent sum(alpha.size());
      for (std::size_t k = 0; k < alpha.size(); ++k) sum[k] = alpha[k] + beta[k];
      out.push_back(std::move(sum));
    }
  }
  return MonomialSupport(a.components(), std::move(out));
}

MonomialSupport support_union(const MonomialSupport& a, const MonomialSupport& b) {
  if (a.components() != b.components()) throw ValidationError("index-set mismatch in support union");
  std::vector<Exponent> out = a.exponents();
  out.insert(out.end(), b.exponents().begin(), b.exponents().end());
  return MonomialSupport(a.components(), std::move(out));
}

Rational eval_quasi_monomial(const ComplexPoint& p, const MonomialSupport& f) {
  const auto& ids = f.components();
  if (p.weights.size() != ids.size()) {
    throw ValidationError("index-set mismatch: support and point on stratum " + p.stratum);
  }
  std::vector<const Rational*> w;
  w.reserve(ids.size());
  std::size_t k = 0;
  for (const auto& [id, weight] : p.weights) {
    if (id != ids[k++]) throw ValidationError("index-set mismatch: support and point on stratum " + p.stratum);
    w.push_back(&weight);
  }

  std::optional<Rational> best;
  Rational value;
  for (const auto& beta : f.exponents()) {
    value = 0;
    for (std::size_t j = 0; j < beta.size(); ++j) {
      if (beta[j] != 0) value += beta[j] * *w[j];
    }
    if (!best || value < *best) best = value;
  }
  return *best;
}

ComplexPoint divisorial_valuation(const CentralFiber& fiber, const ComponentId& component) {
  const Component& c = fiber.component(component);
  ComplexPoint p;
  p.stratum = fiber.vertex_stratum(component).id;
  p.weights.emplace(component, make_rational(1, c.multiplicity));
  return p;
}

Rational eval_model_metric_log(const ComplexPoint& p, const RationalSection& s) {
  return -(eval_quasi_monomial(p, s.numerator) - eval_quasi_monomial(p, s.denominator));
}

Rational eval_na_fubini_study(const ComplexPoint& p, std::span<const RationalSection> coordinates,
                              std::size_t chart_index) {
  if (coordinates.size() < 2) throw ValidationError("Fubini-Study potential needs at least two coordinates");
  if (chart_index >= coordinates.size()) throw ValidationError("chart index out of range");

  auto valuation = [&](const RationalSection& x) -> Rational {
    return eval_quasi_monomial(p, x.numerator) - eval_quasi_monomial(p, x.denominator);
  };
  const Rational vi = valuation(coordinates[chart_index]);
  std::optional<Rational> best;
  for (std::size_t j = 0; j < coordinates.size(); ++j) {
    if (j == chart_index) continue;
    Rational candidate = vi - valuation(coordinates[j]);
    if (!best || candidate > *best) best = std::move(candidate);
  }
  return *best;
}

}  // namespace nadegen
