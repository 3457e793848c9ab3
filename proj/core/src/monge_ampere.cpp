#include "nadegen/monge_ampere.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "nadegen/errors.hpp"

namespace nadegen {

AtomicMeasure::AtomicMeasure(std::map<ComponentId, Rational> masses) : masses_(std::move(masses)) {
  for (const auto& [id, m] : masses_) {
    if (m < 0) throw DomainError("negative mass " + to_string(m) + " at vertex " + id);
  }
}

Rational AtomicMeasure::mass(const ComponentId& vertex) const {
  auto it = masses_.find(vertex);
  return it == masses_.end() ? Rational(0) : it->second;
}

Rational AtomicMeasure::total_mass() const {
  Rational total = 0;
  for (const auto& [id, m] : masses_) total += m;
  return total;
}

AtomicMeasure monge_ampere(const CentralFiber& fiber, const ModelPolarization& polarization) {
  for (const auto& [id, d] : polarization.degrees) {
    if (!fiber.has_component(id)) throw ValidationError("degree given for unknown component " + id);
  }
  std::map<ComponentId, Rational> masses;
  Rational total = 0;
  for (const Component& c : fiber.components()) {
    auto it = polarization.degrees.find(c.id);
    if (it == polarization.degrees.end()) throw ValidationError("missing degree for component " + c.id);
    Rational mass = c.multiplicity * it->second;
    total += mass;
    masses.emplace(c.id, std::move(mass));
  }
  if (total != polarization.total_degree) {
    throw DomainError("degree consistency violated at sum_i m_i d_i = " + to_string(total) +
                      " != L^n = " + to_string(polarization.total_degree));
  }
  return AtomicMeasure(std::move(masses));
}

namespace {

struct CurveGraph {
  std::vector<CurveVertex> vertices;
  int first_betti = 0;
  int genus = 0;
};

CurveGraph analyse_curve(const CentralFiber& fiber) {
  if (fiber.fiber_dimension() != 1) {
    throw DomainError("curve canonical measure needs fiber_dimension 1, got " + std::to_string(fiber.fiber_dimension()));
  }
  std::map<ComponentId, std::size_t> index;
  CurveGraph graph;
  for (const Component& c : fiber.components()) {
    if (c.multiplicity != 1) throw DomainError("component " + c.id + " is not reduced");
    if (!c.genus) throw DomainError("component " + c.id + " has no genus marking");
    index.emplace(c.id, graph.vertices.size());
    graph.vertices.push_back(CurveVertex{c.id, *c.genus, 2 * c.loops});
  }

  std::vector<std::size_t> parent(graph.vertices.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  int edges = 0;
  for (const Component& c : fiber.components()) edges += c.loops;
  for (const Stratum& s : fiber.strata()) {
    if (s.components.size() != 2) continue;
    const std::size_t a = index.at(s.components[0]);
    const std::size_t b = index.at(s.components[1]);
    ++graph.vertices[a].valence;
    ++graph.vertices[b].valence;
    ++edges;
    parent[find(a)] = find(b);
  }
  int pieces = 0;
  for (std::size_t k = 0; k < parent.size(); ++k) pieces += find(k) == k;

  graph.first_betti = edges - static_cast<int>(graph.vertices.size()) + pieces;
  graph.genus = graph.first_betti;
  for (const auto& v : graph.vertices) graph.genus += v.genus;
  return graph;
}

}  // namespace

CurveCanonicalMeasure curve_canonical_measure(const CentralFiber& fiber) {
  CurveGraph graph = analyse_curve(fiber);
  std::map<ComponentId, Rational> masses;
  for (const auto& v : graph.vertices) {
    const int mass = 2 * v.genus - 2 + v.valence;
    if (mass < 0) {
      throw DomainError("negative mass " + std::to_string(mass) + " at vertex " + v.id +
                        " (fiber is not a stable configuration)");
    }
    masses.emplace(v.id, Rational(mass));
  }
  return CurveCanonicalMeasure{AtomicMeasure(std::move(masses)), std::move(graph.vertices), graph.first_betti,
                               graph.genus};
}

ModelPolarization curve_canonical_polarization(const CentralFiber& fiber) {
  CurveGraph graph = analyse_curve(fiber);
  ModelPolarization pol;
  for (const auto& v : graph.vertices) pol.degrees.emplace(v.id, Rational(2 * v.genus - 2 + v.valence));
  pol.total_degree = 2 * graph.genus - 2;
  return pol;
}

AtomicMeasure theorem_b_limit(const CentralFiber& fiber, const std::map<ComponentId, Rational>& limit_masses) {
  if (!fiber.is_reduced()) throw DomainError("Dirac limit requires a reduced central fiber");
  for (const auto& [id, m] : limit_masses) {
    if (!fiber.has_component(id)) throw ValidationError("limit mass given for unknown component " + id);
  }
  std::map<ComponentId, Rational> masses;
  for (const Component& c : fiber.components()) {
    auto it = limit_masses.find(c.id);
    if (it == limit_masses.end()) throw ValidationError("missing limit mass for component " + c.id);
    masses.emplace(c.id, it->second);
  }
  return AtomicMeasure(std::move(masses));
}

EssentialSkeleton essential_skeleton(const CentralFiber& fiber, const std::vector<PluricanonicalForm>& forms) {
  return essential_skeleton(build_dual_complex(fiber), forms);
}

EssentialSkeleton essential_skeleton(const DualComplex& complex, const std::vector<PluricanonicalForm>& forms) {
  if (forms.empty()) throw ValidationError("essential skeleton needs at least one form");
  const CentralFiber& fiber = complex.fiber();

  EssentialSkeleton result;
  std::set<StratumId> all_faces;
  for (const auto& form : forms) {
    if (form.level < 1) throw ValidationError("form level must be positive");
    for (const auto& [id, ord] : form.ords) {
      if (!fiber.has_component(id)) throw ValidationError("ord given for unknown component " + id);
    }
    SkeletonWeights sk;
    for (const Component& c : fiber.components()) {
      auto it = form.ords.find(c.id);
      if (it == form.ords.end()) throw ValidationError("missing ord for component " + c.id);
      if (it->second + form.level < 0) sk.warnings.push_back(c.id);
      sk.weights.emplace(c.id, make_rational(it->second + form.level, c.multiplicity));
    }
    sk.minimum = std::min_element(sk.weights.begin(), sk.weights.end(),
                                  [](const auto& a, const auto& b) { return a.second < b.second; })
                     ->second;
    for (const Face& f : complex.faces()) {
      const bool minimal = std::all_of(f.components.begin(), f.components.end(),
                                       [&](const ComponentId& id) { return sk.weights.at(id) == sk.minimum; });
      if (minimal) sk.faces.push_back(f.stratum);
    }
    std::sort(sk.faces.begin(), sk.faces.end());
    all_faces.insert(sk.faces.begin(), sk.faces.end());
    result.per_form.push_back(std::move(sk));
  }
  result.faces.assign(all_faces.begin(), all_faces.end());
  return result;
}

}  // namespace nadegen
