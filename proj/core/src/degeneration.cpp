#include "nadegen/degeneration.hpp"

#include <algorithm>
#include <set>

#include "nadegen/errors.hpp"

namespace nadegen {

namespace {

std::string describe(const ComponentSet& set) {
  std::string out = "{";
  for (std::size_t k = 0; k < set.size(); ++k) {
    if (k) out += ",";
    out += set[k];
  }
  return out + "}";
}

/// All nonempty proper subsets of `set`, each sorted.
std::vector<ComponentSet> proper_subsets(const ComponentSet& set) {
  std::vector<ComponentSet> out;
  const std::size_t n = set.size();
  const std::size_t full = (std::size_t{1} << n) - 1;
  for (std::size_t mask = 1; mask < full; ++mask) {
    ComponentSet sub;
    for (std::size_t k = 0; k < n; ++k) {
      if (mask & (std::size_t{1} << k)) sub.push_back(set[k]);
    }
    out.push_back(std::move(sub));
  }
  return out;
}

}  // namespace

ComponentSet make_component_set(std::vector<ComponentId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

CentralFiber::CentralFiber(int fiber_dimension, std::vector<Component> components,
                           std::vector<Stratum> strata)
    : fiber_dimension_(fiber_dimension), components_(std::move(components)), strata_(std::move(strata)) {
  if (fiber_dimension_ < 0) throw ValidationError("fiber_dimension must be nonnegative");
  if (components_.empty()) throw ValidationError("central fiber has no components");

  for (std::size_t k = 0; k < components_.size(); ++k) {
    const Component& c = components_[k];
    if (c.id.empty()) throw ValidationError("component with empty id");
    if (!component_index_.emplace(c.id, k).second) {
      throw ValidationError("duplicate component id " + c.id);
    }
    if (c.multiplicity < 1) {
      throw ValidationError("component " + c.id + " has nonpositive multiplicity");
    }
    if (c.genus && *c.genus < 0) throw ValidationError("component " + c.id + " has negative genus");
    if (c.loops < 0) throw ValidationError("component " + c.id + " has negative loop count");
    if (c.loops > 0 && fiber_dimension_ != 1) {
      throw ValidationError("component " + c.id + " has loops but the fiber is not a curve");
    }
  }

  std::set<std::pair<ComponentSet, std::string>> seen_labels;
  for (std::size_t k = 0; k < strata_.size(); ++k) {
    Stratum& s = strata_[k];
    if (s.id.empty()) throw ValidationError("stratum with empty id");
    const std::size_t declared = s.components.size();
    s.components = make_component_set(std::move(s.components));
    if (s.components.empty()) throw ValidationError("stratum " + s.id + " has an empty component set");
    if (s.components.size() != declared) {
      throw ValidationError("stratum " + s.id + " lists a component twice");
    }
    for (const auto& c : s.components) {
      if (!component_index_.count(c)) {
        throw ValidationError("stratum " + s.id + " refers to unknown component " + c);
      }
    }
    if (!stratum_index_.emplace(s.id, k).second) {
      throw ValidationError("duplicate stratum id " + s.id);
    }
    if (!seen_labels.emplace(s.components, s.branch_label).second) {
      throw ValidationError("stratum " + s.id + " repeats component set " + describe(s.components) +
                            " with branch label \"" + s.branch_label + "\"");
    }
    if (s.components.size() == 1) {
      // D_i is irreducible, hence connected.
      if (!vertex_index_.emplace(s.components.front(), k).second) {
        throw ValidationError("component " + s.components.front() + " has more than one singleton stratum");
      }
    }
  }

  for (const Component& c : components_) {
    if (vertex_index_.count(c.id)) continue;
    StratumId id = stratum_index_.count(c.id) ? "v(" + c.id + ")" : c.id;
    if (stratum_index_.count(id)) {
      throw ValidationError("cannot name the singleton stratum of component " + c.id);
    }
    strata_.push_back(Stratum{id, {c.id}, "", {}});
    stratum_index_.emplace(id, strata_.size() - 1);
    vertex_index_.emplace(c.id, strata_.size() - 1);
  }
}

bool CentralFiber::has_component(const ComponentId& id) const { return component_index_.count(id) > 0; }

const Component& CentralFiber::component(const ComponentId& id) const {
  auto it = component_index_.find(id);
  if (it == component_index_.end()) throw ValidationError("unknown component " + id);
  return components_[it->second];
}

std::int64_t CentralFiber::multiplicity(const ComponentId& id) const { return component(id).multiplicity; }

bool CentralFiber::has_stratum(const StratumId& id) const { return stratum_index_.count(id) > 0; }

const Stratum& CentralFiber::stratum(const StratumId& id) const {
  auto it = stratum_index_.find(id);
  if (it == stratum_index_.end()) throw ValidationError("unknown stratum " + id);
  return strata_[it->second];
}

const Stratum& CentralFiber::vertex_stratum(const ComponentId& id) const {
  auto it = vertex_index_.find(id);
  if (it == vertex_index_.end()) throw ValidationError("unknown component " + id);
  return strata_[it->second];
}

bool CentralFiber::is_reduced() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](const Component& c) { return c.multiplicity == 1; });
}

std::int64_t Face::multiplicity(const ComponentId& id) const {
  auto it = std::lower_bound(components.begin(), components.end(), id);
  if (it == components.end() || *it != id) {
    throw ValidationError("component " + id + " is not a vertex of face " + stratum);
  }
  return multiplicities[static_cast<std::size_t>(it - components.begin())];
}

bool DualComplex::has_face(const StratumId& id) const { return index_.count(id) > 0; }

const Face& DualComplex::face(const StratumId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw ValidationError("unknown stratum " + id);
  return faces_[it->second];
}

std::vector<StratumId> DualComplex::vertices() const {
  std::vector<StratumId> out;
  for (const Component& c : fiber_.components()) out.push_back(fiber_.vertex_stratum(c.id).id);
  return out;
}

std::vector<StratumId> DualComplex::maximal_faces() const {
  std::vector<bool> covered(faces_.size(), false);
  for (std::size_t k = 0; k < faces_.size(); ++k) {
    for (const auto& [subset, idx] : subfaces_[k]) {
      if (idx != k) covered[idx] = true;
    }
  }
  std::vector<StratumId> out;
  for (std::size_t k = 0; k < faces_.size(); ++k) {
    if (!covered[k]) out.push_back(faces_[k].stratum);
  }
  return out;
}

const StratumId& DualComplex::subface(const StratumId& host, const ComponentSet& subset) const {
  auto it = index_.find(host);
  if (it == index_.end()) throw ValidationError("unknown stratum " + host);
  const auto& table = subfaces_[it->second];
  auto sub = table.find(subset);
  if (sub == table.end()) {
    throw DomainError(describe(subset) + " is not a face of stratum " + host);
  }
  return faces_[sub->second].stratum;
}

bool DualComplex::is_face_of(const StratumId& a, const StratumId& b) const {
  const Face& fa = face(a);
  auto it = index_.find(b);
  if (it == index_.end()) throw ValidationError("unknown stratum " + b);
  auto sub = subfaces_[it->second].find(fa.components);
  return sub != subfaces_[it->second].end() && faces_[sub->second].stratum == a;
}

std::vector<StratumId> DualComplex::face_vertices(const StratumId& id) const {
  std::vector<StratumId> out;
  for (const auto& c : face(id).components) out.push_back(subface(id, {c}));
  return out;
}

DualComplex build_dual_complex(const CentralFiber& fiber) {
  DualComplex complex;
  complex.fiber_ = fiber;
  const auto& strata = fiber.strata();

  std::map<ComponentSet, std::vector<std::size_t>> by_set;
  for (std::size_t k = 0; k < strata.size(); ++k) {
    const Stratum& s = strata[k];
    if (s.components.size() > static_cast<std::size_t>(fiber.fiber_dimension()) + 1) {
      throw DomainError("codimension bound violated at stratum " + s.id + ": |J| = " +
                        std::to_string(s.components.size()) + " exceeds n+1 = " +
                        std::to_string(fiber.fiber_dimension() + 1));
    }
    Face f;
    f.stratum = s.id;
    f.components = s.components;
    f.branch_label = s.branch_label;
    for (const auto& c : s.components) f.multiplicities.push_back(fiber.multiplicity(c));
    complex.faces_.push_back(std::move(f));
    complex.index_.emplace(s.id, k);
    by_set[s.components].push_back(k);
  }

  complex.subfaces_.resize(strata.size());
  for (std::size_t k = 0; k < strata.size(); ++k) {
    const Stratum& s = strata[k];
    for (const auto& parent : s.contained_in) {
      if (!fiber.has_stratum(parent)) {
        throw ValidationError("stratum " + s.id + " is declared inside unknown stratum " + parent);
      }
      const auto& pset = fiber.stratum(parent).components;
      if (pset.size() >= s.components.size() ||
          !std::includes(s.components.begin(), s.components.end(), pset.begin(), pset.end())) {
        throw DomainError("stratum " + s.id + " cannot lie inside stratum " + parent +
                          ": component sets are not nested");
      }
    }

    auto& table = complex.subfaces_[k];
    table.emplace(s.components, k);
    for (const auto& subset : proper_subsets(s.components)) {
      auto found = by_set.find(subset);
      if (found == by_set.end()) {
        throw DomainError("face closure violated at stratum " + s.id + ": no stratum on " + describe(subset));
      }
      const auto& candidates = found->second;
      std::size_t chosen = candidates.front();
      if (candidates.size() > 1) {
        std::vector<std::size_t> declared;
        for (auto idx : candidates) {
          if (std::find(s.contained_in.begin(), s.contained_in.end(), strata[idx].id) != s.contained_in.end()) {
            declared.push_back(idx);
          }
        }
        if (declared.empty()) {
          for (auto idx : candidates) {
            if (strata[idx].branch_label == s.branch_label) declared.push_back(idx);
          }
        }
        if (declared.size() != 1) {
          throw DomainError("ambiguous face at stratum " + s.id + ": cannot tell which stratum on " +
                            describe(subset) + " contains it (declare contained_in)");
        }
        chosen = declared.front();
      }
      table.emplace(subset, chosen);
    }
  }

  // Containment must be transitive: if Y'' lies in Y' and Y' lies in Y on the
  // same component subset, Y'' must lie in that Y as well.
  for (std::size_t k = 0; k < strata.size(); ++k) {
    for (const auto& [subset, mid] : complex.subfaces_[k]) {
      for (const auto& [subsub, low] : complex.subfaces_[mid]) {
        if (complex.subfaces_[k].at(subsub) != low) {
          throw DomainError("inconsistent containment at stratum " + strata[k].id + ": it lies in " +
                            strata[mid].id + " which lies in " + strata[low].id + ", but on " +
                            describe(subsub) + " it was resolved to " +
                            strata[complex.subfaces_[k].at(subsub)].id);
        }
      }
    }
  }
  return complex;
}

void validate_point(const DualComplex& complex, const ComplexPoint& p) {
  const Face& f = complex.face(p.stratum);
  if (p.weights.size() != f.components.size()) {
    throw DomainError("point on stratum " + p.stratum + " has the wrong index set");
  }
  Rational total = 0;
  std::size_t k = 0;
  for (const auto& [id, w] : p.weights) {
    if (id != f.components[k]) {
      throw DomainError("point on stratum " + p.stratum + " has the wrong index set");
    }
    if (w < 0) throw DomainError("point on stratum " + p.stratum + " has negative weight at " + id);
    total += f.multiplicities[k] * w;
    ++k;
  }
  if (total != 1) {
    throw DomainError("point on stratum " + p.stratum + " violates sum m_j w_j = 1 (got " + to_string(total) + ")");
  }
}

ComplexPoint canonicalize_point(const DualComplex& complex, const ComplexPoint& p) {
  validate_point(complex, p);
  ComplexPoint out;
  ComponentSet support;
  for (const auto& [id, w] : p.weights) {
    if (w > 0) {
      out.weights.emplace(id, w);
      support.push_back(id);
    }
  }
  out.stratum = complex.subface(p.stratum, support);
  return out;
}

}  // namespace nadegen
