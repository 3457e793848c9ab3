#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nadegen/rational.hpp"

namespace nadegen {

using ComponentId = std::string;
using StratumId = std::string;

/// Sorted, duplicate-free list of component ids.
using ComponentSet = std::vector<ComponentId>;

/// An irreducible component D_i of the central fiber, with multiplicity m_i.
struct Component {
  ComponentId id;
  std::int64_t multiplicity = 1;
  /// Geometric genus of D_i; only meaningful for fibers of dimension 1.
  std::optional<int> genus;
  std::string name;
  /// Self-nodes of a component in a nodal curve fiber. Such a node is not an
  /// snc stratum, but it is a loop of the dual graph and counts twice toward
  /// the valence of the vertex. Dimension 1 only.
  int loops = 0;

  bool operator==(const Component&) const = default;
};

/// A connected component Y of an intersection D_J.
///
/// When several strata share the same component set, the face relation with
/// strata of larger component sets cannot be inferred from the sets alone.
/// A stratum Y' lies in the stratum Y on a subset J of its components if Y is
/// the only stratum on J, or Y' lists Y in `contained_in`, or (failing both)
/// Y is the unique stratum on J carrying the same branch label.
struct Stratum {
  StratumId id;
  ComponentSet components;
  std::string branch_label;
  std::vector<StratumId> contained_in;

  bool operator==(const Stratum&) const = default;
};

/// Combinatorial record of an snc central fiber X_0 = sum m_i D_i.
///
/// The constructor checks the record-level invariants (unique ids, positive
/// multiplicities, known component references, at most one singleton stratum
/// per component) and adds the singleton stratum {i} for each component that
/// does not declare one. Face closure and the codimension bound are checked by
/// build_dual_complex.
class CentralFiber {
 public:
  CentralFiber() = default;
  CentralFiber(int fiber_dimension, std::vector<Component> components,
               std::vector<Stratum> strata);

  int fiber_dimension() const { return fiber_dimension_; }
  const std::vector<Component>& components() const { return components_; }
  const std::vector<Stratum>& strata() const { return strata_; }

  bool has_component(const ComponentId& id) const;
  const Component& component(const ComponentId& id) const;
  std::int64_t multiplicity(const ComponentId& id) const;

  bool has_stratum(const StratumId& id) const;
  const Stratum& stratum(const StratumId& id) const;
  /// The singleton stratum {i}.
  const Stratum& vertex_stratum(const ComponentId& id) const;

  /// True when every multiplicity is 1.
  bool is_reduced() const;

  bool operator==(const CentralFiber&) const = default;

 private:
  int fiber_dimension_ = 0;
  std::vector<Component> components_;
  std::vector<Stratum> strata_;
  std::map<ComponentId, std::size_t> component_index_;
  std::map<StratumId, std::size_t> stratum_index_;
  std::map<ComponentId, std::size_t> vertex_index_;
};

/// Simplex sigma_Y = { w >= 0 : sum_j m_j w_j = 1 } attached to a stratum.
struct Face {
  StratumId stratum;
  ComponentSet components;
  std::vector<std::int64_t> multiplicities;
  std::string branch_label;

  std::size_t dimension() const { return components.size() - 1; }
  std::int64_t multiplicity(const ComponentId& id) const;
};

/// Dual complex of a central fiber: one face per stratum, glued by reverse
/// inclusion of strata.
class DualComplex {
 public:
  const CentralFiber& fiber() const { return fiber_; }
  const std::vector<Face>& faces() const { return faces_; }

  bool has_face(const StratumId& id) const;
  const Face& face(const StratumId& id) const;

  /// Ids of the singleton strata, in component order.
  std::vector<StratumId> vertices() const;
  /// Faces that are not a proper face of any other face.
  std::vector<StratumId> maximal_faces() const;

  /// The face of `host` spanned by `subset` (a nonempty subset of its
  /// components). Returns the id of the unique stratum on `subset` that
  /// contains the stratum of `host`.
  const StratumId& subface(const StratumId& host, const ComponentSet& subset) const;

  /// sigma_a is a face of sigma_b, i.e. stratum b is contained in stratum a.
  bool is_face_of(const StratumId& a, const StratumId& b) const;

  /// Vertex ids (singleton strata) of a face.
  std::vector<StratumId> face_vertices(const StratumId& id) const;

 private:
  friend DualComplex build_dual_complex(const CentralFiber& fiber);

  CentralFiber fiber_;
  std::vector<Face> faces_;
  std::map<StratumId, std::size_t> index_;
  std::vector<std::map<ComponentSet, std::size_t>> subfaces_;
};

/// A point of the dual complex: a stratum together with weights w_j for the
/// components of that stratum. The same data describes the quasi-monomial
/// valuation v_w.
struct ComplexPoint {
  StratumId stratum;
  std::map<ComponentId, Rational> weights;

  bool operator==(const ComplexPoint&) const = default;
};

/// Builds the dual complex. Throws DomainError naming the offending stratum
/// if face closure, the codimension bound |J| <= n+1, or the containment data
/// between strata is violated.
DualComplex build_dual_complex(const CentralFiber& fiber);

/// Throws unless `p` sits on a face of `complex` with nonnegative weights over
/// exactly that face's components and sum_j m_j w_j = 1.
void validate_point(const DualComplex& complex, const ComplexPoint& p);

/// Drops zero weights and moves the point to its minimal carrying face.
ComplexPoint canonicalize_point(const DualComplex& complex, const ComplexPoint& p);

/// Sorts and deduplicates.
ComponentSet make_component_set(std::vector<ComponentId> ids);

}  // namespace nadegen
