#pragma once

#include <map>
#include <string>
#include <vector>

#include "nadegen/degeneration.hpp"
#include "nadegen/rational.hpp"

namespace nadegen {

/// Intersection data of a model line bundle: d_i = (L^n . D_i) and L^n.
struct ModelPolarization {
  std::map<ComponentId, Rational> degrees;
  Rational total_degree;
};

/// Finite nonnegative mass assignment on the vertices v_i of a dual complex.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  /// Throws DomainError on a negative mass.
  explicit AtomicMeasure(std::map<ComponentId, Rational> masses);

  const std::map<ComponentId, Rational>& masses() const { return masses_; }
  Rational mass(const ComponentId& vertex) const;
  Rational total_mass() const;

  bool operator==(const AtomicMeasure&) const = default;

 private:
  std::map<ComponentId, Rational> masses_;
};

/// MA(phi_L) = sum_i m_i (L^n . D_i) delta_{v_i}. Requires degree data for
/// every component and sum_i m_i d_i = L^n.
AtomicMeasure monge_ampere(const CentralFiber& fiber, const ModelPolarization& polarization);

/// Per-vertex data of the canonical measure of a nodal curve fiber.
struct CurveVertex {
  ComponentId id;
  int genus = 0;
  int valence = 0;
};

struct CurveCanonicalMeasure {
  AtomicMeasure measure;
  std::vector<CurveVertex> vertices;
  /// b_1 of the dual graph, loops included.
  int first_betti = 0;
  /// g = sum_i g(C_i) + b_1.
  int genus = 0;
};

/// Mass 2 g(C_i) - 2 + val(v_i) at each vertex of the dual graph of a reduced,
/// genus-marked curve fiber. Loops count twice toward the valence.
CurveCanonicalMeasure curve_canonical_measure(const CentralFiber& fiber);

/// Degrees d_i = 2 g(C_i) - 2 + val(v_i) and L^n = 2g - 2 of the relative
/// canonical bundle of a reduced nodal curve fiber.
ModelPolarization curve_canonical_polarization(const CentralFiber& fiber);

/// mu_0 = sum_i (mass of D_i) delta_{v_i} for a reduced fiber.
AtomicMeasure theorem_b_limit(const CentralFiber& fiber, const std::map<ComponentId, Rational>& limit_masses);

/// A pluricanonical form Omega in H^0(m K) given by its level m and its
/// orders of vanishing along the components.
struct PluricanonicalForm {
  std::int64_t level = 1;
  std::map<ComponentId, std::int64_t> ords;
};

struct SkeletonWeights {
  std::map<ComponentId, Rational> weights;
  Rational minimum;
  /// Sk_Omega as the set of its closed faces (stratum ids, sorted).
  std::vector<StratumId> faces;
  /// Components with ord + m < 0.
  std::vector<ComponentId> warnings;
};

struct EssentialSkeleton {
  std::vector<SkeletonWeights> per_form;
  /// Union over all forms, sorted.
  std::vector<StratumId> faces;
};

/// Weights w_i = (ord_{D_i}(Omega) + m) / m_i, and for each form the union of
/// closed faces all of whose vertices attain the minimum weight.
EssentialSkeleton essential_skeleton(const DualComplex& complex, const std::vector<PluricanonicalForm>& forms);
EssentialSkeleton essential_skeleton(const CentralFiber& fiber, const std::vector<PluricanonicalForm>& forms);

}  // namespace nadegen
