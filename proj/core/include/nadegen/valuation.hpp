#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nadegen/degeneration.hpp"
#include "nadegen/rational.hpp"

namespace nadegen {

using Exponent = std::vector<std::int64_t>;

/// Support {beta : c_beta != 0} of a local expansion f = sum c_beta z^beta in
/// the coordinates z_j, j in `components`. Coefficients are units and are not
/// stored, so cancellation between terms is never modeled.
class MonomialSupport {
 public:
  MonomialSupport(ComponentSet components, std::vector<Exponent> exponents);

  /// The single monomial z^beta.
  static MonomialSupport monomial(ComponentSet components, Exponent beta);
  /// The uniformizer t = prod_j z_j^{m_j} on a face.
  static MonomialSupport uniformizer(const Face& face);

  const ComponentSet& components() const { return components_; }
  /// Sorted and duplicate-free.
  const std::vector<Exponent>& exponents() const { return exponents_; }

  bool operator==(const MonomialSupport&) const = default;

 private:
  ComponentSet components_;
  std::vector<Exponent> exponents_;
};

/// { alpha + beta : alpha in a, beta in b }: the support of a product.
MonomialSupport minkowski_sum(const MonomialSupport& a, const MonomialSupport& b);
/// The support of a sum with generic coefficients.
MonomialSupport support_union(const MonomialSupport& a, const MonomialSupport& b);

/// A rational section s/s_0 given by numerator and denominator supports.
struct RationalSection {
  MonomialSupport numerator;
  MonomialSupport denominator;
};

/// v_w(f) = min { w . beta : beta in supp f }. The point's weights are used as
/// given, so non-canonical points with zero weights are accepted.
Rational eval_quasi_monomial(const ComplexPoint& p, const MonomialSupport& f);

/// The vertex point v_{D_i} = m_i^{-1} ord_{D_i}.
ComplexPoint divisorial_valuation(const CentralFiber& fiber, const ComponentId& component);

/// log|s|_phi(x) = -v_x(s/s_0), in t-adic units.
Rational eval_model_metric_log(const ComplexPoint& p, const RationalSection& s);

/// Fubini-Study potential on the chart X_i != 0:
/// max_{j != i} (v(X_i) - v(X_j)), which is log max_{j != i} |X_j|/|X_i|.
Rational eval_na_fubini_study(const ComplexPoint& p, std::span<const RationalSection> coordinates,
                              std::size_t chart_index);

}  // namespace nadegen
