#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "nadegen/degeneration.hpp"
#include "nadegen/hybrid.hpp"
#include "nadegen/model_maps.hpp"
#include "nadegen/monge_ampere.hpp"
#include "nadegen/valuation.hpp"

namespace nadegen::testing {

using Rng = std::mt19937_64;

/// Graph description of a nodal curve fiber.
struct CurveGraph {
  std::string name;
  std::vector<int> genera;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> loops;
  /// Expected arithmetic genus.
  int genus = 0;
};

/// Reduced curve fiber with components "C0", "C1", ...; parallel edges get
/// distinct branch labels.
CentralFiber curve_fiber(const CurveGraph& graph);

/// Dumbbell, theta, and five more stable graphs of genus 2 and 3.
std::vector<CurveGraph> stable_graphs();

/// Fiber whose dual complex is the full simplex on components "D1".."D<k>".
CentralFiber simplex_fiber(int fiber_dimension, const std::vector<std::int64_t>& multiplicities);

/// Two triangles glued along an edge (dimension 2), or a simplex.
CentralFiber random_snc_fiber(Rng& rng, int max_dimension = 3);

/// Random curve fiber with 1..5 components and random multiplicities.
CentralFiber random_curve_fiber(Rng& rng, int max_components = 5);

/// Random rational in [lo, hi] with denominator up to `max_den`.
Rational random_rational(Rng& rng, std::int64_t lo, std::int64_t hi, std::int64_t max_den = 12);

/// Random valid point in the relative interior of `face`.
ComplexPoint random_point(Rng& rng, const Face& face);

/// A face chosen uniformly among all faces of the complex.
const Face& random_face(Rng& rng, const DualComplex& complex);

/// A face chosen uniformly among maximal faces of dimension >= 1, if any.
const Face* random_blowup_center(Rng& rng, const DualComplex& complex);

MonomialSupport random_support(Rng& rng, const ComponentSet& components, int max_terms = 4, int max_exp = 5);

LaurentPolynomial random_laurent(Rng& rng, int max_terms = 4, int min_exp = -3, int max_exp = 5);

/// Brute-force min of w . beta, the oracle for quasi-monomial evaluation.
Rational brute_force_valuation(const ComplexPoint& p, const ComponentSet& components,
                               const std::vector<Exponent>& exponents);

/// Independent retraction oracle: w_i = sum_j a_ij w'_j with zero weights
/// dropped, returned as weights only.
std::map<ComponentId, Rational> retraction_weights(const PullbackMatrix& m, const ComplexPoint& p);

}  // namespace nadegen::testing
