#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nadegen/degeneration.hpp"
#include "nadegen/monge_ampere.hpp"

namespace nadegen {

using Complex = std::complex<double>;

/// Finite Laurent polynomial f = sum a_n t^n with nonzero coefficients.
class LaurentPolynomial {
 public:
  LaurentPolynomial() = default;
  /// Zero coefficients are dropped.
  explicit LaurentPolynomial(std::map<int, Complex> terms);

  const std::map<int, Complex>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// ord_0(f), the lowest exponent. Throws on the zero polynomial.
  int order() const;

  LaurentPolynomial operator*(const LaurentPolynomial& other) const;

 private:
  std::map<int, Complex> terms_;
};

struct HybridNormValue {
  double value = 0;
  /// log|f|_z / log r, i.e. ord_0(f) at z = 0 and log|f(z)|/log|z| otherwise.
  double exponent = 0;
  /// f(z) = 0: the exponent is +infinity and the value 0.
  bool vanishes = false;
};

/// |f|_z = r^{ord_0 f} at z = 0 and r^{log|f(z)|/log|z|} for z != 0, with the
/// exponent computed after factoring out the lowest-order term.
HybridNormValue hybrid_norm(const LaurentPolynomial& f, Complex z, double r);

/// A nonzero complex number held as (log|z|, arg z), so that moduli like
/// |t|^U for tiny |t| never underflow.
struct PolarCoordinate {
  double log_modulus = 0;
  double arg = 0;

  static PolarCoordinate from(Complex z);
  Complex value() const;

  bool operator==(const PolarCoordinate&) const = default;
};

using ChartSample = std::vector<PolarCoordinate>;

/// Adapted chart around a stratum: coordinates z_j (j in `components`) with
/// f_U = prod_j z_j^{m_j} a local equation of the central fiber.
struct AdaptedChart {
  ComponentSet components;
  std::vector<std::int64_t> multiplicities;
  StratumId stratum;
};

/// The node chart z_1 z_2 = t on two reduced components.
AdaptedChart node_chart(ComponentId first = "D1", ComponentId second = "D2", StratumId node = "node");

/// Central fiber whose only positive-dimensional face is the chart's simplex.
CentralFiber chart_fiber(const AdaptedChart& chart, int fiber_dimension);

/// A point of a face with floating-point weights, ordered like the chart
/// components.
struct FloatPoint {
  StratumId stratum;
  std::vector<double> weights;
};

/// Log_U(z) = (log|z_j| / log|f_U(z)|)_j.
FloatPoint log_map(const AdaptedChart& chart, std::span<const PolarCoordinate> z);
FloatPoint log_map(const AdaptedChart& chart, std::span<const Complex> z);

enum class FamilyKind { ComponentConcentrated, EdgeUniform, TwoComponent };

FamilyKind parse_family_kind(std::string_view name);
std::string_view family_kind_name(FamilyKind kind);

/// Built-in synthetic families on a two-component chart z_1^{m_1} z_2^{m_2} = t.
///
/// ComponentConcentrated: |z_a| uniform in [1/2, 3/4] with a the coordinate
/// other than `concentrated_on`, whose coordinate is solved from the chart
/// equation and tends to 0.
/// EdgeUniform: |z_1|^{m_1} = |t|^U with U uniform in (0, 1).
/// TwoComponent: ComponentConcentrated on the first component with
/// probability `mixture`, on the second otherwise.
/// Arguments are uniform in [0, 2 pi).
struct FamilySpec {
  FamilyKind kind = FamilyKind::ComponentConcentrated;
  /// Chart index (0 or 1) of the component the mass concentrates on.
  std::size_t concentrated_on = 1;
  double mixture = 0.5;
  AdaptedChart chart = node_chart();
};

struct SamplingOptions {
  /// Samples per deterministic substream.
  std::size_t chunk_size = 4096;
  /// Worker threads; 0 uses the hardware concurrency. Never affects results.
  unsigned workers = 0;
};

/// Deterministic in (family, t, n_samples, seed, chunk_size).
std::vector<ChartSample> sample_family(const FamilySpec& family, Complex t, std::size_t n_samples,
                                       std::uint64_t seed, const SamplingOptions& options = {});

struct EmpiricalAtom {
  FloatPoint point;
  double mass = 0;
};

struct EmpiricalMeasure {
  std::vector<EmpiricalAtom> atoms;
  double total_mass = 0;
};

/// (Log_U)_* of the sample measure; masses default to 1/N each.
EmpiricalMeasure pushforward(const AdaptedChart& chart, std::span<const ChartSample> samples,
                             std::optional<std::span<const double>> masses = std::nullopt);

/// Lebesgue measure on the edge of a two-component chart, in the barycentric
/// coordinate lambda_1 = m_1 w_1.
struct EdgeLebesgue {};

using ConvergenceTarget = std::variant<AtomicMeasure, EdgeLebesgue>;

struct TimeSlice {
  Complex t;
  EmpiricalMeasure measure;
};

struct ConvergenceRow {
  double t_abs = 0;
  std::size_t atoms = 0;
  double total_mass = 0;
  /// Extremes of lambda_1 = m_1 w_1 over atoms on faces containing the first
  /// chart component (NaN if none).
  double lambda1_min = 0;
  double lambda1_max = 0;
  /// Fraction of the mass within epsilon (max-coordinate distance in w) of
  /// each target vertex. Atomic targets only.
  std::map<ComponentId, double> vertex_fraction;
  /// W_1 on the complex with every edge a unit segment in barycentric
  /// coordinates, both measures normalized to probability. Atomic targets on
  /// forest-shaped 1-dimensional complexes only.
  std::optional<double> wasserstein;
  /// Kolmogorov-Smirnov distance of the lambda_1 marginal from U[0,1].
  /// Edge-Lebesgue target only.
  std::optional<double> ks_distance;
};

std::vector<ConvergenceRow> convergence_report(const DualComplex& complex, const AdaptedChart& chart,
                                               std::span<const TimeSlice> sequence, const ConvergenceTarget& target,
                                               double epsilon);

/// W_1 between an empirical measure and an atomic measure on the vertices of
/// a 1-dimensional complex whose underlying graph is a forest; nullopt
/// otherwise. Both measures are normalized to total mass 1.
std::optional<double> wasserstein_to_atomic(const DualComplex& complex, const EmpiricalMeasure& measure,
                                            const AtomicMeasure& target);

/// Weighted Kolmogorov-Smirnov distance of `values` (in [0, 1]) from U[0,1].
double ks_distance_uniform(std::span<const double> values, std::span<const double> masses);

/// Two adapted charts on the same stratum related by z'_j = u_j z_j.
struct UnitBounds {
  double lower = 0.5;
  double upper = 2.0;
};

struct CompatibilitySlice {
  double t_abs = 0;
  std::vector<ChartSample> samples;
  /// One unit tuple per sample, or a single tuple used for all samples.
  std::vector<std::vector<Complex>> units;
};

struct CompatibilityRow {
  double t_abs = 0;
  std::size_t samples = 0;
  /// delta(t) = max over samples of |Log_U - Log_U'| (max-coordinate norm).
  double delta = 0;
  /// max over samples of |Log_U - Log_U'| * log(1/|f_U|).
  double scaled = 0;
};

/// Throws DomainError if a unit leaves [lower, upper] or a transformed sample
/// leaves the unit polydisk.
std::vector<CompatibilityRow> chart_compatibility_check(const AdaptedChart& chart, const UnitBounds& bounds,
                                                        std::span<const CompatibilitySlice> slices);

/// True if u_j z_j still lies in the punctured unit disk for every j.
bool valid_after_units(std::span<const PolarCoordinate> z, std::span<const Complex> units);

}  // namespace nadegen
