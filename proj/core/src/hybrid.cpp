#include "nadegen/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <thread>

#include "nadegen/errors.hpp"

namespace nadegen {

namespace {

// Neumaier summation, so that N masses of 1/N add up to 1 within an ulp or two.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    carry_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace

// ---------------------------------------------------------------------------
// Laurent polynomials and the hybrid norm

LaurentPolynomial::LaurentPolynomial(std::map<int, Complex> terms) {
  for (auto& [n, a] : terms) {
    if (a != Complex(0.0, 0.0)) terms_.emplace(n, a);
  }
}

int LaurentPolynomial::order() const {
  if (terms_.empty()) throw ValidationError("ord_0 of the zero polynomial");
  return terms_.begin()->first;
}

LaurentPolynomial LaurentPolynomial::operator*(const LaurentPolynomial& other) const {
  std::map<int, Complex> out;
  for (const auto& [n, a] : terms_) {
    for (const auto& [k, b] : other.terms_) out[n + k] += a * b;
  }
  return LaurentPolynomial(std::move(out));
}

HybridNormValue hybrid_norm(const LaurentPolynomial& f, Complex z, double r) {
  if (f.is_zero()) throw ValidationError("hybrid norm of the zero polynomial");
  if (!(r > 0.0 && r < 1.0)) throw ValidationError("hybrid norm radius must lie in (0, 1)");
  if (std::abs(z) > r) throw ValidationError("hybrid norm point lies outside the closed disk of radius r");

  const int k = f.order();
  HybridNormValue out;
  if (z == Complex(0.0, 0.0)) {
    out.exponent = k;
    out.value = std::exp(out.exponent * std::log(r));
    return out;
  }

  // f(z) = z^k g(z) with g(0) = a_k != 0, so log|f(z)|/log|z| = k + log|g(z)|/log|z|.
  Complex g(0.0, 0.0);
  Complex power(1.0, 0.0);
  int degree = k;
  for (const auto& [n, a] : f.terms()) {
    for (; degree < n; ++degree) power *= z;
    g += a * power;
  }
  const double abs_g = std::abs(g);
  if (abs_g == 0.0) {
    out.vanishes = true;
    out.exponent = std::numeric_limits<double>::infinity();
    out.value = 0.0;
    return out;
  }
  out.exponent = k + std::log(abs_g) / std::log(std::abs(z));
  out.value = std::exp(out.exponent * std::log(r));
  return out;
}

// ---------------------------------------------------------------------------
// Charts and the Log map

PolarCoordinate PolarCoordinate::from(Complex z) {
  if (z == Complex(0.0, 0.0)) throw DomainError("coordinate is zero");
  return PolarCoordinate{std::log(std::abs(z)), std::arg(z)};
}

Complex PolarCoordinate::value() const { return std::polar(std::exp(log_modulus), arg); }

AdaptedChart node_chart(ComponentId first, ComponentId second, StratumId node) {
  if (!(first < second)) std::swap(first, second);
  return AdaptedChart{{std::move(first), std::move(second)}, {1, 1}, std::move(node)};
}

CentralFiber chart_fiber(const AdaptedChart& chart, int fiber_dimension) {
  std::vector<Component> components;
  for (std::size_t k = 0; k < chart.components.size(); ++k) {
    Component c;
    c.id = chart.components[k];
    c.multiplicity = chart.multiplicities[k];
    components.push_back(std::move(c));
  }
  std::vector<Stratum> strata;
  if (chart.components.size() > 1) strata.push_back(Stratum{chart.stratum, chart.components, "", {}});
  return CentralFiber(fiber_dimension, std::move(components), std::move(strata));
}

namespace {

void check_chart(const AdaptedChart& chart) {
  if (chart.components.empty() || chart.components.size() != chart.multiplicities.size()) {
    throw ValidationError("adapted chart needs one multiplicity per component");
  }
  if (std::any_of(chart.multiplicities.begin(), chart.multiplicities.end(), [](auto m) { return m < 1; })) {
    throw ValidationError("adapted chart has a nonpositive multiplicity");
  }
}

}  // namespace

FloatPoint log_map(const AdaptedChart& chart, std::span<const PolarCoordinate> z) {
  if (z.size() != chart.components.size()) throw ValidationError("sample dimension does not match the chart");
  double log_f = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double l = z[j].log_modulus;
    if (!std::isfinite(l) || !(l < 0.0)) {
      throw DomainError("sample coordinate " + chart.components[j] + " is outside the punctured unit disk");
    }
    log_f += static_cast<double>(chart.multiplicities[j]) * l;
  }
  FloatPoint p;
  p.stratum = chart.stratum;
  p.weights.reserve(z.size());
  for (const auto& c : z) p.weights.push_back(c.log_modulus / log_f);
  return p;
}

FloatPoint log_map(const AdaptedChart& chart, std::span<const Complex> z) {
  std::vector<PolarCoordinate> polar;
  polar.reserve(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double a = std::abs(z[j]);
    if (a == 0.0 || a >= 1.0) {
      throw DomainError("sample coordinate " + chart.components.at(j) + " is outside the punctured unit disk");
    }
    polar.push_back(PolarCoordinate::from(z[j]));
  }
  return log_map(chart, std::span<const PolarCoordinate>(polar));
}

// ---------------------------------------------------------------------------
// Sampling

FamilyKind parse_family_kind(std::string_view name) {
  if (name == "component-concentrated") return FamilyKind::ComponentConcentrated;
  if (name == "edge-uniform") return FamilyKind::EdgeUniform;
  if (name == "two-component") return FamilyKind::TwoComponent;
  throw ValidationError("unknown family \"" + std::string(name) + "\"");
}

std::string_view family_kind_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::ComponentConcentrated:
      return "component-concentrated";
    case FamilyKind::EdgeUniform:
      return "edge-uniform";
    case FamilyKind::TwoComponent:
      return "two-component";
  }
  return "?";
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform double in the open interval (0, 1) from the top 53 bits.
double open_unit(std::mt19937_64& engine) {
  return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
}

struct ChartEquation {
  double log_t;
  double arg_t;
  double m[2];
};

/// Fixes coordinate `free_index` to (log_modulus, arg) and solves the other
/// from z_1^{m_1} z_2^{m_2} = t.
ChartSample solve_chart(const ChartEquation& eq, std::size_t free_index, double log_modulus, double arg) {
  const std::size_t other = 1 - free_index;
  ChartSample s(2);
  s[free_index] = PolarCoordinate{log_modulus, arg};
  s[other] = PolarCoordinate{(eq.log_t - eq.m[free_index] * log_modulus) / eq.m[other],
                             (eq.arg_t - eq.m[free_index] * arg) / eq.m[other]};
  return s;
}

ChartSample concentrated_sample(const ChartEquation& eq, std::size_t on, std::mt19937_64& engine) {
  const double rho = 0.5 + 0.25 * open_unit(engine);
  const double arg = kTwoPi * open_unit(engine);
  return solve_chart(eq, 1 - on, std::log(rho), arg);
}

ChartSample draw(const FamilySpec& family, const ChartEquation& eq, std::mt19937_64& engine) {
  switch (family.kind) {
    case FamilyKind::ComponentConcentrated:
      return concentrated_sample(eq, family.concentrated_on, engine);
    case FamilyKind::EdgeUniform: {
      const double u = open_unit(engine);
      const double arg = kTwoPi * open_unit(engine);
      return solve_chart(eq, 0, u * eq.log_t / eq.m[0], arg);
    }
    case FamilyKind::TwoComponent: {
      const std::size_t on = open_unit(engine) < family.mixture ? 0 : 1;
      return concentrated_sample(eq, on, engine);
    }
  }
  throw ValidationError("unknown family");
}

}  // namespace

std::vector<ChartSample> sample_family(const FamilySpec& family, Complex t, std::size_t n_samples,
                                       std::uint64_t seed, const SamplingOptions& options) {
  check_chart(family.chart);
  if (family.chart.components.size() != 2) throw ValidationError("built-in families live on two-component charts");
  if (n_samples == 0) throw ValidationError("n_samples must be positive");
  const double abs_t = std::abs(t);
  if (!(abs_t > 0.0 && abs_t < 1.0)) throw ValidationError("t must satisfy 0 < |t| < 1");
  if (family.concentrated_on > 1) throw ValidationError("concentrated_on must be 0 or 1");
  if (!(family.mixture >= 0.0 && family.mixture <= 1.0)) throw ValidationError("mixture must lie in [0, 1]");
  if (options.chunk_size == 0) throw ValidationError("chunk_size must be positive");

  const ChartEquation eq{std::log(abs_t), std::arg(t),
                         {static_cast<double>(family.chart.multiplicities[0]),
                          static_cast<double>(family.chart.multiplicities[1])}};
  // The free coordinate has modulus at most 3/4, so the solved one is inside
  // the unit disk as long as |t| < (1/2)^{m_free}.
  if (family.kind != FamilyKind::EdgeUniform) {
    const double bound = std::max(eq.m[0], eq.m[1]) * std::log(0.5);
    if (!(eq.log_t < bound)) throw DomainError("|t| is too large for the component-concentrated construction");
  }

  std::vector<ChartSample> out(n_samples);
  const std::size_t chunks = (n_samples + options.chunk_size - 1) / options.chunk_size;
  auto run_chunk = [&](std::size_t c) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    std::mt19937_64 engine(seq);
    const std::size_t begin = c * options.chunk_size;
    const std::size_t end = std::min(n_samples, begin + options.chunk_size);
    for (std::size_t k = begin; k < end; ++k) out[k] = draw(family, eq, engine);
  };

  unsigned workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t c = w; c < chunks; c += workers) run_chunk(c);
      });
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pushforward and convergence statistics

EmpiricalMeasure pushforward(const AdaptedChart& chart, std::span<const ChartSample> samples,
                             std::optional<std::span<const double>> masses) {
  check_chart(chart);
  if (samples.empty()) throw ValidationError("pushforward of an empty sample");
  if (masses && masses->size() != samples.size()) throw ValidationError("one mass per sample is required");

  EmpiricalMeasure out;
  out.atoms.reserve(samples.size());
  const double uniform = 1.0 / static_cast<double>(samples.size());
  CompensatedSum total;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double mass = masses ? (*masses)[k] : uniform;
    if (!(mass > 0.0)) throw DomainError("sample masses must be positive");
    out.atoms.push_back(EmpiricalAtom{log_map(chart, std::span<const PolarCoordinate>(samples[k])), mass});
    total.add(mass);
  }
  out.total_mass = total.value();
  return out;
}

double ks_distance_uniform(std::span<const double> values, std::span<const double> masses) {
  if (values.size() != masses.size() || values.empty()) throw ValidationError("KS distance needs one mass per value");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  CompensatedSum sum;
  for (double m : masses) sum.add(m);
  const double total = sum.value();

  CompensatedSum cumulative;
  double d = 0.0;
  std::size_t k = 0;
  while (k < order.size()) {
    const double raw = values[order[k]];
    const double x = std::clamp(raw, 0.0, 1.0);
    const double before = cumulative.value() / total;
    for (; k < order.size() && values[order[k]] == raw; ++k) cumulative.add(masses[order[k]]);
    const double after = cumulative.value() / total;
    d = std::max({d, std::abs(before - x), std::abs(after - x)});
  }
  return d;
}

std::optional<double> wasserstein_to_atomic(const DualComplex& complex, const EmpiricalMeasure& measure,
                                            const AtomicMeasure& target) {
  const CentralFiber& fiber = complex.fiber();
  std::map<ComponentId, std::size_t> vertex;
  for (const auto& c : fiber.components()) vertex.emplace(c.id, vertex.size());
  const std::size_t nv = vertex.size();

  struct Edge {
    std::size_t a, b;
  };
  std::vector<Edge> edges;
  std::map<StratumId, std::size_t> edge_of;
  std::vector<std::size_t> parent(nv);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Face& f : complex.faces()) {
    if (f.components.size() > 2) return std::nullopt;
    if (f.components.size() < 2) continue;
    const std::size_t a = vertex.at(f.components[0]);
    const std::size_t b = vertex.at(f.components[1]);
    if (find(a) == find(b)) return std::nullopt;
    parent[find(a)] = find(b);
    edge_of.emplace(f.stratum, edges.size());
    edges.push_back(Edge{a, b});
  }

  const double mu_total = measure.total_mass;
  const double nu_total = to_double(target.total_mass());
  if (!(mu_total > 0.0) || !(nu_total > 0.0)) throw ValidationError("Wasserstein distance needs positive total masses");

  // Net mass (mu - nu) at vertices; atoms on edges keyed by distance from the
  // edge's first endpoint.
  std::vector<double> net(nv, 0.0);
  std::vector<std::vector<std::pair<double, double>>> on_edge(edges.size());
  for (const auto& [id, m] : target.masses()) {
    if (!vertex.count(id)) throw ValidationError("target vertex " + id + " is not in the complex");
    net[vertex.at(id)] -= to_double(m) / nu_total;
  }
  for (const auto& atom : measure.atoms) {
    const Face& f = complex.face(atom.point.stratum);
    const double mass = atom.mass / mu_total;
    if (f.components.size() == 1) {
      net[vertex.at(f.components[0])] += mass;
      continue;
    }
    const double la = static_cast<double>(f.multiplicities[0]) * atom.point.weights.at(0);
    const double lb = static_cast<double>(f.multiplicities[1]) * atom.point.weights.at(1);
    on_edge[edge_of.at(f.stratum)].emplace_back(lb / (la + lb), mass);
  }

  // Root every tree and accumulate subtree imbalances from the leaves up.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency(nv);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    adjacency[edges[e].a].emplace_back(edges[e].b, e);
    adjacency[edges[e].b].emplace_back(edges[e].a, e);
  }
  std::vector<int> via_edge(nv, -1);
  std::vector<bool> seen(nv, false);
  std::vector<std::size_t> order;
  std::vector<std::size_t> roots;
  for (std::size_t root = 0; root < nv; ++root) {
    if (seen[root]) continue;
    roots.push_back(root);
    std::vector<std::size_t> stack{root};
    seen[root] = true;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (const auto& [w, e] : adjacency[v]) {
        if (seen[w]) continue;
        seen[w] = true;
        via_edge[w] = static_cast<int>(e);
        stack.push_back(w);
      }
    }
  }

  double cost = 0.0;
  std::vector<double> subtree = net;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t child = *it;
    if (via_edge[child] < 0) continue;
    const auto e = static_cast<std::size_t>(via_edge[child]);
    const std::size_t up = edges[e].a == child ? edges[e].b : edges[e].a;
    auto atoms = on_edge[e];
    if (edges[e].a != child) {
      for (auto& [s, m] : atoms) s = 1.0 - s;
    }
    std::sort(atoms.begin(), atoms.end());
    double flow = subtree[child];
    double position = 0.0;
    for (const auto& [s, m] : atoms) {
      cost += std::abs(flow) * (s - position);
      flow += m;
      position = s;
    }
    cost += std::abs(flow) * (1.0 - position);
    subtree[up] += flow;
  }
  for (std::size_t root : roots) {
    if (std::abs(subtree[root]) > 1e-9) return std::numeric_limits<double>::infinity();
  }
  return cost;
}

std::vector<ConvergenceRow> convergence_report(const DualComplex& complex, const AdaptedChart& chart,
                                               std::span<const TimeSlice> sequence, const ConvergenceTarget& target,
                                               double epsilon) {
  if (sequence.empty()) throw ValidationError("convergence report needs a nonempty sequence");
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw ValidationError("epsilon must lie in (0, 1/2)");
  check_chart(chart);
  const ComponentId& first = chart.components.front();

  std::vector<ConvergenceRow> rows;
  for (const auto& slice : sequence) {
    ConvergenceRow row;
    row.t_abs = std::abs(slice.t);
    row.atoms = slice.measure.atoms.size();
    row.total_mass = slice.measure.total_mass;
    row.lambda1_min = std::numeric_limits<double>::infinity();
    row.lambda1_max = -std::numeric_limits<double>::infinity();

    std::vector<double> lambda1;
    std::vector<double> masses;
    lambda1.reserve(row.atoms);
    masses.reserve(row.atoms);
    for (const auto& atom : slice.measure.atoms) {
      if (!complex.has_face(atom.point.stratum)) {
        throw ValidationError("measure atom on stratum " + atom.point.stratum + " which is not in the complex");
      }
      const Face& f = complex.face(atom.point.stratum);
      if (atom.point.weights.size() != f.components.size()) {
        throw ValidationError("measure atom has the wrong number of weights");
      }
      double l1 = 0.0;
      auto pos = std::lower_bound(f.components.begin(), f.components.end(), first);
      if (pos != f.components.end() && *pos == first) {
        const auto k = static_cast<std::size_t>(pos - f.components.begin());
        l1 = static_cast<double>(f.multiplicities[k]) * atom.point.weights[k];
      }
      lambda1.push_back(l1);
      masses.push_back(atom.mass);
      row.lambda1_min = std::min(row.lambda1_min, l1);
      row.lambda1_max = std::max(row.lambda1_max, l1);
    }

    if (const auto* atomic = std::get_if<AtomicMeasure>(&target)) {
      for (const auto& [vid, vmass] : atomic->masses()) {
        CompensatedSum within;
        CompensatedSum total;
        for (const auto& atom : slice.measure.atoms) {
          total.add(atom.mass);
          const Face& f = complex.face(atom.point.stratum);
          auto pos = std::lower_bound(f.components.begin(), f.components.end(), vid);
          if (pos == f.components.end() || *pos != vid) continue;
          const auto k = static_cast<std::size_t>(pos - f.components.begin());
          double dist = std::abs(atom.point.weights[k] - 1.0 / static_cast<double>(f.multiplicities[k]));
          for (std::size_t j = 0; j < f.components.size(); ++j) {
            if (j != k) dist = std::max(dist, std::abs(atom.point.weights[j]));
          }
          if (dist <= epsilon) within.add(atom.mass);
        }
        row.vertex_fraction.emplace(vid, within.value() / total.value());
      }
      row.wasserstein = wasserstein_to_atomic(complex, slice.measure, *atomic);
    } else {
      if (chart.components.size() != 2) throw ValidationError("edge-Lebesgue target needs a two-component chart");
      row.ks_distance = ks_distance_uniform(lambda1, masses);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Chart compatibility

bool valid_after_units(std::span<const PolarCoordinate> z, std::span<const Complex> units) {
  if (z.size() != units.size()) return false;
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double a = std::abs(units[j]);
    if (!(a > 0.0)) return false;
    if (!(z[j].log_modulus + std::log(a) < 0.0)) return false;
  }
  return true;
}

std::vector<CompatibilityRow> chart_compatibility_check(const AdaptedChart& chart, const UnitBounds& bounds,
                                                        std::span<const CompatibilitySlice> slices) {
  check_chart(chart);
  if (!(bounds.lower > 0.0 && bounds.lower <= bounds.upper)) throw ValidationError("unit bounds need 0 < c <= C");
  std::vector<CompatibilityRow> rows;
  for (const auto& slice : slices) {
    if (slice.units.size() != 1 && slice.units.size() != slice.samples.size()) {
      throw ValidationError("units must be given once or once per sample");
    }
    CompatibilityRow row;
    row.t_abs = slice.t_abs;
    row.samples = slice.samples.size();
    for (std::size_t k = 0; k < slice.samples.size(); ++k) {
      const auto& z = slice.samples[k];
      const auto& u = slice.units.size() == 1 ? slice.units.front() : slice.units[k];
      if (u.size() != z.size() || z.size() != chart.components.size()) {
        throw ValidationError("unit tuple dimension does not match the chart");
      }
      ChartSample moved(z.size());
      double log_inv_f = 0.0;
      for (std::size_t j = 0; j < z.size(); ++j) {
        const double a = std::abs(u[j]);
        if (a < bounds.lower || a > bounds.upper) {
          throw DomainError("unit bounds violated: |u| = " + std::to_string(a) + " outside [" +
                            std::to_string(bounds.lower) + ", " + std::to_string(bounds.upper) + "]");
        }
        moved[j] = PolarCoordinate{z[j].log_modulus + std::log(a), z[j].arg + std::arg(u[j])};
        log_inv_f -= static_cast<double>(chart.multiplicities[j]) * z[j].log_modulus;
      }
      const FloatPoint p = log_map(chart, std::span<const PolarCoordinate>(z));
      const FloatPoint q = log_map(chart, std::span<const PolarCoordinate>(moved));
      double dev = 0.0;
      for (std::size_t j = 0; j < p.weights.size(); ++j) dev = std::max(dev, std::abs(p.weights[j] - q.weights[j]));
      row.delta = std::max(row.delta, dev);
      row.scaled = std::max(row.scaled, dev * log_inv_f);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace nadegen
