#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "generators.hpp"
#include "nadegen/errors.hpp"
#include "nadegen/runner.hpp"
#include "nadegen/serialization.hpp"

using namespace nadegen;
using namespace nadegen::testing;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

struct Criterion {
  int number;
  std::string title;
  double time_limit;
  std::function<Outcome()> body;
};

// 1. Canonical masses on stable graphs.
Outcome curve_masses() {
  Outcome out;
  const auto graphs = stable_graphs();
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    const auto& g = graphs[k];
    const CurveCanonicalMeasure cm = curve_canonical_measure(curve_fiber(g));
    int sum_genus = 0;
    for (int x : g.genera) sum_genus += x;
    out.expect(cm.genus == sum_genus + cm.first_betti, g.name + ": genus bookkeeping");
    out.expect(cm.genus == g.genus, g.name + ": genus");
    out.expect(cm.measure.total_mass() == 2 * cm.genus - 2, g.name + ": total mass");
    if (k < 2) {
      out.expect(cm.measure.mass("C0") == 1 && cm.measure.mass("C1") == 1, g.name + ": masses (1,1)");
      out.expect(cm.measure.total_mass() == 2, g.name + ": total 2");
    }
  }
  out.detail = out.ok ? fmt::format("{} graphs, exact", graphs.size()) : out.detail;
  return out;
}

// 2. Monge-Ampere of the canonical degrees equals the curve measure.
Outcome ma_identification() {
  Outcome out;
  for (const auto& g : stable_graphs()) {
    const CentralFiber f = curve_fiber(g);
    std::map<ComponentId, Rational> degrees;
    const CurveCanonicalMeasure cm = curve_canonical_measure(f);
    // Degrees assembled here from the vertex data, independently of the library's polarization helper.
    for (const auto& v : cm.vertices) degrees[v.id] = 2 * v.genus - 2 + v.valence;
    const AtomicMeasure ma = monge_ampere(f, {degrees, Rational(2 * g.genus - 2)});
    out.expect(ma == cm.measure, g.name + ": measures differ");
    out.expect(monge_ampere(f, curve_canonical_polarization(f)) == cm.measure, g.name + ": helper polarization");
  }
  if (out.ok) out.detail = "all graphs, exact";
  return out;
}

// 3. Mass conservation and rejection of inconsistent degree data.
Outcome mass_conservation() {
  Outcome out;
  Rng rng(2024);
  const auto dir = std::filesystem::temp_directory_path() / "nadegen_acceptance";
  std::filesystem::create_directories(dir);
  int rejected = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const CentralFiber f = random_curve_fiber(rng, 5);
    ModelPolarization pol;
    pol.total_degree = 0;
    for (const auto& c : f.components()) {
      pol.degrees[c.id] = random_rational(rng, 0, 5);
      pol.total_degree += pol.degrees[c.id] * c.multiplicity;
    }
    out.expect(monge_ampere(f, pol).total_mass() == pol.total_degree, "total mass differs from total degree");

    nlohmann::json config{{"task", "ma-measure"}, {"fiber", to_json(f)}, {"polarization", to_json(pol)}};
    config["polarization"]["total_degree"] = rational_to_json(pol.total_degree + random_rational(rng, 1, 3));
    const auto path = dir / "inconsistent.json";
    std::ofstream(path) << config.dump();
    std::ostringstream sink, err;
    const int code = run("ma-measure", path, {}, sink, err);
    rejected += code == kExitDomain && err.str().find("degree consistency violated at") != std::string::npos;
  }
  out.expect(rejected == 1000, fmt::format("only {} of 1000 inconsistent configs exited with 3", rejected));
  if (out.ok) out.detail = "1000 pairs exact; 1000 inconsistent configs exit 3";
  return out;
}

// 4. Retraction through random blow-up towers.
Outcome retraction_suite() {
  Outcome out;
  Rng rng(4);
  for (int trial = 0; trial < 1000; ++trial) {
    CentralFiber fiber = random_snc_fiber(rng, 3);
    std::vector<PullbackMatrix> steps;
    const int depth = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int k = 0; k < depth; ++k) {
      const DualComplex c = build_dual_complex(fiber);
      const Face* center = random_blowup_center(rng, c);
      BlowUp bu = blow_up_stratum(fiber, center->stratum);
      out.expect(validate_pullback(bu.pullback).ok, "blow-up pullback fails validation");
      out.expect(bu.fiber.multiplicity(bu.exceptional) ==
                     [&] {
                       std::int64_t s = 0;
                       for (auto m : center->multiplicities) s += m;
                       return s;
                     }(),
                 "exceptional multiplicity");
      steps.push_back(bu.pullback);
      fiber = bu.fiber;
    }
    PullbackMatrix total = steps.front();
    for (std::size_t k = 1; k < steps.size(); ++k) total = compose_pullbacks(total, steps[k]);

    const DualComplex& top = steps.back().source();
    const ComplexPoint p = random_point(rng, random_face(rng, top));
    const ComplexPoint direct = retract(total, p);
    Rational sum = 0;
    for (const auto& [id, w] : direct.weights) sum += w * total.target().fiber().multiplicity(id);
    out.expect(sum == 1, "constraint not preserved");
    out.expect(direct.weights == retraction_weights(total, p), "weights differ from the matrix oracle");
    ComplexPoint chained = p;
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) chained = retract(*it, chained);
    out.expect(chained == direct, "transitivity fails");
  }

  const CentralFiber node(1, {{"D1"}, {"D2"}}, {{"node", {"D1", "D2"}, "", {}}});
  const BlowUp bu = blow_up_stratum(node, "node");
  out.expect(bu.fiber.multiplicity(bu.exceptional) == 2, "node case: m_E");
  const ComplexPoint mid = retract(bu.pullback, divisorial_valuation(bu.fiber, bu.exceptional));
  out.expect(mid.weights.at("D1") == make_rational(1, 2) && mid.weights.at("D2") == make_rational(1, 2),
             "node case: retract(v_E)");
  if (out.ok) out.detail = "1000 towers, exact";
  return out;
}

// 5. Valuation laws.
Outcome valuation_laws() {
  Outcome out;
  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const DualComplex c = build_dual_complex(random_snc_fiber(rng, 3));
    const Face& f = random_face(rng, c);
    const ComplexPoint p = random_point(rng, f);
    const MonomialSupport a = random_support(rng, f.components);
    const MonomialSupport b = random_support(rng, f.components);
    const Rational va = brute_force_valuation(p, f.components, a.exponents());
    const Rational vb = brute_force_valuation(p, f.components, b.exponents());
    out.expect(eval_quasi_monomial(p, a) == va, "evaluation differs from brute force");
    out.expect(eval_quasi_monomial(p, minkowski_sum(a, b)) == va + vb, "Minkowski additivity");
    out.expect(eval_quasi_monomial(p, support_union(a, b)) == std::min(va, vb), "union-min rule");
    out.expect(eval_quasi_monomial(p, MonomialSupport::uniformizer(f)) == 1, "v(t) != 1");
  }
  if (out.ok) out.detail = "1000 pairs, exact";
  return out;
}

// 6. Dirac concentration for the component-concentrated family.
Outcome dirac_concentration() {
  Outcome out;
  const AdaptedChart chart = node_chart();
  FamilySpec fam;
  fam.kind = FamilyKind::ComponentConcentrated;
  fam.concentrated_on = 1;
  const Complex t(1e-6, 0.0);
  const auto samples = sample_family(fam, t, 100000, 0);
  const EmpiricalMeasure mu = pushforward(chart, samples);
  double lo = 1.0, hi = 0.0;
  for (const auto& a : mu.atoms) {
    lo = std::min(lo, a.point.weights[0]);
    hi = std::max(hi, a.point.weights[0]);
  }
  out.expect(lo > 0.020 && hi < 0.051, fmt::format("w1 range [{}, {}]", lo, hi));
  const DualComplex complex = build_dual_complex(chart_fiber(chart, 1));
  const std::vector<TimeSlice> seq{{t, mu}};
  const auto rows = convergence_report(complex, chart, seq, AtomicMeasure({{"D2", 1}}), 0.1);
  out.expect(rows[0].vertex_fraction.at("D2") == 1.0, fmt::format("fraction {}", rows[0].vertex_fraction.at("D2")));
  out.expect(rows[0].wasserstein && *rows[0].wasserstein <= 0.051, "W1 above 0.051");
  if (out.ok) {
    out.detail = fmt::format("w1 in [{:.4f}, {:.4f}], fraction 1, W1 = {:.4f}", lo, hi, *rows[0].wasserstein);
  }
  return out;
}

// 7. Edge-uniform negative control.
Outcome lebesgue_control() {
  Outcome out;
  const AdaptedChart chart = node_chart();
  const DualComplex complex = build_dual_complex(chart_fiber(chart, 1));
  FamilySpec fam;
  fam.kind = FamilyKind::EdgeUniform;
  const std::size_t n = 10000;
  const double bound = 1.36 / std::sqrt(static_cast<double>(n));
  std::vector<TimeSlice> seq;
  for (double t : {1e-2, 1e-4, 1e-6}) seq.push_back({Complex(t, 0.0), pushforward(chart, sample_family(fam, t, n, 0))});
  double worst = 0.0;
  for (const auto& row : convergence_report(complex, chart, seq, EdgeLebesgue{}, 0.1)) {
    worst = std::max(worst, *row.ks_distance);
    out.expect(*row.ks_distance <= bound, fmt::format("KS {} at |t| = {}", *row.ks_distance, row.t_abs));
  }
  if (out.ok) out.detail = fmt::format("max KS {:.5f} <= {:.5f}", worst, bound);
  return out;
}

// 8. Hybrid norm multiplicativity and continuity.
Outcome hybrid_norm_laws() {
  Outcome out;
  Rng rng(8);
  std::uniform_real_distribution<double> radius(1e-6, 0.5);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  double worst = 0.0;
  for (int pair = 0; pair < 100; ++pair) {
    const LaurentPolynomial f = random_laurent(rng);
    const LaurentPolynomial g = random_laurent(rng);
    const LaurentPolynomial fg = f * g;
    for (int k = 0; k < 100; ++k) {
      const Complex z = std::polar(radius(rng), angle(rng));
      const HybridNormValue a = hybrid_norm(f, z, 0.5);
      const HybridNormValue b = hybrid_norm(g, z, 0.5);
      const HybridNormValue ab = hybrid_norm(fg, z, 0.5);
      const double rel = std::abs(ab.value - a.value * b.value) / (a.value * b.value);
      worst = std::max(worst, rel);
    }
  }
  out.expect(worst <= 1e-10, fmt::format("relative error {}", worst));
  const HybridNormValue c = hybrid_norm(LaurentPolynomial({{2, 1.0}, {3, 1.0}}), Complex(1e-8, 0.0), 0.5);
  out.expect(std::abs(c.exponent - 2.0) <= 1e-2, fmt::format("exponent {}", c.exponent));
  out.expect(std::abs(c.value - 0.25) <= 0.01 * 0.25, fmt::format("value {}", c.value));
  if (out.ok) out.detail = fmt::format("max relative error {:.2e}; exponent {:.6f}", worst, c.exponent);
  return out;
}

// 9. Chart compatibility with constant units (2, 1).
Outcome chart_compatibility() {
  Outcome out;
  const AdaptedChart chart = node_chart();
  FamilySpec fam;
  fam.kind = FamilyKind::EdgeUniform;
  const std::vector<Complex> units{2.0, 1.0};
  std::vector<CompatibilitySlice> slices;
  for (int e = 2; e <= 8; ++e) {
    const double t = std::pow(10.0, -e);
    CompatibilitySlice s{t, {}, {units}};
    for (auto& z : sample_family(fam, Complex(t, 0.0), 2000, 0)) {
      if (valid_after_units(z, units)) s.samples.push_back(std::move(z));
    }
    slices.push_back(std::move(s));
  }
  double worst = 0.0;
  for (const auto& row : chart_compatibility_check(chart, {0.5, 2.0}, slices)) {
    worst = std::max(worst, row.scaled);
    out.expect(row.samples > 0, "no valid samples");
    out.expect(row.scaled <= std::log(2.0) + 1e-9, fmt::format("scaled {} at |t| = {}", row.scaled, row.t_abs));
  }
  if (out.ok) out.detail = fmt::format("max scaled {:.9f} <= log 2", worst);
  return out;
}

// 10. Essential skeleton examples and face closure.
Outcome skeleton() {
  Outcome out;
  const DualComplex tri = build_dual_complex(simplex_fiber(2, {1, 1, 1}));
  std::vector<StratumId> every;
  for (const auto& f : tri.faces()) every.push_back(f.stratum);
  std::sort(every.begin(), every.end());
  out.expect(essential_skeleton(tri, {{1, {{"D1", 0}, {"D2", 0}, {"D3", 0}}}}).faces == every, "whole complex");

  const CentralFiber seg(1, {{"D1"}, {"D2"}}, {{"node", {"D1", "D2"}, "", {}}});
  out.expect(essential_skeleton(seg, {{1, {{"D1", 0}, {"D2", 3}}}}).faces == std::vector<StratumId>{"D1"}, "{v1}");
  const CentralFiber seg12(1, {{"D1", 1}, {"D2", 2}}, {{"node", {"D1", "D2"}, "", {}}});
  out.expect(essential_skeleton(seg12, {{2, {{"D1", 0}, {"D2", 1}}}}).faces == std::vector<StratumId>{"D2"}, "{v2}");

  Rng rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    const DualComplex c = build_dual_complex(random_snc_fiber(rng, 3));
    std::vector<PluricanonicalForm> forms;
    const int count = std::uniform_int_distribution<int>(1, 2)(rng);
    for (int k = 0; k < count; ++k) {
      PluricanonicalForm form{std::uniform_int_distribution<std::int64_t>(1, 3)(rng), {}};
      for (const auto& comp : c.fiber().components()) form.ords[comp.id] = std::uniform_int_distribution<int>(0, 2)(rng);
      forms.push_back(form);
    }
    const EssentialSkeleton sk = essential_skeleton(c, forms);
    auto closed = [&](const std::vector<StratumId>& faces) {
      for (const auto& id : faces) {
        for (const auto& sub : c.faces()) {
          if (c.is_face_of(sub.stratum, id) && !std::binary_search(faces.begin(), faces.end(), sub.stratum)) return false;
        }
      }
      return true;
    };
    for (const auto& w : sk.per_form) {
      out.expect(closed(w.faces), "Sk of a form is not face-closed");
      for (const auto& id : w.faces) {
        out.expect(std::binary_search(sk.faces.begin(), sk.faces.end(), id), "union misses a face");
      }
    }
    out.expect(closed(sk.faces), "union is not face-closed");
  }
  if (out.ok) out.detail = "3 examples exact; 200 random assignments face-closed";
  return out;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "curve canonical masses", 1.0, curve_masses},
      {2, "Monge-Ampere identification in dimension 1", 1.0, ma_identification},
      {3, "Monge-Ampere mass conservation", 5.0, mass_conservation},
      {4, "retraction through blow-up towers", 5.0, retraction_suite},
      {5, "quasi-monomial valuation laws", 5.0, valuation_laws},
      {6, "Dirac concentration", 10.0, dirac_concentration},
      {7, "Lebesgue negative control", 10.0, lebesgue_control},
      {8, "hybrid norm", 1.0, hybrid_norm_laws},
      {9, "chart compatibility", 1.0, chart_compatibility},
      {10, "essential skeleton", 1.0, skeleton},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && secs >= c.time_limit) o = {false, fmt::format("runtime {:.2f} s over {:.0f} s", secs, c.time_limit)};
    failures += !o.ok;
    std::cout << fmt::format("{} criterion {:>2}: {} ({:.3f} s) {}\n", o.ok ? "PASS" : "FAIL", c.number, c.title, secs,
                             o.detail);
  }
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
