#include "nadegen/runner.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <fmt/format.h>
#include <unistd.h>

#include "nadegen/errors.hpp"
#include "nadegen/hybrid.hpp"
#include "nadegen/model_maps.hpp"
#include "nadegen/monge_ampere.hpp"
#include "nadegen/schema.hpp"
#include "nadegen/serialization.hpp"

namespace nadegen {

using nlohmann::json;

namespace {

constexpr std::string_view kTaskNames[] = {"dual-complex", "ma-measure", "curve-limit", "skeleton",
                                           "retraction",   "blowup",     "hybrid-sim",  "chart-check"};

std::string real(double x) { return fmt::format("{:.17g}", x); }

const json& require(const json& config, const char* block, Task task) {
  if (!config.contains(block)) {
    throw ValidationError(fmt::format("task {} requires the \"{}\" block", task_name(task), block));
  }
  return config.at(block);
}

template <class T>
T value_or(const json& config, const char* key, T fallback) {
  return config.contains(key) ? config.at(key).get<T>() : fallback;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::shared_ptr<const DualComplex> complex_of(const CentralFiber& fiber) {
  return std::make_shared<const DualComplex>(build_dual_complex(fiber));
}

AdaptedChart chart_from(const json& config) {
  if (!config.contains("chart")) return node_chart();
  const json& c = config.at("chart");
  AdaptedChart chart;
  chart.components = c.at("components").get<std::vector<std::string>>();
  chart.multiplicities = c.at("multiplicities").get<std::vector<std::int64_t>>();
  chart.stratum = c.at("stratum").get<std::string>();
  if (chart.components[0] == chart.components[1]) throw ValidationError("chart components must differ");
  if (chart.components[1] < chart.components[0]) {
    std::swap(chart.components[0], chart.components[1]);
    std::swap(chart.multiplicities[0], chart.multiplicities[1]);
  }
  return chart;
}

std::vector<double> t_list(const json& config, std::vector<double> fallback) {
  return config.contains("t") ? config.at("t").get<std::vector<double>>() : fallback;
}

SamplingOptions sampling_options(const json& config) {
  SamplingOptions options;
  options.chunk_size = value_or<std::size_t>(config, "chunk_size", options.chunk_size);
  options.workers = value_or<unsigned>(config, "workers", options.workers);
  return options;
}

// ---------------------------------------------------------------------------

RunOutput run_dual_complex(const json& config) {
  const DualComplex complex = build_dual_complex(fiber_from_json(require(config, "fiber", Task::DualComplex)));
  return {dump(to_json(complex)), "json"};
}

RunOutput run_ma_measure(const json& config) {
  const CentralFiber fiber = fiber_from_json(require(config, "fiber", Task::MaMeasure));
  build_dual_complex(fiber);
  const ModelPolarization pol = polarization_from_json(require(config, "polarization", Task::MaMeasure));
  const AtomicMeasure measure = monge_ampere(fiber, pol);
  return {dump(json{{"measure", to_json(measure)}, {"total_degree", rational_to_json(pol.total_degree)}}), "json"};
}

RunOutput run_curve_limit(const json& config) {
  const CentralFiber fiber = fiber_from_json(require(config, "fiber", Task::CurveLimit));
  const CurveCanonicalMeasure canonical = curve_canonical_measure(fiber);
  const AtomicMeasure ma = monge_ampere(fiber, curve_canonical_polarization(fiber));

  std::ostringstream csv;
  csv << "# curve canonical measure: mass(v) = 2 g(C_v) - 2 + val(v), loops count twice toward val(v)\n";
  csv << "# ma_mass = m_v (K . C_v) from the Monge-Ampere formula with canonical degrees\n";
  csv << "# genus=" << canonical.genus << " first_betti=" << canonical.first_betti << "\n";
  csv << "vertex,genus,valence,mass,ma_mass\n";
  for (const auto& v : canonical.vertices) {
    csv << v.id << "," << v.genus << "," << v.valence << "," << to_string(canonical.measure.mass(v.id)) << ","
        << to_string(ma.mass(v.id)) << "\n";
  }
  csv << "total,,," << to_string(canonical.measure.total_mass()) << "," << to_string(ma.total_mass()) << "\n";
  return {csv.str(), "csv"};
}

RunOutput run_skeleton(const json& config) {
  const DualComplex complex = build_dual_complex(fiber_from_json(require(config, "fiber", Task::Skeleton)));
  std::vector<PluricanonicalForm> forms;
  for (const auto& f : require(config, "forms", Task::Skeleton)) forms.push_back(form_from_json(f));
  return {dump(to_json(essential_skeleton(complex, forms))), "json"};
}

void ensure_valid(const PullbackMatrix& m) {
  const PullbackReport report = validate_pullback(m);
  if (!report.ok) throw DomainError(report.errors.front());
}

RunOutput run_retraction(const json& config) {
  const CentralFiber base = fiber_from_json(require(config, "fiber", Task::Retraction));
  const bool has_chain = config.contains("blowups");
  const bool has_matrix = config.contains("pullback");
  if (has_chain == has_matrix) {
    throw ValidationError("task retraction requires exactly one of the \"blowups\" and \"pullback\" blocks");
  }

  std::optional<PullbackMatrix> map;
  if (has_chain) {
    map = PullbackMatrix::identity(complex_of(base));
    CentralFiber current = base;
    for (const auto& step : config.at("blowups")) {
      const std::string stratum = step.is_string() ? step.get<std::string>() : step.at("stratum").get<std::string>();
      std::optional<ComponentId> exc;
      if (step.is_object() && step.contains("exceptional_id")) exc = step.at("exceptional_id").get<std::string>();
      BlowUp bu = blow_up_stratum(current, stratum, exc);
      map = compose_pullbacks(*map, bu.pullback);
      current = std::move(bu.fiber);
    }
  } else {
    json block = config.at("pullback");
    block["target"] = config.at("fiber");
    map = pullback_from_json(block);
  }
  const PullbackReport report = validate_pullback(*map);
  if (!report.ok) throw DomainError(report.errors.front());

  std::vector<ComplexPoint> points;
  if (config.contains("points")) {
    for (const auto& p : config.at("points")) points.push_back(point_from_json(p));
  } else {
    for (const auto& c : map->source().fiber().components()) {
      points.push_back(divisorial_valuation(map->source().fiber(), c.id));
    }
  }
  json results = json::array();
  for (const auto& p : points) {
    results.push_back(json{{"point", to_json(p)}, {"image", to_json(retract(*map, p))}});
  }
  return {dump(json{{"pullback", to_json(*map)}, {"validation", to_json(report)}, {"retractions", results}}), "json"};
}

RunOutput run_blowup(const json& config) {
  const CentralFiber fiber = fiber_from_json(require(config, "fiber", Task::Blowup));
  const std::string stratum = require(config, "stratum", Task::Blowup).get<std::string>();
  std::optional<ComponentId> exc;
  if (config.contains("exceptional_id")) exc = config.at("exceptional_id").get<std::string>();
  const BlowUp bu = blow_up_stratum(fiber, stratum, exc);
  const PullbackReport report = validate_pullback(bu.pullback);
  ensure_valid(bu.pullback);
  return {dump(json{{"fiber", to_json(bu.fiber)},
                    {"exceptional", bu.exceptional},
                    {"pullback", to_json(bu.pullback)},
                    {"validation", to_json(report)}}),
          "json"};
}

ConvergenceTarget default_target(const FamilySpec& family) {
  const auto& ids = family.chart.components;
  switch (family.kind) {
    case FamilyKind::ComponentConcentrated:
      return AtomicMeasure({{ids[family.concentrated_on], Rational(1)}});
    case FamilyKind::TwoComponent: {
      // The mixture weight is a double; its exact binary value is used.
      Rational lambda(family.mixture);
      return AtomicMeasure({{ids[0], lambda}, {ids[1], Rational(1) - lambda}});
    }
    case FamilyKind::EdgeUniform:
      return EdgeLebesgue{};
  }
  return EdgeLebesgue{};
}

RunOutput run_hybrid_sim(const json& config) {
  const json& fam = require(config, "family", Task::HybridSim);
  FamilySpec family;
  family.kind = parse_family_kind(fam.at("kind").get<std::string>());
  family.concentrated_on = value_or<std::size_t>(fam, "concentrated_on", family.concentrated_on);
  family.mixture = value_or<double>(fam, "mixture", family.mixture);
  family.chart = chart_from(config);

  const auto ts = t_list(config, {1e-2, 1e-4, 1e-6});
  const auto n = value_or<std::uint64_t>(config, "samples", 10000);
  const auto seed = value_or<std::uint64_t>(config, "seed", 0);
  const double epsilon = value_or<double>(config, "epsilon", 0.1);
  const SamplingOptions options = sampling_options(config);

  ConvergenceTarget target = default_target(family);
  if (config.contains("target")) {
    const json& t = config.at("target");
    if (t.is_string()) {
      target = EdgeLebesgue{};
    } else {
      std::map<ComponentId, Rational> masses;
      for (const auto& [k, v] : t.at("masses").items()) masses.emplace(k, rational_from_json(v));
      target = AtomicMeasure(std::move(masses));
    }
  }

  const DualComplex complex = build_dual_complex(chart_fiber(family.chart, 1));
  std::vector<TimeSlice> slices;
  for (double t : ts) {
    const auto samples = sample_family(family, Complex(t, 0.0), n, seed, options);
    slices.push_back(TimeSlice{Complex(t, 0.0), pushforward(family.chart, samples)});
  }
  const auto rows = convergence_report(complex, family.chart, slices, target, epsilon);

  std::ostringstream csv;
  csv << "# nadegen hybrid-sim family=" << family_kind_name(family.kind) << " samples=" << n << " seed=" << seed
      << " epsilon=" << real(epsilon) << " chunk_size=" << options.chunk_size << "\n";
  std::vector<ComponentId> vertices;
  if (const auto* atomic = std::get_if<AtomicMeasure>(&target)) {
    csv << "# target=atomic";
    for (const auto& [id, m] : atomic->masses()) {
      csv << " " << id << ":" << to_string(m);
      vertices.push_back(id);
    }
    csv << "\n";
  } else {
    csv << "# target=edge-lebesgue\n";
  }
  csv << "# lambda1 = m_1 w_1 for chart component " << family.chart.components[0]
      << "; vertex_fraction_<v> = mass fraction within epsilon of v (max-coordinate distance in w)"
      << "; wasserstein = W1 on the dual complex with unit-length edges in barycentric coordinates"
      << "; ks_distance = Kolmogorov-Smirnov distance of lambda1 from U[0,1]\n";
  csv << "t_abs,atoms,total_mass,lambda1_min,lambda1_max";
  for (const auto& v : vertices) csv << ",vertex_fraction_" << v;
  csv << ",wasserstein,ks_distance\n";
  for (const auto& row : rows) {
    csv << real(row.t_abs) << "," << row.atoms << "," << real(row.total_mass) << "," << real(row.lambda1_min) << ","
        << real(row.lambda1_max);
    for (const auto& v : vertices) csv << "," << real(row.vertex_fraction.at(v));
    csv << "," << (row.wasserstein ? real(*row.wasserstein) : "") << ","
        << (row.ks_distance ? real(*row.ks_distance) : "") << "\n";
  }
  return {csv.str(), "csv"};
}

RunOutput run_chart_check(const json& config) {
  const json& units_block = require(config, "units", Task::ChartCheck);
  FamilySpec family;
  family.kind = FamilyKind::EdgeUniform;
  family.chart = chart_from(config);
  const std::size_t dim = family.chart.components.size();

  const auto ts = t_list(config, {1e-2, 1e-4, 1e-6, 1e-8});
  const auto n = value_or<std::uint64_t>(config, "samples", 1000);
  const auto seed = value_or<std::uint64_t>(config, "seed", 0);
  const SamplingOptions options = sampling_options(config);

  std::optional<std::vector<Complex>> constant;
  double low = 0, high = 0;
  if (units_block.contains("constant")) {
    const json& c = units_block.at("constant");
    if (c.size() != dim) throw ValidationError("units.constant needs one entry per chart coordinate");
    constant.emplace();
    for (const auto& u : c) constant->emplace_back(u.at(0).get<double>(), u.at(1).get<double>());
    low = high = std::abs(constant->front());
    for (const auto& u : *constant) {
      low = std::min(low, std::abs(u));
      high = std::max(high, std::abs(u));
    }
  } else {
    low = units_block.at("random").at("low").get<double>();
    high = units_block.at("random").at("high").get<double>();
    if (!(low <= high)) throw ValidationError("units.random needs low <= high");
  }
  UnitBounds bounds{low, high};
  if (config.contains("unit_bounds")) {
    bounds.lower = config.at("unit_bounds").at("lower").get<double>();
    bounds.upper = config.at("unit_bounds").at("upper").get<double>();
  }

  std::vector<CompatibilitySlice> slices;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const auto drawn = sample_family(family, Complex(ts[k], 0.0), n, seed, options);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x756e6974u,
                      static_cast<std::uint32_t>(k)};
    std::mt19937_64 engine(seq);
    std::uniform_real_distribution<double> modulus(low, high);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);

    CompatibilitySlice slice;
    slice.t_abs = ts[k];
    if (constant) slice.units.push_back(*constant);
    for (const auto& z : drawn) {
      std::vector<Complex> u;
      if (constant) {
        u = *constant;
      } else {
        for (std::size_t j = 0; j < dim; ++j) u.push_back(std::polar(modulus(engine), angle(engine)));
      }
      if (!valid_after_units(z, u)) continue;
      slice.samples.push_back(z);
      if (!constant) slice.units.push_back(std::move(u));
    }
    if (slice.samples.empty()) throw DomainError(fmt::format("no sample at |t| = {} stays in both charts", real(ts[k])));
    slices.push_back(std::move(slice));
  }
  const auto rows = chart_compatibility_check(family.chart, bounds, slices);

  std::ostringstream csv;
  csv << "# nadegen chart-check samples=" << n << " seed=" << seed << " units="
      << (constant ? "constant" : "random") << " bounds=[" << real(bounds.lower) << "," << real(bounds.upper) << "]\n";
  csv << "# samples drawn from the edge-uniform family and kept when valid in both charts"
      << "; delta = max |Log_U - Log_U'| (max-coordinate norm); scaled = max |Log_U - Log_U'| * log(1/|f_U|)\n";
  csv << "t_abs,samples,delta,scaled\n";
  for (const auto& row : rows) {
    csv << real(row.t_abs) << "," << row.samples << "," << real(row.delta) << "," << real(row.scaled) << "\n";
  }
  return {csv.str(), "csv"};
}

}  // namespace

Task parse_task(std::string_view name) {
  for (std::size_t k = 0; k < std::size(kTaskNames); ++k) {
    if (kTaskNames[k] == name) return static_cast<Task>(k);
  }
  throw ValidationError("unknown task \"" + std::string(name) + "\"");
}

std::string_view task_name(Task task) { return kTaskNames[static_cast<std::size_t>(task)]; }

RunOutput execute(Task task, const json& config) {
  static const SchemaValidator validator(run_config_schema());
  const auto errors = validator.validate(config);
  if (!errors.empty()) throw ValidationError("config does not match the schema at " + errors.front());
  if (config.contains("task") && config.at("task").get<std::string>() != task_name(task)) {
    throw ValidationError("config is for task " + config.at("task").get<std::string>() + ", not " +
                          std::string(task_name(task)));
  }
  switch (task) {
    case Task::DualComplex:
      return run_dual_complex(config);
    case Task::MaMeasure:
      return run_ma_measure(config);
    case Task::CurveLimit:
      return run_curve_limit(config);
    case Task::Skeleton:
      return run_skeleton(config);
    case Task::Retraction:
      return run_retraction(config);
    case Task::Blowup:
      return run_blowup(config);
    case Task::HybridSim:
      return run_hybrid_sim(config);
    case Task::ChartCheck:
      return run_chart_check(config);
  }
  throw ValidationError("unknown task");
}

json apply_overrides(json config, const RunOverrides& overrides) {
  if (!config.is_object()) throw ValidationError("config must be a JSON object");
  if (overrides.seed) config["seed"] = *overrides.seed;
  if (overrides.samples) config["samples"] = *overrides.samples;
  if (overrides.t) config["t"] = *overrides.t;
  if (overrides.epsilon) config["epsilon"] = *overrides.epsilon;
  if (overrides.out) config["output"] = *overrides.out;
  if (overrides.workers) config["workers"] = *overrides.workers;
  return config;
}

void write_atomically(const std::filesystem::path& path, std::string_view text) {
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  const auto tmp = dir / fmt::format(".{}.tmp-{}", path.filename().string(), ::getpid());
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    file.write(text.data(), static_cast<std::streamsize>(text.size()));
    file.flush();
    if (!file) {
      std::filesystem::remove(tmp);
      throw std::runtime_error("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move output into " + path.string() + ": " + ec.message());
  }
}

int run(std::string_view task_text, const std::filesystem::path& config_path, const RunOverrides& overrides,
        std::ostream& out, std::ostream& err) {
  RunOutput output;
  json config;
  try {
    const Task task = parse_task(task_text);
    std::ifstream file(config_path);
    if (!file) throw ValidationError("cannot read config " + config_path.string());
    try {
      config = json::parse(file);
    } catch (const json::parse_error& e) {
      throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    config = apply_overrides(std::move(config), overrides);
    output = execute(task, config);
  } catch (const ValidationError& e) {
    err << "nadegen: validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError& e) {
    err << "nadegen: domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const json::exception& e) {
    err << "nadegen: validation error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (config.contains("output")) {
      write_atomically(config.at("output").get<std::string>(), output.text);
    } else {
      out << output.text;
      out.flush();
    }
  } catch (const std::exception& e) {
    err << "nadegen: i/o error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace nadegen
