#include "nadegen/serialization.hpp"

#include "nadegen/errors.hpp"

namespace nadegen {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::string string_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) throw ValidationError(std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

std::int64_t integer(const json& v, const char* what) {
  if (!v.is_number_integer()) throw ValidationError(std::string(what) + " must be an integer");
  return v.get<std::int64_t>();
}

std::vector<std::string> string_list(const json& v, const char* what) {
  if (!v.is_array()) throw ValidationError(std::string(what) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw ValidationError(std::string(what) + " must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::map<std::string, Rational> rational_map(const json& v, const char* what) {
  if (!v.is_object()) throw ValidationError(std::string(what) + " must be an object");
  std::map<std::string, Rational> out;
  for (const auto& [k, q] : v.items()) out.emplace(k, rational_from_json(q));
  return out;
}

json rational_map_to_json(const std::map<std::string, Rational>& m) {
  json out = json::object();
  for (const auto& [k, q] : m) out[k] = rational_to_json(q);
  return out;
}

}  // namespace

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return make_rational(j.get<std::int64_t>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw ValidationError("rational numbers must be \"p/q\" strings or integers");
}

json rational_to_json(const Rational& q) { return to_string(q); }

json to_json(const CentralFiber& fiber) {
  json components = json::array();
  for (const auto& c : fiber.components()) {
    json e = {{"id", c.id}, {"multiplicity", c.multiplicity}};
    if (c.genus) e["genus"] = *c.genus;
    if (!c.name.empty()) e["name"] = c.name;
    if (c.loops) e["loops"] = c.loops;
    components.push_back(std::move(e));
  }
  json strata = json::array();
  for (const auto& s : fiber.strata()) {
    json e = {{"id", s.id}, {"components", s.components}};
    if (!s.branch_label.empty()) e["branch_label"] = s.branch_label;
    if (!s.contained_in.empty()) e["contained_in"] = s.contained_in;
    strata.push_back(std::move(e));
  }
  return json{{"fiber_dimension", fiber.fiber_dimension()}, {"components", components}, {"strata", strata}};
}

CentralFiber fiber_from_json(const json& j) {
  const auto dim = integer(field(j, "fiber_dimension"), "fiber_dimension");
  std::vector<Component> components;
  const json& cs = field(j, "components");
  if (!cs.is_array()) throw ValidationError("components must be an array");
  for (const auto& c : cs) {
    Component comp;
    comp.id = string_field(c, "id");
    comp.multiplicity = c.contains("multiplicity") ? integer(c.at("multiplicity"), "multiplicity") : 1;
    if (c.contains("genus")) comp.genus = static_cast<int>(integer(c.at("genus"), "genus"));
    if (c.contains("name")) comp.name = string_field(c, "name");
    if (c.contains("loops")) comp.loops = static_cast<int>(integer(c.at("loops"), "loops"));
    components.push_back(std::move(comp));
  }
  std::vector<Stratum> strata;
  if (j.contains("strata")) {
    const json& ss = j.at("strata");
    if (!ss.is_array()) throw ValidationError("strata must be an array");
    for (const auto& s : ss) {
      Stratum st;
      st.id = string_field(s, "id");
      st.components = string_list(field(s, "components"), "stratum components");
      if (s.contains("branch_label")) st.branch_label = string_field(s, "branch_label");
      if (s.contains("contained_in")) st.contained_in = string_list(s.at("contained_in"), "contained_in");
      strata.push_back(std::move(st));
    }
  }
  return CentralFiber(static_cast<int>(dim), std::move(components), std::move(strata));
}

json to_json(const DualComplex& complex) {
  json faces = json::array();
  for (const auto& f : complex.faces()) {
    faces.push_back(json{{"stratum", f.stratum},
                         {"components", f.components},
                         {"multiplicities", f.multiplicities},
                         {"dimension", f.dimension()},
                         {"branch_label", f.branch_label},
                         {"vertices", complex.face_vertices(f.stratum)}});
  }
  return json{{"fiber", to_json(complex.fiber())},
              {"vertices", complex.vertices()},
              {"faces", faces},
              {"maximal_faces", complex.maximal_faces()}};
}

DualComplex complex_from_json(const json& j) { return build_dual_complex(fiber_from_json(field(j, "fiber"))); }

json to_json(const ComplexPoint& p) { return json{{"stratum", p.stratum}, {"weights", rational_map_to_json(p.weights)}}; }

ComplexPoint point_from_json(const json& j) {
  return ComplexPoint{string_field(j, "stratum"), rational_map(field(j, "weights"), "weights")};
}

json to_json(const MonomialSupport& s) { return json{{"components", s.components()}, {"exponents", s.exponents()}}; }

MonomialSupport support_from_json(const json& j) {
  auto ids = string_list(field(j, "components"), "support components");
  const json& ex = field(j, "exponents");
  if (!ex.is_array()) throw ValidationError("exponents must be an array");
  std::vector<Exponent> exponents;
  for (const auto& beta : ex) {
    if (!beta.is_array()) throw ValidationError("exponent vectors must be arrays");
    Exponent e;
    for (const auto& v : beta) e.push_back(integer(v, "exponent entry"));
    exponents.push_back(std::move(e));
  }
  return MonomialSupport(std::move(ids), std::move(exponents));
}

json to_json(const AtomicMeasure& m) {
  return json{{"masses", rational_map_to_json(m.masses())}, {"total_mass", rational_to_json(m.total_mass())}};
}

AtomicMeasure measure_from_json(const json& j) {
  AtomicMeasure m(rational_map(field(j, "masses"), "masses"));
  if (j.contains("total_mass") && rational_from_json(j.at("total_mass")) != m.total_mass()) {
    throw ValidationError("total_mass does not match the sum of masses");
  }
  return m;
}

json to_json(const ModelPolarization& p) {
  return json{{"degrees", rational_map_to_json(p.degrees)}, {"total_degree", rational_to_json(p.total_degree)}};
}

ModelPolarization polarization_from_json(const json& j) {
  return ModelPolarization{rational_map(field(j, "degrees"), "degrees"), rational_from_json(field(j, "total_degree"))};
}

json to_json(const PluricanonicalForm& f) { return json{{"level", f.level}, {"ords", f.ords}}; }

PluricanonicalForm form_from_json(const json& j) {
  PluricanonicalForm f;
  f.level = integer(field(j, "level"), "level");
  const json& ords = field(j, "ords");
  if (!ords.is_object()) throw ValidationError("ords must be an object");
  for (const auto& [k, v] : ords.items()) f.ords.emplace(k, integer(v, "ord"));
  return f;
}

json to_json(const EssentialSkeleton& sk) {
  json forms = json::array();
  for (const auto& f : sk.per_form) {
    forms.push_back(json{{"weights", rational_map_to_json(f.weights)},
                         {"minimum", rational_to_json(f.minimum)},
                         {"faces", f.faces},
                         {"warnings", f.warnings}});
  }
  return json{{"forms", forms}, {"faces", sk.faces}};
}

json to_json(const PullbackMatrix& m) {
  return json{{"target", to_json(m.target().fiber())},
              {"source", to_json(m.source().fiber())},
              {"rows", m.row_ids()},
              {"cols", m.col_ids()},
              {"entries", m.entries()},
              {"stratum_images", m.stratum_images()}};
}

PullbackMatrix pullback_from_json(const json& j) {
  auto target = std::make_shared<const DualComplex>(build_dual_complex(fiber_from_json(field(j, "target"))));
  auto source = std::make_shared<const DualComplex>(build_dual_complex(fiber_from_json(field(j, "source"))));
  const json& e = field(j, "entries");
  if (!e.is_array()) throw ValidationError("entries must be an array of rows");
  PullbackMatrix::Entries entries;
  for (const auto& row : e) {
    if (!row.is_array()) throw ValidationError("entries must be an array of rows");
    std::vector<std::int64_t> r;
    for (const auto& a : row) r.push_back(integer(a, "pullback entry"));
    entries.push_back(std::move(r));
  }
  std::map<StratumId, StratumId> images;
  if (j.contains("stratum_images")) {
    const json& im = j.at("stratum_images");
    if (!im.is_object()) throw ValidationError("stratum_images must be an object");
    for (const auto& [k, v] : im.items()) {
      if (!v.is_string()) throw ValidationError("stratum_images values must be strings");
      images.emplace(k, v.get<std::string>());
    }
  }
  return PullbackMatrix(std::move(target), std::move(source), string_list(field(j, "rows"), "rows"),
                        string_list(field(j, "cols"), "cols"), std::move(entries), std::move(images));
}

json to_json(const PullbackReport& r) {
  json out{{"ok", r.ok}, {"errors", r.errors}, {"zero_rows", r.zero_rows}};
  out["violated_column"] = r.violated_column ? json(*r.violated_column) : json(nullptr);
  return out;
}

}  // namespace nadegen
