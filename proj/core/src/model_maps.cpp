#include "nadegen/model_maps.hpp"

#include <algorithm>
#include <set>

#include "nadegen/errors.hpp"

namespace nadegen {

namespace {

std::map<ComponentId, std::size_t> index_ids(const std::vector<ComponentId>& ids, const char* what) {
  std::map<ComponentId, std::size_t> out;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (!out.emplace(ids[k], k).second) {
      throw ValidationError(std::string("duplicate ") + what + " id " + ids[k]);
    }
  }
  return out;
}

std::vector<ComponentId> component_ids(const CentralFiber& fiber) {
  std::vector<ComponentId> out;
  for (const auto& c : fiber.components()) out.push_back(c.id);
  return out;
}

}  // namespace

PullbackMatrix::PullbackMatrix(std::shared_ptr<const DualComplex> target, std::shared_ptr<const DualComplex> source,
                               std::vector<ComponentId> row_ids, std::vector<ComponentId> col_ids, Entries entries,
                               std::map<StratumId, StratumId> stratum_images)
    : target_(std::move(target)),
      source_(std::move(source)),
      row_ids_(std::move(row_ids)),
      col_ids_(std::move(col_ids)),
      entries_(std::move(entries)),
      stratum_images_(std::move(stratum_images)) {
  if (!target_ || !source_) throw ValidationError("pullback matrix needs both complexes");
  row_index_ = index_ids(row_ids_, "row");
  col_index_ = index_ids(col_ids_, "column");
  if (entries_.size() != row_ids_.size()) throw ValidationError("pullback matrix row count mismatch");
  for (const auto& row : entries_) {
    if (row.size() != col_ids_.size()) throw ValidationError("pullback matrix column count mismatch");
  }
  for (const auto& [from, to] : stratum_images_) {
    if (!source_->has_face(from)) throw ValidationError("stratum image given for unknown stratum " + from);
    if (!target_->has_face(to)) throw ValidationError("stratum image refers to unknown stratum " + to);
  }
}

PullbackMatrix PullbackMatrix::identity(std::shared_ptr<const DualComplex> complex) {
  auto ids = component_ids(complex->fiber());
  Entries entries(ids.size(), std::vector<std::int64_t>(ids.size(), 0));
  for (std::size_t k = 0; k < ids.size(); ++k) entries[k][k] = 1;
  std::map<StratumId, StratumId> images;
  for (const auto& f : complex->faces()) images.emplace(f.stratum, f.stratum);
  return PullbackMatrix(complex, complex, ids, ids, std::move(entries), std::move(images));
}

std::int64_t PullbackMatrix::entry(const ComponentId& row, const ComponentId& col) const {
  auto r = row_index_.find(row);
  auto c = col_index_.find(col);
  if (r == row_index_.end() || c == col_index_.end()) return 0;
  return entries_[r->second][c->second];
}

PullbackReport validate_pullback(const PullbackMatrix& m) {
  PullbackReport report;
  auto fail = [&](std::string msg) {
    report.ok = false;
    report.errors.push_back(std::move(msg));
  };

  const CentralFiber& target = m.target().fiber();
  const CentralFiber& source = m.source().fiber();
  const std::set<ComponentId> rows(m.row_ids().begin(), m.row_ids().end());
  const std::set<ComponentId> cols(m.col_ids().begin(), m.col_ids().end());
  const auto target_ids = component_ids(target);
  const auto source_ids = component_ids(source);
  if (rows != std::set<ComponentId>(target_ids.begin(), target_ids.end())) {
    fail("row ids do not match the components of the dominated model");
  }
  if (cols != std::set<ComponentId>(source_ids.begin(), source_ids.end())) {
    fail("column ids do not match the components of the dominating model");
  }
  if (!report.ok) return report;

  for (std::size_t i = 0; i < m.row_ids().size(); ++i) {
    for (std::size_t j = 0; j < m.col_ids().size(); ++j) {
      if (m.entries()[i][j] < 0) {
        fail("negative entry at (" + m.row_ids()[i] + ", " + m.col_ids()[j] + ")");
      }
    }
  }

  for (std::size_t j = 0; j < m.col_ids().size(); ++j) {
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < m.row_ids().size(); ++i) {
      sum += m.entries()[i][j] * target.multiplicity(m.row_ids()[i]);
    }
    const std::int64_t expected = source.multiplicity(m.col_ids()[j]);
    if (sum != expected) {
      if (!report.violated_column) report.violated_column = m.col_ids()[j];
      fail("multiplicity identity violated at column " + m.col_ids()[j] + ": sum_i a_ij m_i = " +
           std::to_string(sum) + " but m'_j = " + std::to_string(expected));
    }
  }

  for (std::size_t i = 0; i < m.row_ids().size(); ++i) {
    const auto& row = m.entries()[i];
    if (std::none_of(row.begin(), row.end(), [](std::int64_t a) { return a > 0; })) {
      report.zero_rows.push_back(m.row_ids()[i]);
    }
  }
  return report;
}

ComplexPoint retract(const PullbackMatrix& m, const ComplexPoint& point) {
  validate_point(m.source(), point);

  std::map<ComponentId, Rational> image;
  for (const auto& row : m.row_ids()) {
    Rational w = 0;
    for (const auto& [col, wc] : point.weights) {
      const std::int64_t a = m.entry(row, col);
      if (a != 0) w += a * wc;
    }
    if (w > 0) image.emplace(row, std::move(w));
  }
  ComponentSet support;
  for (const auto& [id, w] : image) support.push_back(id);
  if (support.empty()) throw DomainError("retraction of a point on " + point.stratum + " has no positive weight");

  const DualComplex& target = m.target();
  StratumId carrier;
  auto mapped = m.stratum_images().find(point.stratum);
  if (mapped != m.stratum_images().end()) {
    const Face& host = target.face(mapped->second);
    if (!std::includes(host.components.begin(), host.components.end(), support.begin(), support.end())) {
      throw DomainError("retraction of a point on " + point.stratum + " leaves its declared image stratum " +
                        host.stratum);
    }
    carrier = target.subface(host.stratum, support);
  } else {
    std::vector<StratumId> exact;
    for (const auto& f : target.faces()) {
      if (f.components == support) exact.push_back(f.stratum);
    }
    if (exact.empty()) {
      throw DomainError("retraction of a point on " + point.stratum +
                        " is not contained in any declared stratum of the dominated model");
    }
    if (exact.size() > 1) {
      throw DomainError("retraction of a point on " + point.stratum +
                        " is ambiguous between branches; declare its stratum image");
    }
    carrier = exact.front();
  }
  return ComplexPoint{carrier, std::move(image)};
}

PullbackMatrix compose_pullbacks(const PullbackMatrix& outer, const PullbackMatrix& inner) {
  if (!(inner.target().fiber() == outer.source().fiber())) {
    throw ValidationError("cannot compose pullbacks: fibers do not match");
  }
  PullbackMatrix::Entries entries(outer.row_ids().size(), std::vector<std::int64_t>(inner.col_ids().size(), 0));
  for (std::size_t i = 0; i < outer.row_ids().size(); ++i) {
    for (std::size_t j = 0; j < inner.col_ids().size(); ++j) {
      std::int64_t sum = 0;
      for (const auto& mid : outer.col_ids()) {
        sum += outer.entry(outer.row_ids()[i], mid) * inner.entry(mid, inner.col_ids()[j]);
      }
      entries[i][j] = sum;
    }
  }
  std::map<StratumId, StratumId> images;
  for (const auto& [from, mid] : inner.stratum_images()) {
    auto it = outer.stratum_images().find(mid);
    if (it != outer.stratum_images().end()) images.emplace(from, it->second);
  }
  return PullbackMatrix(outer.target_ptr(), inner.source_ptr(), outer.row_ids(), inner.col_ids(),
                        std::move(entries), std::move(images));
}

BlowUp blow_up_stratum(const CentralFiber& fiber, const StratumId& stratum, std::optional<ComponentId> exceptional_id) {
  auto complex = std::make_shared<const DualComplex>(build_dual_complex(fiber));
  const Face& center = complex->face(stratum);
  if (center.components.size() < 2) {
    throw DomainError("blow-up center " + stratum + " is a component; only strata of codimension >= 2 are supported");
  }
  const auto maximal = complex->maximal_faces();
  if (std::find(maximal.begin(), maximal.end(), stratum) == maximal.end()) {
    throw DomainError("blow-up center " + stratum + " is not a minimal stratum");
  }

  ComponentId e;
  if (exceptional_id) {
    e = *exceptional_id;
    if (fiber.has_component(e) || fiber.has_stratum(e)) throw ValidationError("exceptional id " + e + " is taken");
  } else {
    for (int k = 1;; ++k) {
      e = "E" + std::to_string(k);
      if (!fiber.has_component(e) && !fiber.has_stratum(e)) break;
    }
  }

  std::vector<Component> components = fiber.components();
  Component exc;
  exc.id = e;
  exc.multiplicity = 0;
  for (auto m : center.multiplicities) exc.multiplicity += m;
  if (fiber.fiber_dimension() == 1) exc.genus = 0;
  exc.name = "exceptional divisor over " + stratum;
  components.push_back(exc);

  std::vector<Stratum> strata;
  for (const auto& s : fiber.strata()) {
    if (s.id != stratum) strata.push_back(s);
  }

  // Star subdivision: one new stratum E ∩ Z' for every proper face Z of
  // sigma_Y, plus E itself.
  std::map<ComponentSet, StratumId> new_ids;
  auto new_stratum_id = [&](const ComponentSet& k) -> StratumId {
    if (k.empty()) return e;
    return e + "|" + complex->subface(stratum, k);
  };
  std::vector<ComponentSet> faces_of_center;
  const std::size_t n = center.components.size();
  for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << n); ++mask) {
    ComponentSet k;
    for (std::size_t b = 0; b < n; ++b) {
      if (mask & (std::size_t{1} << b)) k.push_back(center.components[b]);
    }
    faces_of_center.push_back(k);
  }
  for (const auto& k : faces_of_center) {
    Stratum s;
    s.id = new_stratum_id(k);
    if (fiber.has_stratum(s.id)) throw ValidationError("stratum id " + s.id + " is taken");
    s.components = k;
    s.components.push_back(e);
    for (const auto& sub : faces_of_center) {
      if (sub.size() >= k.size()) continue;
      if (!std::includes(k.begin(), k.end(), sub.begin(), sub.end())) continue;
      s.contained_in.push_back(new_stratum_id(sub));
    }
    for (const auto& sub : faces_of_center) {
      if (sub.empty() || sub.size() > k.size()) continue;
      if (!std::includes(k.begin(), k.end(), sub.begin(), sub.end())) continue;
      s.contained_in.push_back(complex->subface(stratum, sub));
    }
    strata.push_back(std::move(s));
  }

  CentralFiber blown(fiber.fiber_dimension(), std::move(components), std::move(strata));
  auto blown_complex = std::make_shared<const DualComplex>(build_dual_complex(blown));

  std::vector<ComponentId> rows = component_ids(fiber);
  std::vector<ComponentId> cols = component_ids(blown);
  PullbackMatrix::Entries entries(rows.size(), std::vector<std::int64_t>(cols.size(), 0));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    entries[i][i] = 1;
    if (std::binary_search(center.components.begin(), center.components.end(), rows[i])) {
      entries[i][cols.size() - 1] = 1;
    }
  }

  std::map<StratumId, StratumId> images;
  for (const auto& f : blown_complex->faces()) {
    const bool touches_e = std::binary_search(f.components.begin(), f.components.end(), e);
    images.emplace(f.stratum, touches_e ? stratum : f.stratum);
  }

  PullbackMatrix pullback(complex, blown_complex, std::move(rows), std::move(cols), std::move(entries),
                          std::move(images));
  return BlowUp{std::move(blown), e, std::move(pullback)};
}

}  // namespace nadegen
