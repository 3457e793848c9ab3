#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nadegen/degeneration.hpp"

namespace nadegen {

/// A domination h : X' -> X of snc models, recorded through the pullbacks
/// h^* D_i = sum_j a_ij D'_j. Rows are components of the dominated model X
/// (the target of h), columns are components of the dominating model X'
/// (the source of h).
///
/// `stratum_images` optionally records, for strata Y' of X', the minimal
/// stratum Y of X with h(Y') in Y. Retraction uses it to pick the target face
/// when several strata share a component set.
class PullbackMatrix {
 public:
  using Entries = std::vector<std::vector<std::int64_t>>;

  PullbackMatrix(std::shared_ptr<const DualComplex> target, std::shared_ptr<const DualComplex> source,
                 std::vector<ComponentId> row_ids, std::vector<ComponentId> col_ids, Entries entries,
                 std::map<StratumId, StratumId> stratum_images = {});

  static PullbackMatrix identity(std::shared_ptr<const DualComplex> complex);

  const DualComplex& target() const { return *target_; }
  const DualComplex& source() const { return *source_; }
  std::shared_ptr<const DualComplex> target_ptr() const { return target_; }
  std::shared_ptr<const DualComplex> source_ptr() const { return source_; }

  const std::vector<ComponentId>& row_ids() const { return row_ids_; }
  const std::vector<ComponentId>& col_ids() const { return col_ids_; }
  const Entries& entries() const { return entries_; }
  const std::map<StratumId, StratumId>& stratum_images() const { return stratum_images_; }

  /// a_ij by component ids; zero if either id is absent.
  std::int64_t entry(const ComponentId& row, const ComponentId& col) const;

 private:
  std::shared_ptr<const DualComplex> target_;
  std::shared_ptr<const DualComplex> source_;
  std::vector<ComponentId> row_ids_;
  std::vector<ComponentId> col_ids_;
  Entries entries_;
  std::map<StratumId, StratumId> stratum_images_;
  std::map<ComponentId, std::size_t> row_index_;
  std::map<ComponentId, std::size_t> col_index_;
};

struct PullbackReport {
  bool ok = true;
  /// First column whose multiplicity identity sum_i a_ij m_i = m'_j fails.
  std::optional<ComponentId> violated_column;
  std::vector<std::string> errors;
  /// Rows without a positive entry. Reported, not rejected.
  std::vector<ComponentId> zero_rows;
};

/// Checks ids against both fibers, nonnegativity, and the multiplicity
/// identity column by column.
PullbackReport validate_pullback(const PullbackMatrix& m);

/// r_{X'X}: w_i = sum_j a_ij w'_j, placed on its minimal carrying face.
ComplexPoint retract(const PullbackMatrix& m, const ComplexPoint& point);

/// Composite of outer : X' -> X and inner : X'' -> X', as X'' -> X.
PullbackMatrix compose_pullbacks(const PullbackMatrix& outer, const PullbackMatrix& inner);

struct BlowUp {
  CentralFiber fiber;
  ComponentId exceptional;
  PullbackMatrix pullback;
};

/// Blows up a minimal stratum Y (a maximal face sigma_Y, |J| >= 2). The new
/// component E has m_E = sum_{j in J} m_j, and the dual complex changes by the
/// star subdivision of sigma_Y with apex v_E. `exceptional_id` defaults to the
/// first free id of the form "E<k>".
BlowUp blow_up_stratum(const CentralFiber& fiber, const StratumId& stratum,
                       std::optional<ComponentId> exceptional_id = std::nullopt);

}  // namespace nadegen
