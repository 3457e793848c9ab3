#pragma once

#include <nlohmann/json.hpp>

#include "nadegen/degeneration.hpp"
#include "nadegen/model_maps.hpp"
#include "nadegen/monge_ampere.hpp"
#include "nadegen/valuation.hpp"

namespace nadegen {

// JSON encodings of the domain types. Rationals are always "p/q" strings on
// output; on input both strings and JSON integers are accepted. Decoding
// errors throw ValidationError.

Rational rational_from_json(const nlohmann::json& j);
nlohmann::json rational_to_json(const Rational& q);

nlohmann::json to_json(const CentralFiber& fiber);
CentralFiber fiber_from_json(const nlohmann::json& j);

/// The complex is encoded together with its fiber, which is what decoding
/// rebuilds it from.
nlohmann::json to_json(const DualComplex& complex);
DualComplex complex_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ComplexPoint& p);
ComplexPoint point_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MonomialSupport& s);
MonomialSupport support_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AtomicMeasure& m);
AtomicMeasure measure_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ModelPolarization& p);
ModelPolarization polarization_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PluricanonicalForm& f);
PluricanonicalForm form_from_json(const nlohmann::json& j);

nlohmann::json to_json(const EssentialSkeleton& sk);

/// Encodes both fibers, ids, entries and stratum images.
nlohmann::json to_json(const PullbackMatrix& m);
PullbackMatrix pullback_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PullbackReport& r);

}  // namespace nadegen
