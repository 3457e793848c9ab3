#include <doctest.h>

#include <set>

#include "generators.hpp"
#include "nadegen/errors.hpp"

using namespace nadegen;
using namespace nadegen::testing;

namespace {

CentralFiber segment(std::int64_t m1 = 1, std::int64_t m2 = 1) {
  return CentralFiber(1, {{"D1", m1, std::nullopt, "", 0}, {"D2", m2, std::nullopt, "", 0}},
                      {{"node", {"D1", "D2"}, "", {}}});
}

}  // namespace

TEST_CASE("irreducible fiber gives a single vertex") {
  const DualComplex c = build_dual_complex(CentralFiber(1, {{"D1", 1, std::nullopt, "", 0}}, {}));
  CHECK(c.faces().size() == 1);
  CHECK(c.vertices() == std::vector<StratumId>{"D1"});
  CHECK(c.maximal_faces() == std::vector<StratumId>{"D1"});
}

TEST_CASE("nodal fiber gives a segment") {
  const DualComplex c = build_dual_complex(segment());
  CHECK(c.vertices().size() == 2);
  CHECK(c.maximal_faces() == std::vector<StratumId>{"node"});
  CHECK(c.face("node").dimension() == 1);
  CHECK(c.is_face_of("D1", "node"));
  CHECK_FALSE(c.is_face_of("node", "D1"));
  CHECK(c.face_vertices("node") == std::vector<StratumId>{"D1", "D2"});
}

TEST_CASE("branch labels give parallel edges") {
  const DualComplex c = build_dual_complex(curve_fiber(stable_graphs()[1]));
  int edges = 0;
  for (const auto& f : c.faces()) edges += f.dimension() == 1;
  CHECK(edges == 3);
  CHECK(c.vertices().size() == 2);
  CHECK(c.maximal_faces().size() == 3);
}

TEST_CASE("fiber record validation") {
  using C = Component;
  CHECK_THROWS_AS(CentralFiber(1, {}, {}), ValidationError);
  CHECK_THROWS_AS(CentralFiber(1, {C{"D1", 0, std::nullopt, "", 0}}, {}), ValidationError);
  CHECK_THROWS_AS(CentralFiber(1, {C{"D1", 1, -1, "", 0}}, {}), ValidationError);
  CHECK_THROWS_AS(CentralFiber(2, {C{"D1", 1, std::nullopt, "", 1}}, {}), ValidationError);
  CHECK_THROWS_AS(CentralFiber(1, {C{"D1"}, C{"D1"}}, {}), ValidationError);
  CHECK_THROWS_AS(CentralFiber(1, {C{"D1"}}, {{"s", {"D1", "D9"}, "", {}}}), ValidationError);
  CHECK_THROWS_AS(CentralFiber(1, {C{"D1"}, C{"D2"}}, {{"s", {"D1", "D1"}, "", {}}}), ValidationError);
  CHECK_THROWS_AS(CentralFiber(1, {C{"D1"}, C{"D2"}}, {{"s", {"D1", "D2"}, "", {}}, {"t", {"D2", "D1"}, "", {}}}),
                  ValidationError);
}

TEST_CASE("singleton strata are added under the component id") {
  const CentralFiber f = segment();
  CHECK(f.vertex_stratum("D1").id == "D1");
  const CentralFiber g(1, {{"D1"}, {"D2"}}, {{"D1", {"D1", "D2"}, "", {}}});
  CHECK(g.vertex_stratum("D1").id == "v(D1)");
}

TEST_CASE("codimension bound and face closure") {
  const CentralFiber too_many(1, {{"A"}, {"B"}, {"C"}},
                              {{"ab", {"A", "B"}, "", {}}, {"ac", {"A", "C"}, "", {}}, {"bc", {"B", "C"}, "", {}},
                               {"abc", {"A", "B", "C"}, "", {}}});
  CHECK_THROWS_AS(build_dual_complex(too_many), DomainError);
  const CentralFiber open(2, {{"A"}, {"B"}, {"C"}}, {{"abc", {"A", "B", "C"}, "", {}}});
  CHECK_THROWS_AS(build_dual_complex(open), DomainError);
}

TEST_CASE("ambiguous containment is resolved by labels or contained_in") {
  // Two curves meeting in two points, each on its own branch of a third component.
  const CentralFiber labelled(2, {{"A"}, {"B"}, {"C"}},
                              {{"ab1", {"A", "B"}, "x", {}},
                               {"ab2", {"A", "B"}, "y", {}},
                               {"ac", {"A", "C"}, "", {}},
                               {"bc", {"B", "C"}, "", {}},
                               {"p", {"A", "B", "C"}, "x", {}}});
  const DualComplex c = build_dual_complex(labelled);
  CHECK(c.subface("p", {"A", "B"}) == "ab1");

  const CentralFiber explicit_(2, {{"A"}, {"B"}, {"C"}},
                               {{"ab1", {"A", "B"}, "x", {}},
                                {"ab2", {"A", "B"}, "y", {}},
                                {"ac", {"A", "C"}, "", {}},
                                {"bc", {"B", "C"}, "", {}},
                                {"p", {"A", "B", "C"}, "", {"ab2"}}});
  CHECK(build_dual_complex(explicit_).subface("p", {"A", "B"}) == "ab2");

  const CentralFiber ambiguous(2, {{"A"}, {"B"}, {"C"}},
                               {{"ab1", {"A", "B"}, "x", {}},
                                {"ab2", {"A", "B"}, "y", {}},
                                {"ac", {"A", "C"}, "", {}},
                                {"bc", {"B", "C"}, "", {}},
                                {"p", {"A", "B", "C"}, "", {}}});
  CHECK_THROWS_AS(build_dual_complex(ambiguous), DomainError);
}

TEST_CASE("point validation and canonical form") {
  const DualComplex seg = build_dual_complex(segment());
  const ComplexPoint edge_end{"node", {{"D1", 1}, {"D2", 0}}};
  validate_point(seg, edge_end);
  const ComplexPoint v1 = canonicalize_point(seg, edge_end);
  CHECK(v1 == ComplexPoint{"D1", {{"D1", 1}}});

  const ComplexPoint interior{"node", {{"D1", make_rational(1, 3)}, {"D2", make_rational(2, 3)}}};
  CHECK(canonicalize_point(seg, interior) == interior);

  const DualComplex weighted = build_dual_complex(segment(2, 1));
  const ComplexPoint p{"node", {{"D1", make_rational(1, 4)}, {"D2", make_rational(1, 2)}}};
  validate_point(weighted, p);
  CHECK(canonicalize_point(weighted, p) == p);

  CHECK_THROWS_AS(validate_point(seg, ComplexPoint{"node", {{"D1", make_rational(1, 2)}, {"D2", make_rational(1, 3)}}}),
                  DomainError);
  CHECK_THROWS_AS(validate_point(seg, ComplexPoint{"node", {{"D1", 2}, {"D2", -1}}}), DomainError);
  CHECK_THROWS_AS(validate_point(seg, ComplexPoint{"node", {{"D1", 1}}}), DomainError);
  CHECK_THROWS_AS(validate_point(seg, ComplexPoint{"nowhere", {{"D1", 1}}}), ValidationError);
}

TEST_CASE("property: faces see exactly their singleton strata, canonicalize is idempotent") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const DualComplex c = build_dual_complex(random_snc_fiber(rng));
    for (const auto& f : c.faces()) {
      std::vector<StratumId> expected;
      for (const auto& id : f.components) expected.push_back(c.fiber().vertex_stratum(id).id);
      CHECK(c.face_vertices(f.stratum) == expected);
    }
    const Face& f = random_face(rng, c);
    ComplexPoint p = random_point(rng, f);
    // Zero out one weight and rescale so the point lands on a boundary face.
    if (f.components.size() > 1) {
      const auto& drop = f.components.front();
      p.weights[drop] = 0;
      Rational total = 0;
      for (const auto& [id, w] : p.weights) total += w * f.multiplicity(id);
      for (auto& [id, w] : p.weights) w /= total;
    }
    validate_point(c, p);
    const ComplexPoint once = canonicalize_point(c, p);
    validate_point(c, once);
    CHECK(canonicalize_point(c, once) == once);
    Rational sum = 0;
    for (const auto& [id, w] : once.weights) sum += w * c.fiber().multiplicity(id);
    CHECK(sum == 1);
  }
}

TEST_CASE("isomorphic complexes under component renaming") {
  const CentralFiber a = simplex_fiber(2, {1, 2, 3});
  const CentralFiber b(2, {{"X", 3}, {"Y", 2}, {"Z", 1}},
                       {{"xy", {"X", "Y"}, "", {}}, {"xz", {"X", "Z"}, "", {}}, {"yz", {"Y", "Z"}, "", {}},
                        {"xyz", {"X", "Y", "Z"}, "", {}}});
  const DualComplex ca = build_dual_complex(a);
  const DualComplex cb = build_dual_complex(b);
  CHECK(ca.faces().size() == cb.faces().size());
  std::multiset<std::pair<std::size_t, std::int64_t>> sa, sb;
  for (const auto& f : ca.faces()) {
    std::int64_t m = 0;
    for (auto x : f.multiplicities) m += x;
    sa.emplace(f.dimension(), m);
  }
  for (const auto& f : cb.faces()) {
    std::int64_t m = 0;
    for (auto x : f.multiplicities) m += x;
    sb.emplace(f.dimension(), m);
  }
  CHECK(sa == sb);
}
