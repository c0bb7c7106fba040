#include <doctest.h>

#include "hpt/errors.hpp"
#include "hpt/expression.hpp"
#include "hpt/gaussian_space.hpp"
#include "hpt/space.hpp"

using namespace hpt;

namespace {

SpaceHandle fixture() { return make_finite_table_space(fixture_space_spec(), "fixture"); }

bool has_violation(const ValidationReport& r, std::string_view identity) {
  for (const auto& v : r.violations)
    if (v.identity == identity) return true;
  return false;
}

constexpr const char* kFixtureJson = R"({
  "basis": [{"name": "u", "degree": 0}, {"name": "v", "degree": 0}, {"name": "w", "degree": 1}],
  "unit": "u",
  "product": [{"left": "v", "right": "v", "out": [{"b": "u", "c": 1}]},
              {"left": "v", "right": "w", "out": [{"b": "w", "c": 1}]}],
  "differential": [{"in": "v", "out": [{"b": "w", "c": 1}]}],
  "expectation": [{"b": "u", "c": "1"}]
})";

}  // namespace

TEST_CASE("validate_space examples") {
  CHECK(validate_space(fixture_space_spec()).valid());
  CHECK(validate_space(gaussian_space(), 0).valid());

  auto bad = fixture_space_spec();
  bad.expectation.push_back({"w", 1});
  const auto report = validate_space(bad);
  CHECK_FALSE(report.valid());
  REQUIRE(has_violation(report, "E∘d = 0"));
  bool witness_found = false;
  for (const auto& v : report.violations) witness_found |= v.witness == "E(d(v)) = 1";
  CHECK(witness_found);
}

TEST_CASE("the fixture without v*w = w is not associative") {
  auto literal = fixture_space_spec();
  literal.product.pop_back();
  const auto report = validate_space(literal);
  CHECK_FALSE(report.valid());
  CHECK(has_violation(report, "associativity"));
}

TEST_CASE("validation catches each axiom") {
  SUBCASE("d must square to zero") {
    SpaceSpec s;
    s.basis = {{"a", 0}, {"b", 1}, {"c", 2}};
    s.differential = {{"a", {{"b", 1}}}, {"b", {{"c", 1}}}};
    CHECK(has_violation(validate_space(s), "d∘d = 0"));
  }
  SUBCASE("d must raise degree") {
    SpaceSpec s;
    s.basis = {{"a", 0}, {"b", 0}};
    s.differential = {{"a", {{"b", 1}}}};
    CHECK(has_violation(validate_space(s), "d raises degree by one"));
  }
  SUBCASE("E lives in degree zero") {
    SpaceSpec s;
    s.basis = {{"a", 0}, {"b", 2}};
    s.expectation = {{"b", 1}};
    CHECK(has_violation(validate_space(s), "E vanishes off degree 0"));
  }
  SUBCASE("products respect degrees") {
    SpaceSpec s;
    s.basis = {{"a", 1}, {"b", 1}};
    s.product = {{"a", "b", {{"a", 1}}}};
    CHECK(has_violation(validate_space(s), "product respects degree"));
  }
  SUBCASE("graded commutativity") {
    SpaceSpec s;
    s.basis = {{"a", 0}, {"b", 0}, {"c", 0}};
    s.product = {{"a", "b", {{"c", 1}}}, {"b", "a", {{"c", 2}}}};
    CHECK(has_violation(validate_space(s), "graded commutativity"));
  }
  SUBCASE("unit law") {
    SpaceSpec s;
    s.basis = {{"e", 0}, {"a", 0}};
    s.unit = "e";
    s.product = {{"e", "a", {{"e", 1}}}};
    CHECK(has_violation(validate_space(s), "unit law"));
  }
}

TEST_CASE("spec shape errors are distinct from axiom failures") {
  SpaceSpec dup;
  dup.basis = {{"a", 0}, {"a", 1}};
  CHECK_THROWS_AS(FiniteTableSpace{dup}, SpecError);
  SpaceSpec unknown;
  unknown.basis = {{"a", 0}};
  unknown.differential = {{"b", {{"a", 1}}}};
  CHECK_THROWS_AS(FiniteTableSpace{unknown}, SpecError);
  SpaceSpec twice;
  twice.basis = {{"a", 0}};
  twice.product = {{"a", "a", {{"a", 1}}}, {"a", "a", {{"a", 2}}}};
  CHECK_THROWS_AS(FiniteTableSpace{twice}, SpecError);
  SpaceSpec bad_unit;
  bad_unit.basis = {{"a", 0}};
  bad_unit.unit = "z";
  CHECK_THROWS_AS(FiniteTableSpace{bad_unit}, SpecError);
}

TEST_CASE("space JSON parsing and round trip") {
  const auto spec = parse_space_json(kFixtureJson);
  CHECK(spec.basis.size() == 3);
  CHECK(validate_space(spec).valid());
  const auto again = parse_space_json(to_json(spec));
  const auto a = make_finite_table_space(spec), b = make_finite_table_space(again);
  const auto& ta = static_cast<const FiniteTableSpace&>(*a);
  const auto& tb = static_cast<const FiniteTableSpace&>(*b);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(ta.expectation(ta.basis_vector(i)) == tb.expectation(tb.basis_vector(i)));
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(ta.differential_entry(i, k) == tb.differential_entry(i, k));
      for (std::size_t j = 0; j < 3; ++j) CHECK(ta.product_constant(i, j, k) == tb.product_constant(i, j, k));
    }
  }
  const auto fx = fixture();
  const auto& tf = static_cast<const FiniteTableSpace&>(*fx);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) CHECK(ta.product_constant(i, j, k) == tf.product_constant(i, j, k));
}

TEST_CASE("space JSON errors") {
  try {
    parse_space_json("{\"basis\": [}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 11);
  }
  CHECK_THROWS_AS(parse_space_json(R"({"basis": 3})"), SpecError);
  CHECK_THROWS_AS(parse_space_json(R"({"basis": [{"name": "a", "degree": 0}], "expectation": [{"b": "a", "c": "1/0"}]})"),
                  ParseError);
  CHECK_THROWS_AS(load_space_file("/nonexistent/space.json"), SpecError);
}

TEST_CASE("element operations") {
  const auto g = gaussian_space();
  CHECK(g->expectation(parse_expression(*g, "x^2 + 7*eta")) == 1);
  const auto fx = fixture();
  CHECK(fx->equal(fx->differential(*fx->generator("v")), *fx->generator("w")));
  Rng rng(3);
  for (const auto& space : {g, fx}) {
    for (int s = 0; s < 10; ++s) {
      const Element z = space->random_homogeneous(rng, 4);
      CHECK(space->equal(space->product(*space->unit(), z), z));
      CHECK(space->equal(space->product(z, *space->unit()), z));
    }
  }
  CHECK(fx->format(parse_expression(*fx, "2*u - v/2")) == "2*u - 1/2*v");
  CHECK_THROWS_AS(fx->add(*fx->generator("v"), parse_expression(*g, "x")), SpaceMismatchError);
  CHECK_THROWS_AS(g->degree(parse_expression(*g, "x + eta")), ValidationError);
  CHECK_FALSE(g->degree(g->zero()).has_value());
  CHECK(fx->degree(*fx->generator("w")) == 1);
  CHECK(fx->homogeneous_parts(parse_expression(*fx, "u + w")).size() == 2);
}

TEST_CASE("space invariants hold on random valid spaces") {
  Rng rng(2024);
  for (int s = 0; s < 25; ++s) {
    const auto spec = random_space_spec(rng);
    const auto space = make_finite_table_space(spec);
    CHECK(space->check_axioms(0).valid());
    for (int t = 0; t < 10; ++t) {
      const Element a = space->random_homogeneous(rng, 0), b = space->random_homogeneous(rng, 0);
      CHECK(space->expectation(space->differential(a)) == 0);
      CHECK(space->is_zero(space->differential(space->differential(a))));
      const int sign = (*space->degree(a) * *space->degree(b)) % 2 == 0 ? 1 : -1;
      CHECK(space->equal(space->product(a, b), space->scale(sign, space->product(b, a))));
    }
  }
}

TEST_CASE("validation is deterministic") {
  auto bad = fixture_space_spec();
  bad.product.pop_back();
  CHECK(validate_space(bad).to_string() == validate_space(bad).to_string());
  CHECK(gaussian_space()->check_axioms(9).to_string() == gaussian_space()->check_axioms(9).to_string());
}

TEST_CASE("helper spaces") {
  CHECK(scalar_value(scalar_element(Rational(3, 4))) == Rational(3, 4));
  CHECK(scalar_line()->check_axioms(0).valid());
  const auto t = trivial_space({0, 1});
  CHECK(t->check_axioms(0).valid());
  CHECK(t->name() == "Q^2");
  CHECK_THROWS_AS(scalar_value(parse_expression(*gaussian_space(), "x")), SpaceMismatchError);
}
