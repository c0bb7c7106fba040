#include <doctest.h>

#include "hpt/errors.hpp"
#include "hpt/expression.hpp"
#include "hpt/gaussian_space.hpp"
#include "hpt/linfty.hpp"
#include "oracles.hpp"

using namespace hpt;

namespace {

SpaceHandle G() { return gaussian_space(); }
SpaceHandle fixture() { return make_finite_table_space(fixture_space_spec(), "fixture"); }
Element g(std::string_view s) { return parse_expression(*gaussian_space(), s); }
SymWord repeated(const SpaceHandle& space, const Element& e, std::size_t n) {
  return SymWord(space, std::vector<Element>(n, e));
}

// sum over partitions of prod of block cumulants, evaluated with the
// library's cumulant on sub-words
Rational moment_from_cumulants(const SpaceHandle& space, const SymWord& w) {
  Rational total = 0;
  for (const auto& p : oracle::partitions(int(w.arity()))) {
    Rational term = oracle::reorder_sign(oracle::canonical_order(p), w.degrees());
    for (auto block : p) {
      std::sort(block.begin(), block.end());
      term *= total_cumulant(space, w.select(block));
    }
    total += term;
  }
  return total;
}

SymWord random_word(Rng& rng, const SpaceHandle& space, std::size_t n) {
  std::vector<Element> es;
  for (std::size_t i = 0; i < n; ++i) es.push_back(space->random_homogeneous(rng, 3));
  return SymWord(space, es);
}

}  // namespace

TEST_CASE("linfty relations") {
  CHECK(linfty_relations_check(G(), 4, 1).ok());
  CHECK(linfty_relations_check(fixture(), 3, 1).ok());
  CHECK(linfty_relations_check(G(), 1, 5, 20).ok());
  Rng rng(10);
  for (int s = 0; s < 5; ++s) {
    const auto space = make_finite_table_space(random_space_spec(rng));
    const auto report = linfty_relations_check(space, 4, 100 + s);
    CHECK_MESSAGE(report.ok(), report.to_string());
  }
  CHECK_THROWS_AS(linfty_relations_check(G(), 9, 0), SizeLimitError);
}

TEST_CASE("relations check reports failures as data") {
  // a degree-one coderivation that is not square zero: d = identity-like map
  const auto structure = transported_structure(G());
  const SymWord w(G(), {g("eta")});
  CHECK(G()->is_zero(square_component(structure, w)));
  RelationReport report;
  report.words_checked = 1;
  report.failures.push_back({1, "(eta)", "x"});
  CHECK_FALSE(report.ok());
  CHECK(report.to_string().find("arity 1 at (eta): x") != std::string::npos);
}

TEST_CASE("total moment examples") {
  CHECK(total_moment(G(), repeated(G(), g("x"), 4)) == 3);
  CHECK(total_moment(G(), repeated(G(), g("x"), 3)) == 0);
  CHECK(total_moment(G(), SymWord(G(), {*G()->unit()})) == 1);
  const auto fx = fixture();
  CHECK(total_moment(fx, SymWord(fx, {*fx->unit()})) == 1);
  CHECK(total_moment(fx, repeated(fx, *fx->generator("v"), 2)) == 1);
  for (std::size_t k = 1; k <= 12; ++k)
    CHECK(total_moment(G(), repeated(G(), g("x"), k)) == oracle::normal_moment(long(k)));
  CHECK_THROWS_AS(total_moment(fx, repeated(G(), g("x"), 2)), SpaceMismatchError);
}

TEST_CASE("total cumulant examples") {
  CHECK(total_cumulant(G(), repeated(G(), g("x"), 2)) == 1);
  CHECK(total_cumulant(G(), repeated(G(), g("x"), 4)) == 0);
  CHECK(total_cumulant(G(), repeated(G(), g("x"), 1)) == 0);
  CHECK(cumulant_partition_oracle(G(), repeated(G(), g("x"), 2)) == 1);
  CHECK(cumulant_partition_oracle(G(), repeated(G(), g("x"), 4)) == 0);
  CHECK(cumulant_partition_oracle(G(), SymWord(G(), {g("x^2 + 3")})) == 4);
  CHECK_THROWS_AS(total_cumulant(fixture(), repeated(G(), g("x"), 2)), SpaceMismatchError);
  CHECK_THROWS_AS(cumulant_partition_oracle(fixture(), repeated(G(), g("x"), 2)), SpaceMismatchError);
}

TEST_CASE("univariate cumulants match the classical recursion") {
  Rng rng(40);
  for (int s = 0; s < 6; ++s) {
    const Element f = GaussianElement::polynomial(random_polynomial(rng, 3));
    std::vector<Rational> m(7);
    for (std::size_t n = 1; n <= 6; ++n) m[n] = total_moment(G(), repeated(G(), f, n));
    const auto k = oracle::cumulants_from_moments(m);
    for (std::size_t n = 1; n <= 6; ++n) CHECK(total_cumulant(G(), repeated(G(), f, n)) == k[n]);
  }
}

TEST_CASE("cumulant oracle equivalence and moment-cumulant consistency") {
  Rng rng(41);
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto w = repeated(G(), g("x"), n);
    CHECK(total_cumulant(G(), w) == cumulant_partition_oracle(G(), w));
  }
  for (std::size_t n = 1; n <= 5; ++n) {
    for (int s = 0; s < 3; ++s) {
      const auto w = random_word(rng, G(), n);
      CHECK(total_cumulant(G(), w) == cumulant_partition_oracle(G(), w));
      CHECK(total_moment(G(), w) == moment_from_cumulants(G(), w));
    }
  }
  for (int sp = 0; sp < 4; ++sp) {
    const auto space = make_finite_table_space(random_space_spec(rng));
    for (std::size_t n = 1; n <= 6; ++n) {
      const auto w = random_word(rng, space, n);
      CHECK(total_cumulant(space, w) == cumulant_partition_oracle(space, w));
      if (n <= 5) CHECK(total_moment(space, w) == moment_from_cumulants(space, w));
    }
  }
}

TEST_CASE("is_morphism examples") {
  auto strict = [](std::string_view s) { return HRVCollection::strict(gaussian_space(), {g(s)}); };
  CHECK(is_morphism(strict("x"), G(), 5).ok);
  CHECK(is_morphism(strict("x^2"), G(), 4).ok);
  const auto eta = is_morphism(strict("eta"), G(), 5);
  CHECK_FALSE(eta.ok);
  CHECK(eta.failing_arity == 1u);
  CHECK(eta.to_string() == "fails at arity 1: d(eta) = -x");
  const auto xeta = is_morphism(strict("x*eta"), G(), 5);
  CHECK_FALSE(xeta.ok);
  CHECK(xeta.witness == "d(x*eta) = -x^2 + 1");
  CHECK(is_morphism(strict("x"), G(), 5).to_string() == "ok up to arity 5");
}

TEST_CASE("a closed arity-one part with a bad arity-two part is rejected") {
  const auto fx = fixture();
  HRVCollection x = HRVCollection::strict(fx, {*fx->generator("u")});
  x.components.emplace(std::vector<int>{0, 0}, *fx->generator("v"));
  const auto report = is_morphism(x, fx, 3);
  CHECK_FALSE(report.ok);
  CHECK(report.failing_arity == 2u);
  CHECK(report.witness == "(D^a X)(b1, b1) = w");
}

TEST_CASE("transport_chain_map examples") {
  const auto x = transport_chain_map({g("x")}, G(), 4);
  CHECK(G()->equal(x.components.at({0}), g("x")));
  CHECK(G()->equal(x.components.at({0, 0}), g("-x^2")));
  CHECK(G()->equal(x.components.at({0, 0, 0}), g("2*x^3")));
  CHECK(G()->equal(x.components.at({0, 0, 0, 0}), g("-6*x^4")));
  CHECK(is_morphism(x, G(), 4).ok);
  CHECK_THROWS_AS(transport_chain_map({g("eta")}, G()), PreconditionError);
  CHECK_THROWS_AS(transport_chain_map({g("x + eta")}, G()), PreconditionError);
  CHECK_THROWS_AS(transport_chain_map({}, G()), PreconditionError);

  const auto two = transport_chain_map({g("x"), g("x^2")}, G(), 3);
  CHECK(G()->equal(two.components.at({0, 1}), g("-x^3")));
  CHECK(is_morphism(two, G(), 3).ok);
}

TEST_CASE("joint moments and cumulants") {
  const auto x = HRVCollection::strict(G(), {g("x")});
  CHECK(joint_moment(x, G(), {0, 0, 0, 0}) == 3);
  CHECK(joint_moment(x, G(), {0}) == 0);
  CHECK(joint_cumulant(x, G(), {0, 0}) == 1);
  CHECK(joint_cumulant(x, G(), {0, 0, 0}) == 0);
  CHECK(joint_cumulant(x, G(), {0, 0, 0, 0}) == 0);
  const auto t = transport_chain_map({g("x")}, G(), 5);
  CHECK(joint_moment(t, G(), {0, 0}) == 0);

  const auto pair = HRVCollection::strict(G(), {g("x"), g("x^3")});
  // E(x * x^3) = 3, E(x^6) = 15, and the means vanish
  CHECK(joint_moment(pair, G(), {1, 0}) == 3);
  CHECK(joint_moment(pair, G(), {1, 1}) == 15);
  CHECK(joint_cumulant(pair, G(), {0, 1}) == 3);
  const auto centred = HRVCollection::strict(G(), {g("x"), g("x^2 - 1")});
  CHECK(joint_moment(centred, G(), {0, 1}) == 0);
  CHECK(joint_moment(centred, G(), {1, 1}) == 2);
  CHECK_THROWS_AS(joint_moment(pair, G(), {2}), ValidationError);
  CHECK_THROWS_AS(joint_moment(pair, G(), {}), ValidationError);
}

TEST_CASE("joint statistics refuse non-morphisms") {
  const auto fx = fixture();
  const auto v = HRVCollection::strict(fx, {*fx->generator("v")});
  CHECK_THROWS_AS(joint_moment(v, fx, {0}), MorphismError);
  CHECK_THROWS_AS(joint_cumulant(HRVCollection::strict(G(), {g("eta")}), G(), {0}), MorphismError);
  CHECK_THROWS_AS(joint_statistics(v, fx, 2), MorphismError);
}

TEST_CASE("transported chain maps collapse to the expectation") {
  Rng rng(50);
  for (int s = 0; s < 5; ++s) {
    const Element f = GaussianElement::polynomial(random_polynomial(rng, 4));
    const auto x = transport_chain_map({f}, G(), 5);
    const auto stats = joint_statistics(x, G(), 5);
    CHECK(stats.moments.at({0}) == G()->expectation(f));
    for (std::size_t n = 2; n <= 5; ++n) CHECK(stats.moments.at(std::vector<int>(n, 0)) == 0);
  }
}

TEST_CASE("collections validate their components") {
  HRVCollection bad = HRVCollection::strict(G(), {g("x")});
  bad.components.emplace(std::vector<int>{0, 0}, g("x"));  // arity 2 value of degree 0: allowed
  CHECK_NOTHROW(bad.as_morphism(G()));
  HRVCollection wrong;
  wrong.var_degrees = {0};
  wrong.components.emplace(std::vector<int>{0}, g("eta"));
  wrong.var_degrees = {1};
  CHECK_THROWS_AS(wrong.as_morphism(G()), ValidationError);
  HRVCollection out_of_range;
  out_of_range.var_degrees = {0};
  out_of_range.components.emplace(std::vector<int>{1}, g("x"));
  CHECK_THROWS_AS(out_of_range.as_morphism(G()), ValidationError);
}

TEST_CASE("collections with an odd source variable") {
  // a degree-(-1) variable sent to eta; X(b1, b1) must vanish by symmetry
  HRVCollection x;
  x.var_degrees = {-1};
  x.components.emplace(std::vector<int>{0}, g("eta"));
  const auto m = x.as_morphism(G());
  const auto& src = static_cast<const FiniteTableSpace&>(*m.source());
  const SymWord w(m.source(), {src.basis_vector(0), src.basis_vector(0)});
  CHECK(G()->is_zero(m(w)));
  CHECK_FALSE(is_morphism(x, G(), 2).ok);
}

TEST_CASE("multisets") {
  CHECK(multisets(2, 3).size() == 4);
  CHECK(multisets(3, 2).size() == 6);
  CHECK(multisets(1, 4) == std::vector<std::vector<int>>{{0, 0, 0, 0}});
  CHECK(multisets(0, 2).empty());
}

TEST_CASE("perturb_expectation") {
  const auto fx = fixture();
  ChainHomotopy h;
  h.values["w"] = Rational(5, 2);
  const auto moved = perturb_expectation(fx, h);
  CHECK(moved->expectation(*fx->generator("v")) == Rational(5, 2));
  CHECK(moved->expectation(*fx->generator("u")) == 1);
  CHECK(moved->check_axioms(0).valid());
  const auto same = perturb_expectation(fx, ChainHomotopy{});
  for (const char* name : {"u", "v", "w"})
    CHECK(same->expectation(*fx->generator(name)) == fx->expectation(*fx->generator(name)));
  CHECK(perturb_expectation(G(), ChainHomotopy{}) == G());
  ChainHomotopy off;
  off.values["v"] = 1;
  CHECK_THROWS_AS(perturb_expectation(fx, off), SpecError);
  ChainHomotopy unknown;
  unknown.values["z"] = 1;
  CHECK_THROWS_AS(perturb_expectation(fx, unknown), SpecError);
  CHECK_THROWS_AS(perturb_expectation(G(), h), SpecError);
}

TEST_CASE("homotopy invariance on the fixture") {
  const auto fx = fixture();
  const auto collections = search_hrv_collections(fx, 4);
  REQUIRE(collections.size() >= 3);
  for (const auto& c : collections) CHECK(is_morphism(c, fx, 4).ok);
  for (int t : {1, -2, 7}) {
    ChainHomotopy h;
    h.values["w"] = t;
    const auto report = homotopy_invariance_check(fx, h, collections, 4);
    CHECK_MESSAGE(report.ok(), report.to_string());
    REQUIRE(report.shifted_expectation.has_value());
    CHECK(report.shifted_expectation->find("E(v) = 0") != std::string::npos);
  }
  CHECK_THROWS_AS(homotopy_invariance_check(fx, ChainHomotopy{}, {HRVCollection::strict(fx, {*fx->generator("v")})}, 2),
                  PreconditionError);
}

TEST_CASE("homotopy invariance on random spaces") {
  Rng rng(60);
  int tested = 0;
  for (int s = 0; s < 12 && tested < 4; ++s) {
    const auto space = make_finite_table_space(random_space_spec(rng));
    const auto h = random_chain_homotopy(space, rng);
    if (h.values.empty()) continue;
    ++tested;
    const auto report = homotopy_invariance_check(space, h, search_hrv_collections(space, 3), 3);
    CHECK_MESSAGE(report.ok(), report.to_string());
  }
  CHECK(tested > 0);
}

TEST_CASE("the moment harness detects a non-invariant change") {
  // moments of a non-closed element really do move under h
  const auto fx = fixture();
  ChainHomotopy h;
  h.values["w"] = 1;
  const auto moved = perturb_expectation(fx, h);
  const SymWord vv(fx, {*fx->generator("v")});
  const SymWord vv_moved(moved, {*moved->generator("v")});
  CHECK(total_moment(fx, vv) != total_moment(moved, vv_moved));
}

TEST_CASE("search requires a finite-table space") {
  CHECK_THROWS_AS(search_hrv_collections(G(), 3), PreconditionError);
}
