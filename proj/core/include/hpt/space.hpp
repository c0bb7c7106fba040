#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "hpt/gaussian_element.hpp"
#include "hpt/random.hpp"
#include "hpt/rational.hpp"

namespace hpt {

enum class Backend { FiniteTable, Gaussian };

/// Coefficient vector over the basis of a finite-table space.
struct TableVector {
  std::vector<Rational> coeffs;
  friend bool operator==(const TableVector&, const TableVector&) = default;
};

using Element = std::variant<TableVector, GaussianElement>;

struct Violation {
  std::string identity;
  std::string witness;
};

/// Outcome of checking the space axioms. Deterministic for a given input and seed.
struct ValidationReport {
  std::size_t checks = 0;
  std::vector<Violation> violations;

  bool valid() const noexcept { return violations.empty(); }
  std::string to_string() const;
};

/// A commutative homotopy probability space: a chain complex (V, d) with an
/// expectation chain map V -> Q and a graded-commutative associative product.
///
/// Elements are passed by value as `Element`; every operation checks that the
/// element belongs to this backend and throws SpaceMismatchError otherwise.
/// Mixed-degree elements are accepted everywhere and handled linearly.
class Space {
 public:
  virtual ~Space() = default;

  virtual Backend backend() const noexcept = 0;
  virtual std::string name() const = 0;

  virtual Element zero() const = 0;
  virtual std::optional<Element> unit() const = 0;
  virtual Element add(const Element& a, const Element& b) const = 0;
  virtual Element scale(const Rational& c, const Element& a) const = 0;
  virtual Element differential(const Element& a) const = 0;
  virtual Element product(const Element& a, const Element& b) const = 0;
  virtual Rational expectation(const Element& a) const = 0;
  virtual bool is_zero(const Element& a) const = 0;

  /// Homogeneous components in ascending degree; empty for zero.
  virtual std::vector<std::pair<int, Element>> homogeneous_parts(const Element& a) const = 0;

  /// Canonical text form; parses back through parse_expression.
  virtual std::string format(const Element& a) const = 0;

  /// Generators usable in expressions (`x`, `eta`, or basis names).
  virtual std::optional<Element> generator(std::string_view name) const = 0;

  /// A nonzero homogeneous element. Polynomial backends cap their degree at
  /// `max_poly_degree`; finite-table spaces ignore it.
  virtual Element random_homogeneous(Rng& rng, int max_poly_degree) const = 0;

  virtual ValidationReport check_axioms(std::uint64_t seed) const = 0;

  Element subtract(const Element& a, const Element& b) const { return add(a, scale(-1, b)); }
  Element negate(const Element& a) const { return scale(-1, a); }
  bool equal(const Element& a, const Element& b) const { return is_zero(subtract(a, b)); }

  /// Degree of a homogeneous element; nullopt for zero. Throws
  /// ValidationError for mixed elements.
  std::optional<int> degree(const Element& a) const;
  bool is_homogeneous(const Element& a) const { return homogeneous_parts(a).size() <= 1; }
};

using SpaceHandle = std::shared_ptr<const Space>;

// ---------------------------------------------------------------------------
// Finite-table backend

struct BasisEntry {
  std::string name;
  int degree = 0;
};

struct Term {
  std::string basis;
  Rational coeff;
};

struct ProductRule {
  std::string left;
  std::string right;
  std::vector<Term> out;
};

struct DifferentialRule {
  std::string in;
  std::vector<Term> out;
};

/// Sparse description of a finite-dimensional space, mirroring the JSON file.
///
/// Omitted entries are zero, with two conveniences: a product given for only
/// one ordering of a pair determines the other by graded symmetry, and
/// products involving the unit default to the unit law.
struct SpaceSpec {
  std::vector<BasisEntry> basis;
  std::optional<std::string> unit;
  std::vector<ProductRule> product;
  std::vector<DifferentialRule> differential;
  std::vector<Term> expectation;
};

SpaceSpec parse_space_json(std::string_view text);
SpaceSpec load_space_file(const std::filesystem::path& path);
std::string to_json(const SpaceSpec& spec);

class FiniteTableSpace final : public Space {
 public:
  /// Throws SpecError for duplicate or unknown names, or a missing unit.
  explicit FiniteTableSpace(SpaceSpec spec, std::string name = "table");

  Backend backend() const noexcept override { return Backend::FiniteTable; }
  std::string name() const override { return name_; }

  Element zero() const override;
  std::optional<Element> unit() const override;
  Element add(const Element& a, const Element& b) const override;
  Element scale(const Rational& c, const Element& a) const override;
  Element differential(const Element& a) const override;
  Element product(const Element& a, const Element& b) const override;
  Rational expectation(const Element& a) const override;
  bool is_zero(const Element& a) const override;
  std::vector<std::pair<int, Element>> homogeneous_parts(const Element& a) const override;
  std::string format(const Element& a) const override;
  std::optional<Element> generator(std::string_view name) const override;
  Element random_homogeneous(Rng& rng, int max_poly_degree) const override;
  ValidationReport check_axioms(std::uint64_t seed) const override;

  const SpaceSpec& spec() const noexcept { return spec_; }
  std::size_t dimension() const noexcept { return degrees_.size(); }
  const std::string& basis_name(std::size_t i) const { return spec_.basis.at(i).name; }
  int basis_degree(std::size_t i) const { return degrees_.at(i); }
  std::optional<std::size_t> index_of(std::string_view name) const;
  std::optional<std::size_t> unit_index() const noexcept { return unit_; }
  Element basis_vector(std::size_t i) const;

  // Structure constants: b_i * b_j = sum_k product_constant(i, j, k) b_k.
  const Rational& product_constant(std::size_t i, std::size_t j, std::size_t k) const {
    return prod_[(i * dimension() + j) * dimension() + k];
  }
  // d(b_i) = sum_k differential_entry(i, k) b_k.
  const Rational& differential_entry(std::size_t i, std::size_t k) const {
    return diff_[i * dimension() + k];
  }

 private:
  const TableVector& get(const Element& a) const;

  SpaceSpec spec_;
  std::string name_;
  std::vector<int> degrees_;
  std::optional<std::size_t> unit_;
  std::vector<Rational> prod_;
  std::vector<Rational> diff_;
  std::vector<Rational> expect_;
};

SpaceHandle make_finite_table_space(SpaceSpec spec, std::string name = "table");

/// The ground field as a space: one basis vector `1` in degree 0, E = id.
SpaceHandle scalar_line();
Element scalar_element(const Rational& c);
/// Coefficient of a scalar-line element.
Rational scalar_value(const Element& e);

/// (Q^n, 0) with basis b1..bn in the given degrees, zero product and zero
/// expectation: the source of a collection of random variables.
SpaceHandle trivial_space(std::vector<int> degrees);

/// Checks every axiom on basis elements, pairs and triples. Throws SpecError
/// if the spec is malformed (as opposed to failing an axiom).
ValidationReport validate_space(const SpaceSpec& spec);
ValidationReport validate_space(const SpaceHandle& space, std::uint64_t seed = 0);

/// {u(0) unit, v(0), w(1)} with d(v) = w, v*v = u, v*w = w, E(u) = 1.
SpaceSpec fixture_space_spec();

/// A random valid space with at most four basis elements, a unit and a
/// nonzero degree-1 part. Structure constants are conjugated by a random
/// change of basis fixing the unit.
SpaceSpec random_space_spec(Rng& rng);

}  // namespace hpt
