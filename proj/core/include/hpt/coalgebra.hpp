#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hpt/limits.hpp"
#include "hpt/space.hpp"

namespace hpt {

/// An ordered representative of an element of S^n V: homogeneous entries
/// with their degrees. Permuting the entries changes the represented element
/// by the Koszul sign; nothing is normalized implicitly.
class SymWord {
 public:
  /// Throws ValidationError for arity zero or a mixed-degree entry. Zero
  /// entries are allowed and given degree 0.
  SymWord(SpaceHandle space, std::vector<Element> entries);

  const SpaceHandle& space() const noexcept { return space_; }
  std::size_t arity() const noexcept { return entries_.size(); }
  const Element& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<Element>& entries() const noexcept { return entries_; }
  const std::vector<int>& degrees() const noexcept { return degrees_; }
  int total_degree() const noexcept;
  bool has_zero_entry() const;

  SymWord select(std::span<const int> positions) const;
  SymWord replaced(std::size_t position, Element entry, int degree) const;

  /// `(eta, x)`.
  std::string to_string() const;

 private:
  SymWord(SpaceHandle space, std::vector<Element> entries, std::vector<int> degrees);
  friend SymWord make_word_unchecked(SpaceHandle, std::vector<Element>, std::vector<int>);

  SpaceHandle space_;
  std::vector<Element> entries_;
  std::vector<int> degrees_;
};

/// Builds a word with known degrees, skipping the homogeneity scan.
SymWord make_word_unchecked(SpaceHandle space, std::vector<Element> entries, std::vector<int> degrees);

/// Distributes mixed-degree entries over their homogeneous parts. Returns an
/// empty list when some entry is zero.
std::vector<SymWord> expand_homogeneous(const SpaceHandle& space, const std::vector<Element>& entries);

/// Blocks are 0-based, sorted, and ordered by their minimal element.
struct SetPartition {
  std::vector<std::vector<int>> blocks;

  std::size_t size() const noexcept { return blocks.size(); }
  bool is_discrete(std::size_t n) const noexcept { return blocks.size() == n; }
  /// Concatenation of the blocks: the unshuffle permutation.
  std::vector<int> flattened() const;
};

std::uint64_t bell_number(std::size_t n);

/// Calls `fn` once per set partition of {0..n-1}, in restricted-growth order.
/// Throws SizeLimitError when n is zero or exceeds `limits.partition_cap`.
void for_each_set_partition(std::size_t n, const std::function<void(const SetPartition&)>& fn,
                            const Limits& limits = {});
std::vector<SetPartition> set_partitions(std::size_t n, const Limits& limits = {});

/// Sign of reordering graded entries: position k of the result holds entry
/// permutation[k]. Each inverted pair (i, j) contributes (-1)^(deg_i deg_j).
/// Throws ValidationError unless `permutation` is a bijection on 0..n-1 with
/// n = degrees.size().
int koszul_sign(std::span<const int> permutation, std::span<const int> degrees);
int unshuffle_sign(const SetPartition& partition, std::span<const int> degrees);

using ComponentFn = std::function<Element(const SymWord&)>;
using CoefficientFn = std::function<Rational(std::size_t)>;

/// The arity components of a coalgebra map SV -> SV' (degree 0) or of a
/// coderivation (degree 1), evaluated lazily on words.
///
/// Optional metadata lets composition and inversion skip work:
///  - `arity_bound`: components of larger arity vanish;
///  - `product_coefficients`: component n is c_n times the n-fold product of
///    the source space (source == target).
class MorphismComponents {
 public:
  MorphismComponents(SpaceHandle source, SpaceHandle target, int degree, ComponentFn fn);

  const SpaceHandle& source() const noexcept { return source_; }
  const SpaceHandle& target() const noexcept { return target_; }
  int degree() const noexcept { return degree_; }

  bool unital_first_component() const noexcept { return unital_; }
  std::optional<std::size_t> arity_bound() const noexcept { return arity_bound_; }
  const CoefficientFn* product_coefficients() const noexcept {
    return product_coeffs_ ? &*product_coeffs_ : nullptr;
  }

  MorphismComponents& mark_unital(bool unital = true) {
    unital_ = unital;
    return *this;
  }
  MorphismComponents& bound_arity(std::size_t bound) {
    arity_bound_ = bound;
    return *this;
  }

  /// The component of arity w.arity() applied to w. Throws
  /// SpaceMismatchError if w does not live in the source space.
  Element operator()(const SymWord& w) const;

  /// Convenience for arity one.
  Element apply(const Element& e) const;

  friend MorphismComponents product_type_morphism(SpaceHandle space, CoefficientFn coefficients);

 private:
  SpaceHandle source_;
  SpaceHandle target_;
  int degree_;
  ComponentFn fn_;
  bool unital_ = false;
  std::optional<std::size_t> arity_bound_;
  std::optional<CoefficientFn> product_coeffs_;
};

/// Component n = c_n * (w_1 ... w_n). Unital iff c_1 = 1.
MorphismComponents product_type_morphism(SpaceHandle space, CoefficientFn coefficients);

/// The coalgebra isomorphism whose n-th component is n-fold multiplication
/// (identity in arity one).
MorphismComponents multiplication_morphism(const SpaceHandle& space);
MorphismComponents identity_morphism(const SpaceHandle& space);

/// Only the arity-one component is nonzero.
MorphismComponents strict_morphism(SpaceHandle source, SpaceHandle target, int degree,
                                   std::function<Element(const Element&)> map);

/// The strict lift of the expectation, V -> scalar line.
MorphismComponents expectation_morphism(const SpaceHandle& space);

/// (G F)_n(w) = sum over partitions pi of {1..n} of
///   eps(pi, w) * G_|pi|(F(w_B1), ..., F(w_Bk))
/// with blocks ordered by their minimal element and eps the Koszul sign of the
/// unshuffle. F must have degree 0; G may be a coderivation component.
Element compose_coalgebra(const MorphismComponents& g, const MorphismComponents& f, const SymWord& w,
                          const Limits& limits = {});
MorphismComponents compose_coalgebra(const MorphismComponents& g, const MorphismComponents& f,
                                     const Limits& limits = {});

/// Inverse of a coalgebra map with identity first component, via
///   (F^-1)_n(w) = - sum_{pi not discrete} eps(pi, w) (F^-1)_|pi|(F(w_B1), ...).
/// Throws InversionError if F is not marked unital.
MorphismComponents invert_coalgebra(const MorphismComponents& f, const Limits& limits = {});

/// Coefficients of the inverse of a product-type map, by the same recursion
/// on scalars. coefficients[n-1] is the inverse's arity-n coefficient.
std::vector<Rational> inverse_product_coefficients(const CoefficientFn& coefficients, std::size_t max_arity,
                                                   const Limits& limits = {});

struct SignedWord {
  int sign;
  SymWord word;
};

/// Extension of a degree-one map d to a coderivation on a word:
///   sum_i (-1)^(|w_1| + ... + |w_{i-1}|) (w_1, ..., d(w_i), ..., w_n).
/// Summands with d(w_i) = 0 are dropped.
std::vector<SignedWord> coderivation_extend(const std::function<Element(const Element&)>& d, const SymWord& w);

enum class Convention {
  /// Graded-symmetric components d_n on S^n V.
  Symmetric,
  /// Bracket components l_n(w) = (-1)^(sum_i (n-i)|w_i|) d_n(w); at arity two
  /// l_2(u, v) = (-1)^|u| d_2(u, v), graded antisymmetric in shifted degrees.
  Bracket,
};

int bracket_sign(std::span<const int> degrees);

/// The transported structure d^a = a^-1 D a as a degree-one family of
/// graded-symmetric components V^n -> V. Arities above
/// `limits.transport_cap` throw SizeLimitError.
MorphismComponents transported_structure(const SpaceHandle& space, const Limits& limits = {});

/// Arity-n component of the transported structure at w, computed by pushing
/// w through a, extending d as a coderivation, and applying a^-1.
Element transport_structure(const SpaceHandle& space, const SymWord& w, Convention convention = Convention::Bracket,
                            const Limits& limits = {});

/// Same, for words with mixed-degree entries (distributed linearly).
Element transport_structure(const SpaceHandle& space, const std::vector<Element>& entries,
                            Convention convention = Convention::Bracket, const Limits& limits = {});

}  // namespace hpt
