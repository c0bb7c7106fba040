#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hpt/coalgebra.hpp"
#include "hpt/limits.hpp"
#include "hpt/space.hpp"

namespace hpt {

// ---------------------------------------------------------------------------
// L-infinity relations

/// Arity-n component of D o D for the coderivation with components
/// `structure`:  sum over nonempty B of eps(B, rest) d(d(w_B), w_rest).
Element square_component(const MorphismComponents& structure, const SymWord& w);

struct RelationFailure {
  std::size_t arity;
  std::string word;
  std::string value;
};

struct RelationReport {
  std::size_t words_checked = 0;
  std::vector<RelationFailure> failures;

  bool ok() const noexcept { return failures.empty(); }
  std::string to_string() const;
};

/// Evaluates (D^a o D^a)_n on `samples_per_arity` seeded random words for
/// every n <= max_arity. Failures are report content, not exceptions.
RelationReport linfty_relations_check(const SpaceHandle& space, std::size_t max_arity, std::uint64_t seed,
                                      std::size_t samples_per_arity = 6, int max_poly_degree = 3,
                                      const Limits& limits = {});

// ---------------------------------------------------------------------------
// Moments and cumulants

/// M = E o a: m_n(w) = E(w_1 ... w_n).
MorphismComponents total_moment_morphism(const SpaceHandle& space, const Limits& limits = {});
/// K = (a')^-1 o E o a, with a' the multiplication of the scalar line.
MorphismComponents total_cumulant_morphism(const SpaceHandle& space, const Limits& limits = {});

Rational total_moment(const SpaceHandle& space, const SymWord& w, const Limits& limits = {});
Rational total_cumulant(const SpaceHandle& space, const SymWord& w, const Limits& limits = {});

/// Moebius inversion on the partition lattice, independent of the coalgebra
/// machinery:  sum_pi eps(pi, w) (-1)^(|pi|-1) (|pi|-1)! prod_B E(prod w_B).
Rational cumulant_partition_oracle(const SpaceHandle& space, const SymWord& w, const Limits& limits = {});

// ---------------------------------------------------------------------------
// Homotopy random variables

/// Components of an L-infinity map (Q^n, 0) -> (V, D^a), indexed by sorted
/// multisets of 0-based variable indices. Missing multisets are zero.
struct HRVCollection {
  std::vector<int> var_degrees;
  std::map<std::vector<int>, Element> components;

  std::size_t n_vars() const noexcept { return var_degrees.size(); }

  /// Only arity-one components: b_i -> values[i].
  static HRVCollection strict(const SpaceHandle& space, const std::vector<Element>& values);

  /// The collection as a degree-0 coalgebra map from trivial_space(var_degrees).
  /// Throws ValidationError if a component has the wrong degree.
  MorphismComponents as_morphism(const SpaceHandle& space) const;
};

/// Non-decreasing index lists of the given size over 0..n_vars-1.
std::vector<std::vector<int>> multisets(std::size_t n_vars, std::size_t size);

struct MorphismReport {
  bool ok = true;
  std::size_t checked_arity = 0;
  std::optional<std::size_t> failing_arity;
  std::string witness;

  /// `ok up to arity 5` or `fails at arity 1: d(eta) = -x`.
  std::string to_string() const;
};

/// Checks D^a X = 0 on every multiset of variables up to max_arity.
MorphismReport is_morphism(const HRVCollection& x, const SpaceHandle& space, std::size_t max_arity,
                           const Limits& limits = {});

/// The transport a^-1 o F of the chain map b_i -> values[i], truncated at
/// `arity`. Throws PreconditionError for non-closed or mixed-degree values.
HRVCollection transport_chain_map(const std::vector<Element>& values, const SpaceHandle& space,
                                  std::size_t arity = 6, const Limits& limits = {});

/// Component at `indices` (0-based multiset) of M o X. Throws MorphismError
/// when X fails is_morphism up to indices.size().
Rational joint_moment(const HRVCollection& x, const SpaceHandle& space, std::vector<int> indices,
                      const Limits& limits = {});
Rational joint_cumulant(const HRVCollection& x, const SpaceHandle& space, std::vector<int> indices,
                        const Limits& limits = {});

struct JointStatistics {
  std::map<std::vector<int>, Rational> moments;
  std::map<std::vector<int>, Rational> cumulants;
};

/// All joint moments and cumulants up to max_arity, after a single morphism check.
JointStatistics joint_statistics(const HRVCollection& x, const SpaceHandle& space, std::size_t max_arity,
                                 const Limits& limits = {});

// ---------------------------------------------------------------------------
// Homotopies of the expectation

/// A functional on the degree-1 basis elements; zero elsewhere.
struct ChainHomotopy {
  std::map<std::string, Rational> values;
};

/// The same space with E' = E + h o d. Throws SpecError if h touches a basis
/// element outside degree 1 or (for the Gaussian space, which has no degree-1
/// part) if h is nonzero.
SpaceHandle perturb_expectation(const SpaceHandle& space, const ChainHomotopy& h);

ChainHomotopy random_chain_homotopy(const SpaceHandle& space, Rng& rng);

struct InvarianceReport {
  std::size_t collections = 0;
  std::size_t comparisons = 0;
  std::vector<std::string> mismatches;
  /// An element whose plain expectation moves under the homotopy.
  std::optional<std::string> shifted_expectation;

  bool ok() const noexcept { return mismatches.empty() && shifted_expectation.has_value(); }
  std::string to_string() const;
};

/// Compares joint moments and cumulants under E and E + h o d for every
/// collection and every multiset up to max_arity. Throws PreconditionError if a
/// collection is not a morphism up to max_arity.
InvarianceReport homotopy_invariance_check(const SpaceHandle& space, const ChainHomotopy& h,
                                           const std::vector<HRVCollection>& collections, std::size_t max_arity,
                                           const Limits& limits = {});

/// Bounded search for collections passing is_morphism up to max_arity.
/// Closed values are {-1, 0, 1} combinations of a basis of ker d in degree 0;
/// extra arity-2 components are {-1, 0, 1} combinations of the degree-0
/// basis. Yields strict collections, ones with an arity-2 component, and
/// transported chain maps. Finite-table spaces only.
std::vector<HRVCollection> search_hrv_collections(const SpaceHandle& space, std::size_t max_arity,
                                                  std::size_t max_results = 12, const Limits& limits = {});

}  // namespace hpt
