#include "hpt/linfty.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "hpt/errors.hpp"

namespace hpt {

// ---------------------------------------------------------------------------
// Relations

Element square_component(const MorphismComponents& structure, const SymWord& w) {
  const Space& space = *w.space();
  const std::size_t n = w.arity();
  Element total = space.zero();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<int> inner, rest;
    for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1 ? inner : rest).push_back(static_cast<int>(i));
    const SymWord inner_word = w.select(inner);
    Element inner_value = structure(inner_word);
    if (space.is_zero(inner_value)) continue;
    std::vector<int> order = inner;
    order.insert(order.end(), rest.begin(), rest.end());
    const int eps = koszul_sign(order, w.degrees());
    std::vector<Element> entries{std::move(inner_value)};
    std::vector<int> degrees{inner_word.total_degree() + structure.degree()};
    for (int i : rest) {
      entries.push_back(w[static_cast<std::size_t>(i)]);
      degrees.push_back(w.degrees()[static_cast<std::size_t>(i)]);
    }
    Element value = structure(make_word_unchecked(w.space(), std::move(entries), std::move(degrees)));
    total = space.add(total, space.scale(eps, value));
  }
  return total;
}

std::string RelationReport::to_string() const {
  std::ostringstream out;
  if (ok()) {
    out << "D∘D = 0 on " << words_checked << " words";
    return out.str();
  }
  out << failures.size() << " of " << words_checked << " words violate D∘D = 0";
  for (const auto& f : failures) out << "\n  arity " << f.arity << " at " << f.word << ": " << f.value;
  return out.str();
}

RelationReport linfty_relations_check(const SpaceHandle& space, std::size_t max_arity, std::uint64_t seed,
                                      std::size_t samples_per_arity, int max_poly_degree, const Limits& limits) {
  if (max_arity == 0 || max_arity > limits.transport_cap)
    throw SizeLimitError("relation check arity must lie in 1.." + std::to_string(limits.transport_cap));
  const MorphismComponents structure = transported_structure(space, limits);
  Rng rng(seed);
  RelationReport report;
  for (std::size_t n = 1; n <= max_arity; ++n) {
    for (std::size_t s = 0; s < samples_per_arity; ++s) {
      std::vector<Element> entries;
      for (std::size_t i = 0; i < n; ++i) entries.push_back(space->random_homogeneous(rng, max_poly_degree));
      const SymWord w(space, std::move(entries));
      const Element value = square_component(structure, w);
      ++report.words_checked;
      if (!space->is_zero(value)) report.failures.push_back({n, w.to_string(), space->format(value)});
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Moments and cumulants

MorphismComponents total_moment_morphism(const SpaceHandle& space, const Limits& limits) {
  return compose_coalgebra(expectation_morphism(space), multiplication_morphism(space), limits);
}

MorphismComponents total_cumulant_morphism(const SpaceHandle& space, const Limits& limits) {
  const MorphismComponents scalar_inverse = invert_coalgebra(multiplication_morphism(scalar_line()), limits);
  return compose_coalgebra(scalar_inverse, total_moment_morphism(space, limits), limits);
}

namespace {

void check_word_space(const SpaceHandle& space, const SymWord& w) {
  if (w.space().get() != space.get())
    throw SpaceMismatchError("word lives in '" + w.space()->name() + "', expected '" + space->name() + "'");
}

}  // namespace

Rational total_moment(const SpaceHandle& space, const SymWord& w, const Limits& limits) {
  check_word_space(space, w);
  return scalar_value(total_moment_morphism(space, limits)(w));
}

Rational total_cumulant(const SpaceHandle& space, const SymWord& w, const Limits& limits) {
  check_word_space(space, w);
  return scalar_value(total_cumulant_morphism(space, limits)(w));
}

Rational cumulant_partition_oracle(const SpaceHandle& space, const SymWord& w, const Limits& limits) {
  check_word_space(space, w);
  Rational total = 0;
  for_each_set_partition(
      w.arity(),
      [&](const SetPartition& pi) {
        const std::size_t k = pi.size();
        Rational term = factorial(static_cast<unsigned>(k - 1));
        if (k % 2 == 0) term = -term;
        term *= unshuffle_sign(pi, w.degrees());
        for (const auto& block : pi.blocks) {
          Element prod = w[static_cast<std::size_t>(block[0])];
          for (std::size_t i = 1; i < block.size(); ++i) prod = space->product(prod, w[static_cast<std::size_t>(block[i])]);
          term *= space->expectation(prod);
          if (term == 0) return;
        }
        total += term;
      },
      limits);
  return total;
}

// ---------------------------------------------------------------------------
// Collections

std::vector<std::vector<int>> multisets(std::size_t n_vars, std::size_t size) {
  std::vector<std::vector<int>> out;
  if (n_vars == 0 || size == 0) return out;
  std::vector<int> current(size, 0);
  for (;;) {
    out.push_back(current);
    std::size_t i = size;
    while (i > 0 && current[i - 1] == static_cast<int>(n_vars) - 1) --i;
    if (i == 0) return out;
    const int next = current[i - 1] + 1;
    for (std::size_t j = i - 1; j < size; ++j) current[j] = next;
  }
}

HRVCollection HRVCollection::strict(const SpaceHandle& space, const std::vector<Element>& values) {
  HRVCollection x;
  for (std::size_t i = 0; i < values.size(); ++i) {
    x.var_degrees.push_back(space->degree(values[i]).value_or(0));
    if (!space->is_zero(values[i])) x.components.emplace(std::vector<int>{static_cast<int>(i)}, values[i]);
  }
  return x;
}

MorphismComponents HRVCollection::as_morphism(const SpaceHandle& space) const {
  const std::size_t n = n_vars();
  for (const auto& [key, value] : components) {
    if (key.empty() || !std::is_sorted(key.begin(), key.end()) || key.front() < 0 ||
        static_cast<std::size_t>(key.back()) >= n)
      throw ValidationError("component index list must be a sorted multiset over the variables");
    const auto deg = space->degree(value);
    int expected = 0;
    for (int i : key) expected += var_degrees[static_cast<std::size_t>(i)];
    if (deg && *deg != expected)
      throw ValidationError("component " + space->format(value) + " has degree " + std::to_string(*deg) +
                            ", expected " + std::to_string(expected));
  }
  auto table = std::make_shared<const std::map<std::vector<int>, Element>>(components);
  const std::vector<int> degrees = var_degrees;
  const Space* target = space.get();
  return MorphismComponents(trivial_space(var_degrees), space, 0, [table, degrees, target](const SymWord& w) {
    const std::size_t arity = w.arity();
    std::vector<std::vector<std::pair<int, Rational>>> choices(arity);
    for (std::size_t i = 0; i < arity; ++i) {
      const auto& coeffs = std::get<TableVector>(w[i]).coeffs;
      for (std::size_t k = 0; k < coeffs.size(); ++k)
        if (coeffs[k] != 0) choices[i].emplace_back(static_cast<int>(k), coeffs[k]);
    }
    Element total = target->zero();
    std::vector<std::size_t> pick(arity, 0);
    for (;;) {
      std::vector<int> idx(arity);
      std::vector<int> idx_degrees(arity);
      Rational coeff = 1;
      for (std::size_t i = 0; i < arity; ++i) {
        idx[i] = choices[i][pick[i]].first;
        idx_degrees[i] = degrees[static_cast<std::size_t>(idx[i])];
        coeff *= choices[i][pick[i]].second;
      }
      std::vector<int> order(arity);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return idx[static_cast<std::size_t>(a)] < idx[static_cast<std::size_t>(b)];
      });
      std::vector<int> key;
      for (int o : order) key.push_back(idx[static_cast<std::size_t>(o)]);
      bool vanishes = false;
      for (std::size_t i = 1; i < arity; ++i)
        if (key[i] == key[i - 1] && (degrees[static_cast<std::size_t>(key[i])] & 1)) vanishes = true;
      if (!vanishes) {
        if (auto it = table->find(key); it != table->end())
          total = target->add(total, target->scale(coeff * koszul_sign(order, idx_degrees), it->second));
      }
      std::size_t i = 0;
      while (i < arity && ++pick[i] == choices[i].size()) pick[i++] = 0;
      if (i == arity) break;
    }
    return total;
  });
}

namespace {

std::string index_label(const std::vector<int>& idx) {
  std::string out = "(";
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ", ";
    out += "b" + std::to_string(idx[i] + 1);
  }
  return out + ")";
}

SymWord basis_word(const MorphismComponents& x, const std::vector<int>& idx) {
  const auto& table = static_cast<const FiniteTableSpace&>(*x.source());
  std::vector<Element> entries;
  std::vector<int> degrees;
  for (int i : idx) {
    entries.push_back(table.basis_vector(static_cast<std::size_t>(i)));
    degrees.push_back(table.basis_degree(static_cast<std::size_t>(i)));
  }
  return make_word_unchecked(x.source(), std::move(entries), std::move(degrees));
}

}  // namespace

std::string MorphismReport::to_string() const {
  if (ok) return "ok up to arity " + std::to_string(checked_arity);
  return "fails at arity " + std::to_string(*failing_arity) + ": " + witness;
}

MorphismReport is_morphism(const HRVCollection& x, const SpaceHandle& space, std::size_t max_arity,
                           const Limits& limits) {
  if (max_arity == 0 || max_arity > limits.transport_cap)
    throw SizeLimitError("morphism check arity must lie in 1.." + std::to_string(limits.transport_cap));
  const MorphismComponents structure = transported_structure(space, limits);
  const MorphismComponents xm = x.as_morphism(space);
  MorphismReport report;
  for (std::size_t n = 1; n <= max_arity; ++n) {
    for (const auto& idx : multisets(x.n_vars(), n)) {
      const Element value = compose_coalgebra(structure, xm, basis_word(xm, idx), limits);
      if (space->is_zero(value)) continue;
      report.ok = false;
      report.failing_arity = n;
      if (n == 1) {
        report.witness = "d(" + space->format(xm(basis_word(xm, idx))) + ") = " + space->format(value);
      } else {
        report.witness = "(D^a X)" + index_label(idx) + " = " + space->format(value);
      }
      return report;
    }
    report.checked_arity = n;
  }
  return report;
}

HRVCollection transport_chain_map(const std::vector<Element>& values, const SpaceHandle& space, std::size_t arity,
                                  const Limits& limits) {
  if (values.empty()) throw PreconditionError("transport_chain_map needs at least one value");
  HRVCollection x;
  for (const auto& v : values) {
    if (!space->is_homogeneous(v)) throw PreconditionError("value " + space->format(v) + " is not homogeneous");
    const Element dv = space->differential(v);
    if (!space->is_zero(dv))
      throw PreconditionError("value " + space->format(v) + " is not closed: d(" + space->format(v) +
                              ") = " + space->format(dv));
    x.var_degrees.push_back(space->degree(v).value_or(0));
  }
  const MorphismComponents a_inverse = invert_coalgebra(multiplication_morphism(space), limits);
  for (std::size_t k = 1; k <= arity; ++k) {
    for (const auto& idx : multisets(values.size(), k)) {
      std::vector<Element> entries;
      std::vector<int> degrees;
      for (int i : idx) {
        entries.push_back(values[static_cast<std::size_t>(i)]);
        degrees.push_back(x.var_degrees[static_cast<std::size_t>(i)]);
      }
      Element value = a_inverse(make_word_unchecked(space, std::move(entries), std::move(degrees)));
      if (!space->is_zero(value)) x.components.emplace(idx, std::move(value));
    }
  }
  return x;
}

JointStatistics joint_statistics(const HRVCollection& x, const SpaceHandle& space, std::size_t max_arity,
                                 const Limits& limits) {
  const MorphismReport report = is_morphism(x, space, max_arity, limits);
  if (!report.ok)
    throw MorphismError("not an L-infinity morphism (" + report.to_string() +
                        "); its moments are not homotopy invariant");
  const MorphismComponents xm = x.as_morphism(space);
  const MorphismComponents m = total_moment_morphism(space, limits);
  const MorphismComponents k = total_cumulant_morphism(space, limits);
  JointStatistics stats;
  for (std::size_t n = 1; n <= max_arity; ++n) {
    for (const auto& idx : multisets(x.n_vars(), n)) {
      const SymWord w = basis_word(xm, idx);
      stats.moments.emplace(idx, scalar_value(compose_coalgebra(m, xm, w, limits)));
      stats.cumulants.emplace(idx, scalar_value(compose_coalgebra(k, xm, w, limits)));
    }
  }
  return stats;
}

namespace {

Rational joint_component(const HRVCollection& x, const SpaceHandle& space, std::vector<int> indices, bool cumulant,
                         const Limits& limits) {
  if (indices.empty()) throw ValidationError("joint moments need at least one index");
  std::sort(indices.begin(), indices.end());
  if (indices.front() < 0 || static_cast<std::size_t>(indices.back()) >= x.n_vars())
    throw ValidationError("variable index out of range");
  const MorphismReport report = is_morphism(x, space, indices.size(), limits);
  if (!report.ok)
    throw MorphismError("not an L-infinity morphism (" + report.to_string() +
                        "); its moments are not homotopy invariant");
  const MorphismComponents xm = x.as_morphism(space);
  const MorphismComponents outer = cumulant ? total_cumulant_morphism(space, limits) : total_moment_morphism(space, limits);
  return scalar_value(compose_coalgebra(outer, xm, basis_word(xm, indices), limits));
}

}  // namespace

Rational joint_moment(const HRVCollection& x, const SpaceHandle& space, std::vector<int> indices,
                      const Limits& limits) {
  return joint_component(x, space, std::move(indices), false, limits);
}

Rational joint_cumulant(const HRVCollection& x, const SpaceHandle& space, std::vector<int> indices,
                        const Limits& limits) {
  return joint_component(x, space, std::move(indices), true, limits);
}

// ---------------------------------------------------------------------------
// Homotopies

SpaceHandle perturb_expectation(const SpaceHandle& space, const ChainHomotopy& h) {
  const auto* table = dynamic_cast<const FiniteTableSpace*>(space.get());
  if (table == nullptr) {
    for (const auto& [name, value] : h.values)
      if (value != 0) throw SpecError("space '" + space->name() + "' has no degree-1 part; only h = 0 is admissible");
    return space;
  }
  std::vector<Rational> h_vec(table->dimension());
  for (const auto& [name, value] : h.values) {
    const auto i = table->index_of(name);
    if (!i) throw SpecError("homotopy refers to unknown basis element '" + name + "'");
    if (table->basis_degree(*i) != 1 && value != 0)
      throw SpecError("homotopy must vanish outside degree 1, but h(" + name + ") = " + to_string(value));
    h_vec[*i] = value;
  }
  SpaceSpec spec = table->spec();
  spec.expectation.clear();
  for (std::size_t i = 0; i < table->dimension(); ++i) {
    Rational e = table->expectation(table->basis_vector(i));
    for (std::size_t k = 0; k < table->dimension(); ++k) e += h_vec[k] * table->differential_entry(i, k);
    if (e != 0) spec.expectation.push_back({table->basis_name(i), e});
  }
  return make_finite_table_space(std::move(spec), table->name() + "+h∘d");
}

ChainHomotopy random_chain_homotopy(const SpaceHandle& space, Rng& rng) {
  ChainHomotopy h;
  if (const auto* table = dynamic_cast<const FiniteTableSpace*>(space.get())) {
    for (std::size_t i = 0; i < table->dimension(); ++i)
      if (table->basis_degree(i) == 1) h.values[table->basis_name(i)] = random_coefficient(rng, true);
  }
  return h;
}

std::string InvarianceReport::to_string() const {
  std::ostringstream out;
  out << collections << " collections, " << comparisons << " comparisons, " << mismatches.size() << " mismatches";
  for (const auto& m : mismatches) out << "\n  " << m;
  out << "\n  expectation shift: " << (shifted_expectation ? *shifted_expectation : "none found");
  return out.str();
}

InvarianceReport homotopy_invariance_check(const SpaceHandle& space, const ChainHomotopy& h,
                                           const std::vector<HRVCollection>& collections, std::size_t max_arity,
                                           const Limits& limits) {
  const SpaceHandle perturbed = perturb_expectation(space, h);
  InvarianceReport report;
  for (const auto& x : collections) {
    JointStatistics before, after;
    try {
      before = joint_statistics(x, space, max_arity, limits);
      after = joint_statistics(x, perturbed, max_arity, limits);
    } catch (const MorphismError& e) {
      throw PreconditionError(std::string("invariance check needs morphisms: ") + e.what());
    }
    ++report.collections;
    for (const auto& [idx, value] : before.moments) {
      ++report.comparisons;
      if (after.moments.at(idx) != value)
        report.mismatches.push_back("moment " + index_label(idx) + ": " + to_string(value) + " vs " +
                                    to_string(after.moments.at(idx)));
    }
    for (const auto& [idx, value] : before.cumulants) {
      ++report.comparisons;
      if (after.cumulants.at(idx) != value)
        report.mismatches.push_back("cumulant " + index_label(idx) + ": " + to_string(value) + " vs " +
                                    to_string(after.cumulants.at(idx)));
    }
  }
  if (const auto* table = dynamic_cast<const FiniteTableSpace*>(space.get())) {
    for (std::size_t i = 0; i < table->dimension() && !report.shifted_expectation; ++i) {
      const Element b = table->basis_vector(i);
      const Rational e = space->expectation(b);
      const Rational e2 = perturbed->expectation(b);
      if (e != e2)
        report.shifted_expectation = "E(" + table->basis_name(i) + ") = " + to_string(e) + " but E'(" +
                                     table->basis_name(i) + ") = " + to_string(e2) + "; d(" + table->basis_name(i) +
                                     ") = " + space->format(space->differential(b)) + " is not zero";
    }
  }
  return report;
}

namespace {

// Basis of ker d restricted to the degree-0 span, by reduced row echelon form.
std::vector<Element> closed_degree_zero_basis(const FiniteTableSpace& t, const std::vector<std::size_t>& even) {
  const std::size_t m = t.dimension(), n = even.size();
  std::vector<std::vector<Rational>> rows(m, std::vector<Rational>(n));
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < n; ++j) rows[k][j] = t.differential_entry(even[j], k);
  std::vector<std::ptrdiff_t> pivot_of_col(n, -1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t p = r;
    while (p < m && rows[p][c] == 0) ++p;
    if (p == m) continue;
    std::swap(rows[p], rows[r]);
    const Rational lead = rows[r][c];
    for (auto& v : rows[r]) v /= lead;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const Rational f = rows[i][c];
      for (std::size_t j = 0; j < n; ++j) rows[i][j] -= f * rows[r][j];
    }
    pivot_of_col[c] = static_cast<std::ptrdiff_t>(r++);
  }
  std::vector<Element> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (pivot_of_col[free] >= 0) continue;
    TableVector v{std::vector<Rational>(m)};
    v.coeffs[even[free]] = 1;
    for (std::size_t c = 0; c < n; ++c)
      if (pivot_of_col[c] >= 0) v.coeffs[even[c]] = -rows[static_cast<std::size_t>(pivot_of_col[c])][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

// Nonzero combinations of `generators` with coefficients in {-1, 0, 1}.
std::vector<Element> small_combinations(const Space& space, const std::vector<Element>& generators) {
  std::vector<Element> out;
  std::vector<int> digits(generators.size(), -1);
  while (!generators.empty()) {
    Element v = space.zero();
    for (std::size_t j = 0; j < generators.size(); ++j) v = space.add(v, space.scale(digits[j], generators[j]));
    if (!space.is_zero(v)) out.push_back(std::move(v));
    std::size_t j = 0;
    while (j < digits.size() && ++digits[j] == 2) digits[j++] = -1;
    if (j == digits.size()) break;
  }
  return out;
}

}  // namespace

std::vector<HRVCollection> search_hrv_collections(const SpaceHandle& space, std::size_t max_arity,
                                                  std::size_t max_results, const Limits& limits) {
  const auto* table = dynamic_cast<const FiniteTableSpace*>(space.get());
  if (table == nullptr) throw PreconditionError("bounded collection search needs a finite-table space");
  std::vector<std::size_t> even;
  std::vector<Element> even_basis;
  for (std::size_t i = 0; i < table->dimension(); ++i)
    if (table->basis_degree(i) == 0) {
      even.push_back(i);
      even_basis.push_back(table->basis_vector(i));
    }
  const std::vector<Element> candidates = small_combinations(*space, even_basis);
  const std::vector<Element> closed = small_combinations(*space, closed_degree_zero_basis(*table, even));

  const std::size_t per_kind = std::max<std::size_t>(1, max_results / 3);
  std::vector<HRVCollection> strict, layered, transported;
  for (const auto& c : closed) {
    if (strict.size() >= per_kind) break;
    auto x = HRVCollection::strict(space, {c});
    if (is_morphism(x, space, max_arity, limits).ok) strict.push_back(std::move(x));
  }
  for (const auto& c : closed) {
    for (const auto& extra : candidates) {
      if (layered.size() >= per_kind) break;
      auto x = HRVCollection::strict(space, {c});
      x.components.emplace(std::vector<int>{0, 0}, extra);
      if (is_morphism(x, space, max_arity, limits).ok) layered.push_back(std::move(x));
    }
  }
  for (std::size_t i = 0; i < closed.size() && transported.size() < per_kind; ++i) {
    transported.push_back(transport_chain_map({closed[i]}, space, max_arity, limits));
    if (i + 1 < closed.size() && transported.size() < per_kind)
      transported.push_back(transport_chain_map({closed[i], closed[i + 1]}, space, max_arity, limits));
  }
  std::vector<HRVCollection> out;
  for (auto* group : {&strict, &layered, &transported})
    for (auto& x : *group)
      if (out.size() < max_results) out.push_back(std::move(x));
  return out;
}

}  // namespace hpt
