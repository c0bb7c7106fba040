#include "hpt/coalgebra.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <unordered_map>

#include "hpt/errors.hpp"

namespace hpt {

// ---------------------------------------------------------------------------
// SymWord

SymWord::SymWord(SpaceHandle space, std::vector<Element> entries) : space_(std::move(space)), entries_(std::move(entries)) {
  if (entries_.empty()) throw ValidationError("a word needs arity at least one");
  degrees_.reserve(entries_.size());
  for (const auto& e : entries_) degrees_.push_back(space_->degree(e).value_or(0));
}

SymWord::SymWord(SpaceHandle space, std::vector<Element> entries, std::vector<int> degrees)
    : space_(std::move(space)), entries_(std::move(entries)), degrees_(std::move(degrees)) {}

SymWord make_word_unchecked(SpaceHandle space, std::vector<Element> entries, std::vector<int> degrees) {
  return SymWord(std::move(space), std::move(entries), std::move(degrees));
}

int SymWord::total_degree() const noexcept { return std::accumulate(degrees_.begin(), degrees_.end(), 0); }

bool SymWord::has_zero_entry() const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const Element& e) { return space_->is_zero(e); });
}

SymWord SymWord::select(std::span<const int> positions) const {
  std::vector<Element> entries;
  std::vector<int> degrees;
  for (int p : positions) {
    entries.push_back(entries_.at(static_cast<std::size_t>(p)));
    degrees.push_back(degrees_.at(static_cast<std::size_t>(p)));
  }
  return SymWord(space_, std::move(entries), std::move(degrees));
}

SymWord SymWord::replaced(std::size_t position, Element entry, int degree) const {
  SymWord out = *this;
  out.entries_.at(position) = std::move(entry);
  out.degrees_.at(position) = degree;
  return out;
}

std::string SymWord::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) out += ", ";
    out += space_->format(entries_[i]);
  }
  return out + ")";
}

std::vector<SymWord> expand_homogeneous(const SpaceHandle& space, const std::vector<Element>& entries) {
  if (entries.empty()) throw ValidationError("a word needs arity at least one");
  std::vector<std::vector<std::pair<int, Element>>> parts;
  for (const auto& e : entries) {
    parts.push_back(space->homogeneous_parts(e));
    if (parts.back().empty()) return {};
  }
  std::vector<SymWord> out;
  std::vector<std::size_t> choice(entries.size(), 0);
  for (;;) {
    std::vector<Element> word;
    std::vector<int> degrees;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      word.push_back(parts[i][choice[i]].second);
      degrees.push_back(parts[i][choice[i]].first);
    }
    out.push_back(make_word_unchecked(space, std::move(word), std::move(degrees)));
    std::size_t i = 0;
    while (i < choice.size() && ++choice[i] == parts[i].size()) choice[i++] = 0;
    if (i == choice.size()) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Partitions and signs

std::vector<int> SetPartition::flattened() const {
  std::vector<int> out;
  for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::uint64_t bell_number(std::size_t n) {
  // Bell triangle.
  std::vector<std::uint64_t> row{1};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

void for_each_set_partition(std::size_t n, const std::function<void(const SetPartition&)>& fn, const Limits& limits) {
  if (n == 0) throw SizeLimitError("set partitions need n >= 1");
  if (n > limits.partition_cap)
    throw SizeLimitError("arity " + std::to_string(n) + " exceeds partition cap " +
                         std::to_string(limits.partition_cap));
  // Restricted growth strings: rgs[0] = 0, rgs[i] <= 1 + max(rgs[0..i-1]).
  std::vector<int> rgs(n, 0);
  std::vector<int> prefix_max(n, 0);
  SetPartition partition;
  for (;;) {
    const int blocks = prefix_max[n - 1] + 1;
    partition.blocks.assign(static_cast<std::size_t>(blocks), {});
    for (std::size_t i = 0; i < n; ++i) partition.blocks[static_cast<std::size_t>(rgs[i])].push_back(static_cast<int>(i));
    fn(partition);
    std::size_t i = n - 1;
    while (i > 0 && rgs[i] == prefix_max[i - 1] + 1) --i;
    if (i == 0) return;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
}

std::vector<SetPartition> set_partitions(std::size_t n, const Limits& limits) {
  std::vector<SetPartition> out;
  for_each_set_partition(n, [&](const SetPartition& p) { out.push_back(p); }, limits);
  return out;
}

int koszul_sign(std::span<const int> permutation, std::span<const int> degrees) {
  const std::size_t n = degrees.size();
  if (permutation.size() != n) throw ValidationError("permutation and degree list differ in length");
  std::vector<char> seen(n, 0);
  for (int p : permutation) {
    if (p < 0 || static_cast<std::size_t>(p) >= n || seen[static_cast<std::size_t>(p)])
      throw ValidationError("not a permutation of 0.." + std::to_string(n == 0 ? 0 : n - 1));
    seen[static_cast<std::size_t>(p)] = 1;
  }
  int parity = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto i = static_cast<std::size_t>(permutation[a]);
      const auto j = static_cast<std::size_t>(permutation[b]);
      if (i > j) parity ^= (degrees[i] * degrees[j]) & 1;
    }
  return parity ? -1 : 1;
}

int unshuffle_sign(const SetPartition& partition, std::span<const int> degrees) {
  const auto perm = partition.flattened();
  return koszul_sign(perm, degrees);
}

// ---------------------------------------------------------------------------
// MorphismComponents

MorphismComponents::MorphismComponents(SpaceHandle source, SpaceHandle target, int degree, ComponentFn fn)
    : source_(std::move(source)), target_(std::move(target)), degree_(degree), fn_(std::move(fn)) {}

Element MorphismComponents::operator()(const SymWord& w) const {
  if (w.space().get() != source_.get())
    throw SpaceMismatchError("word lives in '" + w.space()->name() + "', map expects '" + source_->name() + "'");
  if (arity_bound_ && w.arity() > *arity_bound_) return target_->zero();
  if (w.has_zero_entry()) return target_->zero();
  return fn_(w);
}

Element MorphismComponents::apply(const Element& e) const { return (*this)(SymWord(source_, {e})); }

namespace {

Element product_of(const Space& space, const SymWord& w) {
  Element acc = w[0];
  for (std::size_t i = 1; i < w.arity(); ++i) acc = space.product(acc, w[i]);
  return acc;
}

}  // namespace

MorphismComponents product_type_morphism(SpaceHandle space, CoefficientFn coefficients) {
  const Space* raw = space.get();
  MorphismComponents m(space, space, 0, [raw, coefficients](const SymWord& w) -> Element {
    const Rational c = coefficients(w.arity());
    if (c == 0) return raw->zero();
    return raw->scale(c, product_of(*raw, w));
  });
  m.unital_ = coefficients(1) == 1;
  m.product_coeffs_ = std::move(coefficients);
  return m;
}

MorphismComponents multiplication_morphism(const SpaceHandle& space) {
  return product_type_morphism(space, [](std::size_t) { return Rational(1); });
}

MorphismComponents identity_morphism(const SpaceHandle& space) {
  auto m = product_type_morphism(space, [](std::size_t n) { return Rational(n == 1 ? 1 : 0); });
  m.bound_arity(1);
  return m;
}

MorphismComponents strict_morphism(SpaceHandle source, SpaceHandle target, int degree,
                                   std::function<Element(const Element&)> map) {
  MorphismComponents m(std::move(source), std::move(target), degree,
                       [map = std::move(map)](const SymWord& w) { return map(w[0]); });
  m.bound_arity(1);
  return m;
}

MorphismComponents expectation_morphism(const SpaceHandle& space) {
  const Space* raw = space.get();
  return strict_morphism(space, scalar_line(), 0,
                         [raw](const Element& e) { return scalar_element(raw->expectation(e)); });
}

// ---------------------------------------------------------------------------
// Composition

namespace {

void check_composable(const MorphismComponents& g, const MorphismComponents& f) {
  if (f.degree() != 0) throw CompositionError("the inner map of a composition must have degree 0");
  if (f.target().get() != g.source().get())
    throw CompositionError("cannot compose: inner map lands in '" + f.target()->name() + "', outer map starts at '" +
                           g.source()->name() + "'");
}

}  // namespace

Element compose_coalgebra(const MorphismComponents& g, const MorphismComponents& f, const SymWord& w,
                          const Limits& limits) {
  check_composable(g, f);
  if (w.space().get() != f.source().get())
    throw SpaceMismatchError("word lives in '" + w.space()->name() + "', map expects '" + f.source()->name() + "'");
  const Space& mid = *f.target();
  const std::size_t n = w.arity();
  if (w.has_zero_entry()) return g.target()->zero();

  if (g.arity_bound() == 1) {
    Element image = f(w);
    if (mid.is_zero(image)) return g.target()->zero();
    return g(make_word_unchecked(f.target(), {std::move(image)}, {w.total_degree() + f.degree()}));
  }
  if (f.arity_bound() == 1) {
    std::vector<Element> images;
    std::vector<int> degrees;
    for (std::size_t i = 0; i < n; ++i) {
      images.push_back(f(w.select(std::vector<int>{static_cast<int>(i)})));
      if (mid.is_zero(images.back())) return g.target()->zero();
      degrees.push_back(w.degrees()[i] + f.degree());
    }
    return g(make_word_unchecked(f.target(), std::move(images), std::move(degrees)));
  }

  if (n > 20) throw SizeLimitError("composition arity too large");
  // f on each block, memoized by block bitmask.
  std::vector<std::optional<Element>> block_images(std::size_t{1} << n);
  auto image_of = [&](const std::vector<int>& block) -> const Element& {
    std::size_t mask = 0;
    for (int i : block) mask |= std::size_t{1} << i;
    auto& slot = block_images[mask];
    if (!slot) slot = f(w.select(block));
    return *slot;
  };

  Element total = g.target()->zero();
  for_each_set_partition(
      n,
      [&](const SetPartition& pi) {
        if (g.arity_bound() && pi.size() > *g.arity_bound()) return;
        if (f.arity_bound())
          for (const auto& b : pi.blocks)
            if (b.size() > *f.arity_bound()) return;
        std::vector<Element> images;
        std::vector<int> degrees;
        for (const auto& b : pi.blocks) {
          const Element& img = image_of(b);
          if (mid.is_zero(img)) return;
          images.push_back(img);
          int deg = f.degree();
          for (int i : b) deg += w.degrees()[static_cast<std::size_t>(i)];
          degrees.push_back(deg);
        }
        const int eps = unshuffle_sign(pi, w.degrees());
        Element value = g(make_word_unchecked(f.target(), std::move(images), std::move(degrees)));
        total = g.target()->add(total, g.target()->scale(eps, value));
      },
      limits);
  return total;
}

MorphismComponents compose_coalgebra(const MorphismComponents& g, const MorphismComponents& f, const Limits& limits) {
  check_composable(g, f);
  MorphismComponents out(f.source(), g.target(), g.degree() + f.degree(),
                         [g, f, limits](const SymWord& w) { return compose_coalgebra(g, f, w, limits); });
  if (g.arity_bound() == 1 && f.arity_bound() == 1) out.bound_arity(1);
  if (g.unital_first_component() && f.unital_first_component()) out.mark_unital();
  return out;
}

// ---------------------------------------------------------------------------
// Inversion

namespace {

// Integer partitions of n as block-size lists (non-increasing).
void integer_partitions(std::size_t n, std::size_t max_part, std::vector<std::size_t>& current,
                        const std::function<void(const std::vector<std::size_t>&)>& fn) {
  if (n == 0) {
    fn(current);
    return;
  }
  for (std::size_t part = std::min(n, max_part); part >= 1; --part) {
    current.push_back(part);
    integer_partitions(n - part, part, current, fn);
    current.pop_back();
  }
}

// Number of set partitions of {1..n} with the given block sizes.
Rational set_partition_count(const std::vector<std::size_t>& sizes) {
  std::size_t n = 0;
  for (auto s : sizes) n += s;
  Rational count = factorial(static_cast<unsigned>(n));
  std::size_t run = 1;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    count /= factorial(static_cast<unsigned>(sizes[i]));
    if (i + 1 < sizes.size() && sizes[i + 1] == sizes[i]) {
      ++run;
    } else {
      count /= factorial(static_cast<unsigned>(run));
      run = 1;
    }
  }
  return count;
}

struct InverseState {
  InverseState(MorphismComponents f, Limits l) : forward(std::move(f)), limits(l) {}
  MorphismComponents forward;
  Limits limits;
  std::mutex mutex;
  std::unordered_map<std::string, Element> memo;
};

Element evaluate_inverse(InverseState& state, const SymWord& w) {
  const Space& space = *w.space();
  const std::size_t n = w.arity();
  if (n == 1) return w[0];
  if (n > state.limits.partition_cap)
    throw SizeLimitError("arity " + std::to_string(n) + " exceeds partition cap " +
                         std::to_string(state.limits.partition_cap));

  // Canonical ordering for the memo; components are graded symmetric so the
  // value on w is the Koszul sign times the value on the sorted word.
  std::vector<std::string> text(n);
  for (std::size_t i = 0; i < n; ++i) text[i] = std::to_string(w.degrees()[i]) + ":" + space.format(w[i]);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return text[static_cast<std::size_t>(a)] < text[static_cast<std::size_t>(b)]; });
  const int sign = koszul_sign(order, w.degrees());
  std::string key;
  for (int i : order) key += text[static_cast<std::size_t>(i)] + "|";
  {
    std::lock_guard lock(state.mutex);
    if (auto it = state.memo.find(key); it != state.memo.end()) return space.scale(sign, it->second);
  }
  const SymWord sorted = w.select(order);

  Element total = space.zero();
  for_each_set_partition(
      n,
      [&](const SetPartition& pi) {
        if (pi.is_discrete(n)) return;
        std::vector<Element> images;
        std::vector<int> degrees;
        for (const auto& b : pi.blocks) {
          Element img = b.size() == 1 ? sorted[static_cast<std::size_t>(b[0])] : state.forward(sorted.select(b));
          if (space.is_zero(img)) return;
          images.push_back(std::move(img));
          int deg = 0;
          for (int i : b) deg += sorted.degrees()[static_cast<std::size_t>(i)];
          degrees.push_back(deg);
        }
        const int eps = unshuffle_sign(pi, sorted.degrees());
        Element value = evaluate_inverse(state, make_word_unchecked(w.space(), std::move(images), std::move(degrees)));
        total = space.add(total, space.scale(eps, value));
      },
      state.limits);
  total = space.negate(total);
  {
    std::lock_guard lock(state.mutex);
    state.memo.emplace(key, total);
  }
  return space.scale(sign, total);
}

}  // namespace

std::vector<Rational> inverse_product_coefficients(const CoefficientFn& coefficients, std::size_t max_arity,
                                                   const Limits& limits) {
  if (max_arity > limits.partition_cap)
    throw SizeLimitError("arity " + std::to_string(max_arity) + " exceeds partition cap " +
                         std::to_string(limits.partition_cap));
  if (coefficients(1) != 1) throw InversionError("first component is not the identity");
  std::vector<Rational> inv{Rational(1)};
  std::vector<std::size_t> scratch;
  for (std::size_t n = 2; n <= max_arity; ++n) {
    Rational sum = 0;
    integer_partitions(n, n, scratch, [&](const std::vector<std::size_t>& sizes) {
      if (sizes.size() == n) return;  // discrete partition
      Rational term = inv[sizes.size() - 1] * set_partition_count(sizes);
      for (auto s : sizes) term *= coefficients(s);
      sum += term;
    });
    inv.push_back(-sum);
  }
  return inv;
}

MorphismComponents invert_coalgebra(const MorphismComponents& f, const Limits& limits) {
  if (!f.unital_first_component()) throw InversionError("cannot invert: first component is not the identity");
  if (f.source().get() != f.target().get())
    throw InversionError("cannot invert: identity first component needs source == target");

  if (const CoefficientFn* coeffs = f.product_coefficients()) {
    struct CoefficientCache {
      CoefficientFn forward;
      Limits limits;
      std::mutex mutex;
      std::vector<Rational> values;
    };
    auto cache = std::make_shared<CoefficientCache>();
    cache->forward = *coeffs;
    cache->limits = limits;
    return product_type_morphism(f.source(), [cache](std::size_t n) {
      std::lock_guard lock(cache->mutex);
      if (cache->values.size() < n) cache->values = inverse_product_coefficients(cache->forward, n, cache->limits);
      return cache->values[n - 1];
    });
  }

  auto state = std::make_shared<InverseState>(f, limits);
  MorphismComponents inv(f.target(), f.source(), 0, [state](const SymWord& w) { return evaluate_inverse(*state, w); });
  inv.mark_unital();
  return inv;
}

// ---------------------------------------------------------------------------
// Coderivations and transport

std::vector<SignedWord> coderivation_extend(const std::function<Element(const Element&)>& d, const SymWord& w) {
  std::vector<SignedWord> out;
  int prefix = 0;
  for (std::size_t i = 0; i < w.arity(); ++i) {
    Element image = d(w[i]);
    if (!w.space()->is_zero(image))
      out.push_back({(prefix & 1) ? -1 : 1, w.replaced(i, std::move(image), w.degrees()[i] + 1)});
    prefix += w.degrees()[i];
  }
  return out;
}

int bracket_sign(std::span<const int> degrees) {
  const std::size_t n = degrees.size();
  int parity = 0;
  for (std::size_t i = 0; i < n; ++i) parity ^= (static_cast<int>(n - 1 - i) * degrees[i]) & 1;
  return parity ? -1 : 1;
}

MorphismComponents transported_structure(const SpaceHandle& space, const Limits& limits) {
  const MorphismComponents a = multiplication_morphism(space);
  const MorphismComponents a_inverse = invert_coalgebra(a, limits);
  const Space* raw = space.get();
  auto d = [raw](const Element& e) { return raw->differential(e); };
  return MorphismComponents(space, space, 1, [=](const SymWord& w) -> Element {
    const std::size_t n = w.arity();
    if (n > limits.transport_cap)
      throw SizeLimitError("arity " + std::to_string(n) + " exceeds transport cap " +
                           std::to_string(limits.transport_cap));
    if (n == 1) return d(w[0]);
    std::vector<std::optional<Element>> block_products(std::size_t{1} << n);
    Element total = raw->zero();
    for_each_set_partition(
        n,
        [&](const SetPartition& pi) {
          std::vector<Element> images;
          std::vector<int> degrees;
          for (const auto& b : pi.blocks) {
            std::size_t mask = 0;
            for (int i : b) mask |= std::size_t{1} << i;
            auto& slot = block_products[mask];
            if (!slot) slot = a(w.select(b));
            if (raw->is_zero(*slot)) return;
            images.push_back(*slot);
            int deg = 0;
            for (int i : b) deg += w.degrees()[static_cast<std::size_t>(i)];
            degrees.push_back(deg);
          }
          const int eps = unshuffle_sign(pi, w.degrees());
          const SymWord pushed = make_word_unchecked(w.space(), std::move(images), std::move(degrees));
          for (const auto& term : coderivation_extend(d, pushed))
            total = raw->add(total, raw->scale(eps * term.sign, a_inverse(term.word)));
        },
        limits);
    return total;
  });
}

Element transport_structure(const SpaceHandle& space, const SymWord& w, Convention convention, const Limits& limits) {
  if (w.space().get() != space.get()) throw SpaceMismatchError("word does not belong to '" + space->name() + "'");
  Element value = transported_structure(space, limits)(w);
  if (convention == Convention::Bracket) value = space->scale(bracket_sign(w.degrees()), value);
  return value;
}

Element transport_structure(const SpaceHandle& space, const std::vector<Element>& entries, Convention convention,
                            const Limits& limits) {
  const MorphismComponents structure = transported_structure(space, limits);
  Element total = space->zero();
  for (const auto& w : expand_homogeneous(space, entries)) {
    Element value = structure(w);
    if (convention == Convention::Bracket) value = space->scale(bracket_sign(w.degrees()), value);
    total = space->add(total, value);
  }
  return total;
}

}  // namespace hpt
