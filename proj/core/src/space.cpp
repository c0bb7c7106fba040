#include "hpt/space.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hpt/errors.hpp"

namespace hpt {

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  if (valid()) {
    out << "valid (" << checks << " checks)";
    return out.str();
  }
  out << "invalid: " << violations.size() << " violation(s) in " << checks << " checks";
  for (const auto& v : violations) out << "\n  " << v.identity << ": " << v.witness;
  return out.str();
}

std::optional<int> Space::degree(const Element& a) const {
  auto parts = homogeneous_parts(a);
  if (parts.empty()) return std::nullopt;
  if (parts.size() > 1) throw ValidationError("element " + format(a) + " is not homogeneous");
  return parts.front().first;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

Rational coefficient_from_json(const json& value) {
  if (value.is_string()) return parse_rational(value.get<std::string>());
  if (value.is_number_integer()) return Rational(mpz_class(std::to_string(value.get<long long>()), 10));
  throw SpecError("coefficient must be an integer or a rational string, got " + value.dump());
}

json coefficient_to_json(const Rational& c) { return to_string(c); }

std::vector<Term> terms_from_json(const json& arr) {
  if (!arr.is_array()) throw SpecError("expected an array of terms, got " + arr.dump());
  std::vector<Term> out;
  for (const auto& t : arr) {
    if (!t.is_object() || !t.contains("b") || !t.contains("c"))
      throw SpecError("term must be {\"b\": name, \"c\": coefficient}, got " + t.dump());
    out.push_back({t.at("b").get<std::string>(), coefficient_from_json(t.at("c"))});
  }
  return out;
}

json terms_to_json(const std::vector<Term>& terms) {
  json arr = json::array();
  for (const auto& t : terms) arr.push_back({{"b", t.basis}, {"c", coefficient_to_json(t.coeff)}});
  return arr;
}

}  // namespace

SpaceSpec parse_space_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte > 0 ? e.byte - 1 : 0);
  }
  if (!doc.is_object() || !doc.contains("basis")) throw SpecError("space file needs a \"basis\" array");
  SpaceSpec spec;
  try {
    for (const auto& b : doc.at("basis")) {
      spec.basis.push_back({b.at("name").get<std::string>(), b.at("degree").get<int>()});
    }
    if (doc.contains("unit") && !doc.at("unit").is_null()) spec.unit = doc.at("unit").get<std::string>();
    if (doc.contains("product")) {
      for (const auto& r : doc.at("product")) {
        spec.product.push_back({r.at("left").get<std::string>(), r.at("right").get<std::string>(),
                                terms_from_json(r.at("out"))});
      }
    }
    if (doc.contains("differential")) {
      for (const auto& r : doc.at("differential")) {
        spec.differential.push_back({r.at("in").get<std::string>(), terms_from_json(r.at("out"))});
      }
    }
    if (doc.contains("expectation")) spec.expectation = terms_from_json(doc.at("expectation"));
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed space file: ") + e.what());
  }
  return spec;
}

SpaceSpec load_space_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open space file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_space_json(buffer.str());
}

std::string to_json(const SpaceSpec& spec) {
  json doc;
  doc["basis"] = json::array();
  for (const auto& b : spec.basis) doc["basis"].push_back({{"name", b.name}, {"degree", b.degree}});
  doc["unit"] = spec.unit ? json(*spec.unit) : json(nullptr);
  doc["product"] = json::array();
  for (const auto& r : spec.product)
    doc["product"].push_back({{"left", r.left}, {"right", r.right}, {"out", terms_to_json(r.out)}});
  doc["differential"] = json::array();
  for (const auto& r : spec.differential)
    doc["differential"].push_back({{"in", r.in}, {"out", terms_to_json(r.out)}});
  doc["expectation"] = terms_to_json(spec.expectation);
  return doc.dump(2);
}

// ---------------------------------------------------------------------------
// FiniteTableSpace

FiniteTableSpace::FiniteTableSpace(SpaceSpec spec, std::string name)
    : spec_(std::move(spec)), name_(std::move(name)) {
  const std::size_t m = spec_.basis.size();
  if (m == 0) throw SpecError("space needs at least one basis element");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < m; ++i) {
    if (!index.emplace(spec_.basis[i].name, i).second)
      throw SpecError("duplicate basis name '" + spec_.basis[i].name + "'");
    degrees_.push_back(spec_.basis[i].degree);
  }
  auto lookup = [&](const std::string& n) {
    auto it = index.find(n);
    if (it == index.end()) throw SpecError("unknown basis name '" + n + "'");
    return it->second;
  };
  if (spec_.unit) unit_ = lookup(*spec_.unit);

  prod_.assign(m * m * m, Rational(0));
  diff_.assign(m * m, Rational(0));
  expect_.assign(m, Rational(0));
  std::vector<char> given(m * m, 0);
  auto slot = [&](std::size_t i, std::size_t j, std::size_t k) -> Rational& { return prod_[(i * m + j) * m + k]; };

  for (const auto& rule : spec_.product) {
    const auto i = lookup(rule.left);
    const auto j = lookup(rule.right);
    if (given[i * m + j]) throw SpecError("product " + rule.left + "*" + rule.right + " given twice");
    given[i * m + j] = 1;
    for (const auto& t : rule.out) slot(i, j, lookup(t.basis)) += t.coeff;
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (given[i * m + j] || !given[j * m + i]) continue;
      const int sign = (degrees_[i] * degrees_[j]) % 2 == 0 ? 1 : -1;
      for (std::size_t k = 0; k < m; ++k) slot(i, j, k) = sign * slot(j, i, k);
      given[i * m + j] = 2;
    }
  }
  if (unit_) {
    const std::size_t u = *unit_;
    for (std::size_t j = 0; j < m; ++j) {
      if (!given[u * m + j]) slot(u, j, j) = 1;
      if (!given[j * m + u] && j != u) slot(j, u, j) = 1;
    }
  }
  std::set<std::size_t> seen_d;
  for (const auto& rule : spec_.differential) {
    const auto i = lookup(rule.in);
    if (!seen_d.insert(i).second) throw SpecError("differential of '" + rule.in + "' given twice");
    for (const auto& t : rule.out) diff_[i * m + lookup(t.basis)] += t.coeff;
  }
  for (const auto& t : spec_.expectation) expect_[lookup(t.basis)] += t.coeff;
}

const TableVector& FiniteTableSpace::get(const Element& a) const {
  const auto* v = std::get_if<TableVector>(&a);
  if (v == nullptr) throw SpaceMismatchError("expected an element of finite-table space '" + name_ + "'");
  if (v->coeffs.size() != dimension())
    throw SpaceMismatchError("element has " + std::to_string(v->coeffs.size()) +
                             " coefficients, space '" + name_ + "' has dimension " +
                             std::to_string(dimension()));
  return *v;
}

Element FiniteTableSpace::zero() const { return TableVector{std::vector<Rational>(dimension())}; }

std::optional<Element> FiniteTableSpace::unit() const {
  if (!unit_) return std::nullopt;
  return basis_vector(*unit_);
}

Element FiniteTableSpace::basis_vector(std::size_t i) const {
  TableVector v{std::vector<Rational>(dimension())};
  v.coeffs.at(i) = 1;
  return v;
}

std::optional<std::size_t> FiniteTableSpace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < dimension(); ++i)
    if (spec_.basis[i].name == name) return i;
  return std::nullopt;
}

Element FiniteTableSpace::add(const Element& a, const Element& b) const {
  TableVector out = get(a);
  const auto& bv = get(b);
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += bv.coeffs[i];
  return out;
}

Element FiniteTableSpace::scale(const Rational& c, const Element& a) const {
  TableVector out = get(a);
  for (auto& x : out.coeffs) x *= c;
  return out;
}

Element FiniteTableSpace::differential(const Element& a) const {
  const auto& v = get(a);
  const std::size_t m = dimension();
  TableVector out{std::vector<Rational>(m)};
  for (std::size_t i = 0; i < m; ++i) {
    if (v.coeffs[i] == 0) continue;
    for (std::size_t k = 0; k < m; ++k)
      if (diff_[i * m + k] != 0) out.coeffs[k] += v.coeffs[i] * diff_[i * m + k];
  }
  return out;
}

Element FiniteTableSpace::product(const Element& a, const Element& b) const {
  const auto& x = get(a);
  const auto& y = get(b);
  const std::size_t m = dimension();
  TableVector out{std::vector<Rational>(m)};
  Rational xy;
  for (std::size_t i = 0; i < m; ++i) {
    if (x.coeffs[i] == 0) continue;
    for (std::size_t j = 0; j < m; ++j) {
      if (y.coeffs[j] == 0) continue;
      xy = x.coeffs[i] * y.coeffs[j];
      for (std::size_t k = 0; k < m; ++k) {
        const auto& c = product_constant(i, j, k);
        if (c != 0) out.coeffs[k] += xy * c;
      }
    }
  }
  return out;
}

Rational FiniteTableSpace::expectation(const Element& a) const {
  const auto& v = get(a);
  Rational sum = 0;
  for (std::size_t i = 0; i < dimension(); ++i) sum += v.coeffs[i] * expect_[i];
  return sum;
}

bool FiniteTableSpace::is_zero(const Element& a) const {
  for (const auto& c : get(a).coeffs)
    if (c != 0) return false;
  return true;
}

std::vector<std::pair<int, Element>> FiniteTableSpace::homogeneous_parts(const Element& a) const {
  const auto& v = get(a);
  std::map<int, TableVector> parts;
  for (std::size_t i = 0; i < dimension(); ++i) {
    if (v.coeffs[i] == 0) continue;
    auto [it, inserted] = parts.try_emplace(degrees_[i], TableVector{std::vector<Rational>(dimension())});
    it->second.coeffs[i] = v.coeffs[i];
  }
  std::vector<std::pair<int, Element>> out;
  for (auto& [deg, part] : parts) out.emplace_back(deg, std::move(part));
  return out;
}

std::string FiniteTableSpace::format(const Element& a) const {
  const auto& v = get(a);
  std::string out;
  for (std::size_t i = 0; i < dimension(); ++i) {
    const Rational& c = v.coeffs[i];
    if (c == 0) continue;
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    const Rational mag = abs(c);
    // The scalar line's only basis vector is printed as the bare coefficient.
    if (spec_.basis[i].name == "1") {
      out += hpt::to_string(mag);
      continue;
    }
    if (mag != 1) out += hpt::to_string(mag) + "*";
    out += spec_.basis[i].name;
  }
  return out.empty() ? "0" : out;
}

std::optional<Element> FiniteTableSpace::generator(std::string_view name) const {
  if (auto i = index_of(name)) return basis_vector(*i);
  return std::nullopt;
}

Element FiniteTableSpace::random_homogeneous(Rng& rng, int /*max_poly_degree*/) const {
  const int deg = degrees_[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(dimension()) - 1))];
  for (;;) {
    TableVector v{std::vector<Rational>(dimension())};
    for (std::size_t i = 0; i < dimension(); ++i)
      if (degrees_[i] == deg) v.coeffs[i] = random_coefficient(rng);
    if (!is_zero(v)) return v;
  }
}

ValidationReport FiniteTableSpace::check_axioms(std::uint64_t /*seed*/) const {
  ValidationReport report;
  const std::size_t m = dimension();
  auto fail = [&](std::string identity, std::string witness) {
    report.violations.push_back({std::move(identity), std::move(witness)});
  };
  auto nm = [&](std::size_t i) { return spec_.basis[i].name; };
  auto off_degree = [&](const Element& e, int expected) {
    for (const auto& [deg, part] : homogeneous_parts(e))
      if (deg != expected) return true;
    return false;
  };

  for (std::size_t i = 0; i < m; ++i) {
    const Element b = basis_vector(i);
    const Element db = differential(b);
    ++report.checks;
    if (off_degree(db, degrees_[i] + 1))
      fail("d raises degree by one", "d(" + nm(i) + ") = " + format(db));
    const Element ddb = differential(db);
    ++report.checks;
    if (!is_zero(ddb)) fail("d∘d = 0", "d(d(" + nm(i) + ")) = " + format(ddb));
    const Rational edb = expectation(db);
    ++report.checks;
    if (edb != 0) fail("E∘d = 0", "E(d(" + nm(i) + ")) = " + hpt::to_string(edb));
    ++report.checks;
    if (degrees_[i] != 0 && expect_[i] != 0)
      fail("E vanishes off degree 0", "E(" + nm(i) + ") = " + hpt::to_string(expect_[i]));
    if (unit_) {
      const Element u = basis_vector(*unit_);
      ++report.checks;
      if (!equal(product(u, b), b) || !equal(product(b, u), b))
        fail("unit law", nm(*unit_) + "*" + nm(i) + " = " + format(product(u, b)) + ", " + nm(i) + "*" +
                             nm(*unit_) + " = " + format(product(b, u)));
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const Element bi = basis_vector(i);
      const Element bj = basis_vector(j);
      const Element ij = product(bi, bj);
      ++report.checks;
      if (off_degree(ij, degrees_[i] + degrees_[j]))
        fail("product respects degree", nm(i) + "*" + nm(j) + " = " + format(ij));
      if (j >= i) {
        const int sign = (degrees_[i] * degrees_[j]) % 2 == 0 ? 1 : -1;
        const Element ji = product(bj, bi);
        ++report.checks;
        if (!equal(ij, scale(sign, ji)))
          fail("graded commutativity",
               nm(i) + "*" + nm(j) + " = " + format(ij) + " but " + nm(j) + "*" + nm(i) + " = " + format(ji));
      }
      for (std::size_t k = 0; k < m; ++k) {
        const Element bk = basis_vector(k);
        const Element left = product(ij, bk);
        const Element right = product(bi, product(bj, bk));
        ++report.checks;
        if (!equal(left, right))
          fail("associativity", "(" + nm(i) + "*" + nm(j) + ")*" + nm(k) + " = " + format(left) + " but " + nm(i) +
                                    "*(" + nm(j) + "*" + nm(k) + ") = " + format(right));
      }
    }
  }
  return report;
}

SpaceHandle make_finite_table_space(SpaceSpec spec, std::string name) {
  return std::make_shared<const FiniteTableSpace>(std::move(spec), std::move(name));
}

SpaceHandle scalar_line() {
  static const SpaceHandle line = [] {
    SpaceSpec spec;
    spec.basis = {{"1", 0}};
    spec.unit = "1";
    spec.product = {{"1", "1", {{"1", 1}}}};
    spec.expectation = {{"1", 1}};
    return make_finite_table_space(std::move(spec), "scalar line");
  }();
  return line;
}

Element scalar_element(const Rational& c) { return TableVector{{c}}; }

Rational scalar_value(const Element& e) {
  const auto* v = std::get_if<TableVector>(&e);
  if (v == nullptr || v->coeffs.size() != 1) throw SpaceMismatchError("expected a scalar-line element");
  return v->coeffs[0];
}

SpaceHandle trivial_space(std::vector<int> degrees) {
  SpaceSpec spec;
  for (std::size_t i = 0; i < degrees.size(); ++i) spec.basis.push_back({"b" + std::to_string(i + 1), degrees[i]});
  return make_finite_table_space(std::move(spec), "Q^" + std::to_string(degrees.size()));
}

ValidationReport validate_space(const SpaceSpec& spec) { return FiniteTableSpace(spec).check_axioms(0); }

ValidationReport validate_space(const SpaceHandle& space, std::uint64_t seed) { return space->check_axioms(seed); }

SpaceSpec fixture_space_spec() {
  SpaceSpec spec;
  spec.basis = {{"u", 0}, {"v", 0}, {"w", 1}};
  spec.unit = "u";
  spec.product = {{"v", "v", {{"u", 1}}}, {"v", "w", {{"w", 1}}}};
  spec.differential = {{"v", {{"w", 1}}}};
  spec.expectation = {{"u", 1}};
  return spec;
}

// ---------------------------------------------------------------------------
// Random spaces

namespace {

using Matrix = std::vector<std::vector<Rational>>;

Matrix invert(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) throw std::logic_error("singular change of basis");
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    const Rational p = a[col][col];
    for (std::size_t k = 0; k < n; ++k) {
      a[col][k] /= p;
      inv[col][k] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= f * a[col][k];
        inv[r][k] -= f * inv[col][k];
      }
    }
  }
  return inv;
}

std::vector<Term> to_terms(const FiniteTableSpace& space, const std::vector<Rational>& coeffs) {
  std::vector<Term> out;
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    if (coeffs[k] != 0) out.push_back({space.basis_name(k), coeffs[k]});
  return out;
}

// Re-express `base` in the basis given by the columns of `change`
// (change[i][j] = coefficient of old b_i in new b_j).
SpaceSpec change_basis(const SpaceSpec& base, const Matrix& change) {
  const FiniteTableSpace old(base);
  const std::size_t m = old.dimension();
  const Matrix inv = invert(change);
  auto new_vector = [&](std::size_t j) {
    TableVector v{std::vector<Rational>(m)};
    for (std::size_t i = 0; i < m; ++i) v.coeffs[i] = change[i][j];
    return Element(v);
  };
  auto to_new = [&](const Element& e) {
    const auto& v = std::get<TableVector>(e);
    std::vector<Rational> out(m);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t i = 0; i < m; ++i) out[r] += inv[r][i] * v.coeffs[i];
    return out;
  };
  SpaceSpec spec;
  spec.basis = base.basis;
  spec.unit = base.unit;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      auto out = to_terms(old, to_new(old.product(new_vector(i), new_vector(j))));
      spec.product.push_back({old.basis_name(i), old.basis_name(j), std::move(out)});
    }
    auto d = to_terms(old, to_new(old.differential(new_vector(i))));
    if (!d.empty()) spec.differential.push_back({old.basis_name(i), std::move(d)});
    const Rational e = old.expectation(new_vector(i));
    if (e != 0) spec.expectation.push_back({old.basis_name(i), e});
  }
  return spec;
}

}  // namespace

SpaceSpec random_space_spec(Rng& rng) {
  auto nz = [&] { return random_coefficient(rng, true); };
  auto any = [&] { return random_coefficient(rng); };
  SpaceSpec base;
  base.unit = "u";
  switch (uniform_int(rng, 0, 2)) {
    case 0: {
      // Q[v]/(v^2 - beta v - alpha) acting on w through the character v -> chi.
      const Rational chi = any(), beta = any();
      const Rational alpha = chi * chi - beta * chi;
      base.basis = {{"u", 0}, {"v", 0}, {"w", 1}};
      base.product = {{"v", "v", {{"u", alpha}, {"v", beta}}}, {"v", "w", {{"w", chi}}}};
      base.differential = {{"u", {{"w", any()}}}, {"v", {{"w", nz()}}}};
      base.expectation = {{"u", nz()}, {"v", any()}};
      break;
    }
    case 1: {
      // Square-zero ideal (v, y) with w annihilated by it.
      base.basis = {{"u", 0}, {"v", 0}, {"y", 0}, {"w", 1}};
      base.differential = {{"u", {{"w", any()}}}, {"v", {{"w", nz()}}}, {"y", {{"w", any()}}}};
      base.expectation = {{"u", nz()}, {"v", any()}, {"y", any()}};
      break;
    }
    default: {
      // Odd pair z (degree -1), w (degree 1) with z*w = c v, v^2 = 0.
      const Rational alpha = nz(), beta = any(), s = nz(), t = nz();
      base.basis = {{"u", 0}, {"v", 0}, {"z", -1}, {"w", 1}};
      base.product = {{"z", "w", {{"v", any()}}}};
      base.differential = {{"z", {{"u", alpha}, {"v", beta}}}, {"u", {{"w", beta * s}}}, {"v", {{"w", -alpha * s}}}};
      base.expectation = {{"u", beta * t}, {"v", -alpha * t}};
      break;
    }
  }
  // Unipotent change of basis inside each degree, fixing the unit.
  const std::size_t m = base.basis.size();
  Matrix change(m, std::vector<Rational>(m));
  for (std::size_t i = 0; i < m; ++i) change[i][i] = 1;
  for (std::size_t j = 1; j < m; ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (base.basis[i].degree == base.basis[j].degree) change[i][j] = any();
  SpaceSpec spec = change_basis(base, change);
  if (!validate_space(spec).valid()) throw std::logic_error("random space generator produced an invalid space");
  return spec;
}

}  // namespace hpt
